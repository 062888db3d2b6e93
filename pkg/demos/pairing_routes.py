"""
Pair partitions and solver routes
=================================

A pairing instance asks for 2^(n-1) disjoint pairs of distinct n-bit
vectors whose XORs equal the given targets.  solve_pairing picks a
route from the structure of the targets; this script provokes each
constructive route in turn, then compares against the exact solver.
"""

from setseq import (
    PairingInstance,
    exact_pairing_solver,
    format_partition,
    partition_errors,
    solve_pairing,
)


def show(label, inst, head=4):
    part, route = solve_pairing(inst)
    assert not partition_errors(inst, part)
    lines = format_partition(part).splitlines()
    print(f"{label}: n={inst.n}, {len(lines)} pairs, route={route.tag}")
    for line in lines[:head]:
        print("   ", line)
    if len(lines) > head:
        print(f"    ... {len(lines) - head} more")
    print()


# Targets inside a low-dimensional span (here dim 2).
show(
    "low span",
    PairingInstance.of(4, [0b0011, 0b0011, 0b0101, 0b0101, 0b0110, 0b0110, 0b0011, 0b0011]),
)

# Exactly six dimensions of span, every target an even number of times.
basis6 = [1, 2, 4, 8, 16, 32]
extras = [3, 5, 9, 17, 33, 6, 10, 18, 34, 12]
show("six-dim even", PairingInstance.of(6, [v for v in basis6 + extras for _ in (0, 1)]))

# At most n distinct values, but spanning too much for the coset routes.
counts = dict.fromkeys([1, 2, 4, 8, 16, 32, 64], 10)
counts[64] = 4
show("few values", PairingInstance.of(7, [v for v, c in counts.items() for _ in range(c)]))

# The exact backtracking solver takes anything small, route or no route.
tiny = PairingInstance.of(2, [0b01, 0b01])
print("exact solver on the smallest instance:")
print(format_partition(exact_pairing_solver(tiny)), end="")
