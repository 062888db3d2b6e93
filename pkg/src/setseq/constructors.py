"""Labeled-tree construction pipelines.

Three ways to manufacture verified set-sequential labelings:

* add_pendants doubles a labeled tree by hanging 2^(n-1) new pendant edges
  on chosen anchors; the fresh vertex/edge labels come from a pair
  partition of F_2^n whose targets are the anchor labels.
* label_small_diameter and label_large_caterpillar drive add_pendants
  inductively: halve the target caterpillar down to a bundled base
  labeling (small diameters) or strip one end bare and recurse (large
  vertex counts), then rebuild level by level.
* four_copies quadruples a labeled tree by threading a prefix/suffix
  sequence along the doubled leaf-to-leaf path and propagating two-bit
  prefixes outward over the four copies.

Every pipeline re-verifies its output and raises InternalSearchFailed
rather than returning anything unchecked.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

from .errors import (
    InternalSearchFailed,
    InvalidPath,
    NotCovered,
    NotLeaf,
    NotOddDegree,
    NotPowerOfTwo,
    OutOfRange,
    PairingNotCovered,
    PlanSizeMismatch,
    PreconditionViolated,
    TargetSumNonzero,
    TooFewVertices,
    TooSmall,
    Unsolvable,
)
from .gf2 import BitVec, echelon_basis
from .pairing import PairingInstance, solve_pairing
from .trees import (
    CaterpillarSpec,
    Labeling,
    Tree,
    build_caterpillar,
    tree_from_json,
    verify_set_sequential,
)

__all__ = [
    "PREFIX_MAP",
    "SPAN_DIM_CAP",
    "MAX_SMALL_DIAMETER",
    "BASE_CATERPILLARS",
    "PendantPlan",
    "WSequence",
    "InductionStep",
    "fixtures_dir",
    "load_fixture",
    "add_pendants",
    "label_small_diameter",
    "label_large_caterpillar",
    "solve_w_prefixes",
    "build_w_sequence",
    "four_copies",
]

#: The fixed two-bit prefix propagation map for four_copies.  Both it and
#: p -> p ^ PREFIX_MAP[p] are bijections on F_2^2, which is exactly what
#: makes the four copies of every off-path value pairwise distinct.
PREFIX_MAP = {0b00: 0b00, 0b01: 0b10, 0b10: 0b11, 0b11: 0b01}

#: Hard ceiling on dim(span(center-path labels)) across every halving
#: induction step; exceeding it means the construction left its theory.
SPAN_DIM_CAP = 6

#: Largest diameter label_small_diameter covers.
MAX_SMALL_DIAMETER = 18

#: Degree lists of the bundled base-case labelings, generated once by the
#: greedy search (seed 0) and shipped as fixture files.
BASE_CATERPILLARS = (
    (1,),
    (5, 3, 3, 3, 3, 3),
    (3, 5, 3, 3, 3, 3),
    (3, 3, 5, 3, 3, 3),
    (3, 3, 3, 3, 3, 3, 3),
    (3, 3, 3, 2, 2, 2, 2, 2, 2, 3),
    (3, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2),
    (2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2),
)

#: Fixture degree lists the halving recursion sheds toward at 32 vertices,
#: keyed by target diameter.
_SHED_TARGETS = {
    11: (3, 3, 3, 2, 2, 2, 2, 2, 2, 3),
    12: (3, 3, 3, 2, 2, 2, 2, 2, 2, 3),
    13: (3, 3, 3, 2, 2, 2, 2, 2, 2, 3),
    14: (3, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2),
    15: (2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2),
    16: (2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2),
}


# ---------------------------------------------------------------------------
# fixtures


def fixtures_dir() -> Path:
    """Directory holding the bundled labelings; SETSEQ_FIXTURES overrides."""
    override = os.environ.get("SETSEQ_FIXTURES")
    if override:
        return Path(override)
    return Path(str(resources.files("setseq").joinpath("fixtures")))


def load_fixture(name: str) -> tuple[Tree, Labeling]:
    """Load and re-verify a bundled labeled tree by file name."""
    path = fixtures_dir() / name
    try:
        text = path.read_text()
    except OSError as exc:
        raise PreconditionViolated(f"cannot read fixture {path}: {exc}") from exc
    try:
        tree, lab = tree_from_json(text)
    except ValueError as exc:
        raise PreconditionViolated(f"fixture {name} is malformed: {exc}") from exc
    if lab is None:
        raise PreconditionViolated(f"fixture {name} carries no labels")
    report = verify_set_sequential(tree, lab)
    if not report.valid:
        raise PreconditionViolated(
            f"fixture {name} does not verify: "
            + "; ".join(str(v) for v in report.violations)
        )
    return tree, lab


def _load_base_caterpillar(degrees: tuple[int, ...]) -> tuple[Tree, Labeling, list[int]]:
    """Fixture tree, labeling, and center path ids for a base degree list.

    Accepts the stored orientation or its reversal; the returned center ids
    follow the caller's orientation either way.
    """
    if degrees in BASE_CATERPILLARS:
        stored, flipped = degrees, False
    else:
        stored, flipped = degrees[::-1], True
    spec = CaterpillarSpec(stored)
    tree, lab = load_fixture(f"{spec}.json")
    if tree != build_caterpillar(spec):
        raise PreconditionViolated(
            f"fixture for {spec} does not use the canonical vertex numbering"
        )
    center = list(range(len(degrees)))
    return tree, lab, center[::-1] if flipped else center


# ---------------------------------------------------------------------------
# pendant-edge induction


@dataclass(frozen=True)
class PendantPlan:
    """How many pendant edges to hang on which vertices of a base tree."""

    anchors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for vid, count in self.anchors:
            if vid < 0:
                raise PreconditionViolated(f"negative anchor id {vid}")
            if count < 1:
                raise PreconditionViolated(f"anchor {vid} has count {count} < 1")
            if vid in seen:
                raise PreconditionViolated(f"anchor {vid} listed twice")
            seen.add(vid)

    @classmethod
    def parse(cls, text: str) -> PendantPlan:
        """Parse the CLI form "id:count,id:count,...". """
        anchors: list[tuple[int, int]] = []
        for part in text.split(","):
            head, sep, tail = part.strip().partition(":")
            if not sep:
                raise ValueError(f"expected id:count, got {part.strip()!r}")
            try:
                anchors.append((int(head), int(tail)))
            except ValueError as exc:
                raise ValueError(f"bad id:count pair {part.strip()!r}") from exc
        return cls(tuple(anchors))

    def total(self) -> int:
        return sum(count for _, count in self.anchors)


def add_pendants(base: Tree, lab: Labeling, plan: PendantPlan) -> tuple[Tree, Labeling]:
    """Double a verified labeling by hanging plan.total() pendant edges.

    Old labels get a 0 prefix; the i-th new pendant vertex and edge get
    1p_i and 1q_i where (p_i, q_i) is the i-th pair of a partition of
    F_2^n targeted at the anchor labels.  New pendant ids start at
    |V(base)| and follow the plan's anchor order.
    """
    report = verify_set_sequential(base, lab)
    if not report.valid:
        raise PreconditionViolated("base labeling does not verify")
    for vid, _ in plan.anchors:
        if vid >= base.vertex_count:
            raise PreconditionViolated(f"anchor {vid} is not a vertex of the base")
    n = lab.n
    if plan.total() != 1 << (n - 1):
        raise PlanSizeMismatch(
            f"pendant counts sum to {plan.total()}, need 2^{n - 1} = {1 << (n - 1)}"
        )
    targets = [
        lab.vertex_labels[vid].bits for vid, count in plan.anchors for _ in range(count)
    ]
    acc = 0
    for t in targets:
        acc ^= t
    if acc:
        raise TargetSumNonzero(f"anchor labels XOR to {acc:0{n}b}, not zero")
    try:
        part, _route = solve_pairing(PairingInstance.of(n, targets))
    except NotCovered as exc:
        raise PairingNotCovered(str(exc)) from exc
    edges = list(base.edges)
    labels = {v: x.prepend(0) for v, x in lab.vertex_labels.items()}
    nxt = base.vertex_count
    for (p, _q), (vid, _) in zip(
        part.pairs, (a for a in plan.anchors for _ in range(a[1]))
    ):
        edges.append((vid, nxt))
        labels[nxt] = p.prepend(1)
        nxt += 1
    out_tree = Tree.of(nxt, edges)
    out_lab = Labeling(n + 1, labels)
    check = verify_set_sequential(out_tree, out_lab)
    if not check.valid:
        raise InternalSearchFailed(
            "pendant construction produced an invalid labeling: "
            + "; ".join(str(v) for v in check.violations)
        )
    return out_tree, out_lab


# ---------------------------------------------------------------------------
# caterpillar halving recursions


@dataclass(frozen=True)
class InductionStep:
    """One rebuild level, reported to label_small_diameter observers."""

    degrees: tuple[int, ...]
    anchor_span_dim: int


def _pendant_neighbors(t: Tree, vertex: int) -> list[int]:
    deg = t.degrees()
    return sorted(x for x in t.adjacency()[vertex] if deg[x] == 1)


def _greedy_shed(degrees: tuple[int, ...], caps: list[int], amount: int) -> list[int]:
    """Removal counts per center position, largest degrees drained first."""
    removals = [0] * len(degrees)
    rest = amount
    for i in sorted(range(len(degrees)), key=lambda i: (-degrees[i], i)):
        take = min(caps[i], rest)
        removals[i] = take
        rest -= take
        if not rest:
            break
    if rest:
        raise InternalSearchFailed(
            f"cannot shed {amount} pendant edges from {list(degrees)}"
        )
    return removals


def _odd_shed(degrees: tuple[int, ...]) -> list[int]:
    """Even removal counts taking the vertex count to half, degrees kept odd.

    Prefers leaving every center endpoint with its pendants (so the
    diameter survives); lets endpoints collapse to path leaves only when
    the interior cannot absorb the deficit.
    """
    k = len(degrees)
    count = sum(degrees) - k + 2
    half = count // 2
    keep = [d - 3 for d in degrees]
    if sum(c for c in keep if c > 0) >= half:
        caps = [max(c, 0) for c in keep]
    else:
        caps = [
            d - 1 if i in (0, k - 1) or k == 1 else d - 3
            for i, d in enumerate(degrees)
        ]
        caps = [max(c, 0) for c in caps]
    return _greedy_shed(degrees, caps, half)


def _fixture_shed(degrees: tuple[int, ...], target: tuple[int, ...]) -> list[int]:
    """Removals taking a 32-vertex caterpillar onto a padded base fixture."""
    k = len(degrees)
    pads = k - len(target)
    splits = [(pads - r, r) for r in range(pads + 1) if pads - r <= 1 and r <= 1]
    for stored in (target, target[::-1]):
        for left, right in splits:
            padded = (1,) * left + stored + (1,) * right
            if all(c >= p for c, p in zip(degrees, padded)):
                return [c - p for c, p in zip(degrees, padded)]
    raise InternalSearchFailed(
        f"no padding of {list(target)} fits under {list(degrees)}"
    )


def _strip_pads(padded: list[int]) -> tuple[tuple[int, ...], bool, bool]:
    left = len(padded) > 1 and padded[0] == 1
    right = len(padded) > 1 and padded[-1] == 1
    core = padded[1 if left else 0 : len(padded) - 1 if right else len(padded)]
    return tuple(core), left, right


def _rebuild_level(
    degrees: tuple[int, ...],
    removals: list[int],
    smaller: tuple[Tree, Labeling, list[int]],
    pads: tuple[bool, bool],
    observer: Callable[[InductionStep], None] | None,
    span_cap: int | None,
) -> tuple[Tree, Labeling, list[int]]:
    """Hang the removed pendants back onto the smaller labeled caterpillar.

    Returns the bigger tree, its labeling, and its center path vertex ids
    (the smaller's padded center, whose ids survive add_pendants).
    """
    sub_tree, sub_lab, sub_center = smaller
    left_pad, right_pad = pads
    center_ids: list[int] = list(sub_center)
    taken: set[int] = set()
    if left_pad:
        leaf = _pendant_neighbors(sub_tree, sub_center[0])[0]
        taken.add(leaf)
        center_ids.insert(0, leaf)
    if right_pad:
        options = [
            x for x in _pendant_neighbors(sub_tree, sub_center[-1]) if x not in taken
        ]
        center_ids.append(options[0])
    if len(center_ids) != len(degrees):
        raise InternalSearchFailed("padded center does not match the target length")

    span = echelon_basis(
        [sub_lab.vertex_labels[v].bits for v in center_ids], sub_lab.n
    ).rank
    if span_cap is not None and span > span_cap:
        raise InternalSearchFailed(
            f"center-path span dimension {span} exceeds the cap {span_cap}"
        )
    if observer is not None:
        observer(InductionStep(degrees, span))

    plan = PendantPlan(
        tuple(
            (center_ids[i], removals[i])
            for i in range(len(degrees))
            if removals[i] > 0
        )
    )
    tree, lab = add_pendants(sub_tree, sub_lab, plan)
    return tree, lab, center_ids


def _small_rec(
    degrees: tuple[int, ...], observer: Callable[[InductionStep], None] | None
) -> tuple[Tree, Labeling, list[int]]:
    if degrees in BASE_CATERPILLARS or degrees[::-1] in BASE_CATERPILLARS:
        return _load_base_caterpillar(degrees)
    spec = CaterpillarSpec(degrees)
    if spec.vertex_count == 32 and spec.diameter >= 11:
        removals = _fixture_shed(degrees, _SHED_TARGETS[spec.diameter])
    else:
        removals = _odd_shed(degrees)
    padded = [d - r for d, r in zip(degrees, removals)]
    core, left, right = _strip_pads(padded)
    smaller = _small_rec(core, observer)
    return _rebuild_level(
        degrees, removals, smaller, (left, right), observer, SPAN_DIM_CAP
    )


def _validate_odd_power(spec: CaterpillarSpec) -> int:
    if any(d % 2 == 0 for d in spec.degrees):
        raise NotOddDegree(
            f"{spec} has even center degrees at positions "
            f"{[i for i, d in enumerate(spec.degrees) if d % 2 == 0]}"
        )
    count = spec.vertex_count
    if count & (count - 1):
        raise NotPowerOfTwo(f"{spec} has {count} vertices")
    return count


def label_small_diameter(
    spec: CaterpillarSpec,
    observer: Callable[[InductionStep], None] | None = None,
) -> tuple[Tree, Labeling]:
    """Verified labeling of an all-odd caterpillar with diameter <= 18.

    Works down from the target: repeatedly remove half the vertices as
    pendant edges of the center path (landing on a bundled base labeling),
    then rebuild upward with add_pendants, anchoring only center-path
    vertices.  The dimension of the span of the center-path labels is
    measured at every rebuild step (reported to the observer, if any) and
    must stay within SPAN_DIM_CAP.
    """
    _validate_odd_power(spec)
    if spec.diameter > MAX_SMALL_DIAMETER:
        raise OutOfRange(
            f"{spec} has diameter {spec.diameter} > {MAX_SMALL_DIAMETER}"
        )
    tree, lab, _center = _small_rec(spec.degrees, observer)
    return tree, lab


def _large_rec(degrees: tuple[int, ...]) -> tuple[Tree, Labeling, list[int]]:
    spec = CaterpillarSpec(degrees)
    if spec.diameter <= 2 or degrees in BASE_CATERPILLARS or degrees[::-1] in BASE_CATERPILLARS:
        return _small_rec(degrees, None)
    if degrees[0] > degrees[-1]:
        tree, lab, center = _large_rec(degrees[::-1])
        return tree, lab, center[::-1]
    k = len(degrees)
    half = spec.vertex_count // 2
    removals = [0] * k
    removals[0] = degrees[0] - 1
    rest = half - removals[0]
    if rest < 0:
        raise InternalSearchFailed(
            f"first vertex of {list(degrees)} holds more than half the tree"
        )
    if rest:
        keep = [0] + [d - 3 for d in degrees[1:]]
        if sum(c for c in keep if c > 0) >= rest:
            caps = [max(c, 0) for c in keep]
        else:
            caps = [max(c, 0) for c in keep[:-1]] + [degrees[-1] - 1]
        extra = _greedy_shed(degrees, caps, rest)
        removals = [r + e for r, e in zip(removals, extra)]
    padded = [d - r for d, r in zip(degrees, removals)]
    core, left, right = _strip_pads(padded)
    smaller = _large_rec(core)
    return _rebuild_level(degrees, removals, smaller, (left, right), None, None)


def label_large_caterpillar(spec: CaterpillarSpec) -> tuple[Tree, Labeling]:
    """Verified labeling of an all-odd caterpillar with |V| >= 2^(diam-1).

    Strips every pendant edge off the lighter end vertex (plus further
    pendant pairs, degrees kept odd) to halve the tree, recurses, and
    rebuilds; the anchor labels form at most n distinct pairing targets,
    which is what keeps every rebuild solvable.
    """
    count = _validate_odd_power(spec)
    if count < 1 << (spec.diameter - 1):
        raise TooFewVertices(
            f"{spec} has {count} vertices, needs at least 2^{spec.diameter - 1}"
        )
    tree, lab, _center = _large_rec(spec.degrees)
    return tree, lab


# ---------------------------------------------------------------------------
# the four-copies composition


def _w_layout(k: int) -> list[int]:
    """Suffix source at each of the 4k+3 sequence positions.

    Entries are 1-based indices into the path labels z, with 0 marking the
    three all-zero separator suffixes.  The four blocks read: z reversed;
    separator; z forward with the last two indices swapped; separator;
    the third block pattern (k-1, k, k-2 .. 3, 1, 2); separator; and z
    forward with the first two indices swapped.
    """
    out = list(range(k, 0, -1))
    out.append(0)
    out += list(range(1, k - 1)) + [k, k - 1]
    out.append(0)
    out += [k - 1, k] + list(range(k - 2, 2, -1)) + [1, 2]
    out.append(0)
    out += [2, 1] + list(range(3, k + 1))
    return out


#: Fixed two-bit prefixes of the three separator rows, by 0-based position.
def _fixed_prefixes(k: int) -> dict[int, int]:
    return {k: 0b10, 2 * k + 1: 0b11, 3 * k + 2: 0b01}


@dataclass(frozen=True)
class WSequence:
    """The 4k+3 labels threading four tree copies along their long path.

    Validates every structural invariant on construction: the alternating
    chain w[2i-1] = w[2i-2] xor w[2i] (1-based), global distinctness, the
    fixed separator rows, and all four prefixes on each suffix group.
    """

    k: int
    z: tuple[BitVec, ...]
    prefixes: tuple[int, ...]
    w: tuple[BitVec, ...]

    def __post_init__(self) -> None:
        k = self.k
        if k < 5 or k % 2 == 0:
            raise PreconditionViolated(f"k must be odd and >= 5, got {k}")
        if len(self.z) != k or len(self.prefixes) != 4 * k + 3 or len(self.w) != 4 * k + 3:
            raise PreconditionViolated("w-sequence field lengths disagree with k")
        n = self.z[0].dim
        layout = _w_layout(k)
        for j, (p, vec) in enumerate(zip(self.prefixes, self.w)):
            if not 0 <= p < 4:
                raise PreconditionViolated(f"prefix {p} at position {j} is not two bits")
            suffix = self.z[layout[j] - 1].bits if layout[j] else 0
            if vec.dim != n + 2 or vec.bits != (p << n) | suffix:
                raise PreconditionViolated(f"w[{j}] does not match its prefix/suffix")
        for pos, want in _fixed_prefixes(k).items():
            if self.prefixes[pos] != want:
                raise PreconditionViolated(
                    f"separator prefix at position {pos} is {self.prefixes[pos]:02b}, "
                    f"not {want:02b}"
                )
        for a in range(0, 4 * k + 1, 2):
            if self.w[a].bits ^ self.w[a + 2].bits != self.w[a + 1].bits:
                raise PreconditionViolated(f"chain relation fails at positions {a}..{a + 2}")
        if len({vec.bits for vec in self.w}) != 4 * k + 3:
            raise PreconditionViolated("w-sequence values are not distinct")
        groups: dict[int, set[int]] = {}
        for j, s in enumerate(layout):
            if s:
                groups.setdefault(s, set()).add(self.prefixes[j])
        if any(g != {0, 1, 2, 3} for g in groups.values()):
            raise PreconditionViolated("some suffix group misses a prefix")


def solve_w_prefixes(k: int) -> list[int]:
    """Two-bit prefixes for the 4k+3 sequence positions, by backtracking.

    Free choices are the first position and the non-separator even
    (1-based) positions; each odd position after the first is forced by
    the chain relation.  Within each suffix group the four prefixes must
    be pairwise distinct, which alongside the separators pins the search.
    """
    if k < 5 or k % 2 == 0:
        raise PreconditionViolated(f"k must be odd and >= 5, got {k}")
    layout = _w_layout(k)
    fixed = _fixed_prefixes(k)
    total = 4 * k + 3
    out = [-1] * total
    group_mask = [0] * (k + 1)

    def place(pos: int, val: int) -> bool:
        want = fixed.get(pos)
        if want is not None and val != want:
            return False
        g = layout[pos]
        if g:
            bit = 1 << val
            if group_mask[g] & bit:
                return False
            group_mask[g] |= bit
        out[pos] = val
        return True

    def unplace(pos: int) -> None:
        g = layout[pos]
        if g:
            group_mask[g] &= ~(1 << out[pos])
        out[pos] = -1

    def rec(a: int) -> bool:
        if a == total - 1:
            return True
        choices = (fixed[a + 1],) if a + 1 in fixed else (0, 1, 2, 3)
        for val in choices:
            if not place(a + 1, val):
                continue
            if place(a + 2, out[a] ^ val):
                if rec(a + 2):
                    return True
                unplace(a + 2)
            unplace(a + 1)
        return False

    for first in range(4):
        if place(0, first):
            if rec(0):
                return out
            unplace(0)
    raise Unsolvable(f"no admissible prefix assignment for k={k}")


def build_w_sequence(z: Sequence[BitVec], prefixes: Sequence[int]) -> WSequence:
    """Assemble and validate the 4k+3 vectors from path labels and prefixes.

    z must alternate vertex and edge labels of one path: z[2i-1] is the
    XOR of its neighbors z[2i-2] and z[2i] (0-based), all entries nonzero.
    """
    k = len(z)
    if k < 5 or k % 2 == 0:
        raise PreconditionViolated(f"need an odd number of path labels >= 5, got {k}")
    n = z[0].dim
    if any(x.dim != n for x in z):
        raise PreconditionViolated("path labels must share one dimension")
    if any(x.bits == 0 for x in z):
        raise InvalidPath("zero label on the path")
    for a in range(0, k - 2, 2):
        if z[a].bits ^ z[a + 2].bits != z[a + 1].bits:
            raise InvalidPath(
                f"path labels break the chain at entries {a}..{a + 2}"
            )
    if len(prefixes) != 4 * k + 3:
        raise PreconditionViolated(
            f"need {4 * k + 3} prefixes for k={k}, got {len(prefixes)}"
        )
    layout = _w_layout(k)
    w = tuple(
        BitVec((prefixes[j] << n) | (z[s - 1].bits if s else 0), n + 2)
        for j, s in enumerate(layout)
    )
    return WSequence(k, tuple(z), tuple(prefixes), w)


def _path_between(t: Tree, u: int, v: int) -> list[int]:
    adj = t.adjacency()
    parent = {u: u}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            break
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                queue.append(y)
    path = [v]
    while path[-1] != u:
        path.append(parent[path[-1]])
    return path[::-1]


def four_copies(base: Tree, lab: Labeling, u: int, v: int) -> tuple[Tree, Labeling]:
    """Verified labeling of four disjoint copies of base plus three bridges.

    The copies T1..T4 are joined by edges (u1,u2), (v2,v3), (u3,u4); the
    w-sequence labels the path from v1 to v4, and every off-path vertex r
    takes the prefix PREFIX_MAP[p] over its base label, where p is the
    prefix of its neighbor one step closer to the path.
    """
    if base.vertex_count < 3:
        raise TooSmall("base must have at least 3 vertices")
    if not (0 <= u < base.vertex_count and 0 <= v < base.vertex_count) or u == v:
        raise PreconditionViolated("u and v must be distinct vertices of the base")
    deg = base.degrees()
    if deg[u] != 1 or deg[v] != 1:
        raise NotLeaf(f"u and v must have degree 1, got {deg[u]} and {deg[v]}")
    report = verify_set_sequential(base, lab)
    if not report.valid:
        raise PreconditionViolated("base labeling does not verify")

    path = _path_between(base, u, v)
    z: list[BitVec] = []
    for i, x in enumerate(path):
        if i:
            z.append(lab.vertex_labels[path[i - 1]] ^ lab.vertex_labels[x])
        z.append(lab.vertex_labels[x])
    seq = build_w_sequence(z, solve_w_prefixes(len(z)))

    n = lab.n
    count = base.vertex_count
    edges: list[tuple[int, int]] = []
    for c in range(4):
        for a, b in base.edges:
            edges.append((c * count + a, c * count + b))
    edges += [(u, count + u), (count + v, 2 * count + v), (2 * count + u, 3 * count + u)]

    labels: dict[int, BitVec] = {}
    walk = path[::-1] + path + path[::-1] + path
    span = len(path)
    for s, x in enumerate(walk):
        labels[(s // span) * count + x] = seq.w[2 * s]

    # Propagate prefixes outward from the path, one BFS layer at a time.
    parent: dict[int, int] = {}
    order: list[int] = []
    adj = base.adjacency()
    queue = deque(path)
    seen = set(path)
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                parent[y] = x
                order.append(y)
                queue.append(y)
    for r in order:
        q = parent[r]
        for c in range(4):
            p = labels[c * count + q].bits >> n
            labels[c * count + r] = BitVec(
                (PREFIX_MAP[p] << n) | lab.vertex_labels[r].bits, n + 2
            )

    out_tree = Tree.of(4 * count, edges)
    out_lab = Labeling(n + 2, labels)
    check = verify_set_sequential(out_tree, out_lab)
    if not check.valid:
        raise InternalSearchFailed(
            "four-copies construction produced an invalid labeling: "
            + "; ".join(str(x) for x in check.violations)
        )
    return out_tree, out_lab
