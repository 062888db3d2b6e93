"""Word-packed GF(2) vector arithmetic and linear algebra.

Conventions
-----------
A vector in F_2^n is a Python int: coordinate j (1-based, as printed) lives
at bit position n-1-j, so the leftmost character of the printed bitstring
is the most significant stored bit.  Vector addition is XOR.  Dimensions
are capped at MAX_DIM so full-space enumeration tables stay desk sized.

Containers keep raw ints for speed and expose BitVec views at the edges;
hot solver loops work on ints exclusively.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NoSuchSubset, NotFullRank, PreconditionViolated

MAX_DIM = 30


def _check_dim(dim: int) -> None:
    if not 1 <= dim <= MAX_DIM:
        raise PreconditionViolated(f"dimension must be in 1..{MAX_DIM}, got {dim}")


def _check_value(bits: int, dim: int) -> None:
    if not 0 <= bits < (1 << dim):
        raise PreconditionViolated(f"value {bits} out of range for dimension {dim}")


@dataclass(frozen=True)
class BitVec:
    """A fixed-width vector over GF(2)."""

    bits: int
    dim: int

    def __post_init__(self) -> None:
        _check_dim(self.dim)
        _check_value(self.bits, self.dim)

    @classmethod
    def parse(cls, text: str, dim: int | None = None) -> BitVec:
        """Parse a fixed-width bitstring such as "0111".

        If dim is given, the text must have exactly that width.
        """
        if not text or any(c not in "01" for c in text):
            raise PreconditionViolated(f"not a bitstring: {text!r}")
        if dim is not None and len(text) != dim:
            raise PreconditionViolated(
                f"expected width {dim}, got {len(text)}: {text!r}"
            )
        return cls(int(text, 2), len(text))

    def __str__(self) -> str:
        return format(self.bits, f"0{self.dim}b")

    def __xor__(self, other: BitVec) -> BitVec:
        if self.dim != other.dim:
            raise PreconditionViolated(
                f"dimension mismatch: {self.dim} vs {other.dim}"
            )
        return BitVec(self.bits ^ other.bits, self.dim)

    def prepend(self, bit: int) -> BitVec:
        """Concatenate one new leading coordinate (the new most significant bit)."""
        if bit not in (0, 1):
            raise PreconditionViolated(f"bit must be 0 or 1, got {bit}")
        return BitVec(self.bits | (bit << self.dim), self.dim + 1)

    def concat(self, other: BitVec) -> BitVec:
        return BitVec((self.bits << other.dim) | other.bits, self.dim + other.dim)


@dataclass(frozen=True)
class VectorMultiset:
    """An ordered multiset of vectors sharing one dimension.

    Values are stored as raw ints; the items property yields BitVec views.
    """

    dim: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_dim(self.dim)
        for v in self.values:
            _check_value(v, self.dim)

    @classmethod
    def of(cls, dim: int, values: Iterable[int | BitVec]) -> VectorMultiset:
        out: list[int] = []
        for v in values:
            out.append(v.bits if isinstance(v, BitVec) else v)
        return cls(dim, tuple(out))

    @property
    def items(self) -> tuple[BitVec, ...]:
        return tuple(BitVec(v, self.dim) for v in self.values)

    def __len__(self) -> int:
        return len(self.values)

    def histogram(self) -> dict[int, int]:
        """Multiplicity of each distinct value, keys in ascending order."""
        out: dict[int, int] = {}
        for v in sorted(self.values):
            out[v] = out.get(v, 0) + 1
        return out

    def xor_sum(self) -> int:
        total = 0
        for v in self.values:
            total ^= v
        return total


@dataclass(frozen=True)
class Basis:
    """Linearly independent rows in row-echelon form.

    Leading bit positions are strictly decreasing down the rows, which makes
    membership tests and coordinate extraction single forward scans.
    """

    dim: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_dim(self.dim)
        prev = self.dim
        for r in self.rows:
            _check_value(r, self.dim)
            if r == 0:
                raise PreconditionViolated("zero row in basis")
            lead = r.bit_length() - 1
            if lead >= prev:
                raise PreconditionViolated("rows not in strictly decreasing leading-bit order")
            prev = lead

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, x: int) -> int:
        """Residual of x after forward elimination; 0 iff x is in the span."""
        for r in self.rows:
            if x ^ r < x:
                x ^= r
        return x

    def __contains__(self, x: int) -> bool:
        return self.reduce(x) == 0

    def coords(self, x: int) -> int:
        """Coefficients of x over the rows, rows[0] at the most significant bit."""
        c = 0
        for r in self.rows:
            c <<= 1
            if x ^ r < x:
                x ^= r
                c |= 1
        if x:
            raise PreconditionViolated("vector is outside the span")
        return c

    def combine(self, coeffs: int) -> int:
        """Inverse of coords: XOR together the rows selected by coeffs."""
        x = 0
        k = len(self.rows)
        for i, r in enumerate(self.rows):
            if (coeffs >> (k - 1 - i)) & 1:
                x ^= r
        return x

    def inverse(self) -> Basis:
        """The basis whose combine equals this basis's coords (full rank only)."""
        if self.rank != self.dim:
            raise NotFullRank(f"rank {self.rank} < dimension {self.dim}")
        rows = tuple(self.coords(1 << (self.dim - 1 - i)) for i in range(self.dim))
        return Basis(self.dim, rows)


@dataclass(frozen=True)
class CosetDecomposition:
    """A subspace with the minimal representatives of all its cosets."""

    subspace: Basis
    translations: tuple[BitVec, ...]


def echelon_basis(values: Iterable[int], dim: int) -> Basis:
    """Reduced row-echelon basis of the span of the given vectors.

    Each pivot bit appears in exactly one row, so the rows double as the
    canonical representatives used by coset_decompose.
    """
    _check_dim(dim)
    rows: list[int] = []
    for v in values:
        _check_value(v, dim)
        for r in rows:
            if v ^ r < v:
                v ^= r
        if v == 0:
            continue
        mask = 1 << (v.bit_length() - 1)
        rows = [r ^ v if r & mask else r for r in rows]
        idx = 0
        while idx < len(rows) and rows[idx] > v:
            idx += 1
        rows.insert(idx, v)
    return Basis(dim, tuple(rows))


def dim_span(vs: VectorMultiset) -> int:
    """Rank of the set of distinct values in the multiset."""
    return echelon_basis(vs.values, vs.dim).rank


def change_of_basis(vs: VectorMultiset, new_basis: Basis) -> VectorMultiset:
    """Coordinates of every item relative to a full-rank basis.

    The induced map is a bijection of F_2^n; applying the inverse basis
    (Basis.inverse) restores the original multiset.
    """
    if new_basis.rank != new_basis.dim:
        raise NotFullRank(f"rank {new_basis.rank} < dimension {new_basis.dim}")
    if new_basis.dim != vs.dim:
        raise PreconditionViolated("basis and multiset dimensions differ")
    return VectorMultiset(vs.dim, tuple(new_basis.coords(v) for v in vs.values))


def _subset_reach_tables(
    values: Sequence[int], cap: int
) -> list[set[tuple[int, int]]]:
    """Per-prefix sets of reachable (cardinality, XOR) subset states.

    Exact dynamic program over subsets of the input in order; state count is
    bounded by cap times the span size, so this is meant for small working
    sets (the sizes that arise in the splitting routines), not for bulk data.
    """
    tables: list[set[tuple[int, int]]] = [{(0, 0)}]
    for v in values:
        prev = tables[-1]
        cur = set(prev)
        for c, x in prev:
            if c < cap:
                cur.add((c + 1, x ^ v))
        tables.append(cur)
    return tables


def _reconstruct_subset(
    values: Sequence[int], tables: list[set[tuple[int, int]]], goal: tuple[int, int]
) -> tuple[int, ...]:
    # Walk backwards preferring "not taken" so the result is deterministic.
    picked: list[int] = []
    cur = goal
    for i in range(len(values) - 1, -1, -1):
        if cur in tables[i]:
            continue
        count, x = cur
        cur = (count - 1, x ^ values[i])
        picked.append(i)
    if cur != (0, 0):
        raise AssertionError("subset reconstruction walked off the table")
    return tuple(reversed(picked))


def zero_sum_subset(
    vs: VectorMultiset, max_size: int, parity: str | None = None
) -> tuple[int, ...]:
    """Indices of a smallest nonempty subset with XOR 0 and size <= max_size.

    parity may be "odd" or "even" to additionally constrain the cardinality.
    Raises NoSuchSubset when no qualifying subset exists.
    """
    if max_size < 1:
        raise PreconditionViolated(f"max_size must be >= 1, got {max_size}")
    if parity not in (None, "odd", "even"):
        raise PreconditionViolated(f"parity must be None, 'odd' or 'even': {parity!r}")
    cap = min(max_size, len(vs.values))
    tables = _subset_reach_tables(vs.values, cap)
    final = tables[-1]
    for c in range(1, cap + 1):
        if parity == "odd" and c % 2 == 0:
            continue
        if parity == "even" and c % 2 == 1:
            continue
        if (c, 0) in final:
            return _reconstruct_subset(vs.values, tables, (c, 0))
    raise NoSuchSubset(
        f"no zero-sum subset of size <= {max_size}" + (f" with {parity} size" if parity else "")
    )


def zero_sum_subset_of_size(vs: VectorMultiset, size: int) -> tuple[int, ...]:
    """Indices of a subset with XOR 0 and exactly the given size."""
    if size < 1:
        raise PreconditionViolated(f"size must be >= 1, got {size}")
    if size > len(vs.values):
        raise NoSuchSubset(f"only {len(vs.values)} items, need {size}")
    tables = _subset_reach_tables(vs.values, size)
    if (size, 0) not in tables[-1]:
        raise NoSuchSubset(f"no zero-sum subset of size exactly {size}")
    return _reconstruct_subset(vs.values, tables, (size, 0))


def coset_decompose(n: int, subspace: Basis) -> CosetDecomposition:
    """All cosets of the subspace, by their numerically smallest representatives.

    Representatives are the vectors that vanish on the pivot positions of the
    reduced basis, enumerated in ascending order (so the first is 0).  The
    result has 2^(n - rank) translations; keep n - rank modest.
    """
    if subspace.dim != n:
        raise PreconditionViolated("subspace dimension does not match n")
    reduced = echelon_basis(subspace.rows, n)
    pivots = {r.bit_length() - 1 for r in reduced.rows}
    free = [p for p in range(n - 1, -1, -1) if p not in pivots]
    reps: list[int] = []
    for pattern in range(1 << len(free)):
        v = 0
        for j, p in enumerate(free):
            if (pattern >> (len(free) - 1 - j)) & 1:
                v |= 1 << p
        reps.append(v)
    return CosetDecomposition(subspace, tuple(BitVec(v, n) for v in reps))


def extend_basis(basis: Basis, target_rank: int | None = None) -> Basis:
    """Extend with unit vectors at free positions, most significant first."""
    target = basis.dim if target_rank is None else target_rank
    if not basis.rank <= target <= basis.dim:
        raise PreconditionViolated(
            f"target rank {target} outside {basis.rank}..{basis.dim}"
        )
    rows = list(basis.rows)
    pivots = {r.bit_length() - 1 for r in rows}
    for p in range(basis.dim - 1, -1, -1):
        if len(rows) == target:
            break
        if p in pivots:
            continue
        unit = 1 << p
        idx = 0
        while idx < len(rows) and rows[idx].bit_length() - 1 > p:
            idx += 1
        rows.insert(idx, unit)
    return Basis(basis.dim, tuple(rows))


def hyperplane_containing(values: Iterable[int], n: int) -> Basis:
    """A rank n-1 subspace containing all the given vectors."""
    b = echelon_basis(values, n)
    if b.rank >= n:
        raise PreconditionViolated("vectors span the whole space")
    return extend_basis(b, n - 1)


@dataclass(frozen=True)
class LinearMap:
    """A linear map on F_2^n given by the images of the unit vectors.

    imgs[i] is the image of the unit whose set bit is at position n-1-i,
    so imgs[0] belongs to the printed leftmost coordinate.
    """

    dim: int
    imgs: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_dim(self.dim)
        if len(self.imgs) != self.dim:
            raise PreconditionViolated("need one image per unit vector")
        for v in self.imgs:
            _check_value(v, self.dim)

    def apply(self, x: int) -> int:
        y = 0
        n = self.dim
        for i in range(n):
            if (x >> (n - 1 - i)) & 1:
                y ^= self.imgs[i]
        return y

    @classmethod
    def identity(cls, dim: int) -> LinearMap:
        return cls(dim, tuple(1 << (dim - 1 - i) for i in range(dim)))

    @classmethod
    def from_rows(cls, rows: Sequence[int], dim: int) -> LinearMap:
        """Map x to the vector of functional values (parity of rows[i] & x).

        Output bit i (from the left) is the value of the i-th functional.
        """
        if len(rows) != dim:
            raise PreconditionViolated("need exactly dim functional rows")
        imgs: list[int] = []
        for j in range(dim):
            img = 0
            for i, r in enumerate(rows):
                if (r >> (dim - 1 - j)) & 1:
                    img |= 1 << (dim - 1 - i)
            imgs.append(img)
        return cls(dim, tuple(imgs))

    @classmethod
    def from_frame(
        cls, frame: Sequence[int], images: Sequence[int], dim: int
    ) -> LinearMap:
        """The unique linear map sending frame[i] to images[i].

        The frame must be full rank (NotFullRank otherwise); the images may
        be anything, so the result need not be invertible.
        """
        to_frame = cls(dim, tuple(frame))
        to_images = cls(dim, tuple(images))
        return to_images.compose(to_frame.inverse())

    def compose(self, other: LinearMap) -> LinearMap:
        """self applied after other."""
        if self.dim != other.dim:
            raise PreconditionViolated("dimension mismatch in composition")
        return LinearMap(self.dim, tuple(self.apply(g) for g in other.imgs))

    def inverse(self) -> LinearMap:
        n = self.dim
        # Echelonize (image, preimage) pairs, then express each unit vector
        # in terms of the images while accumulating preimages.
        pairs: list[tuple[int, int]] = []
        for i in range(n):
            v, e = self.imgs[i], 1 << (n - 1 - i)
            for bv, be in pairs:
                if v ^ bv < v:
                    v ^= bv
                    e ^= be
            if v == 0:
                raise NotFullRank("map is singular")
            idx = 0
            while idx < len(pairs) and pairs[idx][0] > v:
                idx += 1
            pairs.insert(idx, (v, e))
        inv_imgs: list[int] = []
        for j in range(n):
            u, acc = 1 << (n - 1 - j), 0
            for bv, be in pairs:
                if u ^ bv < u:
                    u ^= bv
                    acc ^= be
            if u:
                raise NotFullRank("map is singular")
            inv_imgs.append(acc)
        return LinearMap(n, tuple(inv_imgs))


def solve_parity_system(
    constraints: Sequence[tuple[int, int]], n: int
) -> int | None:
    """One functional f with parity(f & v) = b for every constraint (v, b).

    Returns None when the system is inconsistent.  Free bits are set to 0,
    so the answer is deterministic.
    """
    _check_dim(n)
    pivot_rows: list[tuple[int, int]] = []
    for v, b in constraints:
        _check_value(v, n)
        for pv, pb in pivot_rows:
            if v ^ pv < v:
                v ^= pv
                b ^= pb
        if v == 0:
            if b:
                return None
            continue
        idx = 0
        while idx < len(pivot_rows) and pivot_rows[idx][0] > v:
            idx += 1
        pivot_rows.insert(idx, (v, b))
    f = 0
    for pv, pb in reversed(pivot_rows):
        p = pv.bit_length() - 1
        rest = pv ^ (1 << p)
        bit = pb ^ (bin(f & rest).count("1") & 1)
        f |= bit << p
    for v, b in constraints:
        if bin(f & v).count("1") & 1 != b:
            raise AssertionError("parity solver produced an invalid solution")
    return f
