"""Tree and caterpillar data model plus the set-sequential verifier.

A labeling assigns vectors of F_2^n to vertices; every edge inherits the XOR
of its endpoints.  It is set-sequential when the vertex and edge labels
together cover F_2^n minus zero exactly once, which forces
|V| + |E| = 2^n - 1.

The verifier is a total function: it never raises on bad labelings, it
reports findings.  Constructors elsewhere in the package lean on that to
assert their outputs instead of trusting the theory.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import NonCanonical, PreconditionViolated
from .gf2 import MAX_DIM, BitVec

__all__ = [
    "Tree",
    "CaterpillarSpec",
    "Labeling",
    "Violation",
    "VerifierReport",
    "build_caterpillar",
    "caterpillar_from_degrees",
    "pad_spec",
    "diameter",
    "degree_parities",
    "all_odd_degrees",
    "verify_set_sequential",
    "even_degree_label_sum",
    "tree_to_json",
    "tree_from_json",
    "tree_to_dot",
]


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class Tree:
    """An unrooted tree on vertices 0..vertex_count-1.

    Edges are unordered pairs stored with the smaller id first; the edge
    list keeps its given order so emitted documents are stable.
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        v = self.vertex_count
        if v < 2:
            raise PreconditionViolated(f"need at least 2 vertices, got {v}")
        if len(self.edges) != v - 1:
            raise PreconditionViolated(
                f"a tree on {v} vertices has {v - 1} edges, got {len(self.edges)}"
            )
        seen: set[tuple[int, int]] = set()
        for a, b in self.edges:
            if not (0 <= a < v and 0 <= b < v):
                raise PreconditionViolated(f"edge ({a}, {b}) out of range")
            if a >= b:
                raise PreconditionViolated(f"edge ({a}, {b}) not stored small-id first")
            if (a, b) in seen:
                raise PreconditionViolated(f"duplicate edge ({a}, {b})")
            seen.add((a, b))
        # v-1 distinct edges and full reachability together rule out cycles.
        if len(self._reachable_from_zero()) != v:
            raise PreconditionViolated("edges do not connect all vertices")

    @classmethod
    def of(cls, vertex_count: int, edges: Iterable[tuple[int, int]]) -> Tree:
        """Build from any iterable of id pairs, normalizing orientation."""
        norm = tuple((a, b) if a < b else (b, a) for a, b in edges)
        return cls(vertex_count, norm)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def _reachable_from_zero(self) -> set[int]:
        adj = self.adjacency()
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen


@dataclass(frozen=True)
class CaterpillarSpec:
    """Canonical caterpillar T[d_1..d_k]: center path vertex i has degree d_i.

    Canonical means either the single-edge case [1] or every entry >= 2.
    Padded forms with degree-1 entries at the ends are handled as raw degree
    lists via pad_spec, never through this type.
    """

    degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.degrees:
            raise NonCanonical("degree list is empty")
        if self.degrees != (1,) and any(d < 2 for d in self.degrees):
            raise NonCanonical(
                f"degrees must all be >= 2 (or the list be exactly [1]): {list(self.degrees)}"
            )

    @classmethod
    def parse(cls, text: str) -> CaterpillarSpec:
        """Parse the display form, e.g. "T[3,3,3]"."""
        s = text.strip()
        if not (s.startswith("T[") and s.endswith("]")):
            raise ValueError(f"expected T[d1,...,dk], got {text!r}")
        body = s[2:-1]
        try:
            degrees = tuple(int(p.strip()) for p in body.split(","))
        except ValueError as exc:
            raise ValueError(f"bad degree list in {text!r}") from exc
        return cls(degrees)

    def __str__(self) -> str:
        return "T[" + ",".join(str(d) for d in self.degrees) + "]"

    @property
    def vertex_count(self) -> int:
        k = len(self.degrees)
        return sum(self.degrees) - k + 2

    @property
    def diameter(self) -> int:
        # Single edge: 1.  Star: 2.  Longer center paths: k + 1.
        if self.degrees == (1,):
            return 1
        k = len(self.degrees)
        return 2 if k == 1 else k + 1

    def reversed(self) -> CaterpillarSpec:
        return CaterpillarSpec(self.degrees[::-1])


@dataclass(frozen=True)
class Labeling:
    """Vertex labels in F_2^n, keyed by vertex id.

    Deliberately permissive: duplicate, zero, or missing labels are the
    verifier's job to report, so broken candidates can still be carried
    around and diagnosed.  Only structural nonsense (wrong widths) is
    rejected here.
    """

    n: int
    vertex_labels: Mapping[int, BitVec]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_DIM:
            raise PreconditionViolated(f"n must be in 1..{MAX_DIM}, got {self.n}")
        for v, lab in self.vertex_labels.items():
            if lab.dim != self.n:
                raise PreconditionViolated(
                    f"label of vertex {v} has width {lab.dim}, expected {self.n}"
                )

    @classmethod
    def of(cls, n: int, labels: Mapping[int, int | str | BitVec]) -> Labeling:
        out: dict[int, BitVec] = {}
        for v, lab in labels.items():
            if isinstance(lab, BitVec):
                out[v] = lab
            elif isinstance(lab, str):
                out[v] = BitVec.parse(lab, n)
            else:
                out[v] = BitVec(lab, n)
        return cls(n, out)

    def label(self, v: int) -> BitVec:
        return self.vertex_labels[v]

    def edge_label(self, a: int, b: int) -> BitVec:
        return self.vertex_labels[a] ^ self.vertex_labels[b]


@dataclass(frozen=True)
class Violation:
    """One verifier finding; kind is the stable tag tests match on."""

    kind: str
    value: BitVec | None = None
    locations: tuple[str, ...] = ()

    def __str__(self) -> str:
        parts = [self.kind]
        if self.value is not None:
            parts.append(f"value={self.value}")
        if self.locations:
            parts.append("at " + ", ".join(self.locations))
        return " ".join(parts)


@dataclass(frozen=True)
class VerifierReport:
    valid: bool
    violations: tuple[Violation, ...]

    def __post_init__(self) -> None:
        if self.valid != (not self.violations):
            raise PreconditionViolated("valid flag contradicts the violation list")

    @classmethod
    def of(cls, violations: Sequence[Violation]) -> VerifierReport:
        return cls(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# construction


def build_caterpillar(spec: CaterpillarSpec) -> Tree:
    """The caterpillar T[d_1..d_k] with a stable vertex numbering.

    Center path vertices are 0..k-1 in path order.  Pendant vertices are
    numbered from k upward, grouped by their anchor in path order, so equal
    specs always produce identical trees.
    """
    return caterpillar_from_degrees(spec.degrees)


def caterpillar_from_degrees(degrees: Sequence[int]) -> Tree:
    """build_caterpillar on a raw degree list, padded forms included.

    Entries of 1 are only meaningful at the ends (degree-1 path vertices,
    i.e. the padding pad_spec produces); an interior entry below 2 cannot be
    realized and raises.
    """
    k = len(degrees)
    if k == 0:
        raise NonCanonical("degree list is empty")
    pendant_counts: list[int] = []
    if k == 1:
        pendant_counts.append(degrees[0])
        if degrees[0] < 1:
            raise NonCanonical(f"star degree must be >= 1, got {degrees[0]}")
    else:
        for i, d in enumerate(degrees):
            want = d - 1 if i in (0, k - 1) else d - 2
            if want < 0:
                raise NonCanonical(
                    f"degree {d} at position {i} is too small for a {k}-vertex center path"
                )
            pendant_counts.append(want)
    edges: list[tuple[int, int]] = [(i, i + 1) for i in range(k - 1)]
    nxt = k
    for i, count in enumerate(pendant_counts):
        for _ in range(count):
            edges.append((i, nxt))
            nxt += 1
    return Tree.of(nxt, edges)


def pad_spec(spec: CaterpillarSpec, left: int = 0, right: int = 0) -> tuple[int, ...]:
    """Degree list with degree-1 entries prepended/appended.

    The result describes the same tree as the spec: each pad names an
    existing pendant leaf at that end, promoted to a path position.  Returned
    as a raw tuple because padded forms are not canonical.
    """
    if not (0 <= left <= 1 and 0 <= right <= 1):
        raise PreconditionViolated("pad counts must be 0 or 1 per side")
    if left and (spec.degrees == (1,) or spec.degrees[0] < 2):
        raise PreconditionViolated("no pendant leaf to promote on the left end")
    if right and len(spec.degrees) > 1 and spec.degrees[-1] < 2:
        raise PreconditionViolated("no pendant leaf to promote on the right end")
    return (1,) * left + spec.degrees + (1,) * right


# ---------------------------------------------------------------------------
# structural queries


def _bfs_distances(adj: list[list[int]], start: int) -> list[int]:
    dist = [-1] * len(adj)
    dist[start] = 0
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def diameter(t: Tree) -> int:
    """Largest distance between any two vertices (double sweep)."""
    adj = t.adjacency()
    first = _bfs_distances(adj, 0)
    far = first.index(max(first))
    second = _bfs_distances(adj, far)
    return max(second)


def degree_parities(t: Tree) -> list[int]:
    """Per-vertex degree mod 2."""
    return [d & 1 for d in t.degrees()]


def all_odd_degrees(t: Tree) -> bool:
    return all(d & 1 for d in t.degrees())


# ---------------------------------------------------------------------------
# verification


def verify_set_sequential(t: Tree, lab: Labeling) -> VerifierReport:
    """Report on whether lab is a set-sequential labeling of t.

    Findings, in order: SizeMismatch (|V| + |E| vs 2^n - 1, or vertices the
    labeling does not cover), ZeroLabel, DuplicateValue (one per repeated
    value, with every location), MissingValue (one per absent value, only
    reported once the entry count matches, where it is meaningful).
    """
    n = lab.n
    violations: list[Violation] = []

    unlabeled = [v for v in range(t.vertex_count) if v not in lab.vertex_labels]
    expected = (1 << n) - 1
    total = t.vertex_count + len(t.edges)
    if total != expected:
        violations.append(
            Violation(
                "SizeMismatch",
                locations=(
                    f"{t.vertex_count} vertices + {len(t.edges)} edges = {total}",
                    f"n={n} needs {expected}",
                ),
            )
        )
    if unlabeled:
        violations.append(
            Violation(
                "SizeMismatch",
                locations=tuple(f"vertex {v} unlabeled" for v in unlabeled),
            )
        )

    entries: list[tuple[str, int]] = []
    for v in range(t.vertex_count):
        if v in lab.vertex_labels:
            entries.append((f"vertex {v}", lab.vertex_labels[v].bits))
    for a, b in t.edges:
        if a in lab.vertex_labels and b in lab.vertex_labels:
            entries.append(
                (f"edge {a}-{b}", lab.vertex_labels[a].bits ^ lab.vertex_labels[b].bits)
            )

    by_value: dict[int, list[str]] = {}
    for where, value in entries:
        by_value.setdefault(value, []).append(where)

    zero_spots = by_value.pop(0, [])
    if zero_spots:
        violations.append(
            Violation("ZeroLabel", value=BitVec(0, n), locations=tuple(zero_spots))
        )
    for value in sorted(by_value):
        spots = by_value[value]
        if len(spots) > 1:
            violations.append(
                Violation("DuplicateValue", value=BitVec(value, n), locations=tuple(spots))
            )
    if total == expected and not unlabeled:
        for value in range(1, 1 << n):
            if value not in by_value:
                violations.append(Violation("MissingValue", value=BitVec(value, n)))

    return VerifierReport.of(violations)


def even_degree_label_sum(t: Tree, lab: Labeling) -> BitVec:
    """XOR of the labels on even-degree vertices.

    Zero for every labeling that verifies, so a nonzero value certifies that
    no set-sequential labeling extends the given even-degree assignments.
    """
    missing = [v for v in range(t.vertex_count) if v not in lab.vertex_labels]
    if missing:
        raise PreconditionViolated(f"vertices without labels: {missing}")
    acc = 0
    for v, d in enumerate(t.degrees()):
        if d % 2 == 0:
            acc ^= lab.vertex_labels[v].bits
    return BitVec(acc, lab.n)


# ---------------------------------------------------------------------------
# interchange formats


def tree_to_json(t: Tree, lab: Labeling | None = None, *, n: int | None = None) -> str:
    """Labeled-tree JSON document; see tree_from_json for the schema.

    When no labeling is supplied, n may be passed explicitly; otherwise it
    is inferred from |V| + |E| = 2^n - 1.
    """
    if lab is not None:
        width = lab.n
    elif n is not None:
        width = n
    else:
        total = 2 * t.vertex_count - 1
        width = total.bit_length()
        if (1 << width) - 1 != total:
            raise PreconditionViolated(
                f"cannot infer n: {t.vertex_count} vertices do not fit 2^n - 1 labels"
            )
    vertices = []
    for v in range(t.vertex_count):
        doc: dict[str, object] = {"id": v}
        if lab is not None and v in lab.vertex_labels:
            doc["label"] = str(lab.vertex_labels[v])
        vertices.append(doc)
    payload = {
        "n": width,
        "vertices": vertices,
        "edges": [[a, b] for a, b in t.edges],
    }
    return json.dumps(payload, indent=1) + "\n"


def tree_from_json(text: str) -> tuple[Tree, Labeling | None]:
    """Parse the labeled-tree document format.

    Schema: {"n": int, "vertices": [{"id": int, "label": optional bitstring}],
    "edges": [[int, int]]}.  Bitstrings are width n, leftmost character is
    coordinate 1.  Returns the labeling only if at least one label appears.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("top level must be an object")
    for key in ("n", "vertices", "edges"):
        if key not in doc:
            raise ValueError(f"missing required field {key!r}")
    n = doc["n"]
    if not isinstance(n, int) or not 1 <= n <= MAX_DIM:
        raise ValueError(f"field 'n' must be an integer in 1..{MAX_DIM}")
    labels: dict[int, BitVec] = {}
    ids: list[int] = []
    for entry in doc["vertices"]:
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), int):
            raise ValueError(f"bad vertex entry {entry!r}")
        ids.append(entry["id"])
        if "label" in entry:
            try:
                labels[entry["id"]] = BitVec.parse(entry["label"], n)
            except PreconditionViolated as exc:
                raise ValueError(str(exc)) from exc
    if sorted(ids) != list(range(len(ids))):
        raise ValueError("vertex ids must be exactly 0..count-1")
    edges: list[tuple[int, int]] = []
    for entry in doc["edges"]:
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 2
            or not all(isinstance(x, int) for x in entry)
        ):
            raise ValueError(f"bad edge entry {entry!r}")
        edges.append((entry[0], entry[1]))
    try:
        tree = Tree.of(len(ids), edges)
    except PreconditionViolated as exc:
        raise ValueError(str(exc)) from exc
    return tree, (Labeling(n, labels) if labels else None)


def tree_to_dot(t: Tree, lab: Labeling | None = None) -> str:
    """Graphviz DOT text; vertex labels and edge XORs become DOT labels."""
    lines = ["graph setseq {"]
    for v in range(t.vertex_count):
        if lab is not None and v in lab.vertex_labels:
            lines.append(f'  {v} [label="{lab.vertex_labels[v]}"];')
        else:
            lines.append(f"  {v};")
    for a, b in t.edges:
        if lab is not None and a in lab.vertex_labels and b in lab.vertex_labels:
            lines.append(f'  {a} -- {b} [label="{lab.edge_label(a, b)}"];')
        else:
            lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
