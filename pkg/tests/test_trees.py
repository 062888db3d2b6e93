"""Tests for the tree model and the set-sequential verifier.

The verifier's own judgment is cross-checked against a direct multiset
comparison written here; distances are checked against an all-pairs
breadth-first oracle.
"""

from __future__ import annotations

import itertools
import json
import random
from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setseq.errors import NonCanonical, PreconditionViolated
from setseq.gf2 import BitVec
from setseq.trees import (
    CaterpillarSpec,
    Labeling,
    Tree,
    all_odd_degrees,
    build_caterpillar,
    caterpillar_from_degrees,
    degree_parities,
    diameter,
    even_degree_label_sum,
    pad_spec,
    tree_from_json,
    tree_to_dot,
    tree_to_json,
    verify_set_sequential,
)

FIGURE_LABELS = ["0001", "0111", "1101", "0010", "0101", "1100", "1110", "1010"]
FIGURE_EDGES = [(0, 1), (0, 3), (2, 3), (3, 7), (0, 4), (1, 5), (1, 6)]


def figure_tree():
    return Tree.of(8, FIGURE_EDGES)


def figure_labeling():
    return Labeling.of(4, dict(enumerate(FIGURE_LABELS)))


def path(count):
    return Tree.of(count, [(i, i + 1) for i in range(count - 1)])


def covers_exactly_once(t, lab):
    """Oracle: vertex labels plus edge XORs hit 1..2^n-1 each exactly once."""
    values = [lab.vertex_labels[v].bits for v in range(t.vertex_count)]
    values += [lab.vertex_labels[a].bits ^ lab.vertex_labels[b].bits for a, b in t.edges]
    return sorted(values) == list(range(1, 1 << lab.n))


def distance_oracle(t):
    """All-pairs shortest path lengths by repeated breadth-first search."""
    adj = t.adjacency()
    best = 0
    for start in range(t.vertex_count):
        dist = {start: 0}
        frontier = [start]
        while frontier:
            nxt = []
            for x in frontier:
                for y in adj[x]:
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            frontier = nxt
        best = max(best, max(dist.values()))
    return best


def random_tree(rng, count):
    edges = [(rng.randrange(i), i) for i in range(1, count)]
    return Tree.of(count, edges)


# ---------------------------------------------------------------------------
# Tree invariants


def test_tree_rejects_single_vertex():
    with pytest.raises(PreconditionViolated):
        Tree.of(1, [])


def test_tree_rejects_wrong_edge_count():
    with pytest.raises(PreconditionViolated):
        Tree.of(3, [(0, 1)])


def test_tree_rejects_cycle_with_isolated_vertex():
    # Three distinct edges on four vertices must either connect everything
    # or close a cycle and strand someone; reachability catches it.
    with pytest.raises(PreconditionViolated):
        Tree.of(4, [(0, 1), (0, 2), (1, 2)])


def test_tree_rejects_duplicate_edge():
    with pytest.raises(PreconditionViolated):
        Tree.of(4, [(0, 1), (1, 0), (2, 3)])


def test_tree_rejects_loop_edge():
    with pytest.raises(PreconditionViolated):
        Tree.of(3, [(0, 0), (1, 2)])


def test_tree_rejects_out_of_range_ids():
    with pytest.raises(PreconditionViolated):
        Tree.of(3, [(0, 1), (1, 3)])


def test_tree_of_normalizes_orientation():
    t = Tree.of(3, [(1, 0), (2, 1)])
    assert t.edges == ((0, 1), (1, 2))


def test_tree_degrees_and_adjacency_agree():
    t = figure_tree()
    adj = t.adjacency()
    assert t.degrees() == [len(adj[v]) for v in range(8)]
    assert t.degrees() == [3, 3, 1, 3, 1, 1, 1, 1]


# ---------------------------------------------------------------------------
# caterpillar specs


def test_spec_parse_and_str_roundtrip():
    spec = CaterpillarSpec.parse("T[3,3,5,3,3,3]")
    assert spec.degrees == (3, 3, 5, 3, 3, 3)
    assert str(spec) == "T[3,3,5,3,3,3]"
    assert CaterpillarSpec.parse(" T[ 2 , 2 ] ").degrees == (2, 2)


def test_spec_parse_rejects_garbage():
    for bad in ("T[]", "T[3,3", "[3,3]", "T[a]", "T"):
        with pytest.raises(ValueError):
            CaterpillarSpec.parse(bad)


def test_spec_rejects_non_canonical():
    with pytest.raises(NonCanonical):
        CaterpillarSpec((3, 1, 3))
    with pytest.raises(NonCanonical):
        CaterpillarSpec((0,))
    with pytest.raises(NonCanonical):
        CaterpillarSpec(())


def test_spec_single_edge_is_canonical():
    spec = CaterpillarSpec((1,))
    assert spec.vertex_count == 2
    assert spec.diameter == 1


def test_spec_derived_quantities():
    spec = CaterpillarSpec((3, 3, 3))
    assert spec.vertex_count == 8
    assert spec.diameter == 4
    star = CaterpillarSpec((5,))
    assert star.vertex_count == 6
    assert star.diameter == 2
    assert CaterpillarSpec((5, 3, 3, 3, 3, 3)).vertex_count == 16
    assert CaterpillarSpec((5, 3, 3, 3, 3, 3)).diameter == 7


def test_spec_reversed():
    assert CaterpillarSpec((3, 3, 5)).reversed().degrees == (5, 3, 3)


# ---------------------------------------------------------------------------
# building caterpillars


def test_build_single_edge():
    t = build_caterpillar(CaterpillarSpec((1,)))
    assert t.vertex_count == 2
    assert t.edges == ((0, 1),)


def test_build_numbering_is_stable():
    # Path vertices first, then pendants grouped by anchor in path order.
    t = build_caterpillar(CaterpillarSpec((3, 2)))
    assert t.vertex_count == 5
    assert t.edges == ((0, 1), (0, 2), (0, 3), (1, 4))


@pytest.mark.parametrize(
    "degrees,count,diam",
    [
        ((1,), 2, 1),
        ((3,), 4, 2),
        ((3, 3, 3), 8, 4),
        ((5, 3, 3, 3, 3, 3), 16, 7),
        ((3, 3, 3, 2, 2, 2, 2, 2, 2, 3), 16, 11),
        ((2,) * 14, 16, 15),
    ],
)
def test_build_matches_derived_counts(degrees, count, diam):
    spec = CaterpillarSpec(degrees)
    t = build_caterpillar(spec)
    assert t.vertex_count == spec.vertex_count == count
    assert diameter(t) == spec.diameter == diam


def test_build_realizes_declared_degrees():
    degrees = (4, 2, 5, 2, 3)
    t = build_caterpillar(CaterpillarSpec(degrees))
    assert t.degrees()[: len(degrees)] == list(degrees)
    assert all(d == 1 for d in t.degrees()[len(degrees) :])


def test_caterpillar_from_degrees_accepts_padding():
    t = caterpillar_from_degrees((1, 3, 1))
    assert t.vertex_count == 4
    assert diameter(t) == 2
    assert sorted(t.degrees()) == [1, 1, 1, 3]


def test_caterpillar_from_degrees_rejects_small_interior():
    with pytest.raises(NonCanonical):
        caterpillar_from_degrees((3, 1, 3))


def test_pad_spec():
    spec = CaterpillarSpec((3, 3, 3))
    assert pad_spec(spec, 1, 1) == (1, 3, 3, 3, 1)
    assert pad_spec(spec) == (3, 3, 3)
    assert pad_spec(CaterpillarSpec((3,)), right=1) == (3, 1)


def test_pad_spec_rejects_unpromotable_ends():
    with pytest.raises(PreconditionViolated):
        pad_spec(CaterpillarSpec((1,)), left=1)
    with pytest.raises(PreconditionViolated):
        pad_spec(CaterpillarSpec((3, 3)), left=2)


def test_padded_and_canonical_builds_are_isomorphic():
    # Same degree multiset and same diameter is enough evidence here.
    spec = CaterpillarSpec((3, 4, 3))
    padded = caterpillar_from_degrees(pad_spec(spec, 1, 1))
    plain = build_caterpillar(spec)
    assert padded.vertex_count == plain.vertex_count
    assert sorted(padded.degrees()) == sorted(plain.degrees())
    assert diameter(padded) == diameter(plain)


# ---------------------------------------------------------------------------
# structural queries


def test_diameter_examples():
    assert diameter(path(2)) == 1
    assert diameter(path(4)) == 3
    assert diameter(build_caterpillar(CaterpillarSpec((3, 3, 3)))) == 4
    assert diameter(build_caterpillar(CaterpillarSpec((3,)))) == 2


def test_diameter_matches_oracle_on_random_trees():
    rng = random.Random(20260825)
    for _ in range(40):
        t = random_tree(rng, rng.randrange(2, 40))
        assert diameter(t) == distance_oracle(t)


def test_degree_parities_star_and_path():
    star = build_caterpillar(CaterpillarSpec((3,)))
    assert degree_parities(star) == [1, 1, 1, 1]
    assert all_odd_degrees(star)
    p4 = path(4)
    assert degree_parities(p4) == [1, 0, 0, 1]
    assert not all_odd_degrees(p4)


def test_degree_parities_base_sixteen_vertex_case():
    t = build_caterpillar(CaterpillarSpec((3, 3, 3, 2, 2, 2, 2, 2, 2, 3)))
    parities = degree_parities(t)
    assert parities.count(0) == 6
    assert [p for p in parities[:10]] == [1, 1, 1, 0, 0, 0, 0, 0, 0, 1]


# ---------------------------------------------------------------------------
# verifier


def test_figure_labeling_verifies():
    report = verify_set_sequential(figure_tree(), figure_labeling())
    assert report.valid
    assert report.violations == ()
    assert covers_exactly_once(figure_tree(), figure_labeling())


def test_figure_labeling_breaks_under_colliding_mutations():
    # Not every single-label rewrite invalidates (a leaf can trade values
    # with its pendant edge), but rewriting to zero or to another vertex's
    # label always must.
    t = figure_tree()
    base = figure_labeling()
    for v in range(8):
        for other in list(range(8)) + [None]:
            if other == v:
                continue
            labels = dict(base.vertex_labels)
            labels[v] = BitVec(0, 4) if other is None else base.vertex_labels[other]
            report = verify_set_sequential(t, Labeling(4, labels))
            assert not report.valid


def test_leaf_label_can_trade_with_its_edge():
    # The swap witness for the comment above: leaf 4 hangs off vertex 0, so
    # replacing its label with label(4) xor label(0) swaps the vertex and
    # edge values and the result is again set-sequential.
    labels = dict(figure_labeling().vertex_labels)
    labels[4] = labels[4] ^ labels[0]
    assert verify_set_sequential(figure_tree(), Labeling(4, labels)).valid


def test_single_edge_verifies():
    t = path(2)
    lab = Labeling.of(2, {0: "01", 1: "10"})
    report = verify_set_sequential(t, lab)
    assert report.valid


def test_path_four_duplicate_edge_value():
    lab = Labeling.of(3, {0: "001", 1: "010", 2: "100", 3: "111"})
    report = verify_set_sequential(path(4), lab)
    assert not report.valid
    dups = [v for v in report.violations if v.kind == "DuplicateValue"]
    assert len(dups) == 1
    assert str(dups[0].value) == "011"
    assert set(dups[0].locations) == {"edge 0-1", "edge 2-3"}
    missing = [v for v in report.violations if v.kind == "MissingValue"]
    assert [str(v.value) for v in missing] == ["101"]


def test_verifier_reports_size_mismatch():
    lab = Labeling.of(3, {0: "001", 1: "010"})
    report = verify_set_sequential(path(2), lab)
    assert not report.valid
    kinds = [v.kind for v in report.violations]
    assert kinds == ["SizeMismatch"]


def test_verifier_reports_unlabeled_vertices():
    lab = Labeling.of(2, {0: "01"})
    report = verify_set_sequential(path(2), lab)
    assert not report.valid
    assert any(
        v.kind == "SizeMismatch" and "vertex 1 unlabeled" in v.locations
        for v in report.violations
    )


def test_verifier_reports_zero_and_duplicates_together():
    lab = Labeling.of(2, {0: "00", 1: "11"})
    report = verify_set_sequential(path(2), lab)
    kinds = sorted(v.kind for v in report.violations)
    assert kinds == ["DuplicateValue", "MissingValue", "MissingValue", "ZeroLabel"]
    zero = next(v for v in report.violations if v.kind == "ZeroLabel")
    assert zero.locations == ("vertex 0",)


def test_verifier_is_total_on_arbitrary_labelings():
    rng = random.Random(7)
    t = figure_tree()
    for _ in range(50):
        labels = {
            v: BitVec(rng.randrange(16), 4)
            for v in range(8)
            if rng.random() < 0.9
        }
        report = verify_set_sequential(t, Labeling(4, labels))
        assert report.valid == (not report.violations)
        assert report.valid == (
            len(labels) == 8 and covers_exactly_once(t, Labeling(4, labels))
        )


def test_violation_str_is_readable():
    lab = Labeling.of(3, {0: "001", 1: "010", 2: "100", 3: "111"})
    report = verify_set_sequential(path(4), lab)
    text = "\n".join(str(v) for v in report.violations)
    assert "DuplicateValue value=011 at edge 0-1, edge 2-3" in text


def test_report_consistency_is_enforced():
    with pytest.raises(PreconditionViolated):
        from setseq.trees import VerifierReport, Violation

        VerifierReport(True, (Violation("ZeroLabel"),))


# ---------------------------------------------------------------------------
# even-degree label sum


def test_even_degree_sum_empty_for_figure():
    # Every vertex of the figure tree has odd degree, so the sum is empty.
    assert even_degree_label_sum(figure_tree(), figure_labeling()).bits == 0


def test_even_degree_sum_flags_path_middles():
    lab = Labeling.of(3, {0: "001", 1: "010", 2: "100", 3: "111"})
    assert str(even_degree_label_sum(path(4), lab)) == "110"


def test_even_degree_sum_requires_full_coverage():
    with pytest.raises(PreconditionViolated):
        even_degree_label_sum(path(2), Labeling.of(2, {0: "01"}))


def test_path_four_never_verifies_exhaustively():
    # The two middle vertices have even degree, so their labels would have
    # to be equal; checked here over every injective assignment at n = 3.
    t = path(4)
    for combo in itertools.permutations(range(1, 8), 4):
        lab = Labeling(3, {v: BitVec(x, 3) for v, x in enumerate(combo)})
        assert not verify_set_sequential(t, lab).valid


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_valid_labelings_have_zero_even_degree_sum(seed):
    # Degenerate on trees we can label here (the figure); the real property
    # sweep runs over every constructor output elsewhere.  This checks the
    # contrapositive on random invalid labelings: a nonzero even-degree sum
    # must come with a failing report.
    rng = random.Random(seed)
    t = random_tree(rng, rng.randrange(4, 12))
    n = 4
    labels = {v: BitVec(rng.randrange(16), n) for v in range(t.vertex_count)}
    lab = Labeling(n, labels)
    if even_degree_label_sum(t, lab).bits != 0:
        assert not verify_set_sequential(t, lab).valid


# ---------------------------------------------------------------------------
# JSON and DOT round trips


def fixture_text(name):
    return resources.files("setseq").joinpath("fixtures", name).read_text()


def test_bundled_figure_fixture_verifies():
    tree, lab = tree_from_json(fixture_text("figure1.json"))
    assert lab is not None
    report = verify_set_sequential(tree, lab)
    assert report.valid


def test_json_roundtrip_labeled():
    text = tree_to_json(figure_tree(), figure_labeling())
    tree, lab = tree_from_json(text)
    assert tree == figure_tree()
    assert lab == figure_labeling()
    assert json.loads(text)["n"] == 4


def test_json_roundtrip_unlabeled():
    text = tree_to_json(figure_tree())
    tree, lab = tree_from_json(text)
    assert tree == figure_tree()
    assert lab is None
    assert json.loads(text)["n"] == 4


def test_json_unlabeled_needs_explicit_n_for_odd_sizes():
    with pytest.raises(PreconditionViolated):
        tree_to_json(path(3))
    doc = json.loads(tree_to_json(path(3), n=5))
    assert doc["n"] == 5


def test_json_parse_errors():
    good = json.loads(tree_to_json(figure_tree(), figure_labeling()))
    for mangle in (
        lambda d: d.pop("edges"),
        lambda d: d["vertices"].pop(),
        lambda d: d["vertices"][0].update(label="01"),
        lambda d: d["vertices"][0].update(id=99),
        lambda d: d["edges"].append([0, 0]),
        lambda d: d.update(n="four"),
    ):
        doc = json.loads(json.dumps(good))
        mangle(doc)
        with pytest.raises(ValueError):
            tree_from_json(json.dumps(doc))
    with pytest.raises(ValueError):
        tree_from_json("not json at all")
    with pytest.raises(ValueError):
        tree_from_json("[1, 2, 3]")


def test_dot_export_annotates_labels_and_xors():
    dot = tree_to_dot(figure_tree(), figure_labeling())
    assert '0 [label="0001"];' in dot
    assert '0 -- 1 [label="0110"];' in dot
    assert dot.startswith("graph setseq {")


def test_dot_export_unlabeled():
    dot = tree_to_dot(path(2))
    assert "0 -- 1;" in dot
    assert "label=" not in dot
