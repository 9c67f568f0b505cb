from itertools import combinations, permutations

import pytest
from hypothesis import given, strategies as st

from bmenet import (
    CircularOrdering,
    Split,
    arc_splits,
    build_graph,
    canonicalize_ordering,
    consistent_orderings,
    displays_split,
    enumerate_networks,
    is_arc,
    make_network,
    refines,
    sigma_splits,
    split_system,
    splits_compatible,
    twist,
)
from bmenet.enumeration import vertex_set
from bmenet.errors import (
    AmbientMismatch,
    CrossingBridges,
    InvalidSplit,
    NotABridge,
    NotAnArc,
    NotAPermutation,
    TooManyBridges,
    TrivialBridge,
    WeightSystemMismatch,
)
from bmenet.splits import Subdivision, _twist_seq, splits_compatible as compatible

from oracles import components, dihedral_canonical, minimal_cut_splits


def all_networks(max_n):
    for n in range(3, max_n + 1):
        for k in range(n - 2):
            yield from vertex_set(n, k)[0]


def all_splits(n):
    return [Split.of_mask(m, n) for m in range(2, (1 << n) - 1, 2)]


# ---------------------------------------------------------------------------
# orderings
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "seq, expected",
    [((3, 1, 2), (1, 2, 3)), ((1, 2, 3, 4, 5), (1, 2, 3, 4, 5)), ((5, 4, 3, 2, 1), (1, 2, 3, 4, 5))],
)
def test_canonicalize_examples(seq, expected):
    assert canonicalize_ordering(seq).seq == expected


@pytest.mark.parametrize("bad", [(1, 2, 2), (1, 2, 4), (0, 1, 2), (1, 2)])
def test_canonicalize_rejects_non_permutations(bad):
    with pytest.raises(NotAPermutation):
        canonicalize_ordering(bad)


@pytest.mark.parametrize("n", range(3, 7))
def test_canonicalize_matches_dihedral_oracle(n):
    for p in permutations(range(1, n + 1)):
        c = canonicalize_ordering(p)
        assert c.seq == dihedral_canonical(p)
        assert canonicalize_ordering(c.seq) == c


@given(st.permutations(list(range(1, 9))))
def test_canonical_form_is_rotation_reflection_invariant(p):
    c = canonicalize_ordering(p)
    p = tuple(p)
    assert canonicalize_ordering(p[3:] + p[:3]) == c
    assert canonicalize_ordering(p[::-1]) == c
    assert c.seq[0] == 1 and c.seq[1] < c.seq[-1]


# ---------------------------------------------------------------------------
# splits
# ---------------------------------------------------------------------------


def test_split_canonical_side_and_validation(split5):
    s = split5(3, 4, 5)
    assert s == split5(1, 2) and s.part == (3, 4, 5) and s.complement == (1, 2)
    assert s.size == 2 and not s.is_trivial and split5(4).is_trivial
    with pytest.raises(InvalidSplit):
        split5()
    with pytest.raises(InvalidSplit):
        split5(1, 2, 3, 4, 5)


def test_compatibility_examples(split5):
    assert splits_compatible(split5(1, 2), split5(4, 5))
    assert not splits_compatible(split5(1, 2), split5(2, 3))
    for s in all_splits(5):
        assert splits_compatible(s, s)
    with pytest.raises(AmbientMismatch):
        splits_compatible(split5(1, 2), Split.from_part([1, 2], 6))


@pytest.mark.parametrize("n", [4, 5, 6])
def test_compatibility_matches_four_intersections(n):
    full = set(range(1, n + 1))
    for a, b in combinations(all_splits(n), 2):
        a1, a2, b1, b2 = set(a.part), full - set(a.part), set(b.part), full - set(b.part)
        expected = any(not (x & y) for x in (a1, a2) for y in (b1, b2))
        assert compatible(a, b) == expected


def test_is_arc_examples(split5):
    assert is_arc(split5(4, 5), CircularOrdering((1, 2, 3, 4, 5)))
    assert not is_arc(split5(2, 3), CircularOrdering((2, 1, 3, 4, 5)))
    assert not is_arc(split5(3, 5), CircularOrdering((1, 2, 3, 4, 5)))


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_arc_splits_count(n):
    c = CircularOrdering(tuple(range(1, n + 1)))
    arcs = arc_splits(c)
    assert len(arcs) == n + n * (n - 3) // 2
    assert all(is_arc(s, c) for s in arcs)


# ---------------------------------------------------------------------------
# networks
# ---------------------------------------------------------------------------


def test_make_network_examples(n1, split5):
    assert n1.ordering.seq == (1, 2, 3, 4, 5) and n1.k == 1
    assert make_network((2, 1, 3, 4, 5), [split5(1, 2)]) == n1
    tour = make_network((1, 2, 3, 4, 5), [])
    assert tour.k == 0 and tour.ordering.seq == (1, 2, 3, 4, 5)
    with pytest.raises(CrossingBridges):
        make_network((1, 2, 3, 4, 5), [split5(1, 2), split5(2, 3)])
    with pytest.raises(TrivialBridge):
        make_network((1, 2, 3, 4, 5), [split5(2)])
    with pytest.raises(TooManyBridges):
        make_network((1, 2, 3, 4, 5), [split5(1, 2), split5(4, 5), split5(3, 4)])
    with pytest.raises(NotAnArc):
        make_network((1, 2, 3, 4, 5), [split5(1, 3)])


def test_twist_examples(n1, split5):
    assert twist(n1, split5(1, 2)) == (2, 1, 3, 4, 5)
    with pytest.raises(NotABridge):
        twist(make_network((1, 2, 3, 4, 5)), split5(1, 2))
    with pytest.raises(NotABridge):
        twist(n1, split5(4, 5))


def test_twist_is_an_involution_on_drawings():
    for net in all_networks(6):
        for b in net.sorted_bridges:
            once = _twist_seq(net.ordering.seq, b.mask)
            assert once != net.ordering.seq
            assert _twist_seq(once, b.mask) == net.ordering.seq


def test_consistent_orderings_examples(n1, caterpillar5):
    assert [c.seq for c in consistent_orderings(n1)] == [(1, 2, 3, 4, 5), (1, 2, 5, 4, 3)]
    assert canonicalize_ordering((1, 3, 4, 5, 2)).seq == (1, 2, 5, 4, 3)
    tour = make_network((1, 3, 2, 4, 5))
    assert consistent_orderings(tour) == [tour.ordering]
    assert len(consistent_orderings(caterpillar5)) == 4


def test_orbits_have_two_to_the_k_members_and_canonicalize_consistently():
    for net in all_networks(6):
        orbit = consistent_orderings(net)
        assert len(set(orbit)) == len(orbit) == 2 ** net.k
        assert net.ordering == min(orbit)
        for c in orbit:
            assert make_network(c, net.bridges) == net


def test_arcs_are_shared_by_every_consistent_ordering():
    for net in all_networks(6):
        orbit = consistent_orderings(net)
        for s in all_splits(net.n):
            if s.is_trivial or not all(splits_compatible(s, b) for b in net.bridges):
                continue
            hits = [is_arc(s, c) for c in orbit]
            assert all(hits) or not any(hits)


# ---------------------------------------------------------------------------
# displayed splits
# ---------------------------------------------------------------------------


def test_displays_split_examples(n1, split5):
    assert displays_split(n1, split5(4, 5))
    assert not displays_split(n1, split5(2, 3))
    assert all(displays_split(n1, split5(t)) for t in range(1, 6))


def test_sigma_examples(n1, split5, caterpillar5):
    assert set(sigma_splits(n1).nontrivial) == {split5(1, 2), split5(4, 5), split5(3, 4)}
    assert len(sigma_splits(n1).splits) == 8
    tour = make_network((1, 2, 3, 4, 5))
    assert set(sigma_splits(tour).splits) == set(arc_splits(tour.ordering))
    assert set(sigma_splits(caterpillar5).nontrivial) == {split5(1, 2), split5(4, 5)}


@pytest.mark.parametrize("n", range(3, 8))
def test_sigma_sizes_for_tours_and_trees(n):
    for net in vertex_set(n, 0)[0]:
        assert len(sigma_splits(net).splits) == n + n * (n - 3) // 2
    for net in vertex_set(n, n - 3)[0]:
        assert len(sigma_splits(net).splits) == 2 * n - 3


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_tree_splits_match_edge_removal(n):
    for net in vertex_set(n, n - 3)[0]:
        g = build_graph(net)
        found = set()
        for t in range(len(g.edges)):
            rest = [(u, v) for s, (u, v, _) in enumerate(g.edges) if s != t]
            side = next(c for c in components(g.nodes, rest) if 1 not in c)
            found.add(Split.from_part([v for v in side if isinstance(v, int)], n))
        assert found == set(sigma_splits(net).splits)


def test_displayed_splits_match_minimal_cuts():
    for net in all_networks(6):
        g = build_graph(net)
        oracle = minimal_cut_splits(g, max_size=2)
        assert oracle == set(sigma_splits(net).splits)
        assert {s for s in all_splits(net.n) if displays_split(net, s)} == oracle


def test_no_minimal_cut_needs_three_edges():
    for net in all_networks(5):
        g = build_graph(net)
        assert minimal_cut_splits(g, max_size=3) == minimal_cut_splits(g, max_size=2)


def test_graph_cut_records_are_minimal_cuts():
    for net in all_networks(6):
        g = build_graph(net)
        for s, cut in g.cuts.items():
            rest = [(u, v) for t, (u, v, _) in enumerate(g.edges) if t not in cut]
            comps = components(g.nodes, rest)
            assert len(comps) == 2
            leaves = {frozenset(v for v in c if isinstance(v, int)) for c in comps}
            assert leaves == {frozenset(s.part), frozenset(s.complement)}


def test_refines_examples(n1, split5):
    assert refines(n1, split_system(5))
    assert refines(n1, sigma_splits(n1))
    assert not refines(n1, split_system(5, [split5(2, 3)]))


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------


def test_build_graph_examples(n1, caterpillar5):
    g = build_graph(n1)
    assert len(g.nodes) == 10 and len(g.edges) == 10
    assert sum(len(v) for v in g.adjacency().values()) == 20
    g = build_graph(make_network((1, 2, 3, 4, 5)))
    assert len(g.nodes) == 10 and len(g.edges) == 10
    g = build_graph(caterpillar5)
    assert len(g.nodes) == 8 and len(g.edges) == 7
    assert not g.weighted


def test_graph_structure_on_all_small_networks():
    for net in all_networks(6):
        g = build_graph(net)
        adj = g.adjacency()
        sub = Subdivision(net.ordering.seq, net.bridges)
        sizes = [len(e) for e in sub.elements]
        cycles = sum(1 for m in sizes if m >= 4)
        internal = [v for v in g.nodes if not isinstance(v, int)]
        assert len(internal) == sum(m if m >= 4 else 1 for m in sizes)
        assert all(len(adj[leaf]) == 1 for leaf in range(1, net.n + 1))
        assert all(len(adj[v]) == 3 for v in internal)
        assert len(components(g.nodes, [(u, v) for u, v, _ in g.edges])) == 1
        assert len(g.edges) == len(g.nodes) - 1 + cycles
        assert cycles == len(net.bridges) + 1 - sum(1 for m in sizes if m == 3)


def test_build_graph_rejects_undisplayed_weights(n1, split5):
    with pytest.raises(WeightSystemMismatch):
        build_graph(n1, {split5(2, 3): 1})
