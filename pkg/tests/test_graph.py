import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mbsp import graph as G


def complete_negative(n):
    return G.build(n, [(u, v, G.NEG) for u in range(n) for v in range(u + 1, n)])


def random_graph_strategy(max_n=8):
    @st.composite
    def graphs(draw):
        n = draw(st.integers(min_value=1, max_value=max_n))
        pairs = list(itertools.combinations(range(n), 2))
        edges = []
        for u, v in pairs:
            kind = draw(st.integers(min_value=0, max_value=3))
            if kind == 1:
                edges.append((u, v, G.POS))
            elif kind == 2:
                edges.append((u, v, G.NEG))
            elif kind == 3:
                edges.append((u, v, G.POS))
                edges.append((u, v, G.NEG))
        return G.build(n, edges)

    return graphs()


def test_build_normalizes_and_counts():
    g = G.build(4, [(2, 0, "+"), (0, 1, "-"), (0, 2, "-")])
    assert g.n == 4
    assert g.m == 3
    assert (0, 2) in g.e_plus and (0, 2) in g.e_minus
    assert g.e_parallel == frozenset({(0, 2)})
    assert g.e_minus == frozenset({(0, 1), (0, 2)})


def test_build_rejects_bad_input():
    with pytest.raises(G.GraphError):
        G.build(2, [(0, 0, "+")])
    with pytest.raises(G.GraphError):
        G.build(2, [(0, 2, "+")])
    with pytest.raises(G.GraphError):
        G.build(2, [(0, 1, "x")])
    # same-sign duplicates collapse silently
    assert G.build(2, [(0, 1, "+"), (1, 0, "+")]).m == 1


def test_switch_flips_cut_edges_only():
    g = G.build(3, [(0, 1, "+"), (1, 2, "-"), (0, 2, "+")])
    h = G.switch(g, {1})
    assert (0, 1) in h.e_minus
    assert (1, 2) in h.e_plus
    assert (0, 2) in h.e_plus  # both endpoints outside W stay put


def test_switch_involution():
    g = G.build(4, [(0, 1, "+"), (1, 2, "-"), (2, 3, "+"), (0, 3, "-")])
    assert G.switch(G.switch(g, {0, 2}), {0, 2}) == g


def test_induced_subgraph():
    g = G.build(4, [(0, 1, "+"), (1, 2, "-"), (2, 3, "+"), (0, 3, "-")])
    sub, vmap = G.induced(g, {1, 2, 3})
    assert sub.n == 3
    back = {(vmap[u], vmap[v], s) for u, v, s in sub.edges}
    assert back == {(1, 2, "-"), (2, 3, "+")}


def test_negative_part():
    g = G.build(3, [(0, 1, "+"), (1, 2, "-"), (0, 2, "+"), (0, 2, "-")])
    h = G.negative_part(g)
    assert {(u, v) for u, v, _ in h.edges} == {(1, 2), (0, 2)}
    assert all(s == "-" for _, _, s in h.edges)


def test_is_balanced_even_cycle():
    g = G.build(4, [(0, 1, "-"), (1, 2, "-"), (2, 3, "+"), (0, 3, "+")])
    w = G.is_balanced(g)
    assert w is not None
    # W-switch leaves no negative edge
    assert not G.switch(g, w).e_minus


def test_is_balanced_rejects_odd_negative_triangle():
    g = G.build(3, [(0, 1, "-"), (1, 2, "-"), (0, 2, "-")])
    assert G.is_balanced(g) is None


def test_is_balanced_rejects_parallel_pair():
    g = G.build(2, [(0, 1, "+"), (0, 1, "-")])
    assert G.is_balanced(g) is None


def test_all_positive_is_balanced_with_empty_witness():
    g = G.build(3, [(0, 1, "+"), (1, 2, "+")])
    assert G.is_balanced(g) == frozenset()


@settings(max_examples=200, deadline=None)
@given(random_graph_strategy())
def test_is_balanced_witness_is_sound(g):
    w = G.is_balanced(g)
    if w is not None:
        assert not G.switch(g, w).e_minus


@settings(max_examples=200, deadline=None)
@given(random_graph_strategy(max_n=6))
def test_is_balanced_agrees_with_switch_enumeration(g):
    # oracle: balanced iff some switch kills all negative edges
    balanced = any(
        not G.switch(g, set(w)).e_minus
        for k in range(g.n + 1)
        for w in itertools.combinations(range(g.n), k)
    )
    assert (G.is_balanced(g) is not None) == balanced


def test_bipartition_validates_disjointness():
    with pytest.raises(G.GraphError):
        G.Bipartition(frozenset({0}), frozenset({0}))


def test_is_feasible():
    g = G.build(4, [(0, 1, "+"), (1, 2, "-"), (2, 3, "+"), (0, 3, "-")])
    assert G.is_feasible(g, G.Bipartition(frozenset({0, 1}), frozenset({2, 3})))
    # negative edge inside one side is infeasible
    assert not G.is_feasible(g, G.Bipartition(frozenset({1, 2}), frozenset()))
    # positive edge across sides is infeasible
    assert not G.is_feasible(g, G.Bipartition(frozenset({0}), frozenset({1})))


def test_is_feasible_rejects_parallel_pair_both_selected():
    g = G.build(2, [(0, 1, "+"), (0, 1, "-")])
    assert not G.is_feasible(g, G.Bipartition(frozenset({0, 1}), frozenset()))
    assert not G.is_feasible(g, G.Bipartition(frozenset({0}), frozenset({1})))
    assert G.is_feasible(g, G.Bipartition(frozenset({0}), frozenset()))
