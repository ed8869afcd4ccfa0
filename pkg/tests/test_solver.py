import itertools

import pytest

from mbsp import cuts as C
from mbsp import graph as G
from mbsp import instances as I
from mbsp import solver as S


def integral_feasible_sets(g, fixings, extra_rows):
    """All balanced subsets satisfying the fixings and extra rows."""
    out = set()
    for k in range(g.n + 1):
        for sub in itertools.combinations(range(g.n), k):
            ss = set(sub)
            if any((v in ss) != bool(val) for v, val in fixings.items()):
                continue
            ok = True
            for coeffs, rel, rhs in extra_rows:
                lhs = sum(a for j, a in coeffs.items() if j in ss)
                if rel == "<=" and lhs > rhs + 1e-9:
                    ok = False
                    break
            if not ok:
                continue
            sg, _ = G.induced(g, ss)
            if G.is_balanced(sg) is not None:
                out.add(frozenset(ss))
    return out


def test_empty_graph():
    r = S.solve(G.build(0, []))
    assert r.status == "optimal" and r.lower_bound == 0


def test_edgeless_graph_selects_everything():
    r = S.solve(G.build(5, []))
    assert r.lower_bound == 5
    assert r.best.selected == frozenset(range(5))


def test_balanced_graph_selects_everything():
    g = I.generate_balanced(12, 0.5, seed=0)
    r = S.solve(g)
    assert r.lower_bound == 12


def test_single_parallel_pair():
    g = G.build(2, [(0, 1, "+"), (0, 1, "-")])
    r = S.solve(g)
    assert r.lower_bound == 1


def test_reports_feasible_certificate():
    for seed in range(4):
        g = I.generate(I.RandomSpec(10, 0.6, seed=seed, parallel_frac=0.5))
        r = S.solve(g)
        assert G.is_feasible(g, r.best)
        assert r.best.size() == r.lower_bound
        assert r.upper_bound == pytest.approx(r.lower_bound)


@pytest.mark.parametrize("mode", ["cycle", "standard"])
def test_matches_brute_force(mode):
    for seed in range(5):
        for spec in (
            I.RandomSpec(9, 0.6, seed=seed, neg_ratio=1.0),
            I.RandomSpec(9, 0.6, seed=seed, parallel_frac=0.5),
        ):
            g = I.generate(spec)
            opt, _ = I.brute_force(g)
            r = S.solve(g, S.SolveParams(branching=mode))
            assert r.status == "optimal"
            assert r.lower_bound == opt


def test_branching_modes_agree():
    for seed in range(4):
        g = I.generate(I.RandomSpec(11, 0.5, seed=seed, neg_ratio=2.0))
        a = S.solve(g, S.SolveParams(branching="cycle"))
        b = S.solve(g, S.SolveParams(branching="standard"))
        assert a.lower_bound == b.lower_bound


def test_rejects_unknown_branching():
    with pytest.raises(ValueError):
        S.SolveParams(branching="dive")


def test_time_limit_status():
    g = I.generate(I.RandomSpec(40, 0.75, seed=0, parallel_frac=0.25))
    r = S.solve(g, S.SolveParams(time_limit_seconds=0.05))
    assert r.status in ("optimal", "time_limit")
    if r.status == "time_limit":
        assert r.upper_bound >= r.lower_bound
        assert G.is_feasible(g, r.best)


def test_standard_branching_partitions_region():
    for seed in range(6):
        g = I.generate(I.RandomSpec(8, 0.6, seed=seed, neg_ratio=1.0))
        node = S.SearchNode({0: 1}, [], float(g.n), 1, ())
        y = [0.5] * g.n
        y[0] = 1.0
        children = S.branch(node, y, [], "standard")
        assert len(children) == 2
        parent_sets = integral_feasible_sets(g, node.fixings, node.extra_rows)
        union = set()
        for child in children:
            cs = integral_feasible_sets(g, child.fixings, child.extra_rows)
            assert not (union & cs)  # pairwise disjoint
            union |= cs
        assert union == parent_sets


def test_cycle_branching_partitions_region():
    checked = 0
    for seed in range(10):
        g = I.generate(I.RandomSpec(8, 0.7, seed=seed, neg_ratio=2.0))
        probe = C.separate_odd_negative_cycle(g, [0.9] * g.n)
        cycles = [c.support_cycle for c in probe if c.support_cycle]
        if not cycles:
            continue
        cyc = cycles[0]
        # make that cycle's cut binding with every cycle vertex fractional
        y = [0.0] * g.n
        for v in cyc:
            y[v] = (len(cyc) - 1) / len(cyc)
        binding = [
            c
            for c in probe
            if c.support_cycle and abs(c.violation(y)) <= S.BINDING_TOL
        ]
        if not binding:
            continue
        node = S.SearchNode({}, [], float(g.n), 0, ())
        children = S.branch(node, y, binding, "cycle")
        assert len(children) in (2, 3)
        parent_sets = integral_feasible_sets(g, node.fixings, node.extra_rows)
        union = set()
        for child in children:
            cs = integral_feasible_sets(g, child.fixings, child.extra_rows)
            assert not (union & cs)
            union |= cs
        assert union == parent_sets
        checked += 1
    assert checked >= 1


def test_stats_are_populated():
    g = I.generate(I.RandomSpec(10, 0.6, seed=1, parallel_frac=0.5))
    r = S.solve(g)
    assert r.stats["nodes"] >= 1
    assert r.stats["lp_solves"] >= 1
    assert r.stats["wall_time"] >= 0.0


def test_deterministic_across_runs():
    g = I.generate(I.RandomSpec(12, 0.5, seed=3, parallel_frac=0.5))
    a = S.solve(g)
    b = S.solve(g)
    assert (a.lower_bound, a.stats["nodes"], a.best) == (b.lower_bound, b.stats["nodes"], b.best)
