"""Exact MBSP solver: best-bound-first branch-and-cut with cycle branching."""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field

from . import cuts as C
from . import lp as LP
from .graph import Bipartition, SignedGraph, induced, is_balanced

INT_TOL = 1e-6
BINDING_TOL = 1e-6

CYCLE = "cycle"
STANDARD = "standard"


@dataclass
class SolveParams:
    time_limit_seconds: float = 3600.0
    max_cut_rounds: int = 10
    max_cuts_per_round: int = 100
    branching: str = CYCLE  # "cycle" | "standard"
    seed: int = 0

    def __post_init__(self):
        if self.branching not in (CYCLE, STANDARD):
            raise ValueError(f"unknown branching mode {self.branching!r}")


@dataclass
class SearchNode:
    fixings: dict  # var -> 0 or 1
    extra_rows: list  # branching rows (coeffs, rel, rhs)
    bound: float
    depth: int
    cuts: tuple  # inherited cuts beyond the initial formulation


@dataclass
class SolveResult:
    best: Bipartition
    lower_bound: int
    upper_bound: float
    status: str  # "optimal" | "time_limit"
    stats: dict = field(default_factory=dict)


def _is_integral(y):
    return all(v <= INT_TOL or v >= 1.0 - INT_TOL for v in y)


def _decode_integral(g, y):
    """Bipartition for an integral point whose selection is balanced, else None."""
    selected = frozenset(i for i, v in enumerate(y) if v > 0.5)
    sub, vmap = induced(g, selected)
    w = is_balanced(sub)
    if w is None:
        return None
    w_orig = frozenset(vmap[i] for i in w)
    return Bipartition(selected - w_orig, w_orig)


def branch(node: SearchNode, y, active_cuts, mode: str):
    """Create 2 or 3 children partitioning the node's integral region."""
    frac = [i for i, v in enumerate(y) if INT_TOL < v < 1.0 - INT_TOL]
    if not frac:
        raise ValueError("branch() requires a fractional point")

    cycle = None
    if mode == CYCLE:
        candidates = []
        for cut in active_cuts:
            if cut.support_cycle is None:
                continue
            if abs(cut.violation(y)) > BINDING_TOL:
                continue
            if not any(INT_TOL < y[v] < 1.0 - INT_TOL for v in cut.support_cycle):
                continue
            candidates.append(tuple(sorted(cut.support_cycle)))
        if candidates:
            cycle = min(candidates, key=lambda c: (len(c), c))

    children = []
    if cycle is None:
        i = min(frac, key=lambda v: (abs(y[v] - 0.5), v))
        for val in (0, 1):
            fixings = dict(node.fixings)
            fixings[i] = val
            children.append(
                SearchNode(fixings, list(node.extra_rows), node.bound, node.depth + 1, node.cuts)
            )
        return children

    frac_in_cycle = [v for v in cycle if INT_TOL < y[v] < 1.0 - INT_TOL]
    i_star = min(frac_in_cycle, key=lambda v: (abs(y[v] - 0.5), v))
    c2 = [v for v in cycle if v != i_star]
    row = ({v: 1.0 for v in c2}, "<=", float(len(c2) - 1))

    # (i) i* out, all of C2 in
    if not any(node.fixings.get(v) == 0 for v in c2):
        fixings = dict(node.fixings)
        fixings[i_star] = 0
        for v in c2:
            fixings[v] = 1
        children.append(
            SearchNode(fixings, list(node.extra_rows), node.bound, node.depth + 1, node.cuts)
        )
    # (ii) i* in, C2 not all in
    fixings = dict(node.fixings)
    fixings[i_star] = 1
    children.append(
        SearchNode(fixings, list(node.extra_rows) + [row], node.bound, node.depth + 1, node.cuts)
    )
    # (iii) i* out, C2 not all in
    fixings = dict(node.fixings)
    fixings[i_star] = 0
    children.append(
        SearchNode(fixings, list(node.extra_rows) + [row], node.bound, node.depth + 1, node.cuts)
    )
    return children


def _build_lp(g, active_cuts, node: SearchNode):
    bounds = []
    for i in range(g.n):
        fx = node.fixings.get(i)
        if fx is None:
            bounds.append((0.0, 1.0))
        else:
            bounds.append((float(fx), float(fx)))
    rows = [cut.row() for cut in active_cuts]
    rows.extend(node.extra_rows)
    return LP.LinearProgram([1.0] * g.n, rows, bounds)


def solve(g: SignedGraph, params: SolveParams = None) -> SolveResult:
    """Best-bound-first branch-and-cut over formulation relaxations."""
    if params is None:
        params = SolveParams()
    start = time.monotonic()
    deadline = start + params.time_limit_seconds

    stats = {"nodes": 0, "lp_solves": 0, "cuts_by_kind": {}, "wall_time": 0.0}

    if g.n == 0:
        return SolveResult(Bipartition(), 0, 0.0, "optimal", stats)

    pool = C.CutPool()
    initial = list(C.initial_formulation(g))
    for cut in initial:
        pool.add(cut)

    best = Bipartition()
    lb = 0

    def note_cut(cut):
        stats["cuts_by_kind"][cut.kind] = stats["cuts_by_kind"].get(cut.kind, 0) + 1

    root = SearchNode({}, [], float(g.n), 0, ())
    counter = 0
    heap = [(-root.bound, counter, root)]
    status = "optimal"
    ub_on_stop = None

    while heap:
        if time.monotonic() >= deadline:
            status = "time_limit"
            ub_on_stop = max(lb, max(-h[0] for h in heap))
            break
        _, _, node = heapq.heappop(heap)
        if node.bound <= lb + 1 - INT_TOL:
            continue
        stats["nodes"] += 1

        # cut loop; the root starts from the full formulation, deeper nodes
        # from the rows that were tight at the parent (the pool re-supplies
        # anything that becomes violated again)
        if node.depth == 0:
            active_cuts = list(initial) + list(node.cuts)
        else:
            active_cuts = list(node.cuts)
        rounds = 0
        y = None
        bound = None
        prev_bound = None
        prune = False
        timed_out = False
        while True:
            lp_ = _build_lp(g, active_cuts, node)
            sol = LP.solve(lp_)
            stats["lp_solves"] += 1
            if sol.status != "optimal":
                prune = True
                break
            bound = sol.objective_value
            y = sol.values
            if bound <= lb + 1 - INT_TOL:
                prune = True
                break
            integral = _is_integral(y)
            if integral:
                decoded = _decode_integral(g, y)
                if decoded is not None:
                    if decoded.size() > lb:
                        best, lb = decoded, decoded.size()
                    prune = True
                    break
                # integral but unbalanced: exact separation must cut it off
            else:
                p = C.rounding_heuristic(g, y)
                if p.size() > lb:
                    best, lb = p, p.size()
            stalled = prev_bound is not None and prev_bound - bound < 0.005
            if (rounds >= params.max_cut_rounds or stalled) and not integral:
                break
            prev_bound = bound
            if time.monotonic() >= deadline:
                timed_out = True
                break
            new_cuts = C.scan_pool(pool, y, params.max_cuts_per_round)
            if not new_cuts:
                new_cuts = C.separate_odd_negative_cycle(g, y, params.max_cuts_per_round)
                lifted = []
                for cut in new_cuts:
                    if cut.support_cycle is not None and len(cut.support_cycle) <= 20:
                        cut = C.lift_odd_negative_cycle(g, cut)
                    lifted.append(cut)
                new_cuts = lifted
                if len(new_cuts) < params.max_cuts_per_round:
                    new_cuts += C.separate_clique(g, y, limit=params.max_cuts_per_round - len(new_cuts))
                if len(new_cuts) < params.max_cuts_per_round:
                    new_cuts += C.separate_lifted_odd_hole(g, y, limit=params.max_cuts_per_round - len(new_cuts))
            if not new_cuts:
                break
            if not integral:
                # rows gone slack at the current point only pad the tableau;
                # the pool re-supplies any that become violated again
                active_cuts = [c for c in active_cuts if c.violation(y) >= -0.1]
            added = 0
            active_keys = {c.key for c in active_cuts}
            for cut in new_cuts:
                if cut.key in active_keys:
                    continue
                active_cuts.append(cut)
                active_keys.add(cut.key)
                pool.add(cut)
                note_cut(cut)
                added += 1
            if added == 0:
                break
            rounds += 1

        if prune:
            continue
        if timed_out or y is None:
            status = "time_limit"
            open_bounds = [-h[0] for h in heap]
            if bound is not None:
                open_bounds.append(bound)
            ub_on_stop = max([lb] + open_bounds)
            break

        # children inherit only the cuts still doing work at this node's point;
        # anything dropped stays in the pool and can return via scan_pool
        tight = tuple(cut for cut in active_cuts if cut.violation(y) >= -0.01)
        node = SearchNode(node.fixings, node.extra_rows, bound, node.depth, tight)

        if _is_integral(y):
            # unbalanced integral point survived the cut loop: branch cannot
            # help, but exact separation guarantees this is unreachable
            raise AssertionError("integral infeasible point not separated")

        for child in branch(node, y, active_cuts, params.branching):
            child.bound = bound
            if child.bound <= lb + 1 - INT_TOL:
                continue
            counter += 1
            heapq.heappush(heap, (-child.bound, counter, child))

    stats["wall_time"] = time.monotonic() - start
    if status == "optimal":
        ub = float(lb)
    else:
        ub = float(ub_on_stop if ub_on_stop is not None else max(lb, g.n))
    return SolveResult(best, lb, ub, status, stats)
