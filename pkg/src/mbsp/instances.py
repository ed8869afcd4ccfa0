"""Random instance generation, text file I/O, and a brute-force oracle."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

from .graph import NEG, POS, Bipartition, GraphError, SignedGraph, build, induced, is_balanced


def _round_half_up(x):
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class RandomSpec:
    """Parameter grid point: Group 1 sets neg_ratio, Group 2 parallel_frac."""

    n: int
    density: float
    seed: int
    neg_ratio: float = None  # |E-| / |E+|
    parallel_frac: float = None  # |E- ∩ E+| / |E|

    def __post_init__(self):
        if (self.neg_ratio is None) == (self.parallel_frac is None):
            raise ValueError("set exactly one of neg_ratio / parallel_frac")
        if self.parallel_frac is not None and self.parallel_frac <= 0:
            raise ValueError("parallel_frac must be positive (use neg_ratio for group 1)")
        if self.density * self.n * (self.n - 1) / 2 < 1:
            raise ValueError("density too low: no edges")

    @property
    def group(self) -> int:
        return 1 if self.neg_ratio is not None else 2


def generate(spec: RandomSpec) -> SignedGraph:
    """Sample a random signed graph; deterministic per seed.

    m = round(d * n(n-1)/2) distinct pairs.  Group 1 makes round(m*r/(1+r))
    of them negative; Group 2 gives round(m*f) pairs both signs and the rest
    a uniform single sign.
    """
    rng = random.Random(spec.seed)
    all_pairs = list(itertools.combinations(range(spec.n), 2))
    m = _round_half_up(spec.density * len(all_pairs))
    pairs = rng.sample(all_pairs, m)
    edges = []
    if spec.group == 1:
        r = spec.neg_ratio
        n_neg = _round_half_up(m * r / (1 + r))
        for k, (u, v) in enumerate(pairs):
            edges.append((u, v, NEG if k < n_neg else POS))
    else:
        n_par = _round_half_up(m * spec.parallel_frac)
        for k, (u, v) in enumerate(pairs):
            if k < n_par:
                edges.append((u, v, POS))
                edges.append((u, v, NEG))
            else:
                edges.append((u, v, rng.choice((POS, NEG))))
    return build(spec.n, edges)


def generate_balanced(n, density, seed) -> SignedGraph:
    """Balanced instance: signs assigned consistently with a random split."""
    rng = random.Random(seed)
    side = [rng.random() < 0.5 for _ in range(n)]
    all_pairs = list(itertools.combinations(range(n), 2))
    m = max(1, _round_half_up(density * len(all_pairs)))
    pairs = rng.sample(all_pairs, m)
    edges = [(u, v, POS if side[u] == side[v] else NEG) for u, v in pairs]
    return build(n, edges)


class ParseError(ValueError):
    def __init__(self, message, line_no):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def write(g: SignedGraph, path):
    """Write the canonical text form: header then sorted edge lines."""
    with open(path, "w") as fh:
        fh.write(format_instance(g))


def format_instance(g: SignedGraph) -> str:
    lines = [f"p mbsp {g.n} {g.m}"]
    for u, v, s in sorted(g.edges):
        lines.append(f"e {u + 1} {v + 1} {s}")
    return "\n".join(lines) + "\n"


def read(path) -> SignedGraph:
    with open(path) as fh:
        return parse_instance(fh.read())


def parse_instance(text) -> SignedGraph:
    n = None
    m_declared = None
    edges = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError("duplicate header", line_no)
            if len(parts) != 4 or parts[1] != "mbsp":
                raise ParseError(f"malformed header {line!r}", line_no)
            try:
                n, m_declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", line_no) from None
        elif parts[0] == "e":
            if n is None:
                raise ParseError("edge before header", line_no)
            if len(parts) != 4:
                raise ParseError(f"malformed edge {line!r}", line_no)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(f"malformed edge {line!r}", line_no) from None
            s = parts[3]
            if s not in (POS, NEG):
                raise ParseError(f"bad sign {s!r}", line_no)
            if u == v:
                raise ParseError(f"loop edge {u}", line_no)
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"vertex out of range in {line!r}", line_no)
            edges.append((u - 1, v - 1, s))
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", line_no)
    if n is None:
        raise ParseError("missing header", 1)
    if m_declared is not None and m_declared != len(edges):
        raise ParseError(f"header declares {m_declared} edges, found {len(edges)}", 1)
    return build(n, edges)


def _balance_witness_on_subset(g, adjacency, subset):
    """Switch set labels for the induced subgraph, or None if unbalanced.

    Also rejects subsets containing a fully selected parallel pair.
    """
    label = {}
    for root in subset:
        if root in label:
            continue
        label[root] = 0
        stack = [root]
        while stack:
            u = stack.pop()
            for v, s_set in adjacency[u]:
                if v not in subset:
                    continue
                if len(s_set) == 2:
                    return None
                want = label[u] ^ (1 if NEG in s_set else 0)
                if v not in label:
                    label[v] = want
                    stack.append(v)
                elif label[v] != want:
                    return None
    return frozenset(v for v in subset if label[v] == 1)


def brute_force(g: SignedGraph):
    """Exact optimum by descending-cardinality subset enumeration.

    Returns (optimum, witness Bipartition).  Usable up to n = 20.
    """
    if g.n > 20:
        raise ValueError("brute force capped at n = 20")
    adjacency = [{} for _ in range(g.n)]
    for u, v, s in g.edges:
        adjacency[u].setdefault(v, set()).add(s)
        adjacency[v].setdefault(u, set()).add(s)
    adjacency = [sorted((v, frozenset(ss)) for v, ss in d.items()) for d in adjacency]
    vertices = list(range(g.n))
    for k in range(g.n, -1, -1):
        for combo in itertools.combinations(vertices, k):
            subset = set(combo)
            w = _balance_witness_on_subset(g, adjacency, subset)
            if w is not None:
                return k, Bipartition(frozenset(subset - w), w)
    return 0, Bipartition()
