"""Signed graph core: representation, switching, and balance detection."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

POS = "+"
NEG = "-"


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class SignedGraph:
    """Undirected signed graph on vertices 0..n-1.

    Parallel edges are allowed only as a +/- pair on the same vertex pair;
    loops are rejected.  Instances are immutable after construction and safe
    to share between solver runs.
    """

    n: int
    edges: tuple  # tuple of (u, v, sign) with u < v, deduplicated

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def e_plus(self) -> frozenset:
        return self._signed_pairs(POS)

    @property
    def e_minus(self) -> frozenset:
        return self._signed_pairs(NEG)

    @property
    def e_parallel(self) -> frozenset:
        return self.e_plus & self.e_minus

    def _signed_pairs(self, sign):
        return frozenset((u, v) for u, v, s in self.edges if s == sign)

    def adjacency(self):
        """adj[v] = list of (neighbor, sign), in edge input order."""
        adj = [[] for _ in range(self.n)]
        for u, v, s in self.edges:
            adj[u].append((v, s))
            adj[v].append((u, s))
        return adj


def build(n, edge_list) -> SignedGraph:
    """Construct a SignedGraph, normalizing pairs to u < v.

    Identical (pair, sign) entries are deduplicated silently; loops raise.
    """
    seen = set()
    edges = []
    for u, v, s in edge_list:
        if u == v:
            raise GraphError(f"loop edge ({u},{v}) not allowed")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"vertex out of range in edge ({u},{v})")
        if s not in (POS, NEG):
            raise GraphError(f"bad sign {s!r}")
        if u > v:
            u, v = v, u
        key = (u, v, s)
        if key not in seen:
            seen.add(key)
            edges.append(key)
    return SignedGraph(n, tuple(edges))


def switch(g: SignedGraph, w) -> SignedGraph:
    """Flip the sign of every edge with exactly one endpoint in w."""
    w = set(w)
    edges = []
    for u, v, s in g.edges:
        if (u in w) != (v in w):
            s = NEG if s == POS else POS
        edges.append((u, v, s))
    return SignedGraph(g.n, tuple(edges))


def induced(g: SignedGraph, s) -> tuple:
    """Subgraph induced by vertex set s, relabeled to 0..|s|-1.

    Returns (subgraph, vertex_map) where vertex_map[i] is the original
    identity of subgraph vertex i.
    """
    vmap = sorted(s)
    index = {v: i for i, v in enumerate(vmap)}
    edges = tuple(
        (index[u], index[v], sg) for u, v, sg in g.edges if u in index and v in index
    )
    return SignedGraph(len(vmap), edges), vmap


def negative_part(g: SignedGraph) -> SignedGraph:
    """Keep exactly the negative edges (one per negative pair)."""
    return SignedGraph(g.n, tuple(e for e in g.edges if e[2] == NEG))


def is_balanced(g: SignedGraph):
    """Return a switch set W with switch(g, W) all-positive, or None.

    A graph is balanced iff it has no parallel pair and no cycle with an odd
    number of negative edges.  BFS label propagation per component, O(n+m).
    """
    if g.e_parallel:
        return None
    adj = g.adjacency()
    label = [None] * g.n
    for root in range(g.n):
        if label[root] is not None:
            continue
        label[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, s in adj[u]:
                want = label[u] ^ (1 if s == NEG else 0)
                if label[v] is None:
                    label[v] = want
                    queue.append(v)
                elif label[v] != want:
                    return None
    return frozenset(v for v in range(g.n) if label[v] == 1)


@dataclass(frozen=True)
class Bipartition:
    """A feasible MBSP solution: disjoint sides (v1, v2)."""

    v1: frozenset = field(default_factory=frozenset)
    v2: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "v1", frozenset(self.v1))
        object.__setattr__(self, "v2", frozenset(self.v2))
        if self.v1 & self.v2:
            raise GraphError("bipartition sides must be disjoint")

    @property
    def selected(self) -> frozenset:
        return self.v1 | self.v2

    def size(self) -> int:
        return len(self.v1) + len(self.v2)


def is_feasible(g: SignedGraph, p: Bipartition) -> bool:
    """Check that (v1, v2) witnesses a balanced induced subgraph.

    Internal edges of each side must be positive-only pairs, cross edges
    negative-only pairs, and no parallel pair may be fully selected.
    """
    sel = p.selected
    for u, v, s in g.edges:
        if u not in sel or v not in sel:
            continue
        same = (u in p.v1) == (v in p.v1)
        if same and s == NEG:
            return False
        if not same and s == POS:
            return False
    # a fully selected parallel pair fails both sign tests above already,
    # but keep the explicit guard for clarity
    for u, v in g.e_parallel:
        if u in sel and v in sel:
            return False
    return True
