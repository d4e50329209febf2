"""Instance generators whose (p,q)-property, packing and piercing numbers are known."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

import networkx as nx
import numpy as np

from .errors import InvalidInput
from .geometry import AxisBox, BoxFamily
from .oracles import OracleConfig, packing_arrays


@dataclass(frozen=True)
class GenSpec:
    kind: str
    params: dict
    seed: Optional[int] = None

    def to_json(self):
        return {"kind": self.kind, "params": dict(self.params), "seed": self.seed}


@dataclass(frozen=True)
class Certificate:
    """What is known about an instance and why.

    ``kind`` is "pigeonhole" (k clusters: (p, ceil(p/k)) for all p <= n),
    "by-construction" (the listed pairs) or "none".
    """

    kind: str
    pq_pairs: tuple = ()
    k: Optional[int] = None
    nu: Optional[int] = None
    tau: Optional[int] = None
    tau_lower: Optional[int] = None

    def implies(self, p: int, q: int, n: int) -> bool:
        if self.kind == "pigeonhole":
            return p <= n and q <= -(-p // self.k)
        return any(p2 == p and q <= q2 for p2, q2 in self.pq_pairs)

    def to_json(self):
        return {"kind": self.kind, "pq_pairs": [list(x) for x in self.pq_pairs], "k": self.k,
                "nu": self.nu, "tau": self.tau, "tau_lower": self.tau_lower}


@dataclass
class PqInstance:
    family: BoxFamily
    p: Optional[int]
    q: Optional[int]
    certificate: Certificate
    spec: GenSpec
    graph: Optional[nx.Graph] = field(default=None, repr=False)

    def meta(self):
        return {"p": self.p, "q": self.q, "certificate": self.certificate.to_json(),
                "generator": self.spec.to_json(), "seed": self.spec.seed}


def _box(lo, hi):
    return AxisBox(tuple(Fraction(v) for v in lo), tuple(Fraction(v) for v in hi))


def gen_remark_family(p: int, q: int, n: int, d: int = 2, seed: int = 0) -> PqInstance:
    """p - q pairwise-disjoint boxes plus n - (p - q) copies of one more box.

    Any p members include at least q copies, so (p, q) holds, yet the p - q + 1
    distinct boxes are pairwise disjoint and need p - q + 1 points.
    """
    if not 2 <= q <= p <= n or d < 1:
        raise InvalidInput(f"remark family needs 2 <= q <= p <= n and d >= 1, got p={p}, q={q}, n={n}, d={d}")
    rng = np.random.default_rng(seed)
    distinct = []
    for i in range(p - q + 1):
        # slot [4i, 4i+3] on axis 0 keeps them disjoint; jitter by quarters
        lo0 = Fraction(4 * i) + Fraction(int(rng.integers(0, 4)), 4)
        hi0 = lo0 + 1 + Fraction(int(rng.integers(0, 4)), 4)
        rest_lo = [Fraction(int(v)) for v in rng.integers(0, 8, d - 1)]
        rest_hi = [v + int(rng.integers(1, 5)) for v in rest_lo]
        distinct.append(_box([lo0] + rest_lo, [hi0] + rest_hi))
    boxes = distinct[:-1] + [distinct[-1]] * (n - (p - q))
    order = rng.permutation(n)
    fam = BoxFamily([boxes[i] for i in order])
    t = p - q + 1
    cert = Certificate("by-construction", ((p, q),), nu=t, tau=t)
    return PqInstance(fam, p, q, cert, GenSpec("remark-family", {"p": p, "q": q, "n": n, "d": d}, seed))


def gen_clique_union(k: int, n: int, d: int = 2, spread: int = 8, seed: int = 0) -> PqInstance:
    """k clusters of pairwise-intersecting boxes, separated along axis 0.

    Every box of cluster j contains the cluster's core point, and clusters
    occupy disjoint slabs, so nu = tau = k and any p boxes have ceil(p/k) in
    one cluster.  Cluster sizes differ by at most one.
    """
    if k < 1 or n < k or d < 1 or spread < 1:
        raise InvalidInput(f"clique-union needs 1 <= k <= n, d >= 1, spread >= 1; got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    width = 2 * spread + 2
    labels = rng.permutation(np.arange(n) % k)
    core = np.full(d, spread + 1, dtype=np.int64)
    boxes = []
    for j in labels:
        c = core.copy()
        c[0] += int(j) * width
        lo = c - rng.integers(0, spread + 1, d)
        hi = c + rng.integers(0, spread + 1, d)
        boxes.append(_box(lo.tolist(), hi.tolist()))
    cert = Certificate("pigeonhole", k=k, nu=k, tau=k)
    return PqInstance(BoxFamily(boxes), None, None, cert,
                      GenSpec("clique-union", {"k": k, "n": n, "d": d, "spread": spread}, seed))


def gen_random_p2(p: int, n: int, d: int = 2, seed: int = 0, cfg: OracleConfig = OracleConfig(),
                  max_tries: int = 10000) -> PqInstance:
    """Random integer boxes resampled until the exact packing number is <= p - 1.

    Box sides start large and shrink towards the acceptance edge, so accepted
    families tend to have packing number close to p - 1.
    """
    if p < 2 or n < 1 or d < 1:
        raise InvalidInput(f"random (p,2) family needs p >= 2, n >= 1, d >= 1")
    exact = OracleConfig(cfg.exact_size_cap, cfg.packing_cap, "exact")
    rng = np.random.default_rng(seed)
    grid = 64
    side = float(grid)
    for _ in range(max_tries):
        s = max(1, int(side))
        lo = rng.integers(0, grid, (n, d))
        hi = lo + rng.integers(max(1, s // 2), s + 1, (n, d))
        nu = len(packing_arrays(lo, hi, exact)[0])
        if nu <= p - 1:
            fam = BoxFamily(_box(a.tolist(), b.tolist()) for a, b in zip(lo, hi))
            cert = Certificate("by-construction", ((p, 2),), nu=nu)
            return PqInstance(fam, p, 2, cert, GenSpec("random-rejection", {"p": p, "n": n, "d": d}, seed))
        side = side * 1.15 if nu > p else side * 0.97
        side = min(max(side, 2.0), 4.0 * grid)
    raise InvalidInput(f"no family with nu <= {p - 1} found in {max_tries} draws")


def graph_to_boxes(g: nx.Graph) -> BoxFamily:
    """Boxes whose intersection graph is exactly ``g``.

    Nodes are taken in sorted order.  One axis per non-edge {u, v}: u gets
    [0,1], v gets [2,3], everyone else [0,3].
    """
    nodes = sorted(g.nodes())
    if not nodes:
        raise InvalidInput("graph has no vertices")
    pos = {v: i for i, v in enumerate(nodes)}
    non_edges = [(u, v) for u, v in combinations(nodes, 2) if not g.has_edge(u, v)]
    n = len(nodes)
    d = max(1, len(non_edges))
    lo = np.zeros((n, d), dtype=np.int64)
    hi = np.full((n, d), 3, dtype=np.int64)
    for ax, (u, v) in enumerate(non_edges):
        hi[pos[u], ax] = 1
        lo[pos[v], ax] = 2
    return BoxFamily(_box(a.tolist(), b.tolist()) for a, b in zip(lo, hi))


def mycielski(g: nx.Graph) -> nx.Graph:
    """Mycielskian on nodes 0..2n: originals, their shadows n..2n-1, apex 2n."""
    g = nx.convert_node_labels_to_integers(g, ordering="sorted")
    n = g.number_of_nodes()
    h = nx.Graph()
    h.add_nodes_from(range(2 * n + 1))
    for u, v in g.edges():
        h.add_edges_from([(u, v), (u, n + v), (n + u, v)])
    h.add_edges_from((n + u, 2 * n) for u in range(n))
    return h


def triangle_free_graph(m: int) -> nx.Graph:
    """Triangle-free graph with chromatic number m: Mycielski iterates of K2."""
    g = nx.complete_graph(2)
    for _ in range(m - 2):
        g = mycielski(g)
    return g


def gen_no_p2_family(m: int) -> PqInstance:
    """Boxes realising the complement of a triangle-free m-chromatic graph.

    Three pairwise-disjoint boxes would be a triangle in the original graph,
    so (3, 2) holds; a point set piercing the boxes colours the graph, so
    tau equals its chromatic number m.
    """
    if m not in (2, 3, 4, 5):
        raise InvalidInput(f"m must be in 2..5, got {m}")
    g = triangle_free_graph(m)
    fam = graph_to_boxes(nx.complement(g))
    cert = Certificate("by-construction", ((3, 2),), tau=m, tau_lower=m)
    return PqInstance(fam, 3, 2, cert, GenSpec("graph-to-boxes", {"m": m}, None), graph=g)
