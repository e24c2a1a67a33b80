"""Fiber graphs and their exact connectivity invariants.

Two points of a fiber are adjacent when their difference is plus or minus
one of the moves.  Minimal degree, edge-connectivity and vertex-connectivity
are computed exactly with integral max-flow; every connectivity value comes
with a witness that can be removed to disconnect the graph.
"""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyFiber, EmptyGraph, IsomorphismError, MoveNotInKernel
from .flow import BIG, FlowNetwork
from .lattice import Fiber, IntMatrix, as_intvec, block_matrix, enumerate_fiber
from .moves import MoveSet, _safe_product

_HASH_SEED = 0x5EED_F1BE


def _hash_vector(dim: int) -> np.ndarray:
    rng = np.random.default_rng(_HASH_SEED + dim)
    return rng.integers(0, 2**63, size=dim, dtype=np.uint64) | np.uint64(1)


def _row_hashes(X: np.ndarray, r: np.ndarray) -> np.ndarray:
    # linear modulo 2**64, so hash(p + m) == hash(p) + hash(m)
    with np.errstate(over="ignore"):
        return X.astype(np.uint64) @ r if len(X) else np.zeros(0, dtype=np.uint64)


def _move_edges(points: np.ndarray, moves: np.ndarray):
    """All pairs ``i < j`` with ``points[j] - points[i] == ±moves[m]``.

    Candidates come from a linear hash and are verified exactly.  Returns
    arrays ``(i, j, move_index, sign)``.
    """
    n, dim = points.shape
    empty = (np.zeros(0, np.int64),) * 3 + (np.zeros(0, np.int64),)
    if n < 2 or len(moves) == 0:
        return empty
    r = _hash_vector(dim)
    H = _row_hashes(points, r)
    hm = _row_hashes(moves, r)
    out_i, out_j, out_m, out_s = [], [], [], []

    if n / 2 <= 2 * len(moves):
        # compare all pairwise differences against the signed move hashes
        with np.errstate(over="ignore"):
            signed_h = np.concatenate([hm, np.uint64(0) - hm])
        signed_id = np.concatenate([np.arange(len(moves)), np.arange(len(moves))])
        signed_sg = np.concatenate([np.ones(len(moves), np.int64), -np.ones(len(moves), np.int64)])
        order = np.argsort(signed_h, kind="stable")
        sh = signed_h[order]
        block = max(1, 2_000_000 // n)
        for start in range(0, n, block):
            rows = np.arange(start, min(n, start + block))
            with np.errstate(over="ignore"):
                D = H[None, :] - H[rows, None]
            pos = np.searchsorted(sh, D)
            pos[pos == len(sh)] = 0
            hit = sh[pos] == D
            hit &= np.arange(n)[None, :] > rows[:, None]
            ri, cj = np.nonzero(hit)
            if not len(ri):
                continue
            ii, jj = rows[ri], cj
            k = order[pos[ri, cj]]
            mid, sg = signed_id[k], signed_sg[k]
            ok = ((points[jj] - points[ii]) == sg[:, None] * moves[mid]).all(axis=1)
            out_i.append(ii[ok]); out_j.append(jj[ok]); out_m.append(mid[ok]); out_s.append(sg[ok])
    else:
        order = np.argsort(H, kind="stable")
        sH = H[order]
        block = max(1, 2_000_000 // n)
        for start in range(0, len(moves), block):
            mids = np.arange(start, min(len(moves), start + block))
            with np.errstate(over="ignore"):
                T = H[:, None] + hm[None, mids]
            pos = np.searchsorted(sH, T)
            pos[pos == n] = 0
            hit = sH[pos] == T
            pi, mk = np.nonzero(hit)
            if not len(pi):
                continue
            tj = order[pos[pi, mk]]
            mid = mids[mk]
            ok = (points[tj] - points[pi] == moves[mid]).all(axis=1)
            pi, tj, mid = pi[ok], tj[ok], mid[ok]
            lo, hi = np.minimum(pi, tj), np.maximum(pi, tj)
            sg = np.where(tj > pi, 1, -1)
            out_i.append(lo); out_j.append(hi); out_m.append(mid); out_s.append(sg)
    if not out_i:
        return empty
    i, j, m, s = (np.concatenate(a) for a in (out_i, out_j, out_m, out_s))
    # a simple graph: keep the first label per pair
    key = i * n + j
    _, first = np.unique(key, return_index=True)
    first = np.sort(first)
    return i[first], j[first], m[first], s[first]


@dataclass(eq=False)
class FiberGraph:
    """Simple undirected graph, optionally on lattice points with move labels.

    ``edge_labels[(i, j)] = (m, s)`` for ``i < j`` means
    ``points[j] - points[i] == s * moves[m]``.
    """

    adjacency: list[list[int]]
    points: np.ndarray | None = None
    moves: np.ndarray | None = None
    edge_labels: dict[tuple[int, int], tuple[int, int]] = field(default_factory=dict)
    multiplicity: dict[tuple[int, int], int] = field(default_factory=dict)
    fiber: Fiber | None = None
    moveset: MoveSet | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], **kw) -> "FiberGraph":
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError("loops are not allowed in a simple graph")
            adj[u].add(v)
            adj[v].add(u)
        return cls([sorted(a) for a in adj], **kw)

    @classmethod
    def on_points(cls, points, moves, **kw) -> "FiberGraph":
        P = np.asarray(points, dtype=np.int64)
        M = np.asarray(moves, dtype=np.int64).reshape(-1, P.shape[1] if P.ndim == 2 else 0)
        if P.ndim != 2:
            P = P.reshape(len(P), -1)
        i, j, m, s = _move_edges(P, M)
        g = cls.from_edges(len(P), zip(i.tolist(), j.tolist()), points=P, moves=M, **kw)
        g.edge_labels = {(a, b): (c, d) for a, b, c, d in zip(i.tolist(), j.tolist(), m.tolist(), s.tolist())}
        g.multiplicity = {e: 1 for e in g.edge_labels}
        return g

    # basic queries --------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.adjacency)

    @property
    def n_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def __len__(self):
        return self.n_vertices

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nb in enumerate(self.adjacency) for v in nb if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.adjacency[u]
        k = np.searchsorted(nb, v)
        return k < len(nb) and nb[k] == v

    def point(self, v: int) -> tuple[int, ...]:
        return tuple(self.points[v].tolist())

    def component_labels(self, removed_vertices=(), removed_edges=()) -> list[int]:
        gone = set(removed_vertices)
        cut = {tuple(sorted(e)) for e in removed_edges}
        label = [-1] * self.n_vertices
        c = 0
        for s in range(self.n_vertices):
            if label[s] >= 0 or s in gone:
                continue
            label[s] = c
            q = deque([s])
            while q:
                u = q.popleft()
                for v in self.adjacency[u]:
                    if label[v] < 0 and v not in gone and (min(u, v), max(u, v)) not in cut:
                        label[v] = c
                        q.append(v)
            c += 1
        return label

    def components(self, removed_vertices=(), removed_edges=()) -> int:
        labels = self.component_labels(removed_vertices, removed_edges)
        return len({x for x in labels if x >= 0})

    def is_connected(self) -> bool:
        return self.n_vertices > 0 and self.components() == 1

    def induced_subgraph(self, vertices: Sequence[int]) -> "FiberGraph":
        vertices = list(vertices)
        pos = {v: i for i, v in enumerate(vertices)}
        edges = [(pos[u], pos[v]) for u in vertices for v in self.adjacency[u] if v in pos and u < v]
        pts = self.points[vertices] if self.points is not None else None
        g = FiberGraph.from_edges(len(vertices), edges, points=pts, moves=self.moves)
        if self.edge_labels:
            for u, v in g.edges():
                a, b = vertices[u], vertices[v]
                m, s = self.edge_labels[(min(a, b), max(a, b))]
                g.edge_labels[(u, v)] = (m, s if a < b else -s)
        return g

    def edge_set_of_points(self) -> set[frozenset]:
        """Edges as unordered pairs of lattice points (for comparisons across graphs)."""
        return {frozenset((self.point(u), self.point(v))) for u, v in self.edges()}

    def networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n_vertices))
        g.add_edges_from(self.edges())
        return g


def graph_on_points(points, moves) -> FiberGraph:
    return FiberGraph.on_points(points, moves)


def build_graph(fiber: Fiber, M: MoveSet) -> FiberGraph:
    """Fiber graph ``F(A, b)_M``."""
    if M.vectors.shape[1] != fiber.matrix.cols:
        raise MoveNotInKernel("move length does not match the fiber dimension")
    if len(M) and _safe_product(fiber.matrix.to_numpy(), M.vectors).any():
        raise MoveNotInKernel("move set is not contained in the kernel of the fiber's matrix")
    return FiberGraph.on_points(fiber.points, M.vectors, fiber=fiber, moveset=M)


# ---------------------------------------------------------------------------
# connectivity


def min_degree(G: FiberGraph) -> int:
    if G.n_vertices == 0:
        raise EmptyGraph("minimal degree of an empty graph")
    return min(G.degrees())


def _edge_network(G: FiberGraph, extra_vertices: int = 0) -> FlowNetwork:
    net = FlowNetwork(G.n_vertices + extra_vertices)
    for u, v in G.edges():
        net.add_edge(u, v, 1)
    return net


def _require_pair(G: FiberGraph, u: int, v: int):
    if u == v:
        raise ValueError("endpoints must differ")
    if not (0 <= u < G.n_vertices and 0 <= v < G.n_vertices):
        raise IndexError("vertex out of range")


def edge_disjoint_paths(G: FiberGraph, u: int, v: int, limit: int = BIG) -> int:
    """Maximum number of edge-disjoint ``u``-``v`` paths."""
    _require_pair(G, u, v)
    return _edge_network(G).max_flow(u, v, limit)


def edge_connectivity(G: FiberGraph) -> tuple[int, list[tuple[int, int]]]:
    """Exact ``λ(G)`` and a minimum edge cut.

    The source is fixed at vertex 0 and flows run to every other vertex; each
    flow stops as soon as it reaches the best cut found so far, which starts
    at the minimal degree (the star of a minimum-degree vertex).
    """
    n = G.n_vertices
    if n < 2:
        raise ValueError("edge-connectivity needs at least two vertices")
    if not G.is_connected():
        return 0, []
    degs = G.degrees()
    v0 = int(np.argmin(degs))
    best = degs[v0]
    witness = [(min(v0, w), max(v0, w)) for w in G.adjacency[v0]]
    net = _edge_network(G)
    for t in range(1, n):
        f = net.max_flow(0, t, best)
        if f < best:
            best = f
            seen = net.residual_reachable(0)
            witness = [(u, v) for u, v in G.edges() if seen[u] != seen[v]]
    return best, sorted(witness)


def _split_network(G: FiberGraph, s: int, t: int, skip_edge=None) -> FlowNetwork:
    n = G.n_vertices
    net = FlowNetwork(2 * n)
    for v in range(n):
        net.add_arc(2 * v, 2 * v + 1, BIG if v in (s, t) else 1)
    for u, v in G.edges():
        if skip_edge is not None and {u, v} == set(skip_edge):
            continue
        net.add_arc(2 * u + 1, 2 * v, BIG)
        net.add_arc(2 * v + 1, 2 * u, BIG)
    return net


def local_vertex_connectivity(G: FiberGraph, u: int, v: int, limit: int = BIG) -> int:
    """Maximum number of internally vertex-disjoint ``u``-``v`` paths.

    An edge ``{u, v}`` counts as one path of its own.
    """
    _require_pair(G, u, v)
    if G.has_edge(u, v):
        if limit <= 1:
            return 1
        net = _split_network(G, u, v, skip_edge=(u, v))
        return 1 + net.max_flow(2 * u + 1, 2 * v, limit - 1)
    return _split_network(G, u, v).max_flow(2 * u + 1, 2 * v, limit)


def _vertex_cut(G: FiberGraph, s: int, t: int, limit: int):
    net = _split_network(G, s, t)
    f = net.max_flow(2 * s + 1, 2 * t, limit)
    if f >= limit:
        return f, None
    seen = net.residual_reachable(2 * s + 1)
    cut = [v for v in range(G.n_vertices) if seen[2 * v] and not seen[2 * v + 1]]
    return f, cut


def vertex_connectivity(G: FiberGraph) -> tuple[int, list[int]]:
    """Exact ``κ(G)`` and a minimum separating vertex set.

    With ``v`` of minimum degree, every minimum separator either misses
    ``v`` (then it separates ``v`` from a non-neighbor) or contains it (then
    it separates two non-adjacent neighbors of ``v``), so flows for those
    pairs suffice.  Complete graphs return ``n - 1`` and an empty witness.
    """
    n = G.n_vertices
    if n < 2:
        raise ValueError("vertex-connectivity needs at least two vertices")
    if not G.is_connected():
        return 0, []
    degs = G.degrees()
    if min(degs) == n - 1:
        return n - 1, []
    v = int(np.argmin(degs))
    nb = set(G.adjacency[v])
    best, witness = degs[v], sorted(nb)
    for w in range(n):
        if w != v and w not in nb:
            f, cut = _vertex_cut(G, v, w, best)
            if cut is not None and f < best:
                best, witness = f, cut
    for x, y in itertools.combinations(sorted(nb), 2):
        if not G.has_edge(x, y):
            f, cut = _vertex_cut(G, x, y, best)
            if cut is not None and f < best:
                best, witness = f, cut
    return best, sorted(witness)


def check_edge_criterion(G: FiberGraph, k: int) -> bool:
    """Every edge ``{u, v}`` has at least ``k`` edge-disjoint ``u``-``v`` paths.

    When this holds, ``λ(G) >= k``; the implication is cross-checked against
    :func:`edge_connectivity`.
    """
    if not G.is_connected():
        raise ValueError("the edge criterion needs a connected graph")
    if G.n_edges <= k:
        raise ValueError("the edge criterion needs more than k edges")
    net = _edge_network(G)
    for u, v in G.edges():
        if net.max_flow(u, v, k) < k:
            return False
    lam, _ = edge_connectivity(G)
    assert lam >= k, f"edge criterion holds for k={k} but edge-connectivity is {lam}"
    return True


def check_liu_pairs(G: FiberGraph, k: int) -> bool:
    """Every pair with a common neighbor has ``k`` internally disjoint paths."""
    if not G.is_connected():
        raise ValueError("the vertex criterion needs a connected graph")
    pairs = set()
    for w in range(G.n_vertices):
        pairs.update(itertools.combinations(G.adjacency[w], 2))
    return all(local_vertex_connectivity(G, u, v, k) >= k for u, v in sorted(pairs))


def set_to_vertex_paths(G: FiberGraph, K: Sequence[int], v: int) -> int:
    """Edge-disjoint paths joining the vertices of ``K`` to ``v``.

    A super-source adjacent to all of ``K`` is added; the flow from it to
    ``v`` counts paths that start at distinct members of ``K``.
    """
    K = list(K)
    if v in K:
        raise ValueError("target must lie outside K")
    net = _edge_network(G, extra_vertices=1)
    src = G.n_vertices
    for x in K:
        net.add_edge(src, x, 1)
    return net.max_flow(src, v)


@dataclass
class ConnectivityReport:
    n_vertices: int
    n_edges: int
    min_degree: int
    edge_connectivity: int
    vertex_connectivity: int
    components: int
    min_cut_witness: list
    separator_witness: list

    def to_json(self) -> dict:
        return {
            "vertices": self.n_vertices,
            "edges": self.n_edges,
            "min_degree": self.min_degree,
            "edge_connectivity": self.edge_connectivity,
            "vertex_connectivity": self.vertex_connectivity,
            "components": self.components,
            "min_cut_witness": [list(e) for e in self.min_cut_witness],
            "separator_witness": list(self.separator_witness),
        }


def connectivity_report(G: FiberGraph) -> ConnectivityReport:
    if G.n_vertices == 0:
        raise EmptyGraph("no vertices")
    comps = G.components()
    if G.n_vertices == 1:
        lam = kap = 0
        cut, sep = [], []
    else:
        lam, cut = edge_connectivity(G)
        kap, sep = vertex_connectivity(G)
    return ConnectivityReport(G.n_vertices, G.n_edges, min_degree(G), lam, kap, comps, cut, sep)


# ---------------------------------------------------------------------------
# boxes, slacks and the universality lift


def box_points(w) -> np.ndarray:
    """All points between ``0`` and ``w`` coordinatewise, lexicographically sorted."""
    w = as_intvec(w)
    ranges = [range(min(0, x), max(0, x) + 1) for x in w]
    pts = list(itertools.product(*ranges))
    return np.array(pts, dtype=np.int64).reshape(len(pts), len(w))


def box_graph(w) -> FiberGraph:
    """Box of ``w`` with the standard unit vectors as moves."""
    w = as_intvec(w)
    return FiberGraph.on_points(box_points(w), np.eye(len(w), dtype=np.int64))


def slack(points, b) -> np.ndarray:
    """``{(x, b - x)}`` for every row ``x``."""
    P = np.asarray(points, dtype=np.int64)
    b = np.asarray(as_intvec(b, P.shape[1]), dtype=np.int64)
    return np.hstack([P, b[None, :] - P])


@dataclass
class LiftResult:
    base: FiberGraph
    lifted: FiberGraph
    mapping: list[int]
    matrix: IntMatrix | None = None
    rhs: tuple[int, ...] | None = None
    moveset: MoveSet | None = None
    shift: int | None = None


def verify_isomorphism(base: FiberGraph, lifted: FiberGraph, mapping: Sequence[int]):
    """Raise ``IsomorphismError`` unless ``mapping`` is a graph isomorphism."""
    if base.n_vertices != lifted.n_vertices or sorted(mapping) != list(range(lifted.n_vertices)):
        raise IsomorphismError("vertex map is not a bijection")
    image = {(min(mapping[u], mapping[v]), max(mapping[u], mapping[v])) for u, v in base.edges()}
    if image != set(lifted.edges()):
        raise IsomorphismError("vertex map does not preserve edges")


def slack_lift(F, b, M) -> LiftResult:
    """Graph on the ``b``-slack of ``F`` under the ``0``-slacked moves."""
    F = np.asarray(F, dtype=np.int64)
    if F.ndim == 1:
        F = F.reshape(len(F), -1)
    b = as_intvec(b, F.shape[1])
    barr = np.array(b, dtype=np.int64)
    if ((F < 0) | (F > barr)).any():
        raise ValueError("F must lie inside box(b)")
    M = np.asarray(M.vectors if isinstance(M, MoveSet) else M, dtype=np.int64).reshape(-1, F.shape[1])
    base = FiberGraph.on_points(F, M)
    lifted = FiberGraph.on_points(slack(F, b), slack(M, (0,) * F.shape[1]))
    index = {tuple(p): i for i, p in enumerate(lifted.points.tolist())}
    mapping = [index[tuple(p)] for p in slack(F, b).tolist()]
    verify_isomorphism(base, lifted, mapping)
    return LiftResult(base, lifted, mapping)


def lift_matrix(A: IntMatrix) -> IntMatrix:
    """``[[A, I_d], [0, I_d]]``."""
    I = IntMatrix.identity(A.rows)
    return block_matrix([[A, I], [None, I]])


def universality_lift(A: IntMatrix, M: MoveSet, b, N: int) -> LiftResult:
    """Isomorphic copy of ``F(A, b)_M`` whose right-hand side is at least ``N``."""
    b = as_intvec(b, A.rows)
    if N < 0:
        raise ValueError("N must be nonnegative")
    fiber = enumerate_fiber(A, b)
    if len(fiber) == 0:
        raise EmptyFiber(f"F(A, {b}) is empty")
    d = A.rows
    shift = max([N] + [N - x for x in b])
    A2 = lift_matrix(A)
    b2 = tuple(x + shift for x in b) + (shift,) * d
    assert all(x >= N for x in b2)
    M2 = MoveSet.from_vectors(A2, np.hstack([M.vectors, np.zeros((len(M), d), np.int64)]), M.kind)
    base = build_graph(fiber, M)
    lifted_fiber = enumerate_fiber(A2, b2)
    lifted = build_graph(lifted_fiber, M2)
    index = lifted_fiber.index
    try:
        mapping = [index[tuple(p) + (shift,) * d] for p in fiber.points.tolist()]
    except KeyError as exc:
        raise IsomorphismError(f"lifted point {exc} missing from the lifted fiber") from exc
    verify_isomorphism(base, lifted, mapping)
    return LiftResult(base, lifted, mapping, A2, b2, M2, shift)


# ---------------------------------------------------------------------------
# export


def _fmt_point(p) -> str:
    return "(" + ",".join(str(x) for x in p) + ")"


def to_dot(G: FiberGraph, name: str = "fibergraph") -> str:
    lines = [f"graph {name} {{"]
    for v in range(G.n_vertices):
        label = _fmt_point(G.point(v)) if G.points is not None else str(v)
        lines.append(f'  {v} [label="{label}"];')
    for u, v in G.edges():
        lab = G.edge_labels.get((u, v))
        attr = f' [label="{lab[0]}"]' if lab is not None else ""
        lines.append(f"  {u} -- {v}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def edge_list_csv(G: FiberGraph) -> str:
    rows = ["u,v,move,sign"]
    for u, v in G.edges():
        m, s = G.edge_labels.get((u, v), ("", ""))
        rows.append(f"{u},{v},{m},{s}")
    return "\n".join(rows) + "\n"


def report_json(report: ConnectivityReport) -> str:
    return json.dumps(report.to_json(), indent=2, sort_keys=True)
