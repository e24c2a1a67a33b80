"""The ``A_k`` matrix family and its fiber graphs.

``A_k`` is the ``(2k+1) x (4k+2)`` matrix::

    [ I_k  I_k  0    0    -1_k  0    ]
    [ 0    0    I_k  I_k  0     -1_k ]
    [ 0    0    0    0    1     1    ]

Write a right-hand side as ``b = (w1, w2, c)``.  Every fiber point has the
form ``(x, w1 + s - x, y, w2 + (c - s) - y, s, c - s)``, so the fiber splits
into boxes ``C_s`` indexed by the second-to-last coordinate ``s``.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from math import prod

import numpy as np

from .errors import EmptyFiber, SizeBudgetExceeded
from .fibergraph import (
    FiberGraph, build_graph, edge_connectivity, lift_matrix, min_degree, universality_lift,
    vertex_connectivity,
)
from .lattice import Fiber, IntMatrix, as_intvec, make_fiber
from .moves import _standard_slack_moves, graver_Ak, groebner_lex_Ak

DEFAULT_MAX_VERTICES = 5000
# exact flows in pure Python get slow past a few hundred vertices
SAMPLE_MAX_VERTICES = 400


def _max_vertices(value=None) -> int:
    if value is not None:
        return value
    return int(os.environ.get("FIBERGRAPHS_MAX_VERTICES", DEFAULT_MAX_VERTICES))


@dataclass(frozen=True)
class AkInstance:
    k: int
    matrix: IntMatrix

    @property
    def n(self) -> int:
        return 4 * self.k + 2

    def unit_rhs(self, scale: int = 1) -> tuple[int, ...]:
        """``scale * e_{2k+1}``."""
        return (0,) * (2 * self.k) + (scale,)


def build_Ak(k: int) -> AkInstance:
    if k < 1:
        raise ValueError("k must be positive")
    A = np.zeros((2 * k + 1, 4 * k + 2), dtype=np.int64)
    for i in range(k):
        A[i, i] = A[i, k + i] = 1
        A[k + i, 2 * k + i] = A[k + i, 3 * k + i] = 1
    A[:k, 4 * k] = -1
    A[k:2 * k, 4 * k + 1] = -1
    A[2 * k, 4 * k:] = 1
    # (1_k, 1_k, k+1) · A_k = 1_{4k+2}, so A_k is pointed
    return AkInstance(k, IntMatrix.from_rows(A))


def build_Bk(k: int) -> IntMatrix:
    """``[[A_{k+1}, I], [0, I]]`` with the identity blocks sized to ``A_{k+1}``."""
    return lift_matrix(build_Ak(k + 1).matrix)


# ---------------------------------------------------------------------------
# right-hand sides and boxes


@dataclass(frozen=True)
class RhsDecomp:
    k: int
    w1: tuple[int, ...]
    w2: tuple[int, ...]
    c: int
    lower: int
    upper: int

    @property
    def empty(self) -> bool:
        return self.lower > self.upper

    @property
    def rhs(self) -> tuple[int, ...]:
        return self.w1 + self.w2 + (self.c,)

    def box_shape(self, s: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Upper corners of the ``x`` and ``y`` boxes of ``C_s``."""
        return tuple(w + s for w in self.w1), tuple(w + self.c - s for w in self.w2)

    def box_size(self, s: int) -> int:
        wx, wy = self.box_shape(s)
        return prod(w + 1 for w in wx) * prod(w + 1 for w in wy)

    def fiber_size(self) -> int:
        return sum(self.box_size(s) for s in self.range())

    def range(self) -> range:
        return range(self.lower, self.upper + 1)


def _neg_norm(w) -> int:
    return max([0] + [-x for x in w])


def decompose_rhs(b) -> RhsDecomp:
    b = as_intvec(b)
    if len(b) < 3 or len(b) % 2 == 0:
        raise ValueError(f"right-hand side of A_k must have odd length 2k+1 >= 3, got {len(b)}")
    k = (len(b) - 1) // 2
    w1, w2, c = b[:k], b[k:2 * k], b[2 * k]
    return RhsDecomp(k, w1, w2, c, _neg_norm(w1), c - _neg_norm(w2))


@dataclass(frozen=True)
class BoxCoords:
    x: tuple[int, ...]
    y: tuple[int, ...]
    s: int


def _in_box(v, w) -> bool:
    return len(v) == len(w) and all(0 <= a <= b for a, b in zip(v, w))


def check_coords(bc: BoxCoords, d: RhsDecomp):
    if not d.lower <= bc.s <= d.upper:
        raise ValueError(f"s={bc.s} outside [{d.lower}, {d.upper}]")
    wx, wy = d.box_shape(bc.s)
    if not _in_box(bc.x, wx):
        raise ValueError(f"x={bc.x} not in box({wx})")
    if not _in_box(bc.y, wy):
        raise ValueError(f"y={bc.y} not in box({wy})")


def fiber_vert(bc: BoxCoords, d: RhsDecomp) -> tuple[int, ...]:
    check_coords(bc, d)
    wx, wy = d.box_shape(bc.s)
    v = (
        tuple(bc.x) + tuple(a - x for a, x in zip(wx, bc.x))
        + tuple(bc.y) + tuple(a - y for a, y in zip(wy, bc.y))
        + (bc.s, d.c - bc.s)
    )
    assert build_Ak(d.k).matrix.dot(v) == d.rhs
    return v


def box_coords(v, d: RhsDecomp) -> BoxCoords:
    """Inverse of :func:`fiber_vert`."""
    k = d.k
    v = as_intvec(v, 4 * k + 2)
    return BoxCoords(v[:k], v[2 * k:3 * k], v[4 * k])


def box_vertices(s: int, d: RhsDecomp) -> list[tuple[int, ...]]:
    """All points of ``C_s`` in lexicographic order."""
    if not d.lower <= s <= d.upper:
        raise ValueError(f"s={s} outside [{d.lower}, {d.upper}]")
    wx, wy = d.box_shape(s)
    k = d.k
    out = []
    for x in itertools.product(*(range(w + 1) for w in wx)):
        xs = x + tuple(a - b for a, b in zip(wx, x))
        for y in itertools.product(*(range(w + 1) for w in wy)):
            out.append(xs + y + tuple(a - b for a, b in zip(wy, y)) + (s, d.c - s))
    assert len(out) == d.box_size(s) and all(len(p) == 4 * k + 2 for p in out)
    return out


def ak_fiber(k: int, b, max_vertices: int | None = None) -> Fiber:
    """``F(A_k, b)`` assembled box by box."""
    d = decompose_rhs(b)
    if d.k != k:
        raise ValueError(f"right-hand side has length {len(d.rhs)}, expected {2 * k + 1}")
    A = build_Ak(k).matrix
    if d.empty:
        return make_fiber(A, d.rhs, [])
    cap = _max_vertices(max_vertices)
    size = d.fiber_size()
    if size > cap:
        raise SizeBudgetExceeded(f"F(A_{k}, {d.rhs}) has {size} points (cap {cap})")
    pts = [p for s in d.range() for p in box_vertices(s, d)]
    return make_fiber(A, d.rhs, pts)


def box_labels(fiber: Fiber) -> np.ndarray:
    """``s`` coordinate of each fiber point."""
    k = (fiber.matrix.cols - 2) // 4
    return fiber.points[:, 4 * k]


# ---------------------------------------------------------------------------
# cross-box moves


def graver_move(v1, v2) -> tuple[int, ...]:
    """``(-v1, v1 - 1, v2, 1 - v2, -1, 1)``; moves one box down."""
    v1, v2 = as_intvec(v1), as_intvec(v2, len(v1))
    if any(a not in (0, 1) for a in v1 + v2):
        raise ValueError("v1 and v2 must be 0/1 vectors")
    return tuple(-a for a in v1) + tuple(a - 1 for a in v1) + v2 + tuple(1 - a for a in v2) + (-1, 1)


def _support(v) -> set[int]:
    return {i for i, a in enumerate(v) if a != 0}


def is_applicable(bc: BoxCoords, v1, v2, direction: str, d: RhsDecomp) -> bool:
    """Whether ``+g(v1, v2)`` (down) or ``-g(v1, v2)`` (up) leaves the fiber point in the fiber."""
    check_coords(bc, d)
    wx, wy = d.box_shape(bc.s)
    full = set(range(d.k))
    if direction == "down":
        own, other, slack = v1, bc.x, [a - x for a, x in zip(wx, bc.x)]
        ok = bc.s > d.lower
    elif direction == "up":
        own, other, slack = v2, bc.y, [a - y for a, y in zip(wy, bc.y)]
        ok = bc.s < d.upper
    else:
        raise ValueError("direction must be 'down' or 'up'")
    sv = _support(own)
    ok = ok and sv <= _support(other) and (full - sv) <= _support(slack)
    if ok:
        g = np.array(graver_move(v1, v2))
        moved = np.array(fiber_vert(bc, d)) + (g if direction == "down" else -g)
        assert (moved >= 0).all()
        assert build_Ak(d.k).matrix.dot(moved.tolist()) == d.rhs
    return ok


def min_degree_formula(d: RhsDecomp, k: int | None = None) -> int:
    """Minimal degree of the Graver fiber graph of ``A_k`` at ``b``."""
    k = d.k if k is None else k
    if d.empty:
        raise EmptyFiber(f"F(A_{k}, {d.rhs}) is empty")
    term = [
        len(_support([w + _neg_norm(ws) for w in ws])) for ws in (d.w1, d.w2)
    ]
    if d.lower == d.upper:
        return term[0] + term[1]
    return min(term) + k + 2**k


def box_degree_formula(d: RhsDecomp, s: int) -> int:
    """Minimal degree (and vertex-connectivity) of the box ``C_s`` under Graver moves."""
    wx, wy = d.box_shape(s)
    return len(_support(wx)) + len(_support(wy))


# ---------------------------------------------------------------------------
# graphs


def graver_graph_Ak(k: int, b, max_vertices: int | None = None) -> FiberGraph:
    """Graver fiber graph of ``A_k`` built from the box structure.

    Avoids materializing the ``4^k`` cross-box moves: within a box only the
    ``2k`` slack moves act, and from a point of ``C_s`` the down moves are
    exactly those ``g(v1, v2)`` with ``v1`` allowed by the supports of
    ``x`` and its slack and ``v2`` arbitrary.
    """
    fiber = ak_fiber(k, b, max_vertices)
    d = decompose_rhs(b)
    G = FiberGraph.on_points(fiber.points, _standard_slack_moves(k))
    edges = set(G.edges())
    index = fiber.index
    v2s = np.array(list(itertools.product((0, 1), repeat=k)), dtype=np.int64)
    for s in d.range():
        if s == d.lower:
            continue
        wx, wy = d.box_shape(s)
        wx1, wy1 = d.box_shape(s - 1)
        tail = (s - 1, d.c - s + 1)
        for p in box_vertices(s, d):
            x, y = p[:k], p[2 * k:3 * k]
            slack = [a - xi for a, xi in zip(wx, x)]
            choices = [
                (0, 1) if xi and si else ((1,) if xi else (0,))
                for xi, si in zip(x, slack)
            ]
            u = index[p]
            ys = np.asarray(y, dtype=np.int64)[None, :] + v2s
            ytail = np.asarray(wy1, dtype=np.int64)[None, :] - ys
            yparts = np.hstack([ys, ytail]).tolist()
            for v1 in itertools.product(*choices):
                x2 = tuple(a - c for a, c in zip(x, v1))
                head = x2 + tuple(a - c for a, c in zip(wx1, x2))
                for yp in yparts:
                    w = index[head + tuple(yp) + tail]
                    edges.add((w, u) if w < u else (u, w))
    return FiberGraph.from_edges(len(fiber), edges, points=fiber.points, fiber=fiber)


def lex_graph_Ak(k: int, b, max_vertices: int | None = None) -> FiberGraph:
    return build_graph(ak_fiber(k, b, max_vertices), groebner_lex_Ak(k))


def graver_fiber_graph(k: int, b, max_vertices: int | None = None) -> FiberGraph:
    """Graver fiber graph, via the explicit move set when it fits in memory."""
    try:
        M = graver_Ak(k)
    except SizeBudgetExceeded:
        return graver_graph_Ak(k, b, max_vertices)
    return build_graph(ak_fiber(k, b, max_vertices), M)


def cross_box_edges(G: FiberGraph, k: int) -> list[tuple[int, int]]:
    s = G.points[:, 4 * k]
    return [(u, v) for u, v in G.edges() if s[u] != s[v]]


# ---------------------------------------------------------------------------
# verifiers


@dataclass
class Report:
    name: str
    params: dict
    values: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "name": self.name, "params": self.params, "values": self.values,
            "checks": self.checks, "notes": self.notes, "passed": self.passed,
        }


def verify_counterexample_conj1(k: int) -> Report:
    """Lex Gröbner graph on ``F(A_k, e_{2k+1})``: a single bridge joins the two boxes."""
    b = build_Ak(k).unit_rhs()
    G = lex_graph_Ak(k, b)
    delta = min_degree(G)
    lam, cut = edge_connectivity(G)
    kap, sep = vertex_connectivity(G)
    bridges = cross_box_edges(G, k)
    lo = (0,) * (3 * k) + (1,) * k + (0, 1)
    hi = (0,) * k + (1,) * k + (0,) * (2 * k) + (1, 0)
    ends = [sorted((G.point(u), G.point(v))) for u, v in bridges]
    r = Report("conj1", {"k": k, "rhs": list(b)})
    r.values = {
        "vertices": G.n_vertices, "edges": G.n_edges, "min_degree": delta,
        "edge_connectivity": lam, "vertex_connectivity": kap,
        "cross_box_edges": len(bridges), "bridge": [list(p) for e in ends for p in e],
        "min_cut_witness": [list(e) for e in cut], "separator_witness": sep,
        "counterexample": delta > lam,
    }
    r.checks = {
        "min_degree_is_k": delta == k,
        "edge_connectivity_is_1": lam == 1,
        "vertex_connectivity_is_1": kap == 1,
        "single_cross_box_edge": len(bridges) == 1,
        "bridge_endpoints": ends == [sorted((lo, hi))],
        "cut_disconnects": G.components(removed_edges=cut) > 1,
    }
    if k == 1:
        r.notes.append("k=1: minimal degree equals edge-connectivity, so no counterexample here")
    return r


def verify_graver_theorem(k: int, b, max_vertices: int | None = None) -> Report:
    """Edge-connectivity equals minimal degree for the Graver graph of ``A_k`` at ``b``."""
    d = decompose_rhs(b)
    if d.empty:
        raise EmptyFiber(f"F(A_{k}, {d.rhs}) is empty")
    fiber = ak_fiber(k, b, max_vertices)
    G = build_graph(fiber, graver_Ak(k))
    L = build_graph(fiber, groebner_lex_Ak(k))
    r = Report("graver-theorem", {"k": k, "rhs": list(d.rhs)})
    delta = min_degree(G)
    formula = min_degree_formula(d, k)
    if G.n_vertices > 1:
        lam, _ = edge_connectivity(G)
        kap, _ = vertex_connectivity(G)
    else:
        lam = kap = 0
    r.values = {
        "vertices": G.n_vertices, "edges": G.n_edges, "min_degree": delta,
        "edge_connectivity": lam, "vertex_connectivity": kap, "formula": formula,
        "boxes": [d.lower, d.upper],
    }
    r.checks["edge_connectivity_equals_min_degree"] = lam == delta or G.n_vertices == 1
    r.checks["min_degree_matches_formula"] = delta == formula

    s_of = box_labels(fiber)
    members = {s: np.flatnonzero(s_of == s).tolist() for s in d.range()}
    neighbor_ok = True
    long_jump = False
    for u in range(G.n_vertices):
        su = s_of[u]
        counts = {}
        for v in G.adjacency[u]:
            counts[s_of[v]] = counts.get(s_of[v], 0) + 1
            long_jump |= abs(int(s_of[v]) - int(su)) > 1
        for t in (su - 1, su + 1):
            if d.lower <= t <= d.upper and counts.get(t, 0) < 2**k:
                neighbor_ok = False
    r.checks["cross_box_neighbors_at_least_2^k"] = neighbor_ok
    r.checks["no_long_jumps"] = not long_jump

    same, box_ok, box_values = True, True, []
    for s, vs in members.items():
        gs, ls = G.induced_subgraph(vs), L.induced_subgraph(vs)
        same &= gs.edge_set_of_points() == ls.edge_set_of_points()
        want = box_degree_formula(d, s)
        bd = min_degree(gs)
        bk = vertex_connectivity(gs)[0] if gs.n_vertices > 1 else 0
        box_values.append({"s": s, "size": gs.n_vertices, "min_degree": bd, "vertex_connectivity": bk})
        box_ok &= bd == bk == want
    r.values["box_subgraphs"] = box_values
    r.checks["box_subgraphs_graver_equals_groebner"] = same
    r.checks["box_min_degree_equals_vertex_connectivity"] = box_ok
    r.notes.append("vertex-connectivity of the full graph is recorded, not asserted")
    return r


def sample_rhs(k: int, n: int, seed: int = 0, max_vertices: int = SAMPLE_MAX_VERTICES,
               min_vertices: int = 2, attempts: int = 10_000) -> list[tuple[int, ...]]:
    """Deterministic sample of right-hand sides with ``min_vertices <= |F(A_k, b)| <= max_vertices``.

    ``w1, w2`` are drawn from ``{-1, 0, 1, 2}^k`` and ``c`` from ``{0, ..., 4}``.
    """
    rng = np.random.default_rng(seed)
    out: list[tuple[int, ...]] = []
    seen = set()
    for _ in range(attempts):
        if len(out) == n:
            break
        w = rng.integers(-1, 3, size=2 * k).tolist()
        c = int(rng.integers(0, 5))
        b = tuple(w) + (c,)
        if b in seen:
            continue
        seen.add(b)
        d = decompose_rhs(b)
        if not d.empty and min_vertices <= d.fiber_size() <= max_vertices:
            out.append(b)
    return out


def box_csv(k: int, b, max_vertices: int | None = None) -> str:
    """Box decomposition as CSV with columns ``s, x1, ..., x_{4k+2}``."""
    d = decompose_rhs(b)
    ak_fiber(k, b, max_vertices)  # budget check
    header = ["s"] + [f"x{i + 1}" for i in range(4 * k + 2)]
    lines = [",".join(header)]
    for s in d.range():
        for p in box_vertices(s, d):
            lines.append(",".join(map(str, (s,) + p)))
    return "\n".join(lines) + "\n"


def verify_universality(k: int, N: int = 100) -> Report:
    """Lift the lex counterexample on ``A_{k+1}`` into a fiber of ``B_k`` with entries ``>= N``."""
    inst = build_Ak(k + 1)
    b = inst.unit_rhs()
    lift = universality_lift(inst.matrix, groebner_lex_Ak(k + 1), b, N)
    r = Report("universality", {"k": k, "N": N, "rhs": list(b)})

    def invariants(G):
        return (min_degree(G), edge_connectivity(G)[0], vertex_connectivity(G)[0])

    before, after = invariants(lift.base), invariants(lift.lifted)
    r.values = {
        "matrix_shape": list(lift.matrix.shape), "lifted_rhs": list(lift.rhs), "shift": lift.shift,
        "vertices": lift.lifted.n_vertices, "edges": lift.lifted.n_edges,
        "base_invariants": list(before), "lifted_invariants": list(after),
    }
    r.checks = {
        "isomorphic": True,  # universality_lift raises otherwise
        "rhs_at_least_N": min(lift.rhs) >= N,
        "invariants_preserved": before == after,
        "matrix_is_Bk": lift.matrix == build_Bk(k),
        "counterexample_survives": after[0] > after[1],
    }
    return r
