"""Metropolis walks with uniform target on fiber graphs.

Everything here is exact linear algebra on the transition matrix; no random
sampling takes place.  The reported "mixing time" is ``-1/ln(mu)`` where
``mu`` is the second largest eigenvalue modulus (SLEM).
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal

import numpy as np
from scipy.sparse import csr_matrix, issparse
from scipy.sparse.linalg import eigsh

from .errors import IsolatedVertex
from .fibergraph import FiberGraph, build_graph

DEFINITION_USED = "-1/ln(slem)"
DENSE_LIMIT = 3000
STOCHASTIC_TOL = 1e-12


def metropolis_matrix(G: FiberGraph, sparse: bool | None = None):
    """``p(u, v) = min(1/deg u, 1/deg v)`` on edges, leftover mass on the diagonal.

    Dense up to ``DENSE_LIMIT`` vertices, a CSR matrix beyond (or as forced
    by ``sparse``).
    """
    n = G.n_vertices
    if n == 0:
        raise IsolatedVertex("empty graph")
    if n == 1:
        return np.ones((1, 1))
    deg = np.array(G.degrees(), dtype=float)
    if (deg == 0).any():
        raise IsolatedVertex(f"vertex {int(np.argmin(deg))} has degree 0")
    if not G.is_connected():
        warnings.warn("graph is disconnected; the chain is reducible", stacklevel=2)
    E = np.array(G.edges(), dtype=np.int64).reshape(-1, 2)
    w = np.minimum(1 / deg[E[:, 0]], 1 / deg[E[:, 1]])
    if sparse is None:
        sparse = n > DENSE_LIMIT
    if sparse:
        out = np.zeros(n)
        np.add.at(out, E[:, 0], w)
        np.add.at(out, E[:, 1], w)
        idx = np.arange(n)
        P = csr_matrix(
            (np.concatenate([w, w, 1 - out]),
             (np.concatenate([E[:, 0], E[:, 1], idx]), np.concatenate([E[:, 1], E[:, 0], idx]))),
            shape=(n, n),
        )
    else:
        P = np.zeros((n, n))
        P[E[:, 0], E[:, 1]] = w
        P[E[:, 1], E[:, 0]] = w
        P[np.diag_indices(n)] = 1 - P.sum(axis=1)
    check_transition_matrix(P)
    return P


def check_transition_matrix(P):
    n = P.shape[0]
    if issparse(P):
        assert abs(P - P.T).max() <= STOCHASTIC_TOL, "transition matrix is not symmetric"
        assert P.data.min() >= -STOCHASTIC_TOL, "negative transition probability"
        rows = np.asarray(P.sum(axis=1)).ravel()
    else:
        assert np.abs(P - P.T).max() <= STOCHASTIC_TOL, "transition matrix is not symmetric"
        assert (P >= -STOCHASTIC_TOL).all(), "negative transition probability"
        rows = P.sum(axis=1)
    assert np.abs(rows - 1).max() <= STOCHASTIC_TOL, "rows do not sum to one"
    u = np.full(n, 1 / n)
    assert np.abs(P.T @ u - u).max() <= STOCHASTIC_TOL, "uniform distribution is not stationary"


def spectrum(P: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(P)


def slem(P) -> float:
    """Second largest eigenvalue modulus of a symmetric stochastic matrix."""
    n = P.shape[0]
    if n == 1:
        return 0.0
    if n <= DENSE_LIMIT:
        ev = np.linalg.eigvalsh(P.toarray() if issparse(P) else np.asarray(P))
        return float(max(abs(ev[0]), abs(ev[-2])))
    S = csr_matrix(P)
    top = eigsh(S, k=2, which="LA", tol=1e-12, return_eigenvectors=False)
    bottom = eigsh(S, k=1, which="SA", tol=1e-12, return_eigenvectors=False)
    return float(max(abs(bottom[0]), abs(np.sort(top)[0])))


def relaxation_time(mu: float) -> float:
    return math.inf if mu >= 1 else 1 / (1 - mu)


def alt_time(mu: float) -> float:
    if mu <= 0:
        return 0.0
    return math.inf if mu >= 1 else -1 / math.log(mu)


def mixing_time(mu: float) -> float:
    """The pinned reading of "mixing time"."""
    return alt_time(mu)


def tv_distance_curve(P: np.ndarray, max_steps: int) -> list[float]:
    """``max_i ||P^t e_i - uniform||_TV`` for ``t = 0, 1, ..., max_steps``."""
    n = len(P)
    Q = np.eye(n)
    curve = [0.5 * np.abs(Q - 1 / n).sum(axis=1).max()]
    for _ in range(max_steps):
        Q = Q @ P
        curve.append(0.5 * np.abs(Q - 1 / n).sum(axis=1).max())
        assert curve[-1] <= curve[-2] + 1e-12, "total variation distance increased"
    return curve


@dataclass
class SpectralReport:
    n: int
    slem: float
    relaxation_time: float
    alt_time: float
    tv_mixing: dict = field(default_factory=dict)
    definition_used: str = DEFINITION_USED

    @property
    def mixing_time(self) -> float:
        return self.alt_time

    def to_json(self) -> dict:
        return {
            "vertices": self.n,
            "slem": self.slem,
            "relaxation_time": self.relaxation_time,
            "alt_time": self.alt_time,
            "mixing_time": self.mixing_time,
            "definition_used": self.definition_used,
            "tv_mixing": {str(e): t for e, t in self.tv_mixing.items()},
        }


def mixing_times(P: np.ndarray, epsilons=(0.25,), max_steps: int = 10_000) -> SpectralReport:
    """SLEM-based times plus exact total-variation mixing steps.

    ``tv_mixing[eps]`` is the first ``t`` with worst-case TV distance at most
    ``eps``, or ``None`` if that takes more than ``max_steps`` steps.
    """
    mu = slem(P)
    n = P.shape[0]
    rep = SpectralReport(n, mu, relaxation_time(mu), alt_time(mu))
    eps = sorted(set(float(e) for e in epsilons), reverse=True)
    if eps and n > DENSE_LIMIT:
        # the n x n power iteration would not fit; leave the entries undecided
        rep.tv_mixing = {e: None for e in eps}
    elif eps:
        P = P.toarray() if issparse(P) else P
        Q = np.eye(n)
        t, d = 0, 0.5 * np.abs(Q - 1 / n).sum(axis=1).max()
        for e in eps:
            while d > e and t < max_steps:
                Q = Q @ P
                t += 1
                nd = 0.5 * np.abs(Q - 1 / n).sum(axis=1).max()
                assert nd <= d + 1e-12, "total variation distance increased"
                d = nd
            rep.tv_mixing[e] = t if d <= e else None
    return rep


def analyze(G: FiberGraph, epsilons=(0.25,), max_steps: int = 10_000) -> SpectralReport:
    return mixing_times(metropolis_matrix(G), epsilons, max_steps)


# ---------------------------------------------------------------------------
# experiment sweeps


def round_sig(x: float, digits: int = 6) -> str:
    """Half-even rounding to ``digits`` significant digits."""
    if x == 0 or not math.isfinite(x):
        return str(x)
    d = Decimal(repr(x))
    q = Decimal(1).scaleb(d.adjusted() - digits + 1)
    return format(d.quantize(q, rounding=ROUND_HALF_EVEN).normalize(), "f")


def _fig4_row(k: int) -> dict:
    from .akfamily import build_Ak, graver_fiber_graph, lex_graph_Ak

    b = build_Ak(k).unit_rhs()
    Gg = graver_fiber_graph(k, b)
    Gl = lex_graph_Ak(k, b)
    mg = slem(metropolis_matrix(Gg))
    ml = slem(metropolis_matrix(Gl))
    return {
        "k": k, "vertices": Gg.n_vertices,
        "slem_graver": mg, "slem_groebner": ml,
        "time_graver": mixing_time(mg), "time_groebner": mixing_time(ml),
    }


def _fig5_row(lam: int) -> dict:
    from .akfamily import build_Ak, graver_fiber_graph, lex_graph_Ak

    b = build_Ak(3).unit_rhs(lam)
    Gg = graver_fiber_graph(3, b, max_vertices=10**6)
    Gl = lex_graph_Ak(3, b, max_vertices=10**6)
    mg = slem(metropolis_matrix(Gg))
    ml = slem(metropolis_matrix(Gl))
    return {
        "lambda": lam, "vertices": Gg.n_vertices,
        "slem_graver": mg, "slem_groebner": ml,
        "time_graver": mixing_time(mg), "time_groebner": mixing_time(ml),
    }


def _run(fn, args, jobs: int) -> list[dict]:
    if jobs <= 1:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, args))


def sweep_fig4(k_max: int, k_min: int = 1, jobs: int = 1) -> list[dict]:
    """SLEM and mixing time of the Graver and lex Gröbner chains on ``F(A_k, e_{2k+1})``."""
    return _run(_fig4_row, range(k_min, k_max + 1), jobs)


def sweep_fig5(lambda_max: int, jobs: int = 1) -> list[dict]:
    """Same quantities on ``F(A_3, lambda * e_7)`` for ``lambda = 1..lambda_max``."""
    return _run(_fig5_row, range(1, lambda_max + 1), jobs)


def table_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(rows[0].keys())
    for r in rows:
        w.writerow(round_sig(v) if isinstance(v, float) else v for v in r.values())
    return buf.getvalue()


def table_dat(rows: list[dict]) -> str:
    """Whitespace-separated table with a commented header (gnuplot style)."""
    if not rows:
        return ""
    lines = ["# " + " ".join(rows[0].keys())]
    for r in rows:
        lines.append(" ".join(round_sig(v) if isinstance(v, float) else str(v) for v in r.values()))
    return "\n".join(lines) + "\n"


def chain_report(fiber, moves, epsilons=(0.25,)) -> SpectralReport:
    return analyze(build_graph(fiber, moves), epsilons)
