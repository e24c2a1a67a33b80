"""Move sets: kernel vectors used as steps of a fiber walk.

Besides the container type this module holds the sign-compatible order,
a bounded brute-force Graver oracle and the explicit Graver and reduced
lexicographic Gröbner bases of the ``A_k`` family.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import BoxTooLarge, BudgetExceeded, DimensionMismatch, MoveNotInKernel, NegativeInput, SizeBudgetExceeded
from .lattice import IntMatrix, _search, as_intvec, enumerate_fiber

KINDS = ("graver", "groebner-lex", "oracle", "custom")

DEFAULT_MAX_SIGNED_MOVES = 2**17 + 64
DEFAULT_ORACLE_POINTS = 500_000


def _safe_product(A: np.ndarray, V: np.ndarray) -> np.ndarray:
    """``A @ V.T`` in int64, refusing inputs that could overflow."""
    if A.size == 0 or V.size == 0:
        return np.zeros((A.shape[0], V.shape[0]), dtype=np.int64)
    bound = int(np.abs(A).max()) * int(np.abs(V).max()) * A.shape[1]
    if bound >= 2**62:
        raise OverflowError("kernel check could overflow 64-bit arithmetic")
    return A @ V.T


def normalize_sign(v: np.ndarray) -> np.ndarray:
    """Row-wise representative of ``{v, -v}``: the lexicographically larger one."""
    v = np.atleast_2d(np.asarray(v, dtype=np.int64))
    nz = v != 0
    first = np.where(nz.any(axis=1), nz.argmax(axis=1), 0)
    sign = np.sign(v[np.arange(len(v)), first])
    sign[sign == 0] = 1
    return v * sign[:, None]


@dataclass(frozen=True, eq=False)
class MoveSet:
    """An ordered set of kernel vectors, one representative per ``±`` pair."""

    matrix: IntMatrix
    kind: str
    vectors: np.ndarray

    @classmethod
    def from_vectors(cls, matrix: IntMatrix, vectors, kind: str = "custom", check: bool = True) -> "MoveSet":
        if kind not in KINDS:
            raise ValueError(f"unknown move set kind {kind!r}; expected one of {KINDS}")
        V = np.asarray(list(vectors) if not isinstance(vectors, np.ndarray) else vectors, dtype=np.int64)
        if V.size == 0:
            V = np.zeros((0, matrix.cols), dtype=np.int64)
        elif V.ndim == 1:
            V = V.reshape(1, -1)
        if V.ndim != 2 or V.shape[1] != matrix.cols:
            raise DimensionMismatch(f"moves have length {V.shape[1]}, matrix has {matrix.cols} columns")
        if check and len(V):
            if not V.any(axis=1).all():
                raise MoveNotInKernel("the zero vector is not a move")
            bad = np.flatnonzero(_safe_product(matrix.to_numpy(), V).any(axis=0))
            if len(bad):
                raise MoveNotInKernel(f"move {V[bad[0]].tolist()} is not in the kernel")
        V = normalize_sign(V) if len(V) else V
        if len(V):
            _, first = np.unique(V, axis=0, return_index=True)
            V = V[np.sort(first)]
        V.setflags(write=False)
        return cls(matrix, kind, V)

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.tuples())

    def tuples(self) -> list[tuple[int, ...]]:
        return [tuple(v) for v in self.vectors.tolist()]

    def signed(self) -> np.ndarray:
        """All moves with both signs (representatives first)."""
        return np.vstack([self.vectors, -self.vectors])

    def signed_set(self) -> set[tuple[int, ...]]:
        return {tuple(v) for v in self.signed().tolist()}

    def same_moves(self, other: "MoveSet") -> bool:
        return set(self.tuples()) == set(other.tuples())

    def to_json(self) -> dict:
        return {"kind": self.kind, "moves": self.vectors.tolist()}

    @classmethod
    def from_json(cls, matrix: IntMatrix, data: dict) -> "MoveSet":
        return cls.from_vectors(matrix, data["moves"], data.get("kind", "custom"))

    @classmethod
    def from_csv(cls, matrix: IntMatrix, path) -> "MoveSet":
        return cls.from_vectors(matrix, read_vectors_csv(path), "custom")

    def write_csv(self, path):
        write_vectors_csv(path, self.vectors.tolist())


def read_vectors_csv(path) -> list[tuple[int, ...]]:
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            cells = [c.strip() for c in row if c.strip()]
            if not cells or cells[0].startswith("#"):
                continue
            rows.append(tuple(int(c) for c in cells))
    return rows


def write_vectors_csv(path, rows: Iterable[Sequence[int]]):
    with open(path, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


# ---------------------------------------------------------------------------
# sign-compatible order


def conformal_leq(u, v) -> bool:
    """``u ⊑ v``: same sign pattern where both are nonzero and ``|u_i| <= |v_i|``."""
    u, v = as_intvec(u), as_intvec(v)
    if len(u) != len(v):
        raise DimensionMismatch("vectors of different length")
    return all(a * b >= 0 and abs(a) <= abs(b) for a, b in zip(u, v))


def chi(v) -> tuple[int, ...]:
    v = as_intvec(v)
    if any(x < 0 for x in v):
        raise NegativeInput(f"chi needs a nonnegative vector, got {v}")
    return tuple(int(x != 0) for x in v)


def _dominated(P: np.ndarray, G: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """For each row p of ``P``: is some row g of ``G`` with ``g ⊑ p``?"""
    out = np.zeros(len(P), dtype=bool)
    if len(G) == 0:
        return out
    absG = np.abs(G)
    for start in range(0, len(P), chunk):
        blk = P[start:start + chunk]
        ok = ((blk[:, None, :] * G[None, :, :]) >= 0) & (absG[None, :, :] <= np.abs(blk)[:, None, :])
        out[start:start + chunk] = ok.all(axis=2).any(axis=1)
    return out


def _kernel_box(A: IntMatrix, radius: int, max_points: int) -> np.ndarray:
    n = A.cols
    try:
        pts = list(_search(A, (0,) * A.rows, [-radius] * n, [radius] * n, max_points))
    except BudgetExceeded as exc:
        raise BoxTooLarge(f"more than {max_points} kernel points in [-{radius},{radius}]^{n}") from exc
    arr = np.array(pts, dtype=np.int64).reshape(len(pts), n)
    return arr[arr.any(axis=1)]


def _minimal_elements(P: np.ndarray) -> np.ndarray:
    # a dominating element always has strictly smaller 1-norm, so a single
    # sweep in norm order that only compares against accepted minima suffices
    order = np.argsort(np.abs(P).sum(axis=1), kind="stable")
    minimal: list[np.ndarray] = []
    G = np.zeros((0, P.shape[1]), dtype=np.int64)
    for i in order:
        p = P[i]
        if len(G) and _dominated(p[None, :], G)[0]:
            continue
        minimal.append(p)
        G = np.array(minimal)
    return G


@dataclass(frozen=True)
class OracleResult:
    moveset: MoveSet
    complete: bool
    radius: int
    kernel_points: int


def graver_oracle(A: IntMatrix, B: int, max_points: int = DEFAULT_ORACLE_POINTS) -> OracleResult:
    """Brute-force Graver basis restricted to the box ``[-B, B]^n``.

    ``complete`` is set when every nonzero kernel point of the doubled box
    ``[-2B, 2B]^n`` is dominated by a returned element, i.e. no minimal
    element was cut off between radius ``B`` and ``2B``.
    """
    if B < 1:
        raise ValueError("box radius must be at least 1")
    P = _kernel_box(A, B, max_points)
    G = _minimal_elements(P)
    ms = MoveSet.from_vectors(A, G, "oracle")
    outer = _kernel_box(A, 2 * B, max_points)
    complete = bool(_dominated(outer, ms.signed()).all()) if len(outer) else True
    return OracleResult(ms, complete, B, len(P))


# ---------------------------------------------------------------------------
# explicit bases of A_k


def _bits(count: int, width: int) -> np.ndarray:
    idx = np.arange(count, dtype=np.int64)
    return ((idx[:, None] >> np.arange(width - 1, -1, -1)) & 1).astype(np.int64)


def _standard_slack_moves(k: int) -> np.ndarray:
    """(e_i, -e_i, 0, 0, 0, 0) and (0, 0, e_i, -e_i, 0, 0) for i in [k]."""
    n = 4 * k + 2
    out = np.zeros((2 * k, n), dtype=np.int64)
    for i in range(k):
        out[i, i], out[i, k + i] = 1, -1
        out[k + i, 2 * k + i], out[k + i, 3 * k + i] = 1, -1
    return out


def cross_box_moves(k: int) -> np.ndarray:
    """All ``(x, -1-x, y, 1-y, -1, 1)`` with ``x ∈ {0,-1}^k``, ``y ∈ {0,1}^k``."""
    bits = _bits(4**k, 2 * k)
    x = -bits[:, :k]
    y = bits[:, k:]
    m = len(bits)
    return np.hstack([x, -1 - x, y, 1 - y, -np.ones((m, 1), np.int64), np.ones((m, 1), np.int64)])


def graver_Ak(k: int, max_signed: int = DEFAULT_MAX_SIGNED_MOVES) -> MoveSet:
    """Graver basis of ``A_k``: ``2^(2k+1) + 4k`` moves counting signs."""
    from .akfamily import build_Ak

    if k < 1:
        raise ValueError("k must be positive")
    signed = 2 ** (2 * k + 1) + 4 * k
    if signed > max_signed:
        raise SizeBudgetExceeded(f"Graver basis of A_{k} has {signed} signed moves (cap {max_signed})")
    V = np.vstack([cross_box_moves(k), _standard_slack_moves(k)])
    return MoveSet.from_vectors(build_Ak(k).matrix, V, "graver")


def groebner_lex_Ak(k: int) -> MoveSet:
    """Reduced lexicographic Gröbner basis of ``A_k`` (``2k + 1`` moves)."""
    from .akfamily import build_Ak

    if k < 1:
        raise ValueError("k must be positive")
    special = np.array([[0] * k + [1] * k + [0] * k + [-1] * k + [1, -1]], dtype=np.int64)
    V = np.vstack([special, _standard_slack_moves(k)])
    return MoveSet.from_vectors(build_Ak(k).matrix, V, "groebner-lex")


def is_markov_basis(A: IntMatrix, M: MoveSet, rhs_samples) -> bool:
    """Necessary-condition check: every sampled nonempty fiber graph is connected."""
    from .fibergraph import build_graph

    for b in rhs_samples:
        fiber = enumerate_fiber(A, b)
        if len(fiber) == 0:
            continue
        if build_graph(fiber, M).components() != 1:
            return False
    return True


def load_moves_file(matrix: IntMatrix, path) -> MoveSet:
    import json

    path = Path(path)
    if path.suffix == ".json":
        return MoveSet.from_json(matrix, json.loads(path.read_text()))
    return MoveSet.from_csv(matrix, path)


def signed_count(ms: MoveSet) -> int:
    return 2 * len(ms)


__all__ = [
    "MoveSet", "OracleResult", "conformal_leq", "chi", "graver_oracle", "graver_Ak",
    "groebner_lex_Ak", "is_markov_basis", "cross_box_moves", "normalize_sign",
    "read_vectors_csv", "write_vectors_csv", "load_moves_file", "signed_count",
]
