"""Exact integer linear algebra and enumeration of finite fibers.

A fiber of an integer matrix ``A`` at right-hand side ``b`` is the set of
nonnegative integer vectors ``u`` with ``A @ u == b``.  Everything here works
on Python integers and only converts to ``int64`` arrays at the boundary, so
an entry that does not fit into 64 bits raises ``OverflowError`` instead of
wrapping around.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    PointednessViolated,
    UnboundedSearch,
)

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

DEFAULT_MAX_POINTS = 200_000
FM_MAX_INEQUALITIES = 50_000


def check_int64(value: int) -> int:
    if not INT64_MIN <= value <= INT64_MAX:
        raise OverflowError(f"integer {value} does not fit into 64 bits")
    return value


def as_intvec(values, length: int | None = None) -> tuple[int, ...]:
    """Coerce ``values`` to a tuple of (checked) Python ints."""
    out = []
    for v in np.asarray(values).ravel().tolist() if isinstance(values, np.ndarray) else values:
        if isinstance(v, bool) or int(v) != v:
            raise DimensionMismatch(f"non-integer entry {v!r}")
        out.append(check_int64(int(v)))
    if length is not None and len(out) != length:
        raise DimensionMismatch(f"expected a vector of length {length}, got {len(out)}")
    return tuple(out)


@dataclass(frozen=True)
class IntMatrix:
    """Dense exact integer matrix stored row-major as nested tuples."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(as_intvec(r) for r in self.entries)
        if not rows or not rows[0]:
            raise DimensionMismatch("matrix dimensions must be positive")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("ragged matrix rows")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix":
        if isinstance(rows, np.ndarray):
            rows = rows.tolist()
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, d: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(d)] for i in range(d)])

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def dot(self, v: Sequence[int]) -> tuple[int, ...]:
        v = as_intvec(v, self.cols)
        return tuple(check_int64(sum(a * x for a, x in zip(row, v))) for row in self.entries)

    def to_numpy(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.entries)))

    def __str__(self):
        return "\n".join(" ".join(str(a) for a in row) for row in self.entries)


def block_matrix(blocks: Sequence[Sequence[IntMatrix | None]]) -> IntMatrix:
    """Assemble a block matrix; ``None`` stands for a zero block.

    Every block row needs at least one non-``None`` block to fix its height,
    and likewise for every block column.
    """
    heights = []
    for brow in blocks:
        hs = {b.rows for b in brow if b is not None}
        if len(hs) != 1:
            raise DimensionMismatch(f"inconsistent block heights {sorted(hs)}")
        heights.append(hs.pop())
    widths = []
    for j in range(len(blocks[0])):
        ws = {brow[j].cols for brow in blocks if brow[j] is not None}
        if len(ws) != 1:
            raise DimensionMismatch(f"inconsistent block widths {sorted(ws)}")
        widths.append(ws.pop())
    rows = []
    for brow, h in zip(blocks, heights):
        for i in range(h):
            row = []
            for b, w in zip(brow, widths):
                row.extend(b.entries[i] if b is not None else (0,) * w)
            rows.append(row)
    return IntMatrix.from_rows(rows)


# ---------------------------------------------------------------------------
# kernel


def kernel_basis(A: IntMatrix) -> list[tuple[int, ...]]:
    """Lattice basis of ``ker(A) ∩ Z^n``.

    Unimodular column operations bring ``A`` into column echelon form
    ``A @ U = H``; the columns of ``U`` facing zero columns of ``H`` span the
    integer kernel.
    """
    d, n = A.shape
    M = [list(r) for r in A.entries]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(j, k, q):  # col_j -= q * col_k
        for row in M:
            row[j] -= q * row[k]
        for row in U:
            row[j] -= q * row[k]

    def swap(j, k):
        for row in M:
            row[j], row[k] = row[k], row[j]
        for row in U:
            row[j], row[k] = row[k], row[j]

    pivot = 0
    for r in range(d):
        if pivot == n:
            break
        row = M[r]
        while True:
            nz = [j for j in range(pivot, n) if row[j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(row[j]))
            if j0 != pivot:
                swap(j0, pivot)
            done = True
            for j in range(pivot + 1, n):
                if row[j]:
                    colop(j, pivot, row[j] // row[pivot])
                    if row[j]:
                        done = False
            if done:
                break
        if row[pivot] != 0:
            pivot += 1
    basis = [tuple(U[i][j] for i in range(n)) for j in range(pivot, n)]
    for v in basis:
        assert all(x == 0 for x in A.dot(v))
    return basis


# ---------------------------------------------------------------------------
# pointedness via Fourier-Motzkin


def _normalize(coeffs: tuple[Fraction, ...], const: Fraction):
    scale = max((abs(c) for c in coeffs), default=Fraction(0))
    if scale == 0:
        return coeffs, const
    return tuple(c / scale for c in coeffs), const / scale


@functools.lru_cache(maxsize=256)
def is_pointed(A: IntMatrix) -> bool:
    """True iff ``ker(A) ∩ Z_{>=0}^n == {0}``.

    Decided exactly: the rational system ``x >= 0, A x = 0, sum(x) = 1`` is
    reduced by Gaussian elimination of the equalities followed by
    Fourier-Motzkin elimination of the remaining variables.  The matrix is
    pointed iff that system is infeasible.
    """
    if not isinstance(A, IntMatrix):
        raise DimensionMismatch("expected an IntMatrix")
    n = A.cols
    eqs = [[Fraction(a) for a in row] + [Fraction(0)] for row in A.entries]
    eqs.append([Fraction(1)] * n + [Fraction(1)])

    # reduced row echelon form of the equalities
    pivot_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(eqs)) if eqs[i][c] != 0), None)
        if p is None:
            continue
        eqs[r], eqs[p] = eqs[p], eqs[r]
        piv = eqs[r][c]
        eqs[r] = [x / piv for x in eqs[r]]
        for i in range(len(eqs)):
            if i != r and eqs[i][c] != 0:
                f = eqs[i][c]
                eqs[i] = [x - f * y for x, y in zip(eqs[i], eqs[r])]
        pivot_cols.append(c)
        r += 1
    pivots = {c: eqs[i] for i, c in enumerate(pivot_cols)}
    if any(all(x == 0 for x in row[:n]) and row[n] != 0 for row in eqs):
        return True
    free = [c for c in range(n) if c not in pivots]

    # x_c >= 0 rewritten as (coeffs . x_free) >= const
    ineqs: dict[tuple, Fraction] = {}

    def add(coeffs, const):
        if all(c == 0 for c in coeffs):
            ineqs.setdefault((), Fraction(-1))
            if const > 0:
                ineqs[()] = max(ineqs[()], const)
            return
        coeffs, const = _normalize(coeffs, const)
        if coeffs not in ineqs or ineqs[coeffs] < const:
            ineqs[coeffs] = const

    for c in range(n):
        if c in pivots:
            row = pivots[c]
            # x_c = row[n] - sum_f row[f] x_f >= 0
            add(tuple(-row[f] for f in free), -row[n])
        else:
            add(tuple(Fraction(int(f == c)) for f in free), Fraction(0))

    active = list(range(len(free)))
    while active:
        if ineqs.get((), Fraction(-1)) > 0:
            return True

        def cost(v):
            pos = sum(1 for k in ineqs if k and k[v] > 0)
            neg = sum(1 for k in ineqs if k and k[v] < 0)
            return pos * neg - pos - neg

        v = min(active, key=cost)
        active.remove(v)
        pos, neg, rest = [], [], {}
        for coeffs, const in ineqs.items():
            if not coeffs or coeffs[v] == 0:
                rest[coeffs] = const
            elif coeffs[v] > 0:
                pos.append((coeffs, const))
            else:
                neg.append((coeffs, const))
        ineqs = rest
        if len(pos) * len(neg) + len(ineqs) > FM_MAX_INEQUALITIES:
            raise BudgetExceeded("Fourier-Motzkin elimination exceeded its inequality budget")
        for (cp, kp), (cn, kn) in itertools.product(pos, neg):
            a, b = cp[v], -cn[v]
            add(tuple(b * x + a * y for x, y in zip(cp, cn)), b * kp + a * kn)
    return not ineqs.get((), Fraction(-1)) <= 0


# ---------------------------------------------------------------------------
# bounded search with interval propagation

_INF = math.inf


def _ceil_div(p: int, q: int) -> int:
    return -((-p) // q)


class _Propagator:
    """Bounds consistency on a system of integer equalities."""

    def __init__(self, rows, rhs):
        self.rows = [[(j, a) for j, a in enumerate(row) if a] for row in rows]
        self.rhs = list(rhs)
        self.var_rows: dict[int, list[int]] = {}
        for r, row in enumerate(self.rows):
            for j, _ in row:
                self.var_rows.setdefault(j, []).append(r)

    def trivially_infeasible(self) -> bool:
        return any(not row and b != 0 for row, b in zip(self.rows, self.rhs))

    def run(self, lo, hi, queue=None) -> bool:
        rows, rhs, var_rows = self.rows, self.rhs, self.var_rows
        pending = list(range(len(rows))) if queue is None else list(queue)
        queued = set(pending)
        while pending:
            r = pending.pop()
            queued.discard(r)
            row = rows[r]
            fmin = fmax = 0
            imin = imax = 0
            for j, a in row:
                if a > 0:
                    fmin += a * lo[j]
                    if hi[j] == _INF:
                        imax += 1
                    else:
                        fmax += a * hi[j]
                else:
                    fmax += a * lo[j]
                    if hi[j] == _INF:
                        imin += 1
                    else:
                        fmin += a * hi[j]
            b = rhs[r]
            for j, a in row:
                hinf = hi[j] == _INF
                if a > 0:
                    own_min, own_max = a * lo[j], (0 if hinf else a * hi[j])
                    omin_inf, omax_inf = imin, imax - hinf
                else:
                    own_min, own_max = (0 if hinf else a * hi[j]), a * lo[j]
                    omin_inf, omax_inf = imin - hinf, imax
                # a * x_j lies in [b - others_max, b - others_min]
                low_val = None if omax_inf else b - (fmax - own_max)
                high_val = None if omin_inf else b - (fmin - own_min)
                if a > 0:
                    nlo = _ceil_div(low_val, a) if low_val is not None else None
                    nhi = high_val // a if high_val is not None else None
                else:
                    nlo = _ceil_div(high_val, a) if high_val is not None else None
                    nhi = low_val // a if low_val is not None else None
                changed = False
                if nlo is not None and nlo > lo[j]:
                    lo[j] = nlo
                    changed = True
                if nhi is not None and nhi < hi[j]:
                    hi[j] = nhi
                    changed = True
                if lo[j] > hi[j]:
                    return False
                if changed:
                    for r2 in var_rows[j]:
                        if r2 not in queued:
                            queued.add(r2)
                            pending.append(r2)
        return True


def _positivity_certificate(A: IntMatrix) -> tuple[int, ...] | None:
    """Integer ``y`` with ``y @ A > 0`` componentwise, verified exactly."""
    from scipy.optimize import linprog

    M = A.to_numpy().astype(float)
    res = linprog(np.zeros(A.rows), A_ub=-M.T, b_ub=-np.ones(A.cols),
                  bounds=[(None, None)] * A.rows, method="highs")
    if res.status != 0:
        return None
    for denom in (1, 10, 1000, 10**6):
        fr = [Fraction(x).limit_denominator(denom) for x in res.x]
        scale = math.lcm(*(f.denominator for f in fr))
        y = tuple(int(f * scale) for f in fr)
        combo = [sum(y[i] * A.entries[i][j] for i in range(A.rows)) for j in range(A.cols)]
        if all(c > 0 for c in combo):
            return y
    return None


def _prepare(A: IntMatrix, b, lo, hi):
    """Initial propagation; returns ``(propagator, lo, hi)`` or ``None`` if infeasible.

    When single-row propagation leaves a coordinate unbounded, an exactly
    verified positive row combination ``y @ A > 0`` is appended as an
    implied equality, which bounds every coordinate.
    """
    prop = _Propagator(A.entries, b)
    lo, hi = list(lo), list(hi)
    if prop.trivially_infeasible() or not prop.run(lo, hi):
        return None
    unbounded = [j for j in range(A.cols) if hi[j] == _INF]
    if unbounded:
        y = _positivity_certificate(A)
        if y is None:
            raise UnboundedSearch(unbounded[0])
        row = [sum(y[i] * A.entries[i][j] for i in range(A.rows)) for j in range(A.cols)]
        rhs = sum(yi * bi for yi, bi in zip(y, b))
        prop = _Propagator(list(A.entries) + [row], list(b) + [rhs])
        if not prop.run(lo, hi):
            return None
        unbounded = [j for j in range(A.cols) if hi[j] == _INF]
        if unbounded:
            raise UnboundedSearch(unbounded[0])
    return prop, lo, hi


def _search(A: IntMatrix, b, lo, hi, max_points: int) -> Iterator[tuple[int, ...]]:
    """All integer ``x`` with ``A x = b`` and ``lo <= x <= hi`` (``hi`` may be inf).

    Depth-first search that branches on the unfixed coordinate with the
    smallest domain and propagates interval bounds after every assignment.
    Output order is not canonical; callers sort.
    """
    prepared = _prepare(A, b, lo, hi)
    if prepared is None:
        return
    prop, lo, hi = prepared
    n = A.cols
    count = 0
    stack = [(lo, hi)]
    while stack:
        lo, hi = stack.pop()
        best, width = -1, None
        for j in range(n):
            w = hi[j] - lo[j]
            if w > 0 and (width is None or w < width):
                best, width = j, w
        if best < 0:
            count += 1
            if count > max_points:
                raise BudgetExceeded(f"more than {max_points} points in the search region")
            yield tuple(lo)
            continue
        touched = prop.var_rows.get(best, [])
        for value in range(hi[best], lo[best] - 1, -1):
            lo2, hi2 = lo.copy(), hi.copy()
            lo2[best] = hi2[best] = value
            if prop.run(lo2, hi2, touched):
                stack.append((lo2, hi2))


def root_bounds(A: IntMatrix, b) -> list[tuple[int, int]]:
    """Per-coordinate bounds for the nonnegative solutions of ``A x = b``.

    Returns ``[]`` when propagation alone proves the fiber empty.
    """
    b = as_intvec(b, A.rows)
    prepared = _prepare(A, b, [0] * A.cols, [_INF] * A.cols)
    if prepared is None:
        return []
    _, lo, hi = prepared
    return list(zip(lo, hi))


# ---------------------------------------------------------------------------
# fibers


@dataclass(frozen=True)
class Fiber:
    """Nonnegative integer points of ``A x = b`` in lexicographic order."""

    matrix: IntMatrix
    rhs: tuple[int, ...]
    points: np.ndarray
    bounds: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    def __len__(self):
        return len(self.points)

    @functools.cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {p: i for i, p in enumerate(self.tuples())}

    def tuples(self) -> list[tuple[int, ...]]:
        return [tuple(p) for p in self.points.tolist()]

    def __contains__(self, point) -> bool:
        return tuple(point) in self.index


def make_fiber(A: IntMatrix, b, points, bounds=()) -> Fiber:
    """Build a ``Fiber`` from an arbitrary collection of points (sorted, deduplicated)."""
    b = as_intvec(b, A.rows)
    pts = sorted(set(tuple(p) for p in points))
    arr = np.array(pts, dtype=np.int64).reshape(len(pts), A.cols)
    return Fiber(A, b, arr, tuple(bounds))


def enumerate_fiber(A: IntMatrix, b, *, check_pointed: bool = True,
                    max_points: int = DEFAULT_MAX_POINTS) -> Fiber:
    """Enumerate ``{u >= 0 : A u = b}`` exactly.

    Raises ``PointednessViolated`` if ``A`` has a nonzero nonnegative kernel
    vector, ``UnboundedSearch`` if no finite coordinate bound can be
    certified and ``BudgetExceeded`` beyond ``max_points`` points.
    """
    b = as_intvec(b, A.rows)
    if check_pointed and not is_pointed(A):
        raise PointednessViolated("ker(A) contains a nonzero nonnegative vector; fibers may be infinite")
    bounds = root_bounds(A, b)
    if not bounds:
        return make_fiber(A, b, [], ())
    lo = [l for l, _ in bounds]
    hi = [h for _, h in bounds]
    pts = list(_search(A, b, lo, hi, max_points))
    fiber = make_fiber(A, b, pts, bounds)
    return fiber


def brute_force_fiber(A: IntMatrix, b, bounds) -> list[tuple[int, ...]]:
    """Naive scan of a box; only usable for tiny instances."""
    b = as_intvec(b, A.rows)
    ranges = [range(lo, hi + 1) for lo, hi in bounds]
    return sorted(p for p in itertools.product(*ranges) if A.dot(p) == b)
