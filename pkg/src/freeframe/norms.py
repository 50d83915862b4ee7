"""Certified operator-norm intervals in the reduced C*-algebra of F_2.

Lower bounds come from the left regular representation compressed to the
span of ``e_w`` with ``|w| <= R``: for a unit vector ``v`` supported in the
ball, ``||lambda(x) v||`` is a lower bound for ``||x||`` and it is computed
exactly (up to rounding) because every nonzero row of the compression is
kept.  Power iteration on ``T^* T`` pushes ``v`` towards the top singular
vector.

Upper bounds use the l1 norm of the coefficients and the band estimate
``||x_d|| <= (d + 1) ||x_d||_2`` for ``x_d`` supported on words of length
``d``; the smaller of the two is reported.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import sparse

from .algebra import GroupAlgebraElement, MatrixLevelElement
from .free_group import _mul, _rank, ball, ball_size, sphere

__all__ = [
    "DEFAULT_RADIUS",
    "DEFAULT_TOL",
    "MAX_ITER",
    "NormEstimate",
    "TruncatedOperator",
    "truncated_rep",
    "power_norm",
    "norm_lower",
    "norm_upper",
    "norm_interval",
    "matrix_level_norm",
    "norm_sweep",
    "map_norm_lower",
    "sample_elements",
]

DEFAULT_RADIUS = 8
DEFAULT_TOL = 1e-8
MAX_ITER = 5000

Element = GroupAlgebraElement | MatrixLevelElement


@dataclass(frozen=True)
class NormEstimate:
    lower: float
    upper: float
    radius: int
    iterations: int = 0
    tolerance: float = DEFAULT_TOL
    seed: int = 0
    converged: bool = True

    def __post_init__(self):
        if not 0.0 <= self.lower <= self.upper:
            raise ValueError(f"invalid interval [{self.lower}, {self.upper}]")

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "radius": self.radius,
            "iterations": self.iterations,
            "converged": self.converged,
        }


@dataclass(frozen=True)
class TruncatedOperator:
    """Compression of ``lambda(x)`` with columns indexed by ``ball(radius)``.

    Rows are indexed by ``ball(radius + support_radius)``; the row or column
    of word ``w`` (times the matrix level) is ``rank(w)``.
    """

    matrix: sparse.csr_matrix
    radius: int
    row_radius: int
    level: int = 1

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


def truncated_rep(x: Element, R: int) -> TruncatedOperator:
    if R < 0:
        raise ValueError("radius must be nonnegative")
    cols = ball(R)
    r = x.support_radius()
    n_rows = ball_size(R + r)
    ball(R + r)  # capacity check on the row space
    n = x.level
    ncol = len(cols)
    col_idx = np.arange(ncol, dtype=np.int64)
    row_parts, col_parts, data_parts = [], [], []
    for s, c in x.items():
        rows = np.fromiter((_rank(_mul(s, w)) for w in cols), dtype=np.int64, count=ncol)
        if n == 1:
            row_parts.append(rows)
            col_parts.append(col_idx)
            data_parts.append(np.full(ncol, complex(c) if not isinstance(c, np.ndarray) else complex(c[0, 0])))
        else:
            blk = np.asarray(c)
            ii, jj = np.nonzero(blk)
            row_parts.append((rows[:, None] * n + ii[None, :]).ravel())
            col_parts.append((col_idx[:, None] * n + jj[None, :]).ravel())
            data_parts.append(np.broadcast_to(blk[ii, jj], (ncol, len(ii))).ravel())
    shape = (n_rows * n, ncol * n)
    if not row_parts:
        mat = sparse.csr_matrix(shape, dtype=complex)
    else:
        mat = sparse.coo_matrix(
            (np.concatenate(data_parts), (np.concatenate(row_parts), np.concatenate(col_parts))),
            shape=shape,
        ).tocsr()
    if not np.any(mat.data.imag):
        mat = mat.real.tocsr()
    return TruncatedOperator(mat, R, R + r, n)


def _rounding_guard(op: TruncatedOperator, terms: int) -> float:
    # relative error of ||T v|| in double precision, generously bounded
    n = max(op.shape[0], 2)
    return np.finfo(float).eps * (4 * terms + 2 * math.ceil(math.log2(n)) + 8)


def power_norm(
    T: sparse.spmatrix,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    max_iter: int = MAX_ITER,
    start: np.ndarray | None = None,
) -> tuple[float, int, bool, np.ndarray]:
    """Power iteration on ``T^* T``.

    Returns ``(theta, iterations, converged, v)`` where ``theta = ||T v||``
    for the unit vector ``v`` with the largest Rayleigh quotient seen.
    """
    ncol = T.shape[1]
    if ncol == 0 or T.nnz == 0:
        return 0.0, 0, True, np.zeros(ncol)
    cplx = np.iscomplexobj(T.data)
    if start is not None:
        v = np.asarray(start, dtype=complex if cplx else float).copy()
    else:
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(ncol)
        if cplx:
            v = v + 1j * rng.standard_normal(ncol)
    nv = np.linalg.norm(v)
    if nv == 0:
        v = np.ones(ncol, dtype=v.dtype)
        nv = np.linalg.norm(v)
    v = v / nv
    TH = T.conj().T.tocsr()
    best, best_v = 0.0, v
    prev = -1.0
    for it in range(1, max_iter + 1):
        w = T @ v
        theta = float(np.linalg.norm(w))
        if theta > best:
            best, best_v = theta, v
        if theta == 0.0:
            return 0.0, it, True, v
        if abs(theta - prev) <= tol * theta:
            return best, it, True, best_v
        prev = theta
        z = TH @ w
        v = z / np.linalg.norm(z)
    return best, max_iter, False, best_v


def norm_upper(x: Element) -> float:
    """``min(l1, sum_d (d+1) ||x_d||_2)``; blocks enter through operator norms."""
    if not x:
        return 0.0
    bands = [x.length_component(d) for d in range(x.support_radius() + 1)]
    band = math.fsum((d + 1) * b.l2_norm() for d, b in enumerate(bands) if b)
    return min(x.l1_norm(), band)


def _estimate(x: Element, R: int, tol: float, seed: int, max_iter: int, start=None):
    op = truncated_rep(x, R)
    theta, its, conv, v = power_norm(op.matrix, tol=tol, seed=seed, max_iter=max_iter, start=start)
    lower = max(0.0, float(theta * (1.0 - _rounding_guard(op, len(x)))))
    return lower, its, conv, v


def norm_lower(x: Element, R: int = DEFAULT_RADIUS, tol: float = DEFAULT_TOL, seed: int = 0, max_iter: int = MAX_ITER) -> float:
    if len(x) == 1:
        return x.l1_norm()  # c (x) lambda_s has norm ||c||
    return _estimate(x, R, tol, seed, max_iter)[0]


def norm_interval(
    x: Element, R: int = DEFAULT_RADIUS, tol: float = DEFAULT_TOL, seed: int = 0, max_iter: int = MAX_ITER
) -> NormEstimate:
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if len(x) == 1:
        exact = x.l1_norm()
        return NormEstimate(exact, exact, R, 0, tol, seed, True)
    lower, its, conv, _ = _estimate(x, R, tol, seed, max_iter)
    upper = norm_upper(x)
    # the rounding guard can leave the lower bound a hair above a tight upper bound
    if lower > upper:
        if lower > upper * (1 + 1e-12):
            raise ArithmeticError(f"lower bound {lower} exceeds upper bound {upper}")
        lower = upper
    return NormEstimate(lower, upper, R, its, tol, seed, conv)


def matrix_level_norm(
    u: MatrixLevelElement, R: int = DEFAULT_RADIUS, tol: float = DEFAULT_TOL, seed: int = 0, max_iter: int = MAX_ITER
) -> NormEstimate:
    if isinstance(u, GroupAlgebraElement):
        u = u.to_matrix_level()
    return norm_interval(u, R, tol, seed, max_iter)


def norm_sweep(
    x: Element, radii: Iterable[int], tol: float = DEFAULT_TOL, seed: int = 0, max_iter: int = MAX_ITER
) -> list[NormEstimate]:
    """Estimates over increasing radii, warm-starting each from the previous.

    Balls are prefixes of one another, so the previous top vector padded
    with zeros is a valid start, and the reported lower bounds never
    decrease.
    """
    out: list[NormEstimate] = []
    upper = norm_upper(x)
    v = None
    best = 0.0
    for R in sorted(radii):
        start = None
        if v is not None:
            start = np.zeros(ball_size(R) * x.level, dtype=v.dtype)
            start[: v.shape[0]] = v
        lower, its, conv, v = _estimate(x, R, tol, seed, max_iter, start)
        best = min(max(best, lower), upper)
        out.append(NormEstimate(best, upper, R, its, tol, seed, conv))
    return out


def sample_elements(
    level: int, samples: int, support_radius: int, seed: int, max_terms: int = 6
) -> list[MatrixLevelElement]:
    """Structured sphere-supported elements followed by random sparse ones."""
    rng = np.random.default_rng(seed)
    n = level
    eye = np.eye(n, dtype=complex)
    out: list[MatrixLevelElement] = []
    for d in range(support_radius + 1):
        words = sphere(d)
        out.append(MatrixLevelElement(n, {words[0]: eye}))
        if d > 0:
            out.append(MatrixLevelElement(n, {words[-1]: eye}))
            pick = words if len(words) <= 8 else [words[i] for i in rng.choice(len(words), 8, replace=False)]
            out.append(MatrixLevelElement(n, {w: eye for w in pick}))
    pool = ball(support_radius)
    for _ in range(samples):
        k = int(rng.integers(1, max_terms + 1))
        idx = rng.choice(len(pool), size=min(k, len(pool)), replace=False)
        coeffs = {}
        for i in idx:
            coeffs[pool[int(i)]] = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        out.append(MatrixLevelElement(n, coeffs))
    return out


def map_norm_lower(
    fn: Callable[[MatrixLevelElement], MatrixLevelElement],
    level: int = 1,
    samples: int = 8,
    R: int = 6,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    support_radius: int = 3,
    extra: Sequence[MatrixLevelElement] = (),
    threads: int = 1,
) -> float:
    """Sampled lower bound for the level-``level`` norm of a linear map.

    Each sample ``u`` contributes ``lower(fn(u)) / upper(u)``, which is a
    valid lower bound for ``||fn_n||`` whenever ``fn`` is linear.
    ``fn`` may be a :class:`~freeframe.multipliers.RadialMultiplier`.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    apply = fn.apply if hasattr(fn, "apply") else fn
    cands = list(extra) + sample_elements(level, samples, support_radius, seed)

    def ratio(item):
        i, u = item
        up = norm_upper(u)
        if up == 0.0:
            return 0.0
        img = apply(u)
        if not img:
            return 0.0
        return _estimate(img, R, tol, seed + i, MAX_ITER)[0] / up

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            ratios = list(pool.map(ratio, enumerate(cands)))
    else:
        ratios = [ratio(item) for item in enumerate(cands)]
    return max(ratios, default=0.0)
