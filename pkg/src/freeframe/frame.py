"""The explicit cb-frame ``(lambda_{phi(n)}, a_n delta_{phi(n)})`` for C*_r(F_2).

Block ``k`` of the frame realizes ``psi(k)``: its base pairs are the words of
``ball(k)`` in word order, each paired with ``psi_symbol(k, |s|) delta_s``.
Every base pair is cloned ``M_k^2`` times with the functional divided by
``M_k^2``, where ``M_k = 2 * 3**k - 1`` is the block's base size, so block
``k`` holds ``M_k^3`` terms and

    n = sum_{r < k} M_r^3 + i,    i = p * M_k + j,    0 <= p < M_k^2, 1 <= j <= M_k.

Indices are Python integers, so ``n`` may be as large as the block cap allows
(``k <= 40``, i.e. ``n`` around ``10**57``) without overflow.  Nothing is
materialized by index: words come from :func:`~freeframe.free_group.unrank`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Iterator

from scipy import integrate

from .algebra import GroupAlgebraElement, MatrixLevelElement
from .free_group import Word, ball, ball_size, rank, reduce, sphere_size, unrank
from .multipliers import phi_tm_cb_upper, psi_symbol, schedule_sup_bound
from .norms import DEFAULT_RADIUS, DEFAULT_TOL, NormEstimate, norm_lower, norm_upper

__all__ = [
    "BLOCK_CAP",
    "FrameIndex",
    "FrameTerm",
    "F2Frame",
    "QuadratureError",
    "block_size",
    "block_offset",
    "block_boundary",
    "block_base_order",
    "index_decompose",
    "index_compose",
    "term",
    "terms",
    "partial_sum_weight",
    "apply_partial_sum",
    "partial_sum_map",
    "reconstruction_error",
    "coefficient_sum",
    "sm_cb_upper",
    "subset_sum_apply",
    "lebesgue_constant",
]

BLOCK_CAP = 40


class QuadratureError(ArithmeticError):
    pass


def block_size(k: int) -> int:
    """Number of base pairs in block ``k``: ``|ball(k)| = 2 * 3**k - 1``."""
    if k < 1:
        raise ValueError("blocks start at k = 1")
    return 2 * 3**k - 1


@lru_cache(maxsize=None)
def _offsets(sizes: Callable[[int], int], k_cap: int) -> tuple[int, ...]:
    out = [0, 0]  # out[k] = number of terms before block k
    for k in range(1, k_cap + 1):
        out.append(out[-1] + sizes(k) ** 3)
    return tuple(out)


def block_offset(k: int, sizes: Callable[[int], int] = block_size, k_cap: int = BLOCK_CAP) -> int:
    if not 1 <= k <= k_cap + 1:
        raise OverflowError(f"block {k} outside 1..{k_cap + 1}")
    return _offsets(sizes, k_cap)[k]


def block_boundary(K: int, sizes: Callable[[int], int] = block_size, k_cap: int = BLOCK_CAP) -> int:
    """Index of the last term of block ``K`` (0 for ``K = 0``)."""
    if K == 0:
        return 0
    return block_offset(K + 1, sizes, k_cap)


@dataclass(frozen=True)
class FrameIndex:
    n: int
    k: int
    i: int
    p: int
    j: int
    size: int  # M_k

    @classmethod
    def compose(cls, k: int, i: int, sizes: Callable[[int], int] = block_size, k_cap: int = BLOCK_CAP) -> "FrameIndex":
        M = sizes(k)
        if not 1 <= i <= M**3:
            raise ValueError(f"i={i} outside 1..{M**3}")
        p, j = divmod(i - 1, M)
        return cls(block_offset(k, sizes, k_cap) + i, k, i, p, j + 1, M)


def index_decompose(n: int, sizes: Callable[[int], int] = block_size, k_cap: int = BLOCK_CAP) -> FrameIndex:
    """The unique ``(k, i, p, j)`` of frame index ``n >= 1``."""
    n = int(n)
    if n < 1:
        raise ValueError("frame indices start at 1")
    offs = _offsets(sizes, k_cap)
    if n > offs[-1]:
        raise OverflowError(f"index {n} lies beyond block cap k <= {k_cap}")
    lo, hi = 1, k_cap
    while lo < hi:  # smallest k with offs[k+1] >= n
        mid = (lo + hi) // 2
        if offs[mid + 1] >= n:
            hi = mid
        else:
            lo = mid + 1
    k = lo
    i = n - offs[k]
    M = sizes(k)
    p, j = divmod(i - 1, M)
    return FrameIndex(n, k, i, p, j + 1, M)


def index_compose(k: int, i: int) -> int:
    return FrameIndex.compose(k, i).n


def block_base_order(k: int) -> tuple[Word, ...]:
    """Base words of block ``k``: ``ball(k - 1)`` then ``sphere(k)``, i.e. ``ball(k)``."""
    if k < 1:
        raise ValueError("blocks start at k = 1")
    return ball(k)


@dataclass(frozen=True)
class FrameTerm:
    index: FrameIndex
    word: Word
    coefficient: float

    @property
    def n(self) -> int:
        return self.index.n

    def vector(self) -> GroupAlgebraElement:
        return GroupAlgebraElement.basis(self.word)

    def functional(self, x) -> complex:
        return self.coefficient * x.delta(self.word)


def term(n: int) -> FrameTerm:
    idx = index_decompose(n)
    w = unrank(idx.j - 1)
    return FrameTerm(idx, w, psi_symbol(idx.k, len(w)) / idx.size**2)


def terms(start: int = 1, stop: int | None = None) -> Iterator[FrameTerm]:
    """Lazily yield ``term(n)`` for ``start <= n <= stop`` (unbounded if ``stop`` is None)."""
    n = start
    while stop is None or n <= stop:
        yield term(n)
        n += 1


def partial_sum_weight(m: int, s) -> float:
    """Total frame weight ``sum_{n <= m, phi(n) = s} a_n`` placed on ``lambda_s``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return 0.0
    s = s if isinstance(s, Word) else reduce(s)
    d = len(s)
    idx = index_decompose(m)
    k = idx.k
    # finished blocks telescope to phi_tm(1/sqrt(k-1), k-1)
    done = math.exp(-d / math.sqrt(k - 1)) if k >= 2 and d <= k - 1 else 0.0
    if d > k:
        return done
    count = idx.p + (1 if rank(s) + 1 <= idx.j else 0)
    return done + psi_symbol(k, d) * (count / idx.size**2)


def apply_partial_sum(x: GroupAlgebraElement | MatrixLevelElement, m: int):
    """``S_m(x)``: each coefficient scaled by :func:`partial_sum_weight`."""
    return x.map_coefficients(lambda w, c: partial_sum_weight(m, w) * c)


def partial_sum_map(m: int) -> Callable:
    return lambda x: apply_partial_sum(x, m)


def reconstruction_error(
    x: GroupAlgebraElement | MatrixLevelElement,
    m: int,
    R: int = DEFAULT_RADIUS,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
) -> NormEstimate:
    """Certified interval for ``||x - S_m(x)||``."""
    diff = x - apply_partial_sum(x, m)
    upper = norm_upper(diff)
    lower = min(norm_lower(diff, R, tol, seed), upper)
    return NormEstimate(lower, upper, R, 0, tol, seed)


def coefficient_sum(s, K: int) -> float:
    """``sum a_n`` over all ``n`` in blocks ``1..K`` with ``phi(n) = s``."""
    s = s if isinstance(s, Word) else reduce(s)
    if K < max(len(s), 1):
        raise ValueError("K must be at least max(|s|, 1)")
    parts = []
    for k in range(max(len(s), 1), K + 1):
        M2 = block_size(k) ** 2
        parts.append(M2 * (psi_symbol(k, len(s)) / M2))
    return math.fsum(parts)


def _block_cb_upper(k: int) -> float:
    if k == 0:
        return 0.0
    return phi_tm_cb_upper(1 / math.sqrt(k), k)


def sm_cb_upper(m: int, sharp: bool = False, k_max: int = 64) -> float:
    """Upper bound for ``||S_m||_cb``.

    The default is the uniform bound ``3 * sup_k ||phi_tm(t_k, k)||_cb + 1``.
    With ``sharp=True`` the decomposition of ``S_m`` into finished blocks, whole
    clone rounds of the current block and a final partial round is bounded
    term by term, which never exceeds the uniform bound.
    """
    uniform = 3.0 * schedule_sup_bound(k_max) + 1.0
    if not sharp:
        return uniform
    if m == 0:
        return 0.0
    idx = index_decompose(m)
    k, M = idx.k, idx.size
    psi_cb = _block_cb_upper(1) if k == 1 else _block_cb_upper(k) + _block_cb_upper(k - 1)
    partial = 0.0
    for d in range(k + 1):  # first j base words of block k, grouped by length
        before = ball_size(d - 1) if d else 0
        cnt = min(max(idx.j - before, 0), sphere_size(d))
        partial += cnt * abs(psi_symbol(k, d))
    bound = _block_cb_upper(k - 1) + (idx.p / M**2) * psi_cb + partial / M**2
    return min(bound, uniform)


def subset_sum_apply(x: GroupAlgebraElement | MatrixLevelElement, E: Iterable[int]):
    """``S_E(x) = sum_{n in E} a_n delta_{phi(n)}(x) lambda_{phi(n)}``."""
    grouped: dict[Word, list[float]] = {}
    for n in sorted(set(E)):
        t = term(n)
        grouped.setdefault(t.word, []).append(t.coefficient)
    w = {s: math.fsum(v) for s, v in grouped.items()}
    return x.map_coefficients(lambda s, c: w.get(s, 0.0) * c)


def _dirichlet(theta: float, K: int) -> float:
    half = math.sin(theta / 2)
    if abs(half) < 1e-300:
        return 2 * K + 1.0
    return math.sin((K + 0.5) * theta) / half


def lebesgue_constant(K: int, quad_tol: float = 1e-12) -> float:
    """``(1/2pi) int |D_K|`` over the circle, by adaptive quadrature.

    This is the norm of ``sum_{|j| <= K} P_j`` on ``C(T)``, the rearranged
    partial sum that an unconditional version of the frame would force to be
    uniformly bounded on the copy of ``C*_r(Z)`` generated by ``a``.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    # integrate between consecutive zeros so each piece is smooth
    nodes = [2 * math.pi * j / (2 * K + 1) for j in range(K + 1)] + [math.pi]
    total, err = 0.0, 0.0
    pieces = []
    for lo, hi in zip(nodes[:-1], nodes[1:]):
        if hi <= lo:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, e = integrate.quad(_dirichlet, lo, hi, args=(K,), epsabs=quad_tol / (K + 1), epsrel=1e-13, limit=200)
            except integrate.IntegrationWarning as exc:
                raise QuadratureError(f"quadrature did not converge on [{lo}, {hi}]: {exc}") from None
        pieces.append(abs(val))
        err += e
    total = math.fsum(pieces) / math.pi
    if err / math.pi > quad_tol:
        raise QuadratureError(f"estimated quadrature error {err / math.pi:g} exceeds {quad_tol:g}")
    return total


class F2Frame:
    """Frame-term source for the F_2 frame, used by the basis constructions."""

    def term(self, n: int) -> FrameTerm:
        return term(n)

    def vector(self, n: int) -> GroupAlgebraElement:
        return GroupAlgebraElement.basis(term(n).word)

    def word(self, n: int) -> Word:
        return unrank(index_decompose(n).j - 1)

    def functional(self, n: int, x) -> complex:
        return term(n).functional(x)

    def partial_sum_weight(self, m: int, s) -> float:
        return partial_sum_weight(m, s)

    def occurrences(self, s, N: int) -> Iterator[tuple[int, float]]:
        """All ``(n, a_n)`` with ``phi(n) = s`` and ``n <= N``, increasing in ``n``."""
        s = s if isinstance(s, Word) else reduce(s)
        j = rank(s) + 1
        k = max(len(s), 1)
        while k <= BLOCK_CAP:
            off = block_offset(k)
            if off >= N:
                return
            M = block_size(k)
            a = psi_symbol(k, len(s)) / M**2
            last_p = min(M * M - 1, (N - off - j) // M)
            if last_p >= 0:
                for p in range(last_p + 1):
                    yield off + p * M + j, a
            k += 1
