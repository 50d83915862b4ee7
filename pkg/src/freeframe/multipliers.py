"""Radial multipliers on the group algebra of F_2 and their cb-norm bounds.

A radial multiplier scales the coefficient of ``lambda_s`` by ``symbol(|s|)``.
The families used by the frame are

* ``phi(t)``: the heat-type semigroup ``e^{-t|s|}`` (unital, completely positive);
* ``band(d)``: the projection onto words of length exactly ``d``;
* ``phi_tm(t, m)``: ``phi(t)`` cut off after length ``m``;
* ``psi(k)``: consecutive differences of ``phi_tm(1/sqrt(k), k)``.

The schedule ``t_k = 1/sqrt(k)``, ``m_k = k`` is the default everywhere; the
frame's index arithmetic is tied to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .algebra import GroupAlgebraElement, MatrixLevelElement

__all__ = [
    "RadialMultiplier",
    "phi",
    "band",
    "phi_tm",
    "psi",
    "custom",
    "apply",
    "psi_symbol",
    "tail_sum_closed_form",
    "tail_sum_direct",
    "cb_defect_upper",
    "phi_tm_cb_upper",
    "schedule",
    "schedule_sup_bound",
    "telescope_check",
    "schedule_table",
]


def default_t(k: int) -> float:
    return 1.0 / math.sqrt(k)


def default_m(k: int) -> int:
    return k


@dataclass(frozen=True)
class RadialMultiplier:
    kind: str
    params: tuple
    symbol: Callable[[int], float] = field(compare=False, repr=False)
    cutoff: int | None = None  # symbol vanishes for lengths above cutoff; None = unbounded

    def __call__(self, d: int) -> float:
        return self.symbol(d)

    def apply(self, x):
        return apply(self, x)

    def __sub__(self, other: "RadialMultiplier") -> "RadialMultiplier":
        cut = None if self.cutoff is None or other.cutoff is None else max(self.cutoff, other.cutoff)
        return RadialMultiplier(
            "custom", (self.kind, "-", other.kind), lambda d: self.symbol(d) - other.symbol(d), cut
        )

    def __add__(self, other: "RadialMultiplier") -> "RadialMultiplier":
        cut = None if self.cutoff is None or other.cutoff is None else max(self.cutoff, other.cutoff)
        return RadialMultiplier(
            "custom", (self.kind, "+", other.kind), lambda d: self.symbol(d) + other.symbol(d), cut
        )


def phi(t: float) -> RadialMultiplier:
    if t <= 0:
        raise ValueError("t must be positive")
    return RadialMultiplier("phi", (t,), lambda d: math.exp(-t * d))


def band(d0: int) -> RadialMultiplier:
    if d0 < 0:
        raise ValueError("band index must be nonnegative")
    return RadialMultiplier("band", (d0,), lambda d: 1.0 if d == d0 else 0.0, d0)


def phi_tm(t: float, m: int) -> RadialMultiplier:
    if t <= 0:
        raise ValueError("t must be positive")
    if m < 0:
        raise ValueError("m must be nonnegative")
    return RadialMultiplier("phi_tm", (t, m), lambda d: math.exp(-t * d) if d <= m else 0.0, m)


def psi(k: int) -> RadialMultiplier:
    if k < 1:
        raise ValueError("block index k starts at 1")
    return RadialMultiplier("psi", (k,), lambda d: psi_symbol(k, d), k)


def custom(symbol: Callable[[int], float], cutoff: int | None = None) -> RadialMultiplier:
    return RadialMultiplier("custom", (), symbol, cutoff)


def apply(mult: RadialMultiplier, x: GroupAlgebraElement | MatrixLevelElement):
    return x.radial(mult.symbol)


def psi_symbol(k: int, d: int) -> float:
    """Coefficient of ``psi(k)`` on words of length ``d``."""
    if k < 1 or d < 0:
        raise ValueError("need k >= 1 and d >= 0")
    if d > k:
        return 0.0
    if k == 1:
        return math.exp(-d)
    if d == k:
        return math.exp(-d / math.sqrt(k))
    return math.exp(-d / math.sqrt(k)) - math.exp(-d / math.sqrt(k - 1))


def tail_sum_closed_form(t: float, m: int) -> float:
    """``sum_{d > m} d e^{-td}`` in closed form."""
    if t <= 0:
        raise ValueError("t must be positive")
    if m < 0:
        raise ValueError("m must be nonnegative")
    x = math.exp(-t)
    one_minus = -math.expm1(-t)
    return x ** (m + 2) / one_minus**2 + (m + 1) * x ** (m + 1) / one_minus


def tail_sum_direct(t: float, m: int, rel: float = 1e-18) -> float:
    """Term-by-term summation, stopped once a term is negligible."""
    if t <= 0:
        raise ValueError("t must be positive")
    terms = []
    total = 0.0
    d = m + 1
    peak = max(d, math.ceil(1.0 / t))
    while True:
        term = d * math.exp(-t * d)
        terms.append(term)
        total += term
        if d > peak and term <= rel * total:
            break
        d += 1
    return math.fsum(terms)


def cb_defect_upper(t: float, m: int) -> float:
    """Upper bound for ``||phi(t) - phi_tm(t, m)||_cb`` using ``||P_d||_cb <= 2d``."""
    return 2.0 * tail_sum_closed_form(t, m)


def phi_tm_cb_upper(t: float, m: int) -> float:
    # phi(t) is unital completely positive, so its cb norm is 1
    return 1.0 + cb_defect_upper(t, m)


def schedule(k: int, t_of=default_t, m_of=default_m) -> tuple[float, int]:
    return t_of(k), m_of(k)


def schedule_sup_bound(k_max: int = 64, t_of=default_t, m_of=default_m) -> float:
    """``1 + max_{k <= k_max} cb_defect_upper(t_k, m_k)``.

    Along the default schedule the defect peaks at ``k = 8`` and decreases
    afterwards, so ``k_max = 64`` already gives the supremum over all k.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    return 1.0 + max(cb_defect_upper(t_of(k), m_of(k)) for k in range(1, k_max + 1))


def telescope_check(K: int, d: int) -> float:
    """``sum_{k <= K} psi_symbol(k, d)``; equals ``phi_tm(1/sqrt(K), K)`` at ``d``."""
    if K < 1:
        raise ValueError("K must be at least 1")
    return math.fsum(psi_symbol(k, d) for k in range(1, K + 1))


def schedule_table(k_max: int, t_of=default_t, m_of=default_m) -> list[dict]:
    rows = []
    running = 0.0
    for k in range(1, k_max + 1):
        t, m = t_of(k), m_of(k)
        tail = tail_sum_closed_form(t, m)
        defect = 2.0 * tail
        running = max(running, defect)
        rows.append({"k": k, "t_k": t, "m_k": m, "tail": tail, "cb_defect": defect, "sup_bound": 1.0 + running})
    return rows
