"""Acceptance checks shared by ``freeframe verify`` and the test suite.

Each check returns a :class:`CriterionResult`; the rendered report holds
only values that depend on the seed, never timings, so two runs with the
same seed produce identical bytes.  Runtime budgets are reported as
pass/fail only.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy import optimize

from . import basis, frame, free_group, multipliers, norms
from .algebra import GroupAlgebraElement

__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_all", "render", "lp_dual_norm"]


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} [{self.number}] {self.name}: {self.detail}"

    def to_dict(self) -> dict:
        return asdict(self)


def _g(x: float) -> str:
    return f"{x:.10g}"


def _timed(fn: Callable[[], object]) -> tuple[object, float]:
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def random_sparse_elements(count: int, support_radius: int, seed: int, max_terms: int = 8) -> list[GroupAlgebraElement]:
    rng = np.random.default_rng(seed)
    pool = free_group.ball(support_radius)
    out = []
    for _ in range(count):
        k = int(rng.integers(1, max_terms + 1))
        idx = rng.choice(len(pool), size=k, replace=False)
        out.append(GroupAlgebraElement({pool[int(i)]: complex(*rng.standard_normal(2)) for i in idx}))
    return out


def generator_sum(symmetric_pair_only: bool = False) -> GroupAlgebraElement:
    letters = "aA" if symmetric_pair_only else "abAB"
    return GroupAlgebraElement({c: 1.0 for c in letters})


# 1


def combinatorics(seed: int = 0, threads: int = 1) -> CriterionResult:
    def check():
        spheres = all(len(free_group.sphere(d)) == 4 * 3 ** (d - 1) for d in range(1, 9))
        balls = all(len(free_group.ball(k)) == 2 * 3**k - 1 for k in range(0, 9))
        return spheres, balls

    (spheres, balls), dt = _timed(check)
    ok = spheres and balls and dt < 1.0
    return CriterionResult(1, "combinatorics", ok, f"spheres={spheres} balls={balls} runtime_ok={dt < 1.0}")


# 2


def telescoping(seed: int = 0, threads: int = 1) -> CriterionResult:
    worst = 0.0
    for K in range(1, 31):
        for d in range(0, 31):
            expect = math.exp(-d / math.sqrt(K)) if d <= K else 0.0
            worst = max(worst, abs(multipliers.telescope_check(K, d) - expect))
    return CriterionResult(2, "telescoping", worst <= 1e-14, f"max_abs_err={_g(worst)}")


# 3


def tail_bound(seed: int = 0, threads: int = 1) -> CriterionResult:
    worst = 0.0
    for t in (0.1, 0.5, 1.0, 2.0):
        for m in range(0, 51):
            closed = multipliers.tail_sum_closed_form(t, m)
            direct = multipliers.tail_sum_direct(t, m)
            worst = max(worst, abs(closed - direct) / abs(direct))
    defects = [multipliers.cb_defect_upper(1 / math.sqrt(k), k) for k in range(10, 401)]
    mono = all(b < a for a, b in zip(defects, defects[1:]))
    ok = worst <= 1e-12 and mono and defects[-1] < 1e-3
    return CriterionResult(
        3, "tail bound", ok, f"max_rel_err={_g(worst)} monotone={mono} defect_k400={_g(defects[-1])}"
    )


# 4


def block_boundary(seed: int = 0, threads: int = 1) -> CriterionResult:
    xs = random_sparse_elements(100, 3, seed)
    cases = ((125, multipliers.phi_tm(1.0, 1)), (5038, multipliers.phi_tm(1 / math.sqrt(2), 2)))
    worst = 0.0
    for m, mult in cases:
        for x in xs:
            lhs = frame.apply_partial_sum(x, m)
            rhs = mult.apply(x)
            for w in set(x.support()):
                worst = max(worst, abs(lhs[w] - rhs[w]))
    return CriterionResult(4, "block boundary", worst <= 1e-14, f"max_abs_err={_g(worst)}")


# 5


def reconstruction(seed: int = 0, threads: int = 1) -> CriterionResult:
    worst_err, worst_sum = 0.0, 0.0
    for s in free_group.ball(3):
        for K in range(1, 7):
            expect = 1.0 - (math.exp(-len(s) / math.sqrt(K)) if len(s) <= K else 0.0)
            est = frame.reconstruction_error(GroupAlgebraElement.basis(s), frame.block_boundary(K), R=2, seed=seed)
            worst_err = max(worst_err, abs(est.lower - expect), abs(est.upper - expect))
            if K >= max(len(s), 1):
                got = frame.coefficient_sum(s, K)
                worst_sum = max(worst_sum, abs(got - math.exp(-len(s) / math.sqrt(K))))
    exact_one = frame.coefficient_sum(free_group.IDENTITY, 1) == 1.0
    ok = worst_err <= 1e-10 and worst_sum <= 1e-14 and exact_one
    return CriterionResult(
        5,
        "frame reconstruction",
        ok,
        f"max_err_dev={_g(worst_err)} max_coeff_sum_dev={_g(worst_sum)} identity_sum_exact={exact_one}",
    )


# 6


def criterion6_m_values() -> list[int]:
    vals = {int(round(v)) for v in np.linspace(1, 5038, 48)} | {124, 125, 126, 5038}
    return sorted(vals)[:50] if len(vals) >= 50 else sorted(vals)


def cb_bound_consistency(seed: int = 0, threads: int = 1, R: int = 6) -> CriterionResult:
    def run():
        worst_ratio = 0.0
        violations = 0
        for level in (1, 2):
            for i, m in enumerate(criterion6_m_values()):
                lo = norms.map_norm_lower(
                    frame.partial_sum_map(m), level=level, samples=4, R=R, seed=seed + 1000 * level + i,
                    support_radius=3, threads=threads,
                )
                up = frame.sm_cb_upper(m, sharp=True)
                worst_ratio = max(worst_ratio, lo / up)
                violations += lo > up
            for t in (0.5, 1.0, 2.0):
                for m in (0, 1, 2):
                    mult = multipliers.phi(t) - multipliers.phi_tm(t, m)
                    lo = norms.map_norm_lower(
                        mult, level=level, samples=4, R=R, seed=seed + 7 * level + m,
                        support_radius=m + 2, threads=threads,
                    )
                    up = multipliers.cb_defect_upper(t, m)
                    worst_ratio = max(worst_ratio, lo / up)
                    violations += lo > up
        return worst_ratio, violations

    (worst_ratio, violations), dt = _timed(run)
    ok = violations == 0 and dt < 300
    return CriterionResult(
        6,
        "cb-frame bound consistency",
        ok,
        f"m_values={len(criterion6_m_values())} violations={violations} "
        f"max_lower_over_upper={_g(worst_ratio)} runtime_ok={dt < 300}",
    )


# 7


def norm_certification(seed: int = 0, threads: int = 1) -> CriterionResult:
    target = 2 * math.sqrt(3)
    est, dt1 = _timed(lambda: norms.norm_interval(generator_sum(), R=8, seed=seed))
    pair, dt2 = _timed(lambda: norms.norm_interval(generator_sum(True), R=10, seed=seed))
    gap = (target - est.lower) / target
    checks = {
        "lower>=3.39": est.lower >= 3.39,
        "upper==4": est.upper == 4.0,
        "contains": est.contains(target),
        "gap<=2%": gap <= 0.02,
        "pair>=1.98": pair.lower >= 1.98,
        "runtime_ok": dt1 < 60 and dt2 < 60,
    }
    detail = (
        f"gen_sum R=8 [{_g(est.lower)}, {_g(est.upper)}] rel_gap={_g(gap)}; "
        f"a+A R=10 lower={_g(pair.lower)}; "
        + " ".join(f"{k}={v}" for k, v in checks.items())
    )
    return CriterionResult(7, "norm certification", all(checks.values()), detail)


# 8


LEBESGUE_CLASSICAL = {1: 1.435991, 2: 1.642188, 3: 1.778322}


def non_unconditionality(seed: int = 0, threads: int = 1) -> CriterionResult:
    L = {K: frame.lebesgue_constant(K) for K in (1, 2, 3, 8, 16, 32, 64)}
    golden = max(abs(L[K] - v) for K, v in LEBESGUE_CLASSICAL.items())
    order = L[64] > L[8] > L[1]
    offsets = [L[K] - 4 / math.pi**2 * math.log(K) for K in (8, 16, 32, 64)]
    band = all(1.0 <= o <= 1.4 for o in offsets)
    ok = golden <= 1e-4 and order and band
    return CriterionResult(
        8,
        "non-unconditionality",
        ok,
        f"max_golden_dev={_g(golden)} L64={_g(L[64])} ordered={order} "
        f"offsets=[{', '.join(_g(o) for o in offsets)}]",
    )


# 9


def lp_dual_norm(f: np.ndarray, B: np.ndarray, kind: str) -> float:
    """Exact dual norm of ``c -> f . c`` for ``||B c||_inf`` or ``||B c||_1`` via an LP."""
    n, d = B.shape
    if kind == "inf":
        res = optimize.linprog(
            -f, A_ub=np.vstack([B, -B]), b_ub=np.ones(2 * n), bounds=[(None, None)] * d, method="highs"
        )
        return float(-res.fun)
    if kind == "one":
        # variables (c, s) with -s <= B c <= s, sum s <= 1
        c_obj = np.concatenate([-f, np.zeros(n)])
        A = np.block([[B, -np.eye(n)], [-B, -np.eye(n)], [np.zeros((1, d)), np.ones((1, n))]])
        b = np.concatenate([np.zeros(2 * n), [1.0]])
        res = optimize.linprog(c_obj, A_ub=A, b_ub=b, bounds=[(None, None)] * d + [(0, None)] * n, method="highs")
        return float(-res.fun)
    raise ValueError(f"unknown norm kind {kind!r}")


def auerbach_examples(seed: int) -> list[tuple[str, np.ndarray, str]]:
    rng = np.random.default_rng(seed)
    return [
        ("sup3", np.eye(3), "inf"),
        ("l1_2", np.eye(2), "one"),
        ("sup_sub4", rng.standard_normal((6, 4)), "inf"),
        ("l1_sub3", rng.standard_normal((5, 3)), "one"),
    ]


def _norm_fn(kind: str):
    return (lambda v: float(np.max(np.abs(v)))) if kind == "inf" else (lambda v: float(np.sum(np.abs(v))))


def basis_constructions(seed: int = 0, threads: int = 1) -> CriterionResult:
    parts = {}
    # (N1) singletons: |||u_i e_i||| = ||u_i x_i|| = ||u_i|| because x_i is unitary
    n1 = True
    for i, c in ((1, 2.5), (7, -1.0 + 1j), (130, 0.25)):
        est = basis.triple_norm(basis.CoefficientSequence.from_scalars({i: c}), R=2, seed=seed)
        n1 &= est.lower == est.upper == abs(c)
    parts["N1"] = n1

    # (N2) prefix norms never exceed the full triple norm
    rng = np.random.default_rng(seed)
    n2 = True
    for trial in range(100):
        level = 1 + trial % 2
        idx = rng.choice(np.arange(1, 400), size=int(rng.integers(2, 5)), replace=False)
        u = basis.CoefficientSequence(
            level, {int(i): rng.standard_normal((level, level)) + 1j * rng.standard_normal((level, level)) for i in idx}
        )
        full = basis.triple_norm(u, R=2, seed=seed)
        cut = u.support()[int(rng.integers(0, len(u)))]
        pre = basis.triple_norm(u.prefix(cut), R=2, seed=seed)
        n2 &= pre.lower <= full.upper
    parts["N2"] = n2

    # QT residual at block boundaries
    x = GroupAlgebraElement.basis("a")
    res = [basis.qt_identity_check(x, frame.block_boundary(K)) for K in range(1, 6)]
    qt_dev = max(abs(r - (1 - math.exp(-1 / math.sqrt(K)))) for K, r in zip(range(1, 6), res))
    parts["QT"] = qt_dev <= 1e-12 and all(b < a for a, b in zip(res, res[1:]))

    # Auerbach pairs, dual norms certified by linear programming
    worst_bio, worst_dual = 0.0, 0.0
    for name, B, kind in auerbach_examples(seed):
        sys_ = basis.auerbach(list(B.T), _norm_fn(kind), seed=seed)
        worst_bio = max(worst_bio, sys_.biorthogonality_error())
        for j in range(B.shape[1]):
            worst_dual = max(worst_dual, lp_dual_norm(sys_.functionals[j], B, kind))
    parts["auerbach"] = worst_bio <= 1e-10 and worst_dual <= 1.05

    # generic cloning reproduces the F_2 frame
    gf = basis.generic_frame_from_maps(basis.BlockMapSpec.free_group(3))
    mismatches = 0
    for n in range(1, 10_001):
        t, g = frame.term(n), gf.term(n)
        (w, c), = g.functional.items()
        if g.vector.support() != [t.word] or w != t.word or c / g.scale != t.coefficient:
            mismatches += 1
    parts["generic"] = mismatches == 0

    detail = (
        " ".join(f"{k}={v}" for k, v in parts.items())
        + f" qt_max_dev={_g(qt_dev)} bio_err={_g(worst_bio)} max_dual={_g(worst_dual)} mismatches={mismatches}"
    )
    return CriterionResult(9, "basis constructions", all(parts.values()), detail)


CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: combinatorics,
    2: telescoping,
    3: tail_bound,
    4: block_boundary,
    5: reconstruction,
    6: cb_bound_consistency,
    7: norm_certification,
    8: non_unconditionality,
    9: basis_constructions,
}


def run_criterion(number: int, seed: int = 0, threads: int = 1) -> CriterionResult:
    return CRITERIA[number](seed=seed, threads=threads)


def render(results: list[CriterionResult]) -> str:
    return "".join(r.line() + "\n" for r in results)


def run_all(seed: int = 0, threads: int = 1, determinism: bool = True) -> list[CriterionResult]:
    """Criteria 1-9, then (optionally) criterion 10: a second full pass must render identically."""
    results = [run_criterion(k, seed, threads) for k in sorted(CRITERIA)]
    if determinism:
        again = [run_criterion(k, seed, threads) for k in sorted(CRITERIA)]
        same = render(results) == render(again)
        results.append(CriterionResult(10, "determinism", same, f"identical_second_pass={same}"))
    return results
