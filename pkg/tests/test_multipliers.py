import math

import pytest

from freeframe import multipliers as mu
from freeframe.algebra import GroupAlgebraElement as G

# sum_{d > m} d e^{-t d}, evaluated with 40-digit arithmetic
TAIL_REFERENCE = {
    (1.0, 0): 0.92067359420779231895,
    (0.1, 5): 89.43802124786191485,
    (2.0, 3): 0.0016125976974974888514,
    (0.5, 50): 1.1248179354626273052e-9,
}
SUP_REFERENCE = 4.1656818690506607026


def test_symbols():
    assert mu.phi(1.0)(2) == math.exp(-2)
    assert mu.band(2)(2) == 1.0 and mu.band(2)(3) == 0.0
    assert mu.phi_tm(0.5, 2)(2) == math.exp(-1) and mu.phi_tm(0.5, 2)(3) == 0.0
    assert mu.psi(1)(0) == 1.0 and mu.psi(1)(1) == math.exp(-1) and mu.psi(1)(2) == 0.0


def test_psi_symbol_cases():
    assert mu.psi_symbol(1, 1) == math.exp(-1)
    assert mu.psi_symbol(2, 2) == math.exp(-2 / math.sqrt(2))
    assert mu.psi_symbol(2, 1) == math.exp(-1 / math.sqrt(2)) - math.exp(-1)
    assert mu.psi_symbol(3, 0) == 0.0
    assert mu.psi_symbol(3, 4) == 0.0
    with pytest.raises(ValueError):
        mu.psi_symbol(0, 1)


def test_apply_and_arithmetic():
    x = G({"": 1.0, "a": 1.0, "ab": 1.0})
    y = mu.phi_tm(1.0, 1).apply(x)
    assert y == G({"": 1.0, "a": math.exp(-1)})
    d = (mu.phi(1.0) - mu.phi_tm(1.0, 1)).apply(x)
    assert d == G({"ab": math.exp(-2)})


@pytest.mark.parametrize("tm, ref", sorted(TAIL_REFERENCE.items()))
def test_tail_closed_form_reference(tm, ref):
    assert mu.tail_sum_closed_form(*tm) == pytest.approx(ref, rel=1e-13)
    assert mu.tail_sum_direct(*tm) == pytest.approx(ref, rel=1e-13)


def test_tail_closed_form_vs_direct_grid():
    for t in (0.1, 0.5, 1.0, 2.0):
        for m in range(51):
            c, d = mu.tail_sum_closed_form(t, m), mu.tail_sum_direct(t, m)
            assert abs(c - d) <= 1e-12 * d


def test_defect_and_cb_upper():
    assert mu.cb_defect_upper(1.0, 0) == 2 * mu.tail_sum_closed_form(1.0, 0)
    assert mu.phi_tm_cb_upper(1.0, 0) == 1 + mu.cb_defect_upper(1.0, 0)
    defects = [mu.cb_defect_upper(1 / math.sqrt(k), k) for k in range(1, 200)]
    peak = defects.index(max(defects)) + 1
    assert peak == 8
    assert all(b < a for a, b in zip(defects[9:], defects[10:]))


def test_schedule_sup_bound():
    assert mu.schedule_sup_bound(64) == pytest.approx(SUP_REFERENCE, rel=1e-14)
    assert mu.schedule_sup_bound(64) == mu.schedule_sup_bound(128)
    assert mu.schedule(4) == (0.5, 4)


def test_telescoping():
    for K in range(1, 31):
        for d in range(31):
            expect = math.exp(-d / math.sqrt(K)) if d <= K else 0.0
            assert abs(mu.telescope_check(K, d) - expect) <= 1e-14


def test_schedule_table():
    rows = mu.schedule_table(10)
    assert [r["k"] for r in rows] == list(range(1, 11))
    assert rows[-1]["sup_bound"] == mu.schedule_sup_bound(10)
    assert all(r["cb_defect"] == 2 * r["tail"] for r in rows)


def test_invalid_parameters():
    for bad in (lambda: mu.phi(0), lambda: mu.phi_tm(1, -1), lambda: mu.band(-1),
                lambda: mu.psi(0), lambda: mu.tail_sum_closed_form(-1, 0), lambda: mu.schedule_sup_bound(0)):
        with pytest.raises(ValueError):
            bad()
