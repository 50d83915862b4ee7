import math
from collections import defaultdict

import numpy as np
import pytest

from freeframe import frame as fr
from freeframe import multipliers as mu
from freeframe.algebra import GroupAlgebraElement as G
from freeframe.free_group import ball, unrank

# midpoint rule with 4e5 nodes on (1/pi) int_0^pi |D_K|
LEBESGUE_MIDPOINT = {1: 1.4359911241759729, 2: 1.6421884352333809, 3: 1.7783228615217612, 8: 2.1377308625517966}


def test_index_examples():
    assert fr.index_decompose(1) == fr.FrameIndex(1, 1, 1, 0, 1, 5)
    assert fr.index_decompose(125) == fr.FrameIndex(125, 1, 125, 24, 5, 5)
    assert fr.index_decompose(126) == fr.FrameIndex(126, 2, 1, 0, 1, 17)
    assert [fr.block_boundary(K) for K in range(1, 6)] == [125, 5038, 153915, 4327196, 118411321]


def test_index_round_trip():
    for n in list(range(1, 400)) + [5038, 5039, 10**12, 2**100]:
        idx = fr.index_decompose(n)
        assert 1 <= idx.j <= idx.size and idx.i == idx.p * idx.size + idx.j
        assert fr.index_compose(idx.k, idx.i) == n


def test_index_limits():
    with pytest.raises(ValueError):
        fr.index_decompose(0)
    with pytest.raises(OverflowError):
        fr.index_decompose(fr.block_boundary(fr.BLOCK_CAP) + 1)


def test_terms():
    t = fr.term(1)
    assert t.word == "" and t.coefficient == 0.04
    assert fr.term(2).word == "a" and fr.term(2).coefficient == math.exp(-1) / 25
    assert fr.term(126).coefficient == 0.0
    assert [t.n for t in fr.terms(3, 6)] == [3, 4, 5, 6]
    assert fr.block_base_order(2) == ball(2)
    x = G({"a": 2.0})
    assert fr.term(2).functional(x) == 2 * math.exp(-1) / 25


def brute_weights(m):
    """sum of a_n over n <= m grouped by word, straight from term(n)."""
    acc = defaultdict(list)
    for n in range(1, m + 1):
        t = fr.term(n)
        acc[t.word].append(t.coefficient)
    return {w: math.fsum(v) for w, v in acc.items()}


@pytest.mark.parametrize("m", [1, 7, 124, 125, 126, 300, 2000, 5038, 5100])
def test_partial_sum_weight_matches_brute_force(m):
    brute = brute_weights(m)
    for s in ball(3):
        assert fr.partial_sum_weight(m, s) == pytest.approx(brute.get(s, 0.0), abs=1e-14)


def test_block_boundary_identity():
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = G({w: rng.standard_normal() for w in rng.choice(ball(3), 5)})
        for m, mult in ((125, mu.phi_tm(1.0, 1)), (5038, mu.phi_tm(1 / math.sqrt(2), 2))):
            lhs, rhs = fr.apply_partial_sum(x, m), mult.apply(x)
            for w in x.support():
                assert abs(lhs[w] - rhs[w]) <= 1e-14


def test_reconstruction_error_at_boundaries():
    for s in ("", "a", "bA", "abA"):
        for K in range(max(len(s), 1), 5):
            est = fr.reconstruction_error(G({s: 1.0}), fr.block_boundary(K), R=2)
            expect = 1 - math.exp(-len(s) / math.sqrt(K))
            assert abs(est.lower - expect) <= 1e-10 and abs(est.upper - expect) <= 1e-10
    # inside the first block the weight of a length-3 word is still zero
    assert fr.reconstruction_error(G({"abA": 1.0}), 125, R=2).upper == 1.0


def test_reconstruction_error_generic_element():
    x = G({"": 1.0, "a": 1.0, "ab": -1.0})
    est = fr.reconstruction_error(x, 5038, R=4)
    diff = x - mu.phi_tm(1 / math.sqrt(2), 2).apply(x)
    assert est.upper <= diff.l1_norm() + 1e-15
    assert est.lower <= est.upper


def test_coefficient_sum():
    assert fr.coefficient_sum("", 1) == 1.0
    for K in range(1, 8):
        assert fr.coefficient_sum("ab", max(K, 2)) == pytest.approx(math.exp(-2 / math.sqrt(max(K, 2))), abs=1e-14)
    with pytest.raises(ValueError):
        fr.coefficient_sum("abA", 2)


def test_sm_cb_upper():
    uniform = 3 * mu.schedule_sup_bound(64) + 1
    assert fr.sm_cb_upper(100) == uniform
    assert fr.sm_cb_upper(100) == pytest.approx(13.497045607151989)
    for m in (1, 125, 126, 5038, 10**6):
        assert 0 < fr.sm_cb_upper(m, sharp=True) <= uniform
    assert fr.sm_cb_upper(0, sharp=True) == 0.0


def test_sharp_bound_dominates_exact_scalar_norm_of_single_words():
    # on a single word S_m acts by its weight, which must respect the bound
    for m in (3, 125, 400, 5038):
        for s in ball(2):
            assert fr.partial_sum_weight(m, s) <= fr.sm_cb_upper(m, sharp=True)


def test_subset_sum_apply():
    x = G({"": 1.0, "a": 1.0})
    assert fr.subset_sum_apply(x, range(1, 126)) == fr.apply_partial_sum(x, 125)
    assert fr.subset_sum_apply(x, [2, 2, 7]) == G({"a": 2 * math.exp(-1) / 25})


@pytest.mark.parametrize("K", sorted(LEBESGUE_MIDPOINT))
def test_lebesgue_against_midpoint_rule(K):
    assert fr.lebesgue_constant(K) == pytest.approx(LEBESGUE_MIDPOINT[K], abs=1e-9)


def test_lebesgue_growth():
    L = {K: fr.lebesgue_constant(K) for K in (1, 8, 16, 32, 64)}
    assert L[64] > L[8] > L[1]
    for K in (8, 16, 32, 64):
        assert 1.0 <= L[K] - 4 / math.pi**2 * math.log(K) <= 1.4
    with pytest.raises(ValueError):
        fr.lebesgue_constant(0)


def test_lebesgue_quadrature_failure_is_reported():
    with pytest.raises(fr.QuadratureError):
        fr.lebesgue_constant(3, quad_tol=1e-300)


def test_f2frame_occurrences():
    F = fr.F2Frame()
    occ = list(F.occurrences("a", 5038))
    brute = [(n, fr.term(n).coefficient) for n in range(1, 5039) if fr.term(n).word == "a"]
    assert occ == brute
    assert F.word(127) == unrank(1)
