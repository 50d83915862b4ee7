"""One check per acceptance criterion; each prints a PASS/FAIL line."""

from freeframe import acceptance

from conftest import ACCEPTANCE_LINES

SEED = 0
_first_pass: dict[int, acceptance.CriterionResult] = {}


def _check(number: int) -> None:
    result = acceptance.run_criterion(number, seed=SEED, threads=1)
    _first_pass[number] = result
    print(result.line())
    ACCEPTANCE_LINES.append(result.line())
    assert result.passed, result.line()


def test_criterion_01_combinatorics():
    _check(1)


def test_criterion_02_telescoping():
    _check(2)


def test_criterion_03_tail_bound():
    _check(3)


def test_criterion_04_block_boundary():
    _check(4)


def test_criterion_05_frame_reconstruction():
    _check(5)


def test_criterion_06_cb_bound_consistency():
    _check(6)


def test_criterion_07_norm_certification():
    _check(7)


def test_criterion_08_non_unconditionality():
    _check(8)


def test_criterion_09_basis_constructions():
    _check(9)


def test_criterion_10_determinism():
    first = [_first_pass.get(k) or acceptance.run_criterion(k, seed=SEED) for k in sorted(acceptance.CRITERIA)]
    second = [acceptance.run_criterion(k, seed=SEED) for k in sorted(acceptance.CRITERIA)]
    same = acceptance.render(first) == acceptance.render(second)
    line = acceptance.CriterionResult(10, "determinism", same, f"identical_second_pass={same}").line()
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert same, line
