import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from freeframe.algebra import GroupAlgebraElement as G
from freeframe.algebra import MatrixLevelElement as M
from freeframe.algebra import element_from_json, element_to_json
from freeframe.free_group import ball

from conftest import brute_reduce

WORDS = ball(2)
elements = st.dictionaries(st.sampled_from(WORDS), st.complex_numbers(max_magnitude=5, allow_nan=False), max_size=5).map(G)


def test_delta_and_support():
    x = G({"a": 2.0, "": 1.0, "B": 3.0})
    assert x.delta("a") == 2.0 and x["b"] == 0.0
    assert x.support() == ["", "a", "B"]
    assert x.support_radius() == 1


def test_convolution_matches_word_concatenation_oracle():
    x = G({"a": 1.0, "b": 2.0})
    y = G({"A": 3.0, "ab": 1.0})
    out = {}
    for r, c in x.items():
        for s, d in y.items():
            w = brute_reduce(r + s)
            out[w] = out.get(w, 0) + c * d
    assert (x * y) == G(out)
    assert (x * y)[""] == 3.0


@given(elements, elements, elements)
def test_algebra_laws(x, y, z):
    assert ((x * y) * z).allclose(x * (y * z), atol=1e-9)
    assert (x * y).adjoint().allclose(y.adjoint() * x.adjoint(), atol=1e-9)
    assert (x + y - y).allclose(x, atol=1e-12)


def test_norms_and_components():
    x = G({"a": 3.0, "b": -4.0, "": 1.0})
    assert x.l1_norm() == 8.0
    assert x.l2_norm() == pytest.approx(26**0.5)
    assert x.length_component(1) == G({"a": 3.0, "b": -4.0})
    assert x.radial(lambda d: 2.0**d) == G({"a": 6.0, "b": -8.0, "": 1.0})


def test_matrix_level():
    u = np.array([[1, 2], [0, 1j]])
    X = G({"a": 2.0}).tensor(u)
    assert X.level == 2
    np.testing.assert_array_equal(X["a"], 2 * u)
    np.testing.assert_array_equal(X.adjoint()["A"], 2 * u.conj().T)
    assert X.l1_norm() == pytest.approx(2 * np.linalg.norm(u, 2))
    with pytest.raises(ValueError):
        M(2, {"a": np.eye(3)})
    with pytest.raises(ValueError):
        M(2) + M(3)
    with pytest.raises(ValueError):
        X["a"][0, 0] = 5  # coefficients are read-only


def test_json_round_trip_bit_exact():
    x = G({"a": complex(-0.0, 1e-300), "": 0.1 + 0.2j, "abAB": -3.5})
    doc = json.loads(json.dumps(element_to_json(x)))
    y = element_from_json(doc)
    for w in x.support():
        assert repr(y[w]) == repr(x[w])
    X = G({"b": 1.0}).tensor(np.array([[1, -0.0], [2j, 3]]))
    Y = element_from_json(json.dumps(element_to_json(X)))
    assert Y == X


def test_json_identity_spelling():
    x = G({"": 1.0})
    assert element_to_json(x)["terms"][0]["word"] == ""
    assert element_to_json(x, pretty_identity=True)["terms"][0]["word"] == "e"
    assert element_from_json({"level": 1, "terms": [{"word": "e", "coeff": [1, 0]}]}) == x


def test_json_errors():
    with pytest.raises(ValueError):
        element_from_json({"level": 1})
    with pytest.raises(ValueError):
        element_from_json({"level": 1, "terms": [{"word": "xy", "coeff": [1, 0]}]})
