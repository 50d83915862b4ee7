"""Finitely supported elements of the group algebra of F_2.

A scalar element ``x = sum a_s lambda_s`` stores complex coefficients; a
matrix-level element ``u = sum u_s (x) lambda_s`` stores one dense ``n x n``
block per word.  Both are immutable values: every operation returns a new
element, and coefficients below the drop tolerance are discarded.
"""

from __future__ import annotations

import json
import math
from typing import Callable, Iterable, Mapping

import numpy as np

from .free_group import IDENTITY, Word, inverse, multiply, reduce, sort_key

__all__ = [
    "DROP_TOL",
    "GroupAlgebraElement",
    "MatrixLevelElement",
    "delta",
    "element_from_json",
    "element_to_json",
]

DROP_TOL = 1e-15


def _as_word(s) -> Word:
    return s if isinstance(s, Word) else reduce(s)


class GroupAlgebraElement:
    """``sum a_s lambda_s`` with finitely many nonzero complex ``a_s``."""

    __slots__ = ("_coeffs",)
    level = 1

    def __init__(self, coefficients: Mapping | Iterable = (), drop_tol: float = DROP_TOL):
        items = coefficients.items() if isinstance(coefficients, Mapping) else coefficients
        acc: dict[Word, complex] = {}
        for s, c in items:
            w = _as_word(s)
            acc[w] = acc[w] + complex(c) if w in acc else complex(c)
        self._coeffs = {w: c for w, c in acc.items() if abs(c) >= drop_tol}

    @classmethod
    def basis(cls, s, c: complex = 1.0) -> "GroupAlgebraElement":
        return cls({s: c})

    @classmethod
    def zero(cls) -> "GroupAlgebraElement":
        return cls()

    @property
    def coefficients(self) -> dict[Word, complex]:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def support(self) -> list[Word]:
        return sorted(self._coeffs, key=sort_key)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __getitem__(self, s) -> complex:
        return self._coeffs.get(_as_word(s), 0j)

    def delta(self, s) -> complex:
        """Coefficient of ``lambda_s`` (the pairing with ``delta_s``)."""
        return self[s]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self) -> str:
        terms = " + ".join(f"({c:g})*l[{w.pretty()}]" for w, c in sorted(self._coeffs.items(), key=lambda t: sort_key(t[0])))
        return f"GroupAlgebraElement({terms or '0'})"

    def allclose(self, other: "GroupAlgebraElement", atol: float = 1e-12) -> bool:
        keys = set(self._coeffs) | set(other._coeffs)
        return all(abs(self[k] - other[k]) <= atol for k in keys)

    # arithmetic

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return GroupAlgebraElement(list(self._coeffs.items()) + list(other._coeffs.items()))

    def __neg__(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement({w: -c for w, c in self._coeffs.items()})

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self + (-other)

    def scale(self, c: complex) -> "GroupAlgebraElement":
        return GroupAlgebraElement({w: c * v for w, v in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, GroupAlgebraElement):
            return self.convolve(other)
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return NotImplemented

    def convolve(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        out: dict[Word, complex] = {}
        for r, x in self._coeffs.items():
            for s, y in other._coeffs.items():
                t = multiply(r, s)
                out[t] = out.get(t, 0j) + x * y
        return GroupAlgebraElement(out)

    def adjoint(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement({inverse(w): c.conjugate() for w, c in self._coeffs.items()})

    def map_coefficients(self, fn: Callable[[Word, complex], complex]) -> "GroupAlgebraElement":
        return GroupAlgebraElement({w: fn(w, c) for w, c in self._coeffs.items()})

    def radial(self, symbol: Callable[[int], float]) -> "GroupAlgebraElement":
        """Multiply the coefficient at ``s`` by ``symbol(|s|)``."""
        return GroupAlgebraElement({w: symbol(len(w)) * c for w, c in self._coeffs.items()})

    def length_component(self, d: int) -> "GroupAlgebraElement":
        if d < 0:
            raise ValueError("length must be nonnegative")
        return GroupAlgebraElement({w: c for w, c in self._coeffs.items() if len(w) == d})

    # norms

    def l1_norm(self) -> float:
        return math.fsum(abs(c) for c in self._coeffs.values())

    def l2_norm(self) -> float:
        return math.sqrt(math.fsum(abs(c) ** 2 for c in self._coeffs.values()))

    def support_radius(self) -> int:
        return max((len(w) for w in self._coeffs), default=0)

    def to_matrix_level(self) -> "MatrixLevelElement":
        return MatrixLevelElement(1, {w: np.array([[c]], dtype=complex) for w, c in self._coeffs.items()})

    def tensor(self, u: np.ndarray) -> "MatrixLevelElement":
        """``u (x) self`` for an ``n x n`` matrix ``u``."""
        u = np.asarray(u, dtype=complex)
        return MatrixLevelElement(u.shape[0], {w: c * u for w, c in self._coeffs.items()})


class MatrixLevelElement:
    """``sum u_s (x) lambda_s`` with ``u_s`` dense ``n x n`` complex matrices."""

    __slots__ = ("level", "_coeffs")

    def __init__(self, level: int, coefficients: Mapping | Iterable = (), drop_tol: float = DROP_TOL):
        if level < 1:
            raise ValueError("matrix level must be positive")
        self.level = int(level)
        items = coefficients.items() if isinstance(coefficients, Mapping) else coefficients
        acc: dict[Word, np.ndarray] = {}
        for s, u in items:
            w = _as_word(s)
            u = np.array(u, dtype=complex)
            if u.ndim == 0:
                u = u.reshape(1, 1)
            if u.shape != (self.level, self.level):
                raise ValueError(f"coefficient at {w.pretty()} has shape {u.shape}, expected {(self.level, self.level)}")
            acc[w] = acc[w] + u if w in acc else u
        self._coeffs = {w: u for w, u in acc.items() if np.linalg.norm(u) >= drop_tol}
        for u in self._coeffs.values():
            u.setflags(write=False)

    @classmethod
    def zero(cls, level: int) -> "MatrixLevelElement":
        return cls(level)

    @property
    def coefficients(self) -> dict[Word, np.ndarray]:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def support(self) -> list[Word]:
        return sorted(self._coeffs, key=sort_key)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __getitem__(self, s) -> np.ndarray:
        w = _as_word(s)
        if w in self._coeffs:
            return self._coeffs[w]
        return np.zeros((self.level, self.level), dtype=complex)

    def delta(self, s) -> np.ndarray:
        return self[s]

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixLevelElement):
            return NotImplemented
        return (
            self.level == other.level
            and self._coeffs.keys() == other._coeffs.keys()
            and all(np.array_equal(u, other._coeffs[w]) for w, u in self._coeffs.items())
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"MatrixLevelElement(level={self.level}, support={[w.pretty() for w in self.support()]})"

    def allclose(self, other: "MatrixLevelElement", atol: float = 1e-12) -> bool:
        keys = set(self._coeffs) | set(other._coeffs)
        return self.level == other.level and all(np.max(np.abs(self[k] - other[k])) <= atol for k in keys)

    def _check(self, other: "MatrixLevelElement") -> None:
        if self.level != other.level:
            raise ValueError(f"level mismatch: {self.level} vs {other.level}")

    def __add__(self, other: "MatrixLevelElement") -> "MatrixLevelElement":
        if not isinstance(other, MatrixLevelElement):
            return NotImplemented
        self._check(other)
        return MatrixLevelElement(self.level, list(self._coeffs.items()) + list(other._coeffs.items()))

    def __neg__(self) -> "MatrixLevelElement":
        return MatrixLevelElement(self.level, {w: -u for w, u in self._coeffs.items()})

    def __sub__(self, other: "MatrixLevelElement") -> "MatrixLevelElement":
        if not isinstance(other, MatrixLevelElement):
            return NotImplemented
        return self + (-other)

    def scale(self, c: complex) -> "MatrixLevelElement":
        return MatrixLevelElement(self.level, {w: c * u for w, u in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, MatrixLevelElement):
            return self.convolve(other)
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        return NotImplemented

    def convolve(self, other: "MatrixLevelElement") -> "MatrixLevelElement":
        self._check(other)
        out: dict[Word, np.ndarray] = {}
        for r, x in self._coeffs.items():
            for s, y in other._coeffs.items():
                t = multiply(r, s)
                out[t] = out[t] + x @ y if t in out else x @ y
        return MatrixLevelElement(self.level, out)

    def adjoint(self) -> "MatrixLevelElement":
        return MatrixLevelElement(self.level, {inverse(w): u.conj().T for w, u in self._coeffs.items()})

    def radial(self, symbol: Callable[[int], float]) -> "MatrixLevelElement":
        return MatrixLevelElement(self.level, {w: symbol(len(w)) * u for w, u in self._coeffs.items()})

    def map_coefficients(self, fn: Callable[[Word, np.ndarray], np.ndarray]) -> "MatrixLevelElement":
        return MatrixLevelElement(self.level, {w: fn(w, u) for w, u in self._coeffs.items()})

    def length_component(self, d: int) -> "MatrixLevelElement":
        if d < 0:
            raise ValueError("length must be nonnegative")
        return MatrixLevelElement(self.level, {w: u for w, u in self._coeffs.items() if len(w) == d})

    def l1_norm(self) -> float:
        """Sum of operator norms of the coefficient blocks."""
        return math.fsum(float(np.linalg.norm(u, 2)) for u in self._coeffs.values())

    def l2_norm(self) -> float:
        """Square root of the summed squared operator norms."""
        return math.sqrt(math.fsum(float(np.linalg.norm(u, 2)) ** 2 for u in self._coeffs.values()))

    def support_radius(self) -> int:
        return max((len(w) for w in self._coeffs), default=0)

    def to_matrix_level(self) -> "MatrixLevelElement":
        return self


def delta(x: GroupAlgebraElement | MatrixLevelElement, s) -> complex | np.ndarray:
    return x.delta(s)


def _pair(c: complex) -> list[float]:
    return [float(c.real), float(c.imag)]


def element_to_json(x: GroupAlgebraElement | MatrixLevelElement, pretty_identity: bool = False) -> dict:
    """Serialize to ``{"level": n, "terms": [{"word": ..., "coeff": ...}]}``."""
    terms = []
    for w in x.support():
        name = w.pretty() if pretty_identity else str(w)
        c = x[w]
        if isinstance(x, GroupAlgebraElement):
            coeff = _pair(c)
        else:
            coeff = [[_pair(complex(v)) for v in row] for row in c]
        terms.append({"word": name, "coeff": coeff})
    return {"level": x.level, "terms": terms}


def element_from_json(doc: dict | str) -> GroupAlgebraElement | MatrixLevelElement:
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        level = int(doc.get("level", 1))
        terms = doc["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed element document: {exc}") from None
    if level < 1:
        raise ValueError("level must be positive")
    scalar = level == 1 and all(
        len(t["coeff"]) == 2 and not isinstance(t["coeff"][0], list) for t in terms
    )
    if scalar:
        return GroupAlgebraElement([(reduce(t["word"]), complex(*t["coeff"])) for t in terms], drop_tol=0.0)
    items = []
    for t in terms:
        arr = np.array([[complex(re, im) for re, im in row] for row in t["coeff"]], dtype=complex)
        items.append((reduce(t["word"]), arr))
    return MatrixLevelElement(level, items, drop_tol=0.0)
