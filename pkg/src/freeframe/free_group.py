"""Reduced words in the free group on two generators.

Letters are serialized as ``a``, ``b`` for the generators and ``A``, ``B`` for
their inverses.  The identity is the empty word; ``"e"`` is accepted on input.

Words are totally ordered by length first and then lexicographically with
``a < b < A < B``.  Balls of that order are prefixes of one another, so the
rank of a word is also its row index in every ball truncation that contains it.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

__all__ = [
    "ALPHABET",
    "CapacityError",
    "Word",
    "IDENTITY",
    "reduce",
    "multiply",
    "inverse",
    "sphere",
    "ball",
    "sphere_size",
    "ball_size",
    "rank",
    "unrank",
    "sort_key",
    "get_enumeration_cap",
    "set_enumeration_cap",
]

ALPHABET = "abAB"
_CODE = {c: i for i, c in enumerate(ALPHABET)}
_INVERT = str.maketrans("abAB", "ABab")
_PARTNER = {"a": "A", "A": "a", "b": "B", "B": "b"}

_enumeration_cap = 12


class CapacityError(RuntimeError):
    """Raised when an enumeration would exceed the configured radius cap."""


def get_enumeration_cap() -> int:
    return _enumeration_cap


def set_enumeration_cap(radius: int) -> None:
    """Set the largest sphere/ball radius that may be materialized."""
    global _enumeration_cap
    if radius < 0:
        raise ValueError("enumeration cap must be nonnegative")
    _enumeration_cap = int(radius)


class Word(str):
    """A fully reduced word; behaves as the string of its letters.

    Construction validates: use :func:`reduce` for arbitrary letter strings.
    """

    __slots__ = ()

    def __new__(cls, letters: str = "") -> "Word":
        if isinstance(letters, Word):
            return letters
        if letters == "e":
            letters = ""
        prev = ""
        for c in letters:
            if c not in _CODE:
                raise ValueError(f"invalid letter {c!r} in word {letters!r}")
            if prev and _PARTNER[prev] == c:
                raise ValueError(f"word {letters!r} is not reduced")
            prev = c
        return str.__new__(cls, letters)

    @classmethod
    def _trusted(cls, letters: str) -> "Word":
        return str.__new__(cls, letters)

    @property
    def length(self) -> int:
        return len(self)

    def is_identity(self) -> bool:
        return len(self) == 0

    def pretty(self) -> str:
        return str(self) if self else "e"

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __mul__(self, other):  # type: ignore[override]
        if isinstance(other, str):
            return multiply(self, Word(other))
        return NotImplemented

    def __invert__(self) -> "Word":
        return inverse(self)


IDENTITY = Word("")


def reduce(letters: Iterable[str] | str) -> Word:
    """Freely reduce a raw letter sequence."""
    if isinstance(letters, Word):
        return letters
    if isinstance(letters, str) and letters == "e":
        return IDENTITY
    stack: list[str] = []
    for c in letters:
        if c not in _CODE:
            raise ValueError(f"invalid letter {c!r}")
        if stack and _PARTNER[stack[-1]] == c:
            stack.pop()
        else:
            stack.append(c)
    return Word._trusted("".join(stack))


def _mul(u: str, v: str) -> str:
    # both arguments reduced
    k = 0
    nu, nv = len(u), len(v)
    while k < nu and k < nv and _PARTNER[u[nu - 1 - k]] == v[k]:
        k += 1
    return u[: nu - k] + v[k:]


def multiply(w1: Word | str, w2: Word | str) -> Word:
    return Word._trusted(_mul(Word(w1), Word(w2)))


def inverse(w: Word | str) -> Word:
    return Word._trusted(Word(w)[::-1].translate(_INVERT))


def sort_key(w: str) -> tuple[int, tuple[int, ...]]:
    return len(w), tuple(_CODE[c] for c in w)


def sphere_size(d: int) -> int:
    if d < 0:
        raise ValueError("radius must be nonnegative")
    return 1 if d == 0 else 4 * 3 ** (d - 1)


def ball_size(k: int) -> int:
    if k < 0:
        raise ValueError("radius must be nonnegative")
    return 2 * 3**k - 1


def _check_cap(d: int, cap: int | None) -> None:
    if d < 0:
        raise ValueError("radius must be nonnegative")
    limit = _enumeration_cap if cap is None else cap
    if d > limit:
        raise CapacityError(f"radius {d} exceeds enumeration cap {limit}")


@lru_cache(maxsize=None)
def _sphere(d: int) -> tuple[Word, ...]:
    if d == 0:
        return (IDENTITY,)
    out = []
    for w in _sphere(d - 1):
        bad = _PARTNER[w[-1]] if w else ""
        for c in ALPHABET:
            if c != bad:
                out.append(Word._trusted(w + c))
    return tuple(out)


@lru_cache(maxsize=None)
def _ball(k: int) -> tuple[Word, ...]:
    out: list[Word] = []
    for d in range(k + 1):
        out.extend(_sphere(d))
    return tuple(out)


def sphere(d: int, cap: int | None = None) -> tuple[Word, ...]:
    """All reduced words of length ``d`` in word order."""
    _check_cap(d, cap)
    return _sphere(d)


def ball(k: int, cap: int | None = None) -> tuple[Word, ...]:
    """All reduced words of length at most ``k`` in word order."""
    _check_cap(k, cap)
    return _ball(k)


def rank(w: Word | str) -> int:
    """Position of ``w`` in word order; the identity has rank 0."""
    return _rank(Word(w))


def _rank(w: str) -> int:
    d = len(w)
    if d == 0:
        return 0
    r = _CODE[w[0]]
    prev = r
    for c in w[1:]:
        code = _CODE[c]
        bad = (prev + 2) % 4
        r = 3 * r + (code - (code > bad))
        prev = code
    return ball_size(d - 1) + r


def unrank(r: int) -> Word:
    """Inverse of :func:`rank`; works for any radius without enumeration."""
    if r < 0:
        raise ValueError(f"rank must be nonnegative, got {r}")
    if r == 0:
        return IDENTITY
    d = 1
    while ball_size(d) <= r:
        d += 1
    offset = r - ball_size(d - 1)
    digits = []
    for _ in range(d - 1):
        offset, rem = divmod(offset, 3)
        digits.append(rem)
    first = offset
    letters = [ALPHABET[first]]
    prev = first
    for pos in reversed(digits):
        bad = (prev + 2) % 4
        code = pos + (pos >= bad)
        letters.append(ALPHABET[code])
        prev = code
    return Word._trusted("".join(letters))
