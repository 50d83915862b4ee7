"""From frames to bases: the sequence space Y, the maps Q and T, Auerbach pairs.

A frame ``(x_i, f_i)`` with ``||x_i|| = 1`` induces matrix norms on finitely
supported coefficient sequences ``u = sum u_i (x) e_i``:

    |||u|||_n = max_m || sum_{i <= m} u_i (x) x_i ||_n

for which the unit vectors ``e_i`` form a completely contractive basis, and
the unconditional variant maximizes over finite subsets instead of prefixes.
``Q`` sends ``e_i`` to ``x_i`` and ``T`` sends ``x`` to ``sum f_i(x) e_i``,
with ``QT = id``.  Only finite truncations are ever built.

The generic construction turns any sequence of finite-rank block maps
``Psi_k = sum_j y_{k,j} (x) g_{k,j}`` into a frame by cloning each pair
``m(k)**2`` times with the functional divided by ``m(k)**2``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np
from scipy import optimize

from .algebra import GroupAlgebraElement, MatrixLevelElement
from .free_group import CapacityError, Word, ball
from .frame import F2Frame, FrameIndex, index_decompose
from .multipliers import psi_symbol
from .norms import DEFAULT_RADIUS, DEFAULT_TOL, NormEstimate, matrix_level_norm

__all__ = [
    "CoefficientSequence",
    "BlockMapSpec",
    "GenericFrame",
    "GenericTerm",
    "AuerbachSystem",
    "triple_norm",
    "unconditional_triple_norm",
    "q_apply",
    "t_apply",
    "qt_identity_check",
    "qt_residual_closed_form",
    "auerbach",
    "generic_frame_from_maps",
    "cb_basic_criterion",
    "UNCONDITIONAL_CAP",
]

UNCONDITIONAL_CAP = 12

_DEFAULT_FRAME = F2Frame()


@dataclass
class CoefficientSequence:
    """``u = sum_i u_i (x) e_i`` with finitely many nonzero ``n x n`` blocks ``u_i``.

    ``tail`` optionally records, per support word of the element a truncated
    ``T`` was applied to, the frame weight not yet accounted for.
    """

    level: int
    entries: dict[int, np.ndarray] = field(default_factory=dict)
    tail: dict[Word, float] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for i, u in self.entries.items():
            i = int(i)
            if i < 1:
                raise ValueError("sequence indices start at 1")
            u = np.array(u, dtype=complex).reshape(self.level, self.level)
            if np.any(u):
                clean[i] = u
        self.entries = dict(sorted(clean.items()))

    @classmethod
    def from_scalars(cls, values: Mapping[int, complex]) -> "CoefficientSequence":
        return cls(1, {i: np.array([[v]], dtype=complex) for i, v in values.items()})

    def support(self) -> list[int]:
        return list(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def prefix(self, m: int) -> "CoefficientSequence":
        return CoefficientSequence(self.level, {i: u for i, u in self.entries.items() if i <= m})

    def restrict(self, E) -> "CoefficientSequence":
        E = set(E)
        return CoefficientSequence(self.level, {i: u for i, u in self.entries.items() if i in E})

    def scalar_values(self) -> dict[int, complex]:
        if self.level != 1:
            raise ValueError("scalar view needs level 1")
        return {i: complex(u[0, 0]) for i, u in self.entries.items()}

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "entries": [
                {"index": i, "coeff": [[[float(v.real), float(v.imag)] for v in row] for row in u]}
                for i, u in self.entries.items()
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CoefficientSequence":
        level = int(doc.get("level", 1))
        entries = {}
        for e in doc["entries"]:
            c = e["coeff"]
            if level == 1 and len(c) == 2 and not isinstance(c[0], list):
                arr = np.array([[complex(*c)]])
            else:
                arr = np.array([[complex(re, im) for re, im in row] for row in c])
            entries[int(e["index"])] = arr
        return cls(level, entries)


def _sum_exact(parts: list[np.ndarray]) -> np.ndarray:
    if len(parts) == 1:
        return parts[0]
    arr = np.stack(parts)
    out = np.empty(arr.shape[1:], dtype=complex)
    for idx in np.ndindex(*arr.shape[1:]):
        col = arr[(slice(None),) + idx]
        out[idx] = complex(math.fsum(col.real), math.fsum(col.imag))
    return out


def q_apply(coeffs: CoefficientSequence, frame=_DEFAULT_FRAME) -> MatrixLevelElement:
    """``Q(u) = sum_i u_i (x) x_i``."""
    parts: dict[Word, list[np.ndarray]] = {}
    word_of = getattr(frame, "word", None)
    for i, u in coeffs.entries.items():
        if word_of is not None:
            parts.setdefault(word_of(i), []).append(u)
        else:
            for w, c in frame.vector(i).items():
                parts.setdefault(w, []).append(c * u)
    return MatrixLevelElement(coeffs.level, {w: _sum_exact(p) for w, p in parts.items()})


def t_apply(x: GroupAlgebraElement | MatrixLevelElement, N: int, frame=_DEFAULT_FRAME) -> CoefficientSequence:
    """Truncation ``sum_{i <= N} f_i(x) e_i`` of ``T(x)``, with its tail weights."""
    if N < 1:
        raise ValueError("N must be at least 1")
    level = x.level
    entries: dict[int, np.ndarray] = {}
    if hasattr(frame, "occurrences"):
        for s, c in x.items():
            c = np.asarray(c, dtype=complex).reshape(level, level)
            for i, a in frame.occurrences(s, N):
                if a != 0.0:
                    entries[i] = a * c
    else:
        for i in range(1, N + 1):
            val = frame.functional(i, x)
            if np.any(val):
                entries[i] = np.asarray(val, dtype=complex).reshape(level, level)
    tail = {}
    if hasattr(frame, "partial_sum_weight"):
        tail = {s: 1.0 - frame.partial_sum_weight(N, s) for s, _ in x.items()}
    return CoefficientSequence(level, entries, tail)


def qt_identity_check(x: GroupAlgebraElement | MatrixLevelElement, N: int, frame=_DEFAULT_FRAME) -> float:
    """l1 distance (sum of coefficient operator norms) between ``x`` and ``Q T_N x``."""
    xm = x.to_matrix_level()
    return (xm - q_apply(t_apply(x, N, frame), frame)).l1_norm()


def qt_residual_closed_form(x: GroupAlgebraElement | MatrixLevelElement, N: int, frame=_DEFAULT_FRAME) -> float:
    xm = x.to_matrix_level()
    return math.fsum(
        float(np.linalg.norm(u, 2)) * (1.0 - frame.partial_sum_weight(N, s)) for s, u in xm.items()
    )


def _combine(estimates: list[NormEstimate], R: int, tol: float, seed: int) -> NormEstimate:
    if not estimates:
        return NormEstimate(0.0, 0.0, R, 0, tol, seed)
    return NormEstimate(
        max(e.lower for e in estimates),
        max(e.upper for e in estimates),
        R,
        sum(e.iterations for e in estimates),
        tol,
        seed,
        all(e.converged for e in estimates),
    )


def triple_norm(
    u: CoefficientSequence,
    frame=_DEFAULT_FRAME,
    R: int = DEFAULT_RADIUS,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
) -> NormEstimate:
    """``max_m || sum_{i <= m} u_i (x) x_i ||_n`` as an interval.

    Partial sums only change at support indices, so the supremum is a
    maximum over those prefixes.
    """
    ests = [matrix_level_norm(q_apply(u.prefix(m), frame), R, tol, seed) for m in u.support()]
    return _combine(ests, R, tol, seed)


def unconditional_triple_norm(
    u: CoefficientSequence,
    frame=_DEFAULT_FRAME,
    R: int = DEFAULT_RADIUS,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    max_support: int = UNCONDITIONAL_CAP,
) -> NormEstimate:
    """``max_E || sum_{i in E} u_i (x) x_i ||_n`` over all subsets of the support."""
    supp = u.support()
    if len(supp) > max_support:
        raise CapacityError(f"support of size {len(supp)} exceeds subset cap {max_support}")
    ests = []
    for r in range(1, len(supp) + 1):
        for E in itertools.combinations(supp, r):
            ests.append(matrix_level_norm(q_apply(u.restrict(E), frame), R, tol, seed))
    return _combine(ests, R, tol, seed)


# Auerbach pairs


@dataclass
class AuerbachSystem:
    """Biorthogonal system ``(y_j, y*_j)`` in the span of a finite basis.

    ``coords[:, j]`` holds the coordinates of ``y_j`` in the input basis and
    ``functionals[j]`` acts on input-basis coordinates, so
    ``functionals @ coords`` is the identity.
    """

    basis: np.ndarray
    coords: np.ndarray
    functionals: np.ndarray
    vector_norms: np.ndarray
    dual_norms: np.ndarray
    determinant: float
    converged: bool

    @property
    def vectors(self) -> np.ndarray:
        return self.basis @ self.coords

    @property
    def eps(self) -> float:
        return max(0.0, float(np.max(self.dual_norms)) - 1.0)

    def biorthogonality_error(self) -> float:
        return float(np.max(np.abs(self.functionals @ self.coords - np.eye(self.coords.shape[0]))))

    def pairs(self) -> list[tuple[np.ndarray, np.ndarray]]:
        vecs = self.vectors
        return [(vecs[:, j], self.functionals[j]) for j in range(vecs.shape[1])]


def _dual_norm(row: np.ndarray, nrm: Callable[[np.ndarray], float], rng, samples: int, polish: int = 3):
    """Estimate ``sup |row . c| / nrm(c)``; returns (value, maximizing c)."""
    d = row.shape[0]

    def ratio(c):
        n = nrm(c)
        return abs(row @ c) / n if n > 0 else 0.0

    cands = [np.eye(d)[i] for i in range(d)] + [row.copy()]
    cands += list(rng.standard_normal((samples, d)))
    cands += list(np.sign(rng.standard_normal((samples, d))))
    vals = np.array([ratio(c) for c in cands])
    best_i = int(np.argmax(vals))
    best, best_c = vals[best_i], cands[best_i]
    for i in np.argsort(vals)[::-1][:polish]:
        res = optimize.minimize(
            lambda c: -ratio(c), cands[i], method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 400 * d},
        )
        if -res.fun > best:
            best, best_c = -res.fun, res.x
    return float(best), np.asarray(best_c, dtype=float)


def auerbach(
    basis: Sequence[np.ndarray] | np.ndarray,
    norm: Callable[[np.ndarray], float],
    eps: float = 0.05,
    seed: int = 0,
    starts: int = 4,
    max_rounds: int = 100,
    samples: int = 400,
) -> AuerbachSystem:
    """Auerbach pairs by determinant maximization.

    Starting from a frame of unit vectors (the normalized input basis first,
    then random ones), each column is swapped for a unit vector maximizing
    its dual functional whenever that functional has norm above
    ``1 + eps/4``; every swap multiplies ``|det|`` by the functional's norm,
    so the iteration only climbs.  The first start that settles is kept
    (otherwise the largest determinant) and its dual norms are re-estimated
    with a larger sample.  Dual norms are sampled maxima polished by
    Nelder-Mead: an estimate, not a proof.
    """
    B = np.column_stack([np.asarray(v, dtype=float) for v in basis]) if not isinstance(basis, np.ndarray) else np.asarray(basis, dtype=float)
    if B.ndim == 1:
        B = B[:, None]
    d = B.shape[1]
    if d > 8:
        raise CapacityError("Auerbach search supports dimension <= 8")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if np.linalg.matrix_rank(B) < d:
        raise ValueError("basis vectors are linearly dependent")
    rng = np.random.default_rng(seed)

    def nrm(c):
        return float(norm(B @ c))

    def unit(c):
        return c / nrm(c)

    best = None
    for s in range(starts):
        # the input basis goes first; it is returned as-is when already Auerbach
        C0 = np.eye(d) if s == 0 else rng.standard_normal((d, d))
        if abs(np.linalg.det(C0)) < 1e-8:
            continue
        C = np.column_stack([unit(C0[:, j]) for j in range(d)])
        ok = False
        for _ in range(max_rounds):
            changed = False
            for j in range(d):
                row = np.linalg.inv(C)[j]
                val, c = _dual_norm(row, nrm, rng, samples // 4)
                if val > 1 + eps / 4:
                    C[:, j] = unit(c)
                    changed = True
            if not changed:
                ok = True
                break
        det = abs(np.linalg.det(C))
        if best is None or (ok and not best[2]) or (ok == best[2] and det > best[0]):
            best = (det, C.copy(), ok)
        if ok:
            break
    det, C, ok = best
    F = np.linalg.inv(C)
    duals = np.array([_dual_norm(F[j], nrm, rng, samples, polish=5)[0] for j in range(d)])
    vnorms = np.array([nrm(C[:, j]) for j in range(d)])
    return AuerbachSystem(B, C, F, vnorms, duals, float(det), ok and bool(np.all(duals <= 1 + eps)))


# generic frames from block maps


def _evaluate(g: Any, x: Any) -> Any:
    if isinstance(g, Mapping):
        return sum(c * x.delta(w) for w, c in g.items())
    if isinstance(g, GroupAlgebraElement):
        return sum(c * x.delta(w) for w, c in g.items())
    if callable(g):
        return g(x)
    return np.dot(np.asarray(g), np.asarray(x))


@dataclass
class BlockMapSpec:
    """Blocks of base pairs ``(y_{k,j}, g_{k,j})``; block ``k`` is ``blocks[k-1]``.

    ``g`` may be a mapping word -> coefficient (meaning ``sum c delta_w``), a
    callable, or a coefficient vector.  If ``norm`` is given, each ``y`` is
    rescaled to norm one and its functional multiplied by the old norm, which
    leaves ``y (x) g`` unchanged.
    """

    blocks: Sequence[Sequence[tuple[Any, Any]]]
    norm: Callable[[Any], float] | None = None

    def block_size(self, k: int) -> int:
        return len(self.blocks[k - 1])

    @classmethod
    def free_group(cls, k_max: int) -> "BlockMapSpec":
        blocks = []
        for k in range(1, k_max + 1):
            blocks.append([(GroupAlgebraElement.basis(s), {s: psi_symbol(k, len(s))}) for s in ball(k)])
        return cls(blocks)


@dataclass(frozen=True)
class GenericTerm:
    index: FrameIndex
    vector: Any
    functional: Any
    scale: int  # functional is g / scale

    def apply_functional(self, x) -> Any:
        return _evaluate(self.functional, x) / self.scale


class GenericFrame:
    """Cloned frame built from a :class:`BlockMapSpec`."""

    def __init__(self, spec: BlockMapSpec):
        self.spec = spec
        self.k_cap = len(spec.blocks)
        if self.k_cap == 0:
            raise ValueError("spec has no blocks")
        self._pairs = []
        for blk in spec.blocks:
            if not blk:
                raise ValueError("empty block")
            pairs = []
            for y, g in blk:
                if spec.norm is not None:
                    r = spec.norm(y)
                    if r == 0:
                        raise ValueError("zero vector in block")
                    y = y * (1.0 / r) if not isinstance(y, np.ndarray) else y / r
                    g = _Scaled(g, r)
                pairs.append((y, g))
            self._pairs.append(pairs)

    def _size(self, k: int) -> int:
        return len(self._pairs[k - 1])

    def __len__(self) -> int:
        return sum(self._size(k) ** 3 for k in range(1, self.k_cap + 1))

    def index(self, n: int) -> FrameIndex:
        return index_decompose(n, sizes=self._size, k_cap=self.k_cap)

    def term(self, n: int) -> GenericTerm:
        idx = self.index(n)
        y, g = self._pairs[idx.k - 1][idx.j - 1]
        return GenericTerm(idx, y, g, idx.size**2)

    def vector(self, n: int):
        return self.term(n).vector

    def functional(self, n: int, x):
        return self.term(n).apply_functional(x)


@dataclass(frozen=True)
class _Scaled:
    g: Any
    factor: float

    def __call__(self, x):
        return self.factor * _evaluate(self.g, x)


def generic_frame_from_maps(spec: BlockMapSpec) -> GenericFrame:
    return GenericFrame(spec)


# cb-basic sequences


def cb_basic_criterion(
    seq: Sequence[GroupAlgebraElement],
    samples: int = 8,
    R: int = 4,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    level: int = 1,
) -> float:
    """Empirical lower bound for the smallest ``K`` with
    ``||sum_{j<=m} u_j (x) e_j|| <= K ||sum_{j<=l} u_j (x) e_j||`` for all ``m <= l``.

    Prefix norms enter through certified lower bounds on the left and
    certified upper bounds on the right, so each sampled ratio is a genuine
    lower bound for ``K``.  A vanishing right-hand side with a nonzero left
    side gives ``inf``.
    """
    seq = [s if isinstance(s, GroupAlgebraElement) else GroupAlgebraElement(s) for s in seq]
    L = len(seq)
    if L == 0:
        raise ValueError("empty sequence")
    rng = np.random.default_rng(seed)
    eye = np.eye(level, dtype=complex)
    tuples: list[list[np.ndarray]] = [[eye] * L]
    for a in range(L):
        tuples.append([eye if j == a else 0 * eye for j in range(L)])
        for b in range(a + 1, L):
            tuples.append([eye if j == a else (-eye if j == b else 0 * eye) for j in range(L)])
    for _ in range(samples):
        tuples.append([rng.standard_normal((level, level)) + 1j * rng.standard_normal((level, level)) for _ in range(L)])
    K = 1.0
    for ti, us in enumerate(tuples):
        lowers, uppers = [], []
        acc = MatrixLevelElement(level)
        for j in range(L):
            acc = acc + seq[j].tensor(us[j])
            est = matrix_level_norm(acc, R, tol, seed + ti)
            lowers.append(est.lower)
            uppers.append(est.upper)
        for l in range(L):
            for m in range(l + 1):
                if lowers[m] == 0.0:
                    continue
                if uppers[l] == 0.0:
                    return math.inf
                K = max(K, lowers[m] / uppers[l])
    return K
