"""Large-N limits with ``p_r = lam_r N`` and ``Sigma_r = C_r / N``.

The centering of ``tr(W_t(1) ... W_t(n))`` is linear in N with coefficient
:func:`limit_mean`; the fluctuations are asymptotically Gaussian with the
covariances computed by :func:`limit_covariance` and :func:`clt_covariance`.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from numbers import Number
from typing import Callable, Mapping, Sequence

import numpy as np

from .coloring import DEFAULT_ENUM_CAP, Coloring, connecting_planar_sets, long_cycle, planar_set, two_star_sigmas
from .cumulants import StarsSpec, cumulant_hypermap
from .perm import _compose0, _count_cycles0, _cycles0
from .words import TraceWord, trace_product

__all__ = [
    "InsufficientMomentsError",
    "MomentSequence",
    "word_moments",
    "CltCovariance",
    "limit_mean",
    "mean_shift",
    "limit_covariance",
    "clt_covariance",
]


class InsufficientMomentsError(ValueError):
    """A limit formula needs ``m_k`` beyond the supplied sequence."""


@dataclass(frozen=True)
class MomentSequence:
    """Limiting normalized moments ``m_1, m_2, ...`` of a common matrix C."""

    values: tuple

    def __call__(self, k: int):
        if not 1 <= k <= len(self.values):
            raise InsufficientMomentsError(f"m_{k} needed but only m_1..m_{len(self.values)} given")
        return self.values[k - 1]

    def __len__(self):
        return len(self.values)

    @classmethod
    def ones(cls, K: int) -> "MomentSequence":
        return cls((1,) * K)

    @classmethod
    def from_matrix(cls, C: np.ndarray, K: int) -> "MomentSequence":
        """``m_k = (1/N) tr(C^k)`` at the given finite N."""
        C = np.asarray(C)
        N = C.shape[0]
        out, power = [], np.eye(N, dtype=C.dtype)
        for _ in range(K):
            power = power @ C
            out.append(float(np.real(np.trace(power))) / N)
        return cls(tuple(out))

    def word_oracle(self) -> Callable[[TraceWord], object]:
        return lambda w: self(len(w))


def word_moments(matrices: Mapping[int, np.ndarray] | Sequence[np.ndarray]) -> Callable[[TraceWord], complex]:
    """Oracle ``m^f = (1/N) tr(C_{c1} C_{c2} ...)`` for distinct matrices per color."""
    if not isinstance(matrices, Mapping):
        matrices = {r + 1: np.asarray(m) for r, m in enumerate(matrices)}
    N = next(iter(matrices.values())).shape[0]
    cache: dict[TraceWord, complex] = {}

    def oracle(w: TraceWord) -> complex:
        if w not in cache:
            cache[w] = trace_product(w, matrices) / N
        return cache[w]

    return oracle


def _face_product(face, m: MomentSequence):
    out = 1
    for cyc in _cycles0(face):
        out = out * m(len(cyc))
    return out


def limit_mean(t: Coloring, lam, m: MomentSequence, cap: int = DEFAULT_ENUM_CAP):
    """Coefficient of N in the centering: sum over planar alpha of ``lam^{#C(alpha)} prod m_{|face|}``."""
    n = len(t)
    if len(m) < n:
        raise InsufficientMomentsError(f"mean of degree {n} needs m_1..m_{n}")
    sigma = long_cycle(n).images
    total = 0
    for a in planar_set(t, cap=cap):
        total = total + lam ** _count_cycles0(a.images) * _face_product(_compose0(sigma, a.images), m)
    return total


def mean_shift(t: Coloring, lam, m: MomentSequence, C: np.ndarray, cap: int = DEFAULT_ENUM_CAP) -> float:
    """Finite-N correction ``sum lam^{#C(alpha)} N (prod trN(C^|c|) - prod m_|c|)`` over planar alpha.

    With ``C = C_N`` it tracks the O(1) shift of the centered trace's mean
    (``lam^3 b`` for a three-letter word).
    """
    C = np.asarray(C)
    N = C.shape[0]
    finite = MomentSequence.from_matrix(C, len(t))
    sigma = long_cycle(len(t)).images
    total = 0.0
    for a in planar_set(t, cap=cap):
        face = _compose0(sigma, a.images)
        total += float(lam) ** _count_cycles0(a.images) * N * (
            float(_face_product(face, finite)) - float(_face_product(face, m))
        )
    return total


def _lam_value(lam, color: int):
    if isinstance(lam, Mapping):
        return lam[color]
    if isinstance(lam, (Sequence, np.ndarray)) and not isinstance(lam, str):
        return lam[color - 1]
    return lam


def limit_covariance(
    qa: Sequence[int],
    qb: Sequence[int],
    lam,
    m: MomentSequence | Callable[[TraceWord], object],
    cap: int = DEFAULT_ENUM_CAP,
):
    """``lim cov(tr q_a, tr q_b)``: the genus-zero two-star hypermap sum.

    ``lam`` is a number (common) or per-color sequence/mapping; ``m`` is a
    :class:`MomentSequence` or an oracle on color words.
    """
    oracle = m.word_oracle() if isinstance(m, MomentSequence) else m
    g0 = cumulant_hypermap(StarsSpec((tuple(qa), tuple(qb))), cap).grade(0)
    total = 0
    for mono, words, coef in g0.sorted_terms():
        val = coef
        for name, e in mono:
            val = val * _lam_value(lam, int(name[3:])) ** e
        for w in words:
            val = val * oracle(w)
        total = total + val
    return total


@dataclass(frozen=True)
class CltCovariance:
    """Limit law of the centered trace: Z = X + iY, jointly Gaussian."""

    EXX: object
    EYY: object
    EXY: object
    EZ2: object = 0
    EabsZ2: object = 0
    center_coefficient: object = 0
    mean_shift_b: float = 0.0

    def is_psd(self, tol: float = 1e-9) -> bool:
        xx, yy, xy = float(self.EXX), float(self.EYY), float(self.EXY)
        scale = max(1.0, abs(xx), abs(yy))
        return xx >= -tol * scale and yy >= -tol * scale and xx * yy - xy * xy >= -tol * scale * scale

    def to_dict(self) -> dict:
        def num(v):
            if isinstance(v, complex):
                return [v.real, v.imag]
            return float(v)

        return {k: num(v) for k, v in asdict(self).items()}


def _re(x):
    return x.real if isinstance(x, Number) else x


def _im(x):
    return x.imag if isinstance(x, Number) else 0


def clt_covariance(
    t: Coloring,
    lam,
    m: MomentSequence,
    C: np.ndarray | None = None,
    cap: int = DEFAULT_ENUM_CAP,
) -> CltCovariance:
    """Covariance of (X, Y) in the limit of ``tr(W_t(1)...W_t(n)) - N * center``.

    ``E Z^2`` sums over the forward two-star planar set and ``E|Z|^2`` over
    the reversed one; then ``E X^2 = (E|Z|^2 + Re E Z^2)/2``,
    ``E Y^2 = (E|Z|^2 - Re E Z^2)/2`` and ``E XY = Im E Z^2 / 2``. Exact
    inputs (ints, Fractions) give exact outputs.
    """
    n = len(t)
    if len(m) < 2 * n:
        raise InsufficientMomentsError(f"covariance of degree {n} needs m_1..m_{2 * n}")
    s2, s3 = (s.images for s in two_star_sigmas(n))
    star, starstar = connecting_planar_sets(t, cap)
    ez2 = 0
    for a in star:
        ez2 = ez2 + lam ** _count_cycles0(a.images) * _face_product(_compose0(s2, a.images), m)
    eabs = 0
    for a in starstar:
        eabs = eabs + lam ** _count_cycles0(a.images) * _face_product(_compose0(s3, a.images), m)
    half = Fraction(1, 2)
    exx = (eabs + _re(ez2)) * half
    eyy = (eabs - _re(ez2)) * half
    exy = _im(ez2) * half
    shift = mean_shift(t, lam, m, C, cap) if C is not None else 0.0
    return CltCovariance(exx, eyy, exy, ez2, eabs, limit_mean(t, lam, m, cap), shift)
