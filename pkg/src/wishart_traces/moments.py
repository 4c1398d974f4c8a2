"""Exact moments of trace monomials in independent complex Wishart matrices.

For ``W_r ~ W(Sigma_r, p_r)`` independent and a monomial ``q_{sigma,t,h}``
(a product over the cycles of ``sigma`` of traces of ``h_j W_{t(j)}``),

    E q_{sigma,t,h}(W) = sum over color-preserving alpha of
        prod_r p_r^{#cycles of alpha on color r} * q_{sigma∘alpha,t,h}(Sigma).

:func:`moment_symbolic` keeps ``p_r`` and the traces symbolic;
:func:`moment_numeric` streams the same sum numerically.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .coloring import DEFAULT_ENUM_CAP, Coloring, EnumerationLimitError, _color_preserving0
from .perm import Permutation, _compose0, _count_cycles0, _cycles0
from .words import TraceExpr, TraceWord, _words0, trace_product

__all__ = [
    "MomentSpec",
    "WishartModel",
    "moment_symbolic",
    "moment_numeric",
    "glm_moment",
    "hss_moment",
    "mn_moment",
    "partition_sigma",
]

HERMITIAN_RTOL = 1e-12
PSD_RTOL = 1e-10


@dataclass(frozen=True)
class MomentSpec:
    """Which trace monomial: cycles of ``sigma`` are traces, ``t`` picks the
    matrix at each position, ``h`` names optional constant left factors."""

    sigma: Permutation
    t: Coloring
    h: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.sigma) != len(self.t):
            raise ValueError(f"sigma acts on {len(self.sigma)} points, t on {len(self.t)}")
        h = dict(self.h)
        for pos in h:
            if not 1 <= pos <= len(self.t):
                raise ValueError(f"h-slot position {pos} outside 1..{len(self.t)}")
        object.__setattr__(self, "h", h)

    @property
    def n(self) -> int:
        return len(self.t)

    def hslots(self) -> tuple[str, ...]:
        """Zero-based per-position h-slot labels ("" for identity)."""
        return tuple(self.h.get(j + 1, "") for j in range(self.n))

    def __hash__(self):
        return hash((self.sigma, self.t, tuple(sorted(self.h.items()))))


def _matrix_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2))


def check_hermitian_psd(sigma: np.ndarray, name: str = "Sigma") -> np.ndarray:
    a = np.asarray(sigma, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    scale = _matrix_norm(a)
    if _matrix_norm(a - a.conj().T) > HERMITIAN_RTOL * scale:
        raise ValueError(f"{name} is not Hermitian")
    if np.linalg.eigvalsh(a).min() < -PSD_RTOL * scale:
        raise ValueError(f"{name} is not positive semidefinite")
    return a


@dataclass(frozen=True)
class WishartModel:
    """Scale matrices ``Sigma_r`` (N x N Hermitian PSD) and shapes ``p_r > 0``."""

    sigmas: tuple[np.ndarray, ...]
    shapes: tuple[float, ...]

    def __post_init__(self):
        if len(self.sigmas) != len(self.shapes) or not self.sigmas:
            raise ValueError("need one shape per scale matrix, at least one matrix")
        sig = tuple(check_hermitian_psd(s, f"Sigma_{r + 1}") for r, s in enumerate(self.sigmas))
        if len({s.shape for s in sig}) != 1:
            raise ValueError("scale matrices differ in dimension")
        for r, p in enumerate(self.shapes):
            if not p > 0:
                raise ValueError(f"shape p_{r + 1} must be positive, got {p}")
        object.__setattr__(self, "sigmas", sig)
        object.__setattr__(self, "shapes", tuple(self.shapes))

    @classmethod
    def identity(cls, N: int, shapes: Sequence[float]) -> "WishartModel":
        return cls(tuple(np.eye(N) for _ in shapes), tuple(shapes))

    @property
    def N(self) -> int:
        return self.sigmas[0].shape[0]

    @property
    def s(self) -> int:
        return len(self.sigmas)

    def matrices(self) -> dict[int, np.ndarray]:
        return {r + 1: m for r, m in enumerate(self.sigmas)}

    def symbol_values(self) -> dict[str, float]:
        vals = {f"p{r + 1}": p for r, p in enumerate(self.shapes)}
        vals["N"] = self.N
        return vals


def _alpha_weight(alpha, colors) -> tuple[int, ...]:
    counts: dict[int, int] = {}
    for cyc in _cycles0(alpha):
        c = colors[cyc[0]]
        counts[c] = counts.get(c, 0) + 1
    return tuple(sorted(counts.items()))


def _symbolic_shard(spec: MomentSpec, cap: int, shard) -> dict:
    colors, sigma, hs = spec.t.colors, spec.sigma.images, spec.hslots()
    acc: dict = {}
    for alpha in _color_preserving0(colors, cap, shard):
        key = (_alpha_weight(alpha, colors), _words0(_compose0(sigma, alpha), colors, hs))
        acc[key] = acc.get(key, 0) + 1
    return acc


def _run_sharded(fn, args, workers: int):
    if workers <= 1:
        return [fn(*args, None)]
    shards = [(i, workers) for i in range(workers)]
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(fn, *zip(*[(*args, sh) for sh in shards])))


def _check_cap(t: Coloring, cap: int):
    total = math.prod(math.factorial(len(c)) for c in t.classes())
    if total > cap:
        raise EnumerationLimitError(f"{total} color-preserving permutations exceed the cap {cap}")


def moment_symbolic(
    spec: MomentSpec, cap: int = DEFAULT_ENUM_CAP, workers: int = 1
) -> TraceExpr:
    """``E q_{sigma,t,h}(W_1..W_s)`` as a polynomial in ``p_r`` over raw traces of Sigma words."""
    _check_cap(spec.t, cap)
    acc: dict = {}
    for part in _run_sharded(_symbolic_shard, (spec, cap), workers):
        for k, v in part.items():
            acc[k] = acc.get(k, 0) + v
    return TraceExpr.from_terms(
        (({f"p{c}": e for c, e in weight}, words, coef) for (weight, words), coef in acc.items())
    )


class _Neumaier:
    """Compensated complex summation."""

    __slots__ = ("s", "c")

    def __init__(self):
        self.s = 0j
        self.c = 0j

    def add(self, x: complex):
        re, ce = self._step(self.s.real, self.c.real, x.real)
        im, ci = self._step(self.s.imag, self.c.imag, x.imag)
        self.s, self.c = complex(re, im), complex(ce, ci)

    @staticmethod
    def _step(s, c, x):
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        return t, c

    @property
    def value(self) -> complex:
        return self.s + self.c


def _numeric_shard(spec: MomentSpec, mats, shapes, hbind, cap, shard):
    colors, sigma, hs = spec.t.colors, spec.sigma.images, spec.hslots()
    cache: dict[TraceWord, complex] = {}
    total = _Neumaier()
    for alpha in _color_preserving0(colors, cap, shard):
        weight = 1.0
        for cyc in _cycles0(alpha):
            weight *= shapes[colors[cyc[0]] - 1]
        val = complex(weight)
        for w in _words0(_compose0(sigma, alpha), colors, hs):
            if w not in cache:
                cache[w] = trace_product(w, mats, hbind)
            val *= cache[w]
        total.add(val)
    return total.s, total.c


def moment_numeric(
    spec: MomentSpec,
    model: WishartModel,
    hbind: Mapping[str, np.ndarray] | None = None,
    cap: int = DEFAULT_ENUM_CAP,
    workers: int = 1,
) -> complex:
    """Numeric value of the moment, streamed over alpha without building symbols.

    Shard partial sums are merged in shard order, so the result is bitwise
    reproducible for a fixed worker count.
    """
    _check_cap(spec.t, cap)
    if max(spec.t.colors) > model.s:
        raise ValueError(f"monomial uses {max(spec.t.colors)} matrices, model has {model.s}")
    hbind = {k: np.asarray(v, dtype=complex) for k, v in (hbind or {}).items()}
    for name in set(spec.h.values()):
        if name not in hbind:
            raise ValueError(f"unbound h-slot {name!r}")
        if hbind[name].shape != (model.N, model.N):
            raise ValueError(f"h-slot {name!r} has shape {hbind[name].shape}, need {(model.N, model.N)}")
    parts = _run_sharded(
        _numeric_shard, (spec, model.matrices(), model.shapes, hbind, cap), workers
    )
    total = _Neumaier()
    for s, c in parts:
        total.add(s)
        total.add(c)
    return total.value


def glm_moment(pi0: Permutation, hlist: Sequence[str | None] | None = None, cap: int = DEFAULT_ENUM_CAP) -> TraceExpr:
    """Single-matrix moment ``E r_{pi0}(h_1..h_n)(W)`` by the sum over all of S_n.

    ``r_pi`` multiplies, over cycles ``(j1 j2 ...)`` of ``pi``, the traces
    ``tr(x h_j1 x h_j2 ...)``; the result is
    ``sum_{pi1} p1^{#C(pi1^-1 pi0)} r_{pi1}(h)(Sigma)``, written with symbol ``p1``.
    """
    n = len(pi0)
    if math.factorial(n) > cap:
        raise EnumerationLimitError(f"{n}! permutations exceed the cap {cap}")
    hs = tuple((hlist[j] or "") if hlist else "" for j in range(n))
    colors = (1,) * n
    inv0 = pi0.images
    acc: dict = {}
    for pi1 in itertools.permutations(range(n)):
        inv1 = [0] * n
        for i, j in enumerate(pi1):
            inv1[j] = i
        e = _count_cycles0(_compose0(inv1, inv0))
        key = (e, _words0(pi1, colors, hs))
        acc[key] = acc.get(key, 0) + 1
    return TraceExpr.from_terms((({"p1": e}, words, c) for (e, words), c in acc.items()))


def partition_sigma(partition: Sequence[int]) -> Permutation:
    """The permutation with consecutive cycles of the given lengths."""
    images, start = [], 0
    for part in partition:
        if part < 1:
            raise ValueError(f"bad partition {partition!r}")
        images += [start + (i + 1) % part for i in range(part)]
        start += part
    return Permutation(tuple(images))


def hss_moment(
    partition: Sequence[int],
    sigma: Permutation | None = None,
    p: str = "p",
    N: str = "N",
    cap: int = DEFAULT_ENUM_CAP,
) -> TraceExpr:
    """``E prod_i tr(W^{lambda_i})`` for ``W ~ W(I, p)`` as a polynomial in p and N.

    Sums ``p^{#C(alpha)} N^{#C(alpha∘sigma)}`` over all of S_n, where sigma has
    cycle type ``partition`` (consecutive cycles unless given).
    """
    if sigma is None:
        sigma = partition_sigma(partition)
    elif sorted(sigma.cycle_type()) != sorted(partition):
        raise ValueError(f"sigma {sigma} does not have cycle type {tuple(partition)}")
    n = len(sigma)
    if math.factorial(n) > cap:
        raise EnumerationLimitError(f"{n}! permutations exceed the cap {cap}")
    s = sigma.images
    acc: dict = {}
    for alpha in itertools.permutations(range(n)):
        key = (_count_cycles0(alpha), _count_cycles0(_compose0(alpha, s)))
        acc[key] = acc.get(key, 0) + 1
    return TraceExpr.from_terms((({p: a, N: b}, (), c) for (a, b), c in acc.items()))


def mn_moment(
    sigma: Permutation,
    t: Coloring,
    p: str = "p",
    N: str = "N",
    cap: int = DEFAULT_ENUM_CAP,
) -> TraceExpr:
    """Equal-shape, identity-scale moment ``sum_alpha p^{#C(alpha)} N^{#C(alpha^-1 sigma)}``."""
    if len(sigma) != len(t):
        raise ValueError("sigma and coloring sizes differ")
    _check_cap(t, cap)
    s = sigma.images
    n = len(s)
    acc: dict = {}
    for alpha in _color_preserving0(t.colors, cap):
        inv = [0] * n
        for i, j in enumerate(alpha):
            inv[j] = i
        key = (_count_cycles0(alpha), _count_cycles0(_compose0(inv, s)))
        acc[key] = acc.get(key, 0) + 1
    return TraceExpr.from_terms((({p: a, N: b}, (), c) for (a, b), c in acc.items()))
