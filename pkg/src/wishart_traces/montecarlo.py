"""Complex Wishart sampling and Monte Carlo estimates with batch-means errors.

``W = A^* X^* X A`` with ``X`` a ``p x N`` matrix of independent standard
complex normals (real and imaginary parts each of variance 1/2) and
``A^* A = Sigma`` has law W(Sigma, p) for integer p.

Every estimate splits its samples into batches; batch ``b`` draws from its
own generator spawned from ``SeedSequence(seed)``, so results depend only on
the seed and sample counts (not on the worker count).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .cumulants import cumulant_from_moments
from .moments import HERMITIAN_RTOL, PSD_RTOL, MomentSpec, WishartModel, _matrix_norm

__all__ = [
    "MCEstimate",
    "hermitian_factor",
    "complex_normal",
    "sample_wishart",
    "sample_model",
    "monomial_values",
    "estimate_moment",
    "estimate_cumulant",
    "estimate_laplace",
    "z_score",
]

DEFAULT_BATCHES = 20
CHUNK = 4096


@dataclass(frozen=True)
class MCEstimate:
    mean: complex
    stderr: float
    samples: int
    batches: int

    def z(self, exact: complex) -> float:
        return z_score(exact, self)

    def to_dict(self) -> dict:
        return {
            "mean": [self.mean.real, self.mean.imag],
            "stderr": self.stderr,
            "samples": self.samples,
            "batches": self.batches,
        }


def z_score(exact: complex, est: MCEstimate) -> float:
    diff = abs(complex(exact) - est.mean)
    if est.stderr == 0:
        return 0.0 if diff == 0 else math.inf
    return diff / est.stderr


def hermitian_factor(sigma: np.ndarray) -> np.ndarray:
    """Hermitian PSD square root ``A`` with ``A A^* = A^* A = Sigma``.

    Eigenvalues slightly below zero (within tolerance) are clamped.
    """
    s = np.asarray(sigma, dtype=complex)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"Sigma must be square, got shape {s.shape}")
    scale = _matrix_norm(s)
    if _matrix_norm(s - s.conj().T) > HERMITIAN_RTOL * scale:
        raise ValueError("Sigma is not Hermitian")
    vals, vecs = np.linalg.eigh((s + s.conj().T) / 2)
    if vals.min() < -PSD_RTOL * scale:
        raise ValueError(f"Sigma has eigenvalue {vals.min():.3g} below tolerance")
    root = np.sqrt(np.clip(vals, 0.0, None))
    return (vecs * root) @ vecs.conj().T


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Entries with E x = E x^2 = 0 and E|x|^2 = 1."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def _check_shape_param(p) -> int:
    if isinstance(p, bool) or not float(p).is_integer() or p < 1:
        raise ValueError(f"sampling needs a positive integer shape, got {p}")
    return int(p)


def sample_wishart(A: np.ndarray, p, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """One draw (or ``size`` draws, leading axis) of ``A^* X^* X A``."""
    p = _check_shape_param(p)
    A = np.asarray(A, dtype=complex)
    N = A.shape[0]
    shape = (p, N) if size is None else (size, p, N)
    XA = complex_normal(rng, shape) @ A
    return np.swapaxes(XA.conj(), -1, -2) @ XA


def sample_model(
    model: WishartModel, rng: np.random.Generator, size: int, factors: Sequence[np.ndarray] | None = None
) -> dict[int, np.ndarray]:
    """Independent batches ``{r: (size, N, N)}`` for every matrix of the model."""
    factors = factors or [hermitian_factor(s) for s in model.sigmas]
    return {r + 1: sample_wishart(A, p, rng, size) for r, (A, p) in enumerate(zip(factors, model.shapes))}


def monomial_values(
    spec: MomentSpec, Ws: Mapping[int, np.ndarray], hbind: Mapping[str, np.ndarray] | None = None
) -> np.ndarray:
    """``q_{sigma,t,h}`` evaluated on each sample of a batch."""
    hbind = hbind or {}
    out = None
    for cyc in spec.sigma.cycles():
        prod = None
        for j in cyc:
            m = Ws[spec.t(j)]
            if j in spec.h:
                m = np.asarray(hbind[spec.h[j]]) @ m
            prod = m if prod is None else prod @ m
        tr = np.trace(prod, axis1=-2, axis2=-1)
        out = tr if out is None else out * tr
    return out


def _batch_sizes(n_samples: int, n_batches: int) -> list[int]:
    if n_samples < 1:
        raise ValueError("need at least one sample")
    if n_batches < 2 or n_batches > n_samples:
        raise ValueError(f"need 2 <= batches <= samples, got {n_batches}")
    base, extra = divmod(n_samples, n_batches)
    return [base + (i < extra) for i in range(n_batches)]


def _map_batches(fn: Callable[[int, np.random.Generator, int], object], n_samples, n_batches, seed, workers):
    sizes = _batch_sizes(n_samples, n_batches)
    seeds = np.random.SeedSequence(seed).spawn(n_batches)
    jobs = [(b, np.random.default_rng(seeds[b]), sizes[b]) for b in range(n_batches)]
    if workers <= 1:
        return [fn(*job) for job in jobs]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def _draw_values(model, specs, hbind, factors, rng, size) -> np.ndarray:
    out = np.empty((len(specs), size), dtype=complex)
    done = 0
    while done < size:
        k = min(CHUNK, size - done)
        Ws = sample_model(model, rng, k, factors)
        for i, spec in enumerate(specs):
            out[i, done : done + k] = monomial_values(spec, Ws, hbind)
        done += k
    return out


def _stderr(batch_values: np.ndarray) -> float:
    b = len(batch_values)
    var = np.var(batch_values.real, ddof=1) + np.var(batch_values.imag, ddof=1)
    return float(math.sqrt(var / b))


def estimate_moment(
    spec: MomentSpec,
    model: WishartModel,
    hbind: Mapping[str, np.ndarray] | None = None,
    n_samples: int = 100_000,
    seed: int = 0,
    n_batches: int = DEFAULT_BATCHES,
    workers: int = 1,
) -> MCEstimate:
    """Sample mean of ``q_{sigma,t,h}(W)`` with a batch-means standard error."""
    factors = [hermitian_factor(s) for s in model.sigmas]

    def run(b, rng, size):
        vals = _draw_values(model, [spec], hbind, factors, rng, size)[0]
        return vals.sum(), size

    parts = _map_batches(run, n_samples, n_batches, seed, workers)
    sums = np.array([s for s, _ in parts])
    sizes = np.array([k for _, k in parts])
    return MCEstimate(complex(sums.sum() / sizes.sum()), _stderr(sums / sizes), int(sizes.sum()), len(parts))


_PARTS = {
    "complex": lambda v: v,
    "real": lambda v: v.real.astype(complex),
    "imag": lambda v: v.imag.astype(complex),
}


def _plug_in(values: np.ndarray, labels: Sequence[int]) -> complex:
    def oracle(block):
        prod = np.ones(values.shape[1], dtype=complex)
        for i in block:
            prod = prod * values[labels[i]]
        return complex(prod.mean())

    return cumulant_from_moments(len(labels), oracle)


def estimate_cumulant(
    specs: Sequence[MomentSpec],
    k: Sequence[int],
    model: WishartModel,
    n_samples: int = 100_000,
    seed: int = 0,
    hbind: Mapping[str, np.ndarray] | None = None,
    part: str = "complex",
    n_batches: int = DEFAULT_BATCHES,
    workers: int = 1,
) -> MCEstimate:
    """Plug-in joint cumulant of ``xi_j = q_j(W)`` with multiplicities ``k``.

    The estimate uses all samples; its standard error comes from repeating
    the plug-in on each batch. ``part`` selects ``Re xi`` or ``Im xi``.
    """
    if len(specs) != len(k) or not 1 <= sum(k) <= 3:
        raise ValueError("need one multiplicity per variable and 1 <= |k| <= 3")
    if part not in _PARTS:
        raise ValueError(f"part must be one of {sorted(_PARTS)}")
    labels = [j for j, kj in enumerate(k) for _ in range(kj)]
    factors = [hermitian_factor(s) for s in model.sigmas]

    def run(b, rng, size):
        return _PARTS[part](_draw_values(model, list(specs), hbind, factors, rng, size))

    batches = _map_batches(run, n_samples, n_batches, seed, workers)
    full = np.concatenate(batches, axis=1)
    per_batch = np.array([_plug_in(v, labels) for v in batches])
    return MCEstimate(_plug_in(full, labels), _stderr(per_batch), full.shape[1], len(batches))


def estimate_laplace(
    sigma: np.ndarray,
    p: int,
    theta: np.ndarray,
    n_samples: int = 100_000,
    seed: int = 0,
    n_batches: int = DEFAULT_BATCHES,
) -> tuple[MCEstimate, float]:
    """Empirical ``E exp(tr(theta W))`` and the exact ``det(I - theta Sigma)^(-p)``."""
    sigma = np.asarray(sigma, dtype=complex)
    theta = np.asarray(theta, dtype=complex)
    if np.linalg.eigvalsh(np.linalg.inv(sigma) - theta).min() <= 0:
        raise ValueError("Sigma^-1 - theta must be positive definite")
    A = hermitian_factor(sigma)

    def run(b, rng, size):
        W = sample_wishart(A, p, rng, size)
        return np.exp(np.trace(theta @ W, axis1=-2, axis2=-1).real).sum(), size

    parts = _map_batches(run, n_samples, n_batches, seed, 1)
    sums = np.array([s for s, _ in parts])
    sizes = np.array([k for _, k in parts])
    est = MCEstimate(complex(sums.sum() / sizes.sum()), _stderr(sums / sizes), int(sizes.sum()), len(parts))
    exact = float(np.real(np.linalg.det(np.eye(len(sigma)) - theta @ sigma)) ** (-p))
    return est, exact
