"""Named batteries comparing exact engines with Monte Carlo estimates.

Each case records the exact value, the estimate, its standard error and
``z = |exact - estimate| / stderr``; a case passes when ``z <= threshold``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .coloring import Coloring
from .cumulants import StarsSpec, covariance_symbolic, cumulant_hypermap, stars_moment_spec
from .moments import MomentSpec, WishartModel, hss_moment, moment_numeric, partition_sigma
from .montecarlo import MCEstimate, estimate_cumulant, estimate_moment
from .perm import Permutation
from .words import evaluate

__all__ = ["CaseResult", "BATTERIES", "verify", "random_moment_case", "random_psd", "third_cumulant_real_exact"]

THRESHOLD = 5.0


@dataclass
class CaseResult:
    battery: str
    case: str
    exact: complex
    estimate: complex
    stderr: float
    z: float
    passed: bool
    samples: int = 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["exact"] = [self.exact.real, self.exact.imag]
        d["estimate"] = [self.estimate.real, self.estimate.imag]
        d["pass"] = d.pop("passed")
        return d


@dataclass
class _Ctx:
    battery: str
    seed: int
    samples: int | None
    perturb: float
    threshold: float
    workers: int
    results: list[CaseResult] = field(default_factory=list)

    def n(self, default: int) -> int:
        return self.samples or default

    def record(self, case: str, exact: complex, est: MCEstimate):
        exact = complex(exact) * (1 + self.perturb)
        z = est.z(exact)
        self.results.append(
            CaseResult(self.battery, case, exact, est.mean, est.stderr, z, bool(z <= self.threshold), est.samples)
        )


def random_psd(rng: np.random.Generator, N: int) -> np.ndarray:
    """``B B^* / N`` for a complex Gaussian ``B``."""
    B = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / math.sqrt(2)
    S = B @ B.conj().T / N
    return (S + S.conj().T) / 2


def random_moment_case(rng: np.random.Generator, max_n=6, max_N=6, max_p=6, max_s=3):
    """A random monomial (n <= max_n) with a random integer-shape model."""
    n = int(rng.integers(1, max_n + 1))
    sigma = Permutation(tuple(int(x) for x in rng.permutation(n)))
    s = int(rng.integers(1, min(max_s, n) + 1))
    colors = [int(c) for c in rng.integers(1, s + 1, size=n)]
    # make every color appear so the model has no unused matrix
    for c in range(1, s + 1):
        if c not in colors:
            colors[int(rng.integers(n))] = c
    colors = [c for c in colors]
    s = max(colors)
    N = int(rng.integers(2, max_N + 1))
    model = WishartModel(
        tuple(random_psd(rng, N) for _ in range(s)),
        tuple(float(rng.integers(1, max_p + 1)) for _ in range(s)),
    )
    return MomentSpec(sigma, Coloring(tuple(colors), s)), model


def _table1(ctx: _Ctx):
    rng = np.random.default_rng(20070101)
    model = WishartModel((random_psd(rng, 3), random_psd(rng, 3)), (2.0, 3.0))
    n = ctx.n(200_000)
    for i, (label, words) in enumerate(
        [
            ("E tr(W1 W2)^2", [(1, 2), (1, 2)]),
            ("E tr(W1 W2)", [(1, 2)]),
            ("E tr(W1 W2 W1 W2)", [(1, 2, 1, 2)]),
        ]
    ):
        spec = stars_moment_spec(words)
        ctx.record(label, moment_numeric(spec, model), estimate_moment(spec, model, n_samples=n, seed=ctx.seed + i, workers=ctx.workers))
    exact = evaluate(covariance_symbolic((1, 2), (1, 2)), model.matrices(), model.symbol_values())
    est = estimate_cumulant([stars_moment_spec([(1, 2)])], [2], model, n, ctx.seed + 3, workers=ctx.workers)
    ctx.record("Var tr(W1 W2)", exact, est)


def _moments(ctx: _Ctx, count: int = 10):
    rng = np.random.default_rng(ctx.seed)
    n = ctx.n(200_000)
    for i in range(count):
        spec, model = random_moment_case(rng)
        label = f"sigma={spec.sigma} t={spec.t} N={model.N} p={[int(p) for p in model.shapes]}"
        ctx.record(label, moment_numeric(spec, model), estimate_moment(spec, model, n_samples=n, seed=ctx.seed + 1000 + i, workers=ctx.workers))


def _cumulants(ctx: _Ctx):
    rng = np.random.default_rng(20070102)
    n = ctx.n(200_000)
    model = WishartModel(tuple(random_psd(rng, 3) for _ in range(3)), (2.0, 3.0, 2.0))
    exact = evaluate(covariance_symbolic((1, 2), (1, 2)), model.matrices(), model.symbol_values())
    est = estimate_cumulant([stars_moment_spec([(1, 2)])], [2], model, n, ctx.seed, workers=ctx.workers)
    ctx.record("Var tr(W1 W2)", exact, est)
    exact = evaluate(covariance_symbolic((1, 2, 3), (3, 2, 1)), model.matrices(), model.symbol_values())
    est = estimate_cumulant(
        [stars_moment_spec([(1, 2, 3)]), stars_moment_spec([(3, 2, 1)])], [1, 1], model, n, ctx.seed + 1, workers=ctx.workers
    )
    ctx.record("cov(tr W1W2W3, tr W3W2W1)", exact, est)
    for N in (8, 16, 32):
        # exact value 2 * lam / N with lam = 2: the order-3 grade carries N^-1
        m = WishartModel((np.eye(N) / N,), (2.0 * N,))
        exact = evaluate(cumulant_hypermap(StarsSpec(((1,),), (3,))).to_raw(), m.matrices(), m.symbol_values())
        est = estimate_cumulant([stars_moment_spec([(1,)])], [3], m, n, ctx.seed + 2 + N, workers=ctx.workers)
        ctx.record(f"third cumulant tr W1, N={N}, p=2N, Sigma=I/N", exact, est)


def _hss(ctx: _Ctx):
    model = WishartModel.identity(4, (3.0,))
    n = ctx.n(200_000)
    for i, lam in enumerate([(1,), (2,), (1, 1)]):
        exact = evaluate(hss_moment(lam), {}, {"p": 3, "N": 4})
        spec = MomentSpec(partition_sigma(lam), Coloring.constant(sum(lam)))
        ctx.record(f"hss lambda={lam}", exact, estimate_moment(spec, model, n_samples=n, seed=ctx.seed + i, workers=ctx.workers))


def third_cumulant_real_exact(word, model: WishartModel) -> float:
    """Exact third cumulant of ``Re tr(W_word)`` via multilinearity over (xi, conj xi)."""
    q, qr = tuple(word), tuple(reversed(word))
    total = 0j
    for j in range(4):
        expr = cumulant_hypermap(StarsSpec((q, qr), (3 - j, j))).to_raw()
        total += math.comb(3, j) * evaluate(expr, model.matrices(), model.symbol_values())
    return (total / 8).real


def clt_model(N: int, lam: float = 1.0) -> WishartModel:
    p = float(math.ceil(lam * N))
    return WishartModel(tuple(np.eye(N) / N for _ in range(3)), (p, p, p))


def clt_exact_variances(N: int, lam: float = 1.0) -> tuple[float, float]:
    """Finite-N ``Var Re`` and ``Var Im`` of ``tr(W1 W2 W3)`` with ``Sigma = I/N``."""
    model = clt_model(N, lam)
    ez2 = evaluate(covariance_symbolic((1, 2, 3), (1, 2, 3)), model.matrices(), model.symbol_values())
    eabs = evaluate(covariance_symbolic((1, 2, 3), (3, 2, 1)), model.matrices(), model.symbol_values())
    return ((eabs + ez2) / 2).real, ((eabs - ez2) / 2).real


def _clt(ctx: _Ctx):
    n = ctx.n(10_000)
    spec = stars_moment_spec([(1, 2, 3)])
    for N in (8, 16, 32):
        model = clt_model(N)
        vre, vim = clt_exact_variances(N)
        for part, exact in (("real", vre), ("imag", vim)):
            est = estimate_cumulant([spec], [2], model, n, ctx.seed + N, part=part, workers=ctx.workers)
            ctx.record(f"Var {part[:2].capitalize()} tr(W1W2W3), N={N}, lambda=1", exact, est)


BATTERIES: dict[str, Callable[[_Ctx], None]] = {
    "table1": _table1,
    "moments": _moments,
    "cumulants": _cumulants,
    "hss": _hss,
    "clt-ex": _clt,
}


def verify(
    battery: str,
    seed: int = 0,
    samples: int | None = None,
    perturb: float = 0.0,
    threshold: float = THRESHOLD,
    workers: int = 1,
) -> dict:
    """Run a battery (or ``"all"``); ``perturb`` scales exact values by ``1 + perturb``."""
    names = list(BATTERIES) if battery == "all" else [battery]
    for name in names:
        if name not in BATTERIES:
            raise KeyError(f"unknown battery {name!r}; choose from {sorted(BATTERIES)} or 'all'")
    results = []
    for name in names:
        ctx = _Ctx(name, seed, samples, perturb, threshold, workers)
        BATTERIES[name](ctx)
        results += ctx.results
    return {
        "battery": battery,
        "seed": seed,
        "samples": samples,
        "perturb": perturb,
        "threshold": threshold,
        "cases": [r.to_dict() for r in results],
        "pass": all(r.passed for r in results),
    }
