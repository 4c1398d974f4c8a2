"""Fluctuations of tr(W1 W2 W3) with Sigma = C/N, p = lambda N, across N.

Prints empirical Var Re, Var Im and the third cumulant of Re next to the
exact finite-N values and the N -> infinity limits.
"""
import argparse
import time

from wishart_traces.asymptotics import MomentSequence, clt_covariance
from wishart_traces.coloring import Coloring
from wishart_traces.cumulants import stars_moment_spec
from wishart_traces.montecarlo import estimate_cumulant
from wishart_traces.verify import clt_exact_variances, clt_model, third_cumulant_real_exact


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, nargs="+", default=[8, 16, 32])
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    lim = clt_covariance(Coloring((1, 2, 3)), 1, MomentSequence.ones(6))
    print(f"limit (lambda=1, C=I): Var Re = {float(lim.EXX)}, Var Im = {float(lim.EYY)}, k3 -> 0")
    spec = stars_moment_spec([(1, 2, 3)])
    print(f"{'N':>4} {'Var Re':>16} {'exact':>8} {'Var Im':>16} {'exact':>8} {'k3 Re':>16} {'exact':>8} {'sec':>5}")
    for N in args.N:
        t0 = time.perf_counter()
        model = clt_model(N)
        ests = [
            estimate_cumulant([spec], [k], model, args.samples, args.seed + 10 * N + j, part=part, workers=args.workers)
            for j, (k, part) in enumerate(((2, "real"), (2, "imag"), (3, "real")))
        ]
        vre, vim = clt_exact_variances(N)
        k3 = third_cumulant_real_exact((1, 2, 3), model)
        cells = []
        for est, exact in zip(ests, (vre, vim, k3)):
            cells.append(f"{est.mean.real:8.3f}+/-{est.stderr:5.3f} {exact:8.3f}")
        print(f"{N:>4} " + " ".join(cells) + f" {time.perf_counter() - t0:5.1f}")


if __name__ == "__main__":
    main()
