"""Per-alpha contributions to E tr^2(W1 W2), one row per color-preserving alpha."""
import argparse

from wishart_traces.coloring import color_cycle_counts, enumerate_color_preserving
from wishart_traces.moments import moment_symbolic
from wishart_traces.parser import parse_expression
from wishart_traces.perm import compose
from wishart_traces.words import TraceExpr, word_from_cycle


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--expr", default="tr(W1 W2)^2")
    args = ap.parse_args()

    spec = parse_expression(args.expr).to_spec()
    print(f"sigma = {spec.sigma}   t = {spec.t}")
    print(f"{'alpha':<16}{'#C_r(alpha)':<14}{'sigma alpha':<16}contribution")
    for alpha in enumerate_color_preserving(spec.t):
        counts = color_cycle_counts(alpha, spec.t)
        face = compose(spec.sigma, alpha)
        mono = {f"p{r + 1}": c for r, c in enumerate(counts)}
        words = [word_from_cycle(c, spec.t, spec.h) for c in face.cycles()]
        term = TraceExpr.from_terms([(mono, words, 1)])
        print(f"{str(alpha):<16}{str(counts):<14}{str(face):<16}{term}")
    print(f"\ntotal: {moment_symbolic(spec)}")


if __name__ == "__main__":
    main()
