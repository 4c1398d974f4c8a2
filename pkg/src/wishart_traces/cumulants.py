"""Joint cumulants of traces of monomials, two independent ways.

* :func:`cumulant_hypermap` sums only over color-preserving ``alpha`` whose
  group with the star permutation acts transitively, graded by genus.
* :func:`cumulant_from_moments` inverts the set-partition moment relation
  ``M_B = sum over partitions V of B of prod c_block`` recursively.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

from .coloring import DEFAULT_ENUM_CAP, Coloring, EnumerationLimitError, _color_preserving0
from .moments import MomentSpec, moment_symbolic
from .perm import Permutation, _compose0, _count_cycles0, _cycles0, _is_transitive0
from .words import TraceExpr, TraceWord, _words0

__all__ = [
    "StarsSpec",
    "GenusGradedExpr",
    "enumerate_set_partitions",
    "bell_number",
    "cumulant_hypermap",
    "cumulant_from_moments",
    "equal_parameter_reduction",
    "covariance_symbolic",
    "stars_moment_spec",
]

PARTITION_CAP = 12


@dataclass(frozen=True)
class StarsSpec:
    """Monomials ``q_1..q_m`` (color sequences) with multiplicities ``k``.

    The stars are laid out as ``k_1`` copies of ``q_1``, then ``k_2`` copies
    of ``q_2`` and so on; each star occupies a consecutive block of positions
    and is one cycle of the star permutation.
    """

    monomials: tuple[tuple[int, ...], ...]
    k: tuple[int, ...] = ()

    def __post_init__(self):
        monos = tuple(tuple(int(c) for c in q) for q in self.monomials)
        k = tuple(self.k) if self.k else (1,) * len(monos)
        if len(k) != len(monos) or not monos:
            raise ValueError("need one multiplicity per monomial")
        if any(not q for q in monos) or any(c < 1 for q in monos for c in q):
            raise ValueError("monomials must be nonempty sequences of colors >= 1")
        if any(x < 0 for x in k) or sum(k) < 1:
            raise ValueError(f"bad multiplicities {k!r}")
        object.__setattr__(self, "monomials", monos)
        object.__setattr__(self, "k", k)

    @property
    def stars(self) -> tuple[tuple[int, ...], ...]:
        return tuple(q for q, kj in zip(self.monomials, self.k) for _ in range(kj))

    @property
    def order(self) -> int:
        """``|k|``, the number of stars."""
        return sum(self.k)

    @property
    def degree(self) -> int:
        return sum(len(q) * kj for q, kj in zip(self.monomials, self.k))

    def moment_spec(self) -> MomentSpec:
        return stars_moment_spec(self.stars)


def stars_moment_spec(stars: Sequence[Sequence[int]]) -> MomentSpec:
    """Product of traces of the given color words, as a (sigma, t) spec."""
    images, colors = [], []
    for q in stars:
        base = len(images)
        images += [base + (i + 1) % len(q) for i in range(len(q))]
        colors += list(q)
    return MomentSpec(Permutation(tuple(images)), Coloring(tuple(colors)))


@dataclass(frozen=True)
class GenusGradedExpr:
    """Cumulant of ``tr q`` values, split by genus.

    ``grades[g]`` is a normalized-trace expression in ``lam_r`` symbols; the
    full cumulant is ``sum_g N**(2 - 2g - n_stars) * grades[g]`` when
    ``p_r = lam_r N`` and ``Sigma_r = C_r / N``.
    """

    grades: Mapping[int, TraceExpr]
    n_stars: int
    degree: int = 0
    transitive_count: int = 0
    max_genus: int = 0

    def n_exponent(self, g: int) -> int:
        return 2 - 2 * g - self.n_stars

    def scaled(self) -> TraceExpr:
        """Single expression with the N powers written in."""
        out = TraceExpr(normalized=True)
        for g, e in sorted(self.grades.items()):
            out = out + e * TraceExpr.symbol("N", self.n_exponent(g))
        return out

    def to_raw(self) -> TraceExpr:
        """Rewrite with ``lam_r = p_r / N`` and ``trN(C word) = N**(len-1) tr(Sigma word)``.

        The N powers cancel term by term, leaving an expression in ``p_r``
        over raw traces of Sigma words.
        """

        def fn(mono, words, coef):
            out: dict[str, int] = {}
            for name, e in mono.items():
                if name.startswith("lam"):
                    out["p" + name[3:]] = out.get("p" + name[3:], 0) + e
                    out["N"] = out.get("N", 0) - e
                else:
                    out[name] = out.get(name, 0) + e
            out["N"] = out.get("N", 0) + sum(len(w) - 1 for w in words)
            return out, words, coef

        return self.scaled().transform(fn, normalized=False)

    def grade(self, g: int) -> TraceExpr:
        return self.grades.get(g, TraceExpr(normalized=True))

    def to_dict(self) -> dict:
        return {
            "n_stars": self.n_stars,
            "degree": self.degree,
            "grades": [
                {"genus": g, "n_exponent": self.n_exponent(g), "expr": str(e), "terms": e.to_dict()["terms"]}
                for g, e in sorted(self.grades.items())
            ],
        }

    def __str__(self):
        if not self.grades:
            return "0"
        return " + ".join(
            f"N^{self.n_exponent(g)}*[{e}]" for g, e in sorted(self.grades.items())
        )


def cumulant_hypermap(spec: StarsSpec, cap: int = DEFAULT_ENUM_CAP) -> GenusGradedExpr:
    """Genus expansion of the joint cumulant over connected colored hypermaps.

    Each transitive color-preserving ``alpha`` contributes
    ``prod_r lam_r^{#cycles on color r} * prod_faces trN(word)`` at genus
    ``g(sigma, alpha)``.
    """
    ms = spec.moment_spec()
    colors, sigma = ms.t.colors, ms.sigma.images
    hs = ("",) * len(colors)
    n = len(colors)
    n_sigma = spec.order
    total = math.prod(math.factorial(len(c)) for c in ms.t.classes())
    if total > cap:
        raise EnumerationLimitError(f"{total} color-preserving permutations exceed the cap {cap}")
    acc: dict[int, dict] = {}
    count = 0
    for alpha in _color_preserving0(colors, cap):
        if not _is_transitive0(sigma, alpha):
            continue
        count += 1
        face = _compose0(sigma, alpha)
        weight: dict[str, int] = {}
        n_alpha = 0
        for cyc in _cycles0(alpha):
            name = f"lam{colors[cyc[0]]}"
            weight[name] = weight.get(name, 0) + 1
            n_alpha += 1
        chi = n_sigma + n_alpha + _count_cycles0(face) - n
        g = (2 - chi) // 2
        key = (tuple(sorted(weight.items())), _words0(face, colors, hs))
        grade = acc.setdefault(g, {})
        grade[key] = grade.get(key, 0) + 1
    grades = {
        g: TraceExpr.from_terms(((dict(m), w, c) for (m, w), c in terms.items()), normalized=True)
        for g, terms in acc.items()
    }
    return GenusGradedExpr(
        grades, n_sigma, degree=n, transitive_count=count, max_genus=max(acc, default=0)
    )


def bell_number(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def _partitions0(n: int) -> Iterator[list[list[int]]]:
    """Set partitions of range(n) via restricted growth strings, blocks by minimum."""
    if n == 0:
        yield []
        return
    labels = [0] * n

    def rec(i, nblocks):
        if i == n:
            blocks = [[] for _ in range(nblocks)]
            for j, b in enumerate(labels):
                blocks[b].append(j)
            yield blocks
            return
        for b in range(nblocks + 1):
            labels[i] = b
            yield from rec(i + 1, max(nblocks, b + 1))

    labels[0] = 0
    yield from rec(1, 1)


def enumerate_set_partitions(n: int, cap: int = PARTITION_CAP) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All set partitions of {1..n}; Bell(n) of them, blocks ordered by minimum."""
    if n > cap:
        raise EnumerationLimitError(f"set partitions of {n} elements exceed the cap n <= {cap}")
    if n < 1:
        raise ValueError("n must be >= 1")
    for blocks in _partitions0(n):
        yield tuple(tuple(j + 1 for j in b) for b in blocks)


def cumulant_from_moments(
    spec: StarsSpec | int,
    moment_oracle: Callable[[tuple[int, ...]], object] | None = None,
    cap: int = PARTITION_CAP,
):
    """Joint cumulant of ``n`` labeled variables from their mixed moments.

    ``moment_oracle(block)`` returns ``E prod_{i in block} X_i`` for a sorted
    tuple of zero-based labels; values may be numbers or :class:`TraceExpr`.
    Solves ``c_B = M_B - sum_{V != {B}} prod_{blocks} c_block`` recursively.
    For a :class:`StarsSpec` without an oracle the moments come from
    :func:`moment_symbolic`, giving the cumulant of ``tr Q_1, ..., tr Q_n``.
    """
    if isinstance(spec, StarsSpec):
        n = spec.order
        stars = spec.stars
        if moment_oracle is None:
            memo: dict = {}

            def moment_oracle(block):
                key = tuple(sorted(stars[i] for i in block))
                if key not in memo:
                    memo[key] = moment_symbolic(stars_moment_spec(key))
                return memo[key]
    else:
        n = int(spec)
        if moment_oracle is None:
            raise ValueError("a moment oracle is required when only n is given")
    if n > cap:
        raise EnumerationLimitError(f"{n} variables exceed the partition cap {cap}")
    if n < 1:
        raise ValueError("need at least one variable")

    cum: dict[tuple[int, ...], object] = {}

    def c(block: tuple[int, ...]):
        if block in cum:
            return cum[block]
        value = moment_oracle(block)
        for parts in _partitions0(len(block)):
            if len(parts) == 1:
                continue
            prod = None
            for part in parts:
                cb = c(tuple(block[i] for i in part))
                prod = cb if prod is None else prod * cb
            value = value - prod
        cum[block] = value
        return value

    return c(tuple(range(n)))


def equal_parameter_reduction(expr: TraceExpr, s: int | None = None, p: str = "p") -> TraceExpr:
    """Set every ``p_r`` to ``p`` and every color to 1 (all Sigma_r equal)."""
    if s is None:
        s = max(
            [int(k[1:]) for k in expr.symbols() if k[0] == "p" and k[1:].isdigit()]
            + [l.color for (_m, ws) in expr.terms for w in ws for l in w.letters]
            + [1]
        )
    return expr.substitute(
        {f"p{r}": p for r in range(1, s + 1)}, {r: 1 for r in range(1, s + 1)}
    )


def covariance_symbolic(qa: Sequence[int], qb: Sequence[int]) -> TraceExpr:
    """``cov(tr q_a(W), tr q_b(W))`` in ``p_r`` and raw Sigma traces."""
    return cumulant_hypermap(StarsSpec((tuple(qa), tuple(qb)))).to_raw()
