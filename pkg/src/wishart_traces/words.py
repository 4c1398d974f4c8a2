"""Cyclic trace words and exact polynomial expressions over them.

A :class:`TraceExpr` is a finite sum ``coef * monomial * tr(w1) tr(w2) ...``
where the monomial is a product of named symbols (``p1``, ``lam2``, ``N``)
with integer exponents and the traces form a multiset of canonical cyclic
words. Words compare up to rotation only; reversal is a different word.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .coloring import Coloring
from .perm import Permutation, _cycles0

__all__ = [
    "Letter",
    "TraceWord",
    "TraceExpr",
    "word_from_cycle",
    "evaluate",
    "entry_sum_identity_check",
    "trace_product",
]


class Letter(NamedTuple):
    """One factor ``h x_color`` of a trace; ``hslot == ""`` means h = I."""

    color: int
    hslot: str = ""

    def __str__(self):
        return f"x{self.color}" + (f"[{self.hslot}]" if self.hslot else "")


def _min_rotation(seq: tuple) -> tuple:
    n = len(seq)
    if n <= 1:
        return seq
    return min(seq[i:] + seq[:i] for i in range(n))


@dataclass(frozen=True, order=True)
class TraceWord:
    """A nonempty cyclic word, stored as its lexicographically least rotation."""

    letters: tuple[Letter, ...]

    def __post_init__(self):
        letters = tuple(
            l if isinstance(l, Letter) else Letter(*l) if isinstance(l, tuple) else Letter(int(l))
            for l in self.letters
        )
        if not letters:
            raise ValueError("empty trace word")
        object.__setattr__(self, "letters", _min_rotation(letters))

    @classmethod
    def of(cls, *colors: int) -> "TraceWord":
        return cls(tuple(Letter(c) for c in colors))

    def __len__(self):
        return len(self.letters)

    @property
    def colors(self) -> tuple[int, ...]:
        return tuple(l.color for l in self.letters)

    def recolor(self, mapping: Mapping[int, int]) -> "TraceWord":
        return TraceWord(tuple(Letter(mapping.get(l.color, l.color), l.hslot) for l in self.letters))

    def __str__(self):
        return " ".join(map(str, self.letters))


def word_from_cycle(
    cycle: Sequence[int], t: Coloring, h: Mapping[int, str] | None = None
) -> TraceWord:
    """The word read along a one-based cycle: letter ``(t(j), h(j))`` for each j."""
    h = h or {}
    return TraceWord(tuple(Letter(t(j), h.get(j, "")) for j in cycle))


def _words0(images, colors, hslots) -> tuple[TraceWord, ...]:
    """Sorted multiset of words over the cycles of a zero-based permutation."""
    return tuple(
        sorted(
            TraceWord(tuple(Letter(colors[j], hslots[j]) for j in cyc))
            for cyc in _cycles0(images)
        )
    )


Monomial = tuple[tuple[str, int], ...]
Key = tuple[Monomial, tuple[TraceWord, ...]]


def _sym_key(name: str):
    m = re.fullmatch(r"([A-Za-z_]+)(\d*)", name)
    if not m:
        return (name, -1)
    return (m.group(1), int(m.group(2)) if m.group(2) else -1)


def _mono(d: Mapping[str, int]) -> Monomial:
    return tuple(sorted(((k, v) for k, v in d.items() if v), key=lambda kv: _sym_key(kv[0])))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for k, v in b:
        d[k] = d.get(k, 0) + v
    return _mono(d)


@dataclass(frozen=True)
class TraceExpr:
    """Exact integer combination of (symbol monomial) x (multiset of trace words).

    ``normalized`` records whether the words stand for ``(1/N) tr`` rather
    than ``tr``; it is fixed per expression and never inferred.
    """

    terms: Mapping[Key, int] = field(default_factory=dict)
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "terms", {k: int(v) for k, v in self.terms.items() if v})

    # -- construction -----------------------------------------------------
    @classmethod
    def from_terms(
        cls,
        items: Iterable[tuple[Mapping[str, int], Iterable[TraceWord], int]],
        normalized: bool = False,
    ) -> "TraceExpr":
        acc: dict[Key, int] = {}
        for mono, words, coef in items:
            key = (_mono(mono), tuple(sorted(words)))
            acc[key] = acc.get(key, 0) + int(coef)
        return cls(acc, normalized)

    @classmethod
    def constant(cls, c: int, normalized: bool = False) -> "TraceExpr":
        return cls({((), ()): c}, normalized)

    @classmethod
    def symbol(cls, name: str, power: int = 1) -> "TraceExpr":
        return cls({(_mono({name: power}), ()): 1})

    @classmethod
    def trace(cls, *words: TraceWord, normalized: bool = False) -> "TraceExpr":
        return cls({((), tuple(sorted(words))): 1}, normalized)

    # -- ring operations --------------------------------------------------
    def has_words(self) -> bool:
        return any(words for _, words in self.terms)

    def _flag(self, other: "TraceExpr") -> bool:
        if self.normalized == other.normalized:
            return self.normalized
        if not other.has_words():
            return self.normalized
        if not self.has_words():
            return other.normalized
        raise ValueError("cannot combine normalized and raw trace expressions")

    @staticmethod
    def _coerce(other) -> "TraceExpr":
        if isinstance(other, TraceExpr):
            return other
        if isinstance(other, (int, np.integer)):
            return TraceExpr.constant(int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return TraceExpr(acc, self._flag(other))

    __radd__ = __add__

    def __neg__(self):
        return TraceExpr({k: -v for k, v in self.terms.items()}, self.normalized)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> "TraceExpr":
        return TraceExpr({k: v * int(c) for k, v in self.terms.items()}, self.normalized)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(other)
        if not isinstance(other, TraceExpr):
            return NotImplemented
        flag = self._flag(other)
        acc: dict[Key, int] = {}
        for (m1, w1), c1 in self.terms.items():
            for (m2, w2), c2 in other.terms.items():
                key = (_mono_mul(m1, m2), tuple(sorted(w1 + w2)) if w1 and w2 else w1 or w2)
                acc[key] = acc.get(key, 0) + c1 * c2
        return TraceExpr(acc, flag)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TraceExpr":
        out = TraceExpr.constant(1, self.normalized)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.terms != other.terms:
            return False
        return self.normalized == other.normalized or not (self.has_words() or other.has_words())

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.normalized))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # -- rewriting --------------------------------------------------------
    def transform(
        self,
        fn: Callable[[dict[str, int], tuple[TraceWord, ...], int], tuple[Mapping[str, int], Iterable[TraceWord], int]],
        normalized: bool | None = None,
    ) -> "TraceExpr":
        """Rewrite every term through ``fn(monomial, words, coef)`` and re-merge."""
        return TraceExpr.from_terms(
            (fn(dict(m), w, c) for (m, w), c in self.terms.items()),
            self.normalized if normalized is None else normalized,
        )

    def substitute(
        self,
        symbols: Mapping[str, Mapping[str, int] | str] | None = None,
        colors: Mapping[int, int] | None = None,
    ) -> "TraceExpr":
        """Replace symbols by monomials (or renamed symbols) and relabel colors.

        ``substitute({"p2": "p1"}, {2: 1})`` identifies variable 2 with 1.
        """
        symbols = {
            k: ({v: 1} if isinstance(v, str) else dict(v)) for k, v in (symbols or {}).items()
        }
        colors = colors or {}

        def fn(mono, words, coef):
            out: dict[str, int] = {}
            for k, e in mono.items():
                for k2, e2 in symbols.get(k, {k: 1}).items():
                    out[k2] = out.get(k2, 0) + e * e2
            return out, [w.recolor(colors) for w in words], coef

        return self.transform(fn)

    def split_words(self) -> dict[tuple[TraceWord, ...], "TraceExpr"]:
        """Group terms by word multiset; values are word-free polynomials."""
        out: dict[tuple[TraceWord, ...], dict[Key, int]] = {}
        for (m, w), c in self.terms.items():
            out.setdefault(w, {})[(m, ())] = c
        return {w: TraceExpr(d) for w, d in out.items()}

    def symbols(self) -> set[str]:
        return {k for (m, _), _c in self.terms.items() for k, _e in m}

    # -- output -----------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Monomial, tuple[TraceWord, ...], int]]:
        def key(item):
            (m, w), _c = item
            deg = sum(e for _k, e in m)
            return (-deg, [(_sym_key(k), -e) for k, e in m], [(-len(x), x) for x in w])

        return [(m, w, c) for (m, w), c in sorted(self.terms.items(), key=key)]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        tr = "trN" if self.normalized else "tr"
        parts = []
        for m, words, c in self.sorted_terms():
            factors = [k if e == 1 else f"{k}^{e}" for k, e in m]
            for w, grp in itertools.groupby(words):
                k = len(list(grp))
                factors.append(f"{tr}({w})" + (f"^{k}" if k > 1 else ""))
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self):
        return f"TraceExpr({str(self)!r}, normalized={self.normalized})"

    def to_dict(self) -> dict:
        return {
            "normalized": self.normalized,
            "terms": [
                {
                    "coefficient": c,
                    "monomial": dict(m),
                    "traces": [[str(l) for l in w.letters] for w in words],
                }
                for m, words, c in self.sorted_terms()
            ],
        }


def trace_product(
    word: TraceWord,
    matrices: Mapping[int, np.ndarray],
    hbind: Mapping[str, np.ndarray] | None = None,
) -> complex:
    """Raw trace of the ordered product of ``h x_color`` factors."""
    hbind = hbind or {}
    prod = None
    for l in word.letters:
        try:
            m = matrices[l.color]
        except KeyError:
            raise ValueError(f"no matrix bound for color {l.color}") from None
        if l.hslot:
            if l.hslot not in hbind:
                raise ValueError(f"unbound h-slot {l.hslot!r}")
            m = hbind[l.hslot] @ m
        if prod is not None and prod.shape[1] != m.shape[0]:
            raise ValueError("matrix dimension mismatch")
        prod = m if prod is None else prod @ m
    return complex(np.trace(prod))


def evaluate(
    e: TraceExpr,
    matrices: Mapping[int, np.ndarray] | Sequence[np.ndarray],
    symbols: Mapping[str, complex] | None = None,
    hbind: Mapping[str, np.ndarray] | None = None,
) -> complex:
    """Numeric value of ``e`` with colors bound to matrices and symbols to numbers.

    ``N`` defaults to the common matrix dimension. Normalized expressions
    read each word as ``(1/N) tr``.
    """
    if not isinstance(matrices, Mapping):
        matrices = {r + 1: np.asarray(m) for r, m in enumerate(matrices)}
    dims = {np.asarray(m).shape for m in matrices.values()}
    dims |= {np.asarray(m).shape for m in (hbind or {}).values()}
    if any(len(d) != 2 or d[0] != d[1] for d in dims) or len({d[0] for d in dims}) > 1:
        raise ValueError(f"matrices must be square of one dimension, got {sorted(dims)}")
    symbols = dict(symbols or {})
    if dims:
        symbols.setdefault("N", next(iter(dims))[0])
    n_dim = symbols.get("N")
    cache: dict[TraceWord, complex] = {}
    total = 0j
    for (m, words), c in e.terms.items():
        val = complex(c)
        for k, p in m:
            if k not in symbols:
                raise ValueError(f"no value for symbol {k!r}")
            val *= complex(symbols[k]) ** p
        for w in words:
            if w not in cache:
                tv = trace_product(w, matrices, hbind)
                cache[w] = tv / n_dim if e.normalized else tv
            val *= cache[w]
        total += val
    return total


def entry_sum_identity_check(
    sigma: Permutation,
    t: Coloring,
    h: Mapping[int, np.ndarray] | None,
    matrices: Mapping[int, np.ndarray] | Sequence[np.ndarray],
) -> tuple[complex, complex]:
    """Product of traces over cycles vs the explicit sum over index maps.

    ``h`` maps one-based positions to matrices (identity when absent). Returns
    ``(lhs, rhs)`` where lhs multiplies cycle traces and rhs sums
    ``prod_i [h_i x_t(i)]_{J(i), J(sigma(i))}`` over all J: {1..n} -> {1..N}.
    """
    if not isinstance(matrices, Mapping):
        matrices = {r + 1: np.asarray(m) for r, m in enumerate(matrices)}
    h = h or {}
    n = len(sigma)
    factors = []
    for i in range(1, n + 1):
        x = np.asarray(matrices[t(i)])
        factors.append(np.asarray(h[i]) @ x if i in h else x)
    N = factors[0].shape[0]

    lhs = 1 + 0j
    for cyc in sigma.cycles():
        prod = np.eye(N, dtype=complex)
        for j in cyc:
            prod = prod @ factors[j - 1]
        lhs *= np.trace(prod)

    img = sigma.images
    rhs = 0j
    for J in itertools.product(range(N), repeat=n):
        term = 1 + 0j
        for i in range(n):
            term *= factors[i][J[i], J[img[i]]]
        rhs += term
    return complex(lhs), complex(rhs)
