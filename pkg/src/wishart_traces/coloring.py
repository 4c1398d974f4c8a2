"""Colorings of {1..n} and the color-preserving permutations they admit."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .perm import Permutation, _compose0, _count_cycles0, _cycles0

__all__ = [
    "Coloring",
    "EnumerationLimitError",
    "DEFAULT_ENUM_CAP",
    "enumerate_color_preserving",
    "color_preserving_count",
    "color_cycle_counts",
    "long_cycle",
    "two_star_sigmas",
    "planar_set",
    "connecting_planar_sets",
]

DEFAULT_ENUM_CAP = 10**8


class EnumerationLimitError(RuntimeError):
    """Raised when an enumeration would exceed the configured cap."""


@dataclass(frozen=True)
class Coloring:
    """A map {1..n} -> {1..s}; ``colors`` holds the one-based values."""

    colors: tuple[int, ...]
    s: int = 0

    def __post_init__(self):
        colors = tuple(int(c) for c in self.colors)
        if not colors:
            raise ValueError("a coloring needs n >= 1")
        s = self.s or max(colors)
        if s < 1 or any(not 1 <= c <= s for c in colors):
            raise ValueError(f"colors {colors!r} outside 1..{s}")
        object.__setattr__(self, "colors", colors)
        object.__setattr__(self, "s", s)

    @classmethod
    def parse(cls, text: str, s: int = 0) -> "Coloring":
        """Parse the comma list format, e.g. ``1,2,1,2``."""
        return cls(tuple(int(x) for x in text.replace(" ", "").split(",") if x), s)

    @classmethod
    def constant(cls, n: int) -> "Coloring":
        return cls((1,) * n)

    def __len__(self) -> int:
        return len(self.colors)

    def __call__(self, j: int) -> int:
        return self.colors[j - 1]

    def classes(self) -> tuple[tuple[int, ...], ...]:
        """For each color 1..s the ordered one-based index set (possibly empty)."""
        return tuple(
            tuple(j + 1 for j, c in enumerate(self.colors) if c == color)
            for color in range(1, self.s + 1)
        )

    def doubled(self) -> "Coloring":
        """The coloring of {1..2n} repeating this one on {n+1..2n}."""
        return Coloring(self.colors + self.colors, self.s)

    def __str__(self) -> str:
        return ",".join(map(str, self.colors))


def color_preserving_count(t: Coloring) -> int:
    return math.prod(math.factorial(len(c)) for c in t.classes())


def _color_preserving0(
    colors: Sequence[int],
    cap: int = DEFAULT_ENUM_CAP,
    shard: tuple[int, int] | None = None,
) -> Iterator[tuple[int, ...]]:
    """Zero-based images of every color-preserving permutation.

    Order: per-class permutations in lexicographic order, classes by color,
    the last class varying fastest. ``shard=(i, w)`` keeps only the elements
    whose first-class permutation has index ``i`` mod ``w``.
    """
    n = len(colors)
    groups: dict[int, list[int]] = {}
    for j, c in enumerate(colors):
        groups.setdefault(c, []).append(j)
    classes = [groups[c] for c in sorted(groups)]
    total = math.prod(math.factorial(len(c)) for c in classes)
    if total > cap:
        raise EnumerationLimitError(
            f"{total} color-preserving permutations exceed the cap {cap}"
        )
    first, rest = classes[0], classes[1:]
    rest_perms = [list(itertools.permutations(c)) for c in rest]
    images = list(range(n))
    for idx, head in enumerate(itertools.permutations(first)):
        if shard is not None and idx % shard[1] != shard[0]:
            continue
        for src, dst in zip(first, head):
            images[src] = dst
        for tail in itertools.product(*rest_perms):
            for cls, img in zip(rest, tail):
                for src, dst in zip(cls, img):
                    images[src] = dst
            yield tuple(images)


def enumerate_color_preserving(
    t: Coloring,
    cap: int = DEFAULT_ENUM_CAP,
    shard: tuple[int, int] | None = None,
) -> Iterator[Permutation]:
    """Every alpha with t∘alpha = t, in a deterministic order.

    The count is the product of the factorials of the class sizes; a count
    above ``cap`` raises :class:`EnumerationLimitError` before anything is
    yielded. ``shard=(i, w)`` restricts to worker ``i`` of ``w``.
    """
    gen = _color_preserving0(t.colors, cap, shard)
    # force the cap check at call time rather than at first next()
    return (Permutation(a) for a in _prime(gen))


def _prime(gen):
    try:
        first = next(gen)
    except StopIteration:
        return iter(())
    return itertools.chain([first], gen)


def _is_color_preserving0(colors: Sequence[int], images: Sequence[int]) -> bool:
    return all(colors[images[j]] == c for j, c in enumerate(colors))


def color_cycle_counts(a: Permutation, t: Coloring) -> tuple[int, ...]:
    """Number of cycles of ``a`` living on each color class."""
    if len(a) != len(t):
        raise ValueError("permutation and coloring sizes differ")
    if not _is_color_preserving0(t.colors, a.images):
        raise ValueError(f"{a} does not preserve the coloring {t}")
    counts = [0] * t.s
    for cyc in _cycles0(a.images):
        counts[t.colors[cyc[0]] - 1] += 1
    return tuple(counts)


def long_cycle(n: int) -> Permutation:
    """The n-cycle (1,2,...,n)."""
    return Permutation(tuple((i + 1) % n for i in range(n)))


def two_star_sigmas(n: int) -> tuple[Permutation, Permutation]:
    """``(1..n)(n+1..2n)`` and the variant with the first star reversed."""
    fwd = list(range(1, n)) + [0]
    second = [n + (i + 1) % n for i in range(n)]
    rev = [(i - 1) % n for i in range(n)]
    return Permutation(tuple(fwd + second)), Permutation(tuple(rev + second))


def planar_set(
    t: Coloring,
    sigma: Permutation | None = None,
    cap: int = DEFAULT_ENUM_CAP,
) -> Iterator[Permutation]:
    """Color-preserving alpha with #C(alpha) + #C(sigma∘alpha) = n + 1.

    ``sigma`` defaults to the n-cycle (1,2,...,n).
    """
    n = len(t)
    s = (sigma or long_cycle(n)).images
    if len(s) != n:
        raise ValueError("sigma and coloring sizes differ")
    for a in _prime(_color_preserving0(t.colors, cap)):
        if _count_cycles0(a) + _count_cycles0(_compose0(s, a)) == n + 1:
            yield Permutation(a)


def connecting_planar_sets(
    t: Coloring, cap: int = DEFAULT_ENUM_CAP
) -> tuple[list[Permutation], list[Permutation]]:
    """The two-star genus-zero connecting sets for a base coloring ``t`` on {1..n}.

    Both sets range over permutations of {1..2n} preserving the doubled
    coloring that have a cycle meeting both {1..n} and {n+1..2n}. The first
    keeps those with #C(alpha) + #C(s2∘alpha) = 2n for s2 = (1..n)(n+1..2n);
    the second uses s3 = (n,...,1)(n+1..2n) instead.
    """
    n = len(t)
    s2, s3 = (s.images for s in two_star_sigmas(n))
    star, starstar = [], []
    for a in _color_preserving0(t.doubled().colors, cap):
        if all(a[j] < n for j in range(n)):
            continue
        c = _count_cycles0(a)
        if c + _count_cycles0(_compose0(s2, a)) == 2 * n:
            star.append(Permutation(a))
        if c + _count_cycles0(_compose0(s3, a)) == 2 * n:
            starstar.append(Permutation(a))
    return star, starstar
