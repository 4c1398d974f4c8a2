"""Permutations of {1..n}: composition, cycles, orbits and the genus of a pair.

Permutations are stored zero-based (``images[i]`` is the image of ``i``), but
every public constructor, printer and cycle listing is one-based.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Permutation",
    "cycles",
    "compose",
    "orbits",
    "euler_genus",
    "cycle_count",
]


def _cycles0(images: Sequence[int]) -> list[list[int]]:
    """Zero-based cycles, each starting at its minimum, sorted by minimum."""
    n = len(images)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = []
        j = start
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = images[j]
        out.append(cyc)
    return out


def _count_cycles0(images: Sequence[int]) -> int:
    n = len(images)
    seen = [False] * n
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        count += 1
        j = start
        while not seen[j]:
            seen[j] = True
            j = images[j]
    return count


def _compose0(s: Sequence[int], a: Sequence[int]) -> tuple[int, ...]:
    return tuple(s[j] for j in a)


def _orbits0(s: Sequence[int], a: Sequence[int]) -> list[list[int]]:
    n = len(s)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for perm in (s, a):
        for i in range(n):
            ri, rj = find(i), find(perm[i])
            if ri != rj:
                if ri < rj:
                    parent[rj] = ri
                else:
                    parent[ri] = rj
    blocks: dict[int, list[int]] = {}
    for i in range(n):
        blocks.setdefault(find(i), []).append(i)
    return sorted(blocks.values(), key=lambda b: b[0])


def _is_transitive0(s: Sequence[int], a: Sequence[int]) -> bool:
    n = len(s)
    if n == 0:
        return True
    seen = [False] * n
    seen[0] = True
    stack = [0]
    reached = 1
    while stack:
        i = stack.pop()
        for j in (s[i], a[i]):
            if not seen[j]:
                seen[j] = True
                reached += 1
                stack.append(j)
    return reached == n


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n}, held zero-based in ``images``."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation: {imgs!r}")
        object.__setattr__(self, "images", imgs)

    # -- constructors -----------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_images(cls, images: Iterable[int]) -> "Permutation":
        """Build from one-based images, e.g. ``[2, 3, 1]`` for (1,2,3)."""
        return cls(tuple(int(i) - 1 for i in images))

    @classmethod
    def from_cycles(cls, n: int, cyc: Iterable[Iterable[int]]) -> "Permutation":
        """Build from one-based cycles; unlisted points are fixed."""
        images = list(range(n))
        used = set()
        for c in cyc:
            c = [int(x) - 1 for x in c]
            for x in c:
                if not 0 <= x < n:
                    raise ValueError(f"point {x + 1} outside 1..{n}")
                if x in used:
                    raise ValueError(f"point {x + 1} repeated in cycles")
                used.add(x)
            for i, x in enumerate(c):
                images[x] = c[(i + 1) % len(c)]
        return cls(tuple(images))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Permutation":
        """Parse cycle notation such as ``(1,2,3)(4,5,6)``.

        ``()`` denotes the identity; ``n`` defaults to the largest point.
        """
        text = text.strip()
        if not re.fullmatch(r"(\(\s*(\d+\s*(,\s*\d+\s*)*)?\)\s*)+", text):
            raise ValueError(f"bad cycle notation: {text!r}")
        cyc = []
        for body in re.findall(r"\(([^)]*)\)", text):
            body = body.strip()
            if body:
                cyc.append([int(x) for x in body.split(",")])
        top = max((max(c) for c in cyc), default=0)
        if n is None:
            n = top
        return cls.from_cycles(n, cyc)

    # -- basic algebra ----------------------------------------------------
    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        """One-based evaluation."""
        return self.images[i - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        return cycles(self)

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in _cycles0(self.images)), reverse=True))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def to_images(self) -> list[int]:
        return [i + 1 for i in self.images]

    def __str__(self) -> str:
        """Canonical cycle notation with fixed points shown, e.g. ``(1)(2,3)``."""
        return "".join("(" + ",".join(map(str, c)) + ")" for c in self.cycles()) or "()"


def cycles(p: Permutation) -> tuple[tuple[int, ...], ...]:
    """One-based cycles, each min-first, sorted by minimum (fixed points included)."""
    return tuple(tuple(x + 1 for x in c) for c in _cycles0(p.images))


def cycle_count(p: Permutation) -> int:
    return _count_cycles0(p.images)


def _check_sizes(s: Permutation, a: Permutation):
    if len(s) != len(a):
        raise ValueError(f"ground sets differ: {len(s)} != {len(a)}")


def compose(s: Permutation, a: Permutation) -> Permutation:
    """``s∘a``: apply ``a`` first, then ``s``."""
    _check_sizes(s, a)
    return Permutation(_compose0(s.images, a.images))


def orbits(s: Permutation, a: Permutation) -> tuple[tuple[int, ...], ...]:
    """Orbits of the group generated by ``s`` and ``a``, one-based and ordered."""
    _check_sizes(s, a)
    return tuple(tuple(x + 1 for x in b) for b in _orbits0(s.images, a.images))


def euler_genus(s: Permutation, a: Permutation) -> tuple[int, Fraction]:
    """Euler characteristic and genus of the pair ``(s, a)``.

    ``chi = #C(s) + #C(a) + #C(s∘a) - n`` and ``genus = (2 - chi) / 2``. For a
    non-transitive pair the genus may be negative or half-integral.
    """
    _check_sizes(s, a)
    n = len(s)
    chi = (
        _count_cycles0(s.images)
        + _count_cycles0(a.images)
        + _count_cycles0(_compose0(s.images, a.images))
        - n
    )
    return chi, Fraction(2 - chi, 2)
