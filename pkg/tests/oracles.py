"""Brute-force reference implementations used only by the tests.

Nothing here imports the package: permutations are plain zero-based image
tuples and every sum runs over all of S_n with explicit filters.
"""
from __future__ import annotations

import itertools

import numpy as np


def compose(s, a):
    """(s∘a)(i) = s(a(i))."""
    return tuple(s[a[i]] for i in range(len(a)))


def cycles(p):
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        out.append(cyc)
    return out


def n_cycles(p):
    return len(cycles(p))


def inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def is_transitive(s, a):
    n = len(s)
    reach, stack = {0}, [0]
    while stack:
        i = stack.pop()
        for j in (s[i], a[i], inverse(s)[i], inverse(a)[i]):
            if j not in reach:
                reach.add(j)
                stack.append(j)
    return len(reach) == n


def color_preserving(colors):
    """Every alpha in S_n with colors[alpha(j)] == colors[j], by filtering S_n."""
    n = len(colors)
    return [a for a in itertools.permutations(range(n)) if all(colors[a[j]] == colors[j] for j in range(n))]


def long_cycle(n):
    return tuple((i + 1) % n for i in range(n))


def planar_single(colors):
    n = len(colors)
    s = long_cycle(n)
    return sorted(a for a in color_preserving(colors) if n_cycles(a) + n_cycles(compose(s, a)) == n + 1)


def moment(sigma, colors, sigmas, shapes, h=None):
    """E q_{sigma,t,h}(W) by the permutation sum, fully numeric.

    For each color-preserving alpha the cycles of sigma∘alpha are read in the
    order j, sigma(alpha(j)), ...; each contributes tr(prod h_j Sigma_{t(j)}).
    """
    h = h or {}
    n = len(sigma)
    N = sigmas[0].shape[0]
    total = 0j
    for a in color_preserving(colors):
        w = 1.0
        for cyc in cycles(a):
            w *= shapes[colors[cyc[0]] - 1]
        sa = compose(sigma, a)
        for cyc in cycles(sa):
            prod = np.eye(N, dtype=complex)
            for j in cyc:
                m = sigmas[colors[j] - 1]
                if j in h:
                    m = h[j] @ m
                prod = prod @ m
            w *= np.trace(prod)
        total += w
    return total


def set_partitions(items):
    """All set partitions of a list, by inserting the first item everywhere."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def hss_s2(partition, p, N):
    """E prod tr(W^lambda_i) for W ~ W(I_N, p), |lambda| <= 2, over S_1 or S_2 by hand."""
    lam = tuple(sorted(partition))
    if lam == (1,):
        # only alpha = e; sigma = e: p^1 N^1
        return p * N
    if lam == (2,):
        # sigma = (1 2): alpha = e gives p^2 N^1, alpha = (1 2) gives p^1 N^2
        return p**2 * N + p * N**2
    if lam == (1, 1):
        # sigma = e: alpha = e gives p^2 N^2, alpha = (1 2) gives p^1 N^1
        return p**2 * N**2 + p * N
    raise ValueError("only |lambda| <= 2")


def random_psd(rng, N):
    B = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    S = B @ B.conj().T / N
    return (S + S.conj().T) / 2
