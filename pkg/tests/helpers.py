"""Shared test utilities, kept independent of the library's own algorithms."""

from fractions import Fraction
from itertools import permutations

import numpy as np

from detconv.polyalg import MultiPoly


def perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def leibniz_det(entries):
    """Permutation-sum determinant: an oracle independent of the library.

    Works for grids of MultiPoly or plain Fractions/ints.
    """
    n = len(entries)
    if n == 0:
        return 1
    total = None
    for perm in permutations(range(n)):
        term = entries[0][perm[0]]
        for i in range(1, n):
            term = term * entries[i][perm[i]]
        if perm_sign(perm) < 0:
            term = -term
        total = term if total is None else total + term
    return total


def brute_permanent(grid):
    """Permutation-sum permanent, independent of Ryser's formula."""
    n = len(grid)
    total = Fraction(0)
    for perm in permutations(range(n)):
        term = Fraction(1)
        for i in range(n):
            term *= Fraction(grid[i][perm[i]])
        total += term
    return total


def rand_int_grid(rng, rows, cols, lo=-3, hi=3):
    return tuple(
        tuple(int(v) for v in row)
        for row in rng.integers(lo, hi + 1, size=(rows, cols))
    )


def rand_poly(rng, arity, max_terms=4, max_exp=3):
    terms = {}
    for _ in range(int(rng.integers(0, max_terms + 1))):
        exps = tuple(int(e) for e in rng.integers(0, max_exp + 1, size=arity))
        num = int(rng.integers(-9, 10))
        den = int(rng.integers(1, 5))
        terms[exps] = terms.get(exps, Fraction(0)) + Fraction(num, den)
    return MultiPoly(arity, terms)


def seeded(*tags):
    return np.random.default_rng(tags)
