"""Permanents: a Ryser inclusion-exclusion oracle and the low-rank algorithm.

The low-rank route writes the matrix as sum_i a_i b_i^T, forms the two
diagonal determinantal polynomials p = det(sum x_i diag(a_i)) and
q = det(sum x_i diag(b_i)), star-convolves them and evaluates at the
all-ones point times n factorial.  Its cost is governed by the number of
terms of p and q, at most C(n+k-1, k-1), while Ryser always walks all
2^n column subsets; the benchmark makes that gap measurable.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .convolve import star_convolve
from .matpoly import RatGrid, rat_rows
from .polyalg import MultiPoly, as_fraction


@dataclass(frozen=True)
class RankDecomposition:
    """k pairs of length-n vectors whose outer products sum to the target."""

    a_vectors: tuple[tuple[Fraction, ...], ...]
    b_vectors: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        a = tuple(tuple(as_fraction(v) for v in vec) for vec in self.a_vectors)
        b = tuple(tuple(as_fraction(v) for v in vec) for vec in self.b_vectors)
        object.__setattr__(self, "a_vectors", a)
        object.__setattr__(self, "b_vectors", b)
        if not a or len(a) != len(b):
            raise ValueError("need equally many a and b vectors, at least one")
        n = len(a[0])
        if any(len(v) != n for v in a + b):
            raise ValueError("all vectors must share one length")

    @property
    def n(self) -> int:
        return len(self.a_vectors[0])

    @property
    def k(self) -> int:
        return len(self.a_vectors)

    def reconstruct(self) -> RatGrid:
        """The matrix sum_i a_i b_i^T."""
        n = self.n
        return tuple(
            tuple(
                sum((av[r] * bv[c] for av, bv in zip(self.a_vectors, self.b_vectors)),
                    Fraction(0))
                for c in range(n)
            )
            for r in range(n)
        )


def _ryser_signed_sum(rows, limit=None):
    """Gray-code walk of Ryser's subset sum.

    rows is a list of length-n rows; entries may be ints or Fractions.
    With limit set, only the first ``limit`` subsets are visited (used
    for cost measurement only; the partial value is meaningless).
    """
    n = len(rows)
    cols = list(zip(*rows))
    sums = [0] * n
    total = 0
    gray = 0
    bits = 0
    end = 1 << n if limit is None else min(limit + 1, 1 << n)
    for s in range(1, end):
        new_gray = s ^ (s >> 1)
        flipped = new_gray ^ gray
        j = flipped.bit_length() - 1
        col = cols[j]
        if new_gray & flipped:
            sums = [a + v for a, v in zip(sums, col)]
            bits += 1
        else:
            sums = [a - v for a, v in zip(sums, col)]
            bits -= 1
        gray = new_gray
        prod = 1
        for v in sums:
            if not v:
                prod = 0
                break
            prod *= v
        total += -prod if bits % 2 else prod
    return total


def ryser_permanent(matrix) -> Fraction:
    """Exact permanent by inclusion-exclusion over column subsets (2^n terms)."""
    grid = rat_rows(matrix)
    n = len(grid)
    if any(len(r) != n for r in grid):
        raise ValueError("permanent requires a square matrix")
    if n == 0:
        return Fraction(1)
    # integer fast path keeps the Gray-code loop in plain int arithmetic
    if all(v.denominator == 1 for row in grid for v in row):
        rows = [[v.numerator for v in row] for row in grid]
    else:
        rows = [list(row) for row in grid]
    total = _ryser_signed_sum(rows)
    return Fraction((-1) ** n * total)


def lowrank_polynomials(dec: RankDecomposition) -> tuple[MultiPoly, MultiPoly]:
    """The diagonal determinantal polynomials of the decomposition.

    p = det(sum_i x_i diag(a_i)) = prod_rows (sum_i x_i a_i[row]), and
    likewise q from the b vectors; both are homogeneous of degree n in
    k variables.
    """
    k = dec.k

    def build(vectors):
        poly = MultiPoly.constant(k, 1)
        for row in range(dec.n):
            linear = MultiPoly(
                k,
                {
                    tuple(1 if i == j else 0 for j in range(k)): vec[row]
                    for i, vec in enumerate(vectors)
                    if vec[row]
                },
            )
            poly = poly * linear
        return poly

    return build(dec.a_vectors), build(dec.b_vectors)


def lowrank_permanent(dec: RankDecomposition) -> Fraction:
    """perm(sum_i a_i b_i^T) via the star convolution of the diagonal polynomials.

    Returns n! * [p star q](1, ..., 1); the all-ones evaluation is just
    the sum of the stored star coefficients.
    """
    p, q = lowrank_polynomials(dec)
    s = star_convolve(p, q, dec.n)
    return math.factorial(dec.n) * sum(s.terms.values(), Fraction(0))


def term_count_report(n: int, k: int) -> int:
    """Upper bound C(n+k-1, k-1) on the stored terms of p and q."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    return math.comb(n + k - 1, k - 1)


@dataclass
class BenchResult:
    n: int
    k: int
    term_bound: int
    terms_p: int
    terms_q: int
    time_lowrank: float
    time_ryser: float
    ryser_extrapolated: bool
    values_equal: bool | None

    def csv_row(self) -> str:
        return (
            f"{self.n},{self.k},{max(self.terms_p, self.terms_q)},"
            f"{self.time_lowrank:.6f},{self.time_ryser:.6f},"
            f"{int(self.ryser_extrapolated)}"
        )

    @staticmethod
    def csv_header() -> str:
        return "n,k,terms,time_lowrank,time_ryser,ryser_extrapolated"


def bench_lowrank_vs_ryser(
    n: int,
    k: int,
    seed: int = 0,
    full_ryser_max_n: int = 18,
    sample_exponent: int = 14,
) -> BenchResult:
    """Time the low-rank algorithm against Ryser on one random instance.

    Entries are integers in [-3, 3].  For n beyond ``full_ryser_max_n``
    the full 2^n Ryser walk is impractical, so its cost is measured on
    2^sample_exponent Gray-code steps of the real loop and scaled up;
    the result is flagged as extrapolated and is a lower bound in
    spirit (per-step cost only grows as the running sums fill in).
    """
    rng = np.random.default_rng(seed)
    # positive entries keep every row's linear form nonzero, so p and q
    # carry their full C(n+k-1, k-1) terms and the benchmark is not
    # degenerate
    vecs = rng.integers(1, 4, size=(2, k, n))
    dec = RankDecomposition(
        tuple(tuple(int(v) for v in row) for row in vecs[0]),
        tuple(tuple(int(v) for v in row) for row in vecs[1]),
    )
    p, q = lowrank_polynomials(dec)

    t0 = time.perf_counter()
    lowrank_value = lowrank_permanent(dec)
    time_lowrank = time.perf_counter() - t0

    matrix = dec.reconstruct()
    rows = [[v.numerator for v in row] for row in matrix]
    if n <= full_ryser_max_n:
        t0 = time.perf_counter()
        ryser_value = ryser_permanent(matrix)
        time_ryser = time.perf_counter() - t0
        extrapolated = False
        values_equal = lowrank_value == ryser_value
    else:
        limit = 1 << sample_exponent
        t0 = time.perf_counter()
        _ryser_signed_sum(rows, limit=limit)
        sample_time = time.perf_counter() - t0
        time_ryser = sample_time * (2**n / limit)
        extrapolated = True
        values_equal = None
    return BenchResult(
        n=n,
        k=k,
        term_bound=term_count_report(n, k),
        terms_p=len(p.terms),
        terms_q=len(q.terms),
        time_lowrank=time_lowrank,
        time_ryser=time_ryser,
        ryser_extrapolated=extrapolated,
        values_equal=values_equal,
    )
