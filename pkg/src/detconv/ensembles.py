"""Signed-permutation ensembles and the minor-orthogonality verifier.

The hyperoctahedral group of size n has 2^n * n! elements; identities are
verified by exhaustive enumeration whenever that order fits under a
configurable cap (default 10^6, i.e. n <= 7), and by seeded Monte Carlo
above it.  Haar-orthogonal sampling is provided for statistical checks
only and never enters the exact core.

RNG policy: all sampling uses numpy's PCG64 generator.  Seeds are 64-bit
ints; independent streams (for example the three independent draws of a
triple-ensemble average) are derived with ``rng_streams``, which spawns
children of one ``numpy.random.SeedSequence`` so the streams are
reproducible and non-overlapping.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .matpoly import PolyMatrix, RatGrid
from .polyalg import MultiPoly

DEFAULT_CAP = 10**6

KIND_EXHAUSTIVE = "signed-permutation-exhaustive"
KIND_SAMPLED = "signed-permutation-sampled"
KIND_HAAR = "haar-orthogonal-sampled"
KINDS = (KIND_EXHAUSTIVE, KIND_SAMPLED, KIND_HAAR)


class CapExceededError(Exception):
    """Exhaustive enumeration was requested beyond the configured cap."""

    def __init__(self, n: int, order: int, cap: int):
        self.n = n
        self.order = order
        self.cap = cap
        super().__init__(
            f"group of size {n} has {order} elements, above the cap {cap}; "
            "use a sampled kind (--samples) instead"
        )


def group_order(n: int) -> int:
    """Number of n x n signed permutation matrices: 2^n * n!."""
    return math.factorial(n) << n


@dataclass(frozen=True)
class SignedPermutation:
    """A signed permutation matrix: one +-1 entry per row and column.

    Column j holds its nonzero entry ``signs[j]`` in row ``perm[j]``
    (0-based).  The group is exactly the set of matrices Q with QQ^T = I
    and integer entries.
    """

    n: int
    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(self.n)):
            raise ValueError(f"not a permutation of 0..{self.n - 1}: {self.perm}")
        if len(self.signs) != self.n or any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"signs must be +-1 sequences of length {self.n}")

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(n, tuple(range(n)), (1,) * n)

    def matrix(self) -> tuple[tuple[int, ...], ...]:
        rows = [[0] * self.n for _ in range(self.n)]
        for j in range(self.n):
            rows[self.perm[j]][j] = self.signs[j]
        return tuple(tuple(r) for r in rows)

    def to_polymatrix(self, arity: int) -> PolyMatrix:
        return PolyMatrix.from_rationals(self.matrix(), arity)

    def inverse_perm(self) -> tuple[int, ...]:
        inv = [0] * self.n
        for j, i in enumerate(self.perm):
            inv[i] = j
        return tuple(inv)

    def transpose(self) -> "SignedPermutation":
        inv = self.inverse_perm()
        return SignedPermutation(
            self.n, inv, tuple(self.signs[inv[j]] for j in range(self.n))
        )

    inverse = transpose  # Q^T = Q^-1 for signed permutations

    def compose(self, other: "SignedPermutation") -> "SignedPermutation":
        """Matrix product self @ other (also a signed permutation)."""
        if self.n != other.n:
            raise ValueError("size mismatch")
        perm = tuple(self.perm[other.perm[j]] for j in range(self.n))
        signs = tuple(
            other.signs[j] * self.signs[other.perm[j]] for j in range(self.n)
        )
        return SignedPermutation(self.n, perm, signs)

    def det(self) -> int:
        sign = 1
        seen = [False] * self.n
        for start in range(self.n):
            if seen[start]:
                continue
            length = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = self.perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        for s in self.signs:
            sign *= s
        return sign

    # Fast exact products with rational grids (avoids full matmuls).

    def left_mul(self, grid: RatGrid) -> RatGrid:
        """Q @ B for a rational matrix B with n rows."""
        inv = self.inverse_perm()
        return tuple(
            tuple(self.signs[inv[i]] * v for v in grid[inv[i]])
            for i in range(self.n)
        )

    def right_mul(self, grid: RatGrid) -> RatGrid:
        """B @ Q for a rational matrix B with n columns."""
        return tuple(
            tuple(self.signs[j] * row[self.perm[j]] for j in range(self.n))
            for row in grid
        )

    def conjugate(self, grid: RatGrid) -> RatGrid:
        """Q @ B @ Q^T for a square rational matrix B of size n."""
        inv = self.inverse_perm()
        return tuple(
            tuple(
                self.signs[inv[i]] * self.signs[inv[j]] * grid[inv[i]][inv[j]]
                for j in range(self.n)
            )
            for i in range(self.n)
        )


def check_cap(n: int, cap: int = DEFAULT_CAP) -> int:
    order = group_order(n)
    if order > cap:
        raise CapExceededError(n, order, cap)
    return order


def enumerate_signed_permutations(
    n: int, cap: int = DEFAULT_CAP
) -> Iterator[SignedPermutation]:
    """All 2^n * n! elements in a fixed deterministic order."""
    if n < 1:
        raise ValueError("n must be at least 1")
    check_cap(n, cap)
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            yield SignedPermutation(n, perm, signs)


def sample_signed_permutation(n: int, rng: np.random.Generator) -> SignedPermutation:
    """One uniform draw from the group; deterministic under a fixed seed."""
    if n < 1:
        raise ValueError("n must be at least 1")
    perm = tuple(int(i) for i in rng.permutation(n))
    signs = tuple(1 if b else -1 for b in rng.integers(0, 2, size=n))
    return SignedPermutation(n, perm, signs)


def rng_streams(seed: int, count: int) -> list[np.random.Generator]:
    """Independent, reproducible PCG64 streams derived from one seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


@dataclass(frozen=True)
class EnsembleSpec:
    """Which ensemble to average over, and how."""

    kind: str
    n: int
    sample_count: int = 10_000
    seed: int = 0
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.kind != KIND_EXHAUSTIVE and self.sample_count < 1:
            raise ValueError("sample_count must be positive")
        if self.kind == KIND_EXHAUSTIVE:
            check_cap(self.n, self.cap)


def _chunks(items: Sequence, count: int) -> list[Sequence]:
    count = max(1, min(count, len(items)))
    size, rem = divmod(len(items), count)
    out = []
    start = 0
    for i in range(count):
        stop = start + size + (1 if i < rem else 0)
        out.append(items[start:stop])
        start = stop
    return out


def _sum_values(values: Iterable):
    total = None
    for v in values:
        total = v if total is None else total + v
    if total is None:
        raise ValueError("empty reduction")
    return total


def exhaustive_mean(elements: Sequence, f: Callable, workers: int = 1):
    """Exact average of f over the elements.

    Reduction is exact rational addition in a fixed chunk order, so the
    result is identical for every worker count.
    """
    if workers <= 1 or len(elements) < 2:
        total = _sum_values(f(e) for e in elements)
    else:
        parts = _chunks(elements, workers)
        with ThreadPoolExecutor(max_workers=len(parts)) as pool:
            partials = list(
                pool.map(lambda chunk: _sum_values(f(e) for e in chunk), parts)
            )
        total = _sum_values(partials)
    return total * Fraction(1, len(elements))


def expectation_over_ensemble(
    spec: EnsembleSpec,
    f: Callable[[SignedPermutation], MultiPoly],
    workers: int = 1,
):
    """E[f(Q)] over the ensemble described by ``spec``.

    Exhaustive kinds give the exact rational average; the sampled kind
    gives the empirical mean over ``spec.sample_count`` seeded draws
    (still exact arithmetic over the sample).
    """
    if spec.kind == KIND_EXHAUSTIVE:
        elements = list(enumerate_signed_permutations(spec.n, spec.cap))
        return exhaustive_mean(elements, f, workers)
    if spec.kind == KIND_SAMPLED:
        rng = np.random.default_rng(spec.seed)
        elements = [
            sample_signed_permutation(spec.n, rng) for _ in range(spec.sample_count)
        ]
        return exhaustive_mean(elements, f, workers)
    raise ValueError("expectation_over_ensemble supports signed-permutation kinds only")


# ---------------------------------------------------------------------------
# Haar-orthogonal sampling (floating point, statistical checks only)
# ---------------------------------------------------------------------------

def haar_orthogonal_sample(n: int, rng: np.random.Generator) -> np.ndarray:
    """One Haar-distributed orthogonal matrix.

    QR of a Gaussian matrix with the R-diagonal sign correction, so the
    distribution is exactly Haar rather than merely orthogonal.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.sign(np.diag(r))
    d[d == 0] = 1.0
    return q * d


# ---------------------------------------------------------------------------
# Minor-orthogonality
# ---------------------------------------------------------------------------

@dataclass
class MinorOrthEntry:
    S: tuple[int, ...]
    T: tuple[int, ...]
    U: tuple[int, ...]
    V: tuple[int, ...]
    expected: Fraction
    observed: Fraction | float
    passed: bool

    def to_json_dict(self) -> dict:
        obs = self.observed
        return {
            "tuple": {"S": list(self.S), "T": list(self.T),
                      "U": list(self.U), "V": list(self.V)},
            "expected": str(self.expected),
            "observed": str(obs) if isinstance(obs, Fraction) else float(obs),
            "pass": self.passed,
        }


@dataclass
class MinorOrthReport:
    kind: str
    n: int
    k_max: int
    l_max: int
    exact: bool
    tuples_checked: int
    max_abs_deviation: float
    tolerance: float | None
    all_pass: bool
    sample_count: int | None = None
    entries: list[MinorOrthEntry] = field(default_factory=list)

    @property
    def failures(self) -> list[MinorOrthEntry]:
        return [e for e in self.entries if not e.passed]

    def to_json_dict(self, include_entries: bool = True) -> dict:
        out = {
            "kind": self.kind,
            "n": self.n,
            "k_max": self.k_max,
            "l_max": self.l_max,
            "exact": self.exact,
            "tuples_checked": self.tuples_checked,
            "max_abs_deviation": self.max_abs_deviation,
            "tolerance": self.tolerance,
            "all_pass": self.all_pass,
            "sample_count": self.sample_count,
            "failures": [e.to_json_dict() for e in self.failures],
        }
        if include_entries:
            out["entries"] = [e.to_json_dict() for e in self.entries]
        return out


def signed_permutation_minors(
    sp: SignedPermutation, k_max: int
) -> dict[tuple[tuple[int, ...], tuple[int, ...]], int]:
    """All nonzero minors [Q]_{S,T} with 1 <= |S| = |T| <= k_max.

    A signed permutation matrix has exactly one nonzero minor per column
    set: the row set must be the image of the column set.  The value is
    the parity of the induced pattern times the product of the signs.
    """
    out: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {}
    n = sp.n
    for k in range(1, k_max + 1):
        for cols in itertools.combinations(range(n), k):
            images = [sp.perm[j] for j in cols]
            inversions = sum(
                1
                for a in range(k)
                for b in range(a + 1, k)
                if images[a] > images[b]
            )
            val = -1 if inversions % 2 else 1
            for j in cols:
                val *= sp.signs[j]
            rows = tuple(sorted(i + 1 for i in images))
            out[(rows, tuple(j + 1 for j in cols))] = val
    return out


def _minor_orth_target(n: int, S, T, U, V) -> Fraction:
    if S == V and T == U:
        return Fraction(1, math.comb(n, len(S)))
    return Fraction(0)


def _accumulate_pair_products(elements, n, k_max, l_max):
    acc: dict[tuple, int] = {}
    for q in elements:
        minors = signed_permutation_minors(q, max(k_max, l_max))
        first = [(key, v) for key, v in minors.items() if len(key[0]) <= k_max]
        second = [(key, v) for key, v in minors.items() if len(key[0]) <= l_max]
        for (S, T), v1 in first:
            for (V, U), v2 in second:  # [Q^T]_{U,V} = [Q]_{V,U}
                key = (S, T, U, V)
                acc[key] = acc.get(key, 0) + v1 * v2
    return acc


def _exact_minor_orth_report(
    spec, k_max, l_max, tolerance, left_factor, include_entries, kind
):
    n = spec.n
    if kind == KIND_EXHAUSTIVE:
        elements = list(enumerate_signed_permutations(n, spec.cap))
        exact = True
    else:
        rng = np.random.default_rng(spec.seed)
        elements = [sample_signed_permutation(n, rng) for _ in range(spec.sample_count)]
        exact = False
    if left_factor is not None:
        elements = [left_factor.compose(q) for q in elements]
    acc = _accumulate_pair_products(elements, n, k_max, l_max)
    count = len(elements)

    entries: list[MinorOrthEntry] = []
    max_dev = 0.0
    all_pass = True
    for k in range(1, k_max + 1):
        for l in range(1, l_max + 1):
            for S in itertools.combinations(range(1, n + 1), k):
                for T in itertools.combinations(range(1, n + 1), k):
                    for U in itertools.combinations(range(1, n + 1), l):
                        for V in itertools.combinations(range(1, n + 1), l):
                            expected = _minor_orth_target(n, S, T, U, V)
                            observed = Fraction(acc.get((S, T, U, V), 0), count)
                            dev = abs(observed - expected)
                            max_dev = max(max_dev, float(dev))
                            if exact:
                                ok = observed == expected
                            else:
                                ok = float(dev) <= tolerance
                            all_pass = all_pass and ok
                            if include_entries or not ok:
                                entries.append(
                                    MinorOrthEntry(S, T, U, V, expected, observed, ok)
                                )
    return entries, max_dev, all_pass, count, exact


def verify_minor_orthogonality(
    spec: EnsembleSpec,
    k_max: int | None = None,
    l_max: int | None = None,
    tolerance: float = 0.05,
    left_factor: SignedPermutation | None = None,
    include_entries: bool = True,
) -> MinorOrthReport:
    """Check E[[R]_{S,T} [R^T]_{U,V}] against delta_{S=V} delta_{T=U} / C(n,k).

    Exhaustive kinds check every tuple for exact equality; sampled kinds
    report the maximum absolute deviation against ``tolerance``.  Minor
    sizes run from 1 to ``k_max``/``l_max`` (default n).
    """
    n = spec.n
    k_max = n if k_max is None else k_max
    l_max = n if l_max is None else l_max
    if not (1 <= k_max <= n and 1 <= l_max <= n):
        raise ValueError("k_max and l_max must lie in [1, n]")

    if spec.kind in (KIND_EXHAUSTIVE, KIND_SAMPLED):
        entries, max_dev, all_pass, count, exact = _exact_minor_orth_report(
            spec, k_max, l_max, tolerance, left_factor, include_entries, spec.kind
        )
        return MinorOrthReport(
            kind=spec.kind,
            n=n,
            k_max=k_max,
            l_max=l_max,
            exact=exact,
            tuples_checked=_tuple_count(n, k_max, l_max),
            max_abs_deviation=max_dev,
            tolerance=None if exact else tolerance,
            all_pass=all_pass,
            sample_count=None if exact else count,
            entries=entries,
        )

    # Haar kind: floating-point Monte Carlo.
    if left_factor is not None:
        raise ValueError("left_factor applies to signed-permutation kinds only")
    keys: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for k in range(1, max(k_max, l_max) + 1):
        for S in itertools.combinations(range(n), k):
            for T in itertools.combinations(range(n), k):
                keys.append((S, T))
    index = {key: i for i, key in enumerate(keys)}
    swap = np.array([index[(T, S)] for (S, T) in keys])
    rng = np.random.default_rng(spec.seed)
    acc = np.zeros((len(keys), len(keys)))
    vals = np.empty(len(keys))
    for _ in range(spec.sample_count):
        q = haar_orthogonal_sample(n, rng)
        for i, (S, T) in enumerate(keys):
            sub = q[np.ix_(S, T)]
            vals[i] = sub[0, 0] if len(S) == 1 else np.linalg.det(sub)
        acc += np.outer(vals, vals[swap])
    means = acc / spec.sample_count

    entries = []
    max_dev = 0.0
    all_pass = True
    for (S, T), i in index.items():
        if len(S) > k_max:
            continue
        for (U, V), j in index.items():
            if len(U) > l_max:
                continue
            S1 = tuple(s + 1 for s in S)
            T1 = tuple(t + 1 for t in T)
            U1 = tuple(u + 1 for u in U)
            V1 = tuple(v + 1 for v in V)
            expected = _minor_orth_target(n, S1, T1, U1, V1)
            observed = float(means[i, j])
            dev = abs(observed - float(expected))
            max_dev = max(max_dev, dev)
            ok = dev <= tolerance
            all_pass = all_pass and ok
            if include_entries or not ok:
                entries.append(MinorOrthEntry(S1, T1, U1, V1, expected, observed, ok))
    return MinorOrthReport(
        kind=spec.kind,
        n=n,
        k_max=k_max,
        l_max=l_max,
        exact=False,
        tuples_checked=_tuple_count(n, k_max, l_max),
        max_abs_deviation=max_dev,
        tolerance=tolerance,
        all_pass=all_pass,
        sample_count=spec.sample_count,
        entries=entries,
    )


def _tuple_count(n: int, k_max: int, l_max: int) -> int:
    per_k = [math.comb(n, k) ** 2 for k in range(n + 1)]
    return sum(per_k[k] for k in range(1, k_max + 1)) * sum(
        per_k[l] for l in range(1, l_max + 1)
    )
