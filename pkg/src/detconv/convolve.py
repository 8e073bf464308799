"""Determinantal polynomial convolutions and their brute-force oracles.

Two averaging identities drive everything here.  The local identity
averages a signed permutation out of a matrix product and is expressed
by the two-variable rescaling operator ``l_operator``; the global
identity averages a conjugation and is expressed by the coefficient-wise
``star_convolve``.  Each identity ships with an exhaustive expectation
oracle over the full signed-permutation group so equality can be checked
coefficient by coefficient, with no tolerance.

The eigenvalue, singular-value and non-Hermitian convolutions below are
all obtained by instantiating the two identities and substituting
variables, and each has a direct exhaustive oracle of its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .ensembles import (
    DEFAULT_CAP,
    SignedPermutation,
    check_cap,
    enumerate_signed_permutations,
    exhaustive_mean,
)
from .matpoly import (
    PolyMatrix,
    RatGrid,
    mixed_discriminant,
    rat_matmul,
    rat_rows,
    rat_transpose,
)
from .polyalg import MultiPoly, exp_factorial


# ---------------------------------------------------------------------------
# The two basic operators
# ---------------------------------------------------------------------------

def star_convolve(p: MultiPoly, q: MultiPoly, n: int) -> MultiPoly:
    """Coefficient-wise convolution of two degree-n homogeneous polynomials.

    Term by term: (1/n!) * p_alpha * q_alpha * alpha! * x^alpha.  Inputs
    must share arity and be homogeneous of total degree exactly n; there
    is no zero-padding of mismatched degrees.
    """
    if p.arity != q.arity:
        raise ValueError(f"arity mismatch: {p.arity} vs {q.arity}")
    if n < 0:
        raise ValueError("degree must be non-negative")
    for name, poly in (("p", p), ("q", q)):
        if not poly.is_homogeneous(n):
            raise ValueError(f"{name} is not homogeneous of degree {n}")
    inv = Fraction(1, math.factorial(n))
    out = {}
    for exps, pc in p.terms.items():
        qc = q.terms.get(exps)
        if qc is not None:
            out[exps] = pc * qc * exp_factorial(exps) * inv
    return MultiPoly(p.arity, out)


def _l_coefficient(m: int, i: int, j: int) -> Fraction:
    if i + j > m:
        return Fraction(0)
    return Fraction(
        math.factorial(m - i) * math.factorial(m - j),
        math.factorial(m) * math.factorial(m - i - j),
    )


def l_operator(p: MultiPoly, m: int, x_index: int = 0, y_index: int = 1) -> MultiPoly:
    """Rescale each monomial by the local-dimension-m factor in two variables.

    x^i y^j picks up (m-i)!(m-j)! / (m!(m-i-j)!) when i+j <= m and is
    dropped otherwise; all other variables ride along untouched.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if x_index == y_index:
        raise ValueError("x_index and y_index must differ")
    for idx in (x_index, y_index):
        if not 0 <= idx < p.arity:
            raise ValueError(f"variable index {idx} out of range for arity {p.arity}")
    out = {}
    for exps, c in p.terms.items():
        w = _l_coefficient(m, exps[x_index], exps[y_index])
        if w:
            out[exps] = c * w
    return MultiPoly(p.arity, out)


def l_alternating_sum(m: int, a: int, b: int) -> Fraction:
    """Inclusion-exclusion form of the l_operator coefficient.

    sum_j (-1)^j (m-j)!/(m! j!) * a!/(a-j)! * b!/(b-j)!, which must equal
    _l_coefficient(m, a, b) whenever a + b <= m.
    """
    total = Fraction(0)
    for j in range(min(a, b) + 1):
        term = Fraction(math.factorial(m - j), math.factorial(m) * math.factorial(j))
        term *= math.perm(a, j) * math.perm(b, j)
        total += term if j % 2 == 0 else -term
    return total


# ---------------------------------------------------------------------------
# Local identity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalInstance:
    """Data for one local-averaging identity check.

    ``u`` is d x d, ``a1``/``a2`` are d x m, ``b1``/``b2`` are m x d, all
    over one arity.  Entries may involve any variables except the two
    distinguished ones at ``x_index`` and ``y_index``.
    """

    u: PolyMatrix
    a1: PolyMatrix
    a2: PolyMatrix
    b1: PolyMatrix
    b2: PolyMatrix
    x_index: int = 0
    y_index: int = 1

    def __post_init__(self):
        d, m = self.a1.shape
        if self.u.shape != (d, d):
            raise ValueError(f"u must be {d}x{d}, got {self.u.shape}")
        if self.a2.shape != (d, m):
            raise ValueError(f"a2 must be {d}x{m}, got {self.a2.shape}")
        if self.b1.shape != (m, d) or self.b2.shape != (m, d):
            raise ValueError(f"b1, b2 must be {m}x{d}")
        arity = self.u.arity
        mats = (self.u, self.a1, self.a2, self.b1, self.b2)
        if any(mat.arity != arity for mat in mats):
            raise ValueError("all matrices must share one arity")
        if self.x_index == self.y_index or not (
            0 <= self.x_index < arity and 0 <= self.y_index < arity
        ):
            raise ValueError("x_index/y_index invalid for this arity")
        for mat in mats:
            for row in mat.entries:
                for e in row:
                    for exps in e.terms:
                        if exps[self.x_index] or exps[self.y_index]:
                            raise ValueError(
                                "matrix entries must not contain the two "
                                "distinguished variables"
                            )

    @property
    def d(self) -> int:
        return self.a1.rows

    @property
    def m(self) -> int:
        return self.a1.cols

    @property
    def arity(self) -> int:
        return self.u.arity


def local_convolution(inst: LocalInstance) -> MultiPoly:
    """Formula side: l_operator applied to det(U + x A1 B1 + y A2 B2)."""
    x = MultiPoly.variable(inst.arity, inst.x_index)
    y = MultiPoly.variable(inst.arity, inst.y_index)
    base = inst.u + (inst.a1 @ inst.b1).scale(x) + (inst.a2 @ inst.b2).scale(y)
    return l_operator(base.determinant(), inst.m, inst.x_index, inst.y_index)


def local_expectation_oracle(
    inst: LocalInstance, cap: int = DEFAULT_CAP, workers: int = 1
) -> MultiPoly:
    """Brute-force side: average det(U + (xA1 + yA2 R)(B1 + R^T B2)) over
    every signed permutation R of the inner dimension."""
    arity = inst.arity
    x = MultiPoly.variable(arity, inst.x_index)
    y = MultiPoly.variable(arity, inst.y_index)
    xa1 = inst.a1.scale(x)
    ya2 = inst.a2.scale(y)
    elements = list(enumerate_signed_permutations(inst.m, cap))

    def value(r: SignedPermutation) -> MultiPoly:
        rp = r.to_polymatrix(arity)
        left = xa1 + (ya2 @ rp)
        right = inst.b1 + (rp.transpose() @ inst.b2)
        return (inst.u + left @ right).determinant()

    return exhaustive_mean(elements, value, workers)


# ---------------------------------------------------------------------------
# Global identity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GlobalInstance:
    """n pairs of square rational matrices of one size d."""

    a_mats: tuple[RatGrid, ...]
    b_mats: tuple[RatGrid, ...]

    def __post_init__(self):
        a = tuple(rat_rows(m) for m in self.a_mats)
        b = tuple(rat_rows(m) for m in self.b_mats)
        object.__setattr__(self, "a_mats", a)
        object.__setattr__(self, "b_mats", b)
        if not a or len(a) != len(b):
            raise ValueError("need equally many A and B matrices, at least one")
        d = len(a[0])
        for m in a + b:
            if len(m) != d or any(len(row) != d for row in m):
                raise ValueError(f"all matrices must be {d}x{d}")

    @property
    def n(self) -> int:
        return len(self.a_mats)

    @property
    def d(self) -> int:
        return len(self.a_mats[0])


def _linear_pencil(mats: Sequence[RatGrid], arity: int) -> PolyMatrix:
    """Matrix whose (r, c) entry is sum_i x_i * mats[i][r][c]."""
    d = len(mats[0])
    entries = []
    for r in range(d):
        row = []
        for c in range(d):
            terms = {}
            for i, m in enumerate(mats):
                v = m[r][c]
                if v:
                    exps = tuple(1 if k == i else 0 for k in range(arity))
                    terms[exps] = v
            row.append(MultiPoly(arity, terms))
        entries.append(row)
    return PolyMatrix(entries, arity)


def global_convolution(inst: GlobalInstance) -> MultiPoly:
    """Formula side: star-convolve det(sum x_i A_i) with det(sum x_i B_i)."""
    p = _linear_pencil(inst.a_mats, inst.n).determinant()
    q = _linear_pencil(inst.b_mats, inst.n).determinant()
    return star_convolve(p, q, inst.d)


def global_expectation_oracle(
    inst: GlobalInstance, cap: int = DEFAULT_CAP, workers: int = 1
) -> MultiPoly:
    """Brute-force side: average det(sum_i x_i A_i Q B_i Q^T) over every
    signed permutation Q of size d."""
    elements = list(enumerate_signed_permutations(inst.d, cap))

    def value(q: SignedPermutation) -> MultiPoly:
        mats = [
            rat_matmul(a, q.conjugate(b))
            for a, b in zip(inst.a_mats, inst.b_mats)
        ]
        return _linear_pencil(mats, inst.n).determinant()

    return exhaustive_mean(elements, value, workers)


def mixed_discriminant_identity_check(
    a_mats: Sequence, b_mats: Sequence, cap: int = DEFAULT_CAP, workers: int = 1
) -> dict:
    """Check E_Q[D(A_1 Q B_1 Q^T, ...)] = D(A)D(B)/n! exactly.

    Uses the unnormalized mixed discriminant (D(I,...,I) = n!).  The
    report carries both sides and, should they ever disagree, their
    ratio, so a systematic constant factor would be visible rather than
    silently absorbed.
    """
    a = [rat_rows(m) for m in a_mats]
    b = [rat_rows(m) for m in b_mats]
    n = len(a)
    if n == 0 or len(b) != n:
        raise ValueError("need equally many A and B matrices, at least one")

    def disc(mats: Sequence[RatGrid]) -> Fraction:
        polys = [PolyMatrix.from_rationals(m, 0) for m in mats]
        return mixed_discriminant(*polys).constant_value()

    elements = list(enumerate_signed_permutations(n, cap))

    def value(q: SignedPermutation) -> Fraction:
        return disc([rat_matmul(ai, q.conjugate(bi)) for ai, bi in zip(a, b)])

    lhs = exhaustive_mean(elements, value, workers)
    rhs = Fraction(1, math.factorial(n)) * disc(a) * disc(b)
    report = {"n": n, "lhs": lhs, "rhs": rhs, "equal": lhs == rhs}
    if lhs != rhs and rhs != 0:
        report["ratio"] = lhs / rhs
    return report


# ---------------------------------------------------------------------------
# Univariate eigenvalue convolutions
# ---------------------------------------------------------------------------

def companion_matrix(p: MultiPoly) -> RatGrid:
    """Companion matrix of a monic univariate polynomial."""
    coeffs = _monic_coefficients(p)
    d = len(coeffs) - 1
    return tuple(
        tuple(
            Fraction(1) if i == j + 1 else (-coeffs[i] if j == d - 1 else Fraction(0))
            for j in range(d)
        )
        for i in range(d)
    )


def _monic_coefficients(p: MultiPoly) -> list[Fraction]:
    """Coefficients c_0..c_d of a monic univariate polynomial, c_d = 1."""
    if p.arity != 1:
        raise ValueError("expected a univariate polynomial")
    d = p.total_degree()
    if d < 1:
        raise ValueError("degree must be at least 1")
    coeffs = [p.coefficient((i,)) for i in range(d + 1)]
    if coeffs[d] != 1:
        raise ValueError("polynomial must be monic")
    return coeffs


def charpoly(a: RatGrid) -> MultiPoly:
    """det(xI - A) as a univariate polynomial."""
    a = rat_rows(a)
    d = len(a)
    x = MultiPoly.variable(1, 0)
    entries = [
        [x - a[i][j] if i == j else MultiPoly.constant(1, -a[i][j]) for j in range(d)]
        for i in range(d)
    ]
    return PolyMatrix(entries, 1).determinant()


def _realization_pair(p, q, realization):
    dp = p.total_degree()
    dq = q.total_degree()
    if dp != dq:
        raise ValueError(f"degree mismatch: {dp} vs {dq}")
    _monic_coefficients(p)
    _monic_coefficients(q)
    if realization is None:
        return companion_matrix(p), companion_matrix(q), dp
    a, b = (rat_rows(m) for m in realization)
    if charpoly(a) != p or charpoly(b) != q:
        raise ValueError("realization matrices do not have the requested "
                         "characteristic polynomials")
    return a, b, dp


def _pencil3(diag, mat_y, mat_z) -> PolyMatrix:
    """Matrix with entries diag*x*I + y*mat_y + z*mat_z over (x, y, z)."""
    d = len(mat_y)
    entries = []
    for i in range(d):
        row = []
        for j in range(d):
            terms = {}
            if i == j and diag:
                terms[(1, 0, 0)] = Fraction(diag)
            if mat_y[i][j]:
                terms[(0, 1, 0)] = Fraction(mat_y[i][j])
            if mat_z[i][j]:
                terms[(0, 0, 1)] = Fraction(mat_z[i][j])
            row.append(MultiPoly(3, terms))
        entries.append(row)
    return PolyMatrix(entries, 3)


def _restrict_to_x(p3: MultiPoly, values: Sequence[int]) -> MultiPoly:
    """Substitute constants for every variable except the first."""
    x = MultiPoly.variable(1, 0)
    assignment = [x] + [Fraction(v) for v in values]
    return p3.substitute(assignment)


def boxplus(p: MultiPoly, q: MultiPoly, realization=None) -> MultiPoly:
    """Additive eigenvalue convolution of two monic polynomials.

    Computed by star-convolving det(xI + yA + zI) with det(xI + yI + zB)
    and evaluating at y = z = -1.  The result depends only on p and q,
    not on the realization, so the companion matrices are used by
    default and arbitrary monic rational inputs are supported.
    """
    a, b, d = _realization_pair(p, q, realization)
    ident = rat_rows([[1 if i == j else 0 for j in range(d)] for i in range(d)])
    g = _pencil3(1, a, ident).determinant()
    h = _pencil3(1, ident, b).determinant()
    return _restrict_to_x(star_convolve(g, h, d), (-1, -1))


def boxplus_oracle(
    p: MultiPoly, q: MultiPoly, realization=None, cap: int = DEFAULT_CAP,
    workers: int = 1,
) -> MultiPoly:
    """E_Q[det(xI - A - Q B Q^T)] over the full signed-permutation group."""
    a, b, d = _realization_pair(p, q, realization)
    elements = list(enumerate_signed_permutations(d, cap))

    def value(qmat: SignedPermutation) -> MultiPoly:
        conj = qmat.conjugate(b)
        shifted = tuple(
            tuple(a[i][j] + conj[i][j] for j in range(d)) for i in range(d)
        )
        return charpoly(shifted)

    return exhaustive_mean(elements, value, workers)


def boxtimes(p: MultiPoly, q: MultiPoly, realization=None) -> MultiPoly:
    """Multiplicative eigenvalue convolution of two monic polynomials.

    Star of det(xI + yA) and det(xI + yB), evaluated at y = -1.
    """
    a, b, d = _realization_pair(p, q, realization)

    def pencil2(mat):
        entries = []
        for i in range(d):
            row = []
            for j in range(d):
                terms = {}
                if i == j:
                    terms[(1, 0)] = Fraction(1)
                if mat[i][j]:
                    terms[(0, 1)] = Fraction(mat[i][j])
                row.append(MultiPoly(2, terms))
            entries.append(row)
        return PolyMatrix(entries, 2)

    g = pencil2(a).determinant()
    h = pencil2(b).determinant()
    s = star_convolve(g, h, d)
    return s.substitute([MultiPoly.variable(1, 0), Fraction(-1)])


def boxtimes_oracle(
    p: MultiPoly, q: MultiPoly, realization=None, cap: int = DEFAULT_CAP,
    workers: int = 1,
) -> MultiPoly:
    """E_Q[det(xI - A Q B Q^T)] over the full signed-permutation group."""
    a, b, d = _realization_pair(p, q, realization)
    elements = list(enumerate_signed_permutations(d, cap))

    def value(qmat: SignedPermutation) -> MultiPoly:
        return charpoly(rat_matmul(a, qmat.conjugate(b)))

    return exhaustive_mean(elements, value, workers)


# ---------------------------------------------------------------------------
# Rectangular singular-value convolution
# ---------------------------------------------------------------------------

def rect_boxplus(a, b) -> MultiPoly:
    """Additive singular-value convolution of two d x (n+d) matrices.

    Pipeline: the local identity removes the wide ensemble, leaving the
    two-variable rescaling with local dimension n+d; the additive method
    then removes the conjugation; finally y = z = -1 recovers
    E[det(xI - (A + QBR)(A + QBR)^T)].
    """
    a = rat_rows(a)
    b = rat_rows(b)
    d = len(a)
    if len(b) != d or (a and b and len(a[0]) != len(b[0])):
        raise ValueError("matrices must share one shape")
    width = len(a[0]) if a else 0
    if width < d:
        raise ValueError("expected at least as many columns as rows")
    aat = rat_matmul(a, rat_transpose(a))
    bbt = rat_matmul(b, rat_transpose(b))
    ident = tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(d))
        for i in range(d)
    )
    g = _pencil3(1, aat, ident).determinant()
    h = _pencil3(1, ident, bbt).determinant()
    s = l_operator(star_convolve(g, h, d), width, 1, 2)
    return _restrict_to_x(s, (-1, -1))


def rect_boxplus_oracle(
    a, b, cap: int = DEFAULT_CAP, workers: int = 1
) -> MultiPoly:
    """Direct double average of det(xI - (A + QBR)(A + QBR)^T) over both
    signed-permutation groups (Q of size d, R of size n+d)."""
    a = rat_rows(a)
    b = rat_rows(b)
    d = len(a)
    width = len(a[0]) if a else 0
    check_cap(d, cap)
    check_cap(width, cap)
    outer = list(enumerate_signed_permutations(d, cap))
    inner = list(enumerate_signed_permutations(width, cap))

    def value_q(qmat: SignedPermutation) -> MultiPoly:
        qb = qmat.left_mul(b)
        total = None
        for rmat in inner:
            c = rat_add_grids(a, rmat.right_mul(qb))
            poly = charpoly(rat_matmul(c, rat_transpose(c)))
            total = poly if total is None else total + poly
        return total * Fraction(1, len(inner))

    return exhaustive_mean(outer, value_q, workers)


def rat_add_grids(x: RatGrid, y: RatGrid) -> RatGrid:
    return tuple(tuple(p + q for p, q in zip(rx, ry)) for rx, ry in zip(x, y))


# ---------------------------------------------------------------------------
# Non-Hermitian multiplicative convolution
# ---------------------------------------------------------------------------

def _pencil5(mats: Sequence[RatGrid]) -> PolyMatrix:
    """Five-variable pencil sum_i v_i * mats[i] with v = (x, a, b, c, d)."""
    d = len(mats[0])
    entries = []
    for r in range(d):
        row = []
        for c in range(d):
            terms = {}
            for i, m in enumerate(mats):
                if m[r][c]:
                    exps = tuple(1 if k == i else 0 for k in range(5))
                    terms[exps] = Fraction(m[r][c])
            row.append(MultiPoly(5, terms))
        entries.append(row)
    return PolyMatrix(entries, 5)


def nonhermitian_mult(h1, k1, h2, k2) -> MultiPoly:
    """Multiplicative convolution preserving the real/imaginary split.

    Builds the five-variable polynomials pairing (I, H1, H1, K1, K1)
    against (I, H2, K2, H2, K2), star-convolves them, and substitutes
    (x, y, z, z, -y) so the result collects H1QH2 - K1QK2 against y and
    H1QK2 + K1QH2 against z.  Agrees with the direct conjugation
    average, exactly.
    """
    h1, k1, h2, k2 = (rat_rows(m) for m in (h1, k1, h2, k2))
    d = len(h1)
    for m in (k1, h2, k2):
        if len(m) != d or any(len(row) != d for row in m):
            raise ValueError("all four matrices must be square of one size")
    ident = tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(d))
        for i in range(d)
    )
    q1 = _pencil5([ident, h1, h1, k1, k1]).determinant()
    q2 = _pencil5([ident, h2, k2, h2, k2]).determinant()
    s = star_convolve(q1, q2, d)
    x = MultiPoly.variable(3, 0)
    y = MultiPoly.variable(3, 1)
    z = MultiPoly.variable(3, 2)
    return s.substitute([x, y, z, z, -y])


def nonhermitian_oracle(
    h1, k1, h2, k2, cap: int = DEFAULT_CAP, workers: int = 1
) -> MultiPoly:
    """Direct average of det(xI + y(H1QH2Q^T - K1QK2Q^T)
    + z(H1QK2Q^T + K1QH2Q^T)) over the signed-permutation group."""
    h1, k1, h2, k2 = (rat_rows(m) for m in (h1, k1, h2, k2))
    d = len(h1)
    elements = list(enumerate_signed_permutations(d, cap))

    def value(q: SignedPermutation) -> MultiPoly:
        ch2 = q.conjugate(h2)
        ck2 = q.conjugate(k2)
        ymat = rat_sub_grids(rat_matmul(h1, ch2), rat_matmul(k1, ck2))
        zmat = rat_add_grids(rat_matmul(h1, ck2), rat_matmul(k1, ch2))
        return _pencil3(1, ymat, zmat).determinant()

    return exhaustive_mean(elements, value, workers)


def rat_sub_grids(x: RatGrid, y: RatGrid) -> RatGrid:
    return tuple(tuple(p - q for p, q in zip(rx, ry)) for rx, ry in zip(x, y))
