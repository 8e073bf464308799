"""Generalized-singular-value characteristic polynomials and their convolution.

For a stacked pair (A1 over A2) with m columns, the trivariate polynomial
det(xI + y A1^T A1 + z A2^T A2) encodes the generalized singular values.
Expanding it against the factorial basis
x^(m-j-k)/(m-j-k)! * y^j/(s-j)! * z^k/(t-k)! gives a coefficient grid on
which the unitarily invariant sum of two pairs acts as a plain discrete
convolution (normalized by m! s! t!).  The same grids have an equivalent
life as bivariate differential operators, and both routes are implemented
so they can be checked against each other and against the exhaustive
triple-ensemble average.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .ensembles import (
    DEFAULT_CAP,
    check_cap,
    enumerate_signed_permutations,
    exhaustive_mean,
)
from .matpoly import (
    PolyMatrix,
    RatGrid,
    rat_add,
    rat_det,
    rat_inverse,
    rat_matmul,
    rat_rows,
    rat_transpose,
)
from .polyalg import MultiPoly, format_rational, parse_rational


@dataclass(frozen=True)
class GsvcpInstance:
    """A stacked pair of rational blocks sharing one column count."""

    a1: RatGrid
    a2: RatGrid

    def __post_init__(self):
        a1 = rat_rows(self.a1)
        a2 = rat_rows(self.a2)
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)
        if not a1 or not a2:
            raise ValueError("both blocks must be non-empty")
        if len(a1[0]) != len(a2[0]):
            raise ValueError(
                f"blocks must share a column count: {len(a1[0])} vs {len(a2[0])}"
            )

    @property
    def m(self) -> int:
        return len(self.a1[0])

    @property
    def s_dim(self) -> int:
        return len(self.a1)

    @property
    def t_dim(self) -> int:
        return len(self.a2)


def _gram_pencil(g1: RatGrid, g2: RatGrid) -> PolyMatrix:
    m = len(g1)
    entries = []
    for i in range(m):
        row = []
        for j in range(m):
            terms = {}
            if i == j:
                terms[(1, 0, 0)] = Fraction(1)
            if g1[i][j]:
                terms[(0, 1, 0)] = g1[i][j]
            if g2[i][j]:
                terms[(0, 0, 1)] = g2[i][j]
            row.append(MultiPoly(3, terms))
        entries.append(row)
    return PolyMatrix(entries, 3)


def gsvcp(inst: GsvcpInstance) -> MultiPoly:
    """det(xI + y A1^T A1 + z A2^T A2), homogeneous of degree m in (x,y,z)."""
    g1 = rat_matmul(rat_transpose(inst.a1), inst.a1)
    g2 = rat_matmul(rat_transpose(inst.a2), inst.a2)
    return _gram_pencil(g1, g2).determinant()


@dataclass(frozen=True)
class GsvcpCoeffs:
    """Normalized coefficient grid of a GSVCP.

    grid[j][k] is defined for 0 <= j <= s_dim, 0 <= k <= t_dim and is
    zero whenever j + k > m.  Reconstruction multiplies grid[j][k] by
    x^(m-j-k)/(m-j-k)! * y^j/(s-j)! * z^k/(t-k)! and sums.
    """

    m: int
    s_dim: int
    t_dim: int
    grid: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        grid = tuple(tuple(Fraction(v) for v in row) for row in self.grid)
        object.__setattr__(self, "grid", grid)
        if len(grid) != self.s_dim + 1 or any(
            len(row) != self.t_dim + 1 for row in grid
        ):
            raise ValueError(
                f"grid must be {self.s_dim + 1} x {self.t_dim + 1}"
            )
        for j, row in enumerate(grid):
            for k, v in enumerate(row):
                if j + k > self.m and v:
                    raise ValueError(
                        f"grid[{j}][{k}] must be zero beyond total degree {self.m}"
                    )

    def dims(self) -> tuple[int, int, int]:
        return (self.m, self.s_dim, self.t_dim)

    def reconstruct(self) -> MultiPoly:
        """The GSVCP this grid encodes."""
        terms = {}
        for j, row in enumerate(self.grid):
            for k, v in enumerate(row):
                if not v or j + k > self.m:
                    continue
                denom = (
                    math.factorial(self.m - j - k)
                    * math.factorial(self.s_dim - j)
                    * math.factorial(self.t_dim - k)
                )
                terms[(self.m - j - k, j, k)] = v / denom
        return MultiPoly(3, terms)

    def operator_poly(self) -> MultiPoly:
        """Bivariate operator form: see ``gsvcp_operator_form``."""
        norm = Fraction(
            1,
            math.factorial(self.m)
            * math.factorial(self.s_dim)
            * math.factorial(self.t_dim),
        )
        terms = {
            (j, k): v * norm
            for j, row in enumerate(self.grid)
            for k, v in enumerate(row)
            if v
        }
        return MultiPoly(2, terms)

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "s": self.s_dim,
            "t": self.t_dim,
            "grid": [[format_rational(v) for v in row] for row in self.grid],
        }

    @classmethod
    def from_json_dict(cls, data) -> "GsvcpCoeffs":
        for key in ("m", "s", "t", "grid"):
            if key not in data:
                raise ValueError(f"coefficient-grid JSON is missing {key!r}")
        grid = tuple(
            tuple(parse_rational(str(v)) for v in row) for row in data["grid"]
        )
        return cls(int(data["m"]), int(data["s"]), int(data["t"]), grid)


def extract_gsvcp_coeffs(p: MultiPoly, m: int, s_dim: int, t_dim: int) -> GsvcpCoeffs:
    """Read the normalized coefficient grid off a GSVCP.

    Rejects polynomials supported outside the admissible range
    (j <= s, k <= t, j + k <= m, x-degree m - j - k).
    """
    if p.arity != 3:
        raise ValueError("expected a polynomial in (x, y, z)")
    grid = [[Fraction(0)] * (t_dim + 1) for _ in range(s_dim + 1)]
    for (a, j, k), coeff in p.terms.items():
        if j > s_dim or k > t_dim or j + k > m or a != m - j - k:
            raise ValueError(
                f"monomial x^{a} y^{j} z^{k} lies outside the admissible "
                f"support for (m, s, t) = ({m}, {s_dim}, {t_dim})"
            )
        grid[j][k] = coeff * (
            math.factorial(m - j - k)
            * math.factorial(s_dim - j)
            * math.factorial(t_dim - k)
        )
    return GsvcpCoeffs(m, s_dim, t_dim, tuple(tuple(r) for r in grid))


def gsvd_convolve(p: GsvcpCoeffs, q: GsvcpCoeffs) -> GsvcpCoeffs:
    """Coefficient-grid convolution of two GSVCPs of matching dimensions.

    r[j][k] = sum_{beta <= j, delta <= k} p[beta][delta] q[j-beta][k-delta]
    divided by m! s! t!, and zero outside the admissible range.
    """
    if p.dims() != q.dims():
        raise ValueError(f"dimension mismatch: {p.dims()} vs {q.dims()}")
    m, s_dim, t_dim = p.dims()
    norm = Fraction(
        1, math.factorial(m) * math.factorial(s_dim) * math.factorial(t_dim)
    )
    grid = []
    for j in range(s_dim + 1):
        row = []
        for k in range(t_dim + 1):
            if j + k > m:
                row.append(Fraction(0))
                continue
            total = Fraction(0)
            for beta in range(j + 1):
                for delta in range(k + 1):
                    pv = p.grid[beta][delta]
                    if pv:
                        total += pv * q.grid[j - beta][k - delta]
            row.append(total * norm)
        grid.append(tuple(row))
    return GsvcpCoeffs(m, s_dim, t_dim, tuple(grid))


def gsvd_expectation_oracle(
    m_inst: GsvcpInstance,
    n_inst: GsvcpInstance,
    cap: int = DEFAULT_CAP,
    workers: int = 1,
) -> GsvcpCoeffs:
    """Exhaustive average of the GSVCP grid of W = M + (R1 N1 Q; R2 N2 Q).

    Averages det(xI + y W1^T W1 + z W2^T W2) over every triple of
    independent signed permutations (R1 of size s, R2 of size t, Q of
    size m) and extracts the grid of the averaged polynomial (grid
    extraction is linear, so this equals the averaged grid).
    """
    if (m_inst.m, m_inst.s_dim, m_inst.t_dim) != (
        n_inst.m,
        n_inst.s_dim,
        n_inst.t_dim,
    ):
        raise ValueError("instances must share (m, s, t) dimensions")
    m, s_dim, t_dim = m_inst.m, m_inst.s_dim, m_inst.t_dim
    for size in (s_dim, t_dim, m):
        check_cap(size, cap)
    r1s = list(enumerate_signed_permutations(s_dim, cap))
    r2s = list(enumerate_signed_permutations(t_dim, cap))
    qs = list(enumerate_signed_permutations(m, cap))
    triples = list(itertools.product(r1s, r2s, qs))

    def value(triple) -> MultiPoly:
        r1, r2, q = triple
        n1q = q.right_mul(n_inst.a1)
        n2q = q.right_mul(n_inst.a2)
        w1 = rat_add(m_inst.a1, r1.left_mul(n1q))
        w2 = rat_add(m_inst.a2, r2.left_mul(n2q))
        return gsvcp(GsvcpInstance(w1, w2))

    mean_poly = exhaustive_mean(triples, value, workers)
    return extract_gsvcp_coeffs(mean_poly, m, s_dim, t_dim)


# ---------------------------------------------------------------------------
# Differential-operator form
# ---------------------------------------------------------------------------

def gsvcp_operator_form(p: GsvcpCoeffs) -> MultiPoly:
    """The bivariate polynomial P with
    P(d_x d_y, d_x d_z){x^m y^s z^t} = y^s z^t p(x, 1/y, 1/z)."""
    return p.operator_poly()


def apply_operator_poly(op: MultiPoly, m: int, s_dim: int, t_dim: int) -> MultiPoly:
    """Apply P(d_x d_y, d_x d_z) to the monomial x^m y^s z^t.

    Performed with literal formal derivatives (not the closed-form
    factorials), so it is an independent route to the same polynomial.
    """
    if op.arity != 2:
        raise ValueError("operator polynomial must be bivariate")
    base = MultiPoly.monomial(3, (m, s_dim, t_dim))
    result = MultiPoly.zero(3)
    for (j, k), coeff in op.terms.items():
        term = base.partial_derivative(0, j + k)
        term = term.partial_derivative(1, j)
        term = term.partial_derivative(2, k)
        if not term.is_zero:
            result = result + term * coeff
    return result


def reciprocal_form(p: MultiPoly, m: int, s_dim: int, t_dim: int) -> MultiPoly:
    """y^s z^t p(x, 1/y, 1/z) for a GSVCP-supported polynomial."""
    if p.arity != 3:
        raise ValueError("expected a polynomial in (x, y, z)")
    terms = {}
    for (a, j, k), coeff in p.terms.items():
        if j > s_dim or k > t_dim:
            raise ValueError(
                f"monomial y^{j} z^{k} exceeds block dimensions ({s_dim}, {t_dim})"
            )
        terms[(a, s_dim - j, t_dim - k)] = coeff
    return MultiPoly(3, terms)


# ---------------------------------------------------------------------------
# Determinant identities
# ---------------------------------------------------------------------------

def gsvd_charpoly_identity_check(w1, w2) -> dict:
    """Check det(xI - (W1+W2)^{-1} W1) = det((W1+W2)^{-1}) det((x-1)W1 + xW2).

    The left side is the characteristic polynomial of the similarity
    representative of the square-root-symmetrized product, computed via
    an explicit exact inverse; the right side runs through a separate
    determinant.  Requires W1 + W2 invertible over the rationals.
    """
    w1 = rat_rows(w1)
    w2 = rat_rows(w2)
    m = len(w1)
    if len(w2) != m or any(len(r) != m for r in w1) or any(len(r) != m for r in w2):
        raise ValueError("W1 and W2 must be square matrices of one size")
    total = rat_add(w1, w2)
    det_total = rat_det(total)
    if det_total == 0:
        raise ValueError("W1 + W2 is singular over the rationals")
    k = rat_matmul(rat_inverse(total), w1)
    x = MultiPoly.variable(1, 0)
    lhs = PolyMatrix(
        [
            [x - k[i][j] if i == j else MultiPoly.constant(1, -k[i][j]) for j in range(m)]
            for i in range(m)
        ],
        1,
    ).determinant()
    pencil = PolyMatrix(
        [
            [
                MultiPoly(
                    1,
                    {
                        (1,): w1[i][j] + w2[i][j],
                        (0,): -w1[i][j],
                    },
                )
                for j in range(m)
            ]
            for i in range(m)
        ],
        1,
    )
    rhs = pencil.determinant() * Fraction(1, det_total)
    return {"m": m, "lhs": lhs, "rhs": rhs, "equal": lhs == rhs}


def block_determinant_identity_check(inst: GsvcpInstance) -> dict:
    """Check the bordered-block determinant model.

    y^m z^m det[[xI, A1^T, A2^T], [A1, yI, 0], [A2, 0, zI]] must equal
    y^s z^t det(xyz I - z A1^T A1 - y A2^T A2); both sides are honest
    polynomials, so the rational-function identity is checked after
    cross-multiplication.
    """
    m, s_dim, t_dim = inst.m, inst.s_dim, inst.t_dim
    a1t = rat_transpose(inst.a1)
    a2t = rat_transpose(inst.a2)
    size = m + s_dim + t_dim
    x = MultiPoly.variable(3, 0)
    y = MultiPoly.variable(3, 1)
    z = MultiPoly.variable(3, 2)
    zero = MultiPoly.zero(3)

    def const(v):
        return MultiPoly.constant(3, v)

    entries = []
    for i in range(size):
        row = []
        for j in range(size):
            if i < m and j < m:
                row.append(x if i == j else zero)
            elif i < m and j < m + s_dim:
                row.append(const(a1t[i][j - m]))
            elif i < m:
                row.append(const(a2t[i][j - m - s_dim]))
            elif i < m + s_dim and j < m:
                row.append(const(inst.a1[i - m][j]))
            elif i < m + s_dim and j < m + s_dim:
                row.append(y if i == j else zero)
            elif i < m + s_dim:
                row.append(zero)
            elif j < m:
                row.append(const(inst.a2[i - m - s_dim][j]))
            elif j < m + s_dim:
                row.append(zero)
            else:
                row.append(z if i == j else zero)
        entries.append(row)
    block_det = PolyMatrix(entries, 3).determinant()
    lhs = block_det * MultiPoly.monomial(3, (0, m, m))

    g1 = rat_matmul(a1t, inst.a1)
    g2 = rat_matmul(a2t, inst.a2)
    xyz = MultiPoly.monomial(3, (1, 1, 1))
    inner = PolyMatrix(
        [
            [
                (xyz if i == j else zero) - z * const(g1[i][j]) - y * const(g2[i][j])
                for j in range(m)
            ]
            for i in range(m)
        ],
        3,
    ).determinant()
    rhs = inner * MultiPoly.monomial(3, (0, s_dim, t_dim))
    return {
        "dims": (m, s_dim, t_dim),
        "lhs": lhs,
        "rhs": rhs,
        "equal": lhs == rhs,
    }
