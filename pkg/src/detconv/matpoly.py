"""Matrices with polynomial entries, minors, and the mixed discriminant.

Index sets are 1-based so the inclusion-exclusion sign bookkeeping of the
minor-of-sum expansion reads exactly like the definitions it implements.
Determinants of polynomial matrices use a division-free subset-memoized
Laplace expansion (2^n partial minors); matrices whose entries are all
constants fall back to exact fraction elimination.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .polyalg import MultiPoly, Scalar, as_fraction

RatGrid = tuple[tuple[Fraction, ...], ...]


# ---------------------------------------------------------------------------
# Rational (constant) matrix helpers, used by fast paths and oracles.
# ---------------------------------------------------------------------------

def rat_rows(grid: Iterable[Iterable]) -> RatGrid:
    rows = tuple(tuple(as_fraction(v) for v in row) for row in grid)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return rows


def rat_identity(n: int) -> RatGrid:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
        for i in range(n)
    )


def rat_zeros(rows: int, cols: int) -> RatGrid:
    return tuple(tuple(Fraction(0) for _ in range(cols)) for _ in range(rows))


def rat_add(a: RatGrid, b: RatGrid) -> RatGrid:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def rat_sub(a: RatGrid, b: RatGrid) -> RatGrid:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def rat_scale(a: RatGrid, c: Scalar) -> RatGrid:
    c = as_fraction(c)
    return tuple(tuple(c * x for x in row) for row in a)


def rat_matmul(a: RatGrid, b: RatGrid) -> RatGrid:
    if not a or not b:
        return ()
    if len(a[0]) != len(b):
        raise ValueError(f"inner dimensions differ: {len(a[0])} vs {len(b)}")
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def rat_transpose(a: RatGrid) -> RatGrid:
    return tuple(zip(*a))


def rat_det(a: RatGrid) -> Fraction:
    """Exact determinant by fraction Gaussian elimination."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant requires a square matrix")
    m = [list(row) for row in a]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det


def rat_inverse(a: RatGrid) -> RatGrid:
    """Exact inverse by Gauss-Jordan; raises on a singular matrix."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("inverse requires a square matrix")
    m = [list(row) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            raise ValueError("matrix is singular over the rationals")
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [v - f * p for v, p in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


# ---------------------------------------------------------------------------
# Index sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IndexSet:
    """Strictly increasing 1-based indices inside a fixed ambient range."""

    indices: tuple[int, ...]
    ambient: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"indices must be strictly increasing: {idx}")
        if idx and not (1 <= idx[0] and idx[-1] <= self.ambient):
            raise ValueError(f"indices {idx} outside [1, {self.ambient}]")

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    @property
    def weight(self) -> int:
        """The 1-norm: the sum of the indices."""
        return sum(self.indices)

    def complement(self) -> "IndexSet":
        members = set(self.indices)
        return IndexSet(
            tuple(i for i in range(1, self.ambient + 1) if i not in members),
            self.ambient,
        )

    def select(self, base: "IndexSet") -> "IndexSet":
        """Relabel positions through ``base``: {base[i] for i in self}."""
        if self.ambient != len(base):
            raise ValueError(
                f"position set over [{self.ambient}] cannot index a set of size {len(base)}"
            )
        return IndexSet(
            tuple(base.indices[i - 1] for i in self.indices), base.ambient
        )

    @staticmethod
    def subsets(ambient: int, k: int) -> Iterable["IndexSet"]:
        for combo in itertools.combinations(range(1, ambient + 1), k):
            yield IndexSet(combo, ambient)


def _as_index_set(value, ambient: int) -> IndexSet:
    if isinstance(value, IndexSet):
        if value.indices and value.indices[-1] > ambient:
            raise ValueError(f"index {value.indices[-1]} out of range [1, {ambient}]")
        return value
    return IndexSet(tuple(sorted(int(v) for v in value)), ambient)


# ---------------------------------------------------------------------------
# Polynomial matrices
# ---------------------------------------------------------------------------

class PolyMatrix:
    """Rectangular matrix of MultiPoly entries sharing one arity."""

    __slots__ = ("rows", "cols", "arity", "entries")

    def __init__(self, entries: Iterable[Iterable], arity: int | None = None):
        grid = [list(row) for row in entries]
        rows = len(grid)
        cols = len(grid[0]) if grid else 0
        if any(len(r) != cols for r in grid):
            raise ValueError("ragged matrix")
        if arity is None:
            for row in grid:
                for e in row:
                    if isinstance(e, MultiPoly):
                        arity = e.arity
                        break
                if arity is not None:
                    break
        if arity is None:
            raise ValueError("arity is required when no entry is a MultiPoly")
        norm = []
        for row in grid:
            out = []
            for e in row:
                if isinstance(e, MultiPoly):
                    if e.arity != arity:
                        raise ValueError(
                            f"entry arity {e.arity} differs from matrix arity {arity}"
                        )
                    out.append(e)
                else:
                    out.append(MultiPoly.constant(arity, e))
            norm.append(tuple(out))
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "entries", tuple(norm))

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    @classmethod
    def identity(cls, n: int, arity: int) -> "PolyMatrix":
        one = MultiPoly.constant(arity, 1)
        zero = MultiPoly.zero(arity)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], arity)

    @classmethod
    def zeros(cls, rows: int, cols: int, arity: int) -> "PolyMatrix":
        zero = MultiPoly.zero(arity)
        return cls([[zero] * cols for _ in range(rows)], arity)

    @classmethod
    def from_rationals(cls, grid: Iterable[Iterable], arity: int) -> "PolyMatrix":
        return cls([[as_fraction(v) for v in row] for row in grid], arity)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def entry(self, i: int, j: int) -> MultiPoly:
        return self.entries[i][j]

    def is_constant(self) -> bool:
        return all(e.is_constant for row in self.entries for e in row)

    def to_rationals(self) -> RatGrid:
        if not self.is_constant():
            raise ValueError("matrix has non-constant entries")
        return tuple(tuple(e.constant_value() for e in row) for row in self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.shape == other.shape
            and self.arity == other.arity
            and self.entries == other.entries
        )

    def __add__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")
        return PolyMatrix(
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ],
            self.arity,
        )

    def __sub__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self + other.scale(-1)

    def __matmul__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(
                f"inner dimensions differ: {self.cols} vs {other.rows}"
            )
        zero = MultiPoly.zero(self.arity)
        bt = tuple(zip(*other.entries))
        out = []
        for row in self.entries:
            out_row = []
            for col in bt:
                acc = zero
                for a, b in zip(row, col):
                    if a.is_zero or b.is_zero:
                        continue
                    acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return PolyMatrix(out, self.arity)

    def scale(self, factor) -> "PolyMatrix":
        """Multiply every entry by a scalar or a polynomial of equal arity."""
        return PolyMatrix(
            [[e * factor for e in row] for row in self.entries], self.arity
        )

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(tuple(zip(*self.entries)), self.arity)

    def submatrix(self, row_set, col_set) -> "PolyMatrix":
        S = _as_index_set(row_set, self.rows)
        T = _as_index_set(col_set, self.cols)
        return PolyMatrix(
            [[self.entries[i - 1][j - 1] for j in T] for i in S], self.arity
        )

    def determinant(self) -> MultiPoly:
        """Exact determinant; det of the empty matrix is 1."""
        if not self.is_square:
            raise ValueError(f"determinant of non-square {self.shape} matrix")
        n = self.rows
        if n == 0:
            return MultiPoly.constant(self.arity, 1)
        if self.is_constant():
            return MultiPoly.constant(self.arity, rat_det(self.to_rationals()))
        zero = MultiPoly.zero(self.arity)
        # layer[mask] = det of rows 0..popcount(mask)-1 against columns in mask
        layer: dict[int, MultiPoly] = {0: MultiPoly.constant(self.arity, 1)}
        for r in range(n):
            nxt: dict[int, MultiPoly] = {}
            row = self.entries[r]
            for mask, val in layer.items():
                if val.is_zero:
                    continue
                pos = 0
                for j in range(n):
                    bit = 1 << j
                    if mask & bit:
                        pos += 1
                        continue
                    e = row[j]
                    if e.is_zero:
                        continue
                    term = val * e
                    if (r + pos) % 2:
                        term = -term
                    key = mask | bit
                    nxt[key] = nxt.get(key, zero) + term
            layer = nxt
        return layer.get((1 << n) - 1, zero)

    def minor(self, row_set, col_set) -> MultiPoly:
        """Determinant of the selected rows/columns; empty sets give 1."""
        S = _as_index_set(row_set, self.rows)
        T = _as_index_set(col_set, self.cols)
        if len(S) != len(T):
            raise ValueError(f"minor needs |S| = |T|, got {len(S)} and {len(T)}")
        return self.submatrix(S, T).determinant()

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols}, arity={self.arity})"


def determinant(a: PolyMatrix) -> MultiPoly:
    return a.determinant()


def minor(a: PolyMatrix, row_set, col_set) -> MultiPoly:
    return a.minor(row_set, col_set)


def minor_of_product(a: PolyMatrix, b: PolyMatrix, row_set, col_set) -> MultiPoly:
    """Cauchy-Binet: [AB]_{S,T} as a sum over inner column subsets.

    Returns 0 when the requested size exceeds the inner dimension (the
    sum is empty).
    """
    if a.cols != b.rows:
        raise ValueError(f"inner dimensions differ: {a.cols} vs {b.rows}")
    S = _as_index_set(row_set, a.rows)
    T = _as_index_set(col_set, b.cols)
    if len(S) != len(T):
        raise ValueError(f"minor needs |S| = |T|, got {len(S)} and {len(T)}")
    k = len(S)
    total = MultiPoly.zero(a.arity)
    if k > a.cols:
        return total
    for U in IndexSet.subsets(a.cols, k):
        left = a.minor(S, U)
        if left.is_zero:
            continue
        right = b.minor(U, T)
        if right.is_zero:
            continue
        total = total + left * right
    return total


def minor_of_sum(a: PolyMatrix, b: PolyMatrix, row_set, col_set) -> MultiPoly:
    """[A+B]_{S,T} via the signed expansion over position subsets.

    The sum runs over all pairs of i-element position subsets U, V of
    [k]; each term carries sign (-1)^(weight of U + weight of V) and
    pairs the (U(S), V(T)) minor of A with the complementary minor of B.
    The sign uses the positions inside [k], not the relabeled indices:
    [A+B]_{S,T} = det(A[S,T] + B[S,T]), so the expansion is the
    full-size identity applied to the two k x k submatrices.
    """
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if not a.is_square:
        raise ValueError("minor-of-sum expansion requires square matrices")
    S = _as_index_set(row_set, a.rows)
    T = _as_index_set(col_set, a.cols)
    if len(S) != len(T):
        raise ValueError(f"minor needs |S| = |T|, got {len(S)} and {len(T)}")
    k = len(S)
    total = MultiPoly.zero(a.arity)
    for i in range(k + 1):
        for U in IndexSet.subsets(k, i):
            US = U.select(S)
            AU = U.complement().select(S)
            for V in IndexSet.subsets(k, i):
                VT = V.select(T)
                BV = V.complement().select(T)
                left = a.minor(US, VT)
                if left.is_zero:
                    continue
                right = b.minor(AU, BV)
                if right.is_zero:
                    continue
                term = left * right
                if (U.weight + V.weight) % 2:
                    term = -term
                total = total + term
    return total


def mixed_discriminant(*mats: PolyMatrix) -> MultiPoly:
    """Coefficient of t_1*...*t_n in det(sum_i t_i X_i).

    This is the unnormalized convention, for which D(I, ..., I) = n!.
    The result is multilinear in each slot and symmetric under
    permuting the arguments.
    """
    n = len(mats)
    if n == 0:
        raise ValueError("mixed discriminant needs at least one matrix")
    arity = mats[0].arity
    for m in mats:
        if not m.is_square or m.rows != n:
            raise ValueError(f"expected {n} square matrices of size {n}")
        if m.arity != arity:
            raise ValueError("matrices must share one arity")
    ext = arity + n
    zero = MultiPoly.zero(ext)
    entries = []
    for r in range(n):
        row = []
        for c in range(n):
            acc = zero
            for i, m in enumerate(mats):
                e = m.entries[r][c]
                if e.is_zero:
                    continue
                t_i = MultiPoly.variable(ext, arity + i)
                acc = acc + t_i * e.append_variables(n)
            row.append(acc)
        entries.append(row)
    det = PolyMatrix(entries, ext).determinant()
    ones = (1,) * n
    out = {
        exps[:arity]: c
        for exps, c in det.terms.items()
        if exps[arity:] == ones
    }
    return MultiPoly(arity, out)


def matrix_to_json_dict(m: PolyMatrix) -> dict:
    """Matrix JSON: constant entries as 'num/den', others as polynomial objects."""
    entries = []
    for row in m.entries:
        out_row = []
        for e in row:
            if e.is_constant:
                out_row.append(str(e.constant_value()))
            else:
                out_row.append(e.to_json_dict())
        entries.append(out_row)
    return {"rows": m.rows, "cols": m.cols, "entries": entries}


def matrix_from_json_dict(data, arity: int | None = None) -> PolyMatrix:
    if not isinstance(data, dict) or "entries" not in data:
        raise ValueError("matrix JSON must be an object with an 'entries' field")
    grid = []
    for i, row in enumerate(data["entries"]):
        out_row = []
        for j, e in enumerate(row):
            if isinstance(e, dict):
                out_row.append(MultiPoly.from_json_dict(e))
            else:
                try:
                    out_row.append(as_fraction(e))
                except (TypeError, ValueError) as exc:
                    raise ValueError(f"entries[{i}][{j}]: {exc}") from exc
        grid.append(out_row)
    m = PolyMatrix(grid, arity)
    declared = (data.get("rows"), data.get("cols"))
    if declared != (None, None) and declared != (m.rows, m.cols):
        raise ValueError(
            f"declared shape {declared} does not match entries {m.shape}"
        )
    return m
