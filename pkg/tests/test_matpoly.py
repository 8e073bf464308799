from fractions import Fraction

import pytest

from detconv.matpoly import (
    IndexSet,
    PolyMatrix,
    matrix_from_json_dict,
    matrix_to_json_dict,
    minor,
    minor_of_product,
    minor_of_sum,
    mixed_discriminant,
    rat_det,
    rat_inverse,
    rat_matmul,
    rat_rows,
)
from detconv.polyalg import MultiPoly

from helpers import leibniz_det, rand_int_grid, seeded


def const_mat(grid, arity=0):
    return PolyMatrix.from_rationals(grid, arity)


class TestIndexSet:
    def test_must_increase(self):
        with pytest.raises(ValueError):
            IndexSet((2, 2), 4)
        with pytest.raises(ValueError):
            IndexSet((0, 1), 4)
        with pytest.raises(ValueError):
            IndexSet((1, 5), 4)

    def test_relabel(self):
        w = IndexSet((1, 3), 3)
        s = IndexSet((2, 4, 5), 6)
        assert w.select(s).indices == (2, 5)
        assert w.weight == 4 and s.weight == 11

    def test_relabel_stays_increasing(self):
        rng = seeded(21)
        for _ in range(30):
            n = int(rng.integers(2, 7))
            k = int(rng.integers(1, n + 1))
            j = int(rng.integers(1, k + 1))
            s = IndexSet(tuple(sorted(int(v) + 1 for v in rng.choice(n, k, replace=False))), n)
            w = IndexSet(tuple(sorted(int(v) + 1 for v in rng.choice(k, j, replace=False))), k)
            out = w.select(s).indices
            assert all(b > a for a, b in zip(out, out[1:]))

    def test_parity_identity(self):
        s = IndexSet((2, 4, 5), 6)
        t = IndexSet((1, 3), 6)
        assert (-1) ** (s.weight + t.weight) == (-1) ** s.weight * (-1) ** t.weight

    def test_complement(self):
        assert IndexSet((1, 3), 4).complement().indices == (2, 4)
        assert IndexSet((), 3).complement().indices == (1, 2, 3)


class TestDeterminant:
    def test_identity(self):
        assert PolyMatrix.identity(3, 0).determinant() == MultiPoly.constant(0, 1)

    def test_symbolic_2x2(self):
        x = MultiPoly.variable(1, 0)
        m = PolyMatrix([[x, 1], [1, x]], 1)
        assert m.determinant() == x * x - 1

    def test_companion_charpoly(self):
        # companion matrix of x^2 - 1; det(xI - C) via the cofactor oracle
        x = MultiPoly.variable(1, 0)
        c = [[0, 1], [1, 0]]
        entries = [
            [x - c[i][j] if i == j else MultiPoly.constant(1, -c[i][j]) for j in range(2)]
            for i in range(2)
        ]
        m = PolyMatrix(entries, 1)
        assert m.determinant() == leibniz_det(entries) == x * x - 1

    def test_constant_matches_leibniz(self):
        rng = seeded(22)
        for _ in range(20):
            n = int(rng.integers(1, 5))
            grid = rand_int_grid(rng, n, n)
            got = const_mat(grid).determinant().constant_value()
            assert got == leibniz_det([[Fraction(v) for v in row] for row in grid])

    def test_polynomial_matches_leibniz(self):
        rng = seeded(23)
        for _ in range(10):
            n = int(rng.integers(1, 4))
            entries = [
                [
                    MultiPoly(2, {(1, 0): int(rng.integers(-2, 3)),
                                  (0, 1): int(rng.integers(-2, 3)),
                                  (0, 0): int(rng.integers(-2, 3))})
                    for _ in range(n)
                ]
                for _ in range(n)
            ]
            m = PolyMatrix(entries, 2)
            assert m.determinant() == leibniz_det(entries)

    def test_transpose_invariance_and_row_swap(self):
        rng = seeded(24)
        for _ in range(10):
            grid = rand_int_grid(rng, 3, 3)
            m = const_mat(grid)
            assert m.determinant() == m.transpose().determinant()
            swapped = const_mat((grid[1], grid[0], grid[2]))
            assert swapped.determinant() == -m.determinant()

    def test_multiplicative(self):
        rng = seeded(25)
        for _ in range(10):
            a = const_mat(rand_int_grid(rng, 3, 3))
            b = const_mat(rand_int_grid(rng, 3, 3))
            assert (a @ b).determinant() == a.determinant() * b.determinant()

    def test_non_square_raises(self):
        with pytest.raises(ValueError, match="square"):
            PolyMatrix.zeros(2, 3, 0).determinant()


class TestMinors:
    def test_empty_minor_is_one(self):
        m = const_mat([[1, 2], [3, 4]])
        assert minor(m, (), ()) == MultiPoly.constant(0, 1)

    def test_identity_minor_is_delta(self):
        ident = PolyMatrix.identity(4, 0)
        for s in IndexSet.subsets(4, 2):
            for v in IndexSet.subsets(4, 2):
                expected = 1 if s.indices == v.indices else 0
                assert minor(ident, s, v) == MultiPoly.constant(0, expected)

    def test_2x2_value(self):
        m = const_mat([[1, 2], [3, 4]])
        assert minor(m, (1, 2), (1, 2)).constant_value() == -2

    def test_size_mismatch(self):
        m = const_mat([[1, 2], [3, 4]])
        with pytest.raises(ValueError):
            minor(m, (1,), (1, 2))
        with pytest.raises(ValueError):
            minor(m, (3,), (1,))


class TestMinorExpansions:
    def test_product_1x1(self):
        a = const_mat([[1, 2]])
        b = const_mat([[3], [4]])
        assert minor_of_product(a, b, (1,), (1,)).constant_value() == 11

    def test_product_full_size_is_det_product(self):
        rng = seeded(26)
        a = const_mat(rand_int_grid(rng, 3, 3))
        b = const_mat(rand_int_grid(rng, 3, 3))
        full = (1, 2, 3)
        assert (
            minor_of_product(a, b, full, full)
            == a.determinant() * b.determinant()
        )

    def test_product_k_above_inner_dimension(self):
        a = const_mat([[1], [2]])
        b = const_mat([[3, 4]])
        assert minor_of_product(a, b, (1, 2), (1, 2)).is_zero

    def test_product_matches_direct(self):
        rng = seeded(27)
        for _ in range(25):
            m, n, p = (int(v) for v in rng.integers(1, 5, size=3))
            a = const_mat(rand_int_grid(rng, m, n))
            b = const_mat(rand_int_grid(rng, n, p))
            k = int(rng.integers(1, min(m, p) + 1))
            s = tuple(sorted(int(v) + 1 for v in rng.choice(m, k, replace=False)))
            t = tuple(sorted(int(v) + 1 for v in rng.choice(p, k, replace=False)))
            assert minor_of_product(a, b, s, t) == (a @ b).minor(s, t)

    def test_sum_1x1(self):
        x = MultiPoly.variable(2, 0)
        y = MultiPoly.variable(2, 1)
        a = PolyMatrix([[x]], 2)
        b = PolyMatrix([[y]], 2)
        assert minor_of_sum(a, b, (1,), (1,)) == x + y

    def test_sum_double_identity(self):
        ident = PolyMatrix.identity(2, 0)
        got = minor_of_sum(ident, ident, (1, 2), (1, 2))
        assert got.constant_value() == 4  # det(2 I_2); terms 1 + 2 + 1

    def test_sum_with_zero(self):
        rng = seeded(28)
        a = const_mat(rand_int_grid(rng, 3, 3))
        zero = PolyMatrix.zeros(3, 3, 0)
        assert minor_of_sum(a, zero, (1, 3), (2, 3)) == a.minor((1, 3), (2, 3))

    def test_sum_matches_direct(self):
        rng = seeded(29)
        for _ in range(25):
            n = int(rng.integers(1, 5))
            a = const_mat(rand_int_grid(rng, n, n))
            b = const_mat(rand_int_grid(rng, n, n))
            k = int(rng.integers(1, n + 1))
            s = tuple(sorted(int(v) + 1 for v in rng.choice(n, k, replace=False)))
            t = tuple(sorted(int(v) + 1 for v in rng.choice(n, k, replace=False)))
            assert minor_of_sum(a, b, s, t) == (a + b).minor(s, t)


class TestMixedDiscriminant:
    def test_identity_normalization(self):
        ident = PolyMatrix.identity(2, 0)
        assert mixed_discriminant(ident, ident).constant_value() == 2

    def test_1x1(self):
        m = const_mat([[Fraction(7, 2)]])
        assert mixed_discriminant(m).constant_value() == Fraction(7, 2)

    def test_rank_one_basis(self):
        e11 = const_mat([[1, 0], [0, 0]])
        e22 = const_mat([[0, 0], [0, 1]])
        assert mixed_discriminant(e11, e22).constant_value() == 1

    def test_multilinear(self):
        rng = seeded(30)
        mats = [const_mat(rand_int_grid(rng, 3, 3)) for _ in range(3)]
        extra = const_mat(rand_int_grid(rng, 3, 3))
        a, b = Fraction(3, 2), Fraction(-2)
        lhs = mixed_discriminant(mats[0].scale(a) + extra.scale(b), mats[1], mats[2])
        rhs = (
            mixed_discriminant(*mats).constant_value() * a
            + mixed_discriminant(extra, mats[1], mats[2]).constant_value() * b
        )
        assert lhs.constant_value() == rhs

    def test_symmetry_and_factor_rule(self):
        rng = seeded(31)
        grids = [rand_int_grid(rng, 3, 3) for _ in range(3)]
        y = rand_int_grid(rng, 3, 3)
        mats = [const_mat(g) for g in grids]
        base = mixed_discriminant(*mats).constant_value()
        assert mixed_discriminant(mats[2], mats[0], mats[1]).constant_value() == base
        scaled = [const_mat(rat_matmul(rat_rows(g), rat_rows(y))) for g in grids]
        assert (
            mixed_discriminant(*scaled).constant_value()
            == rat_det(rat_rows(y)) * base
        )

    def test_rank_one_product_formula(self):
        rng = seeded(32)
        us = rand_int_grid(rng, 3, 3)
        vs = rand_int_grid(rng, 3, 3)
        mats = [
            const_mat([[us[r][i] * vs[c][i] for c in range(3)] for r in range(3)])
            for i in range(3)
        ]
        u_det = rat_det(rat_rows([[us[r][i] for i in range(3)] for r in range(3)]))
        v_det = rat_det(rat_rows([[vs[r][i] for i in range(3)] for r in range(3)]))
        assert mixed_discriminant(*mats).constant_value() == u_det * v_det

    def test_dimension_validation(self):
        m2 = PolyMatrix.identity(2, 0)
        m3 = PolyMatrix.identity(3, 0)
        with pytest.raises(ValueError):
            mixed_discriminant(m3, m3, m2)
        with pytest.raises(ValueError):
            mixed_discriminant(m2, m2, m2)


class TestRationalHelpers:
    def test_inverse(self):
        rng = seeded(33)
        for _ in range(10):
            grid = rat_rows(rand_int_grid(rng, 3, 3))
            if rat_det(grid) == 0:
                continue
            prod = rat_matmul(grid, rat_inverse(grid))
            assert prod == rat_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        with pytest.raises(ValueError, match="singular"):
            rat_inverse(rat_rows([[1, 2], [2, 4]]))


class TestMatrixJson:
    def test_round_trip(self):
        x = MultiPoly.variable(2, 0)
        m = PolyMatrix([[x, 1], [Fraction(1, 3), x * x]], 2)
        data = matrix_to_json_dict(m)
        assert data["rows"] == 2 and data["cols"] == 2
        assert data["entries"][1][0] == "1/3"
        back = matrix_from_json_dict(data)
        assert back == m

    def test_shape_validation(self):
        with pytest.raises(ValueError, match="shape"):
            matrix_from_json_dict({"rows": 3, "cols": 1, "entries": [["1"], ["2"]]}, 0)
        with pytest.raises(ValueError, match="entries"):
            matrix_from_json_dict({"rows": 1, "cols": 1}, 0)
