"""Named verification suites covering every identity the library implements.

Each check pits a formula against an independent route (an exhaustive
ensemble average, a second expansion, or a hand-derived value) and
passes only on exact equality; statistical checks carry explicit
tolerances.  Reports contain no timestamps or wall times, so a given
configuration always renders to byte-identical output regardless of the
worker count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import convolve
from .convolve import (
    GlobalInstance,
    LocalInstance,
    boxplus,
    boxplus_oracle,
    boxtimes,
    boxtimes_oracle,
    companion_matrix,
    global_convolution,
    global_expectation_oracle,
    l_alternating_sum,
    local_convolution,
    local_expectation_oracle,
    mixed_discriminant_identity_check,
    nonhermitian_mult,
    nonhermitian_oracle,
    rect_boxplus,
    rect_boxplus_oracle,
)
from .ensembles import (
    DEFAULT_CAP,
    KIND_EXHAUSTIVE,
    KIND_HAAR,
    EnsembleSpec,
    verify_minor_orthogonality,
)
from .gsvd import (
    GsvcpInstance,
    apply_operator_poly,
    block_determinant_identity_check,
    extract_gsvcp_coeffs,
    gsvcp,
    gsvd_charpoly_identity_check,
    gsvd_convolve,
    gsvd_expectation_oracle,
    gsvcp_operator_form,
    reciprocal_form,
)
from .matpoly import (
    PolyMatrix,
    minor_of_product,
    minor_of_sum,
    mixed_discriminant,
    rat_det,
    rat_matmul,
    rat_rows,
)
from .permanent import (
    RankDecomposition,
    bench_lowrank_vs_ryser,
    lowrank_permanent,
    lowrank_polynomials,
    ryser_permanent,
    term_count_report,
)
from .polyalg import MultiPoly

SUITE_NAMES = (
    "minor-orth",
    "local",
    "global",
    "mixed-disc",
    "convolutions",
    "gsvd",
    "permanent",
)


@dataclass(frozen=True)
class RunConfig:
    """Seeded, capped configuration shared by every suite."""

    seed: int = 7
    exhaustive_cap: int = DEFAULT_CAP
    sample_count: int = 10_000
    worker_count: int = 1
    output_format: str = "text"

    def __post_init__(self):
        if self.exhaustive_cap < 1 or self.sample_count < 1 or self.worker_count < 1:
            raise ValueError("caps, sample counts and worker counts must be positive")
        if self.output_format not in ("text", "json"):
            raise ValueError("output_format must be 'text' or 'json'")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass
class Report:
    suite: str
    seed: int
    checks: list[CheckResult]

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self) -> str | None:
        for c in self.checks:
            if not c.passed:
                return c.name
        return None


def _rng(config: RunConfig, *tags: int) -> np.random.Generator:
    return np.random.default_rng((config.seed,) + tags)


def _ints(rng, rows, cols, lo=-3, hi=3):
    return tuple(
        tuple(int(v) for v in row) for row in rng.integers(lo, hi + 1, size=(rows, cols))
    )


def _const_matrix(grid, arity):
    return PolyMatrix.from_rationals(grid, arity)


# ---------------------------------------------------------------------------
# minor-orth suite
# ---------------------------------------------------------------------------

def suite_minor_orth(config: RunConfig) -> list[CheckResult]:
    checks = []
    for n in range(1, 5):
        spec = EnsembleSpec(KIND_EXHAUSTIVE, n, cap=config.exhaustive_cap)
        rep = verify_minor_orthogonality(spec, include_entries=False)
        checks.append(
            CheckResult(
                f"minor-orthogonality exhaustive n={n}",
                rep.all_pass,
                f"{rep.tuples_checked} tuples, exact",
            )
        )
    spec = EnsembleSpec(
        KIND_HAAR, 3, sample_count=config.sample_count, seed=config.seed
    )
    rep = verify_minor_orthogonality(
        spec, k_max=2, l_max=2, tolerance=0.05, include_entries=False
    )
    checks.append(
        CheckResult(
            "minor-orthogonality haar n=3 k<=2",
            rep.all_pass,
            f"max deviation {rep.max_abs_deviation:.4f} over "
            f"{rep.sample_count} samples (tolerance 0.05)",
        )
    )
    return checks


# ---------------------------------------------------------------------------
# local suite
# ---------------------------------------------------------------------------

def _random_local_instance(rng, d, m) -> LocalInstance:
    return LocalInstance(
        u=_const_matrix(_ints(rng, d, d), 2),
        a1=_const_matrix(_ints(rng, d, m), 2),
        a2=_const_matrix(_ints(rng, d, m), 2),
        b1=_const_matrix(_ints(rng, m, d), 2),
        b2=_const_matrix(_ints(rng, m, d), 2),
    )


def suite_local(config: RunConfig, instances: int = 10) -> list[CheckResult]:
    checks = []
    for d in (1, 2, 3):
        for m in (1, 2, 3):
            rng = _rng(config, 1, d, m)
            good = 0
            for _ in range(instances):
                inst = _random_local_instance(rng, d, m)
                formula = local_convolution(inst)
                oracle = local_expectation_oracle(
                    inst, cap=config.exhaustive_cap, workers=config.worker_count
                )
                good += formula == oracle
            checks.append(
                CheckResult(
                    f"local-theorem d={d} m={m}",
                    good == instances,
                    f"{good}/{instances} instances exact",
                )
            )
    bad = sum(
        1
        for m in range(9)
        for a in range(m + 1)
        for b in range(m - a + 1)
        if l_alternating_sum(m, a, b) != convolve._l_coefficient(m, a, b)
    )
    checks.append(
        CheckResult(
            "l-coefficient alternating-sum identity m<=8",
            bad == 0,
            "all (m, a, b) with a+b <= m <= 8 exact",
        )
    )
    return checks


# ---------------------------------------------------------------------------
# global suite
# ---------------------------------------------------------------------------

def suite_global(config: RunConfig, instances: int = 10) -> list[CheckResult]:
    checks = []
    for n in (1, 2, 3):
        for d in (1, 2, 3):
            rng = _rng(config, 2, n, d)
            good = 0
            for _ in range(instances):
                inst = GlobalInstance(
                    tuple(_ints(rng, d, d) for _ in range(n)),
                    tuple(_ints(rng, d, d) for _ in range(n)),
                )
                formula = global_convolution(inst)
                oracle = global_expectation_oracle(
                    inst, cap=config.exhaustive_cap, workers=config.worker_count
                )
                good += formula == oracle
            checks.append(
                CheckResult(
                    f"global-theorem n={n} d={d}",
                    good == instances,
                    f"{good}/{instances} instances exact",
                )
            )
    inst = GlobalInstance(
        (((1, 0), (0, 0)), ((0, 0), (0, 1))),
        (((1, 0), (0, 2)), ((3, 0), (0, 4))),
    )
    expected = MultiPoly(2, {(1, 1): 5})
    formula = global_convolution(inst)
    oracle = global_expectation_oracle(
        inst, cap=config.exhaustive_cap, workers=config.worker_count
    )
    checks.append(
        CheckResult(
            "global-theorem diagonal hand case",
            formula == expected == oracle,
            "det pair (diag(1,0),diag(0,1)) x (diag(1,2),diag(3,4)) gives 5xy",
        )
    )
    return checks


# ---------------------------------------------------------------------------
# mixed-disc suite (mixed discriminant + minor expansions)
# ---------------------------------------------------------------------------

def _rand_rat(rng) -> Fraction:
    return Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 4)))


def suite_mixed_disc(config: RunConfig) -> list[CheckResult]:
    checks = []
    n = 3

    rng = _rng(config, 3, 1)
    ok = True
    for _ in range(5):
        mats = [_const_matrix(_ints(rng, n, n), 0) for _ in range(n)]
        extra = _const_matrix(_ints(rng, n, n), 0)
        a, b = _rand_rat(rng), _rand_rat(rng)
        combo = mats[0].scale(a) + extra.scale(b)
        lhs = mixed_discriminant(combo, mats[1], mats[2]).constant_value()
        rhs = a * mixed_discriminant(*mats).constant_value() + b * mixed_discriminant(
            extra, mats[1], mats[2]
        ).constant_value()
        ok = ok and lhs == rhs
    checks.append(CheckResult("mixed-discriminant slot linearity 3x3", ok, "5 random instances"))

    rng = _rng(config, 3, 2)
    ok = True
    import itertools

    for _ in range(3):
        mats = [_const_matrix(_ints(rng, n, n), 0) for _ in range(n)]
        base = mixed_discriminant(*mats).constant_value()
        for perm in itertools.permutations(range(n)):
            ok = ok and mixed_discriminant(*(mats[i] for i in perm)).constant_value() == base
    checks.append(
        CheckResult("mixed-discriminant permutation symmetry 3x3", ok, "3 instances x 6 permutations")
    )

    rng = _rng(config, 3, 3)
    ok = True
    for _ in range(5):
        grids = [_ints(rng, n, n) for _ in range(n)]
        ymat = _ints(rng, n, n)
        right = [rat_matmul(rat_rows(g), rat_rows(ymat)) for g in grids]
        left = [rat_matmul(rat_rows(ymat), rat_rows(g)) for g in grids]
        d_plain = mixed_discriminant(*(_const_matrix(g, 0) for g in grids)).constant_value()
        d_right = mixed_discriminant(*(_const_matrix(g, 0) for g in right)).constant_value()
        d_left = mixed_discriminant(*(_const_matrix(g, 0) for g in left)).constant_value()
        target = rat_det(rat_rows(ymat)) * d_plain
        ok = ok and d_right == target == d_left
    checks.append(CheckResult("mixed-discriminant common-factor rule 3x3", ok, "5 random instances"))

    rng = _rng(config, 3, 4)
    ok = True
    for _ in range(5):
        us = _ints(rng, n, n)
        vs = _ints(rng, n, n)
        mats = []
        for i in range(n):
            mats.append(
                _const_matrix(
                    [[us[r][i] * vs[c][i] for c in range(n)] for r in range(n)], 0
                )
            )
        lhs = mixed_discriminant(*mats).constant_value()
        rhs = rat_det(rat_rows([[us[r][i] for i in range(n)] for r in range(n)])) * rat_det(
            rat_rows([[vs[r][i] for i in range(n)] for r in range(n)])
        )
        ok = ok and lhs == rhs
    checks.append(CheckResult("mixed-discriminant rank-one factorization 3x3", ok, "5 random instances"))

    ok = True
    for size in (1, 2, 3):
        ident = _const_matrix([[1 if i == j else 0 for j in range(size)] for i in range(size)], 0)
        val = mixed_discriminant(*([ident] * size)).constant_value()
        ok = ok and val == math.factorial(size)
    checks.append(
        CheckResult(
            "mixed-discriminant identity normalization", ok, "D(I,...,I) = n! for n <= 3"
        )
    )

    for size, count in ((2, 5), (3, 3)):
        rng = _rng(config, 3, 5, size)
        ok = True
        detail = "exact"
        for _ in range(count):
            rep = mixed_discriminant_identity_check(
                [_ints(rng, size, size) for _ in range(size)],
                [_ints(rng, size, size) for _ in range(size)],
                cap=config.exhaustive_cap,
                workers=config.worker_count,
            )
            ok = ok and rep["equal"]
            if not rep["equal"] and "ratio" in rep:
                detail = f"residual factor {rep['ratio']}"
        checks.append(
            CheckResult(
                f"mixed-discriminant average factorization n={size}",
                ok,
                f"{count} random instances, {detail}",
            )
        )

    rng = _rng(config, 3, 6)
    good = 0
    for _ in range(50):
        rows = int(rng.integers(1, 5))
        inner = int(rng.integers(1, 5))
        cols = int(rng.integers(1, 5))
        a = _const_matrix(_ints(rng, rows, inner), 0)
        b = _const_matrix(_ints(rng, inner, cols), 0)
        k = int(rng.integers(1, min(rows, cols) + 1))
        S = tuple(sorted(int(v) + 1 for v in rng.choice(rows, size=k, replace=False)))
        T = tuple(sorted(int(v) + 1 for v in rng.choice(cols, size=k, replace=False)))
        good += minor_of_product(a, b, S, T) == (a @ b).minor(S, T)
    checks.append(
        CheckResult("minor-of-product expansion", good == 50, f"{good}/50 random instances exact")
    )

    rng = _rng(config, 3, 7)
    good = 0
    for _ in range(50):
        size = int(rng.integers(1, 5))
        a = _const_matrix(_ints(rng, size, size), 0)
        b = _const_matrix(_ints(rng, size, size), 0)
        k = int(rng.integers(1, size + 1))
        S = tuple(sorted(int(v) + 1 for v in rng.choice(size, size=k, replace=False)))
        T = tuple(sorted(int(v) + 1 for v in rng.choice(size, size=k, replace=False)))
        good += minor_of_sum(a, b, S, T) == (a + b).minor(S, T)
    checks.append(
        CheckResult("minor-of-sum expansion", good == 50, f"{good}/50 random instances exact")
    )
    return checks


# ---------------------------------------------------------------------------
# convolutions suite
# ---------------------------------------------------------------------------

def _monic_from_roots(roots) -> MultiPoly:
    p = MultiPoly.constant(1, 1)
    x = MultiPoly.variable(1, 0)
    for r in roots:
        p = p * (x - Fraction(r))
    return p


def _random_monic(rng, degree) -> MultiPoly:
    terms = {(degree,): Fraction(1)}
    for i in range(degree):
        c = int(rng.integers(-3, 4))
        if c:
            terms[(i,)] = Fraction(c)
    return MultiPoly(1, terms)


def suite_convolutions(config: RunConfig) -> list[CheckResult]:
    checks = []
    cap = config.exhaustive_cap
    workers = config.worker_count
    x2m1 = MultiPoly(1, {(2,): 1, (0,): -1})

    expected = MultiPoly(1, {(2,): 1, (0,): -2})
    formula = boxplus(x2m1, x2m1)
    oracle = boxplus_oracle(x2m1, x2m1, cap=cap, workers=workers)
    diag = tuple(rat_rows([[1, 0], [0, -1]]) for _ in range(2))
    via_diag = boxplus(x2m1, x2m1, realization=diag)
    checks.append(
        CheckResult(
            "additive convolution (x^2-1)#(x^2-1)",
            formula == expected == oracle == via_diag,
            "formula, oracle and diagonal realization all give x^2-2",
        )
    )

    expected = MultiPoly(1, {(2,): 1, (0,): 1})
    formula = boxtimes(x2m1, x2m1)
    oracle = boxtimes_oracle(x2m1, x2m1, cap=cap, workers=workers)
    via_diag = boxtimes(x2m1, x2m1, realization=diag)
    checks.append(
        CheckResult(
            "multiplicative convolution (x^2-1)#(x^2-1)",
            formula == expected == oracle == via_diag,
            "formula, oracle and diagonal realization all give x^2+1",
        )
    )

    rng = _rng(config, 4, 1)
    ok = True
    for _ in range(5):
        p = _random_monic(rng, 3)
        zero_poly = MultiPoly(1, {(3,): 1})
        zero_mat = rat_rows([[0] * 3 for _ in range(3)])
        ok = ok and boxplus(p, zero_poly) == p
        ok = ok and boxplus(p, zero_poly, realization=(companion_matrix(p), zero_mat)) == p
        ok = ok and boxplus_oracle(p, zero_poly, cap=cap, workers=workers) == p
    checks.append(CheckResult("additive identity law q=x^d", ok, "5 random monic cubics"))

    rng = _rng(config, 4, 2)
    ok = True
    for _ in range(5):
        p = _random_monic(rng, 3)
        one = _monic_from_roots([1, 1, 1])
        ok = ok and boxtimes(p, one) == p
        ok = ok and boxtimes_oracle(p, one, cap=cap, workers=workers) == p
        xd = MultiPoly(1, {(3,): 1})
        ok = ok and boxtimes(p, xd) == xd
    checks.append(
        CheckResult("multiplicative identity and annihilator laws", ok, "5 random monic cubics")
    )

    rng = _rng(config, 4, 3)
    ok = True
    for _ in range(5):
        p = _random_monic(rng, 3)
        q = _random_monic(rng, 3)
        ok = ok and boxplus(p, q) == boxplus(q, p)
        ok = ok and boxtimes(p, q) == boxtimes(q, p)
    checks.append(CheckResult("convolution commutativity on cubics", ok, "5 random pairs"))

    rng = _rng(config, 4, 4)
    ok = True
    for _ in range(5):
        roots_p = [int(v) for v in rng.integers(-3, 4, size=3)]
        roots_q = [int(v) for v in rng.integers(-3, 4, size=3)]
        p = _monic_from_roots(roots_p)
        q = _monic_from_roots(roots_q)
        diag_real = (
            rat_rows([[roots_p[i] if i == j else 0 for j in range(3)] for i in range(3)]),
            rat_rows([[roots_q[i] if i == j else 0 for j in range(3)] for i in range(3)]),
        )
        ok = ok and boxplus(p, q) == boxplus(p, q, realization=diag_real)
        ok = ok and boxtimes(p, q) == boxtimes(p, q, realization=diag_real)
    checks.append(
        CheckResult(
            "realization independence companion vs diagonal",
            ok,
            "5 random rational-rooted cubic pairs",
        )
    )

    rng = _rng(config, 4, 5)
    ok = True
    for _ in range(5):
        a = int(rng.integers(-3, 4))
        b = int(rng.integers(-3, 4))
        expected = MultiPoly(1, {(1,): 1, (0,): -(a * a + b * b)})
        formula = rect_boxplus([[a]], [[b]])
        oracle = rect_boxplus_oracle([[a]], [[b]], cap=cap, workers=workers)
        ok = ok and formula == expected == oracle
    checks.append(
        CheckResult("rectangular convolution d=1 n=0", ok, "x - (a^2+b^2) on 5 sign pairs")
    )

    rng = _rng(config, 4, 6)
    ok = True
    for shape in ((1, 2), (1, 2), (2, 3)):
        a = _ints(rng, *shape)
        b = _ints(rng, *shape)
        ok = ok and rect_boxplus(a, b) == rect_boxplus_oracle(a, b, cap=cap, workers=workers)
    checks.append(
        CheckResult(
            "rectangular convolution pipeline vs double oracle",
            ok,
            "d=1 n=1 twice and d=2 n=1 once, exact",
        )
    )

    rng = _rng(config, 4, 7)
    ok = True
    for _ in range(5):
        h1, k1, h2, k2 = (int(v) for v in rng.integers(-3, 4, size=4))
        got = nonhermitian_mult([[h1]], [[k1]], [[h2]], [[k2]])
        expected = MultiPoly(
            3, {(1, 0, 0): 1, (0, 1, 0): h1 * h2 - k1 * k2, (0, 0, 1): h1 * k2 + k1 * h2}
        )
        ok = ok and got == expected
    checks.append(
        CheckResult("non-hermitian scalar case", ok, "x + (h1h2-k1k2)y + (h1k2+k1h2)z, 5 draws")
    )

    rng = _rng(config, 4, 8)
    ok = True
    for _ in range(3):
        h1 = _ints(rng, 2, 2)
        k1 = _ints(rng, 2, 2)
        ident = ((1, 0), (0, 1))
        zero = ((0, 0), (0, 0))
        got = nonhermitian_mult(h1, k1, ident, zero)
        expected = convolve._pencil3(1, rat_rows(h1), rat_rows(k1)).determinant()
        ok = ok and got == expected
    checks.append(
        CheckResult("non-hermitian identity partner", ok, "H2=I, K2=0 returns det(xI+yH1+zK1)")
    )

    rng = _rng(config, 4, 9)
    good = 0
    for _ in range(5):
        mats = [_ints(rng, 2, 2) for _ in range(4)]
        sub = nonhermitian_mult(*mats)
        orc = nonhermitian_oracle(*mats, cap=cap, workers=workers)
        good += sub == orc
    checks.append(
        CheckResult(
            "non-hermitian substitution path vs oracle d=2",
            good == 5,
            f"{good}/5 random instances exact",
        )
    )
    return checks


# ---------------------------------------------------------------------------
# gsvd suite
# ---------------------------------------------------------------------------

def suite_gsvd(config: RunConfig, instances: int = 5) -> list[CheckResult]:
    checks = []
    cap = config.exhaustive_cap
    workers = config.worker_count
    operator_ok = True
    roundtrip_ok = True
    for m in (1, 2):
        for s_dim in (1, 2):
            for t_dim in (1, 2):
                rng = _rng(config, 5, m, s_dim, t_dim)
                good = 0
                for _ in range(instances):
                    m_inst = GsvcpInstance(_ints(rng, s_dim, m, -2, 2), _ints(rng, t_dim, m, -2, 2))
                    n_inst = GsvcpInstance(_ints(rng, s_dim, m, -2, 2), _ints(rng, t_dim, m, -2, 2))
                    p = extract_gsvcp_coeffs(gsvcp(m_inst), m, s_dim, t_dim)
                    q = extract_gsvcp_coeffs(gsvcp(n_inst), m, s_dim, t_dim)
                    conv = gsvd_convolve(p, q)
                    oracle = gsvd_expectation_oracle(m_inst, n_inst, cap=cap, workers=workers)
                    good += conv == oracle
                    roundtrip_ok = roundtrip_ok and extract_gsvcp_coeffs(
                        p.reconstruct(), m, s_dim, t_dim
                    ) == p
                    op_product = gsvcp_operator_form(p) * gsvcp_operator_form(q)
                    via_operator = apply_operator_poly(op_product, m, s_dim, t_dim)
                    via_grid = reciprocal_form(conv.reconstruct(), m, s_dim, t_dim)
                    operator_ok = operator_ok and via_operator == via_grid
                checks.append(
                    CheckResult(
                        f"gsvd convolution m={m} s={s_dim} t={t_dim}",
                        good == instances,
                        f"{good}/{instances} instances match the triple-ensemble oracle",
                    )
                )
    checks.append(
        CheckResult(
            "gsvd operator-form corollary (m,s,t <= 2)",
            operator_ok,
            "operator product path equals grid convolution path on all instances",
        )
    )
    checks.append(
        CheckResult(
            "gsvd coefficient grid round-trip",
            roundtrip_ok,
            "extract(reconstruct(grid)) = grid on all instances",
        )
    )

    ok = True
    for m in (1, 2, 3):
        rng = _rng(config, 5, 10, m)
        done = 0
        while done < 3:
            m1 = rat_rows(_ints(rng, m + 1, m, -3, 3))
            m2 = rat_rows(_ints(rng, m, m, -3, 3))
            w1 = rat_matmul(tuple(zip(*m1)), m1)
            w2 = rat_matmul(tuple(zip(*m2)), m2)
            try:
                rep = gsvd_charpoly_identity_check(w1, w2)
            except ValueError:
                continue
            ok = ok and rep["equal"]
            done += 1
    checks.append(
        CheckResult(
            "gsvd characteristic-polynomial similarity identity m<=3",
            ok,
            "3 random Gram pairs per size, exact",
        )
    )

    ok = True
    for m in (1, 2, 3):
        rng = _rng(config, 5, 11, m)
        for _ in range(3):
            s_dim = int(rng.integers(1, 4))
            t_dim = int(rng.integers(1, 4))
            inst = GsvcpInstance(_ints(rng, s_dim, m, -2, 2), _ints(rng, t_dim, m, -2, 2))
            rep = block_determinant_identity_check(inst)
            ok = ok and rep["equal"]
    checks.append(
        CheckResult(
            "gsvd block determinant identity m<=3",
            ok,
            "3 random instances per size, exact after cross-multiplication",
        )
    )
    return checks


# ---------------------------------------------------------------------------
# permanent suite
# ---------------------------------------------------------------------------

def suite_permanent(config: RunConfig) -> list[CheckResult]:
    checks = []
    rng = _rng(config, 6, 1)
    good = 0
    bound_ok = True
    for _ in range(20):
        n = int(rng.integers(1, 8))
        k = int(rng.integers(1, 4))
        dec = RankDecomposition(_ints(rng, k, n), _ints(rng, k, n))
        good += lowrank_permanent(dec) == ryser_permanent(dec.reconstruct())
        p, q = lowrank_polynomials(dec)
        bound = term_count_report(n, k)
        bound_ok = bound_ok and len(p.terms) <= bound and len(q.terms) <= bound
    checks.append(
        CheckResult(
            "permanent low-rank vs ryser",
            good == 20,
            f"{good}/20 random instances (n<=7, k<=3) exact",
        )
    )
    checks.append(
        CheckResult(
            "permanent term-count bound",
            bound_ok,
            "stored terms <= C(n+k-1, k-1) on all instances",
        )
    )

    known_ok = (
        lowrank_permanent(RankDecomposition(((1, 1),), ((1, 1),))) == 2
        and lowrank_permanent(RankDecomposition(((1, 2),), ((3, 4),))) == 48
        and lowrank_permanent(RankDecomposition(((1, 0), (0, 1)), ((1, 2), (3, 4)))) == 10
        and ryser_permanent([[1, 2], [3, 4]]) == 10
    )
    checks.append(
        CheckResult(
            "permanent known values",
            known_ok,
            "all-ones 2x2 gives 2; rank-1 (1,2)x(3,4) gives 48; [[1,2],[3,4]] gives 10",
        )
    )

    bench = bench_lowrank_vs_ryser(30, 2, seed=config.seed)
    fast = bench.time_lowrank < 1.0
    beats = bench.time_ryser > bench.time_lowrank
    checks.append(
        CheckResult(
            "permanent low-rank n=30 k=2 within budget",
            fast and bench.terms_p <= bench.term_bound,
            f"terms={bench.terms_p} bound={bench.term_bound} under-1s={'yes' if fast else 'no'}",
        )
    )
    checks.append(
        CheckResult(
            "permanent low-rank beats ryser at n=30",
            beats,
            f"ryser-cost-extrapolated={'yes' if bench.ryser_extrapolated else 'no'} "
            f"lowrank-faster={'yes' if beats else 'no'}",
        )
    )
    return checks


SUITES = {
    "minor-orth": suite_minor_orth,
    "local": suite_local,
    "global": suite_global,
    "mixed-disc": suite_mixed_disc,
    "convolutions": suite_convolutions,
    "gsvd": suite_gsvd,
    "permanent": suite_permanent,
}


def run_suite(suite: str, config: RunConfig) -> Report:
    """Run one named suite (or 'all') and collect per-identity verdicts."""
    if suite == "all":
        checks = []
        for name in SUITE_NAMES:
            checks.extend(SUITES[name](config))
        return Report("all", config.seed, checks)
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITE_NAMES + ('all',)}")
    return Report(suite, config.seed, SUITES[suite](config))


def render_text(report: Report) -> str:
    lines = [f"suite: {report.suite}", f"seed: {report.seed}"]
    for c in report.checks:
        lines.append(f"[{'PASS' if c.passed else 'FAIL'}] {c.name} -- {c.detail}")
    lines.append(
        f"result: {'PASS' if report.all_pass else 'FAIL'} ({len(report.checks)} checks)"
    )
    if not report.all_pass:
        lines.append(f"first failure: {report.first_failure}")
    return "\n".join(lines) + "\n"


def render_json(report: Report) -> str:
    payload = {
        "suite": report.suite,
        "seed": report.seed,
        "all_pass": report.all_pass,
        "first_failure": report.first_failure,
        "checks": [
            {"name": c.name, "pass": c.passed, "detail": c.detail}
            for c in report.checks
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
