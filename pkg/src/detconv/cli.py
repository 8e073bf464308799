"""Command-line interface: verification suites, convolutions, permanents, GSVD.

Exit codes: 0 success, 1 a checked identity failed, 2 bad input,
3 exhaustive enumeration would exceed the configured cap.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .convolve import (
    GlobalInstance,
    LocalInstance,
    boxplus,
    boxplus_oracle,
    boxtimes,
    boxtimes_oracle,
    global_convolution,
    global_expectation_oracle,
    local_convolution,
    local_expectation_oracle,
    nonhermitian_mult,
    nonhermitian_oracle,
    rect_boxplus,
    rect_boxplus_oracle,
    star_convolve,
)
from .ensembles import (
    DEFAULT_CAP,
    KIND_EXHAUSTIVE,
    KINDS,
    CapExceededError,
    EnsembleSpec,
    verify_minor_orthogonality,
)
from .gsvd import (
    GsvcpInstance,
    extract_gsvcp_coeffs,
    gsvcp,
    gsvcp_operator_form,
    gsvd_convolve,
    gsvd_expectation_oracle,
    reciprocal_form,
)
from .matpoly import PolyMatrix, matrix_from_json_dict
from .permanent import (
    BenchResult,
    RankDecomposition,
    bench_lowrank_vs_ryser,
    lowrank_permanent,
    ryser_permanent,
)
from .polyalg import MultiPoly, format_poly, parse_rational
from .verify import RunConfig, render_json, render_text, run_suite


class InputError(Exception):
    """Bad user input: malformed JSON, missing fields, wrong shapes."""


# ---------------------------------------------------------------------------
# Input parsing
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(
    r"^(?P<sign>[+-]?)(?P<coeff>\d+(?:/\d+)?)?"
    r"(?:\*?(?P<var>[a-zA-Z]+)(?:\^(?P<exp>\d+))?)?$"
)


def parse_univariate(text: str) -> MultiPoly:
    """Parse shorthand like 'x^2-1' or '2x^3 + x - 5/2' into a polynomial."""
    stripped = text.replace(" ", "")
    if not stripped:
        raise InputError("empty polynomial expression")
    pieces = [p for p in re.split(r"(?=[+-])", stripped) if p]
    terms: list[tuple[tuple[int], Fraction]] = []
    var_name = None
    for piece in pieces:
        match = _TERM_RE.match(piece)
        if not match or (match.group("coeff") is None and match.group("var") is None):
            raise InputError(f"cannot parse term {piece!r} in {text!r}")
        coeff = (
            parse_rational(match.group("coeff"))
            if match.group("coeff")
            else Fraction(1)
        )
        if match.group("sign") == "-":
            coeff = -coeff
        var = match.group("var")
        if var is None:
            exp = 0
        else:
            if var_name is None:
                var_name = var
            elif var != var_name:
                raise InputError(
                    f"two different variables {var_name!r} and {var!r} in {text!r}"
                )
            exp = int(match.group("exp") or 1)
        terms.append(((exp,), coeff))
    return MultiPoly(1, terms)


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def _field(data: dict, name: str, where: str):
    if name not in data:
        raise InputError(f"{where}: missing field {name!r}")
    return data[name]


def _poly_field(data: dict, name: str, where: str) -> MultiPoly:
    value = _field(data, name, where)
    try:
        if isinstance(value, str):
            return parse_univariate(value)
        return MultiPoly.from_json_dict(value)
    except (ValueError, InputError) as exc:
        raise InputError(f"{where}: field {name!r}: {exc}") from exc


def _matrix_field(data: dict, name: str, where: str, arity=None) -> PolyMatrix:
    value = _field(data, name, where)
    try:
        return matrix_from_json_dict(value, arity)
    except ValueError as exc:
        raise InputError(f"{where}: field {name!r}: {exc}") from exc


def _rational_grid_field(data: dict, name: str, where: str):
    value = _field(data, name, where)
    if not isinstance(value, list) or not value or not all(
        isinstance(row, list) for row in value
    ):
        raise InputError(f"{where}: field {name!r} must be a list of rows")
    try:
        return tuple(tuple(parse_rational(str(v)) for v in row) for row in value)
    except ValueError as exc:
        raise InputError(f"{where}: field {name!r}: {exc}") from exc


def _write_output(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, path: str | None) -> None:
    _write_output(json.dumps(payload, indent=2, sort_keys=True) + "\n", path)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _config_from_args(args) -> RunConfig:
    return RunConfig(
        seed=args.seed,
        exhaustive_cap=args.cap,
        sample_count=args.samples,
        worker_count=args.workers,
        output_format=args.format,
    )


def cmd_verify(args) -> int:
    if args.suite == "minor-orth" and args.n is not None:
        spec = EnsembleSpec(
            kind=args.kind, n=args.n, sample_count=args.samples,
            seed=args.seed, cap=args.cap,
        )
        report = verify_minor_orthogonality(
            spec, k_max=args.k_max, l_max=args.l_max, tolerance=args.tolerance
        )
        _emit_json(report.to_json_dict(include_entries=True), args.output)
        return 0 if report.all_pass else 1

    config = _config_from_args(args)
    report = run_suite(args.suite, config)
    text = render_json(report) if args.format == "json" else render_text(report)
    _write_output(text, args.output)
    return 0 if report.all_pass else 1


def _poly_payload(op: str, result: MultiPoly, oracle: MultiPoly | None) -> dict:
    payload = {
        "op": op,
        "result": result.to_json_dict(),
        "pretty": format_poly(result),
    }
    if oracle is not None:
        payload["oracle"] = oracle.to_json_dict()
        payload["match"] = oracle == result
    return payload


def cmd_convolve(args) -> int:
    op = args.operation
    oracle = None
    if op in ("boxplus", "boxtimes"):
        if args.p is not None and args.q is not None:
            p, q = parse_univariate(args.p), parse_univariate(args.q)
        elif args.input:
            data = _load_json(args.input)
            p = _poly_field(data, "p", args.input)
            q = _poly_field(data, "q", args.input)
        else:
            raise InputError(f"{op} needs --p/--q expressions or --input")
        try:
            if op == "boxplus":
                result = boxplus(p, q)
                if args.oracle:
                    oracle = boxplus_oracle(p, q, cap=args.cap, workers=args.workers)
            else:
                result = boxtimes(p, q)
                if args.oracle:
                    oracle = boxtimes_oracle(p, q, cap=args.cap, workers=args.workers)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    elif op == "star":
        if not args.input:
            raise InputError("star needs --input")
        if args.oracle:
            raise InputError(
                "star has no attached ensemble; use the global operation for "
                "an oracle comparison"
            )
        data = _load_json(args.input)
        p = _poly_field(data, "p", args.input)
        q = _poly_field(data, "q", args.input)
        degree = int(_field(data, "degree", args.input))
        try:
            result = star_convolve(p, q, degree)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    elif op == "rect":
        if not args.input:
            raise InputError("rect needs --input")
        data = _load_json(args.input)
        a = _rational_grid_field(data, "a", args.input)
        b = _rational_grid_field(data, "b", args.input)
        try:
            result = rect_boxplus(a, b)
            if args.oracle:
                oracle = rect_boxplus_oracle(a, b, cap=args.cap, workers=args.workers)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    elif op == "nonhermitian":
        if not args.input:
            raise InputError("nonhermitian needs --input")
        data = _load_json(args.input)
        mats = [
            _rational_grid_field(data, name, args.input)
            for name in ("h1", "k1", "h2", "k2")
        ]
        try:
            result = nonhermitian_mult(*mats)
            if args.oracle:
                oracle = nonhermitian_oracle(*mats, cap=args.cap, workers=args.workers)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    elif op == "local":
        if not args.input:
            raise InputError("local needs --input")
        data = _load_json(args.input)
        arity = int(data.get("arity", 2))
        try:
            inst = LocalInstance(
                u=_matrix_field(data, "u", args.input, arity),
                a1=_matrix_field(data, "a1", args.input, arity),
                a2=_matrix_field(data, "a2", args.input, arity),
                b1=_matrix_field(data, "b1", args.input, arity),
                b2=_matrix_field(data, "b2", args.input, arity),
                x_index=int(data.get("x_index", 0)),
                y_index=int(data.get("y_index", 1)),
            )
            result = local_convolution(inst)
            if args.oracle:
                oracle = local_expectation_oracle(inst, cap=args.cap, workers=args.workers)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    elif op == "global":
        if not args.input:
            raise InputError("global needs --input")
        data = _load_json(args.input)
        a_list = _field(data, "a", args.input)
        b_list = _field(data, "b", args.input)
        if not isinstance(a_list, list) or not isinstance(b_list, list):
            raise InputError(f"{args.input}: fields 'a' and 'b' must be lists of matrices")
        try:
            a_mats = tuple(
                matrix_from_json_dict(mat, 0).to_rationals() for mat in a_list
            )
            b_mats = tuple(
                matrix_from_json_dict(mat, 0).to_rationals() for mat in b_list
            )
            inst = GlobalInstance(a_mats, b_mats)
            result = global_convolution(inst)
            if args.oracle:
                oracle = global_expectation_oracle(inst, cap=args.cap, workers=args.workers)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    else:
        raise InputError(f"unknown convolve operation {op!r}")

    payload = _poly_payload(op, result, oracle)
    _emit_json(payload, args.output)
    if oracle is not None and not payload["match"]:
        return 1
    return 0


def cmd_permanent(args) -> int:
    if args.operation == "lowrank":
        if not args.vectors:
            raise InputError("lowrank needs --vectors")
        data = _load_json(args.vectors)
        a = _rational_grid_field(data, "a", args.vectors)
        b = _rational_grid_field(data, "b", args.vectors)
        try:
            dec = RankDecomposition(a, b)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        value = lowrank_permanent(dec)
        _emit_json({"op": "lowrank", "n": dec.n, "k": dec.k, "permanent": str(value)},
                   args.output)
        return 0
    if args.operation == "ryser":
        if not args.matrix:
            raise InputError("ryser needs --matrix")
        data = _load_json(args.matrix)
        try:
            grid = matrix_from_json_dict(data, 0).to_rationals()
            value = ryser_permanent(grid)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        _emit_json({"op": "ryser", "n": len(grid), "permanent": str(value)}, args.output)
        return 0
    if args.operation == "bench":
        result = bench_lowrank_vs_ryser(args.n, args.k, seed=args.seed)
        text = BenchResult.csv_header() + "\n" + result.csv_row() + "\n"
        _write_output(text, args.output)
        return 0
    raise InputError(f"unknown permanent operation {args.operation!r}")


def cmd_gsvd(args) -> int:
    data_m = _load_json(args.m)
    data_n = _load_json(args.n)

    def load_instance(data, where) -> GsvcpInstance:
        a1 = _rational_grid_field(data, "a1", where)
        a2 = _rational_grid_field(data, "a2", where)
        try:
            return GsvcpInstance(a1, a2)
        except ValueError as exc:
            raise InputError(f"{where}: {exc}") from exc

    m_inst = load_instance(data_m, args.m)
    n_inst = load_instance(data_n, args.n)
    if (m_inst.m, m_inst.s_dim, m_inst.t_dim) != (n_inst.m, n_inst.s_dim, n_inst.t_dim):
        raise InputError(
            f"instances have different dimensions: "
            f"{(m_inst.m, m_inst.s_dim, m_inst.t_dim)} vs "
            f"{(n_inst.m, n_inst.s_dim, n_inst.t_dim)}"
        )
    dims = (m_inst.m, m_inst.s_dim, m_inst.t_dim)
    p = extract_gsvcp_coeffs(gsvcp(m_inst), *dims)
    q = extract_gsvcp_coeffs(gsvcp(n_inst), *dims)
    conv = gsvd_convolve(p, q)
    payload = {"op": "gsvd-conv", "result": conv.to_json_dict()}
    exit_code = 0
    if args.oracle:
        oracle = gsvd_expectation_oracle(m_inst, n_inst, cap=args.cap, workers=args.workers)
        payload["oracle"] = oracle.to_json_dict()
        payload["match"] = oracle == conv
        if not payload["match"]:
            exit_code = 1
    if args.operator_form:
        payload["operator_form"] = gsvcp_operator_form(conv).to_json_dict()
    if args.reciprocal:
        payload["reciprocal_form"] = reciprocal_form(
            conv.reconstruct(), *dims
        ).to_json_dict()
    _emit_json(payload, args.output)
    return exit_code


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _add_common(parser, *, samples=10_000):
    parser.add_argument("--seed", type=int, default=7, help="RNG seed (default 7)")
    parser.add_argument("--samples", type=int, default=samples,
                        help="sample count for sampled/statistical checks")
    parser.add_argument("--cap", type=int, default=DEFAULT_CAP,
                        help="max group size for exhaustive enumeration")
    parser.add_argument("--workers", type=int, default=1,
                        help="worker count for exhaustive averages")
    parser.add_argument("--output", help="write the result to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detconv",
        description="Exact determinantal polynomial convolutions with "
        "brute-force verification oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run a named verification suite")
    p_verify.add_argument(
        "suite",
        choices=("minor-orth", "local", "global", "mixed-disc", "convolutions",
                 "gsvd", "permanent", "all"),
    )
    _add_common(p_verify)
    p_verify.add_argument("--format", choices=("text", "json"), default="text")
    p_verify.add_argument("--n", type=int, default=None,
                          help="minor-orth only: check a single ensemble size")
    p_verify.add_argument("--kind", choices=KINDS, default=KIND_EXHAUSTIVE,
                          help="minor-orth only: ensemble kind")
    p_verify.add_argument("--k-max", type=int, default=None, dest="k_max")
    p_verify.add_argument("--l-max", type=int, default=None, dest="l_max")
    p_verify.add_argument("--tolerance", type=float, default=0.05)
    p_verify.set_defaults(handler=cmd_verify)

    p_conv = sub.add_parser("convolve", help="compute a convolution")
    p_conv.add_argument(
        "operation",
        choices=("star", "boxplus", "boxtimes", "rect", "nonhermitian",
                 "local", "global"),
    )
    p_conv.add_argument("--input", help="JSON input file")
    p_conv.add_argument("--p", help="univariate shorthand, e.g. 'x^2-1'")
    p_conv.add_argument("--q", help="univariate shorthand, e.g. 'x^2-1'")
    p_conv.add_argument("--oracle", action="store_true",
                        help="also run the brute-force side and compare")
    _add_common(p_conv)
    p_conv.set_defaults(handler=cmd_convolve)

    p_perm = sub.add_parser("permanent", help="permanents and benchmarks")
    p_perm.add_argument("operation", choices=("lowrank", "ryser", "bench"))
    p_perm.add_argument("--vectors", help="JSON file with 'a' and 'b' vector lists")
    p_perm.add_argument("--matrix", help="JSON matrix file")
    p_perm.add_argument("--n", type=int, default=30)
    p_perm.add_argument("--k", type=int, default=2)
    _add_common(p_perm)
    p_perm.set_defaults(handler=cmd_permanent)

    p_gsvd = sub.add_parser("gsvd", help="generalized-singular-value convolution")
    p_gsvd.add_argument("operation", choices=("conv",))
    p_gsvd.add_argument("--m", required=True, help="JSON file for the first instance")
    p_gsvd.add_argument("--n", required=True, help="JSON file for the second instance")
    p_gsvd.add_argument("--oracle", action="store_true")
    p_gsvd.add_argument("--operator-form", action="store_true", dest="operator_form")
    p_gsvd.add_argument(
        "--reciprocal", action="store_true",
        help="also emit y^s z^t p(x, 1/y, 1/z), the bordered-model form",
    )
    _add_common(p_gsvd)
    p_gsvd.set_defaults(handler=cmd_gsvd)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
