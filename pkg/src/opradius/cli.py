"""Batch command line front end.

Verbs: ``radius`` (compute w_N / pair radius), ``verify`` (run the full check
suite), ``search`` (sharpness search), ``oracle`` (unit-vector estimate next
to the grid value), ``gen`` (write sampled matrices).  Exit codes: 0 success
or no violation, 2 violation found, 64 usage or parse error, 70 numerical
kernel failure.  All floats print with 12 significant digits.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import matrices
from .checks import run_suite, search_sharpness, suite_exit_code
from .norms import parse_norm
from .radius import (
    RadiusOptions,
    w_e_vector_oracle,
    w_N,
    w_Ne,
)
from .sampling import PAIR_FAMILIES, SamplerSpec, parse_sampler, sample

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_USAGE = 64
EXIT_NUMERICAL = 70


class CLIError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIError(message)


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _add_radius_opts(sp):
    sp.add_argument("--theta-grid", type=int, default=None)
    sp.add_argument("--t-grid", type=int, default=None)
    sp.add_argument("--phi-grid", type=int, default=None)
    sp.add_argument("--refine-tol", type=float, default=None)


def _add_out(sp):
    sp.add_argument("--out", choices=("json", "text"), default="text")


def build_parser() -> _Parser:
    parser = _Parser(prog="opradius", description="operator radius toolkit")
    sub = parser.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("radius", help="compute w_N (and the pair radius for pairs)")
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--single", metavar="FILE")
    grp.add_argument("--pair", nargs=2, metavar=("B", "C"))
    sp.add_argument("--norm", action="append", default=None)
    _add_radius_opts(sp)
    _add_out(sp)

    sp = sub.add_parser("verify", help="run the inequality suite, exit 0/2")
    sp.add_argument("--pair", nargs=2, metavar=("B", "C"), required=True)
    sp.add_argument("--norm", action="append", default=None)
    sp.add_argument("--seed", type=int, default=0, help="seed for the audit unitary")
    _add_radius_opts(sp)
    _add_out(sp)

    sp = sub.add_parser("search", help="sharpness search for one check")
    sp.add_argument("--check", required=True)
    sp.add_argument("--norm", default="op")
    sp.add_argument("--family", required=True, metavar="NAME[:n]")
    sp.add_argument("--samples", type=int, default=200, help="search iterations")
    sp.add_argument("--seed", type=int, required=True)
    _add_radius_opts(sp)
    _add_out(sp)

    sp = sub.add_parser("oracle", help="unit-vector radius estimate vs the grid value")
    sp.add_argument("--pair", nargs=2, metavar=("B", "C"), required=True)
    sp.add_argument("--samples", type=int, default=20000)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--polish", type=int, default=200)
    _add_radius_opts(sp)
    _add_out(sp)

    sp = sub.add_parser("gen", help="write sampled matrices to files")
    sp.add_argument("--family", required=True, metavar="FAMILY:N[:SEED]")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out-dir", default=".")
    return parser


def _options(args) -> RadiusOptions:
    base = RadiusOptions()
    return RadiusOptions(
        theta_grid=args.theta_grid or base.theta_grid,
        t_grid=args.t_grid or base.t_grid,
        phi_grid=args.phi_grid or base.phi_grid,
        refine_passes=base.refine_passes,
        refine_tol=args.refine_tol or base.refine_tol,
        escalation_rounds=base.escalation_rounds,
    )


def _norms(args) -> list:
    return [parse_norm(s) for s in (args.norm or ["op"])]


def _cmd_radius(args) -> int:
    opts = _options(args)
    lines = []
    if args.single:
        T = matrices.load_matrix(args.single)
        for nd in _norms(args):
            res = w_N(T, nd, opts)
            if args.out == "json":
                lines.append(json.dumps({"kind": "w_N", "norm": nd.id, **res.to_json()}))
            else:
                lines.append(
                    f"w_N[{nd.id}] = {_fmt(res.value)}  argmax theta={_fmt(res.theta)}"
                )
    else:
        B = matrices.load_matrix(args.pair[0])
        C = matrices.load_matrix(args.pair[1])
        for nd in _norms(args):
            res = w_Ne(B, C, nd, opts)
            if args.out == "json":
                lines.append(json.dumps({"kind": "w_Ne", "norm": nd.id, **res.to_json()}))
            else:
                lines.append(
                    f"w_Ne[{nd.id}] = {_fmt(res.value)}  argmax theta={_fmt(res.theta)}"
                    f" t={_fmt(res.t)} phi={_fmt(res.phi)}"
                )
    print("\n".join(lines))
    return EXIT_OK


def _cmd_verify(args) -> int:
    opts = _options(args)
    B = matrices.load_matrix(args.pair[0])
    C = matrices.load_matrix(args.pair[1])
    verdicts = run_suite(B, C, _norms(args), opts, unitary_seed=args.seed)
    if args.out == "json":
        for v in verdicts:
            print(v.to_json_line())
    else:
        for v in verdicts:
            print(
                f"{v.check_id:<16} {v.norm_id:<12} {v.status:<10}"
                f" lhs={_fmt(v.lhs)} rhs={_fmt(v.rhs)} slack={_fmt(v.slack)}"
            )
        violations = sum(1 for v in verdicts if v.status == "violation")
        print(f"checks: {len(verdicts)}  violations: {violations}")
    return suite_exit_code(verdicts)


def _cmd_search(args) -> int:
    opts = _options(args)
    result = search_sharpness(
        args.check, args.norm, args.family, args.samples, args.seed, opts=opts
    )
    if args.out == "json":
        print(
            json.dumps(
                {
                    "check": result.check_id,
                    "norm": result.norm_id,
                    "family": result.family,
                    "iters": result.iters,
                    "seed": result.seed,
                    "min_relative_slack": result.min_relative_slack,
                    "best_B": matrices.matrix_to_json(result.best_B),
                    "best_C": matrices.matrix_to_json(result.best_C),
                }
            )
        )
    else:
        print(
            f"search {result.check_id} [{result.norm_id}] family={result.family}"
            f" iters={result.iters} seed={result.seed}"
        )
        print(f"min relative slack = {_fmt(result.min_relative_slack)}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    opts = _options(args)
    B = matrices.load_matrix(args.pair[0])
    C = matrices.load_matrix(args.pair[1])
    oracle = w_e_vector_oracle(B, C, args.samples, args.seed, args.polish)
    grid = w_Ne(B, C, "op", opts)
    if args.out == "json":
        print(
            json.dumps(
                {
                    "oracle": oracle,
                    "w_Ne": grid.to_json(),
                    "difference": grid.value - oracle,
                }
            )
        )
    else:
        print(f"w_e oracle      = {_fmt(oracle)}")
        print(f"w_Ne[op]        = {_fmt(grid.value)}")
        print(f"difference      = {_fmt(grid.value - oracle)}")
    return EXIT_OK


def _cmd_gen(args) -> int:
    parts = args.family.split(":")
    if len(parts) == 3:
        spec = parse_sampler(args.family)
    elif len(parts) == 2 and args.seed is not None:
        spec = SamplerSpec(parts[0], int(parts[1]), args.seed)
    else:
        raise CLIError("gen requires --family FAMILY:N:SEED or FAMILY:N with --seed")
    drawn = sample(spec)
    base = f"{spec.family}-{spec.n}-{spec.seed}"
    written = []
    import os

    os.makedirs(args.out_dir, exist_ok=True)
    if spec.family in PAIR_FAMILIES:
        for tag, M in zip(("B", "C"), drawn):
            path = os.path.join(args.out_dir, f"{base}-{tag}.json")
            matrices.save_matrix(path, M)
            written.append(path)
    else:
        path = os.path.join(args.out_dir, f"{base}.json")
        matrices.save_matrix(path, drawn)
        written.append(path)
    for path in written:
        print(path)
    return EXIT_OK


_COMMANDS = {
    "radius": _cmd_radius,
    "verify": _cmd_verify,
    "search": _cmd_search,
    "oracle": _cmd_oracle,
    "gen": _cmd_gen,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CLIError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.verb](args)
    except CLIError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except matrices.ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
