"""Command-line entry point ``qviab``.

Exit codes: 0 success, 2 a negative scientific verdict (non-viable,
infeasible, inequality violated, no counterexample), 1 any error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys

from . import composite, eprb, lpmatch, viability
from .errors import QuasiError
from .fine import BellInput, ChshInput, bell_satisfied, bell_values, chsh_satisfied, chsh_values
from .qdist import load_distribution

EXIT_OK, EXIT_ERROR, EXIT_VERDICT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def g12(x: float) -> str:
    return format(float(x), ".12g")


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _dump(obj, fh):
    json.dump(obj, fh, indent=2)
    fh.write("\n")


def _cmd_sweep(args) -> int:
    rows = eprb.sweep(args.theta_min, args.theta_max, args.steps, args.tol)
    with _output(args.out) as fh:
        eprb.write_csv(rows, fh)
    return EXIT_OK


def _cmd_viability(args) -> int:
    q = load_distribution(args.input)
    mode = args.mode or ("specified" if args.subsets else "all-positive")
    subsets = None
    if mode == "specified":
        if not args.subsets:
            raise QuasiError("--mode specified needs --subsets")
        with open(args.subsets) as fh:
            subsets = [[int(i) - 1 for i in s] for s in json.load(fh)]
    report = viability.viability_test(q, subsets, args.tol)
    out = report.to_json()
    cg = None
    if report.status is viability.Status.NON_VIABLE:
        cg = viability.coarse_grain_search(q, report.subsets, args.budget, args.tol)
    out["coarse_grain"] = cg.to_json() if cg is not None else None

    path = args.report or args.out
    if path is None:
        _dump(out, sys.stdout)
    else:
        with _output(path) as fh:
            _dump(out, fh)
        print(f"status: {report.status.value}")
    if report.status is viability.Status.NON_VIABLE:
        return EXIT_VERDICT
    if report.status is viability.Status.UNKNOWN:
        return EXIT_ERROR
    return EXIT_OK


def _cmd_match(args) -> int:
    prob = lpmatch.load_problem(args.input)
    res = lpmatch.solve(prob, args.tol, exact=args.exact)
    if args.witness_out and res.witness is not None:
        with _output(args.witness_out) as fh:
            _dump(res.witness.to_json(), fh)
    with _output(args.out) as fh:
        _dump(res.to_json(), fh)
    return EXIT_OK if res.feasible else EXIT_VERDICT


def _cmd_fine(args) -> int:
    if args.bell:
        if None in (args.c12, args.c13, args.c23):
            raise QuasiError("--bell needs --c12, --c13 and --c23")
        b = BellInput(args.c12, args.c13, args.c23, tol=args.tol)
        names = ("C12+C13-C23", "C12-C13+C23", "-C12+C13+C23", "-C12-C13-C23")
        values, ok, bound = bell_values(b), bell_satisfied(b, args.tol), "<= 1"
    else:
        if None in (args.c13, args.c14, args.c23, args.c24):
            raise QuasiError("CHSH needs --c13, --c14, --c23 and --c24")
        c = ChshInput(args.c13, args.c14, args.c23, args.c24, tol=args.tol)
        names = ("S1", "S2", "S3", "S4")
        values, ok, bound = chsh_values(c), chsh_satisfied(c, args.tol), "|S| <= 2"
    with _output(args.out) as fh:
        for name, v in zip(names, values):
            fh.write(f"{name} = {g12(v)}\n")
        fh.write(f"{'PASS' if ok else 'FAIL'} ({bound})\n")
    return EXIT_OK if ok else EXIT_VERDICT


def _cmd_diosi(args) -> int:
    grid = (args.grid, max(1, args.grid // 2))
    found = composite.lp2_failure_demo(grid=grid)
    with _output(args.out) as fh:
        if found is None:
            fh.write("no counterexample on this grid\n")
            return EXIT_VERDICT
        fh.write(f"Re z_A = {g12(found.re_a)}\n")
        fh.write(f"Re z_B = {g12(found.re_b)}\n")
        fh.write(f"Re(z_A z_B) = {g12(found.re_ab)}\n")
        for side, dirs in (("A", found.directions_a), ("B", found.directions_b)):
            first, second = (" ".join(g12(x) for x in d) for d in dirs)
            fh.write(f"string {side}: P+[{second}] P+[{first}]  (rightmost acts first)\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="feasibility/positivity tolerance")
    common.add_argument("--seed", type=int, default=0, help="accepted for reproducible scripting; no subcommand samples")
    common.add_argument("--out", default=None, help="output path (default stdout)")

    p = _Parser(prog="qviab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("eprb-sweep", parents=[common], help="tabulate the singlet example over theta")
    s.add_argument("--theta-min", type=float, default=0.0)
    s.add_argument("--theta-max", type=float, default=2 * math.pi)
    s.add_argument("--steps", type=int, default=1000)
    s.set_defaults(func=_cmd_sweep)

    s = sub.add_parser("viability", parents=[common], help="run the viability test on a distribution")
    s.add_argument("--input", required=True)
    s.add_argument("--subsets", help="JSON list of 1-based variable subsets")
    s.add_argument("--mode", choices=("all-positive", "specified"))
    s.add_argument("--report", help="write the JSON report here")
    s.add_argument("--budget", type=int, default=viability.SEARCH_BUDGET)
    s.set_defaults(func=_cmd_viability)

    s = sub.add_parser("match", parents=[common], help="solve a marginal matching problem")
    s.add_argument("--input", required=True)
    s.add_argument("--witness-out")
    s.add_argument("--exact", action="store_true", help="rational arithmetic (small instances)")
    s.set_defaults(func=_cmd_match)

    s = sub.add_parser("fine", parents=[common], help="evaluate CHSH or Bell inequalities")
    s.add_argument("--bell", action="store_true")
    for name in ("c12", "c13", "c14", "c23", "c24"):
        s.add_argument(f"--{name}", type=float)
    s.set_defaults(func=_cmd_fine)

    s = sub.add_parser("diosi-demo", parents=[common], help="find a linear-positivity Diosi failure")
    s.add_argument("--grid", type=int, default=24, help="azimuthal grid size; polar uses half")
    s.set_defaults(func=_cmd_diosi)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol <= 0:
        print("qviab: error: --tol must be positive", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (QuasiError, OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"qviab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
