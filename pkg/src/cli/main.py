"""
Command-line front end

    python -m src.cli <command> [options]

Every command prints one JSON object:
    {"command": ..., "input": ..., "result": ..., "certification": ..., "version": ...}
except `trace` without --out, which prints CSV.

Exit codes: 0 success, 1 usage error, 2 inconclusive numerics.

Values starting with '-' must be attached with '=': --box=-2,2,-2,2 --at=-2+0i
"""

import sys
import argparse
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from src import __version__
from src.config import default_log_level, get_tolerances
from src.errors import MixcurveError, MixParseError, TransversalityFailure, UsageError
from src.polynomials.homogeneous import (
    Homogenization,
    beta,
    dehomogenize,
    homogenize,
    rho,
)
from src.polynomials.parser import __doc__ as GRAMMAR_HELP
from src.polynomials.parser import format_poly, parse, parse_homogeneous
from src.reports.report_writer import emit_trace_csv, save_json_report, to_json
from src.roots.root_finder import classify, find_roots
from src.topology.intersection import (
    degree_s3,
    global_sum_check,
    itop_line,
    itop_transverse,
)
from src.topology.winding import (
    bifurcate,
    bounding_radius,
    multiplicity_with_sign,
    total_sm_result,
    trace,
    winding_number,
)

logger = logging.getLogger(__name__)

COMMANDS = [
    "eval", "sm", "total-sm", "beta", "rho", "roots", "winding", "trace",
    "bifurcate", "itop", "itop-line", "global-check", "homogenize",
    "dehomogenize", "classify", "verify",
]


# ============ FLAG PARSING ============

class _ArgumentParser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting with status 2."""

    def error(self, message: str) -> None:
        raise UsageError(message)


def parse_complex(text: str) -> complex:
    """'a+bi' syntax: '1.5-2i', '-i', '0+0i', '3'."""
    s = text.strip().replace(" ", "").replace("I", "i")
    if s.endswith("i"):
        body = s[:-1]
        if body == "" or body.endswith(("+", "-")):
            body += "1"
        s = body + "j"
    try:
        return complex(s)
    except ValueError:
        raise UsageError(f"cannot read complex number {text!r} (expected a+bi)")


def parse_point(text: str) -> Tuple[complex, ...]:
    return tuple(parse_complex(part) for part in text.split(","))


def parse_points(text: str) -> List[Tuple[complex, ...]]:
    """'z1,z2;z1,z2;...'"""
    return [parse_point(chunk) for chunk in text.split(";") if chunk.strip()]


def parse_box(text: str) -> Tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError(f"box must be xmin,xmax,ymin,ymax, got {text!r}")
    try:
        xmin, xmax, ymin, ymax = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"box must contain numbers, got {text!r}")
    if not (xmin < xmax and ymin < ymax):
        raise UsageError(f"empty box {text!r}")
    return xmin, xmax, ymin, ymax


def _pair(z: complex) -> List[float]:
    return [z.real, z.imag]


# ============ COMMANDS ============
# Each handler returns (result, certification).

Handler = Callable[[argparse.Namespace], Tuple[Any, Any]]


def _cmd_eval(args) -> Tuple[Any, Any]:
    f = parse(args.poly)
    return _pair(f(parse_point(args.at))), None


def _cmd_sm(args) -> Tuple[Any, Any]:
    f = parse(args.poly, nvars=1)
    result = multiplicity_with_sign(f, parse_complex(args.at), args.radius, args.tol)
    return result.value, result.to_dict()


def _cmd_total_sm(args) -> Tuple[Any, Any]:
    f = parse(args.poly, nvars=1)
    winding = total_sm_result(f, args.tol)
    return winding.degree, winding.to_dict()


def _cmd_beta(args) -> Tuple[Any, Any]:
    return beta(parse(args.poly, nvars=1), args.tol), None


def _cmd_rho(args) -> Tuple[Any, Any]:
    at = parse_complex(args.at) if args.at else None
    return rho(parse(args.poly, nvars=1), at=at, tol=args.tol), None


def _cmd_roots(args) -> Tuple[Any, Any]:
    f = parse(args.poly, nvars=1)
    box = parse_box(args.box) if args.box else None
    if box is None:
        R = 1.05 * bounding_radius(f, args.tol)
        box = (-R, R, -R, R)
    result = find_roots(f, box, args.tol)
    certification = {
        "box": list(box),
        "unresolved": [u.to_dict() for u in result.unresolved],
        "cells_examined": result.cells_examined,
        "final_width": result.final_width,
    }
    return [r.to_dict() for r in result.roots], certification


def _cmd_classify(args) -> Tuple[Any, Any]:
    f = parse(args.poly, nvars=1)
    record = classify(f, parse_complex(args.at), tol=args.tol)
    return record.to_dict(), None


def _cmd_winding(args) -> Tuple[Any, Any]:
    f = parse(args.poly, nvars=1)
    result = winding_number(f, parse_complex(args.center), args.radius, args.tol)
    return result.degree, result.to_dict()


def _cmd_trace(args) -> Tuple[Any, Any]:
    f = parse(args.poly, nvars=1)
    rows = trace(f, args.radius, args.samples, parse_complex(args.center))
    if args.out is None:
        return emit_trace_csv(rows), None
    path = emit_trace_csv(rows, args.out)
    return {"path": path, "rows": len(rows)}, None


def _cmd_bifurcate(args) -> Tuple[Any, Any]:
    family = lambda value: parse(args.family, nvars=1, params={args.param: value})
    report = bifurcate(family, args.t, parse_box(args.box), args.tol)
    return report.to_dict(), {"conserved": report.conserved}


def _cmd_itop(args) -> Tuple[Any, Any]:
    f = parse(args.f, nvars=2)
    g = parse(args.g, nvars=2)
    point = parse_point(args.at)
    if args.method in ("auto", "transverse"):
        try:
            return itop_transverse(f, g, point, args.tol), {"method": "transverse"}
        except TransversalityFailure:
            if args.method == "transverse":
                raise
    result = degree_s3(f, g, point, epsilon=args.epsilon, tol=args.tol)
    certification = result.to_dict()
    certification["method"] = "degree_s3"
    return result.degree, certification


def _cmd_itop_line(args) -> Tuple[Any, Any]:
    fhat = parse(args.poly, nvars=2)
    return itop_line(fhat, parse_complex(args.at), args.tol), {"method": "line"}


def _cmd_global_check(args) -> Tuple[Any, Any]:
    f = parse(args.f, nvars=2)
    g = parse(args.g, nvars=2)
    points = parse_points(args.points) if args.points else None
    box = parse_box(args.box) if args.box else None
    report = global_sum_check(f, g, points, args.dpolar_f, args.dpolar_g, box, args.tol)
    return report.to_dict(), {"passed": report.passed, "assumptions": report.assumptions}


def _cmd_homogenize(args) -> Tuple[Any, Any]:
    return homogenize(parse(args.poly)).to_dict(), None


def _cmd_dehomogenize(args) -> Tuple[Any, Any]:
    if args.form:
        terms, count = parse_homogeneous(args.form)
        hom = Homogenization.from_terms(terms, count)
    elif args.poly:
        hom = homogenize(parse(args.poly))
    else:
        raise UsageError("dehomogenize needs --form or --poly")
    return format_poly(dehomogenize(hom, args.chart)), {"form": str(hom)}


def _cmd_verify(args) -> Tuple[Any, Any]:
    from src.verification.executor import CheckExecutor
    from src.verification.planner import CheckPlanner

    planner = CheckPlanner()
    names = [n.strip() for n in args.checks.split(",") if n.strip()] if args.checks else None
    plan = planner.create_plan(names)
    validation = planner.validate_plan(plan)
    if not validation["valid"]:
        raise UsageError("invalid verification plan", {"issues": validation["issues"]})
    executor = CheckExecutor()
    results = executor.execute_plan(plan)
    summary = executor.get_execution_summary()
    return _without_clock(results), {k: v for k, v in summary.items() if k != "execution_time"}


def _without_clock(results: Dict[str, Any]) -> Dict[str, Any]:
    """Drop wall-clock fields so identical runs print identical JSON."""
    steps = {
        number: {k: v for k, v in record.items() if k not in ("timestamp", "elapsed")}
        for number, record in results["results"].items()
    }
    return {"success": results["success"], "results": steps, "failed_steps": results["failed_steps"]}


HANDLERS: Dict[str, Handler] = {
    "eval": _cmd_eval,
    "sm": _cmd_sm,
    "total-sm": _cmd_total_sm,
    "beta": _cmd_beta,
    "rho": _cmd_rho,
    "roots": _cmd_roots,
    "winding": _cmd_winding,
    "trace": _cmd_trace,
    "bifurcate": _cmd_bifurcate,
    "itop": _cmd_itop,
    "itop-line": _cmd_itop_line,
    "global-check": _cmd_global_check,
    "homogenize": _cmd_homogenize,
    "dehomogenize": _cmd_dehomogenize,
    "classify": _cmd_classify,
    "verify": _cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--report-dir", default=None, help="also save the JSON result in this directory")
    common.add_argument("--tol-scale", type=float, default=None, help="global tolerance scale (overrides MIXCURVE_TOL)")
    common.add_argument("--verbose", action="store_true", help="debug logging on stderr")

    parser = _ArgumentParser(
        prog="python -m src.cli",
        description="Signed multiplicities and intersection numbers of mixed polynomials.",
        epilog="Values starting with '-' must be attached with '=', e.g. --box=-2,2,-2,2.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_ArgumentParser)
    sub.required = True

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help_text, parents=[common])

    p = add("eval", "evaluate f at a point")
    p.add_argument("--poly", required=True, help="mixed polynomial text")
    p.add_argument("--at", required=True, help="a+bi, or a+bi,c+di for z1,z2")

    p = add("sm", "multiplicity with sign of a root")
    p.add_argument("--poly", required=True)
    p.add_argument("--at", required=True, help="the root, a+bi")
    p.add_argument("--radius", type=float, default=None, help="starting circle radius")

    p = add("total-sm", "total multiplicity with sign SM(f)")
    p.add_argument("--poly", required=True)

    p = add("beta", "closed-form invariant from the top form")
    p.add_argument("--poly", required=True)

    p = add("rho", "closed-form invariant from the bottom form")
    p.add_argument("--poly", required=True)
    p.add_argument("--at", default=None, help="point to shift to (default 0)")

    p = add("roots", "all isolated roots in a box")
    p.add_argument("--poly", required=True)
    p.add_argument("--box", default=None, help="xmin,xmax,ymin,ymax (default: a box enclosing every root)")

    p = add("classify", "positive-simple, negative-simple or mixed-singular")
    p.add_argument("--poly", required=True)
    p.add_argument("--at", required=True)

    p = add("winding", "certified winding number on a circle")
    p.add_argument("--poly", required=True)
    p.add_argument("--center", default="0")
    p.add_argument("--radius", type=float, required=True)

    p = add("trace", "sample f along a circle (CSV)")
    p.add_argument("--poly", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--samples", type=int, default=360)
    p.add_argument("--center", default="0")
    p.add_argument("--out", default=None, help="CSV path (default: stdout)")

    p = add("bifurcate", "sm conservation for a one-parameter family")
    p.add_argument("--family", required=True, help="polynomial text using the parameter, e.g. (u^2-t)*conj(u)")
    p.add_argument("--param", default="t", help="parameter name (default t)")
    p.add_argument("--t", type=float, required=True, help="parameter value")
    p.add_argument("--box", required=True)

    p = add("itop", "local intersection number of V(f) and V(g)")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--at", required=True, help="z1,z2")
    p.add_argument("--method", choices=["auto", "transverse", "degree"], default="auto")
    p.add_argument("--epsilon", type=float, default=None, help="sphere radius for the degree method")

    p = add("itop-line", "intersection number with the line z2 = 0")
    p.add_argument("--poly", required=True)
    p.add_argument("--at", required=True, help="z1 coordinate of the intersection")

    p = add("global-check", "sum of local intersection numbers against d·d'")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--points", default=None, help="z1,z2;z1,z2;...")
    p.add_argument("--box", default=None, help="z1 box when g is the line z2")
    p.add_argument("--dpolar-f", type=int, default=None)
    p.add_argument("--dpolar-g", type=int, default=None)

    p = add("homogenize", "mixed homogenization with radial and polar degree")
    p.add_argument("--poly", required=True)

    p = add("dehomogenize", "affine equation in a chart")
    p.add_argument("--form", default=None, help="form in Z0, Z1[, Z2]")
    p.add_argument("--poly", default=None, help="affine polynomial, homogenized first")
    p.add_argument("--chart", type=int, default=0)

    p = add("verify", "run the invariant checks")
    p.add_argument("--checks", default=None, help="comma-separated check names (default: all)")

    return parser


def _dispatch(command: str, args: argparse.Namespace) -> Tuple[Any, Any]:
    try:
        return HANDLERS[command](args)
    except ValueError as e:
        # bad numeric arguments (radius, sample count, empty trace)
        if isinstance(e, MixcurveError):
            raise
        raise UsageError(str(e)) from e


def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, default_log_level(), logging.WARNING)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(message)s")
    logging.getLogger().setLevel(level)


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    """
    Run one CLI invocation.

    Returns:
        exit code (0 success, 1 usage error, 2 inconclusive)
    """
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    command = argv[0] if argv and argv[0] in COMMANDS else None
    inputs: Dict[str, Any] = {}
    args = None

    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        _configure_logging(args.verbose)
        args.tol = get_tolerances(args.tol_scale)
        command = args.command
        inputs = {
            k: v for k, v in vars(args).items()
            if k not in ("command", "tol", "verbose", "report_dir") and v is not None
        }
        result, certification = _dispatch(command, args)
    except MixcurveError as e:
        payload = {
            "command": command,
            "input": inputs,
            "error": e.to_dict(),
            "certification": e.diagnostics or None,
            "version": __version__,
        }
        stdout.write(to_json(payload) + "\n")
        if isinstance(e, UsageError):
            if isinstance(e, MixParseError) and e.text:
                sys.stderr.write(e.pointer() + "\n")
            sys.stderr.write(f"❌ {e.message}\n")
            sys.stderr.write(GRAMMAR_HELP + "\n")
        else:
            sys.stderr.write(f"⚠️  inconclusive: {e.message}\n")
        _maybe_save(args, command, payload)
        return e.exit_code

    if command == "trace" and isinstance(result, str):
        stdout.write(result)
        return 0

    payload = {
        "command": command,
        "input": inputs,
        "result": result,
        "certification": certification,
        "version": __version__,
    }
    stdout.write(to_json(payload) + "\n")
    _maybe_save(args, command, payload)
    if command == "verify" and not result["success"]:
        return 2
    return 0


def _maybe_save(args: Optional[argparse.Namespace], command: Optional[str], payload: Dict[str, Any]) -> None:
    if args is not None and getattr(args, "report_dir", None):
        save_json_report(command or "mixcurve", payload, args.report_dir)


def main() -> None:
    sys.exit(run())
