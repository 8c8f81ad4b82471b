"""Command line interface.

Subcommands: check, construct, tighten, connect, equiv. Global flags --seed,
--tol, --quiet, --json apply to every subcommand; --tol is always in norm
units (membership and convergence use its square as the residual bound).
Exit codes: 0 success, 1 a check or computation failed, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .core import frame_bounds, is_frame, is_funtf, is_tight, norms_squared
from .errors import ConnectError, InadmissibleError, NotAFrameError
from .fiber import FiberTarget
from .fileio import read_frame, read_target, write_frame, write_path
from .flows import (
    FlowOptions,
    alternate_projections,
    fiber_residual,
    flow_to_fiber,
    project_to_fiber,
)
from .design import construct_frame, construct_frame_with_operator, is_admissible
from .equivalence import unitary_equivalent
from .homotopy import ConnectOptions, connect, validate_path
from .momentum import is_regular_value, momentum


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fiberframe",
        description="Finite frames with prescribed frame operator and norms: "
        "check, construct, repair, connect.",
    )
    p.add_argument("--seed", type=int, default=0, help="seed for all randomized steps")
    p.add_argument("--tol", type=float, default=1e-8, help="tolerance in norm units")
    p.add_argument("--quiet", action="store_true", help="suppress the header line")
    p.add_argument("--json", dest="as_json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="verify frame properties and optional fiber membership")
    c.add_argument("frame", help="frame file (.json or .csv)")
    c.add_argument("--target", help="fiber target file (JSON)")

    c = sub.add_parser("construct", help="build a frame with prescribed spectrum and norms")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--lambda", dest="lam", type=float, nargs="+", help="frame operator spectrum")
    g.add_argument("--S", dest="operator_file", help="JSON file with the frame operator")
    c.add_argument("--r", type=float, nargs="+", required=True, help="squared column norms")
    c.add_argument("--out", help="output frame file (.json or .csv); default stdout JSON")

    c = sub.add_parser("tighten", help="repair a frame onto a fiber by descent/projection")
    c.add_argument("frame", help="frame file (.json or .csv)")
    c.add_argument("--target", help="fiber target file; default: tight operator, current norms")
    c.add_argument(
        "--method",
        choices=("auto", "gradient", "alternating"),
        default="auto",
        help="repair route (auto = alternating with gradient fallback)",
    )
    c.add_argument("--max-iters", type=int, default=2000)
    c.add_argument("--out", help="output frame file for the repaired frame")

    c = sub.add_parser("connect", help="trace an on-fiber path between two frames")
    c.add_argument("frame_from", help="start frame file")
    c.add_argument("frame_to", help="end frame file")
    c.add_argument("target", help="fiber target file (JSON)")
    c.add_argument("--delta", type=float, default=0.05, help="max relative step between samples")
    c.add_argument("--out", required=True, help="output path file (JSON Lines)")

    c = sub.add_parser("equiv", help="decide unitary equivalence of two frames")
    c.add_argument("frame_a")
    c.add_argument("frame_b")
    return p


class _Output:
    """Collects results; emits a single JSON object or plain text lines."""

    def __init__(self, args):
        self.as_json = args.as_json
        self.quiet = args.quiet
        self.payload = {
            "version": __version__,
            "seed": args.seed,
            "tol": args.tol,
            "command": args.command,
        }
        if not (self.quiet or self.as_json):
            print(f"fiberframe {__version__} | seed={args.seed} tol={args.tol:g}")

    def add(self, key, value):
        self.payload[key] = value
        if not self.as_json:
            print(f"{key}: {value}")

    def flush(self):
        if self.as_json:
            print(json.dumps(self.payload))


def _frame_json_obj(F: np.ndarray) -> dict:
    return {"k": F.shape[0], "N": F.shape[1], "re": F.real.tolist(), "im": F.imag.tolist()}


def _cmd_check(args, out: _Output) -> int:
    F = read_frame(args.frame)
    out.add("k", F.shape[0])
    out.add("N", F.shape[1])
    ok = is_frame(F)
    out.add("is_frame", ok)
    failed = not ok
    if ok:
        b = frame_bounds(F)
        out.add("lower_bound", b.lower)
        out.add("upper_bound", b.upper)
        out.add("is_tight", is_tight(F, args.tol))
        out.add("is_funtf", is_funtf(F, args.tol))
    mom = momentum(F)
    out.add("momentum_consistency", mom.consistency_residual())
    if args.target:
        target = read_target(args.target)
        if F.shape != (target.k, target.N):
            raise ValueError("frame shape does not match the target")
        phi = fiber_residual(F, target)
        on_fiber = phi <= args.tol**2
        out.add("fiber_residual", phi)
        out.add("on_fiber", on_fiber)
        reg = is_regular_value(target.operator, -0.5 * target.norms_sq)
        out.add("target_regular_value", bool(reg))
        adm = is_admissible(target.spectrum(), target.norms_sq)
        out.add("target_admissible", bool(adm))
        failed = failed or not on_fiber
    return 1 if failed else 0


def _cmd_construct(args, out: _Output) -> int:
    r = np.asarray(args.r, dtype=float)
    rng = np.random.default_rng(args.seed)
    try:
        if args.operator_file:
            S = read_target_operator(args.operator_file)
            F = construct_frame_with_operator(S, r, rng=rng)
        else:
            F = construct_frame(np.asarray(args.lam, dtype=float), r, rng=rng)
    except InadmissibleError as exc:
        out.add("admissible", False)
        out.add("violation", str(exc))
        out.flush()
        return 1
    out.add("admissible", True)
    out.add("norm_error", float(np.max(np.abs(norms_squared(F) - r))))
    if args.out:
        write_frame(F, args.out)
        out.add("out", args.out)
    else:
        out.payload["frame"] = _frame_json_obj(F)
        if not out.as_json:
            print(json.dumps(out.payload["frame"]))
    return 0


def read_target_operator(path) -> np.ndarray:
    """Operator from a target file ({"S": ...}) or a bare {"re", "im"} matrix file."""
    with open(path, "r", encoding="utf-8") as f:
        obj = json.load(f)
    if isinstance(obj, dict) and "S" in obj:
        obj = obj["S"]
    if not isinstance(obj, dict) or "re" not in obj or "im" not in obj:
        raise ValueError("operator file needs an 'S' entry or 're'/'im' arrays")
    return np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)


def _cmd_tighten(args, out: _Output) -> int:
    F0 = read_frame(args.frame)
    if args.target:
        target = read_target(args.target)
    else:
        r = norms_squared(F0)
        c = float(np.sum(r)) / F0.shape[0]
        target = FiberTarget(operator=c * np.eye(F0.shape[0], dtype=complex), norms_sq=r)
    opts = FlowOptions(max_iters=args.max_iters, tol=args.tol**2)
    runner = {
        "gradient": flow_to_fiber,
        "alternating": alternate_projections,
        "auto": project_to_fiber,
    }[args.method]
    F, report = runner(F0, target, opts)
    out.add("method", report.method)
    out.add("status", report.status)
    out.add("iterations", report.iterations)
    out.add("final_residual", report.final_residual)
    if report.message:
        out.add("message", report.message)
    if args.out:
        write_frame(F, args.out)
        out.add("out", args.out)
    return 0 if report.converged else 1


def _cmd_connect(args, out: _Output) -> int:
    F0 = read_frame(args.frame_from)
    F1 = read_frame(args.frame_to)
    target = read_target(args.target)
    opts = ConnectOptions(path_tol=args.tol, delta=args.delta, seed=args.seed)
    for name, F in (("from", F0), ("to", F1)):
        phi = fiber_residual(F, target)
        if phi > opts.path_tol**2:
            out.add("status", "endpoint_off_fiber")
            out.add("endpoint", name)
            out.add("fiber_residual", phi)
            out.flush()
            return 1
    try:
        path = connect(F0, F1, target, opts)
    except ConnectError as exc:
        out.add("status", "failed")
        out.add("error", str(exc))
        if exc.t is not None:
            out.add("t", exc.t)
        out.flush()
        return 1
    check = validate_path(path, tol=opts.path_tol, delta=opts.delta, endpoints=(F0, F1))
    write_path(
        path,
        args.out,
        extra={"version": __version__, "seed": args.seed, "path_tol": opts.path_tol, "delta": opts.delta},
    )
    out.add("status", "connected")
    out.add("samples", len(path))
    out.add("max_residual", check.max_residual)
    out.add("max_step", check.max_step)
    out.add("out", args.out)
    return 0


def _cmd_equiv(args, out: _Output) -> int:
    Fa = read_frame(args.frame_a)
    Fb = read_frame(args.frame_b)
    U = unitary_equivalent(Fa, Fb, tol=args.tol)
    if U is None:
        out.add("equivalent", False)
        return 1
    out.add("equivalent", True)
    out.payload["unitary"] = {"re": U.real.tolist(), "im": U.imag.tolist()}
    if not out.as_json:
        print(json.dumps(out.payload["unitary"]))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Output(args)
    handlers = {
        "check": _cmd_check,
        "construct": _cmd_construct,
        "tighten": _cmd_tighten,
        "connect": _cmd_connect,
        "equiv": _cmd_equiv,
    }
    try:
        code = handlers[args.command](args, out)
    except (NotAFrameError, InadmissibleError, ConnectError) as exc:
        out.add("error", str(exc))
        out.flush()
        return 1
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
