"""Command line interface.

Subcommands
    boundary            sample the stability boundary curve (CSV or JSON)
    check               classify a scalar lambda or a matrix (JSON verdict)
    simulate            run a registered system and dump the trajectory (CSV)
    logistic-intervals  stable parameter intervals of the logistic map (JSON)

Exit codes: 0 stable/success, 1 unstable, 2 usage error, 3 boundary or
indeterminate.  Complex numbers on the command line use the literal form
a+bi (e.g. 0.8+0.7i); JSON files use {"re": ..., "im": ...}.  A JSON config
file passed via --config overrides the corresponding flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager

import numpy as np

from .kernel import ComplexOrder
from .solver import DIVERGENCE_CUTOFF, simulate_nonlinear
from .stability import (
    DEFAULT_SAMPLES,
    Stability,
    WindingError,
    boundary_curve,
    classify_lambda,
    classify_matrix,
    detect_self_intersection,
    is_simple_order,
    real_axis_intervals,
)
from .systems import build_system, equilibrium_verdict

EXIT_STABLE = 0
EXIT_OK = 0
EXIT_UNSTABLE = 1
EXIT_USAGE = 2
EXIT_INDETERMINATE = 3

_VERDICT_EXIT = {
    Stability.STABLE: EXIT_STABLE,
    Stability.UNSTABLE: EXIT_UNSTABLE,
    Stability.BOUNDARY: EXIT_INDETERMINATE,
}


def parse_complex_literal(text: str) -> complex:
    """Parse a+bi style literals ("0.8+0.7i", "-2i", "1.5")."""
    cleaned = text.strip().replace(" ", "").replace("I", "i").replace("j", "i")
    try:
        value = complex(cleaned.replace("i", "j"))
    except ValueError:
        raise ValueError(f"not a complex literal: {text!r}") from None
    if not (np.isfinite(value.real) and np.isfinite(value.imag)):
        raise ValueError(f"complex literal must be finite: {text!r}")
    return value


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex_literal(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _complex_json(value) -> dict:
    value = complex(value)
    return {"re": value.real, "im": value.imag}


def _json_to_complex(obj) -> complex:
    if isinstance(obj, dict):
        return complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))
    if isinstance(obj, str):
        return parse_complex_literal(obj)
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    raise ValueError(f"cannot interpret {obj!r} as a complex number")


def _order_json(order: ComplexOrder) -> dict:
    return {"u": order.u, "v": order.v}


@contextmanager
def _open_output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _apply_config(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    with open(args.config, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config file must contain a JSON object")
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if dest == "alpha":
            value = _json_to_complex(value)
        elif dest == "lam" or key == "lambda":
            dest = "lam"
            value = _json_to_complex(value)
        elif dest == "params":
            if not isinstance(value, dict):
                raise ValueError("config 'params' must be an object")
            merged = dict(getattr(args, "params", None) or {})
            merged.update({k: _json_to_complex(v) for k, v in value.items()})
            value = merged
        if not hasattr(args, dest):
            raise ValueError(f"config key {key!r} is not valid for this command")
        setattr(args, dest, value)


def _make_order(alpha: complex) -> ComplexOrder:
    try:
        return ComplexOrder.from_complex(alpha)
    except ValueError as exc:
        raise ValueError(f"--alpha: {exc}") from None


def _cmd_boundary(args: argparse.Namespace) -> int:
    order = _make_order(args.alpha)
    curve = boundary_curve(order, n_samples=args.samples)
    if args.format == "csv":
        with _open_output(args.output) as fh:
            fh.write("t,re,im\n")
            for t, p in zip(curve.t, curve.points):
                fh.write(f"{_fmt(t)},{_fmt(p.real)},{_fmt(p.imag)}\n")
    else:
        crossing = None if curve.is_simple else detect_self_intersection(curve)
        doc = {
            "order": _order_json(order),
            "is_simple": curve.is_simple,
            "self_intersection": (
                None if crossing is None else {"t1": crossing[0], "t2": crossing[1]}
            ),
            "samples": [
                [float(t), p.real, p.imag] for t, p in zip(curve.t, curve.points)
            ],
        }
        with _open_output(args.output) as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    if args.plot:
        from .reports import save_boundary_figure

        save_boundary_figure(curve, args.plot)
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    order = _make_order(args.alpha)
    if (args.lam is None) == (args.matrix is None):
        raise ValueError("provide exactly one of --lambda or --matrix")
    if args.lam is not None:
        verdict = classify_lambda(order, args.lam, n_samples=args.samples)
        target = {"lambda": _complex_json(args.lam)}
    else:
        with open(args.matrix, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        A = np.array([[_json_to_complex(entry) for entry in row] for row in raw])
        verdict = classify_matrix(order, A, n_samples=args.samples)
        target = {"matrix_dimension": int(A.shape[0])}
    doc = {"order": _order_json(order), "target": target}
    doc.update(verdict.as_dict())
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return _VERDICT_EXIT[verdict.status]


def _parse_x0(text: str) -> np.ndarray:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("--x0 must contain at least one component")
    return np.array([parse_complex_literal(p) for p in parts])


def _summary_path(args: argparse.Namespace):
    if args.summary:
        return args.summary
    if args.output:
        base = args.output
        if base.endswith(".csv"):
            base = base[: -len(".csv")]
        return base + ".summary.json"
    return None


def _cmd_simulate(args: argparse.Namespace) -> int:
    order = _make_order(args.alpha)
    if args.steps < 0:
        raise ValueError("--steps must be >= 0")
    system = build_system(args.system, args.params or {})
    x0 = _parse_x0(args.x0)
    if len(x0) != system.dimension:
        raise ValueError(
            f"--x0 has dimension {len(x0)}, system {args.system!r} needs {system.dimension}"
        )
    traj = simulate_nonlinear(
        order, system, x0, args.steps, divergence_cutoff=args.cutoff
    )

    with _open_output(args.output) as fh:
        cols = ["t"]
        for k in range(system.dimension):
            cols += [f"re_x{k + 1}", f"im_x{k + 1}", f"abs_x{k + 1}"]
        fh.write(",".join(cols) + "\n")
        for t, state in enumerate(traj.states):
            row = [_fmt(t)]
            for xk in state:
                row += [_fmt(xk.real), _fmt(xk.imag), _fmt(abs(xk))]
            fh.write(",".join(row) + "\n")

    verdict_doc = None
    if system.equilibria:
        dists = [float(np.linalg.norm(x0 - eq)) for eq in system.equilibria]
        nearest = system.equilibria[int(np.argmin(dists))]
        verdict_doc = equilibrium_verdict(order, system, nearest).as_dict()
        verdict_doc["equilibrium"] = [_complex_json(c) for c in nearest]
    summary = {
        "order": _order_json(order),
        "system": args.system,
        "params": {k: _complex_json(v) for k, v in (args.params or {}).items()},
        "steps": args.steps,
        "steps_run": len(traj.states) - 1,
        "diverged_at": traj.diverged_at,
        "final_norm": float(np.linalg.norm(traj.final)),
        "verdict": None if verdict_doc is None else verdict_doc["verdict"],
        "evidence": None if verdict_doc is None else verdict_doc["evidence"],
    }
    spath = _summary_path(args)
    if spath:
        with open(spath, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    if args.plot:
        from .reports import save_trajectory_figure

        save_trajectory_figure(traj, args.plot, title=f"{args.system}, order {order}")
    return EXIT_OK


def _cmd_logistic_intervals(args: argparse.Namespace) -> int:
    order = _make_order(args.alpha)
    if not is_simple_order(order):
        doc = {
            "order": _order_json(order),
            "status": "unstable for all eigenvalues",
            "intervals": {"x1": [], "x2": []},
        }
        json.dump(doc, sys.stdout, indent=2)
        sys.stdout.write("\n")
        return EXIT_OK
    x1 = real_axis_intervals(order, n_samples=args.samples, resolution=args.resolution)
    x2 = sorted((2.0 - hi, 2.0 - lo) for lo, hi in x1)
    doc = {
        "order": _order_json(order),
        "status": "ok",
        "intervals": {
            "x1": [[lo, hi] for lo, hi in x1],
            "x2": [[lo, hi] for lo, hi in x2],
        },
    }
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    if args.plot:
        from .reports import save_boundary_figure

        save_boundary_figure(boundary_curve(order), args.plot, intervals=x1)
    return EXIT_OK


class _ParamAction(argparse.Action):
    def __call__(self, parser, namespace, value, option_string=None):
        params = getattr(namespace, self.dest) or {}
        if "=" not in value:
            raise argparse.ArgumentTypeError(
                f"--param expects key=value, got {value!r}"
            )
        key, _, raw = value.partition("=")
        try:
            params[key.strip()] = parse_complex_literal(raw)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
        setattr(namespace, self.dest, params)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfracdiff",
        description="Complex-order fractional difference equations: "
        "simulation and stability analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--alpha", type=_complex_arg, required=True,
                       help="order u+vi with u in (0, 1]")
        p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES,
                       help="boundary curve sample count")
        p.add_argument("--config", default=None,
                       help="JSON file whose keys override flags")

    p_boundary = sub.add_parser("boundary", help="sample the stability boundary curve")
    common(p_boundary)
    p_boundary.add_argument("--format", choices=("csv", "json"), default="csv")
    p_boundary.add_argument("--output", default=None, help="output path (default stdout)")
    p_boundary.add_argument("--plot", default=None, help="also render a figure to this path")
    p_boundary.set_defaults(func=_cmd_boundary)

    p_check = sub.add_parser("check", help="classify a lambda or a matrix")
    common(p_check)
    p_check.add_argument("--lambda", dest="lam", type=_complex_arg, default=None)
    p_check.add_argument("--matrix", default=None,
                         help="JSON file with a square matrix of {re, im} entries")
    p_check.set_defaults(func=_cmd_check)

    p_sim = sub.add_parser("simulate", help="simulate a registered system")
    common(p_sim)
    p_sim.add_argument("--system", required=True,
                       help="system name: linear, logistic, coupled2d")
    p_sim.add_argument("--param", dest="params", action=_ParamAction, default=None,
                       metavar="KEY=VALUE", help="system parameter (repeatable)")
    p_sim.add_argument("--x0", required=True,
                       help="initial state, comma-separated complex literals")
    p_sim.add_argument("--steps", type=int, required=True)
    p_sim.add_argument("--cutoff", type=float, default=DIVERGENCE_CUTOFF,
                       help="divergence cutoff on the state norm")
    p_sim.add_argument("--output", default=None, help="CSV path (default stdout)")
    p_sim.add_argument("--summary", default=None,
                       help="summary JSON path (default <output>.summary.json)")
    p_sim.add_argument("--plot", default=None, help="also render a figure to this path")
    p_sim.set_defaults(func=_cmd_simulate)

    p_li = sub.add_parser("logistic-intervals",
                          help="stable growth-parameter intervals of the logistic map")
    common(p_li)
    p_li.add_argument("--resolution", type=float, default=1e-2,
                      help="collapse spiral structure within this distance of 1 "
                           "(0 keeps all resolved crossings)")
    p_li.add_argument("--plot", default=None, help="also render a figure to this path")
    p_li.set_defaults(func=_cmd_logistic_intervals)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        _apply_config(args)
        return args.func(args)
    except WindingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
