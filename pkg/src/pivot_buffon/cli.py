"""Command-line interface: ``pivot-buffon exact|simulate|validate|sweep``.

Data goes to stdout as one JSON document (default) or CSV with a header row;
diagnostics go to stderr. Exit codes: 0 success, 1 validation FAIL,
2 usage or constraint error.

JSON layout::

    {"params": {...}, "exact": {...}, "estimate": {...}, "tests": {...}}

Only the sections relevant to the command are present; ``sweep`` puts one
record per ratio in an ``"exact"`` list. Floats are written with 17
significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Any

from . import closed_form, montecarlo, stats
from .elliptic import complete_e
from .exceptions import PivotBuffonError
from .geometry import HitDistribution, Lattice, PivotNeedle, Source, chord_length

SEED_ENV = "PIVOT_BUFFON_SEED"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


# -- rendering ----------------------------------------------------------------

def format_number(x: Any) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if math.isfinite(x):
        return format(x, ".17g")
    return "null"


def render_json(obj: Any, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {render_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(render_json(v, indent + 1) for v in obj) + "]"
        items = [pad + render_json(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    return format_number(obj)


def _flatten(obj: Any, prefix: str = "") -> dict[str, Any]:
    out: dict[str, Any] = {}
    if isinstance(obj, dict):
        for k, v in obj.items():
            out.update(_flatten(v, f"{prefix}{k}."))
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            out.update(_flatten(v, f"{prefix}{i}."))
    else:
        out[prefix[:-1]] = obj
    return out


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return format_number(v)


def render_csv(rows: list[dict[str, Any]]) -> str:
    flat = [_flatten(r) for r in rows]
    header = list(flat[0])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in flat:
        writer.writerow([_cell(r.get(h)) for h in header])
    return buf.getvalue()


def emit(doc: dict[str, Any], fmt: str, out) -> None:
    if fmt == "json":
        out.write(render_json(doc) + "\n")
        return
    rows = doc.get("exact") if isinstance(doc.get("exact"), list) else None
    if rows is not None:
        out.write(render_csv(rows))
    else:
        out.write(render_csv([doc]))


# -- record builders -----------------------------------------------------------

def _distribution(dist: HitDistribution) -> dict[str, Any]:
    return {"p0": dist.p0, "p1": dist.p1, "p2": dist.p2}


def exact_record(needle: PivotNeedle, lattice: Lattice, phi: float | None = None) -> dict[str, Any]:
    m = closed_form.modulus(needle)
    rec: dict[str, Any] = {}
    if phi is None:
        dist = closed_form.hit_distribution(needle, lattice)
        rec["source"] = Source.EXACT.value
        rec.update(_distribution(dist))
        rec["p_union"] = dist.p1 + dist.p2
        rec["p_both"] = dist.p2
    else:
        dist = closed_form.fixed_angle_distribution(needle, lattice, phi)
        rec["source"] = Source.FIXED_ANGLE_EXACT.value
        rec.update(_distribution(dist))
        rec["p_union"] = dist.p1 + dist.p2
        rec["p_both"] = dist.p2
        rec["chord"] = chord_length(needle, phi)
    rec["k_squared"] = m.k_squared
    rec["E_k"] = complete_e(m)
    rec["mean_chord"] = closed_form.mean_chord(needle)
    rec["expected_n"] = closed_form.expected_intersections(needle, lattice)
    return rec


def estimate_record(report: montecarlo.EstimateReport) -> dict[str, Any]:
    c = report.counts
    return {
        "source": Source.MONTE_CARLO.value,
        "counts": {
            "c0": c.c0, "c1": c.c1, "c2": c.c2, "c_other": c.c_other, "sum_n": c.sum_n,
        },
        **_distribution(report.p_hat),
        "std_errors": list(report.std_errors),
        "wilson_95": [list(iv) for iv in report.intervals],
        "mean_n": report.mean_n_hat,
        "mean_n_std_error": report.mean_n_std_error,
    }


def tests_record(verdict: stats.Verdict) -> dict[str, Any]:
    chi = verdict.chi_square
    return {
        "z": list(verdict.z),
        "z_limit": verdict.z_limit,
        "chi_square": {
            "statistic": chi.statistic,
            "dof": chi.dof,
            "p_value": chi.p_value,
            "categories": 2 if verdict.collapsed else 3,
        },
        "p_value_limit": verdict.p_value_limit,
        "verdict": "PASS" if verdict.passed else "FAIL",
    }


def sweep_records(total: float, d: float, steps: int) -> list[dict[str, Any]]:
    lattice = Lattice(d)
    rows = []
    for i in range(steps + 1):
        r = i / steps
        a = r * total
        b = total - a
        needle = PivotNeedle(a, b)
        ex = exact_record(needle, lattice)
        rows.append({
            "r": r, "a": a, "b": b,
            "p0": ex["p0"], "p1": ex["p1"], "p2": ex["p2"],
            "k_squared": ex["k_squared"], "E_k": ex["E_k"], "mean_chord": ex["mean_chord"],
        })
    return rows


# -- argument handling ---------------------------------------------------------

def _count(text: str) -> int:
    try:
        value = float(text.replace("_", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        raise UsageError(f"--seed is required (or set {SEED_ENV})")
    try:
        return _seed(env)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{SEED_ENV}: {exc}")


def _geometry(args) -> tuple[PivotNeedle, Lattice]:
    for name in ("a", "b", "d"):
        if not math.isfinite(getattr(args, name)):
            raise UsageError(f"--{name} must be finite")
    needle = PivotNeedle(args.a, args.b)
    lattice = Lattice(args.d)
    closed_form.check_fits(needle, lattice)
    return needle, lattice


def _params(args, **extra) -> dict[str, Any]:
    out: dict[str, Any] = {"a": args.a, "b": args.b, "d": args.d}
    if getattr(args, "phi", None) is not None:
        out["phi"] = args.phi
    out.update(extra)
    return out


def _simulate(args, needle, lattice) -> tuple[int, montecarlo.EstimateReport]:
    seed = _resolve_seed(args)
    if args.n < 1:
        raise UsageError(f"--n must be >= 1, got {args.n}")
    if args.chunks < 1:
        raise UsageError(f"--chunks must be >= 1, got {args.chunks}")
    config = montecarlo.SimulationConfig(needle, lattice, args.n, seed, args.chunks)
    if args.phi is None:
        report = montecarlo.run(config, workers=args.workers)
    else:
        report = montecarlo.run_fixed_angle(config, args.phi, workers=args.workers)
    return seed, report


def cmd_exact(args, out) -> int:
    needle, lattice = _geometry(args)
    emit({"params": _params(args), "exact": exact_record(needle, lattice, args.phi)}, args.format, out)
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    needle, lattice = _geometry(args)
    seed, report = _simulate(args, needle, lattice)
    doc = {"params": _params(args, n=args.n, seed=seed), "estimate": estimate_record(report)}
    emit(doc, args.format, out)
    return EXIT_OK


def perturb_p1(exact: HitDistribution, scale: float) -> HitDistribution:
    """Scale ``p1`` and absorb the difference in ``p0`` (power-check hook)."""
    p1 = exact.p1 * scale
    return HitDistribution(exact.p0 - (p1 - exact.p1), p1, exact.p2, source=exact.source)


def cmd_validate(args, out) -> int:
    needle, lattice = _geometry(args)
    seed, report = _simulate(args, needle, lattice)
    if args.phi is None:
        exact = closed_form.hit_distribution(needle, lattice)
    else:
        exact = closed_form.fixed_angle_distribution(needle, lattice, args.phi)
    if args.inject_p1_scale != 1.0:
        exact = perturb_p1(exact, args.inject_p1_scale)
    verdict = stats.compare(report, exact)
    exact_rec = exact_record(needle, lattice, args.phi)
    exact_rec.update(_distribution(exact))
    doc = {
        "params": _params(args, n=args.n, seed=seed),
        "exact": exact_rec,
        "estimate": estimate_record(report),
        "tests": tests_record(verdict),
    }
    emit(doc, args.format, out)
    line = "PASS" if verdict.passed else "FAIL"
    zs = ", ".join(f"{z:+.3f}" for z in verdict.z)
    print(f"{line}: z = ({zs}), chi-square p-value = {verdict.chi_square.p_value:.4g}", file=sys.stderr)
    return EXIT_OK if verdict.passed else EXIT_FAIL


def cmd_sweep(args, out) -> int:
    if args.steps < 1:
        raise UsageError(f"--steps must be >= 1, got {args.steps}")
    if not args.total > 0:
        raise UsageError(f"--total must be > 0, got {args.total}")
    closed_form.check_fits(PivotNeedle(args.total, 0.0), Lattice(args.d))
    rows = sweep_records(args.total, args.d, args.steps)
    emit({"params": {"d": args.d, "total": args.total, "steps": args.steps}, "exact": rows}, args.format, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pivot-buffon",
        description="Hitting probabilities of a two-segment pivot needle on a lattice of parallel lines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def geometry_flags(p, phi=True):
        p.add_argument("--a", type=float, required=True, help="length of the first segment")
        p.add_argument("--b", type=float, required=True, help="length of the second segment")
        p.add_argument("--d", type=float, required=True, help="spacing of the lattice lines")
        if phi:
            p.add_argument("--phi", type=float, default=None, help="hold the opening angle fixed (radians)")

    def sim_flags(p):
        p.add_argument("--n", type=_count, required=True, help="number of throws")
        p.add_argument("--seed", type=_seed, default=None, help=f"64-bit seed (default: ${SEED_ENV})")
        p.add_argument("--chunks", type=int, default=1, help="number of chunks (result is independent of it)")
        p.add_argument("--workers", type=int, default=None, help="threads used to run chunks")

    p = sub.add_parser("exact", help="evaluate the exact hit distribution")
    geometry_flags(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of the hit distribution")
    geometry_flags(p)
    sim_flags(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="compare a simulation with the exact distribution")
    geometry_flags(p)
    sim_flags(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--inject-p1-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", help="exact values over the ratio a/(a+b) at fixed a+b")
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--total", type=float, required=True, help="fixed a + b")
    p.add_argument("--steps", type=int, required=True, help="ratio sampled at steps+1 evenly spaced points")
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    # Render into a buffer so that an error leaves stdout empty.
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except (UsageError, PivotBuffonError, ValueError) as exc:
        print(f"pivot-buffon {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.write(buf.getvalue())
    out.flush()
    return code


if __name__ == "__main__":
    raise SystemExit(main())
