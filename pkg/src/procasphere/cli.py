"""Command-line front end.

Every computing subcommand prints a JSON document with two top-level keys:
"manifest" (the command, package version, backend and the fully resolved
inputs) and "result". The manifest is sufficient to re-run the computation,
which is exactly what the replay subcommand does; since the numerics are
deterministic, a replay must reproduce the stored result bit for bit.

Exit codes: 0 success, 2 usage or parameter error, 3 failure to converge.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import replace

from . import __version__
from .backend import active_backend
from .bessel import eval_family
from .determinants import (
    SpectralPoint,
    det_q0_expansion,
    det_q0_factored,
    det_q_direct,
    det_q_expansion,
    expansion_coefficients,
    log_delta_tm,
    log_delta_tm_massless,
    reference_expansion_coefficients,
)
from .spectrum import (
    ConvergenceError,
    ProblemSpec,
    default_fd_step,
    energy,
    force,
    sweep_mass,
    sweep_ratio,
)
from .units import convert_units, energy_scale_joules


class UsageError(Exception):
    """Bad flag combination or parameter value; maps to exit code 2."""


def _resolve_threads(flag_value: int | None) -> int:
    if flag_value is not None:
        n = flag_value
    else:
        env = os.environ.get("PROCASPHERE_THREADS")
        if env is None or env.strip() == "":
            n = 1
        else:
            try:
                n = int(env)
            except ValueError:
                raise UsageError(
                    f"PROCASPHERE_THREADS must be an integer, got {env!r}")
    if n < 1:
        raise UsageError(f"threads must be >= 1, got {n}")
    return n


def _resolve_problem(args) -> ProblemSpec:
    dimless = args.ratio is not None or args.mu is not None
    physical = (args.a1_m is not None or args.a2_m is not None
                or args.mass_ev is not None)
    if dimless and physical:
        raise UsageError(
            "give either --ratio/--mu or --a1-m/--a2-m/--mass-ev, not both")
    if physical:
        if args.a1_m is None or args.a2_m is None:
            raise UsageError("physical input needs both --a1-m and --a2-m")
        ratio, mu = convert_units(
            args.a1_m, args.a2_m,
            args.mass_ev if args.mass_ev is not None else 0.0)
    else:
        if args.ratio is None:
            raise UsageError(
                "give --ratio (plus optional --mu) or radii in meters")
        ratio = args.ratio
        mu = args.mu if args.mu is not None else 0.0
    if args.si and args.a1_m is None:
        raise UsageError("--si needs radii in meters (--a1-m/--a2-m)")
    return ProblemSpec(ratio=ratio, mu=mu, rel_tol=args.rel_tol,
                       l_cap=args.l_cap, mode=args.mode)


def _manifest(command: str, inputs: dict) -> dict:
    return {
        "command": command,
        "package": "procasphere",
        "version": __version__,
        "backend": active_backend(),
        "inputs": inputs,
    }


def _emit(doc: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(doc, indent=2))
        return
    result = doc["result"]
    keys = [k for k in result if k != "wall_time_s"]
    print("# " + json.dumps(doc["manifest"]))
    print(",".join(keys))
    cells = []
    for k in keys:
        v = result[k]
        if v is None:
            cells.append("")
        elif isinstance(v, float):
            cells.append(repr(v))
        else:
            cells.append(str(v))
    print(",".join(cells))


# -- result builders (shared between the commands and replay) ---------------

def _energy_result(spec: ProblemSpec, threads: int,
                   si_a1: float | None) -> dict:
    if spec.mode == "total":
        te = energy(replace(spec, mode="te"), threads=threads)
        tm = energy(replace(spec, mode="tm"), threads=threads)
        result = {
            "e_te": te.value,
            "e_tm": tm.value,
            "e_total": te.value + tm.value,
            "abs_error_estimate": (te.abs_error_estimate
                                   + tm.abs_error_estimate),
            "l_used": max(te.l_used, tm.l_used),
            "integrand_evals": te.integrand_evals + tm.integrand_evals,
        }
    else:
        r = energy(spec, threads=threads)
        result = {
            "e_te": None,
            "e_tm": None,
            "e_total": None,
            "abs_error_estimate": r.abs_error_estimate,
            "l_used": r.l_used,
            "integrand_evals": r.integrand_evals,
        }
        result["e_" + spec.mode] = r.value
    if si_a1 is not None:
        e0 = energy_scale_joules(si_a1)
        for key in ("e_te", "e_tm", "e_total"):
            v = result[key]
            result[key + "_joules"] = None if v is None else v * e0
    return result


def _force_result(spec: ProblemSpec, fd_step: float | None, threads: int,
                  si_a1: float | None) -> dict:
    f = force(spec, fd_step=fd_step, threads=threads)
    result = {
        "force": f,
        "fd_step": fd_step if fd_step is not None else default_fd_step(spec),
        "mode": spec.mode,
    }
    if si_a1 is not None:
        # F = -dE/da2 = (E0/a1) * (-dE_hat/dratio)
        result["force_newtons"] = f * energy_scale_joules(si_a1) / si_a1
    return result


def _sweep_ratio_result(inputs: dict, threads: int) -> dict:
    template = ProblemSpec(ratio=inputs["from"], mu=inputs["mu"],
                           rel_tol=inputs["rel_tol"],
                           l_cap=int(inputs["l_cap"]), mode="total")
    table = sweep_ratio(template, inputs["from"], inputs["to"],
                        int(inputs["steps"]), threads=threads)
    return json.loads(table.to_json()), table


def _sweep_mass_result(inputs: dict, threads: int) -> dict:
    template = ProblemSpec(ratio=inputs["ratio"], mu=0.0,
                           rel_tol=inputs["rel_tol"],
                           l_cap=int(inputs["l_cap"]), mode="total")
    table = sweep_mass(template, [float(m) for m in inputs["mu_values"]],
                       threads=threads)
    return json.loads(table.to_json()), table


# -- subcommands -------------------------------------------------------------

def _cmd_energy(args) -> int:
    threads = _resolve_threads(args.threads)
    spec = _resolve_problem(args)
    inputs = {
        "ratio": spec.ratio, "mu": spec.mu, "rel_tol": spec.rel_tol,
        "l_cap": spec.l_cap, "mode": spec.mode, "threads": threads,
        "si": bool(args.si), "a1_m": args.a1_m, "a2_m": args.a2_m,
        "mass_ev": args.mass_ev,
    }
    t0 = time.perf_counter()
    result = _energy_result(spec, threads, args.a1_m if args.si else None)
    result["wall_time_s"] = time.perf_counter() - t0
    _emit({"manifest": _manifest("energy", inputs), "result": result},
          args.fmt)
    return 0


def _cmd_force(args) -> int:
    threads = _resolve_threads(args.threads)
    spec = _resolve_problem(args)
    inputs = {
        "ratio": spec.ratio, "mu": spec.mu, "rel_tol": spec.rel_tol,
        "l_cap": spec.l_cap, "mode": spec.mode, "threads": threads,
        "si": bool(args.si), "a1_m": args.a1_m, "a2_m": args.a2_m,
        "mass_ev": args.mass_ev, "fd_step": args.fd_step,
    }
    t0 = time.perf_counter()
    result = _force_result(spec, args.fd_step, threads,
                           args.a1_m if args.si else None)
    result["wall_time_s"] = time.perf_counter() - t0
    _emit({"manifest": _manifest("force", inputs), "result": result},
          args.fmt)
    return 0


def _cmd_sweep_ratio(args) -> int:
    threads = _resolve_threads(args.threads)
    inputs = {
        "from": args.ratio_from, "to": args.ratio_to, "steps": args.steps,
        "mu": args.mu, "rel_tol": args.rel_tol, "l_cap": args.l_cap,
        "threads": threads,
    }
    t0 = time.perf_counter()
    result, table = _sweep_ratio_result(inputs, threads)
    wall = time.perf_counter() - t0
    if args.fmt == "csv":
        sys.stdout.write(table.to_csv())
    else:
        result["wall_time_s"] = wall
        print(json.dumps(
            {"manifest": _manifest("sweep-ratio", inputs), "result": result},
            indent=2))
    return 0


def _cmd_sweep_mass(args) -> int:
    threads = _resolve_threads(args.threads)
    try:
        mu_values = [float(tok) for tok in args.mu_values.split(",") if tok]
    except ValueError:
        raise UsageError(
            f"--mu-values must be comma-separated numbers, got {args.mu_values!r}")
    inputs = {
        "mu_values": mu_values, "ratio": args.ratio, "rel_tol": args.rel_tol,
        "l_cap": args.l_cap, "threads": threads,
    }
    t0 = time.perf_counter()
    result, table = _sweep_mass_result(inputs, threads)
    wall = time.perf_counter() - t0
    if args.fmt == "csv":
        sys.stdout.write(table.to_csv())
    else:
        result["wall_time_s"] = wall
        print(json.dumps(
            {"manifest": _manifest("sweep-mass", inputs), "result": result},
            indent=2))
    return 0


def _strip_volatile(obj):
    if isinstance(obj, dict):
        return {k: _strip_volatile(v) for k, v in obj.items()
                if k != "wall_time_s"}
    if isinstance(obj, list):
        return [_strip_volatile(v) for v in obj]
    return obj


def _cmd_replay(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        doc = json.load(fh)
    man = doc["manifest"]
    inputs = man["inputs"]
    command = man["command"]
    if command == "energy":
        spec = ProblemSpec(ratio=inputs["ratio"], mu=inputs["mu"],
                           rel_tol=inputs["rel_tol"],
                           l_cap=int(inputs["l_cap"]), mode=inputs["mode"])
        fresh = _energy_result(spec, int(inputs["threads"]),
                               inputs["a1_m"] if inputs.get("si") else None)
    elif command == "force":
        spec = ProblemSpec(ratio=inputs["ratio"], mu=inputs["mu"],
                           rel_tol=inputs["rel_tol"],
                           l_cap=int(inputs["l_cap"]), mode=inputs["mode"])
        fresh = _force_result(spec, inputs.get("fd_step"),
                              int(inputs["threads"]),
                              inputs["a1_m"] if inputs.get("si") else None)
    elif command == "sweep-ratio":
        fresh, _ = _sweep_ratio_result(inputs, int(inputs["threads"]))
    elif command == "sweep-mass":
        fresh, _ = _sweep_mass_result(inputs, int(inputs["threads"]))
    else:
        raise UsageError(f"cannot replay command {command!r}")
    stored = json.dumps(_strip_volatile(doc["result"]), sort_keys=True)
    redone = json.dumps(_strip_volatile(fresh), sort_keys=True)
    if stored == redone:
        print(f"replay ok: {args.file} ({command})")
        return 0
    print(f"replay mismatch for {args.file} ({command})", file=sys.stderr)
    print(f"stored: {stored}", file=sys.stderr)
    print(f"redone: {redone}", file=sys.stderr)
    return 1


def _cmd_selftest(args) -> int:
    threads = _resolve_threads(args.threads)
    failures = 0

    def check(name, fn):
        nonlocal failures
        try:
            fn()
            print(f"ok - {name}")
        except Exception as exc:
            failures += 1
            print(f"FAIL - {name}: {exc}")

    print(f"ok - backend: {active_backend()}")

    def wronskian():
        worst = 0.0
        for l in (0, 1, 5, 40):
            for z in (1e-3, 1.0, 30.0, 200.0):
                f = eval_family(l, z)
                res = (f.s * f.e_prime - f.s_prime * f.e).to_float() + 1.0
                worst = max(worst, abs(res))
        if worst > 1e-12:
            raise AssertionError(f"worst residual {worst:.3e}")

    def det_routes():
        pts = (SpectralPoint(l=1, xi_hat=0.5, mu=0.3, ratio=1.5),
               SpectralPoint(l=5, xi_hat=2.0, mu=1.0, ratio=1.2),
               SpectralPoint(l=12, xi_hat=8.0, mu=0.5, ratio=2.0),
               SpectralPoint(l=3, xi_hat=0.05, mu=2.0, ratio=1.1))
        for p in pts:
            rel = abs((det_q_expansion(p) / det_q_direct(p)).to_float() - 1.0)
            if rel > 1e-9:
                raise AssertionError(f"coupled det mismatch {rel:.3e} at {p}")
            rel0 = abs(
                (det_q0_expansion(p) / det_q0_factored(p)).to_float() - 1.0)
            if rel0 > 1e-10:
                raise AssertionError(
                    f"decoupled det mismatch {rel0:.3e} at {p}")
            for orders in (expansion_coefficients(p),
                           reference_expansion_coefficients(p)):
                if any(o.sign() != 1.0 for o in orders):
                    raise AssertionError(f"non-positive coefficient at {p}")

    def massless_reduction():
        pts = ((1, 0.7, 1.5), (6, 3.0, 1.3), (15, 10.0, 2.0))
        for l, xi, ratio in pts:
            a = log_delta_tm(SpectralPoint(l=l, xi_hat=xi, mu=0.0,
                                           ratio=ratio))
            b = log_delta_tm_massless(l, xi, ratio)
            if abs(a - b) > 1e-10 * abs(b):
                raise AssertionError(
                    f"massless mismatch at l={l}, xi={xi}, ratio={ratio}")

    def energy_sanity():
        te = energy(ProblemSpec(ratio=1.3, rel_tol=1e-5, mode="te"),
                    threads=threads)
        tm = energy(ProblemSpec(ratio=1.3, rel_tol=1e-5, mode="tm"),
                    threads=threads)
        if not (te.value < 0.0 and tm.value < 0.0):
            raise AssertionError(
                f"energies not attractive: te={te.value}, tm={tm.value}")
        q = te.value / tm.value
        if not (0.25 <= q <= 4.0):
            raise AssertionError(f"TE/TM ratio {q} outside sanity window")

    check("riccati-bessel wronskian", wronskian)
    check("determinant routes agree", det_routes)
    check("massless reduction", massless_reduction)
    check("energy sanity", energy_sanity)
    return 0 if failures == 0 else 1


# -- parser ------------------------------------------------------------------

def _add_problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ratio", type=float, default=None,
                   help="outer/inner radius ratio (> 1)")
    p.add_argument("--mu", type=float, default=None,
                   help="field mass times inner radius, natural units (>= 0)")
    p.add_argument("--a1-m", dest="a1_m", type=float, default=None,
                   help="inner radius in meters")
    p.add_argument("--a2-m", dest="a2_m", type=float, default=None,
                   help="outer radius in meters")
    p.add_argument("--mass-ev", dest="mass_ev", type=float, default=None,
                   help="field mass in eV")
    p.add_argument("--mode", choices=("te", "tm", "total"), default="total",
                   help="which polarization to sum (default: total)")
    p.add_argument("--si", action="store_true",
                   help="also report SI values (needs radii in meters)")


def _add_common_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-8,
                   help="relative tolerance on the summed energy")
    p.add_argument("--l-cap", dest="l_cap", type=int, default=5000,
                   help="hard ceiling on the partial-wave order")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: PROCASPHERE_THREADS or 1)")
    p.add_argument("--format", dest="fmt", choices=("json", "csv"),
                   default="json", help="output format (default: json)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="procasphere",
        description="Casimir energy of a massive vector field between two "
                    "concentric conducting spheres.")
    parser.add_argument("--version", action="version",
                        version=f"procasphere {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("energy", help="interaction energy at one point")
    _add_problem_args(p)
    _add_common_args(p)
    p.set_defaults(func=_cmd_energy)

    p = sub.add_parser("force", help="-dE/d(ratio) at one point")
    _add_problem_args(p)
    _add_common_args(p)
    p.add_argument("--fd-step", dest="fd_step", type=float, default=None,
                   help="finite-difference step in ratio")
    p.set_defaults(func=_cmd_force)

    p = sub.add_parser("sweep-ratio", help="energy table over radius ratios")
    p.add_argument("--from", dest="ratio_from", type=float, required=True,
                   help="first ratio (> 1)")
    p.add_argument("--to", dest="ratio_to", type=float, required=True,
                   help="last ratio (> 1)")
    p.add_argument("--steps", type=int, required=True,
                   help="number of grid points (>= 2)")
    p.add_argument("--mu", type=float, default=0.0,
                   help="fixed field mass (default: 0)")
    _add_common_args(p)
    p.set_defaults(func=_cmd_sweep_ratio)

    p = sub.add_parser("sweep-mass", help="energy table over field masses")
    p.add_argument("--mu-values", dest="mu_values", required=True,
                   help="comma-separated ascending masses, e.g. 0,0.5,1")
    p.add_argument("--ratio", type=float, required=True,
                   help="fixed radius ratio (> 1)")
    _add_common_args(p)
    p.set_defaults(func=_cmd_sweep_mass)

    p = sub.add_parser("selftest", help="hermetic internal cross-checks")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=_cmd_selftest)

    p = sub.add_parser("replay",
                       help="re-run a stored JSON result and compare bits")
    p.add_argument("file", help="JSON output of a previous run")
    p.set_defaults(func=_cmd_replay)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"did not converge: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
