"""Command-line surface: every subcommand is a thin adapter over the library.

Reports are JSON (default) or CSV, written to stdout and optionally to
--output.  Exit codes: 0 success, 1 usage error (bad flags, unknown names,
malformed files), 2 validation failure (invalid certificates, infeasible
strategies, precondition violations).  The OPTIMA_PRECISION environment
variable overrides the default --precision; >= 60 digits switches numeric
paths to high precision.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time

import mpmath
import numpy as np

from optima.configurations import (
    catalog,
    catalog_names,
    design_strength,
    distance_distribution,
    load_points,
    save_points,
)
from optima.descent import classify_five_points, minimize_energy
from optima.errors import FormatError, OptimaError, UnknownNameError
from optima.euclid_bounds import (
    lattice_poisson_bound_check,
    load_aux,
    optimize_aux,
    rescale,
    save_aux,
    taylor_probe,
    verify_and_bound,
)
from optima.lattices import (
    _auto_radius,
    deep_hole_check_dn,
    gaussian_theta,
    kissing_number,
    lattice_catalog,
    lattice_names,
    load_lattice,
    min_norm2,
    packing_density,
    poisson_check,
    save_lattice,
    shell_counts,
)
from optima.potentials import energy, energy_from_distribution, format_potential, parse_potential
from optima.saturation import report_summary, saturate, save_torus_packing
from optima.sphere_bounds import (
    certificate_payload,
    hermite_certificate,
    load_certificate,
    save_certificate,
    yudin_bound,
)

_HIGH_PRECISION_THRESHOLD = 60

REFERENCE_CONSTANTS = (
    {
        "name": "e8_packing_density",
        "value": math.pi**4 / 384,
        "exact_form": "pi^4/384",
        "provenance": "packing density of the E8 lattice in dimension 8",
    },
    {
        "name": "hexagonal_packing_density",
        "value": math.pi / math.sqrt(12),
        "exact_form": "pi/sqrt(12)",
        "provenance": "optimal packing density in the plane, attained by the hexagonal lattice",
    },
    {
        "name": "kissing_number_dim8",
        "value": 240,
        "exact_form": "240",
        "provenance": "minimal vectors of the E8 lattice",
    },
    {
        "name": "kissing_number_dim24",
        "value": 196560,
        "exact_form": "196560",
        "provenance": "minimal vectors of the Leech lattice (display only, not constructed here)",
    },
    {
        "name": "taylor_g_quadratic_dim8",
        "value": -2.7,
        "exact_form": "-27/10",
        "provenance": "quadratic Taylor coefficient of the dimension-8 magic function g at 0",
    },
    {
        "name": "taylor_ghat_quadratic_dim8",
        "value": -1.5,
        "exact_form": "-3/2",
        "provenance": "quadratic Taylor coefficient of the transform of the dimension-8 magic function",
    },
    {
        "name": "taylor_g_quadratic_dim24",
        "value": 14347 / 5460,
        "exact_form": "14347/5460",
        "provenance": "conjectured quadratic coefficient of the dimension-24 magic function (display only)",
    },
    {
        "name": "taylor_ghat_quadratic_dim24",
        "value": 205 / 156,
        "exact_form": "205/156",
        "provenance": "conjectured quadratic coefficient of its transform (display only)",
    },
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (bool, int, float, str, type(None))):
        return obj
    if isinstance(obj, mpmath.mpf):
        return mpmath.nstr(obj, 30)
    return str(obj)


def _resolve_precision(args, default: int = 0) -> int:
    if args.precision is not None:
        return args.precision
    env = os.environ.get("OPTIMA_PRECISION")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise FormatError(f"OPTIMA_PRECISION must be an integer, got {env!r}")
    return default


def _load_configuration(args):
    if getattr(args, "points_file", None):
        return load_points(args.points_file)
    if getattr(args, "config", None):
        return catalog(args.config, args.param)
    raise _UsageError("one of --config or --points-file is required")


def _get_lattice(args):
    if getattr(args, "file", None):
        return load_lattice(args.file)
    if getattr(args, "name", None):
        return lattice_catalog(args.name, args.param)
    raise _UsageError("one of --name or --file is required")


# ----------------------------------------------------------------------
# Subcommand handlers: each returns (results, artifacts).


def _cmd_catalog(args):
    if args.references:
        return {"references": list(REFERENCE_CONSTANTS)}, []
    if args.name:
        C = catalog(args.name, args.param)
        dist = distance_distribution(C)
        return {
            "name": args.name,
            "dimension": C.n,
            "size": C.size,
            "design_strength": design_strength(C),
            "distance_distribution": [[float(t), int(c)] for t, c in dist.entries],
        }, []
    return {
        "configurations": catalog_names(),
        "lattices": lattice_names(),
    }, []


def _cmd_energy(args):
    C = _load_configuration(args)
    f = parse_potential(args.potential)
    digits = _resolve_precision(args)
    results = {"dimension": C.n, "size": C.size, "potential": format_potential(f)}
    if digits >= _HIGH_PRECISION_THRESHOLD:
        dist = distance_distribution(C)
        with mpmath.workdps(digits):
            e = energy_from_distribution(dist, f, high_precision=True)
            results["energy"] = float(e)
            results["energy_highprec"] = mpmath.nstr(e, digits)
    else:
        results["energy"] = energy(C, f)
    return results, []


def _cmd_minimize(args):
    f = parse_potential(args.potential)
    res = minimize_energy(
        args.n,
        args.count,
        f,
        restarts=args.restarts,
        seed=args.seed,
        max_iters=args.max_iters,
    )
    results = {
        "dimension": args.n,
        "size": args.count,
        "potential": format_potential(f),
        "energy": res.energy,
        "best_index": res.best_index,
        "restarts": res.restarts,
        "converged_restarts": sum(1 for r in res.per_restart if r.converged),
        "per_restart": [
            {
                "index": r.index,
                "energy": r.energy,
                "iterations": r.iterations,
                "grad_norm": r.grad_norm,
                "converged": r.converged,
            }
            for r in res.per_restart
        ],
    }
    if args.n == 3 and args.count == 5:
        results["classification"] = classify_five_points(res)
    artifacts = []
    if args.save_points:
        save_points(res.best, args.save_points)
        artifacts.append(args.save_points)
    return results, artifacts


def _cmd_certify(args):
    C = _load_configuration(args)
    f = parse_potential(args.potential)
    digits = _resolve_precision(args, default=120)
    cert = hermite_certificate(C, f, digits=digits, eps_cert=args.eps)
    artifacts = []
    if args.certificate_out:
        save_certificate(cert, args.certificate_out)
        artifacts.append(args.certificate_out)
    return certificate_payload(cert), artifacts


def _cmd_bound_sphere(args):
    payload = load_certificate(args.certificate)
    size = args.size if args.size is not None else int(payload["margins"]["N"])
    digits = _resolve_precision(args, default=int(payload["precision_digits"]))
    bound, valid, margins = yudin_bound(
        int(payload["n"]), payload["potential_obj"], payload["h_obj"], size, digits=digits
    )
    return {
        "n": int(payload["n"]),
        "potential": payload["potential"],
        "size": size,
        "bound": bound,
        "valid": valid,
        "margins": margins,
    }, []


def _cmd_bound_euclidean(args):
    if args.aux:
        aux = load_aux(args.aux)
    else:
        if args.n is None or args.degree is None:
            raise _UsageError("--n and --degree are required unless --aux is given")
        radii = [float(tok) for tok in args.radii.split(",")] if args.radii else None
        aux = optimize_aux(
            args.n,
            args.degree,
            strategy=args.strategy,
            radii=radii,
            seed=args.seed,
            r_min=args.r_min,
        )
    bound, valid, margins = verify_and_bound(aux)
    results = {
        "n": aux.n,
        "r_min": aux.r_min,
        "degree": aux.degree,
        "coeffs": list(aux.coeffs),
        "bound": bound,
        "valid": valid,
        "margins": margins,
    }
    if args.probe:
        probe = taylor_probe(rescale(aux, args.probe_scale) if args.probe_scale else aux)
        results["taylor_probe"] = {
            "g_quadratic": probe.g_quadratic,
            "ghat_quadratic": probe.ghat_quadratic,
            "g_quartic": probe.g_quartic,
            "ghat_quartic": probe.ghat_quartic,
        }
    artifacts = []
    if args.aux_out:
        save_aux(aux, args.aux_out)
        artifacts.append(args.aux_out)
    return results, artifacts


def _cmd_poisson(args):
    L = _get_lattice(args)
    if args.aux:
        aux = load_aux(args.aux)
        rep = lattice_poisson_bound_check(L, aux, trunc_r2=args.trunc_r2)
        return {
            "mode": "auxiliary-function-gate",
            "sum_f": rep.sum_f,
            "tail_f": rep.tail_f,
            "f0": rep.f0,
            "sum_fhat_over_covol": rep.sum_fhat_over_covol,
            "tail_fhat": rep.tail_fhat,
            "fhat0_over_covol": rep.fhat0_over_covol,
            "covolume": rep.covolume,
            "slack": rep.slack,
            "poisson_discrepancy": rep.poisson_discrepancy,
            "inequalities": rep.inequalities,
        }, []
    if args.width is None:
        raise _UsageError("--width is required unless --aux is given")
    rep = poisson_check(L, args.width, trunc_r2=args.trunc_r2)
    return {
        "mode": "gaussian",
        "width": rep.s,
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "discrepancy": rep.discrepancy,
        "absolute_discrepancy": rep.absolute_discrepancy,
        "trunc_r2": rep.trunc_r2,
        "dual_trunc_r2": rep.dual_trunc_r2,
        "tail_primal": rep.tail_primal,
        "tail_dual": rep.tail_dual,
    }, []


def _cmd_saturate(args):
    rep = saturate(
        args.n,
        args.box,
        args.radius,
        seed=args.seed,
        probe_resolution=args.probe_resolution,
    )
    artifacts = []
    if args.save_packing:
        save_torus_packing(rep.packing, args.save_packing)
        artifacts.append(args.save_packing)
    return report_summary(rep), artifacts


def _cmd_lattice(args):
    L = _get_lattice(args)
    artifacts = []
    if args.save:
        save_lattice(L, args.save)
        artifacts.append(args.save)
    if args.kissing:
        return {"minimal_vectors": kissing_number(L)}, artifacts
    if args.deep_holes:
        if args.name != "dn":
            raise ValueError("--deep-holes applies to the dn family")
        rep = deep_hole_check_dn(L.n)
        return {
            "n": rep.n,
            "min_norm2": rep.min_norm2,
            "all_halves_distance2": float(rep.all_halves_distance2),
            "integer_hole_distance2": float(rep.integer_hole_distance2),
            "deep_hole_distance": rep.distance,
            "covering_radius2": float(rep.covering_radius2),
            "union_min_norm2": float(rep.union_min_norm2),
            "union_is_lattice": rep.union_is_lattice,
            "fills_to_e8": rep.fills_to_e8,
        }, artifacts
    if args.theta is not None:
        r2 = args.trunc_r2 if args.trunc_r2 is not None else _auto_radius(L, args.theta)
        return {
            "width": args.theta,
            "theta": gaussian_theta(L, args.theta, r2),
            "trunc_r2": r2,
        }, artifacts
    if args.shells is not None:
        vals, counts = shell_counts(L, args.shells)
        return {
            "shells": [[float(v), int(c)] for v, c in zip(vals, counts)],
            "r2max": args.shells,
        }, artifacts
    return {
        "n": L.n,
        "covolume": L.covolume(),
        "min_norm2": min_norm2(L),
        "minimal_vectors": kissing_number(L),
        "packing_density": packing_density(L),
    }, artifacts


# ----------------------------------------------------------------------
# Parser construction and report emission.


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", default=None, help="also write the report to this path")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--precision", type=int, default=None, help="decimal digits; >= 60 uses high precision")
    common.add_argument("--quiet", action="store_true", help="suppress stdout")

    parser = _Parser(prog="optima", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("catalog", parents=[common], help="named configurations, lattices, reference constants")
    p.add_argument("--name", default=None)
    p.add_argument("--param", type=int, default=None)
    p.add_argument("--references", action="store_true")
    p.set_defaults(handler=_cmd_catalog)

    p = sub.add_parser("energy", parents=[common], help="pair energy of a configuration")
    p.add_argument("--config", default=None)
    p.add_argument("--param", type=int, default=None)
    p.add_argument("--points-file", default=None)
    p.add_argument("--potential", required=True)
    p.set_defaults(handler=_cmd_energy)

    p = sub.add_parser("minimize", parents=[common], help="multi-restart descent on the sphere")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--potential", required=True)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--save-points", default=None)
    p.set_defaults(handler=_cmd_minimize)

    p = sub.add_parser("certify", parents=[common], help="sharp energy certificate for a configuration")
    p.add_argument("--config", default=None)
    p.add_argument("--param", type=int, default=None)
    p.add_argument("--points-file", default=None)
    p.add_argument("--potential", required=True)
    p.add_argument("--eps", type=float, default=1e-9, help="relative sharpness tolerance")
    p.add_argument("--certificate-out", default=None)
    p.set_defaults(handler=_cmd_certify)

    p = sub.add_parser("bound-sphere", parents=[common], help="re-verify a certificate and evaluate its bound")
    p.add_argument("--certificate", required=True)
    p.add_argument("--size", type=int, default=None, help="number of points (default: certificate size)")
    p.set_defaults(handler=_cmd_bound_sphere)

    p = sub.add_parser("bound-euclidean", parents=[common], help="sphere packing density upper bound")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--strategy", choices=("hybrid", "forced_roots", "nelder_mead"), default="hybrid")
    p.add_argument("--radii", default=None, help="comma-separated squared radii for forced_roots")
    p.add_argument("--r-min", type=float, default=1.0)
    p.add_argument("--aux", default=None, help="verify this saved auxiliary function instead")
    p.add_argument("--aux-out", default=None)
    p.add_argument("--probe", action="store_true", help="report Taylor probe values")
    p.add_argument("--probe-scale", type=float, default=None, help="rescale r_min by this factor before probing")
    p.set_defaults(handler=_cmd_bound_euclidean)

    p = sub.add_parser("poisson", parents=[common], help="two-sided Poisson summation check")
    p.add_argument("--name", default=None)
    p.add_argument("--param", type=int, default=None)
    p.add_argument("--file", default=None, help="lattice file instead of --name")
    p.add_argument("--width", type=float, default=None, help="Gaussian width parameter s")
    p.add_argument("--trunc-r2", type=float, default=None)
    p.add_argument("--aux", default=None, help="check the density-bound inequality chain for this aux")
    p.set_defaults(handler=_cmd_poisson)

    p = sub.add_parser("saturate", parents=[common], help="saturated random packing on a torus")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--box", type=float, required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--probe-resolution", type=float, default=None)
    p.add_argument("--save-packing", default=None)
    p.set_defaults(handler=_cmd_saturate)

    p = sub.add_parser("lattice", parents=[common], help="lattice facts and checks")
    p.add_argument("--name", default=None)
    p.add_argument("--param", type=int, default=None)
    p.add_argument("--file", default=None)
    p.add_argument("--kissing", action="store_true")
    p.add_argument("--deep-holes", action="store_true")
    p.add_argument("--theta", type=float, default=None, help="Gaussian width for a theta value")
    p.add_argument("--shells", type=float, default=None, help="list shells up to this squared norm")
    p.add_argument("--trunc-r2", type=float, default=None)
    p.add_argument("--save", default=None)
    p.set_defaults(handler=_cmd_lattice)

    return parser


def _flatten(prefix: str, obj, rows: list) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(obj, (list, tuple)):
        rows.append((prefix, json.dumps(obj)))
    else:
        rows.append((prefix, obj))


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    rows: list = []
    _flatten("", report, rows)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(("key", "value"))
    writer.writerows(rows)
    return buf.getvalue()


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    if getattr(args, "command", None) is None:
        parser.print_usage(sys.stderr)
        return 1
    start = time.perf_counter()
    try:
        results, artifacts = args.handler(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (UnknownNameError, FormatError) as exc:
        print(f"usage error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except OptimaError as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 2
    if args.output:
        artifacts = artifacts + [args.output]
    report = {
        "command": args.command,
        "parameters": _jsonable(
            {
                k: v
                for k, v in vars(args).items()
                if k not in ("handler", "command", "format", "output", "quiet") and v is not None
            }
        ),
        "seed": args.seed,
        "precision_digits": _resolve_precision(
            args, 120 if args.command == "certify" else 0
        ),
        "results": _jsonable(results),
        "wall_time_s": time.perf_counter() - start,
        "artifacts": artifacts,
    }
    text = _render(report, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    if not args.quiet:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
