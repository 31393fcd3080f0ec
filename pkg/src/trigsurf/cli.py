"""Command-line interface: ``trigsurf <command> [options]``."""

import argparse
import csv
import io
import json
import math
import sys

from . import sextic
from .config import FORMATS, load_config
from .errors import ConfigError, TrigsurfError
from .immersion import WeierstrassData, fundamental_mesh
from .lattice import (associate_periods, check_identity, property_p_certificate,
                      property_p_report, rational_relations)
from .moduli import ComponentSpec, component_dimension
from .curve import SurfacePoint
from .periods import period_matrix, reference_constants
from .pipeline import SCHEMA_VERSION, Check, VerificationReport, verify_paper


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj):
    return json.dumps(obj, indent=2) + "\n"


def _matrix_csv(rows, header=None, labels=None):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(([""] if labels else []) + list(header))
    for i, row in enumerate(rows):
        lead = [labels[i]] if labels else []
        w.writerow(lead + [repr(float(v)) for v in row])
    return buf.getvalue()


def _require_format(args, allowed):
    if args.format not in allowed:
        raise ConfigError(f"{args.command} supports formats {allowed}, not {args.format!r}")


def _periods(config):
    curve = config.curve()
    return curve, period_matrix(curve, config.diffs(), config.cycle_list(curve),
                                config.precision)


def _example_periods(config):
    curve = config.curve()
    cycles = config.cycle_list(curve)
    P = period_matrix(curve, sextic.PHI, cycles, config.precision)
    return P.entries, P.rotated(math.pi / 2).entries, P


def cmd_verify_paper(args, config):
    _require_format(args, ("json",))
    report = verify_paper(config)
    _emit(_dump(report.to_json(timing=not args.no_timing)), args.out)
    for c in report.checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {c.name}: residual={c.residual:.3g} tol={c.tolerance:.3g}",
              file=sys.stderr)
    return 0 if report.passed else 1


def cmd_periods(args, config):
    _require_format(args, ("json", "csv"))
    _, P = _periods(config)
    if args.format == "csv":
        _emit(P.to_csv(), args.out)
    else:
        _emit(_dump({"schema": SCHEMA_VERSION, "command": "periods",
                     "precision": config.precision, "period_matrix": P.to_json()}), args.out)
    return 0


def cmd_lattice_check(args, config):
    _require_format(args, ("json",))
    om, omp, _ = _example_periods(config)
    A, B, C = reference_constants(min(config.precision, 1e-12)).as_tuple()
    tol = config.tol_numeric
    report = VerificationReport("lattice-check", config=config.to_json())
    if args.mode == "factorization":
        if args.primed:
            U, V = omp, sextic.lambda_prime_basis(A, B, C)
            G1, G2 = config.matrix("G1_prime"), config.matrix("G2_prime")
            names = ("Omega'", "G1'", "G2'", "Lambda'")
        else:
            U, V = om, sextic.lambda_basis(A, B, C)
            G1, G2 = config.matrix("G1"), config.matrix("G2")
            names = ("Omega", "G1", "G2", "Lambda")
        for lhs, g, rhs, label in ((U, G1, V, f"{names[0]} {names[1]} = {names[3]}"),
                                   (V, G2, U, f"{names[3]} {names[2]} = {names[0]}")):
            r = check_identity(lhs, g, rhs, tol, label)
            report.checks.append(Check(label, "factorization certificate", label,
                                       r.max_residual, tol, r.passed,
                                       detail={"mode": "certificate"}))
    else:
        target = omp if args.primed else om
        if args.theta is not None:
            target = associate_periods(om, omp, args.theta)
        rels = rational_relations(target, tol, config.max_height)
        rank = target.shape[1] - len(rels)
        ok = rank == 3
        report.checks.append(Check("rational_rank", "integer relation search",
                                   "rank_Q Omega = 3", abs(rank - 3), 0, ok,
                                   detail={"mode": "heuristic", "rational_rank": rank,
                                           "relations": [list(r) for r in rels]}))
    _emit(_dump(report.to_json(timing=False)), args.out)
    return 0 if report.passed else 1


def cmd_associate(args, config):
    _require_format(args, ("json", "csv"))
    om, omp, _ = _example_periods(config)
    out = {"schema": SCHEMA_VERSION, "command": "associate"}
    if args.n is not None:
        if args.m is None:
            raise ConfigError("--n requires --m")
        fam, F1, F2 = property_p_certificate(args.n, args.m)
        theta = fam.theta
        out.update(family=fam.to_json(), F1=F1.to_json(), F2=F2.to_json())
    elif args.theta is not None:
        theta = args.theta
    else:
        raise ConfigError("associate needs --theta or --n/--m")
    om_t = associate_periods(om, omp, theta)
    out.update(theta=theta, omega_theta=om_t.tolist(), column_labels=list(sextic.CYCLE_NAMES))
    if args.format == "csv":
        _emit(_matrix_csv(om_t, sextic.CYCLE_NAMES, ["Phi1", "Phi2", "Phi3"]), args.out)
    else:
        _emit(_dump(out), args.out)
    return 0


def cmd_property_p(args, config):
    _require_format(args, ("json",))
    om, omp, _ = _example_periods(config)
    consts = reference_constants(min(config.precision, 1e-12)).as_tuple()
    bound = args.bound if args.bound is not None else config.property_p_bound
    results = []
    for n in range(1, bound + 1):
        for m in range(-bound, bound + 1):
            if math.gcd(n, m) != 1 or (2 * m == n and not args.include_conjugate):
                continue
            rep = property_p_report(om, omp, n, m, config.tol_numeric, consts,
                                    config.max_height)
            results.append(rep.to_json())
    ok = all(r["pass"] for r in results)
    _emit(_dump({"schema": SCHEMA_VERSION, "command": "property-p", "bound": bound,
                 "pass": ok, "pairs": results}), args.out)
    return 0 if ok else 1


def cmd_moduli_dim(args, config):
    _require_format(args, ("json",))
    if args.batch:
        with open(args.batch, encoding="utf-8") as fh:
            specs = [ComponentSpec.from_json(s) for s in json.load(fh)]
    elif args.kind:
        if args.g is None:
            raise ConfigError("moduli-dim needs --g")
        specs = [ComponentSpec(args.kind, args.g, r=args.r, d=args.d)]
    else:
        specs = list(config.moduli)
    reports = [component_dimension(s).to_json() for s in specs]
    _emit(_dump(reports[0] if len(reports) == 1 and not args.batch else reports), args.out)
    return 0


def write_obj(mesh):
    lines = [f"# trigsurf mesh: {len(mesh.vertices)} vertices, {len(mesh.faces)} faces, "
             f"{len(mesh.dropped)} dropped"]
    lines += [f"v {float(x)!r} {float(y)!r} {float(z)!r}" for x, y, z in mesh.vertices]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.faces]
    return "\n".join(lines) + "\n"


def cmd_mesh(args, config):
    _require_format(args, ("obj", "json", "csv"))
    A, B, C = reference_constants(min(config.precision, 1e-12)).as_tuple()
    curve = config.curve()
    lam = sextic.lambda_basis(A, B, C) if args.theta_lattice != "prime" else \
        sextic.lambda_prime_basis(A, B, C)
    data = WeierstrassData(curve, sextic.PHI, SurfacePoint(0j, -1 + 0j)).attach_lattice(lam)
    opts = config.mesh
    mesh = fundamental_mesh(data, theta=opts.theta if args.theta is None else args.theta,
                            n_rays=args.rays or opts.rays, n_radii=args.radii or opts.radii,
                            radius=opts.radius, precision=max(config.precision, 1e-10))
    if args.format == "obj":
        _emit(write_obj(mesh), args.out)
    elif args.format == "csv":
        _emit(_matrix_csv(mesh.vertices, ["x", "y", "z"]), args.out)
    else:
        _emit(_dump({"schema": SCHEMA_VERSION, "command": "mesh",
                     "vertices": mesh.vertices.tolist(), "faces": [list(f) for f in mesh.faces],
                     "dropped": list(mesh.dropped), "grid_size": mesh.grid_size}), args.out)
    if mesh.dropped:
        print(f"mesh: dropped {len(mesh.dropped)} vertices near branch points", file=sys.stderr)
    return 0


COMMANDS = {
    "verify-paper": cmd_verify_paper,
    "periods": cmd_periods,
    "lattice-check": cmd_lattice_check,
    "associate": cmd_associate,
    "property-p": cmd_property_p,
    "moduli-dim": cmd_moduli_dim,
    "mesh": cmd_mesh,
}


def _common_flags(default):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=default, help="JSON run configuration")
    common.add_argument("--precision", type=float, default=default,
                        help="absolute error target per period")
    common.add_argument("--out", default=default, help="output file (default: stdout)")
    common.add_argument("--format", choices=FORMATS, default=default, help="output format")
    return common


def build_parser():
    # global flags may appear before or after the subcommand; the subcommand
    # copies must not clobber values given before it
    top = _common_flags(None)
    common = _common_flags(argparse.SUPPRESS)
    parser = argparse.ArgumentParser(prog="trigsurf", parents=[top],
                                     description="Periods and lattice checks for minimal "
                                                 "surfaces from trigonal curves.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("verify-paper", parents=[common],
                       help="run every check on the w^3 = z^6 - 1 example")
    p.add_argument("--no-timing", action="store_true", help="omit per-check timings")
    sub.add_parser("periods", parents=[common], help="period matrix of the configured data")
    p = sub.add_parser("lattice-check", parents=[common],
                       help="factorization certificate or rational rank")
    p.add_argument("--mode", choices=("factorization", "rank"), default="factorization")
    p.add_argument("--primed", action="store_true", help="use the conjugate periods")
    p.add_argument("--theta", type=float, help="rank of Omega_theta instead of Omega")
    p = sub.add_parser("associate", parents=[common], help="periods of the associate surface")
    p.add_argument("--theta", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p = sub.add_parser("property-p", parents=[common], help="sweep coprime (n, m)")
    p.add_argument("--bound", type=int)
    p.add_argument("--include-conjugate", action="store_true")
    p = sub.add_parser("moduli-dim", parents=[common], help="component dimensions")
    p.add_argument("--kind", choices=("holomorphic", "hyperelliptic", "trigonal", "d_gonal"))
    p.add_argument("--g", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--batch", help="JSON file with an array of specs")
    p = sub.add_parser("mesh", parents=[common], help="OBJ mesh of the surface mod Lambda")
    p.add_argument("--rays", type=int)
    p.add_argument("--radii", type=int)
    p.add_argument("--theta", type=float)
    p.add_argument("--theta-lattice", choices=("plain", "prime"), default="plain")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        config = config.with_overrides(precision=args.precision, output_path=args.out,
                                       output_format=args.format)
        if args.out is None:
            args.out = config.output_path
        if args.format is None:
            args.format = "obj" if args.command == "mesh" else config.output_format
        return COMMANDS[args.command](args, config)
    except (ConfigError, TrigsurfError, ValueError, OSError) as exc:
        print(f"trigsurf: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
