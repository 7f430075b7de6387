"""Command-line front end: orchestrates check batteries over seeded samples and
emits deterministic CSV/JSON reports.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 bad usage or
configuration.  Identical configuration and seed produce byte-identical output.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import asymptotics as asy
from . import brackets as br
from . import duality, dynamics, lax, scattering
from .phase_space import Coupling, PhaseSpaceError, sample

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    pass


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _parse_grid(spec: str) -> np.ndarray:
    try:
        if ":" in spec:
            start, step, stop = (float(v) for v in spec.split(":"))
            if step <= 0:
                raise ValueError
            return np.arange(start, stop + 1e-12, step)
        return np.array([float(v) for v in spec.split(",")])
    except ValueError as exc:
        raise UsageError(f"bad time grid {spec!r}; use start:step:stop or a comma list") from exc


def _thread_count() -> int:
    raw = os.environ.get("DIEJEN_THREADS", "1")
    try:
        val = int(raw)
    except ValueError as exc:
        raise UsageError(f"DIEJEN_THREADS must be an integer, got {raw!r}") from exc
    return max(1, val)


def _map_points(fn, points):
    workers = _thread_count()
    if workers == 1:
        return [fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, points))  # order-preserving


def _emit(rows, header, args) -> str:
    """Render rows (list of dicts) as csv or json text."""
    if args.format == "json":
        return json.dumps(rows, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [_fmt(row[k]) if isinstance(row[k], (int, float)) and not isinstance(row[k], bool)
             else row[k] for k in header]
        )
    return buf.getvalue()


def _write(text: str, args):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _coupling(args) -> Coupling:
    g = Coupling(mu=args.mu, nu=args.nu)
    if not g.in_base_class():
        raise UsageError(f"coupling (mu={args.mu}, nu={args.nu}) outside the base class")
    if not g.is_regular():
        raise UsageError(f"coupling (mu={args.mu}, nu={args.nu}) outside the regular class")
    return g


def _points(args):
    return [sample(args.n, seed=args.seed + k) for k in range(args.points)]


def cmd_lax_check(args) -> int:
    g = _coupling(args)
    tol = args.tol_scale

    def check(p):
        b = lax.lax_matrix(p, g)
        m = b.matrix
        scale = np.abs(m).max()
        w = np.linalg.eigvalsh(m)
        return {
            "seed": args.seed,
            "hermiticity": float(np.abs(m - m.conj().T).max() / scale),
            "det_minus_one": float(abs(np.linalg.det(m) - 1.0)),
            "min_eigenvalue": float(w.min()),
            "pairing": float(np.abs(w * w[::-1] - 1.0).max()),
            "trace_minus_2h": float(abs(np.trace(m).real - 2 * b.energy) / abs(2 * b.energy)),
            "commutation": float(lax.commutation_residual(b) / scale),
        }

    rows = _map_points(check, _points(args))
    ok = all(
        r["hermiticity"] <= 1e-12 * tol
        and r["det_minus_one"] <= 1e-8 * tol
        and r["min_eigenvalue"] > 0
        and r["pairing"] <= 1e-8 * tol
        and r["trace_minus_2h"] <= 1e-12 * tol
        and r["commutation"] <= 1e-10 * tol
        for r in rows
    )
    for i, r in enumerate(rows):
        r["point"] = i
        r["passed"] = bool(
            r["hermiticity"] <= 1e-12 * tol and r["det_minus_one"] <= 1e-8 * tol
            and r["min_eigenvalue"] > 0 and r["pairing"] <= 1e-8 * tol
            and r["trace_minus_2h"] <= 1e-12 * tol and r["commutation"] <= 1e-10 * tol
        )
    header = ["point", "hermiticity", "det_minus_one", "min_eigenvalue", "pairing",
              "trace_minus_2h", "commutation", "passed"]
    _write(_emit(rows, header, args), args)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_duality(args) -> int:
    g = _coupling(args)
    tol = args.tol_scale

    def check(p):
        fr = duality.dual_frame(p, g)
        l_hat, entrywise, pushforward = duality.dual_lax(p, g)
        scale = np.abs(l_hat).max()
        back = duality.duality_map(fr.image, g.hat())
        closed = np.array(
            [duality.dual_z_closed_form(fr.theta_hat, g.hat(), c) for c in range(p.n)]
        )
        lin, quad = duality.minor_identity_residuals(fr)
        re_sum = abs(fr.z_hat.real.sum() - fr.bundle.z.real.sum()) / abs(fr.bundle.z.real.sum())
        return {
            "involution": float(np.abs(back.as_vector() - p.as_vector()).max()),
            "dual_lax_entrywise": float(np.abs(l_hat - entrywise).max() / scale),
            "dual_lax_pushforward": float(np.abs(l_hat - pushforward).max() / scale),
            "re_z_sum": float(re_sum),
            "z_closed_form": float(np.abs(closed - fr.z_hat).max()),
            "linear_identity": lin,
            "quadratic_identity": quad,
            "frame": json.loads(fr.to_json()) if args.dump_frame else None,
        }

    rows = _map_points(check, _points(args))
    ok = all(
        r["involution"] <= 1e-7 * tol
        and r["dual_lax_entrywise"] <= 1e-8 * tol
        and r["dual_lax_pushforward"] <= 1e-8 * tol
        and r["re_z_sum"] <= 1e-10 * tol
        and r["z_closed_form"] <= 1e-8 * tol
        and r["linear_identity"] <= 1e-8 * tol
        and r["quadratic_identity"] <= 1e-8 * tol
        for r in rows
    )
    for i, r in enumerate(rows):
        r["point"] = i
        r["passed"] = bool(ok)
        if not args.dump_frame:
            r.pop("frame")
    header = ["point", "involution", "dual_lax_entrywise", "dual_lax_pushforward",
              "re_z_sum", "z_closed_form", "linear_identity", "quadratic_identity", "passed"]
    _write(_emit(rows, header, args), args)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_flow(args) -> int:
    g = _coupling(args)
    grid = _parse_grid(args.t)
    p = sample(args.n, seed=args.seed)
    cfg = dynamics.FlowConfig(method=args.method)
    rows = []
    max_gap = 0.0
    proj = dynamics.projection_trajectory(p, g, grid) if args.method != "runge-kutta" else None
    rk = dynamics.rk_flow(p, g, grid, cfg) if args.method != "projection" else None
    primary = proj if proj is not None else rk
    for i, t in enumerate(grid):
        s = primary[i]
        row = {"t": float(t), "energy": s.energy}
        for a in range(args.n):
            row[f"lambda_{a + 1}"] = float(s.point.xi[a])
        for a in range(args.n):
            row[f"theta_{a + 1}"] = float(s.point.eta[a])
        if proj is not None and rk is not None:
            gap = float(
                np.abs(proj[i].point.as_vector() - rk[i].point.as_vector()).max()
            )
            row["propagator_gap"] = gap
            max_gap = max(max_gap, gap)
        rows.append(row)
    header = (
        ["t"]
        + [f"lambda_{a + 1}" for a in range(args.n)]
        + [f"theta_{a + 1}" for a in range(args.n)]
        + ["energy"]
        + (["propagator_gap"] if args.method == "both" else [])
    )
    _write(_emit(rows, header, args), args)
    if args.method == "both" and max_gap > 1e-6 * args.tol_scale:
        return EXIT_FAIL
    return EXIT_PASS


def cmd_scatter(args) -> int:
    g = _coupling(args)
    tol = args.tol_scale

    def check(p):
        data = scattering.asymptotic_data(p, g)
        wm = scattering.wave_map(p, g, -1)
        wp = scattering.wave_map(p, g, 1)
        sw = scattering.scattering_map(wm, g)
        comp = scattering.upsilon(scattering.upsilon_minus_inverse(wm, g), g, 1)
        return {
            "sum_identity": float(
                np.abs(data.lambda_plus + data.lambda_minus - data.delta).max()
            ),
            "minor_route_plus": float(np.abs(data.lambda_plus - data.minor_route_plus).max()),
            "minor_route_minus": float(np.abs(data.lambda_minus - data.minor_route_minus).max()),
            "scattering_consistency": float(np.abs(sw.as_vector() - wp.as_vector()).max()),
            "composite_route": float(np.abs(sw.as_vector() - comp.as_vector()).max()),
        }

    rows = _map_points(check, _points(args))
    ok = all(
        r["sum_identity"] <= 1e-9 * tol
        and r["minor_route_plus"] <= 1e-9 * tol
        and r["minor_route_minus"] <= 1e-9 * tol
        and r["scattering_consistency"] <= 1e-9 * tol
        and r["composite_route"] <= 1e-12 * tol
        for r in rows
    )
    for i, r in enumerate(rows):
        r["point"] = i
        r["passed"] = bool(ok)
    header = ["point", "sum_identity", "minor_route_plus", "minor_route_minus",
              "scattering_consistency", "composite_route", "passed"]
    _write(_emit(rows, header, args), args)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_brackets(args) -> int:
    g = _coupling(args)
    tol = args.tol_scale
    step = args.step

    def check(p):
        rep = br.canonicity_suite(p, g, step=step)
        return {
            "action_action": rep.action_action,
            "angle_angle": rep.angle_angle,
            "cross_deviation": rep.cross_deviation,
            "antisymplectic": br.antisymplectic_check(p, g, step=step),
            "flow_symplectic": br.flow_symplectic_check(p, g, step=step),
        }

    rows = _map_points(check, _points(args))
    ok = all(
        r["action_action"] <= 1e-5 * tol
        and r["angle_angle"] <= 1e-5 * tol
        and r["cross_deviation"] <= 1e-5 * tol
        and r["antisymplectic"] <= 1e-4 * tol
        and r["flow_symplectic"] <= 1e-4 * tol
        for r in rows
    )
    for i, r in enumerate(rows):
        r["point"] = i
        r["passed"] = bool(ok)
    header = ["point", "action_action", "angle_angle", "cross_deviation",
              "antisymplectic", "flow_symplectic", "passed"]
    _write(_emit(rows, header, args), args)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_asymptotics(args) -> int:
    grid = _parse_grid(args.t)
    rows = []
    ok = True
    for k in range(args.points):
        spec = asy.sample_spec(args.n, seed=args.seed + k, kind=args.kind)
        if args.kind == "exponential":
            rep = asy.verify_theorem_exponential(spec, grid)
            recovered = asy.recover_p_two_point(spec)
            rec_err = float(
                (np.abs(recovered - rep.p) / np.maximum(np.abs(rep.p), 1e-12)).max()
            )
            row = {
                "spec": k,
                "R": rep.gap,
                "min_fitted_order": float(np.nanmin(rep.fitted_orders)),
                "p_recovery_rel_err": rec_err,
                "passed": bool(rep.passed and rec_err <= 1e-3 * args.tol_scale),
            }
        else:
            rep = asy.verify_theorem_linear(spec, grid)
            rep0 = asy.verify_theorem_linear(spec, grid, include_alpha=False)
            row = {
                "spec": k,
                "R": rep.gap,
                "order_with_alpha": float(np.nanmean(rep.fitted_orders)),
                "order_without_alpha": float(np.nanmean(rep0.fitted_orders)),
                "passed": bool(
                    rep.passed
                    and abs(np.nanmean(rep.fitted_orders) - 2.0) <= 0.3
                    and abs(np.nanmean(rep0.fitted_orders) - 1.0) <= 0.3
                ),
            }
        ok = ok and row["passed"]
        rows.append(row)
    header = list(rows[0].keys()) if rows else ["spec"]
    _write(_emit(rows, header, args), args)
    return EXIT_PASS if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vandiejen",
        description="Numerical checks for a two-parameter hyperbolic integrable many-body system",
    )
    parser.add_argument("--config", help="JSON file of option defaults (flags win)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, default_points=20):
        sp.add_argument("--n", type=int, default=2, help="particle count / matrix size")
        sp.add_argument("--mu", type=float, default=0.7)
        sp.add_argument("--nu", type=float, default=0.4)
        sp.add_argument("--seed", type=int, default=1)
        sp.add_argument("--points", type=int, default=default_points)
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--tol-scale", type=float, default=1.0, dest="tol_scale")

    sp = sub.add_parser("lax-check", help="Lax matrix structure invariants")
    common(sp)
    sp.set_defaults(fn=cmd_lax_check)

    sp = sub.add_parser("duality", help="spectral-duality identities")
    common(sp)
    sp.add_argument("--dump-frame", action="store_true", dest="dump_frame")
    sp.set_defaults(fn=cmd_duality)

    sp = sub.add_parser("flow", help="trajectory propagation")
    common(sp, default_points=1)
    sp.add_argument("--method", choices=("projection", "runge-kutta", "both"), default="both")
    sp.add_argument("--t", default="0:0.5:5", help="time grid start:step:stop or comma list")
    sp.set_defaults(fn=cmd_flow)

    sp = sub.add_parser("scatter", help="asymptotic scattering identities")
    common(sp)
    sp.set_defaults(fn=cmd_scatter)

    sp = sub.add_parser("brackets", help="finite-difference canonicity checks")
    common(sp, default_points=5)
    sp.add_argument("--step", type=float, default=1e-5)
    sp.set_defaults(fn=cmd_brackets)

    sp = sub.add_parser("asymptotics", help="matrix-flow eigenvalue asymptotics")
    common(sp, default_points=5)
    sp.add_argument("--kind", choices=("exponential", "linear"), default="exponential")
    sp.add_argument("--t", default="4:1:10", help="time grid")
    sp.set_defaults(fn=cmd_asymptotics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # pre-scan for --config; its values fill in options not given explicitly
    cfg = {}
    if "--config" in argv:
        try:
            cfg_path = argv[argv.index("--config") + 1]
            with open(cfg_path) as fh:
                cfg = json.load(fh)
            if not isinstance(cfg, dict):
                raise ValueError("config must be a JSON object")
        except (IndexError, OSError, ValueError) as exc:
            parser.exit(EXIT_USAGE, f"error: bad config: {exc}\n")
    try:
        args = parser.parse_args(argv)
        for key, value in cfg.items():
            dest = key.replace("-", "_")
            if f"--{key.replace('_', '-')}" in argv:
                continue  # explicit flag wins
            if hasattr(args, dest):
                setattr(args, dest, value)
        return args.fn(args)
    except (UsageError, PhaseSpaceError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
