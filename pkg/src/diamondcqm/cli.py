"""Command-line front end.

Every command reads model parameters (--g --alpha --mass --hbar), optional
command flags, and an optional key=value config file (flags win).  Tables
go out as CSV with '#' metadata headers, reports as JSON with stable key
order; all floats carry 17 significant digits so identical configs give
byte-identical artifacts.  Exit codes: 0 success, 1 numerical failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import acceptance, algebra, dos, dynamics, frames, pathint, spectral
from .algebra import ConformalModel, GeneratorCoeffs
from .errors import CQMError
from .output import report_text, table_text, write_text


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _model(args) -> ConformalModel:
    return ConformalModel(g=args.g, alpha=args.alpha, mass=args.mass, hbar=args.hbar)


def _model_meta(m: ConformalModel) -> dict:
    return {"g": m.g, "alpha": m.alpha, "mass": m.mass, "hbar": m.hbar, "mu": m.mu}


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--g", type=float, default=1.0, help="coupling g > 0")
    p.add_argument("--alpha", type=float, default=1.0, help="diamond radius alpha > 0")
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--output", default=None, help="output path (default stdout)")
    p.add_argument(
        "--format", choices=("csv", "json"), default=None, help="override output form"
    )
    p.add_argument("--config", default=None, help="key=value config file (flags win)")


def _form(args, default: str) -> str:
    return args.format if args.format else default


# ---------------------------------------------------------------- commands


def cmd_classify(args) -> str:
    c = GeneratorCoeffs(args.u, args.v, args.w)
    report = {
        "u": c.u,
        "v": c.v,
        "w": c.w,
        "discriminant": c.discriminant,
        "class": algebra.classify(c).value,
    }
    return report_text(report, _form(args, "json"))


def cmd_potential(args) -> str:
    m = _model(args)
    q = np.linspace(args.q_min, args.q_max, args.n)
    v = dynamics.effective_potential(m, args.op, q)
    meta = {
        "command": "potential",
        "figure": "effective-potential-profile",
        "op": args.op,
        **_model_meta(m),
        "columns": "q,V",
    }
    rows = [(float(qi), float(vi)) for qi, vi in zip(q, v)]
    return table_text(["q", "V"], rows, _form(args, "csv"), metadata=meta)


def cmd_flow(args) -> str:
    m = _model(args)
    geom = frames.DiamondGeometry(alpha=m.alpha)
    curve = frames.rckf_flow(
        frames.SpacetimeEvent(args.t0, args.r0),
        geom,
        args.which,
        s_max=args.s_max,
        tol=args.tol,
        n_samples=args.n,
    )
    rows = [(float(s), float(t), float(r)) for s, t, r in zip(curve.s, curve.t, curve.r)]
    if args.mirror:
        rows += [(s, t, -r) for s, t, r in rows]
    meta = {
        "command": "flow",
        "figure": "diamond-killing-flow",
        "which": args.which,
        "t0": args.t0,
        "r0": args.r0,
        **_model_meta(m),
        "columns": "s,t,r",
    }
    return table_text(["s", "t", "r"], rows, _form(args, "csv"), metadata=meta)


def cmd_phase_field(args) -> str:
    m = _model(args)
    q_vals = np.linspace(args.q_min, args.q_max, args.n)
    p_vals = np.linspace(args.p_min, args.p_max, args.n)
    q, p, dq, dp = dynamics.direction_field(m, args.op, q_vals, p_vals)
    rows = [
        (float(a), float(b), float(c), float(d))
        for a, b, c, d in zip(q.ravel(), p.ravel(), dq.ravel(), dp.ravel())
    ]
    meta = {
        "command": "phase-field",
        "figure": "phase-space-direction-field",
        "op": args.op,
        "asymptote": "p = q/alpha",
        **_model_meta(m),
        "columns": "q,p,dq,dp",
    }
    return table_text(["q", "p", "dq", "dp"], rows, _form(args, "csv"), metadata=meta)


def cmd_orbit(args) -> str:
    m = _model(args)
    q_minus, q_plus = dynamics.turning_points(m, args.E)
    s0 = dynamics.PhaseState(q=q_plus, p=0.0)
    tau_max = args.periods * dynamics.period(m, args.E, method="closed_form")
    traj = dynamics.integrate(m, "R", s0, tau_max, tol=args.tol, n_samples=args.n)
    e = 0.5 * traj.p**2 + dynamics.effective_potential(m, "R", traj.q)
    rows = [
        (float(t), float(qq), float(pp), float(ee))
        for t, qq, pp, ee in zip(traj.tau, traj.q, traj.p, e)
    ]
    meta = {
        "command": "orbit",
        "figure": "closed-orbit-phase-portrait",
        "E": args.E,
        "q_minus": q_minus,
        "q_plus": q_plus,
        **_model_meta(m),
        "columns": "tau,q,p,energy",
    }
    return table_text(
        ["tau", "q", "p", "energy"], rows, _form(args, "csv"), metadata=meta
    )


def cmd_lyapunov(args) -> str:
    m = _model(args)
    rate = dynamics.lyapunov_estimate(
        m, delta0=args.delta0, tau_max=args.tau_max, n_chunks=args.n_chunks
    )
    report = {
        "g": m.g,
        "alpha": m.alpha,
        "rate": rate,
        "inverse_alpha": 1.0 / m.alpha,
        "relative_deviation": abs(rate - 1.0 / m.alpha) * m.alpha,
    }
    return report_text(report, _form(args, "json"))


def cmd_period(args) -> str:
    m = _model(args)
    report = {
        "g": m.g,
        "alpha": m.alpha,
        "E": args.E,
        "period_quadrature": dynamics.period(m, args.E, method="quadrature"),
        "period_closed_form": dynamics.period(m, args.E, method="closed_form"),
    }
    return report_text(report, _form(args, "json"))


def cmd_action(args) -> str:
    m = _model(args)
    e_min = math.sqrt(m.g) / m.alpha
    h = 0.05 * (args.E - e_min)
    dw = (
        dynamics.jacobi_action(m, args.E + h, method="quadrature")
        - dynamics.jacobi_action(m, args.E - h, method="quadrature")
    ) / (2.0 * h)
    report = {
        "g": m.g,
        "alpha": m.alpha,
        "E": args.E,
        "langer": bool(args.langer),
        "action_quadrature": dynamics.jacobi_action(
            m, args.E, langer=args.langer, method="quadrature"
        ),
        "action_closed_form": dynamics.jacobi_action(
            m, args.E, langer=args.langer, method="closed_form"
        ),
        "dW_dE": dw,
        "period_closed_form": dynamics.period(m, args.E, method="closed_form"),
    }
    return report_text(report, _form(args, "json"))


def cmd_propagator(args) -> str:
    m = _model(args)
    rows = []
    for r1 in args.r1:
        for r2 in args.r2:
            for T in args.T:
                kv = pathint.propagator(m, args.kind, r1, r2, T)
                rows.append((r1, r2, T, kv.value.real, kv.value.imag, kv.kind))
    meta = {
        "command": "propagator",
        "kind": args.kind,
        **_model_meta(m),
        "columns": "r1,r2,T,re,im,kind",
    }
    return table_text(
        ["r1", "r2", "T", "re", "im", "kind"], rows, _form(args, "csv"), metadata=meta
    )


def cmd_trace(args) -> str:
    m = _model(args)
    rows = []
    for T in args.T:
        zq = pathint.trace_Z(m, args.op, T, method="quadrature").real
        zc = pathint.trace_Z(m, args.op, T, method="closed_form").real
        rows.append((T, zq, zc, abs(zq - zc) / zc))
    meta = {
        "command": "trace",
        "op": args.op,
        **_model_meta(m),
        "columns": "T,quadrature,closed_form,rel_diff",
    }
    return table_text(
        ["T", "quadrature", "closed_form", "rel_diff"],
        rows,
        _form(args, "csv"),
        metadata=meta,
    )


def cmd_partition(args) -> str:
    m = _model(args)
    rows = []
    for beta in args.beta:
        rc = pathint.partition_function(m, beta, method="closed_form")
        re_ = pathint.partition_function(m, beta, method="eigen_sum")
        rows.append(
            (beta, rc.partition_value, re_.partition_value, re_.eigenvalues_used)
        )
    meta = {
        "command": "partition",
        **_model_meta(m),
        "columns": "beta,closed_form,eigen_sum,eigenvalues_used",
    }
    return table_text(
        ["beta", "closed_form", "eigen_sum", "eigenvalues_used"],
        rows,
        _form(args, "csv"),
        metadata=meta,
    )


def cmd_thermality(args) -> str:
    m = _model(args)
    s = pathint.diamond_temperature(m)
    report = {
        "alpha": s.alpha,
        "beta": s.beta,
        "T_D": s.temperature,
        "lambda_L": s.lyapunov_rate,
        "bound": s.scrambling_bound,
        "ratio": s.ratio,
        "Z": s.partition_value,
    }
    return report_text(report, _form(args, "json"))


def cmd_dos(args) -> str:
    m = _model(args)
    if args.E is not None:
        energies = args.E
    else:
        energies = list(np.linspace(args.e_min, args.e_max, args.n))
    rows = []
    for E in energies:
        if args.method == "digamma":
            C = args.C if args.C is not None else dos.cutoff_constant(m, args.L)
            est = dos.dos_digamma(m, E, C)
        elif args.method == "thomas-fermi":
            est = dos.dos_thomas_fermi(m, E, args.L)
        elif args.method == "series":
            C = args.C if args.C is not None else 0.0
            est = dos.dos_series(m, E, n_max=args.n_max, C=C)
        elif args.method == "pole-closed":
            est = dos.dos_semiclassical(m, E, form="pole_closed")
        else:  # gutzwiller
            est = dos.dos_semiclassical(
                m, E, form="gutzwiller_series", k_max=args.k_max
            )
        rows.append(
            (
                E,
                est.rho,
                est.method,
                est.C if est.C is not None else "",
                est.L if est.L is not None else "",
            )
        )
    meta = {
        "command": "dos",
        "method": args.method,
        **_model_meta(m),
        "columns": "E,rho,method,C,L",
    }
    return table_text(
        ["E", "rho", "method", "C", "L"], rows, _form(args, "csv"), metadata=meta
    )


def cmd_spectrum(args) -> str:
    m = _model(args)
    box = spectral.BoxDiscretization(
        q_min=args.q_min,
        L=args.L if args.L is not None else 20.0 * m.length_scale,
        n_points=args.n_points,
        scheme_order=args.order,
    )
    if args.staircase:
        grid = np.linspace(args.e_min, args.e_max, args.n_e)
        res = spectral.staircase(m, box, grid, potential=args.potential, count=args.count)
        rows = [
            (float(E), int(N), float(r))
            for E, N, r in zip(res.E, res.counts, res.rho_smoothed)
        ]
        meta = {
            "command": "spectrum",
            "mode": "staircase",
            "potential": args.potential,
            "q_min": box.q_min,
            "L": box.L,
            "n_points": box.n_points,
            "scheme_order": box.scheme_order,
            **_model_meta(m),
            "columns": "E,N,rho_smoothed",
        }
        return table_text(
            ["E", "N", "rho_smoothed"], rows, _form(args, "csv"), metadata=meta
        )
    res = spectral.eigenvalues(m, args.potential, box, count=args.count)
    rows = list(enumerate(float(v) for v in res.eigenvalues))
    meta = {
        "command": "spectrum",
        "mode": "levels",
        "potential": args.potential,
        "q_min": box.q_min,
        "L": box.L,
        "n_points": box.n_points,
        "scheme_order": box.scheme_order,
        **_model_meta(m),
        "columns": "n,E_n",
    }
    return table_text(["n", "E_n"], rows, _form(args, "csv"), metadata=meta)


def cmd_verify(args) -> str:
    results = acceptance.run_all(quick=args.quick)
    lines = []
    for r in results:
        lines.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.index:02d} {r.name}: {r.detail}")
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} criteria passed")
    text = "\n".join(lines) + "\n"
    if not all(r.passed for r in results):
        raise CQMError("acceptance suite failed:\n" + text)
    return text


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diamondcqm",
        description="Causal-diamond conformal mechanics: generators, flows, "
        "kernels, thermality, and densities of states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a generator triple (u, v, w)")
    _add_model_args(p)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--w", type=float, required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("potential", help="effective potential samples")
    _add_model_args(p)
    p.add_argument("--op", choices=("R", "S", "H"), default="S")
    p.add_argument("--q-min", type=float, default=0.1)
    p.add_argument("--q-max", type=float, default=4.0)
    p.add_argument("--n", type=int, default=201)
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("flow", help="Killing-field integral curve")
    _add_model_args(p)
    p.add_argument("--which", choices=("S_K", "R_K", "D_K"), default="S_K")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--r0", type=float, default=0.5)
    p.add_argument("--s-max", type=float, default=6.0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--n", type=int, default=201)
    p.add_argument(
        "--mirror", action="store_true", help="also emit the r -> -r branch"
    )
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("phase-field", help="phase-space direction field")
    _add_model_args(p)
    p.add_argument("--op", choices=("R", "S", "H"), default="S")
    p.add_argument("--q-min", type=float, default=0.2)
    p.add_argument("--q-max", type=float, default=4.0)
    p.add_argument("--p-min", type=float, default=-2.0)
    p.add_argument("--p-max", type=float, default=2.0)
    p.add_argument("--n", type=int, default=21)
    p.set_defaults(func=cmd_phase_field)

    p = sub.add_parser("orbit", help="closed orbit of the compact generator")
    _add_model_args(p)
    p.add_argument("--E", type=float, default=2.0)
    p.add_argument("--periods", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--n", type=int, default=401)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("lyapunov", help="instability rate of the unstable generator")
    _add_model_args(p)
    p.add_argument("--delta0", type=float, default=1e-7)
    p.add_argument("--tau-max", type=float, default=None)
    p.add_argument("--n-chunks", type=int, default=120)
    p.set_defaults(func=cmd_lyapunov)

    p = sub.add_parser("period", help="closed-orbit period")
    _add_model_args(p)
    p.add_argument("--E", type=float, default=2.0)
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("action", help="fixed-energy orbit action")
    _add_model_args(p)
    p.add_argument("--E", type=float, default=2.0)
    p.add_argument("--langer", action="store_true")
    p.set_defaults(func=cmd_action)

    p = sub.add_parser("propagator", help="kernel table over (r1, r2, T) grids")
    _add_model_args(p)
    p.add_argument("--kind", choices=("K_R", "K_S", "K_R_Euclid"), default="K_R_Euclid")
    p.add_argument("--r1", type=_float_list, default=[1.0])
    p.add_argument("--r2", type=_float_list, default=[1.0])
    p.add_argument("--T", type=_float_list, default=[1.0])
    p.set_defaults(func=cmd_propagator)

    p = sub.add_parser("trace", help="kernel trace: quadrature vs closed form")
    _add_model_args(p)
    p.add_argument("--op", choices=("S", "R_Euclid"), default="S")
    p.add_argument("--T", type=_float_list, default=[0.1, 0.5, 1.0, 2.0, 5.0])
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("partition", help="partition function: series vs closed form")
    _add_model_args(p)
    p.add_argument("--beta", type=_float_list, default=[0.1, 1.0, 10.0])
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("thermality", help="diamond temperature and scrambling report")
    _add_model_args(p)
    p.set_defaults(func=cmd_thermality)

    p = sub.add_parser("dos", help="density-of-states table")
    _add_model_args(p)
    p.add_argument(
        "--method",
        choices=("digamma", "thomas-fermi", "series", "pole-closed", "gutzwiller"),
        default="digamma",
    )
    p.add_argument("--E", type=_float_list, default=None, help="explicit energies")
    p.add_argument("--e-min", type=float, default=1.0)
    p.add_argument("--e-max", type=float, default=20.0)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--C", type=float, default=None, help="regularization constant")
    p.add_argument("--L", type=float, default=100.0, help="box cutoff length")
    p.add_argument("--n-max", type=int, default=100000)
    p.add_argument("--k-max", type=int, default=200)
    p.set_defaults(func=cmd_dos)

    p = sub.add_parser("spectrum", help="box eigenvalues or counting staircase")
    _add_model_args(p)
    p.add_argument("--potential", choices=("R", "S"), default="R")
    p.add_argument("--q-min", type=float, default=1e-3)
    p.add_argument("--L", type=float, default=None, help="box length (default 20 osc. lengths)")
    p.add_argument("--n-points", type=int, default=4000)
    p.add_argument("--order", type=int, choices=(2, 4), default=4)
    p.add_argument("--count", type=int, default=6)
    p.add_argument("--staircase", action="store_true")
    p.add_argument("--e-min", type=float, default=5.0)
    p.add_argument("--e-max", type=float, default=15.0)
    p.add_argument("--n-e", type=int, default=11)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="run the acceptance suite")
    _add_model_args(p)
    p.add_argument("--quick", action="store_true", help="trim the slowest checks")
    p.set_defaults(func=cmd_verify)

    return parser


def _load_config_flags(path: str) -> list[str]:
    flags: list[str] = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line is not key=value: {raw.rstrip()}")
            key, value = (tok.strip() for tok in line.split("=", 1))
            flag = "--" + key.replace("_", "-")
            if value.lower() in ("true", "false"):
                if value.lower() == "true":
                    flags.append(flag)
            else:
                flags.extend([flag, value])
    return flags


def _inject_config(argv: list[str]) -> list[str]:
    """Splice config-file flags right after the subcommand so CLI flags win."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        return argv  # argparse will report the missing value
    flags = _load_config_flags(argv[idx + 1])
    return argv[:1] + flags + argv[1:]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and not argv[0].startswith("-"):
        argv = _inject_config(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
    except CQMError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    write_text(text, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
