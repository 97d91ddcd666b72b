"""Command-line front end.

Subcommands:
    peb     bound for a single instance at one SNR
    sweep   run the configured sweep, write CSV + plot data (+ SVG)
    select  print the chosen ports and their contributions
    audit   re-verify a previously written sweep CSV

Exit codes: 0 success, 1 config error, 2 numerical failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .errors import FaslocError, InvalidConfig
from .experiments import (
    STATUS_OK,
    SweepSpec,
    audit_csv,
    emit_csv,
    emit_plot_data,
    load_config,
    run_sweep,
)
from .fisher import Scenario, aoa_weight, network_fim, peb, toa_variance
from .linalg2 import logdet
from .select import (
    Method,
    bs_side_selection,
    exhaustive_selection,
    greedy_selection,
    random_selection,
    relaxed_selection,
)

TOA_FORMULA_NOTE = (
    "timing variance model: sigma_tau^2 = 1 / (8 * pi^2 * beta_eff^2 * SNR)"
)


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="config file (key = value)")
    p.add_argument("--seed", type=int, metavar="N", help="override sweep.seed")
    p.add_argument("--out", metavar="PATH", help="output CSV path for sweep")
    p.add_argument("--svg", action="store_true", help="also render curves to SVG")
    p.add_argument(
        "--scenario",
        choices=[s.value for s in Scenario],
        help="restrict to one deployment side",
    )
    p.add_argument(
        "--method",
        choices=[m.value for m in Method],
        help="restrict to one selection method",
    )
    p.add_argument(
        "--snr-db",
        type=float,
        metavar="X",
        help="operating SNR in dB (single-instance commands and non-SNR sweep axes)",
    )
    p.add_argument(
        "--per-trial",
        action="store_true",
        help="also emit one CSV row per averaged trial",
    )
    p.add_argument(
        "--user-disc",
        type=float,
        metavar="R",
        default=0.0,
        help="average every point over user positions drawn in a disc of radius R meters",
    )
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="worker threads")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fasloc",
        description="Localization error bounds and port selection for "
        "fluid-antenna positioning.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, desc in [
        ("peb", "compute the bound for a single instance"),
        ("sweep", "run the configured sweep and write CSV/plot data"),
        ("select", "print the chosen ports and their gains"),
        ("audit", "re-verify a sweep CSV against a recomputation"),
    ]:
        p = sub.add_parser(name, help=desc)
        _common_flags(p)
        if name == "audit":
            p.add_argument("csv", metavar="CSV", help="file to verify")
    return parser


def _spec_from_args(spec: SweepSpec, args) -> SweepSpec:
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    if args.scenario:
        spec = replace(spec, scenarios=(Scenario(args.scenario),))
    if args.method:
        spec = replace(spec, methods=(Method(args.method),))
    if args.snr_db is not None:
        spec = replace(spec, snr_db=args.snr_db)
    if args.per_trial:
        spec = replace(spec, per_trial=True)
    if args.user_disc:
        spec = replace(spec, user_disc_radius_m=args.user_disc)
    return spec


def _single_instance(configs, spec, args):
    scenario = Scenario(args.scenario) if args.scenario else Scenario.USER_SIDE
    method = Method(args.method) if args.method else Method.GREEDY
    snr_db = args.snr_db if args.snr_db is not None else spec.snr_db
    cfg = configs[scenario]
    cfg = replace(cfg, model=cfg.model.with_snr_db(snr_db))
    return cfg, scenario, method, snr_db


def _cmd_peb(args) -> int:
    configs, spec = load_config(args.config)
    spec = _spec_from_args(spec, args)
    cfg, scenario, method, snr_db = _single_instance(configs, spec, args)
    n_s = spec.n_s
    print(TOA_FORMULA_NOTE)
    print(f"sigma_tau^2 = {toa_variance(cfg.model):.9g} s^2 at {snr_db:g} dB")
    if scenario is Scenario.USER_SIDE:
        if method is Method.RANDOM:
            sel = random_selection(cfg.layouts[0].count, n_s, spec.seed)
        elif method is Method.GREEDY:
            sel = greedy_selection(cfg, n_s).selection
        elif method is Method.RELAXED:
            sel = relaxed_selection(cfg, n_s, spec.solver_tol, spec.solver_max_iters)[1].selection
        else:
            sel = exhaustive_selection(cfg, n_s, spec.exhaustive_cap).selection
        selections = (sel,)
        j = network_fim(cfg, sel)
    else:
        selections = bs_side_selection(cfg, n_s, method, seed=spec.seed)
        j = network_fim(cfg, selections)
    print(f"scenario={scenario.value} method={method.value} M={cfg.layouts[0].count} n_s={n_s}")
    for i, sel in enumerate(selections, start=1):
        label = "ports" if scenario is Scenario.USER_SIDE else f"anchor {i} ports"
        print(f"{label}: {list(sel.indices)}")
    print(f"logdet = {logdet(j):.9g}")
    print(f"PEB = {peb(j):.9g} m")
    return 0


def _cmd_select(args) -> int:
    configs, spec = load_config(args.config)
    spec = _spec_from_args(spec, args)
    cfg, scenario, method, snr_db = _single_instance(configs, spec, args)
    n_s = spec.n_s
    print(f"scenario={scenario.value} method={method.value} snr_db={snr_db:g}")
    if scenario is Scenario.USER_SIDE:
        if method is Method.GREEDY:
            report = greedy_selection(cfg, n_s)
            for step, gain in enumerate(report.gains, start=1):
                print(f"step {step}: gain {gain:.9g}")
            print(f"ports: {list(report.selection.indices)}")
            if report.jitter:
                print(f"note: singular base regularized with jitter {report.jitter:.3g}")
            print(f"logdet = {report.objective_logdet:.9g}, PEB = {report.peb_m:.9g} m")
        elif method is Method.RELAXED:
            weights, report = relaxed_selection(
                cfg, n_s, spec.solver_tol, spec.solver_max_iters
            )
            for m in report.selection.indices:
                print(f"port {m}: weight {weights.w[m - 1]:.9g}")
            print(f"ports: {list(report.selection.indices)}")
            print(
                f"relaxed logdet = {report.relaxed_objective:.9g} (gap {report.gap:.3g}), "
                f"rounded logdet = {report.objective_logdet:.9g}, PEB = {report.peb_m:.9g} m"
            )
        elif method is Method.RANDOM:
            sel = random_selection(cfg.layouts[0].count, n_s, spec.seed)
            j = network_fim(cfg, sel)
            print(f"ports: {list(sel.indices)}")
            print(f"logdet = {logdet(j):.9g}, PEB = {peb(j):.9g} m")
        else:
            report = exhaustive_selection(cfg, n_s, spec.exhaustive_cap)
            print(f"ports: {list(report.selection.indices)}")
            print(f"subsets evaluated: {report.iterations}")
            print(f"logdet = {report.objective_logdet:.9g}, PEB = {report.peb_m:.9g} m")
    else:
        selections = bs_side_selection(cfg, n_s, method, seed=spec.seed)
        brgs = cfg.bearings()
        for b, sel in enumerate(selections, start=1):
            lam = aoa_weight(cfg.layout_for(b), sel, brgs[b - 1].u_perp, cfg.model)
            print(f"anchor {b}: ports {list(sel.indices)} (bearing weight {lam:.9g})")
        j = network_fim(cfg, selections)
        print(f"logdet = {logdet(j):.9g}, PEB = {peb(j):.9g} m")
    return 0


def _cmd_sweep(args) -> int:
    configs, spec = load_config(args.config)
    spec = _spec_from_args(spec, args)
    out = Path(args.out) if args.out else Path("results.csv")
    rows = run_sweep(configs, spec, jobs=max(1, args.jobs))
    emit_csv(rows, out)
    dat = out.with_suffix(".dat")
    emit_plot_data(rows, dat)
    written = [str(out), str(dat)]
    if args.svg:
        from .plots import render_curves

        svg = out.with_suffix(".svg")
        render_curves(rows, svg)
        written.append(str(svg))
    n_ok = sum(1 for r in rows if r.status == STATUS_OK)
    print(TOA_FORMULA_NOTE)
    print(f"{len(rows)} rows ({n_ok} ok); wrote " + ", ".join(written))
    return 0


def _cmd_audit(args) -> int:
    configs, spec = load_config(args.config)
    spec = _spec_from_args(spec, args)
    problems = audit_csv(args.csv, configs, spec, jobs=max(1, args.jobs))
    if problems:
        for p in problems:
            print(f"audit: {p}", file=sys.stderr)
        print(f"audit FAILED with {len(problems)} discrepancies", file=sys.stderr)
        return 2
    print(f"audit passed: {args.csv} matches its recomputation")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "peb": _cmd_peb,
        "sweep": _cmd_sweep,
        "select": _cmd_select,
        "audit": _cmd_audit,
    }
    try:
        return handlers[args.command](args)
    except InvalidConfig as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except FaslocError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
