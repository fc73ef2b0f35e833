"""Command line front end.

Exit codes: 0 success, 2 invalid configuration or input file, 3 relaxation
constant below threshold without ``--allow-violation``, 4 numeric overflow.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import replace

from . import __version__
from .analysis import run_method, reference_oracle, summarize
from .config import (
    ConfigError,
    ScenarioConfig,
    list_presets,
    load_scenario,
    load_scenario_set,
    preset_path,
)
from .csvio import CsvFormatError, format_value, read_columns, write_columns
from .grid import TimeGrid
from .integrators import NumericOverflowError
from .models import InvalidParamsError, Variant, amplitude_sir, amplitude_sird
from .relaxation import Backend, RelaxationConfig, RelaxationConstantError, apriori_bounds

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VIOLATION = 3
EXIT_OVERFLOW = 4


def _config_path(args):
    if getattr(args, "preset", None):
        return preset_path(args.preset)
    if not args.config:
        raise ConfigError("config", "pass --config PATH or --preset NAME")
    return args.config


def _error(msg):
    print(f"error: {msg}", file=sys.stderr)


def _warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


def _run_scenario(cfg: ScenarioConfig):
    model = cfg.to_model()
    run = run_method(model, cfg.method, cfg.P, K=cfg.K, M=cfg.M, allow_violation=cfg.allow_violation)
    return run, summarize(run.bundle, run.sequence)


def _guarded(fn):
    """Map library exceptions onto the documented exit codes."""

    def wrapper(args):
        try:
            return fn(args)
        except RelaxationConstantError as exc:
            _error(f"{exc} (pass --allow-violation to run anyway)")
            return EXIT_VIOLATION
        except NumericOverflowError as exc:
            _error(str(exc))
            return EXIT_OVERFLOW
        except (ConfigError, CsvFormatError, InvalidParamsError) as exc:
            _error(str(exc))
            return EXIT_CONFIG

    return wrapper


@_guarded
def cmd_solve(args):
    cfg = load_scenario(_config_path(args))
    if args.allow_violation:
        cfg = replace(cfg, allow_violation=True)
    run, report = _run_scenario(cfg)
    write_columns(run.bundle.columns(), args.out)
    if args.svg:
        from .plotting import plot_columns

        plot_columns(run.bundle.columns(), args.svg, title=_title(cfg))
    print(
        f"amplitude={report.amplitude_int} peak_day={report.peak_day} "
        f"amplitude_raw={format_value(report.amplitude)} "
        f"min_value={format_value(report.min_value)} "
        f"conservation_residual={format_value(report.conservation_residual)}"
    )
    if report.min_value < 0:
        _warn(f"trajectory goes negative (min {format_value(report.min_value)})")
    return EXIT_OK


def _title(cfg):
    parts = [cfg.model.upper(), cfg.method, f"P={cfg.P}"]
    if cfg.K is not None:
        parts.append(f"K={cfg.K}")
    if cfg.M is not None:
        parts.append(f"M={cfg.M:g}")
    return ", ".join(parts)


def _true_amplitude(cfg):
    model = cfg.to_model()
    if model.variant is Variant.SIR:
        return amplitude_sir(model.params)
    if model.variant is Variant.SIRD:
        return amplitude_sird(model.params)
    return None


COMPARE_HEADER = ("method", "P", "K", "amplitude", "peak_day", "amplitude_raw", "note")


def compare_rows(runs, allow_violation=False):
    """One row per run (``ERR`` rows for failures) plus the closed-form peak."""
    rows = []
    first_ok = None
    for raw in runs:
        method = str(raw.get("method", "?"))
        P, K = raw.get("P", ""), raw.get("K", "")
        try:
            cfg = ScenarioConfig.from_mapping(raw)
            if allow_violation:
                cfg = replace(cfg, allow_violation=True)
            _, rep = _run_scenario(cfg)
        except (ConfigError, InvalidParamsError, RelaxationConstantError, NumericOverflowError) as exc:
            rows.append((method, P, "" if K is None else K, "ERR", "ERR", "", str(exc)))
            continue
        first_ok = first_ok or cfg
        rows.append((cfg.label or cfg.method, cfg.P, "" if cfg.K is None else cfg.K,
                     rep.amplitude_int, rep.peak_day, format_value(rep.amplitude), ""))
    if first_ok is not None:
        true_amp = _true_amplitude(first_ok)
        if true_amp is not None:
            rows.append(("true", "", "", math.trunc(true_amp), "", format_value(true_amp), "closed form"))
    return rows


@_guarded
def cmd_compare(args):
    runs = load_scenario_set(_config_path(args))
    rows = compare_rows(runs, args.allow_violation)
    widths = [max(len(str(r[i])) for r in [COMPARE_HEADER, *rows]) for i in range(len(COMPARE_HEADER))]
    for r in [COMPARE_HEADER, *rows]:
        print("  ".join(str(v).rjust(w) for v, w in zip(r, widths)).rstrip())
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(COMPARE_HEADER)
            w.writerows(rows)
    return EXIT_OK


@_guarded
def cmd_bound(args):
    cfg = load_scenario(_config_path(args))
    if cfg.method not in (Backend.EULER_RELAX.value, Backend.RK4_RELAX.value):
        raise ConfigError("method", "bound needs euler_relax or rk4_relax")
    model = cfg.to_model()
    relax = RelaxationConfig(M=cfg.M, K=cfg.K, backend=cfg.method,
                             allow_violation=cfg.allow_violation or args.allow_violation)
    grid = TimeGrid(cfg.P, model.params.T)
    P_ref = cfg.P * max(10, math.ceil(args.ref_points / cfg.P))
    ref = reference_oracle(model, P_ref)
    sup = float(abs(ref.R).max())
    rep = apriori_bounds(model, relax, grid, sup)
    rate = "n/a" if rep.corollary_rate is None else f"{rep.corollary_rate:.5f}"
    print(f"# factor={rep.factor:.6g} corollary_rate={rate} R_ref_sup={sup:.6g} (P_ref={P_ref})")
    header = ("k", "thm_main_bound", "corollary_rate", "iterate_sup_bound",
              "squared_error_bound", "removals_sup_bound")
    rows = [
        (int(k), f"{rep.thm_main_bound[j]:.6g}", rate, f"{rep.iterate_sup_bound[j]:.6g}",
         f"{rep.squared_error_bound[j]:.6g}", f"{rep.removals_sup_bound[j]:.6g}")
        for j, k in enumerate(rep.k)
    ]
    widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(len(header))]
    for r in [header, *rows]:
        print("  ".join(str(v).rjust(w) for v, w in zip(r, widths)))
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    return EXIT_OK


@_guarded
def cmd_plot(args):
    from .plotting import plot_columns

    columns = read_columns(args.csv)
    plot_columns(columns, args.out, title=args.title)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sirelax",
        description="Relaxation solvers for SIR-type epidemic models.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_opts(p):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--config", metavar="PATH", help="scenario JSON file")
        src.add_argument("--preset", metavar="NAME", help=f"bundled scenario ({', '.join(list_presets())})")
        p.add_argument("--allow-violation", action="store_true",
                       help="run even if M is below the non-negativity threshold")

    p = sub.add_parser("solve", help="solve one scenario and write its trajectory as CSV")
    scenario_opts(p)
    p.add_argument("--out", metavar="PATH", required=True, help="CSV output")
    p.add_argument("--svg", metavar="PATH", help="also render the curves to this SVG")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", help="amplitude/peak table for a scenario set")
    scenario_opts(p)
    p.add_argument("--out", metavar="PATH", help="also write the table as CSV")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bound", help="a priori error bounds per iteration")
    scenario_opts(p)
    p.add_argument("--out", metavar="PATH", help="also write the table as CSV")
    p.add_argument("--ref-points", type=int, default=20000,
                   help="minimum reference mesh size used for sup|R| (default 20000)")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("plot", help="render a solve CSV to SVG")
    p.add_argument("csv", metavar="CSV")
    p.add_argument("--out", metavar="PATH", required=True, help="SVG output")
    p.add_argument("--title")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
