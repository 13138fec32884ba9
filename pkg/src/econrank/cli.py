"""Command-line pipeline tying the library together.

Subcommands: ``ingest``, ``rank-dynamics``, ``cross-section``, ``simulate``.
Every command writes its outputs plus a ``manifest.json`` under ``--out`` and
nowhere else. Exit codes: 0 success, 1 usage error, 2 data error,
3 numerical/degenerate error. Reruns with identical inputs, parameters, and
seed produce byte-identical data files; only the manifest timestamp varies.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys
from pathlib import Path
from typing import Any

from . import __version__, abm, outputs, panel, rankdyn, xsection
from .errors import DataError, NumericalError, ParameterError


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage failures exit with code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(1, f"error: {message}\n")


def _parse_years(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError:
        raise ParameterError(f"--years must look like A:B, got {text!r}") from None


def _load_aliases(path: str | None) -> dict[str, str] | None:
    return panel.load_alias_map(path) if path else None


def _load_exclusions(path: str | None) -> set[str]:
    if not path:
        return set()
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return {ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")}


def _run_ingest(args: argparse.Namespace) -> tuple[dict[str, str], dict, dict, int | None]:
    pnl, skipped = panel.load_panel(
        args.input, args.indicator, aliases=_load_aliases(args.alias)
    )
    files = {"panel.csv": panel.serialize_panel(pnl, args.indicator)}
    inputs = {"input": args.input, "alias": args.alias}
    parameters = {
        "indicator": args.indicator,
        "observations": len(pnl),
        "rows_skipped": skipped,
    }
    return files, inputs, parameters, None


def _run_rank_dynamics(
    args: argparse.Namespace,
) -> tuple[dict[str, str], dict, dict, int | None]:
    pnl, skipped = panel.load_panel(
        args.input, args.indicator, aliases=_load_aliases(args.alias)
    )
    all_years = pnl.years(args.indicator)
    if not all_years:
        raise DataError(f"no observations for indicator {args.indicator!r}")
    years = _parse_years(args.years) if args.years else (all_years[0], all_years[-1])
    balanced = panel.balanced_subset(pnl, years, args.indicator)
    overlapping = not args.non_overlapping
    sample = rankdyn.rank_changes(balanced, args.window, overlapping=overlapping)
    fit = rankdyn.fit_laplace_mle(sample)
    files = {
        "deltas.csv": outputs.deltas_csv(sample),
        "pdf.csv": outputs.pdf_csv(sample, fit),
        "fit.json": outputs.laplace_fit_json(fit),
    }
    inputs = {"input": args.input, "alias": args.alias}
    parameters = {
        "indicator": args.indicator,
        "years": list(years),
        "window": args.window,
        "overlapping": overlapping,
        "n_countries": balanced.n_countries,
        "n_windows": len(sample.windows),
        "rows_skipped": skipped,
        "bins": "unit integer",
    }
    return files, inputs, parameters, None


def _run_cross_section(
    args: argparse.Namespace,
) -> tuple[dict[str, str], dict, dict, int | None]:
    x_panel, x_skipped = panel.load_panel(
        args.input, args.indicator, aliases=_load_aliases(args.alias)
    )
    y_panel, y_skipped = panel.load_panel(
        args.input_y, args.indicator_y, aliases=_load_aliases(args.alias_y)
    )
    t0, t1 = _parse_years(args.years)
    year = args.year if args.year is not None else t1
    if not (t0 <= year <= t1):
        raise ParameterError(
            f"--year {year} must lie inside the growth window {t0}:{t1}"
        )
    balanced_x = panel.balanced_subset(x_panel, (t0, t1), args.indicator)
    balanced_y = panel.balanced_subset(y_panel, (year, year), args.indicator_y)
    countries = sorted(set(balanced_x.countries) & set(balanced_y.countries))
    if not countries:
        raise DataError(
            f"no country has both {args.indicator!r} over {t0}-{t1} "
            f"and {args.indicator_y!r} in {year}"
        )
    excluded = _load_exclusions(args.exclude)
    fitted = [c for c in countries if c not in excluded]

    points = [(balanced_x.value(c, year), balanced_y.value(c, year)) for c in fitted]
    fit = xsection.fit_power_law(points, labels=fitted)
    scores = xsection.relative_competitiveness(fit)
    growth = {
        c: panel.growth_rate(balanced_x, c, t0, t1, method=args.growth) for c in fitted
    }
    group_pos, group_neg = xsection.split_by_sign(scores, growth)
    ttest = xsection.two_sample_t(group_pos, group_neg)
    d_growth = [(scores[c], growth[c]) for c in fitted]
    growth_fit = xsection.ols_linear(d_growth)

    x_name, y_name = args.indicator, args.indicator_y
    files = {
        "fit.json": outputs.power_law_fit_json(fit),
        "dscores.csv": outputs.render_csv(
            ("country", x_name, y_name, "d"),
            [
                (c, balanced_x.value(c, year), balanced_y.value(c, year), scores[c])
                for c in fitted
            ],
        ),
        "ttest.json": outputs.ttest_json(ttest),
        "growth_vs_d.csv": outputs.render_csv(
            ("country", "d", "growth"),
            [(c, scores[c], growth[c]) for c in fitted],
        ),
        "points.csv": outputs.render_csv(
            ("country", x_name, y_name, "excluded"),
            [
                (c, balanced_x.value(c, year), balanced_y.value(c, year),
                 int(c in excluded))
                for c in countries
            ],
        ),
        "fitline.csv": outputs.power_law_fitline_csv(fit, header=(x_name, y_name)),
        "growth_fitline.csv": outputs.linear_fitline_csv(
            growth_fit,
            min(s for s, _ in d_growth),
            max(s for s, _ in d_growth),
            header=("d", "growth"),
        ),
    }
    inputs = {
        "input": args.input,
        "input_y": args.input_y,
        "alias": args.alias,
        "alias_y": args.alias_y,
        "exclude": args.exclude,
    }
    parameters = {
        "indicator": x_name,
        "indicator_y": y_name,
        "year": year,
        "years": [t0, t1],
        "growth": args.growth,
        "n_countries": len(countries),
        "n_fitted": len(fitted),
        "excluded": sorted(excluded & set(countries)),
        "rows_skipped": x_skipped + y_skipped,
        "ttest_groups": [ttest.n_a, ttest.n_b],
    }
    return files, inputs, parameters, None


def _read_sweep_config(path: str) -> dict[str, Any]:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"config {path!r} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ParameterError(f"config {path!r} must be a JSON object")
    allowed = {"n_countries", "n_jobs", "mu_range", "sigma_range", "gamma", "seed"}
    unknown = set(raw) - allowed
    if unknown:
        raise ParameterError(f"unknown config fields: {sorted(unknown)}")
    missing = allowed - {"seed"} - set(raw)
    if missing:
        raise ParameterError(f"config is missing fields: {sorted(missing)}")
    return raw


def _run_simulate(
    args: argparse.Namespace,
) -> tuple[dict[str, str], dict, dict, int | None]:
    raw = _read_sweep_config(args.config)
    if args.seed is not None:
        seed = args.seed
    elif raw.get("seed") is not None:
        seed = int(raw["seed"])
    else:
        seed = secrets.randbits(63)  # recorded in the manifest
    try:
        config = abm.SweepConfig(
            n_countries=int(raw["n_countries"]),
            n_jobs=int(raw["n_jobs"]),
            mu_range=(float(raw["mu_range"][0]), float(raw["mu_range"][1])),
            sigma_range=(float(raw["sigma_range"][0]), float(raw["sigma_range"][1])),
            gamma=float(raw["gamma"]),
            seed=seed,
        )
    except (TypeError, ValueError, IndexError) as exc:
        raise ParameterError(f"malformed sweep config: {exc}") from None
    ensemble = abm.sweep(config, threads=args.threads)
    fit = abm.fit_model_regression(ensemble)
    files = {
        "ensemble.csv": outputs.render_csv(
            ("country_index", "mu", "sigma", "E", "GDP", "gdp", "gci_th"),
            [
                (i, o.params.mu, o.params.sigma, o.e_total, o.gdp_total,
                 o.gdp_per_capita, o.gci_th)
                for i, o in enumerate(ensemble)
            ],
        ),
        "model_fit.json": outputs.power_law_fit_json(fit),
        "fitline.csv": outputs.power_law_fitline_csv(fit, header=("gdp", "gci_th")),
    }
    inputs = {"config": args.config}
    parameters = {
        "n_countries": config.n_countries,
        "n_jobs": config.n_jobs,
        "mu_range": list(config.mu_range),
        "sigma_range": list(config.sigma_range),
        "gamma": config.gamma,
        "threads": args.threads,
    }
    return files, inputs, parameters, seed


def build_parser() -> _Parser:
    parser = _Parser(
        prog="econrank",
        description="Country rank dynamics, competitiveness fits, and the "
        "corruption simulation model.",
    )
    parser.add_argument("--version", action="version", version=f"econrank {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("ingest", help="validate a CSV and write the canonical panel dump")
    p.add_argument("--input", required=True, help="country,year,value CSV")
    p.add_argument("--indicator", required=True, help="indicator name for the rows")
    p.add_argument("--alias", help="source_name,iso3 CSV renaming countries")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(runner=_run_ingest)

    p = sub.add_parser("rank-dynamics", help="windowed rank changes and MLE decay fit")
    p.add_argument("--input", required=True, help="country,year,value CSV")
    p.add_argument("--indicator", required=True)
    p.add_argument("--alias", help="source_name,iso3 CSV renaming countries")
    p.add_argument("--years", help="inclusive balanced range A:B (default: full span)")
    p.add_argument("--window", type=int, default=10, help="window length in years")
    p.add_argument(
        "--non-overlapping",
        action="store_true",
        help="advance start years by the window length instead of 1",
    )
    p.add_argument("--out", required=True)
    p.set_defaults(runner=_run_rank_dynamics)

    p = sub.add_parser(
        "cross-section",
        help="power-law fit, competitiveness scores, sign-split t-test, growth regression",
    )
    p.add_argument("--input", required=True, help="x-indicator CSV (e.g. gdp)")
    p.add_argument("--indicator", default="gdp", help="x indicator name")
    p.add_argument("--input-y", required=True, help="y-indicator CSV (e.g. gci)")
    p.add_argument("--indicator-y", default="gci", help="y indicator name")
    p.add_argument("--alias", help="alias CSV for the x input")
    p.add_argument("--alias-y", help="alias CSV for the y input")
    p.add_argument("--years", default="2008:2011", help="growth window A:B")
    p.add_argument("--year", type=int, help="fit year (default: end of growth window)")
    p.add_argument("--exclude", help="file of country codes excluded from the fit")
    p.add_argument("--growth", choices=("log", "relative"), default="log")
    p.add_argument("--out", required=True)
    p.set_defaults(runner=_run_cross_section)

    p = sub.add_parser("simulate", help="run the corruption-model ensemble sweep")
    p.add_argument("--config", required=True, help="sweep configuration JSON")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument(
        "--threads",
        type=int,
        default=os.cpu_count() or 1,
        help="worker threads for the sweep (default: machine parallelism)",
    )
    p.add_argument("--out", required=True)
    p.set_defaults(runner=_run_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the diagnostic
        return int(exc.code or 0)
    try:
        files, inputs, parameters, seed = args.runner(args)
        produced = sorted(files) + ["manifest.json"]
        manifest = outputs.build_manifest(
            command=args.command,
            version=__version__,
            inputs=inputs,
            parameters=parameters,
            seed=seed,
            produced=produced,
        )
        files["manifest.json"] = outputs.render_json(manifest)
        outputs.write_output_files(args.out, files)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: missing file: {exc.filename or exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {len(files)} files to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
