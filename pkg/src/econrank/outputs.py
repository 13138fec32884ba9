"""Deterministic CSV/JSON rendering and plot-ready file emission.

All numeric CSV output uses fixed 12-significant-digit formatting so reruns
with identical inputs are byte-identical. JSON floats are rounded the same
way. The canonical panel dump is the one exception (exact repr, see panel).

Commands assemble every output as an in-memory string first and write only
after the whole pipeline has succeeded, so a failing run leaves no partial
files behind.
"""

from __future__ import annotations

import datetime as _dt
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import ParameterError
from .rankdyn import LaplaceFit, RankChangeSample, empirical_pdf, laplace_density
from .xsection import LinearFit, PowerLawFit, TTestResult


def fmt12(value: Any) -> str:
    """Render a number with 12 significant digits (ints stay plain)."""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".12g")


def json_ready(obj: Any) -> Any:
    """Recursively round floats to 12 significant digits; non-finite -> None."""
    if isinstance(obj, dict):
        return {k: json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_ready(v) for v in obj]
    if isinstance(obj, (bool, str, int)) or obj is None:
        return obj
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if not math.isfinite(f):
            return None
        return float(format(f, ".12g"))
    return obj


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """CSV text with a header row; numbers formatted via :func:`fmt12`."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else fmt12(cell) for cell in row))
    return "\n".join(lines) + "\n"


def render_json(payload: dict[str, Any]) -> str:
    return json.dumps(json_ready(payload), indent=2) + "\n"


def laplace_fit_json(fit: LaplaceFit) -> str:
    return render_json(
        {
            "decay": fit.decay,
            "n": fit.n,
            "mean_abs": fit.mean_abs,
            "log_likelihood": fit.log_likelihood,
        }
    )


def power_law_fit_json(fit: PowerLawFit) -> str:
    return render_json(
        {
            "alpha": fit.alpha,
            "ln_intercept": fit.ln_intercept,
            "stderr": fit.stderr_alpha,
            "correlation": fit.correlation,
            "t_value": fit.t_value_alpha,
            "n": len(fit.sample),
        }
    )


def ttest_json(result: TTestResult) -> str:
    return render_json(
        {
            "t": result.t,
            "df": result.df,
            "mean_a": result.mean_a,
            "mean_b": result.mean_b,
            "n_a": result.n_a,
            "n_b": result.n_b,
        }
    )


def deltas_csv(sample: RankChangeSample) -> str:
    return render_csv(
        ("country", "start_year", "end_year", "delta"),
        sample.records,
    )


def pdf_csv(sample: RankChangeSample, fit: LaplaceFit) -> str:
    """Empirical density and model density per integer bin."""
    rows = [
        (center, density, laplace_density(fit.decay, center))
        for center, density in empirical_pdf(sample)
    ]
    return render_csv(("bin", "density", "model_density"), rows)


def power_law_fitline_csv(
    fit: PowerLawFit, n_points: int = 100, header: Sequence[str] = ("x", "y")
) -> str:
    """Fitted curve sampled at ``n_points`` log-spaced x values."""
    if not fit.sample:
        raise ParameterError("fit sample is empty; nothing to plot")
    ln_lo = min(p.ln_x for p in fit.sample)
    ln_hi = max(p.ln_x for p in fit.sample)
    ln_grid = np.linspace(ln_lo, ln_hi, n_points)
    rows = [(math.exp(v), math.exp(fit.predict_ln(v))) for v in ln_grid]
    return render_csv(header, rows)


def linear_fitline_csv(
    fit: LinearFit,
    x_min: float,
    x_max: float,
    n_points: int = 100,
    header: Sequence[str] = ("x", "y"),
) -> str:
    if not (x_min <= x_max):
        raise ParameterError(f"empty fit-line range {x_min}..{x_max}")
    grid = np.linspace(x_min, x_max, n_points)
    return render_csv(header, [(x, fit.predict(x)) for x in grid])


def build_manifest(
    command: str,
    version: str,
    inputs: dict[str, Any],
    parameters: dict[str, Any],
    seed: int | None,
    produced: Sequence[str],
) -> dict[str, Any]:
    """Run record: inputs, parameters, seed, version, produced files.

    The timestamp is the only field that varies between identical reruns.
    """
    return {
        "command": command,
        "tool": "econrank",
        "version": version,
        "generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "inputs": inputs,
        "parameters": parameters,
        "seed": seed,
        "produced_files": sorted(produced),
    }


def write_output_files(out_dir: str | Path, files: dict[str, str]) -> list[Path]:
    """Write pre-rendered file contents under ``out_dir`` (created if absent)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, content in files.items():
        path = out / name
        path.write_text(content, encoding="utf-8")
        written.append(path)
    return written
