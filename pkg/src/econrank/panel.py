"""Country-year indicator panels: CSV ingestion, balancing, growth rates.

An :class:`IndicatorPanel` is the sparse universe of observations; a
:class:`BalancedPanel` is the dense rectangle of countries that have a value
for every year of a requested range. Both are immutable after construction
and safe to share across threads.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator, Mapping

import numpy as np

from .errors import (
    DataError,
    DomainError,
    DuplicateObservationError,
    EmptyPanelError,
    MissingObservationError,
    ParameterError,
)

PANEL_HEADER = ("country", "year", "value")
ALIAS_HEADER = ("source_name", "iso3")

Observation = tuple[str, int, str, float]


def _is_gdp_like(indicator: str) -> bool:
    """Indicators carrying 'gdp' in the name must be strictly positive."""
    return "gdp" in indicator.lower()


@dataclass(frozen=True)
class IndicatorPanel:
    """Sparse mapping (country, year, indicator) -> value.

    ``observations`` is keyed by the triple, which enforces uniqueness by
    construction. ``provenance`` is a free-form description of the source.
    """

    observations: Mapping[tuple[str, int, str], float]
    provenance: str = ""

    def __post_init__(self) -> None:
        for (country, year, indicator), value in self.observations.items():
            if not math.isfinite(value):
                raise DataError(
                    f"non-finite value for ({country}, {year}, {indicator})"
                )
            if _is_gdp_like(indicator) and value <= 0:
                raise DataError(
                    f"nonpositive {indicator} value {value!r} for ({country}, {year})"
                )

    @classmethod
    def from_rows(
        cls, rows: Iterable[Observation], provenance: str = ""
    ) -> "IndicatorPanel":
        """Build a panel from (country, year, indicator, value) rows.

        Raises DuplicateObservationError if a triple appears twice.
        """
        obs: dict[tuple[str, int, str], float] = {}
        for country, year, indicator, value in rows:
            key = (country, int(year), indicator)
            if key in obs:
                raise DuplicateObservationError(
                    f"duplicate observation for (country={country}, "
                    f"year={year}, indicator={indicator})"
                )
            obs[key] = float(value)
        return cls(observations=obs, provenance=provenance)

    def __len__(self) -> int:
        return len(self.observations)

    def indicators(self) -> list[str]:
        return sorted({k[2] for k in self.observations})

    def countries(self, indicator: str | None = None) -> list[str]:
        indicator = self._resolve_indicator(indicator)
        return sorted({c for (c, _, ind) in self.observations if ind == indicator})

    def years(self, indicator: str | None = None) -> list[int]:
        indicator = self._resolve_indicator(indicator)
        return sorted({y for (_, y, ind) in self.observations if ind == indicator})

    def get(self, country: str, year: int, indicator: str | None = None) -> float | None:
        indicator = self._resolve_indicator(indicator)
        return self.observations.get((country, year, indicator))

    def _resolve_indicator(self, indicator: str | None) -> str:
        if indicator is not None:
            return indicator
        names = self.indicators()
        if len(names) != 1:
            raise ParameterError(
                f"panel holds {len(names)} indicators; specify one of {names}"
            )
        return names[0]


@dataclass(frozen=True)
class BalancedPanel:
    """Dense countries x years value matrix with no gaps.

    Country order is lexicographic by code; years ascend. ``values[i, j]``
    is the value of ``countries[i]`` in ``years[j]``.
    """

    countries: tuple[str, ...]
    years: tuple[int, ...]
    values: np.ndarray
    indicator: str = ""

    def __post_init__(self) -> None:
        if self.values.shape != (len(self.countries), len(self.years)):
            raise DataError(
                f"value matrix shape {self.values.shape} does not match "
                f"{len(self.countries)} countries x {len(self.years)} years"
            )
        if list(self.countries) != sorted(self.countries):
            raise DataError("countries must be sorted lexicographically")
        if not np.all(np.isfinite(self.values)):
            raise DataError("balanced panel contains non-finite values")

    @property
    def n_countries(self) -> int:
        return len(self.countries)

    def country_index(self, country: str) -> int:
        try:
            return self.countries.index(country)
        except ValueError:
            raise MissingObservationError(f"country {country!r} not in panel") from None

    def year_index(self, year: int) -> int:
        try:
            return self.years.index(year)
        except ValueError:
            raise MissingObservationError(f"year {year} not in panel") from None

    def value(self, country: str, year: int) -> float:
        return float(self.values[self.country_index(country), self.year_index(year)])

    def year_values(self, year: int) -> np.ndarray:
        """Values of every country for one year, in country order."""
        return self.values[:, self.year_index(year)].copy()


def _open_source(source: str | Path | IO[str]) -> tuple[IO[str], bool]:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8-sig", newline=""), True
    return source, False


def load_alias_map(source: str | Path | IO[str]) -> dict[str, str]:
    """Read a ``source_name,iso3`` CSV into a rename mapping."""
    stream, owned = _open_source(source)
    try:
        reader = csv.reader(stream)
        header = next(reader, None)
        if header is None or tuple(h.strip().lower() for h in header) != ALIAS_HEADER:
            raise DataError(
                f"alias file header must be {','.join(ALIAS_HEADER)!r}, got {header!r}"
            )
        aliases: dict[str, str] = {}
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise DataError(f"alias row must have 2 fields, got {row!r}")
            aliases[row[0].strip()] = row[1].strip()
        return aliases
    finally:
        if owned:
            stream.close()


def load_panel(
    source: str | Path | IO[str],
    indicator: str,
    aliases: Mapping[str, str] | None = None,
    provenance: str | None = None,
) -> tuple[IndicatorPanel, int]:
    """Load one indicator from a ``country,year,value`` CSV.

    Rows whose value field is empty, non-numeric, or non-finite are skipped
    and counted; so are rows with a malformed year, a blank country, or the
    wrong field count, and nonpositive values of gdp-like indicators. The
    skip count is returned alongside the panel. Duplicate (country, year)
    rows for the indicator are a hard error.
    """
    if provenance is None:
        provenance = str(source) if isinstance(source, (str, Path)) else "<stream>"
    stream, owned = _open_source(source)
    try:
        reader = csv.reader(stream)
        header = next(reader, None)
        if header is None or tuple(h.strip().lower() for h in header) != PANEL_HEADER:
            raise DataError(
                f"header must be {','.join(PANEL_HEADER)!r}, got {header!r}"
            )
        obs: dict[tuple[str, int, str], float] = {}
        skipped = 0
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue  # blank line, not a data row
            if len(row) != 3:
                skipped += 1
                continue
            country = row[0].strip()
            if aliases and country in aliases:
                country = aliases[country]
            if not country:
                skipped += 1
                continue
            try:
                year = int(row[1])
            except ValueError:
                skipped += 1
                continue
            try:
                value = float(row[2])
            except ValueError:
                skipped += 1
                continue
            if not math.isfinite(value):
                skipped += 1
                continue
            if _is_gdp_like(indicator) and value <= 0:
                skipped += 1
                continue
            key = (country, year, indicator)
            if key in obs:
                raise DuplicateObservationError(
                    f"duplicate observation for (country={country}, "
                    f"year={year}, indicator={indicator})"
                )
            obs[key] = value
        return IndicatorPanel(observations=obs, provenance=provenance), skipped
    finally:
        if owned:
            stream.close()


def serialize_panel(panel: IndicatorPanel, indicator: str | None = None) -> str:
    """Canonical CSV dump, sorted by (country, year).

    Values are written with ``repr`` so reloading reproduces the exact
    observation set (shortest round-trip representation).
    """
    indicator = panel._resolve_indicator(indicator)
    buf = io.StringIO()
    buf.write(",".join(PANEL_HEADER) + "\n")
    rows = sorted(
        (c, y, v) for (c, y, ind), v in panel.observations.items() if ind == indicator
    )
    for country, year, value in rows:
        buf.write(f"{country},{year},{value!r}\n")
    return buf.getvalue()


def balanced_subset(
    panel: IndicatorPanel,
    years: tuple[int, int],
    indicator: str | None = None,
) -> BalancedPanel:
    """Countries of ``panel`` with a value for every year of the inclusive range.

    Raises EmptyPanelError when no country is complete.
    """
    indicator = panel._resolve_indicator(indicator)
    start, end = int(years[0]), int(years[1])
    if start > end:
        raise ParameterError(f"empty year range {start}:{end}")
    span = list(range(start, end + 1))
    complete = sorted(
        c
        for c in panel.countries(indicator)
        if all((c, y, indicator) in panel.observations for y in span)
    )
    if not complete:
        raise EmptyPanelError(
            f"no country has complete {indicator} coverage for {start}-{end}"
        )
    values = np.array(
        [[panel.observations[(c, y, indicator)] for y in span] for c in complete],
        dtype=float,
    )
    return BalancedPanel(
        countries=tuple(complete),
        years=tuple(span),
        values=values,
        indicator=indicator,
    )


def growth_rate(
    panel: BalancedPanel,
    country: str,
    t0: int,
    t1: int,
    method: str = "log",
) -> float:
    """Growth of a country's value from ``t0`` to ``t1``.

    ``method='log'`` returns ln(v1/v0); ``method='relative'`` returns
    (v1 - v0)/v0. Values must be strictly positive.
    """
    if t0 >= t1:
        raise ParameterError(f"growth window must satisfy t0 < t1, got {t0}:{t1}")
    if method not in ("log", "relative"):
        raise ParameterError(f"unknown growth method {method!r}")
    v0 = panel.value(country, t0)
    v1 = panel.value(country, t1)
    if v0 <= 0 or v1 <= 0:
        raise DomainError(
            f"growth of {country} needs positive values, got {v0!r} -> {v1!r}"
        )
    if method == "log":
        return math.log(v1 / v0)
    return (v1 - v0) / v0


def growth_rates(
    panel: BalancedPanel, t0: int, t1: int, method: str = "log"
) -> dict[str, float]:
    """Growth per country over one window, in country order."""
    return {c: growth_rate(panel, c, t0, t1, method) for c in panel.countries}


def iter_observations(panel: IndicatorPanel) -> Iterator[Observation]:
    """Observations as (country, year, indicator, value), sorted."""
    for (c, y, ind), v in sorted(panel.observations.items()):
        yield (c, y, ind, v)
