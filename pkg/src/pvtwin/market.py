"""Intraday market operations: offers, redispatch checks, penalties.

An offer is 24 hourly average-power values (MW) for one market day,
derated by the declared plant availability. A committed offer is compared
intraday against the fresh forecast aggregate; any period outside the
tolerance band around the commitment triggers a redispatch.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

PERIODS = 24
DEFAULT_MARGIN = 0.05
#: band half-width (MW) for periods with zero commitment, where a
#: percentage band would be degenerate
ZERO_COMMIT_BAND_MW = 0.5


class WrongPeriodCount(ValueError):
    pass


@dataclass(frozen=True)
class OfferRow:
    date: dt.date
    period_values: tuple[float, ...]   # MW per hourly period 1..24

    def __post_init__(self):
        if len(self.period_values) != PERIODS:
            raise WrongPeriodCount(
                f"an offer needs {PERIODS} period values, got "
                f"{len(self.period_values)}")


@dataclass(frozen=True)
class PeriodDecision:
    period: int
    committed_mw: float
    intraday_mw: float
    band_low: float
    band_high: float
    outside_band: bool


@dataclass(frozen=True)
class RedispatchDecision:
    date: dt.date
    margin: float
    periods: tuple[PeriodDecision, ...]
    redispatch_required: bool


@dataclass(frozen=True)
class PeriodPenalty:
    period: int
    offered_mwh: float
    delivered_mwh: float
    excess_mwh: float          # deviation beyond the tolerance band
    charge: float


@dataclass(frozen=True)
class PenaltyEstimate:
    periods: tuple[PeriodPenalty, ...]
    total_charge: float


def resolve_operation_date(today: dt.date, operation: str,
                           requested: Optional[dt.date] = None) -> dt.date:
    """Market day for an operation: +1 day for offer, +2 for pre-offer."""
    if requested is not None:
        return requested
    if operation == "offer":
        return today + dt.timedelta(days=1)
    if operation == "pre_offer":
        return today + dt.timedelta(days=2)
    raise ValueError(f"unknown operation {operation!r}")


def build_offer(date: dt.date, hourly_plant_power_mw: Sequence[float],
                availability_mw: float) -> OfferRow:
    """Clip each period's plant power to the declared availability."""
    if len(hourly_plant_power_mw) != PERIODS:
        raise WrongPeriodCount(
            f"expected {PERIODS} hourly powers, got {len(hourly_plant_power_mw)}")
    values = tuple(min(max(float(p), 0.0), availability_mw)
                   for p in hourly_plant_power_mw)
    return OfferRow(date=date, period_values=values)


def redispatch_check(committed: OfferRow, intraday_mw: Sequence[float],
                     margin: float = DEFAULT_MARGIN) -> RedispatchDecision:
    """Flag periods whose intraday forecast leaves the tolerance band."""
    if len(intraday_mw) != PERIODS:
        raise WrongPeriodCount(
            f"expected {PERIODS} intraday values, got {len(intraday_mw)}")
    periods = []
    for p, (committed_mw, intraday) in enumerate(
            zip(committed.period_values, intraday_mw), start=1):
        if committed_mw == 0.0:
            low, high = -ZERO_COMMIT_BAND_MW, ZERO_COMMIT_BAND_MW
        else:
            low = committed_mw * (1.0 - margin)
            high = committed_mw * (1.0 + margin)
        outside = not (low <= intraday <= high)
        periods.append(PeriodDecision(
            period=p, committed_mw=committed_mw, intraday_mw=float(intraday),
            band_low=low, band_high=high, outside_band=outside))
    return RedispatchDecision(
        date=committed.date, margin=margin, periods=tuple(periods),
        redispatch_required=any(d.outside_band for d in periods))


def aggregate_intraday(runs: Mapping[str, Mapping[int, float]],
                       committed: OfferRow) -> list[float]:
    """Mean over all intraday forecast runs per period.

    Each run maps period number (1..24) to MW; periods no run covers keep
    the committed value (no evidence to deviate).
    """
    out = []
    for p in range(1, PERIODS + 1):
        values = [float(run[p]) for run in runs.values() if p in run]
        if values:
            out.append(sum(values) / len(values))
        else:
            out.append(committed.period_values[p - 1])
    return out


def estimate_penalty(offered: OfferRow, delivered_mwh: Sequence[float],
                     tolerance: float = DEFAULT_MARGIN,
                     unit_price: float = 0.0) -> PenaltyEstimate:
    """Deadband-linear deviation charge per period.

    Offered energy per hourly period equals the offered average power
    times one hour; the charge applies to deviation beyond
    tolerance * offered.
    """
    if len(delivered_mwh) != PERIODS:
        raise WrongPeriodCount(
            f"expected {PERIODS} delivered values, got {len(delivered_mwh)}")
    if tolerance < 0 or unit_price < 0:
        raise ValueError("tolerance and unit price must be >= 0")
    periods = []
    for p, (offered_mw, delivered) in enumerate(
            zip(offered.period_values, delivered_mwh), start=1):
        offered_mwh = offered_mw * 1.0
        excess = max(0.0, abs(delivered - offered_mwh) - tolerance * offered_mwh)
        periods.append(PeriodPenalty(
            period=p, offered_mwh=offered_mwh, delivered_mwh=float(delivered),
            excess_mwh=excess, charge=unit_price * excess))
    return PenaltyEstimate(periods=tuple(periods),
                           total_charge=sum(d.charge for d in periods))


# ---------------------------------------------------------------------------
# file layouts

def _format_mw(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def emit_offer_csv(row: OfferRow) -> str:
    """Offer layout: a Period header and one row labeled by the date."""
    header = "Period," + ",".join(str(p) for p in range(1, PERIODS + 1))
    values = ",".join(_format_mw(v) for v in row.period_values)
    return f"{header}\n{row.date.isoformat()},{values}\n"


def parse_offer_csv(text: str) -> OfferRow:
    lines = [ln for ln in text.strip().splitlines() if ln]
    if len(lines) != 2 or not lines[0].startswith("Period,"):
        raise ValueError("not an offer table")
    cells = lines[1].split(",")
    return OfferRow(date=dt.date.fromisoformat(cells[0]),
                    period_values=tuple(float(c) for c in cells[1:]))


def emit_redispatch_csv(date: dt.date, committed: Sequence[float],
                        intraday: Sequence[float]) -> str:
    """Redispatch layout: date header, one row per source."""
    if len(committed) != PERIODS or len(intraday) != PERIODS:
        raise WrongPeriodCount("both rows need 24 period values")
    header = date.isoformat() + "," + ",".join(
        str(p) for p in range(1, PERIODS + 1))
    gfs = "GFS," + ",".join(_format_mw(v) for v in committed)
    rw = "Reuniwatt," + ",".join(_format_mw(v) for v in intraday)
    return f"{header}\n{gfs}\n{rw}\n"


def parse_redispatch_csv(text: str) -> tuple[dt.date, list[float], list[float]]:
    lines = [ln for ln in text.strip().splitlines() if ln]
    if len(lines) != 3:
        raise ValueError("not a redispatch table")
    date = dt.date.fromisoformat(lines[0].split(",", 1)[0])
    rows = {}
    for line in lines[1:]:
        cells = line.split(",")
        rows[cells[0]] = [float(c) for c in cells[1:]]
    return date, rows["GFS"], rows["Reuniwatt"]
