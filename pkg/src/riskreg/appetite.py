"""Risk appetite derivation, register partitioning, severity bands, and the heat map."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import DomainError
from .model import RiskEntry, RiskRegister
from .scoring import compute_risk, sort_key


@dataclass(frozen=True)
class AppetiteAnchor:
    """An (asset value, threat likelihood, vulnerability likelihood) reference triple."""

    asset_value: int
    threat_likelihood: int
    vulnerability_likelihood: int

    @property
    def risk(self) -> int:
        return compute_risk(self.asset_value, self.threat_likelihood, self.vulnerability_likelihood)


def appetite_midpoint(low: AppetiteAnchor, high: AppetiteAnchor) -> int:
    """Arithmetic mean of the two anchors' risk products, rounded half-up."""
    return (low.risk + high.risk + 1) // 2


DEFAULT_ANCHORS = (AppetiteAnchor(1, 10, 10), AppetiteAnchor(2, 10, 10))
DEFAULT_APPETITE = appetite_midpoint(*DEFAULT_ANCHORS)  # 150


class SeverityBand(str, Enum):
    """Risk severity relative to the appetite; total order RED > YELLOW > GREEN > MONITOR."""

    RED = "RED"
    YELLOW = "YELLOW"
    GREEN = "GREEN"
    MONITOR = "MONITOR"

    @property
    def rank(self) -> int:
        return _BAND_RANK[self]


_BAND_RANK = {
    SeverityBand.MONITOR: 0,
    SeverityBand.GREEN: 1,
    SeverityBand.YELLOW: 2,
    SeverityBand.RED: 3,
}


class TreatmentAction(str, Enum):
    AVOID_ELIMINATE = "avoid_eliminate"
    MITIGATE = "mitigate"
    TRANSFER = "transfer"
    ACCEPT_MONITOR = "accept_monitor"


_BAND_TREATMENT = {
    SeverityBand.RED: TreatmentAction.AVOID_ELIMINATE,
    SeverityBand.YELLOW: TreatmentAction.MITIGATE,
    SeverityBand.GREEN: TreatmentAction.TRANSFER,
    SeverityBand.MONITOR: TreatmentAction.ACCEPT_MONITOR,
}


def treatment_for_band(band: SeverityBand) -> TreatmentAction:
    return _BAND_TREATMENT[band]


@dataclass(frozen=True)
class BandFractions:
    """Band cutoffs as fractions of the appetite.

    A risk lands in the highest band whose cutoff it exceeds:
    RED above red*appetite, YELLOW above yellow*appetite, GREEN above
    green*appetite, MONITOR otherwise.
    """

    red: Fraction = Fraction(1)
    yellow: Fraction = Fraction(2, 3)
    green: Fraction = Fraction(1, 3)

    def __post_init__(self):
        if not self.red >= self.yellow >= self.green > 0:
            raise DomainError(
                f"band fractions must satisfy red >= yellow >= green > 0, "
                f"got {self.red}, {self.yellow}, {self.green}"
            )


DEFAULT_BAND_FRACTIONS = BandFractions()


def severity_band(
    risk: int, appetite: int, fractions: BandFractions = DEFAULT_BAND_FRACTIONS
) -> SeverityBand:
    if risk > fractions.red * appetite:
        return SeverityBand.RED
    if risk > fractions.yellow * appetite:
        return SeverityBand.YELLOW
    if risk > fractions.green * appetite:
        return SeverityBand.GREEN
    return SeverityBand.MONITOR


def partition_register(
    register: RiskRegister, appetite: int
) -> tuple[tuple[RiskEntry, ...], tuple[RiskEntry, ...]]:
    """Split a scored register at the appetite line.

    ``above`` holds entries strictly greater than the appetite (not acceptable);
    an entry sitting exactly on the line is tolerated and lands ``below``.
    Both halves keep the (risk desc, id asc) order.
    """
    above = tuple(sorted((e for e in register.entries if e.risk > appetite), key=sort_key))
    below = tuple(sorted((e for e in register.entries if e.risk <= appetite), key=sort_key))
    return above, below


HEATMAP_ROWS = 5  # asset value 1..5
HEATMAP_COLS = 10  # combined-likelihood decile, ceil(T*V / 10)


def heatmap_column(threat_likelihood: int, vulnerability_likelihood: int) -> int:
    return math.ceil(threat_likelihood * vulnerability_likelihood / 10)


@dataclass(frozen=True)
class HeatMapCell:
    band: SeverityBand
    entry_ids: tuple[int, ...] = ()


@dataclass(frozen=True)
class HeatMap:
    """5 x 10 grid of cells; row index is asset value, column the T*V decile."""

    grid: tuple[tuple[HeatMapCell, ...], ...]
    appetite: int

    def cell(self, asset_value: int, column: int) -> HeatMapCell:
        return self.grid[asset_value - 1][column - 1]


def build_heatmap(
    register: RiskRegister,
    appetite: int,
    fractions: BandFractions = DEFAULT_BAND_FRACTIONS,
) -> HeatMap:
    """Place every entry at (row = A, col = ceil(T*V/10)).

    Cell bands come from the cell's nominal risk (row * col * 10), so the
    colouring is fixed by the appetite even for empty cells.
    """
    placements: dict[tuple[int, int], list[int]] = {}
    for entry in register.entries:
        row = entry.asset.value
        col = heatmap_column(entry.threat.likelihood, entry.vulnerability.likelihood)
        placements.setdefault((row, col), []).append(entry.id)

    grid = tuple(
        tuple(
            HeatMapCell(
                band=severity_band(row * col * 10, appetite, fractions),
                entry_ids=tuple(sorted(placements.get((row, col), ()))),
            )
            for col in range(1, HEATMAP_COLS + 1)
        )
        for row in range(1, HEATMAP_ROWS + 1)
    )
    return HeatMap(grid=grid, appetite=appetite)
