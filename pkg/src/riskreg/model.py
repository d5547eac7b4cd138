"""Core domain types for the risk register, plus the two scale-mapping operations.

All types are immutable value records. Field invariants are documented here and
enforced by the scoring operations and ``validate_register``; records themselves
stay constructible from untrusted input so validators can report on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import DomainError, RangeError

ASSET_VALUE_MIN, ASSET_VALUE_MAX = 1, 5
LIKELIHOOD_MIN, LIKELIHOOD_MAX = 1, 10
RISK_MIN, RISK_MAX = 1, 500


class AssetCategory(str, Enum):
    """The five asset classes tracked by the register."""

    PURE_INFORMATION = "PureInformation"
    PHYSICAL_HARDWARE = "PhysicalHardware"
    SOFTWARE = "Software"
    REPUTATION = "Reputation"
    HUMAN_RESOURCE = "HumanResource"


# Severity labels for asset values 1..5, used by reports.
ASSET_VALUE_LABELS = {
    1: "Insignificant",
    2: "Minor",
    3: "Significant",
    4: "Major",
    5: "Acute",
}


@dataclass(frozen=True)
class ImpactAssessment:
    """Per-asset incident-impact ratings, each an integer level in [1, 5]."""

    embarrassment: int
    safety: int
    privacy: int
    legal: int
    financial_loss: int
    disruption: int

    def levels(self) -> tuple[int, ...]:
        return (
            self.embarrassment,
            self.safety,
            self.privacy,
            self.legal,
            self.financial_loss,
            self.disruption,
        )


def asset_value_from_impacts(impacts: ImpactAssessment) -> int:
    """Aggregate the six impact-category levels into an asset value in [1, 5].

    Aggregation is by maximum: the asset is worth as much as its worst
    plausible incident. Raises RangeError if any level is outside [1, 5].
    """
    for name, level in zip(
        ("embarrassment", "safety", "privacy", "legal", "financial_loss", "disruption"),
        impacts.levels(),
    ):
        if not isinstance(level, int) or not ASSET_VALUE_MIN <= level <= ASSET_VALUE_MAX:
            raise RangeError(f"impact level {name}={level!r} outside [1, 5]")
    return max(impacts.levels())


# Monetary bands for the financial-loss and disruption columns, in pounds.
# Half-open: level k covers [lower, upper), so exactly 10k falls in level 2.
_MONETARY_BOUNDS = (10_000, 100_000, 500_000, 1_000_000)


def monetary_impact_level(amount: float) -> int:
    """Map a monetary loss (pounds) to an impact level 1..5 using half-open bands."""
    if amount < 0:
        raise DomainError(f"monetary amount must be non-negative, got {amount!r}")
    for level, bound in enumerate(_MONETARY_BOUNDS, start=1):
        if amount < bound:
            return level
    return 5


@dataclass(frozen=True)
class Likelihood:
    """One row of the ten-level likelihood scale.

    ``anchor_frequency`` is the events-per-year rate the interpretation phrase
    pins the level to; anchors increase strictly with level.
    """

    level: int
    label: str
    interpretation: str
    anchor_frequency: Fraction


LIKELIHOOD_SCALE: tuple[Likelihood, ...] = (
    Likelihood(1, "Negligible", "Once every 1000 years or less", Fraction(1, 1000)),
    Likelihood(2, "Extremely Unlikely", "Once every 200 years", Fraction(1, 200)),
    Likelihood(3, "Very Unlikely", "Once every 50 years", Fraction(1, 50)),
    Likelihood(4, "Unlikely", "Once every 20 years", Fraction(1, 20)),
    Likelihood(5, "Feasible", "Once every 5 years", Fraction(1, 5)),
    Likelihood(6, "Probable", "Annually", Fraction(1)),
    Likelihood(7, "Very Probable", "Quarterly", Fraction(4)),
    Likelihood(8, "Expected", "Monthly", Fraction(12)),
    Likelihood(9, "Confidently Expected", "Weekly", Fraction(52)),
    Likelihood(10, "Certain", "Daily", Fraction(365)),
)

_LABEL_TO_LEVEL = {row.label: row.level for row in LIKELIHOOD_SCALE}


def likelihood_for_level(level: int) -> Likelihood:
    if not isinstance(level, int) or not LIKELIHOOD_MIN <= level <= LIKELIHOOD_MAX:
        raise RangeError(f"likelihood level {level!r} outside [1, 10]")
    return LIKELIHOOD_SCALE[level - 1]


def likelihood_for_label(label: str) -> Likelihood:
    try:
        return LIKELIHOOD_SCALE[_LABEL_TO_LEVEL[label] - 1]
    except KeyError:
        raise DomainError(f"unknown likelihood label: {label!r}") from None


def likelihood_from_frequency(rate: float) -> int:
    """Map an events-per-year rate to the likelihood level 1..10.

    Picks the level whose anchor frequency is nearest in log-space; exact
    midpoints resolve to the higher (more conservative) level.
    """
    if rate <= 0:
        raise DomainError(f"rate must be positive, got {rate!r}")
    log_rate = math.log(float(rate))
    best_level, best_dist = 1, math.inf
    for row in LIKELIHOOD_SCALE:
        dist = abs(log_rate - math.log(float(row.anchor_frequency)))
        if dist <= best_dist:  # ties go to the higher level
            best_level, best_dist = row.level, dist
    return best_level


@dataclass(frozen=True)
class Asset:
    """Something of value to the organisation; ``value`` is the symbol A in [1, 5].

    When ``impacts`` is present, ``value`` must equal
    ``asset_value_from_impacts(impacts)``.
    """

    id: int
    name: str
    category: AssetCategory
    owner: str
    value: int
    impacts: ImpactAssessment | None = None

    @classmethod
    def from_impacts(
        cls,
        id: int,
        name: str,
        category: AssetCategory,
        owner: str,
        impacts: ImpactAssessment,
    ) -> "Asset":
        return cls(id, name, category, owner, asset_value_from_impacts(impacts), impacts)


@dataclass(frozen=True)
class Threat:
    """A potential cause of an incident; ``likelihood`` is the symbol T in [1, 10]."""

    id: int
    name: str
    likelihood: int


@dataclass(frozen=True)
class Vulnerability:
    """A weakness of an asset; ``likelihood`` is the symbol V in [1, 10]."""

    id: int
    name: str
    likelihood: int


@dataclass(frozen=True)
class RiskEntry:
    """One register row. A scored entry satisfies risk = A x T x V in [1, 500]."""

    id: int
    asset: Asset
    threat: Threat
    vulnerability: Vulnerability
    risk: int


@dataclass(frozen=True)
class RiskRegister:
    """Ordered risk entries plus the register's appetite threshold.

    A presented register keeps entries sorted by (risk descending, id ascending);
    ``scoring.score_register`` establishes that order.
    """

    entries: tuple[RiskEntry, ...] = ()
    appetite: int = 150

    def entry(self, entry_id: int) -> RiskEntry | None:
        for entry in self.entries:
            if entry.id == entry_id:
                return entry
        return None

    def ids(self) -> tuple[int, ...]:
        return tuple(entry.id for entry in self.entries)
