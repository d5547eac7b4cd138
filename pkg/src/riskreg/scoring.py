"""Risk computation, register scoring/sorting, and register consistency validation."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import RangeError
from .model import (
    ASSET_VALUE_MAX,
    ASSET_VALUE_MIN,
    LIKELIHOOD_MAX,
    LIKELIHOOD_MIN,
    AssetCategory,
    RiskEntry,
    RiskRegister,
    asset_value_from_impacts,
)

# Owner role labels accepted by default; extend via validate_register(known_owners=...).
DEFAULT_KNOWN_OWNERS = frozenset({"CEO", "CIO", "COO", "CISO", "CFO", "CTO", "CSO"})

# Finding codes.
CODE_RANGE = "RangeError"
CODE_DUPLICATE_ID = "DuplicateId"
CODE_UNKNOWN_CATEGORY = "UnknownCategory"
CODE_UNKNOWN_OWNER = "UnknownOwner"
CODE_IMPACT_MISMATCH = "ImpactMismatch"
CODE_RISK_MISMATCH = "RiskMismatch"
CODE_ORDER_MISMATCH = "OrderMismatch"
CODE_PARTITION_MISMATCH = "PartitionMismatch"
CODE_LAYOUT_MISMATCH = "LayoutMismatch"


@dataclass(frozen=True)
class Finding:
    """One validation finding, tied to an entry id where one applies."""

    entry_id: int | None
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Finding, ...] = ()
    warnings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        """True when the register is acceptable for assessment (no errors)."""
        return not self.errors

    def merged(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.errors + other.errors, self.warnings + other.warnings)


@dataclass(frozen=True)
class PresentedLayout:
    """A register's printed above/below-appetite placement, for layout checks."""

    appetite: int
    above: tuple[int, ...]
    below: tuple[int, ...]


def compute_risk(asset_value: int, threat_likelihood: int, vulnerability_likelihood: int) -> int:
    """Return the risk score A x T x V, an integer in [1, 500]."""
    if not ASSET_VALUE_MIN <= asset_value <= ASSET_VALUE_MAX:
        raise RangeError(f"asset value {asset_value!r} outside [1, 5]")
    if not LIKELIHOOD_MIN <= threat_likelihood <= LIKELIHOOD_MAX:
        raise RangeError(f"threat likelihood {threat_likelihood!r} outside [1, 10]")
    if not LIKELIHOOD_MIN <= vulnerability_likelihood <= LIKELIHOOD_MAX:
        raise RangeError(f"vulnerability likelihood {vulnerability_likelihood!r} outside [1, 10]")
    return asset_value * threat_likelihood * vulnerability_likelihood


def sort_key(entry: RiskEntry) -> tuple[int, int]:
    """Presentation order: risk descending, then id ascending."""
    return (-entry.risk, entry.id)


def score_entry(entry: RiskEntry) -> RiskEntry:
    risk = compute_risk(entry.asset.value, entry.threat.likelihood, entry.vulnerability.likelihood)
    if risk == entry.risk:
        return entry
    return RiskEntry(entry.id, entry.asset, entry.threat, entry.vulnerability, risk)


def score_register(register: RiskRegister) -> RiskRegister:
    """Recompute every entry's risk and sort by (risk desc, id asc). Idempotent."""
    scored = []
    for entry in register.entries:
        try:
            scored.append(score_entry(entry))
        except RangeError as exc:
            raise RangeError(f"entry {entry.id}: {exc}") from None
    scored.sort(key=sort_key)
    return RiskRegister(tuple(scored), register.appetite)


@dataclass
class _Collector:
    errors: list[Finding] = field(default_factory=list)
    warnings: list[Finding] = field(default_factory=list)

    def error(self, entry_id: int | None, code: str, message: str) -> None:
        self.errors.append(Finding(entry_id, code, message))

    def warn(self, entry_id: int | None, code: str, message: str) -> None:
        self.warnings.append(Finding(entry_id, code, message))


def _check_ranges(entry: RiskEntry, out: _Collector) -> bool:
    """Report any out-of-range field; returns True when all fields are in range."""
    ok = True
    if not ASSET_VALUE_MIN <= entry.asset.value <= ASSET_VALUE_MAX:
        out.error(entry.id, CODE_RANGE, f"asset value {entry.asset.value} outside [1, 5]")
        ok = False
    if not LIKELIHOOD_MIN <= entry.threat.likelihood <= LIKELIHOOD_MAX:
        out.error(entry.id, CODE_RANGE, f"threat likelihood {entry.threat.likelihood} outside [1, 10]")
        ok = False
    if not LIKELIHOOD_MIN <= entry.vulnerability.likelihood <= LIKELIHOOD_MAX:
        out.error(
            entry.id,
            CODE_RANGE,
            f"vulnerability likelihood {entry.vulnerability.likelihood} outside [1, 10]",
        )
        ok = False
    return ok


def validate_register(
    register: RiskRegister,
    presented_layout: PresentedLayout | None = None,
    known_owners: frozenset[str] = DEFAULT_KNOWN_OWNERS,
) -> ValidationReport:
    """Check a register for consistency.

    Errors cover out-of-range values, duplicate ids, and unknown owner/category
    labels. Warnings cover a stated risk that differs from the recomputed
    A x T x V (recomputation is authoritative; imports are repaired, not
    rejected) and presented ordering or above/below placement that disagrees
    with the recomputed one.
    """
    out = _Collector()
    seen_ids: set[int] = set()

    for entry in register.entries:
        if entry.id in seen_ids:
            out.error(entry.id, CODE_DUPLICATE_ID, f"entry id {entry.id} occurs more than once")
        seen_ids.add(entry.id)
        if not isinstance(entry.id, int) or entry.id < 1:
            out.error(entry.id, CODE_RANGE, f"entry id {entry.id!r} is not a positive integer")

        if not isinstance(entry.asset.category, AssetCategory):
            out.error(
                entry.id,
                CODE_UNKNOWN_CATEGORY,
                f"unknown asset category {entry.asset.category!r}",
            )
        if entry.asset.owner not in known_owners:
            out.error(entry.id, CODE_UNKNOWN_OWNER, f"unknown owner label {entry.asset.owner!r}")

        if not _check_ranges(entry, out):
            continue

        if entry.asset.impacts is not None:
            derived = asset_value_from_impacts(entry.asset.impacts)
            if derived != entry.asset.value:
                out.error(
                    entry.id,
                    CODE_IMPACT_MISMATCH,
                    f"asset value {entry.asset.value} does not match "
                    f"impact-derived value {derived}",
                )

        expected = compute_risk(
            entry.asset.value, entry.threat.likelihood, entry.vulnerability.likelihood
        )
        if entry.risk != expected:
            out.warn(
                entry.id,
                CODE_RISK_MISMATCH,
                f"stated risk {entry.risk} differs from recomputed {expected}",
            )

    _check_order(register, out)
    if presented_layout is not None:
        _check_layout(register, presented_layout, out)

    return ValidationReport(tuple(out.errors), tuple(out.warnings))


def _check_order(register: RiskRegister, out: _Collector) -> None:
    entries = register.entries
    for prev, cur in zip(entries, entries[1:]):
        try:
            prev_risk = score_entry(prev).risk
            cur_risk = score_entry(cur).risk
        except RangeError:
            continue  # already reported as a range error
        if (prev_risk, -prev.id) < (cur_risk, -cur.id):
            out.warn(
                cur.id,
                CODE_ORDER_MISMATCH,
                f"entry {cur.id} (risk {cur_risk}) presented after "
                f"entry {prev.id} (risk {prev_risk})",
            )


def _check_layout(register: RiskRegister, layout: PresentedLayout, out: _Collector) -> None:
    """Compare a printed above/below placement against the recomputed partition."""
    placed = {entry_id: "above" for entry_id in layout.above}
    placed.update({entry_id: "below" for entry_id in layout.below})
    layout_ids = set(placed)
    register_ids = set(register.ids())
    for missing in sorted(register_ids - layout_ids):
        out.warn(missing, CODE_LAYOUT_MISMATCH, f"entry {missing} absent from presented layout")
    for extra in sorted(layout_ids - register_ids):
        out.warn(extra, CODE_LAYOUT_MISMATCH, f"presented layout names unknown entry {extra}")

    for entry in register.entries:
        side = placed.get(entry.id)
        if side is None:
            continue
        try:
            risk = score_entry(entry).risk
        except RangeError:
            continue
        expected = "above" if risk > layout.appetite else "below"
        if side != expected:
            out.warn(
                entry.id,
                CODE_PARTITION_MISMATCH,
                f"entry {entry.id} (risk {risk}) placed {side} the appetite line "
                f"but {risk} {'>' if expected == 'above' else '<='} {layout.appetite}",
            )
