"""Control catalog model, recommendation, layering checks, and residual-risk what-ifs."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import NotApplicableError, UnknownControlError, UnknownEntryError
from .model import LIKELIHOOD_MAX, LIKELIHOOD_MIN, RiskEntry, RiskRegister, Threat, Vulnerability
from .appetite import DEFAULT_BAND_FRACTIONS, BandFractions, SeverityBand, severity_band
from .scoring import compute_risk, sort_key


class ControlCategory(str, Enum):
    ADMINISTRATIVE = "Administrative"
    TECHNICAL = "Technical"
    PHYSICAL = "Physical"


class ControlFunction(str, Enum):
    PREVENT = "Prevent"
    DETER = "Deter"
    DEFLECT = "Deflect"
    MITIGATE = "Mitigate"
    DETECT = "Detect"
    RECOVER = "Recover"


_CATEGORY_ORDER = {c: i for i, c in enumerate(ControlCategory)}


@dataclass(frozen=True)
class ControlEffect:
    """Additive likelihood reductions a control contributes."""

    threat_reduction: int = 0
    vulnerability_reduction: int = 0

    @property
    def magnitude(self) -> int:
        return self.threat_reduction + self.vulnerability_reduction


@dataclass(frozen=True)
class Control:
    """A named countermeasure.

    ``applies_to`` holds threat and/or vulnerability name tags (empty set means
    universal applicability). A valid control has a nonempty function set and
    either some positive reduction or purely detective/recovery functions.
    """

    id: str
    name: str
    category: ControlCategory
    functions: frozenset[ControlFunction]
    applies_to: frozenset[str] = frozenset()
    effect: ControlEffect = ControlEffect()
    compensating_for: str | None = None

    def applies_to_entry(self, entry: RiskEntry) -> bool:
        if not self.applies_to:
            return True
        tags = {tag.casefold() for tag in self.applies_to}
        return (
            entry.threat.name.casefold() in tags
            or entry.vulnerability.name.casefold() in tags
        )


def control_invariant_violations(control: Control) -> list[str]:
    """Return human-readable invariant violations; empty means the control is valid."""
    problems = []
    if not control.functions:
        problems.append("functions set is empty")
    if control.effect.threat_reduction < 0 or control.effect.vulnerability_reduction < 0:
        problems.append("reductions must be non-negative")
    passive = {ControlFunction.DETECT, ControlFunction.RECOVER}
    if control.effect.magnitude == 0 and control.functions and not control.functions <= passive:
        problems.append(
            "zero-effect controls must be purely detective/recovery "
            f"(functions: {sorted(f.value for f in control.functions)})"
        )
    return problems


@dataclass(frozen=True)
class ControlPlan:
    """Assignments of catalog controls to register entries."""

    assignments: tuple[tuple[int, tuple[str, ...]], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, Sequence[str]]) -> "ControlPlan":
        return cls(tuple((entry_id, tuple(ids)) for entry_id, ids in mapping.items()))

    def controls_for(self, entry_id: int) -> tuple[str, ...]:
        collected: tuple[str, ...] = ()
        for eid, control_ids in self.assignments:
            if eid == entry_id:
                collected += control_ids
        return collected


def _clamp_likelihood(value: int) -> int:
    return max(LIKELIHOOD_MIN, min(LIKELIHOOD_MAX, value))


def apply_control(entry: RiskEntry, control: Control) -> RiskEntry:
    """Apply one control: reduce T and V by its effect, clamp to [1, 10], rescore.

    Asset value never changes; controls modify exposure, not asset worth.
    Raises NotApplicableError when the control's tags match neither the
    entry's threat nor its vulnerability.
    """
    if not control.applies_to_entry(entry):
        raise NotApplicableError(
            f"control {control.id} does not apply to threat {entry.threat.name!r} "
            f"or vulnerability {entry.vulnerability.name!r}"
        )
    return _reduced(entry, control.effect.threat_reduction, control.effect.vulnerability_reduction)


def _reduced(entry: RiskEntry, threat_reduction: int, vulnerability_reduction: int) -> RiskEntry:
    new_t = _clamp_likelihood(entry.threat.likelihood - threat_reduction)
    new_v = _clamp_likelihood(entry.vulnerability.likelihood - vulnerability_reduction)
    threat = Threat(entry.threat.id, entry.threat.name, new_t)
    vulnerability = Vulnerability(entry.vulnerability.id, entry.vulnerability.name, new_v)
    risk = compute_risk(entry.asset.value, new_t, new_v)
    return RiskEntry(entry.id, entry.asset, threat, vulnerability, risk)


@dataclass(frozen=True)
class EntryDelta:
    entry_id: int
    risk_before: int
    risk_after: int
    band_before: SeverityBand
    band_after: SeverityBand


@dataclass(frozen=True)
class WhatIfSnapshot:
    """Before/after register states under a control plan, with per-entry deltas."""

    before: RiskRegister
    after: RiskRegister
    deltas: tuple[EntryDelta, ...]
    total_before: int
    total_after: int


def apply_plan(
    register: RiskRegister,
    catalog: Sequence[Control],
    plan: ControlPlan,
    fractions: BandFractions = DEFAULT_BAND_FRACTIONS,
) -> WhatIfSnapshot:
    """Compute the what-if snapshot for a plan against a scored register.

    Controls assigned to one entry sum their reductions before a single clamp
    per dimension, so application order cannot matter. Bands in the deltas use
    the register's own appetite.
    """
    by_id = {control.id: control for control in catalog}
    register_ids = set(register.ids())
    for entry_id, control_ids in plan.assignments:
        if entry_id not in register_ids:
            raise UnknownEntryError(entry_id)
        for control_id in control_ids:
            if control_id not in by_id:
                raise UnknownControlError(control_id)

    after_entries = []
    deltas = []
    for entry in register.entries:
        controls = [by_id[cid] for cid in plan.controls_for(entry.id)]
        controls.sort(key=lambda c: c.id)
        total_t = total_v = 0
        for control in controls:
            if not control.applies_to_entry(entry):
                raise NotApplicableError(
                    f"control {control.id} does not apply to entry {entry.id}"
                )
            total_t += control.effect.threat_reduction
            total_v += control.effect.vulnerability_reduction
        new_entry = _reduced(entry, total_t, total_v)
        after_entries.append(new_entry)
        deltas.append(
            EntryDelta(
                entry_id=entry.id,
                risk_before=entry.risk,
                risk_after=new_entry.risk,
                band_before=severity_band(entry.risk, register.appetite, fractions),
                band_after=severity_band(new_entry.risk, register.appetite, fractions),
            )
        )

    after = RiskRegister(tuple(sorted(after_entries, key=sort_key)), register.appetite)
    return WhatIfSnapshot(
        before=register,
        after=after,
        deltas=tuple(deltas),
        total_before=sum(e.risk for e in register.entries),
        total_after=sum(e.risk for e in after.entries),
    )


def _reduction_achieved(entry: RiskEntry, control: Control) -> int:
    return entry.risk - apply_control(entry, control).risk


def recommend_controls(
    entry: RiskEntry, catalog: Sequence[Control], appetite: int
) -> list[Control]:
    """Rank applicable controls for an entry.

    Ordering: risk reduction achieved (desc), then whether the control adds a
    category not yet in the list (diversity), then id. Above-appetite entries
    get the best applicable Prevent-function control first when one exists.
    """
    candidates = [c for c in catalog if c.applies_to_entry(entry)]
    selected: list[Control] = []
    categories_used: set[ControlCategory] = set()

    def pick(pool: list[Control]) -> Control:
        return min(
            pool,
            key=lambda c: (
                -_reduction_achieved(entry, c),
                0 if c.category not in categories_used else 1,
                c.id,
            ),
        )

    if entry.risk > appetite:
        preventive = [c for c in candidates if ControlFunction.PREVENT in c.functions]
        if preventive:
            first = pick(preventive)
            selected.append(first)
            categories_used.add(first.category)
            candidates.remove(first)

    while candidates:
        best = pick(candidates)
        selected.append(best)
        categories_used.add(best.category)
        candidates.remove(best)
    return selected


@dataclass(frozen=True)
class DepthCheck:
    satisfied: bool
    missing_categories: tuple[ControlCategory, ...]


def defense_in_depth_check(
    entry: RiskEntry, applied: Iterable[Control], appetite: int
) -> DepthCheck:
    """Layering check: above-appetite entries need controls from >= 2 categories.

    Entries at or below the appetite always satisfy the check; missing
    categories are reported either way.
    """
    present = {control.category for control in applied}
    missing = tuple(sorted(set(ControlCategory) - present, key=_CATEGORY_ORDER.get))
    if entry.risk <= appetite:
        return DepthCheck(satisfied=True, missing_categories=missing)
    return DepthCheck(satisfied=len(present) >= 2, missing_categories=missing)


def compensating_substitute(catalog: Sequence[Control], unavailable: str) -> list[Control]:
    """Controls that compensate for an unavailable one, largest reduction first."""
    if not any(control.id == unavailable for control in catalog):
        raise UnknownControlError(unavailable)
    substitutes = [c for c in catalog if c.compensating_for == unavailable]
    substitutes.sort(key=lambda c: (-c.effect.magnitude, c.id))
    return substitutes
