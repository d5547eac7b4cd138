"""Qualitative information-security risk register toolkit.

Score risks as asset value x threat likelihood x vulnerability likelihood,
partition a register against a risk appetite, band entries for heat-map
display, and explore residual risk under control plans.
"""

from .errors import (
    DomainError,
    NotApplicableError,
    ParseError,
    RangeError,
    RiskregError,
    UnknownControlError,
    UnknownEntryError,
    UnknownEnumValueError,
)
from .model import (
    ASSET_VALUE_LABELS,
    ASSET_VALUE_MAX,
    ASSET_VALUE_MIN,
    LIKELIHOOD_MAX,
    LIKELIHOOD_MIN,
    LIKELIHOOD_SCALE,
    RISK_MAX,
    RISK_MIN,
    Asset,
    AssetCategory,
    ImpactAssessment,
    Likelihood,
    RiskEntry,
    RiskRegister,
    Threat,
    Vulnerability,
    asset_value_from_impacts,
    likelihood_for_label,
    likelihood_for_level,
    likelihood_from_frequency,
    monetary_impact_level,
)
from .scoring import (
    DEFAULT_KNOWN_OWNERS,
    Finding,
    PresentedLayout,
    ValidationReport,
    compute_risk,
    score_entry,
    score_register,
    sort_key,
    validate_register,
)
from .appetite import (
    DEFAULT_ANCHORS,
    DEFAULT_APPETITE,
    DEFAULT_BAND_FRACTIONS,
    AppetiteAnchor,
    BandFractions,
    HeatMap,
    HeatMapCell,
    SeverityBand,
    TreatmentAction,
    appetite_midpoint,
    build_heatmap,
    heatmap_column,
    partition_register,
    severity_band,
    treatment_for_band,
)
from .controls import (
    Control,
    ControlCategory,
    ControlEffect,
    ControlFunction,
    ControlPlan,
    DepthCheck,
    EntryDelta,
    WhatIfSnapshot,
    apply_control,
    apply_plan,
    compensating_substitute,
    defense_in_depth_check,
    recommend_controls,
)
from .register_io import (
    REGISTER_HEADER,
    ReportFormat,
    ReportOptions,
    emit_register_csv,
    load_golden_layout,
    load_golden_register,
    load_seed_catalog,
    parse_catalog,
    parse_layout_json,
    parse_register_csv,
    render_heatmap_ascii,
    render_heatmap_svg,
    render_report,
)

__all__ = [name for name in dir() if not name.startswith("_")]
