"""Serialization and rendering: register CSV, control catalog INI, layout JSON, reports.

Structural corruption (bad header, non-integer numerics, malformed CSV or INI)
raises ParseError. Semantically bad rows (out-of-range levels, unknown
categories, duplicate ids) are recorded in the returned report and skipped so
one bad row cannot poison a whole register.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources

from .errors import DomainError, ParseError, UnknownEnumValueError
from .model import (
    ASSET_VALUE_MAX,
    ASSET_VALUE_MIN,
    LIKELIHOOD_MAX,
    LIKELIHOOD_MIN,
    Asset,
    AssetCategory,
    RiskEntry,
    RiskRegister,
    Threat,
    Vulnerability,
)
from .scoring import (
    CODE_DUPLICATE_ID,
    CODE_RANGE,
    CODE_RISK_MISMATCH,
    CODE_UNKNOWN_CATEGORY,
    Finding,
    PresentedLayout,
    ValidationReport,
    compute_risk,
    sort_key,
)
from .appetite import (
    DEFAULT_APPETITE,
    AppetiteAnchor,
    BandFractions,
    HeatMap,
    SeverityBand,
    build_heatmap,
    partition_register,
    severity_band,
    treatment_for_band,
)
from .controls import (
    Control,
    ControlCategory,
    ControlEffect,
    ControlFunction,
    control_invariant_violations,
)

FORMAT_VERSION = 1

REGISTER_HEADER = (
    "id",
    "asset",
    "category",
    "owner",
    "asset_value",
    "threat",
    "threat_likelihood",
    "vulnerability",
    "vulnerability_likelihood",
    "risk",
)

_DATA_PACKAGE = "riskreg.data"
_GOLDEN_CSV = "sca_table3.csv"
_GOLDEN_LAYOUT = "sca_table3.layout.json"
_SEED_CATALOG = "seed_catalog.ini"


def _int_field(name: str, raw: str, line: int) -> int:
    try:
        return int(raw.strip())
    except ValueError:
        raise ParseError(f"{name} must be an integer, found {raw!r}", line=line) from None


def parse_register_csv(
    data: bytes, appetite: int = DEFAULT_APPETITE
) -> tuple[RiskRegister, ValidationReport]:
    """Parse register CSV bytes into a scored, sorted register plus a report.

    The risk column is optional on input; a stated risk that disagrees with
    asset_value * threat_likelihood * vulnerability_likelihood is replaced by
    the computed product and reported as a warning. Asset, threat, and
    vulnerability records are deduplicated by their visible fields and given
    ids in sorted order, so parsing is deterministic regardless of row order.
    """
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8: {exc}") from None

    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input", line=1) from None
    except csv.Error as exc:
        raise ParseError(f"malformed CSV: {exc}", line=1) from None

    if header == list(REGISTER_HEADER):
        has_risk = True
    elif header == list(REGISTER_HEADER[:-1]):
        has_risk = False
    else:
        raise ParseError(f"unexpected header: {','.join(header)!r}", line=1)
    width = len(REGISTER_HEADER) if has_risk else len(REGISTER_HEADER) - 1

    errors: list[Finding] = []
    warnings: list[Finding] = []
    rows: list[tuple] = []
    seen_ids: set[int] = set()

    while True:
        try:
            row = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            raise ParseError(f"malformed CSV: {exc}", line=reader.line_num) from None
        line = reader.line_num
        if not row:
            continue
        if len(row) != width:
            raise ParseError(f"expected {width} fields, found {len(row)}", line=line)

        entry_id = _int_field("id", row[0], line)
        asset_name, raw_category, owner = row[1], row[2], row[3]
        value = _int_field("asset_value", row[4], line)
        threat_name = row[5]
        t = _int_field("threat_likelihood", row[6], line)
        vuln_name = row[7]
        v = _int_field("vulnerability_likelihood", row[8], line)
        stated_risk = _int_field("risk", row[9], line) if has_risk else None

        if entry_id < 1:
            errors.append(
                Finding(entry_id, CODE_RANGE, f"id must be a positive integer, found {entry_id}")
            )
            continue
        if entry_id in seen_ids:
            errors.append(
                Finding(
                    entry_id,
                    CODE_DUPLICATE_ID,
                    f"duplicate id {entry_id}; keeping the first occurrence",
                )
            )
            continue
        try:
            category = AssetCategory(raw_category)
        except ValueError:
            errors.append(
                Finding(entry_id, CODE_UNKNOWN_CATEGORY, f"unknown asset category {raw_category!r}")
            )
            continue
        if not ASSET_VALUE_MIN <= value <= ASSET_VALUE_MAX:
            errors.append(
                Finding(
                    entry_id,
                    CODE_RANGE,
                    f"asset_value must be in [{ASSET_VALUE_MIN}, {ASSET_VALUE_MAX}], found {value}",
                )
            )
            continue
        bad_likelihood = None
        if not LIKELIHOOD_MIN <= t <= LIKELIHOOD_MAX:
            bad_likelihood = ("threat_likelihood", t)
        elif not LIKELIHOOD_MIN <= v <= LIKELIHOOD_MAX:
            bad_likelihood = ("vulnerability_likelihood", v)
        if bad_likelihood is not None:
            field, found = bad_likelihood
            errors.append(
                Finding(
                    entry_id,
                    CODE_RANGE,
                    f"{field} must be in [{LIKELIHOOD_MIN}, {LIKELIHOOD_MAX}], found {found}",
                )
            )
            continue

        computed = compute_risk(value, t, v)
        if stated_risk is not None and stated_risk != computed:
            warnings.append(
                Finding(
                    entry_id,
                    CODE_RISK_MISMATCH,
                    f"stated risk {stated_risk} != computed {computed}; using computed",
                )
            )
        seen_ids.add(entry_id)
        rows.append((entry_id, asset_name, category, owner, value, threat_name, t, vuln_name, v))

    asset_keys = sorted({(r[1], r[2], r[3], r[4]) for r in rows})
    threat_keys = sorted({(r[5], r[6]) for r in rows})
    vuln_keys = sorted({(r[7], r[8]) for r in rows})
    asset_ids = {key: i for i, key in enumerate(asset_keys, start=1)}
    threat_ids = {key: i for i, key in enumerate(threat_keys, start=1)}
    vuln_ids = {key: i for i, key in enumerate(vuln_keys, start=1)}

    entries = []
    for entry_id, asset_name, category, owner, value, threat_name, t, vuln_name, v in rows:
        asset = Asset(asset_ids[(asset_name, category, owner, value)], asset_name, category, owner, value)
        threat = Threat(threat_ids[(threat_name, t)], threat_name, t)
        vulnerability = Vulnerability(vuln_ids[(vuln_name, v)], vuln_name, v)
        entries.append(
            RiskEntry(entry_id, asset, threat, vulnerability, compute_risk(value, t, v))
        )
    entries.sort(key=sort_key)
    register = RiskRegister(tuple(entries), appetite)
    return register, ValidationReport(tuple(errors), tuple(warnings))


def emit_register_csv(register: RiskRegister) -> bytes:
    """Emit the canonical CSV form: sorted rows, recomputed risk, LF line ends."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(REGISTER_HEADER)
    for entry in sorted(register.entries, key=sort_key):
        writer.writerow(
            [
                entry.id,
                entry.asset.name,
                entry.asset.category.value,
                entry.asset.owner,
                entry.asset.value,
                entry.threat.name,
                entry.threat.likelihood,
                entry.vulnerability.name,
                entry.vulnerability.likelihood,
                compute_risk(entry.asset.value, entry.threat.likelihood, entry.vulnerability.likelihood),
            ]
        )
    return buffer.getvalue().encode("utf-8")


def _check_format_comment(text: str, *, what: str) -> None:
    # Only leading comment lines may carry the format marker.
    for raw_line in text.splitlines():
        stripped = raw_line.strip()
        if not stripped:
            continue
        if stripped.startswith("#") or stripped.startswith(";"):
            marker = stripped.lstrip("#; ").strip()
            if marker.startswith("riskreg-format:"):
                version = marker.split(":", 1)[1].strip()
                if version != str(FORMAT_VERSION):
                    raise ParseError(f"unsupported riskreg-format: {version!r} in {what}")
            continue
        break


def parse_catalog(data: bytes) -> list[Control]:
    """Parse an INI control catalog; section names are control ids."""
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8: {exc}") from None
    _check_format_comment(text, what="catalog")

    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ParseError(f"malformed catalog: {exc}") from None

    controls = []
    for section in parser.sections():
        options = parser[section]
        for required in ("name", "category", "functions"):
            if required not in options:
                raise ParseError(f"control {section}: missing required key {required!r}")
        raw_category = options["category"].strip()
        try:
            category = ControlCategory(raw_category)
        except ValueError:
            raise UnknownEnumValueError(
                f"control {section}: unknown category {raw_category!r}"
            ) from None
        functions = set()
        for token in options["functions"].split(","):
            token = token.strip()
            if not token:
                continue
            try:
                functions.add(ControlFunction(token))
            except ValueError:
                raise UnknownEnumValueError(
                    f"control {section}: unknown function {token!r}"
                ) from None
        applies_to = frozenset(
            tag.strip() for tag in options.get("applies_to", "").split(",") if tag.strip()
        )

        def reduction(key: str) -> int:
            raw = options.get(key, "0").strip()
            try:
                return int(raw)
            except ValueError:
                raise ParseError(f"control {section}: {key} must be an integer, found {raw!r}") from None

        control = Control(
            id=section,
            name=options["name"].strip(),
            category=category,
            functions=frozenset(functions),
            applies_to=applies_to,
            effect=ControlEffect(
                reduction("threat_reduction"), reduction("vulnerability_reduction")
            ),
            compensating_for=options.get("compensating_for", "").strip() or None,
        )
        problems = control_invariant_violations(control)
        if problems:
            raise ParseError(f"control {section}: {'; '.join(problems)}")
        controls.append(control)
    return controls


def parse_layout_json(data: bytes) -> PresentedLayout:
    """Parse a presentation layout sidecar: appetite plus above/below id lists."""
    try:
        payload = json.loads(data.decode("utf-8-sig"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"invalid layout JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise ParseError("layout must be a JSON object")
    version = payload.get("riskreg-format", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported riskreg-format: {version!r} in layout")

    appetite = payload.get("appetite")
    if not isinstance(appetite, int) or isinstance(appetite, bool) or appetite < 1:
        raise ParseError(f"layout appetite must be a positive integer, found {appetite!r}")

    def id_list(key: str) -> tuple[int, ...]:
        raw = payload.get(key)
        if not isinstance(raw, list) or any(
            not isinstance(x, int) or isinstance(x, bool) or x < 1 for x in raw
        ):
            raise ParseError(f"layout {key!r} must be a list of positive integers")
        return tuple(raw)

    return PresentedLayout(appetite, id_list("above"), id_list("below"))


def golden_register_bytes() -> bytes:
    return (resources.files(_DATA_PACKAGE) / _GOLDEN_CSV).read_bytes()


def golden_layout_bytes() -> bytes:
    return (resources.files(_DATA_PACKAGE) / _GOLDEN_LAYOUT).read_bytes()


def seed_catalog_bytes() -> bytes:
    return (resources.files(_DATA_PACKAGE) / _SEED_CATALOG).read_bytes()


def load_golden_register() -> RiskRegister:
    """The packaged 45-entry hospitality-sector register, scored and sorted."""
    register, report = parse_register_csv(golden_register_bytes())
    if not report.ok:
        raise DomainError("packaged register failed to parse cleanly")
    return register


def load_golden_layout() -> PresentedLayout:
    """The packaged register's published above/below presentation."""
    return parse_layout_json(golden_layout_bytes())


def load_seed_catalog() -> list[Control]:
    return parse_catalog(seed_catalog_bytes())


class ReportFormat(str, Enum):
    MARKDOWN = "markdown"
    PLAIN = "plain"


@dataclass(frozen=True)
class ReportOptions:
    format: ReportFormat = ReportFormat.MARKDOWN
    include_heatmap: bool = False
    include_treatments: bool = True


def render_report(
    register: RiskRegister,
    options: ReportOptions = ReportOptions(),
    fractions: BandFractions = BandFractions(),
    anchors: tuple[AppetiteAnchor, AppetiteAnchor] | None = None,
) -> str:
    """Render the partitioned register as markdown or plain text.

    When the appetite was derived from anchor triples, pass them so the report
    records where the threshold came from. Output carries no timestamps or
    environment detail, so the same register always renders to the same bytes.
    """
    above, below = partition_register(register, register.appetite)
    headline = f"appetite = {register.appetite}; {len(above)} above / {len(below)} below"
    anchor_line = None
    if anchors is not None:
        anchor_line = "anchors: " + " : ".join(
            f"{a.asset_value},{a.threat_likelihood},{a.vulnerability_likelihood}" for a in anchors
        )
    lines: list[str] = []

    def band_of(entry: RiskEntry) -> SeverityBand:
        return severity_band(entry.risk, register.appetite, fractions)

    if options.format is ReportFormat.MARKDOWN:
        lines.append(f"<!-- riskreg-format: {FORMAT_VERSION} -->")
        lines.append("# Risk register")
        lines.append("")
        lines.append(headline)
        if anchor_line:
            lines.append("")
            lines.append(anchor_line)
        for title, group in (("Above appetite", above), ("At or below appetite", below)):
            lines.append("")
            lines.append(f"## {title} ({len(group)})")
            lines.append("")
            header = ["id", "asset", "threat", "vulnerability", "A", "T", "V", "risk", "band"]
            if options.include_treatments:
                header.append("treatment")
            lines.append("| " + " | ".join(header) + " |")
            lines.append("|" + "|".join("---" for _ in header) + "|")
            for entry in group:
                band = band_of(entry)
                cells = [
                    str(entry.id),
                    entry.asset.name,
                    entry.threat.name,
                    entry.vulnerability.name,
                    str(entry.asset.value),
                    str(entry.threat.likelihood),
                    str(entry.vulnerability.likelihood),
                    str(entry.risk),
                    band.value,
                ]
                if options.include_treatments:
                    cells.append(treatment_for_band(band).value)
                lines.append("| " + " | ".join(cells) + " |")
        if options.include_heatmap:
            lines.append("")
            lines.append("## Heat map")
            lines.append("")
            lines.append("```")
            lines.append(render_heatmap_ascii(build_heatmap(register, register.appetite, fractions)))
            lines.append("```")
    else:
        lines.append(f"# riskreg-format: {FORMAT_VERSION}")
        lines.append("Risk register")
        lines.append(headline)
        if anchor_line:
            lines.append(anchor_line)
        for title, group in (("ABOVE APPETITE", above), ("AT OR BELOW APPETITE", below)):
            lines.append("")
            lines.append(f"{title} ({len(group)})")
            for entry in group:
                band = band_of(entry)
                prefix = f"{entry.id:>3}  {entry.risk:>4}  {band.value:<7}"
                if options.include_treatments:
                    prefix += f"  {treatment_for_band(band).value:<15}"
                lines.append(
                    f"{prefix}  {entry.asset.name} / {entry.threat.name} / {entry.vulnerability.name}"
                )
        if options.include_heatmap:
            lines.append("")
            lines.append("HEAT MAP")
            lines.append(render_heatmap_ascii(build_heatmap(register, register.appetite, fractions)))
    return "\n".join(lines) + "\n"


_BAND_CHAR = {
    SeverityBand.RED: "R",
    SeverityBand.YELLOW: "Y",
    SeverityBand.GREEN: "G",
    SeverityBand.MONITOR: ".",
}

BAND_FILL = {
    SeverityBand.RED: "#d9534f",
    SeverityBand.YELLOW: "#f0ad4e",
    SeverityBand.GREEN: "#5cb85c",
    SeverityBand.MONITOR: "#d8d8d8",
}


def render_heatmap_ascii(heatmap: HeatMap) -> str:
    """Character grid: rows are asset values 5..1, columns ceil(T*V/10) = 1..10."""
    lines = ["     " + " ".join(f"{col:>2}" for col in range(1, 11))]
    for value in range(5, 0, -1):
        cells = []
        for col in range(1, 11):
            cell = heatmap.cell(value, col)
            char = _BAND_CHAR[cell.band]
            cells.append(f"{char:>2}")
        lines.append(f"A={value}  " + " ".join(cells))
    lines.append("R=red Y=yellow G=green .=monitor")
    return "\n".join(lines)


_SVG_CELL_W = 84
_SVG_CELL_H = 64
_SVG_LEFT = 60
_SVG_TOP = 30


def render_heatmap_svg(heatmap: HeatMap) -> str:
    """Standalone SVG heat map with one marker per register entry.

    Cell fill encodes the band of the cell's nominal risk; entry ids are drawn
    as small text markers inside their cell. The output is deterministic for a
    given heat map.
    """
    width = _SVG_LEFT + 10 * _SVG_CELL_W + 10
    height = _SVG_TOP + 5 * _SVG_CELL_H + 50
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        f"<!-- riskreg-format: {FORMAT_VERSION} -->",
        f'<text x="{_SVG_LEFT}" y="20" font-size="14">'
        f"Risk heat map (appetite = {heatmap.appetite})</text>",
    ]
    for row_index, value in enumerate(range(5, 0, -1)):
        y = _SVG_TOP + row_index * _SVG_CELL_H
        out.append(
            f'<text x="{_SVG_LEFT - 8}" y="{y + _SVG_CELL_H // 2 + 4}" font-size="12" '
            f'text-anchor="end">A={value}</text>'
        )
        for col in range(1, 11):
            x = _SVG_LEFT + (col - 1) * _SVG_CELL_W
            cell = heatmap.cell(value, col)
            out.append(
                f'<rect x="{x}" y="{y}" width="{_SVG_CELL_W}" height="{_SVG_CELL_H}" '
                f'fill="{BAND_FILL[cell.band]}" stroke="#ffffff" stroke-width="2"/>'
            )
            if cell.entry_ids:
                out.append(
                    f'<text x="{x + _SVG_CELL_W - 6}" y="{y + 14}" font-size="11" '
                    f'text-anchor="end" class="cell-count">{len(cell.entry_ids)}</text>'
                )
                for i, entry_id in enumerate(cell.entry_ids):
                    tx = x + 6 + (i % 4) * 19
                    ty = y + 26 + (i // 4) * 12
                    out.append(
                        f'<text x="{tx}" y="{ty}" font-size="10" '
                        f'class="entry-marker">{entry_id}</text>'
                    )
    axis_y = _SVG_TOP + 5 * _SVG_CELL_H + 16
    for col in range(1, 11):
        cx = _SVG_LEFT + (col - 1) * _SVG_CELL_W + _SVG_CELL_W // 2
        out.append(
            f'<text x="{cx}" y="{axis_y}" font-size="12" text-anchor="middle">{col}</text>'
        )
    out.append(
        f'<text x="{_SVG_LEFT + 5 * _SVG_CELL_W}" y="{axis_y + 22}" font-size="12" '
        f'text-anchor="middle">likelihood column: ceil(T x V / 10)</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
