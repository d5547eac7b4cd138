"""CSV/INI/JSON parsing, canonical emission, and report/heat-map rendering."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riskreg.appetite import DEFAULT_ANCHORS, build_heatmap
from riskreg.controls import ControlCategory, ControlFunction
from riskreg.errors import ParseError, UnknownEnumValueError
from riskreg.model import AssetCategory
from riskreg.register_io import (
    REGISTER_HEADER,
    ReportFormat,
    ReportOptions,
    emit_register_csv,
    golden_register_bytes,
    load_golden_layout,
    load_golden_register,
    parse_catalog,
    parse_layout_json,
    parse_register_csv,
    render_heatmap_ascii,
    render_heatmap_svg,
    render_report,
)
from riskreg.scoring import (
    CODE_DUPLICATE_ID,
    CODE_RANGE,
    CODE_RISK_MISMATCH,
    CODE_UNKNOWN_CATEGORY,
)

from support import make_register

HEADER = ",".join(REGISTER_HEADER)


def csv_bytes(*rows: str, header: str = HEADER) -> bytes:
    return ("\n".join((header,) + rows) + "\n").encode("utf-8")


ROW_OK = "1,Server,Software,CIO,3,Malware,5,Unpatched OS,5,75"


class TestGoldenData:
    def test_parses_cleanly(self, golden_register):
        register, report = parse_register_csv(golden_register_bytes())
        assert report.ok and not report.warnings
        assert len(register.entries) == 45
        assert register == golden_register

    def test_frozen_scores(self, golden_register):
        assert golden_register.entry(16).risk == 360
        assert golden_register.entry(25).risk == 210
        assert golden_register.entry(32).risk == 40
        assert golden_register.entries[0].id == 16
        assert golden_register.entries[-1].id == 32

    def test_emit_reproduces_packaged_bytes(self, golden_register):
        assert emit_register_csv(golden_register) == golden_register_bytes()

    def test_published_layout(self, golden_layout):
        assert golden_layout.appetite == 150
        assert len(golden_layout.above) == 24
        assert len(golden_layout.below) == 21
        assert golden_layout.above[0] == 16
        assert golden_layout.below[0] == 39  # printed below the line despite 162 > 150


class TestStructuralErrors:
    def test_empty_input(self):
        with pytest.raises(ParseError) as exc:
            parse_register_csv(b"")
        assert exc.value.line == 1

    def test_unexpected_header(self):
        with pytest.raises(ParseError) as exc:
            parse_register_csv(b"id,asset,score\n")
        assert exc.value.line == 1
        assert "header" in str(exc.value)

    def test_header_without_risk_column_accepted(self):
        data = csv_bytes(
            "1,Server,Software,CIO,3,Malware,5,Unpatched OS,5",
            header=",".join(REGISTER_HEADER[:-1]),
        )
        register, report = parse_register_csv(data)
        assert report.ok
        assert register.entries[0].risk == 75

    def test_wrong_field_count(self):
        with pytest.raises(ParseError) as exc:
            parse_register_csv(csv_bytes("1,Server,Software,CIO,3"))
        assert exc.value.line == 2

    def test_non_integer_id(self):
        with pytest.raises(ParseError) as exc:
            parse_register_csv(csv_bytes("one,Server,Software,CIO,3,Malware,5,Unpatched OS,5,75"))
        assert "id" in str(exc.value)

    def test_non_integer_likelihood(self):
        with pytest.raises(ParseError):
            parse_register_csv(csv_bytes("1,Server,Software,CIO,3,Malware,high,Unpatched OS,5,75"))

    def test_invalid_utf8(self):
        with pytest.raises(ParseError):
            parse_register_csv(b"\xff\xfe" + HEADER.encode())


class TestSemanticFindings:
    def test_out_of_range_likelihood_skips_row(self):
        data = csv_bytes(
            ROW_OK,
            "2,Laptop,PhysicalHardware,CEO,3,Theft,11,Weak locks,5,165",
        )
        register, report = parse_register_csv(data)
        assert [f.code for f in report.errors] == [CODE_RANGE]
        assert report.errors[0].entry_id == 2
        assert register.ids() == (1,)

    def test_out_of_range_asset_value(self):
        data = csv_bytes("1,Server,Software,CIO,6,Malware,5,Unpatched OS,5,150")
        _, report = parse_register_csv(data)
        assert [f.code for f in report.errors] == [CODE_RANGE]
        assert "asset_value" in report.errors[0].message

    def test_duplicate_id_keeps_first(self):
        data = csv_bytes(
            ROW_OK,
            "1,Server,Software,CIO,3,Malware,9,Unpatched OS,5,135",
        )
        register, report = parse_register_csv(data)
        assert [f.code for f in report.errors] == [CODE_DUPLICATE_ID]
        assert register.entry(1).threat.likelihood == 5

    def test_unknown_category(self):
        data = csv_bytes("1,Server,Firmware,CIO,3,Malware,5,Unpatched OS,5,75")
        register, report = parse_register_csv(data)
        assert [f.code for f in report.errors] == [CODE_UNKNOWN_CATEGORY]
        assert not register.entries

    def test_non_positive_id(self):
        data = csv_bytes("0,Server,Software,CIO,3,Malware,5,Unpatched OS,5,75")
        _, report = parse_register_csv(data)
        assert [f.code for f in report.errors] == [CODE_RANGE]

    def test_stated_risk_mismatch_recomputes(self):
        data = csv_bytes("1,Server,Software,CIO,3,Malware,5,Unpatched OS,5,999")
        register, report = parse_register_csv(data)
        assert report.ok
        assert [f.code for f in report.warnings] == [CODE_RISK_MISMATCH]
        assert register.entry(1).risk == 75


class TestDeterministicSubIds:
    def test_row_order_does_not_matter(self):
        forward = csv_bytes(
            "1,Alpha,Software,CIO,3,Malware,5,Unpatched OS,5,75",
            "2,Beta,Software,CEO,4,Theft,6,Weak locks,7,168",
        )
        backward = csv_bytes(
            "2,Beta,Software,CEO,4,Theft,6,Weak locks,7,168",
            "1,Alpha,Software,CIO,3,Malware,5,Unpatched OS,5,75",
        )
        first, _ = parse_register_csv(forward)
        second, _ = parse_register_csv(backward)
        assert first == second

    def test_sub_ids_follow_sorted_keys(self):
        data = csv_bytes(
            "1,Zebra,Software,CIO,3,Malware,5,Unpatched OS,5,75",
            "2,Apple,Software,CIO,3,Theft,5,Weak locks,5,75",
        )
        register, _ = parse_register_csv(data)
        assert register.entry(2).asset.id == 1  # Apple sorts before Zebra
        assert register.entry(1).asset.id == 2

    def test_identical_records_share_a_sub_id(self):
        data = csv_bytes(
            "1,Server,Software,CIO,3,Malware,5,Unpatched OS,5,75",
            "2,Server,Software,CIO,3,Malware,7,Weak locks,5,105",
        )
        register, _ = parse_register_csv(data)
        assert register.entry(1).asset.id == register.entry(2).asset.id


names = st.text(
    alphabet=st.sampled_from('abcXYZ 0189,"\n\'-/()'),
    min_size=0,
    max_size=24,
)


@st.composite
def register_csv_rows(draw):
    count = draw(st.integers(min_value=0, max_value=8))
    rows = []
    for i in range(count):
        rows.append(
            (
                i + 1,
                draw(names),
                draw(st.sampled_from([c.value for c in AssetCategory])),
                draw(st.sampled_from(["CEO", "CIO", "COO"])),
                draw(st.integers(1, 5)),
                draw(names),
                draw(st.integers(1, 10)),
                draw(names),
                draw(st.integers(1, 10)),
            )
        )
    return rows


@settings(max_examples=120, deadline=None)
@given(register_csv_rows())
def test_round_trip_reaches_a_fixed_point(rows):
    import csv as csv_module
    import io

    buffer = io.StringIO()
    writer = csv_module.writer(buffer, lineterminator="\n")
    writer.writerow(REGISTER_HEADER[:-1])
    for row in rows:
        writer.writerow(row)
    canonical, report = parse_register_csv(buffer.getvalue().encode("utf-8"))
    assert report.ok
    reparsed, _ = parse_register_csv(emit_register_csv(canonical))
    assert reparsed == canonical
    assert emit_register_csv(reparsed) == emit_register_csv(canonical)


class TestCatalogParse:
    def test_seed_catalog(self, seed_catalog):
        assert len(seed_catalog) == 23
        by_id = {c.id: c for c in seed_catalog}
        training = by_id["C-ADM-03"]
        assert training.category is ControlCategory.ADMINISTRATIVE
        assert training.functions == {ControlFunction.PREVENT, ControlFunction.MITIGATE}
        assert (training.effect.threat_reduction, training.effect.vulnerability_reduction) == (3, 2)
        assert by_id["C-ADM-05"].compensating_for == "C-TEC-03"
        assert by_id["C-TEC-04"].compensating_for == "C-TEC-05"
        assert by_id["C-PHY-05"].compensating_for == "C-PHY-04"
        assert by_id["C-ADM-01"].applies_to == frozenset()

    def test_unknown_category(self):
        data = b"[C-1]\nname = X\ncategory = Logical\nfunctions = Prevent\nthreat_reduction = 1\n"
        with pytest.raises(UnknownEnumValueError):
            parse_catalog(data)

    def test_unknown_function(self):
        data = b"[C-1]\nname = X\ncategory = Technical\nfunctions = Obliterate\nthreat_reduction = 1\n"
        with pytest.raises(UnknownEnumValueError):
            parse_catalog(data)

    def test_missing_required_key(self):
        data = b"[C-1]\ncategory = Technical\nfunctions = Prevent\nthreat_reduction = 1\n"
        with pytest.raises(ParseError) as exc:
            parse_catalog(data)
        assert "name" in str(exc.value)

    def test_unsupported_format_marker(self):
        data = b"# riskreg-format: 2\n[C-1]\nname = X\ncategory = Technical\nfunctions = Prevent\nthreat_reduction = 1\n"
        with pytest.raises(ParseError):
            parse_catalog(data)

    def test_zero_effect_preventive_control_rejected(self):
        data = b"[C-1]\nname = X\ncategory = Technical\nfunctions = Prevent\n"
        with pytest.raises(ParseError):
            parse_catalog(data)

    def test_non_integer_reduction(self):
        data = b"[C-1]\nname = X\ncategory = Technical\nfunctions = Prevent\nthreat_reduction = two\n"
        with pytest.raises(ParseError):
            parse_catalog(data)

    def test_malformed_ini(self):
        with pytest.raises(ParseError):
            parse_catalog(b"name = orphan value before any section\n")


class TestLayoutParse:
    def test_rejects_non_object(self):
        with pytest.raises(ParseError):
            parse_layout_json(b"[1, 2, 3]")

    def test_rejects_unsupported_version(self):
        with pytest.raises(ParseError):
            parse_layout_json(b'{"riskreg-format": 2, "appetite": 150, "above": [], "below": []}')

    def test_version_key_optional(self):
        layout = parse_layout_json(b'{"appetite": 150, "above": [1], "below": [2]}')
        assert layout.appetite == 150

    def test_rejects_bad_appetite(self):
        for value in ("0", "true", '"150"', "null"):
            with pytest.raises(ParseError):
                parse_layout_json(
                    ('{"appetite": %s, "above": [], "below": []}' % value).encode()
                )

    def test_rejects_bad_id_lists(self):
        with pytest.raises(ParseError):
            parse_layout_json(b'{"appetite": 150, "above": [0], "below": []}')
        with pytest.raises(ParseError):
            parse_layout_json(b'{"appetite": 150, "above": "1,2", "below": []}')

    def test_rejects_invalid_json(self):
        with pytest.raises(ParseError):
            parse_layout_json(b"{not json")


class TestRenderReport:
    def test_markdown_structure(self, golden_register):
        text = render_report(golden_register)
        assert text.startswith("<!-- riskreg-format: 1 -->\n# Risk register\n")
        assert "appetite = 150; 25 above / 20 below" in text
        assert "## Above appetite (25)" in text
        assert "## At or below appetite (20)" in text
        assert "| 16 |" in text and "| 360 | RED | avoid_eliminate |" in text

    def test_anchors_line_only_when_anchors_given(self, golden_register):
        text = render_report(golden_register, anchors=DEFAULT_ANCHORS)
        assert "anchors: 1,10,10 : 2,10,10" in text
        assert "anchors:" not in render_report(golden_register)

    def test_plain_structure(self, golden_register):
        text = render_report(golden_register, ReportOptions(format=ReportFormat.PLAIN))
        lines = text.splitlines()
        assert lines[0] == "# riskreg-format: 1"
        assert "appetite = 150; 25 above / 20 below" in lines
        assert "ABOVE APPETITE (25)" in lines
        top = next(line for line in lines if line.startswith(" 16"))
        assert top.startswith(" 16   360  RED      avoid_eliminate")

    def test_treatments_can_be_omitted(self, golden_register):
        text = render_report(golden_register, ReportOptions(include_treatments=False))
        assert "avoid_eliminate" not in text
        assert "| band |" in text

    def test_heatmap_section(self, golden_register):
        options = ReportOptions(include_heatmap=True)
        markdown = render_report(golden_register, options)
        assert "## Heat map" in markdown and "```" in markdown
        plain = render_report(
            golden_register, ReportOptions(format=ReportFormat.PLAIN, include_heatmap=True)
        )
        assert "HEAT MAP" in plain

    def test_empty_register(self):
        text = render_report(make_register([]))
        assert "appetite = 150; 0 above / 0 below" in text

    def test_rendering_is_deterministic(self, golden_register):
        options = ReportOptions(include_heatmap=True)
        assert render_report(golden_register, options) == render_report(golden_register, options)


class TestHeatmapRendering:
    def test_ascii_grid(self, golden_register):
        text = render_heatmap_ascii(build_heatmap(golden_register, 150))
        lines = text.splitlines()
        assert lines[0].split() == [str(c) for c in range(1, 11)]
        assert lines[1] == "A=5   .  G  Y  R  R  R  R  R  R  R"
        assert lines[5] == "A=1   .  .  .  .  .  G  G  G  G  G"
        assert lines[6].startswith("R=red")

    def test_svg_markers_and_fills(self, golden_register):
        svg = render_heatmap_svg(build_heatmap(golden_register, 150))
        assert svg.count('class="entry-marker"') == 45
        for fill in ("#d9534f", "#f0ad4e", "#5cb85c", "#d8d8d8"):
            assert fill in svg
        assert 'width="910" height="400"' in svg
        assert 'class="cell-count">8<' in svg  # col 5, A=2 holds eight entries

    def test_svg_deterministic(self, golden_register):
        heatmap = build_heatmap(golden_register, 150)
        assert render_heatmap_svg(heatmap) == render_heatmap_svg(heatmap)

    def test_svg_empty_register(self):
        svg = render_heatmap_svg(build_heatmap(make_register([]), 150))
        assert 'class="entry-marker"' not in svg
        assert 'class="cell-count"' not in svg
