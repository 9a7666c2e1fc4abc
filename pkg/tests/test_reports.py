"""
Tests for dataset writers, comparison records and the Markdown report
"""

import pytest

from qcodesign.control_plane import ClockConfig, LineBudget, audit, default_stages, fig5_sweep
from qcodesign.error_budget import constraint_penalty
from qcodesign.gate_accuracy import FrontierRow, load_calibration, table3_report
from qcodesign.layout import load_routing_nodes, routing_table
from qcodesign.reports import (
    FIG5_COLUMNS,
    SettingSummary,
    audit_record,
    comparison_record,
    fig5_rows,
    fmt,
    frontier_rows,
    idle_ratio,
    read_csv,
    read_json,
    render_markdown_report,
    table3_rows,
    within_tolerance,
    write_csv,
    write_json,
)


def _setting(label, first_last, makespan, optimal=True, oracle_m=None):
    return SettingSummary(
        constraints=label,
        greedy_m=first_last + 3,
        exact_m=first_last,
        optimal=optimal,
        nodes=100,
        makespan=20,
        m_by_policy={"first-last": first_last, "makespan": makespan},
        oracle_m=oracle_m,
    )


@pytest.fixture(scope="module")
def reference_audit():
    return audit(ClockConfig(), LineBudget(), default_stages())


class TestFormatting:
    @pytest.mark.parametrize(
        "value, text",
        [(None, ""), (True, "true"), (False, "false"), (0.1, "0.1"), (1 / 3, "0.333333333333"), (3, "3")],
    )
    def test_fmt(self, value, text):
        assert fmt(value) == text

    def test_csv_is_deterministic(self, tmp_path):
        rows = fig5_rows(fig5_sweep(45, range(1, 5)))
        a = write_csv(tmp_path / "a.csv", FIG5_COLUMNS, rows).read_bytes()
        b = write_csv(tmp_path / "b.csv", FIG5_COLUMNS, rows).read_bytes()
        assert a == b
        assert a.startswith(b"ratio,t_qclk_ns,lines_required\n1,1,45\n")
        assert read_csv(tmp_path / "a.csv")[1] == {"ratio": "2", "t_qclk_ns": "2", "lines_required": "23"}

    def test_json_keys_are_sorted(self, tmp_path):
        path = write_json(tmp_path / "out" / "x.json", {"b": 1, "a": {"d": 2, "c": 3}})
        assert path.read_text() == '{\n  "a": {\n    "c": 3,\n    "d": 2\n  },\n  "b": 1\n}\n'
        assert read_json(path) == {"a": {"c": 3, "d": 2}, "b": 1}

    def test_unit_conversion(self):
        rows = table3_rows(table3_report(load_calibration()))
        assert rows[0][0] == pytest.approx(0.069)
        assert rows[0][1] == pytest.approx(1.0)
        assert rows[0][4] == pytest.approx(30.0, rel=5e-3)

    def test_missing_frontier_values(self):
        assert frontier_rows([FrontierRow(1e-3, None, None, None)]) == [[pytest.approx(1000.0), None, None, None]]

    def test_audit_record(self, reference_audit):
        record = audit_record(reference_audit)
        assert record["direct_lines"] == 339
        assert record["min_qclk_ns"] == pytest.approx(23.0)
        assert record["line_categories"]["inductor"] == 22
        assert [s["feasible"] for s in record["stages"]] == [True, True, False]


class TestComparison:
    def test_idle_ratio(self):
        assert idle_ratio(95, 48) == pytest.approx(1.979, rel=1e-3)
        assert idle_ratio(5, 0) is None

    def test_tolerance(self):
        assert within_tolerance(60, 48)
        assert not within_tolerance(61, 48)
        assert not within_tolerance(None, 48)

    def test_record_with_both_settings(self):
        record = comparison_record({"on": _setting("on", 95, 300), "off": _setting("off", 48, 150)}, "first-last")
        assert record["objective_policy"] == "first-last"
        assert record["ratio_by_policy"]["first-last"] == pytest.approx(95 / 48)
        assert record["ratio_by_policy"]["makespan"] == pytest.approx(2.0)
        assert record["agreement_25pct"]["first-last"] == {"unconstrained": True, "constrained": True}
        assert record["agreement_25pct"]["makespan"] == {"unconstrained": False, "constrained": False}
        assert list(record["settings"]) == ["off", "on"]

    def test_undefined_ratio(self):
        record = comparison_record({"on": _setting("on", 3, 4), "off": _setting("off", 0, 2)}, "first-last")
        assert record["ratio_by_policy"]["first-last"] is None

    def test_single_setting(self):
        record = comparison_record({"on": _setting("on", 95, 300)}, "makespan")
        assert "ratio_by_policy" not in record
        assert record["settings"]["on"]["greedy_M"] == 98

    def test_certification(self):
        assert _setting("on", 5, 6).to_dict()["certified"]
        assert _setting("on", 5, 6, oracle_m=5).to_dict()["certified"]
        assert not _setting("on", 5, 6, oracle_m=4).to_dict()["certified"]
        assert not _setting("on", 5, 6, optimal=False).to_dict()["certified"]


class TestMarkdown:
    def _render(self, audit_result, summary=None):
        return render_markdown_report(
            "Prep 12 / X 42 / Z 18 / CPHASE 24 / Msr 12",
            audit_result,
            routing_table(load_routing_nodes()),
            table3_report(load_calibration()),
            constraint_penalty(),
            summary,
        )

    def test_sections(self, reference_audit):
        text = self._render(reference_audit)
        for heading in ("## Gate census", "## Scheduling", "## Control plane", "## Routing density",
                        "## Gate accuracy", "## Error budget"):
            assert heading in text
        assert "No schedule summary found" in text
        assert "| direct lines | 339 | 339 | ✅ |" in text
        assert "benefit ceiling ratio: 3.958" in text
        assert "⚠️ discrepancy" in text

    def test_schedule_rows(self, reference_audit):
        summary = comparison_record({"on": _setting("on", 95, 300), "off": _setting("off", 48, 150)}, "first-last")
        text = self._render(reference_audit, summary)
        assert "| on | first-last | 95 | 95 | ✅ |" in text
        assert "| off | makespan | 150 | 48 | ⚠️ discrepancy |" in text
        assert "idle ratio (first-last): 1.979" in text
