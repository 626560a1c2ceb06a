import json

import pytest
from openpyxl import load_workbook

from report import FAIL, INCONCLUSIVE, PASS, SKIPPED, Report, merge, reports_to_excel


def sample():
    report = Report("sample")
    report.add("first", True, "ignored")
    report.add("second", False, "x = 1")
    report.add("third", None, "cap reached")
    report.skip("fourth", "slow")
    return report


def test_statuses_and_exit_codes():
    report = sample()
    assert [o.status for o in report] == [PASS, FAIL, INCONCLUSIVE, SKIPPED]
    assert report.status_of("first") == PASS
    assert report.outcomes[0].witness == ""
    assert [o.name for o in report.failures()] == ["second"]
    assert not report.ok
    assert report.exit_code() == 2

    pending = Report("pending")
    pending.add("a", True)
    pending.add("b", None)
    assert pending.exit_code() == 3

    done = Report("done")
    done.add("a", True)
    done.skip("b")
    assert done.ok and done.exit_code() == 0

    with pytest.raises(KeyError):
        report.status_of("missing")
    with pytest.raises(ValueError):
        report.add("bad", "maybe")


def test_run_times_the_check():
    report = Report()
    outcome = report.run("quick", lambda: (True, ""))
    assert outcome.status == PASS
    assert outcome.elapsed >= 0


def test_extend_with_prefix():
    outer = Report("outer").extend(sample(), prefix="inner: ")
    assert outer.status_of("inner: second") == FAIL
    assert len(outer) == 4


def test_json_payload_survives_a_reload():
    report = sample()
    payload = json.loads(report.to_json())
    assert payload["schema_version"] == 1
    assert payload["title"] == "sample"
    again = Report.from_payload(payload)
    assert [(o.name, o.status, o.witness) for o in again] == [(o.name, o.status, o.witness) for o in report]

    payload["schema_version"] = 99
    with pytest.raises(ValueError):
        Report.from_payload(payload)


def test_text_table_truncates_long_witnesses():
    report = Report("long")
    report.add("row", False, "w" * 200)
    text = report.to_text()
    assert text.startswith("long\n")
    assert "w" * 77 + "..." in text
    assert "w" * 78 not in text


def test_merge_prefixes_titles():
    other = Report("other")
    other.add("first", True)
    merged = merge([sample(), other], "all")
    assert merged.title == "all"
    assert merged.status_of("sample: second") == FAIL
    assert merged.status_of("other: first") == PASS


def test_excel_workbook():
    unsafe = Report("a/b: c")
    unsafe.add("row", True)
    workbook = load_workbook(reports_to_excel([sample(), unsafe]))
    assert workbook.sheetnames == ["sample", "a-b- c"]
    sheet = workbook["sample"]
    assert [c.value for c in sheet[1]] == ["check", "status", "witness", "elapsed"]
    assert sheet.cell(row=3, column=2).value == FAIL
    assert sheet.cell(row=3, column=1).fill.fgColor.rgb.endswith("F4CCCC")
