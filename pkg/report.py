# report.py

import json
import time
from dataclasses import dataclass
from io import BytesIO

import pandas as pd
import regex as re
from openpyxl import Workbook
from openpyxl.styles import Font, PatternFill
from openpyxl.utils.dataframe import dataframe_to_rows
from tabulate import tabulate

REPORT_SCHEMA_VERSION = 1

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
SKIPPED = "skipped"
STATUSES = (PASS, FAIL, INCONCLUSIVE, SKIPPED)

COLUMNS = ["check", "status", "witness", "elapsed"]

# characters Excel rejects in sheet titles
SHEET_UNSAFE = re.compile(r"[\[\]:*?/\\]")


def announce(message, quiet=False):
    if not quiet:
        print(message)


@dataclass
class CheckOutcome:
    name: str
    status: str
    witness: str = ""
    elapsed: float = 0.0


class Report:
    """Ordered list of named check outcomes."""

    def __init__(self, title="", outcomes=None):
        self.title = title
        self.outcomes = list(outcomes or [])

    def __repr__(self):
        return f"Report({self.title!r}, {len(self.outcomes)} checks)"

    def __iter__(self):
        return iter(self.outcomes)

    def __len__(self):
        return len(self.outcomes)

    # -----------------------------
    # BUILDING
    # -----------------------------
    def add(self, name, result, witness="", elapsed=0.0):
        if result is True:
            status = PASS
        elif result is False:
            status = FAIL
        elif result is None:
            status = INCONCLUSIVE
        else:
            status = result
        if status not in STATUSES:
            raise ValueError(f"unknown status {status!r}")
        outcome = CheckOutcome(name, status, "" if status == PASS else str(witness), elapsed)
        self.outcomes.append(outcome)
        return outcome

    def run(self, name, check):
        """Time `check() -> (result, witness)` and record it."""
        start = time.perf_counter()
        result, witness = check()
        return self.add(name, result, witness, time.perf_counter() - start)

    def skip(self, name, reason=""):
        return self.add(name, SKIPPED, reason)

    def extend(self, other, prefix=""):
        for o in other.outcomes:
            name = f"{prefix}{o.name}" if prefix else o.name
            self.outcomes.append(CheckOutcome(name, o.status, o.witness, o.elapsed))
        return self

    # -----------------------------
    # QUERIES
    # -----------------------------
    @property
    def ok(self):
        return all(o.status in (PASS, SKIPPED) for o in self.outcomes)

    def status_of(self, name):
        for o in self.outcomes:
            if o.name == name:
                return o.status
        raise KeyError(name)

    def failures(self):
        return [o for o in self.outcomes if o.status == FAIL]

    def exit_code(self):
        statuses = {o.status for o in self.outcomes}
        if FAIL in statuses:
            return 2
        if INCONCLUSIVE in statuses:
            return 3
        return 0

    # -----------------------------
    # OUTPUT
    # -----------------------------
    def to_frame(self):
        rows = [
            {"check": o.name, "status": o.status, "witness": o.witness, "elapsed": round(o.elapsed, 3)}
            for o in self.outcomes
        ]
        return pd.DataFrame(rows, columns=COLUMNS)

    def to_text(self):
        df = self.to_frame()
        df["witness"] = df["witness"].map(lambda w: w if len(w) <= 80 else w[:77] + "...")
        table = tabulate(df, headers="keys", tablefmt="github", showindex=False)
        return f"{self.title}\n{table}" if self.title else table

    def to_payload(self):
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "title": self.title,
            "checks": [
                {"name": o.name, "status": o.status, "witness": o.witness}
                for o in self.outcomes
            ],
        }

    def to_json(self):
        return json.dumps(self.to_payload(), indent=2, sort_keys=True)

    @classmethod
    def from_payload(cls, payload):
        version = payload.get("schema_version")
        if version != REPORT_SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema_version {version!r}")
        outcomes = [
            CheckOutcome(c["name"], c["status"], c.get("witness", ""))
            for c in payload.get("checks", [])
        ]
        return cls(payload.get("title", ""), outcomes)

    def to_excel(self, target=None):
        """Write one styled sheet; returns a BytesIO when no target is given."""
        return reports_to_excel([self], target)


def merge(reports, title="merged"):
    merged = Report(title)
    for r in reports:
        merged.extend(r, prefix=f"{r.title}: " if r.title else "")
    return merged


def reports_to_excel(reports, target=None):
    wb = Workbook()
    wb.remove(wb.active)
    if not reports:
        wb.create_sheet(title="Report")

    header = PatternFill("solid", fgColor="1F4E78")
    font = Font(color="FFFFFF", bold=True)
    failed = PatternFill("solid", fgColor="F4CCCC")

    for i, report in enumerate(reports, 1):
        title = SHEET_UNSAFE.sub("-", report.title or f"Report {i}")[:31]
        ws = wb.create_sheet(title=title)
        df = report.to_frame()
        for r, row in enumerate(dataframe_to_rows(df, index=False, header=True), 1):
            for c, v in enumerate(row, 1):
                cell = ws.cell(row=r, column=c, value=v)
                if r == 1:
                    cell.fill = header
                    cell.font = font
                elif row[1] == FAIL:
                    cell.fill = failed

    bio = target if target is not None else BytesIO()
    wb.save(bio)
    if target is None:
        bio.seek(0)
    return bio
