"""Experiment report payloads and their TSV/JSON serialization.

Reports are plain tabular records plus named test results; serialization
is deterministic so identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..stats import TestResult


@dataclass
class VerbRecord:
    """Per-verb double-object tallies and rates."""

    verb_lemma: str
    n_acc_dat: int = 0
    n_dat_acc: int = 0
    n_tie: int = 0
    n_dat_only: int = 0
    n_acc_only: int = 0

    @property
    def r_acc_dat(self) -> float | None:
        denom = self.n_acc_dat + self.n_dat_acc
        return self.n_acc_dat / denom if denom else None

    @property
    def r_dat_only(self) -> float | None:
        denom = self.n_dat_only + self.n_acc_only
        return self.n_dat_only / denom if denom else None

    def to_record(self) -> dict:
        return {
            "verb": self.verb_lemma,
            "n_acc_dat": self.n_acc_dat,
            "n_dat_acc": self.n_dat_acc,
            "n_tie": self.n_tie,
            "r_acc_dat": self.r_acc_dat,
            "n_dat_only": self.n_dat_only,
            "n_acc_only": self.n_acc_only,
            "r_dat_only": self.r_dat_only,
        }

    @classmethod
    def from_record(cls, record: dict) -> "VerbRecord":
        return cls(
            verb_lemma=record["verb"],
            n_acc_dat=record.get("n_acc_dat", 0),
            n_dat_acc=record.get("n_dat_acc", 0),
            n_tie=record.get("n_tie", 0),
            n_dat_only=record.get("n_dat_only", 0),
            n_acc_only=record.get("n_acc_only", 0),
        )


@dataclass
class ExperimentReport:
    name: str
    records: list[dict] = field(default_factory=list)
    tests: list[TestResult] = field(default_factory=list)
    config_echo: dict = field(default_factory=dict)
    skipped: dict[str, int] = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "config": self.config_echo,
            "records": self.records,
            "tests": [t.to_dict() for t in self.tests],
            "skipped": self.skipped,
        }


def _format_cell(value) -> str:
    if value is None:
        return "NA"
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def report_to_tsv(report: ExperimentReport) -> str:
    """Header plus one row per record, tab-separated, LF-terminated."""
    if not report.records:
        return "\n"
    columns = list(report.records[0].keys())
    lines = ["\t".join(columns)]
    for record in report.records:
        lines.append("\t".join(_format_cell(record.get(col)) for col in columns))
    return "\n".join(lines) + "\n"


def write_report(report: ExperimentReport, out_dir: str | Path, basename: str = "report") -> dict[str, Path]:
    """Write report.tsv and report.json into out_dir; returns written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tsv_path = out / f"{basename}.tsv"
    json_path = out / f"{basename}.json"
    tsv_path.write_text(report_to_tsv(report), encoding="utf-8")
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(report.to_json_obj(), fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")
    return {"tsv": tsv_path, "json": json_path}


def verb_records_from_report(path: str | Path) -> dict[str, VerbRecord]:
    """Rebuild the per-verb table from a double-object report.json."""
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    records = {}
    for record in payload.get("records", []):
        if "verb" in record:
            vr = VerbRecord.from_record(record)
            records[vr.verb_lemma] = vr
    return records
