"""CSV output and text summaries of refinement reports."""

from __future__ import annotations

import csv
import io
from pathlib import Path

from ..logging import get_logger
from .constants import CSV_FLOAT_FORMAT, CSV_HEADER, EOC_TOLERANCE
from .spec import EocReport, EocRow

log = get_logger(__name__)


def _number(value: float | None) -> str:
    if value is None:
        return ""
    return CSV_FLOAT_FORMAT % value


def _csv_row(row: EocRow) -> list[str]:
    return [
        row.experiment,
        _number(row.beta),
        row.inner_product,
        row.load,
        str(row.level),
        str(row.dofs),
        _number(row.h),
        _number(row.l2_error),
        _number(row.eoc),
        _number(row.theoretical_rate),
    ]


def format_csv(report: EocReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in report.rows:
        writer.writerow(_csv_row(row))
    return buffer.getvalue()


def write_csv(report: EocReport, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_csv(report), encoding="utf-8")
    log.info("wrote %d rows to %s", len(report.rows), path)
    return path


def summarize(report: EocReport, tolerance: float = EOC_TOLERANCE) -> list[str]:
    """One line per beta and inner product with the terminal order and the predicted rate."""
    lines = []
    for beta in report.spec.betas:
        lower, upper = report.theoretical_rates[beta]
        rate = f"{lower:.3g}" if lower == upper else f"{lower:.3g}..{upper:.3g}"
        for ip in report.spec.inner_products:
            terminal = report.terminal_eoc(beta, ip.label)
            if terminal is None:
                status = "n/a"
                shown = "-"
            else:
                status = "ok" if report.within_band(beta, ip.label, tolerance) else "off"
                shown = f"{terminal:.3f}"
            flagged = sum(row.flagged for row in report.rows_for(beta, ip.label))
            note = f" [{flagged} rows quadrature-dominated]" if flagged else ""
            lines.append(
                f"{report.spec.name} beta={beta:g} {ip.label}: terminal EOC {shown}, "
                f"theoretical {rate} ({status}){note}"
            )
    return lines
