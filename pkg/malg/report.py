#!/usr/bin/env python3
"""
malg — Reports for the command line.

A :class:`Report` collects the verdicts of one command together with counts,
notes and timing. :class:`TextFormatter` renders it as a rich table and
:class:`JsonFormatter` as JSON; both carry the same information.
"""

import io
import json
from dataclasses import dataclass, field
from typing import Any, Optional, Protocol

from rich import box
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from malg.core import Verdict

SCHEMA_VERSION = 1


@dataclass
class Report:
    """Outcome of one CLI command."""
    command: str
    verdicts: list[Verdict] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    def add(self, verdict: Verdict) -> Verdict:
        self.verdicts.append(verdict)
        return verdict

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    @property
    def status(self) -> str:
        return "pass" if self.ok else "fail"

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "status": self.status,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "counts": dict(self.counts),
            "notes": list(self.notes),
            "elapsed_seconds": round(self.elapsed, 6),
        }


class Formatter(Protocol):
    def format(self, report: Report) -> str: ...


def _witness_text(witness: Optional[dict[str, Any]]) -> str:
    if not witness:
        return ""
    return ", ".join(f"{k}={_value_text(v)}" for k, v in witness.items())


def _value_text(value: Any) -> str:
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}->{v}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "(" + ",".join(str(v) for v in value) + ")"
    return str(value)


class TextFormatter:
    """Format a report as a human-readable table."""

    def render(self, report: Report, console: Console) -> None:
        table = Table(
            title=f"malg {report.command}",
            box=box.SIMPLE_HEAVY,
            border_style="color(240)",
            header_style="bold color(141)",
            padding=(0, 2),
        )
        table.add_column("Check", style="bold white")
        table.add_column("Status")
        table.add_column("Checked", justify="right", style="dim")
        table.add_column("Detail", style="white")
        for v in report.verdicts:
            status = "[green]PASS[/green]" if v.ok else "[red]FAIL[/red]"
            if not v.exhaustive:
                status += " [dim](sampled)[/dim]"
            detail = v.detail
            if not v.ok:
                detail = f"[{v.clause}] " + " ".join(p for p in (v.detail, _witness_text(v.witness)) if p)
            table.add_row(escape(v.check), status, str(v.checked), escape(detail))
        console.print(table)
        for key, value in report.counts.items():
            console.print(f"  [dim]{key}:[/dim] {value}")
        for note in report.notes:
            console.print(f"  {note}", markup=False)
        summary = "[green]PASS[/green]" if report.ok else "[red]FAIL[/red]"
        console.print(f"  {summary} [dim]({report.elapsed:.3f}s)[/dim]")

    def format(self, report: Report) -> str:
        buffer = io.StringIO()
        self.render(report, Console(file=buffer, width=120, color_system=None, force_terminal=False))
        return buffer.getvalue()


class JsonFormatter:
    """Format a report as JSON mirroring the text rendering."""

    def format(self, report: Report) -> str:
        return json.dumps(report.to_dict(), indent=2, ensure_ascii=False)


def get_formatter(format_type: str) -> Formatter:
    formatters = {"text": TextFormatter, "json": JsonFormatter}
    if format_type not in formatters:
        raise ValueError(f"Unknown format: {format_type}")
    return formatters[format_type]()
