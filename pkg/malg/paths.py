#!/usr/bin/env python3
"""
malg — Bundled data-file resolution.

Single source of truth for locating the fixtures and the report schema that
ship inside ``malg/data``.
"""

import importlib.resources
from pathlib import Path
from typing import Optional

# Fixture name → filename (shared by the CLI demo and the tests)
FIXTURES = {
    "counterexample-a": "counterexample_a.malg",
    "counterexample-b": "counterexample_b.malg",
    "antichain": "antichain.malg",
    "powerset-3": "powerset_3.malg",
    "nmatrix": "nmatrix.malg",
    "partial-choice": "partial_choice.malg",
}

SCHEMA_FILE = "report.schema.json"


def _bundled_data_dir() -> Path:
    """Return the path to the bundled data directory inside the package."""
    ref = importlib.resources.files("malg.data")
    # files() returns a Traversable; for on-disk packages this is a path already.
    return Path(str(ref))


def get_fixture(name: str, base_path: Optional[Path] = None) -> Path:
    """
    Resolve a bundled fixture by name.

    Resolution order:
      1. If *base_path* is provided, look for the fixture's file directly under it.
      2. Otherwise fall back to the bundled ``malg/data/<filename>``.

    Raises:
        ValueError: If *name* is not a known fixture.
        FileNotFoundError: If the resolved file does not exist.
    """
    if name not in FIXTURES:
        raise ValueError(f"Invalid fixture: {name}. Must be one of: {', '.join(sorted(FIXTURES))}")

    filename = FIXTURES[name]
    if base_path is not None:
        p = Path(base_path).resolve() / filename
    else:
        p = _bundled_data_dir() / filename

    if not p.exists():
        raise FileNotFoundError(f"Fixture file not found: {p}")
    return p


def get_schema_file() -> Path:
    """Path of the JSON schema describing ``--json`` reports."""
    p = _bundled_data_dir() / SCHEMA_FILE
    if not p.exists():
        raise FileNotFoundError(f"Schema file not found: {p}")
    return p
