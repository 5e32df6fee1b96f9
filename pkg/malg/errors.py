#!/usr/bin/env python3
"""
malg — Exception hierarchy.

Checkers report failures as :class:`~malg.core.Verdict` values; exceptions are
reserved for inputs that cannot be checked at all (caps, mismatched signatures,
malformed files) and for validators, which either return the validated object or
raise a :class:`ValidationFailure` carrying the failing verdict.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from malg.core import Verdict


class MalgError(Exception):
    """Base class for all malg errors."""


class CapExceededError(MalgError):
    """An exhaustive operation would exceed its configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: size {size} exceeds cap {cap}")


class SignatureMismatchError(MalgError, ValueError):
    """Two structures that must share a signature do not."""


class StructureError(MalgError, ValueError):
    """A domain object was constructed with inconsistent data."""


class ContractViolationError(MalgError, ValueError):
    """A morphism handed to a construction does not satisfy its contract."""

    def __init__(self, message: str, verdict: Optional["Verdict"] = None):
        self.verdict = verdict
        super().__init__(message)


class UnboundVariableError(MalgError, KeyError):
    """A term mentions a variable the valuation does not assign."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unbound variable"


class StructureFileError(MalgError, ValueError):
    """Syntax or content error in a structure file, with position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        self.message = message
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{where}{message}")


class ValidationFailure(MalgError):
    """A validator rejected its input; ``verdict`` names the failed condition."""

    def __init__(self, verdict: "Verdict"):
        self.verdict = verdict
        super().__init__(verdict.describe())


class PosetAxiomError(ValidationFailure):
    """Reflexivity, antisymmetry or transitivity fails."""


class CablConditionError(ValidationFailure):
    """One of the complete/atomic/bottomless conditions fails."""


class AtomGenerationError(ValidationFailure):
    """An operation table is not generated by its values on atom tuples."""
