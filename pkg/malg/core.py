#!/usr/bin/env python3
"""
malg — Signatures, universes, subset values, terms and verdicts.

Elements of a universe are addressed by dense indices ``0..size-1`` with a label
table for display. Subsets are bit masks over those indices (bit ``i`` set means
element ``i`` is a member); :class:`SubsetValue` wraps a mask together with its
width for the public API, while the inner loops of the checkers work on plain
``int`` masks.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Mapping, Optional, Union

from malg.config import DEFAULT_CAPS, Caps
from malg.errors import CapExceededError, StructureError

logger = logging.getLogger(__name__)

_IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


# --- Bit masks ---

def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of *mask* in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    """Return the mask whose set bits are *indices*."""
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def popcount(mask: int) -> int:
    return bin(mask).count("1")


# --- Signatures ---

@dataclass(frozen=True)
class Symbol:
    """An operation symbol with its arity."""
    name: str
    arity: int


@dataclass(frozen=True)
class Signature:
    """An ordered list of operation symbols with unique names."""
    symbols: tuple[Symbol, ...] = ()
    _arities: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        arities: dict[str, int] = {}
        for sym in self.symbols:
            if not _IDENTIFIER.match(sym.name):
                raise StructureError(f"Invalid symbol name: {sym.name!r}")
            if sym.arity < 0:
                raise StructureError(f"Negative arity for symbol {sym.name!r}")
            if sym.name in arities:
                raise StructureError(f"Duplicate symbol name: {sym.name!r}")
            arities[sym.name] = sym.arity
        object.__setattr__(self, "_arities", arities)

    @classmethod
    def of(cls, *pairs: tuple[str, int]) -> "Signature":
        """Build a signature from ``(name, arity)`` pairs."""
        return cls(tuple(Symbol(name, arity) for name, arity in pairs))

    def arity(self, name: str) -> int:
        try:
            return self._arities[name]
        except KeyError:
            raise StructureError(f"Unknown symbol: {name!r}") from None

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(sym.name for sym in self.symbols)

    def __contains__(self, name: object) -> bool:
        return name in self._arities

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return ", ".join(f"{s.name}/{s.arity}" for s in self.symbols) or "(empty)"


# --- Universes ---

@dataclass(frozen=True)
class Universe:
    """A finite, non-empty, ordered set of labelled elements."""
    labels: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if not self.labels:
            raise StructureError("A universe must have at least one element")
        index: dict[str, int] = {}
        for i, label in enumerate(self.labels):
            if label in index:
                raise StructureError(f"Duplicate element label: {label!r}")
            index[label] = i
        object.__setattr__(self, "_index", index)

    @classmethod
    def of_size(cls, size: int) -> "Universe":
        """Universe labelled ``"0" .. str(size-1)``."""
        return cls(tuple(str(i) for i in range(size)))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise StructureError(f"Unknown element: {label!r}") from None

    def label(self, i: int) -> str:
        return self.labels[i]

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return self.size

    def format_mask(self, mask: int) -> str:
        """Render a subset mask as ``{a,b}`` using this universe's labels."""
        return "{" + ",".join(self.labels[i] for i in iter_bits(mask)) + "}"

    def format_tuple(self, args: tuple[int, ...]) -> str:
        return "(" + ",".join(self.labels[i] for i in args) + ")"


# --- Subset values ---

@dataclass(frozen=True)
class SubsetValue:
    """A subset of a universe as a fixed-width bit vector."""
    width: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.width < 0 or not 0 <= self.bits < (1 << self.width):
            raise StructureError(f"Bits {self.bits:#x} do not fit width {self.width}")

    @classmethod
    def from_indices(cls, width: int, indices: Iterable[int]) -> "SubsetValue":
        return cls(width, mask_of(indices))

    @classmethod
    def singleton(cls, width: int, i: int) -> "SubsetValue":
        return cls(width, 1 << i)

    def members(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.bits))

    def is_empty(self) -> bool:
        return self.bits == 0

    def _same_width(self, other: "SubsetValue") -> None:
        if other.width != self.width:
            raise StructureError(f"Subset widths differ: {self.width} != {other.width}")

    def union(self, other: "SubsetValue") -> "SubsetValue":
        self._same_width(other)
        return SubsetValue(self.width, self.bits | other.bits)

    def intersection(self, other: "SubsetValue") -> "SubsetValue":
        self._same_width(other)
        return SubsetValue(self.width, self.bits & other.bits)

    def complement(self) -> "SubsetValue":
        return SubsetValue(self.width, ((1 << self.width) - 1) & ~self.bits)

    def issubset(self, other: "SubsetValue") -> bool:
        self._same_width(other)
        return self.bits & ~other.bits == 0

    __or__ = union
    __and__ = intersection

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return popcount(self.bits)

    def __contains__(self, i: object) -> bool:
        return isinstance(i, int) and 0 <= i < self.width and bool(self.bits >> i & 1)

    def to_bitstring(self) -> str:
        """Bits in index order, element 0 first: ``{1}`` over two elements is ``01``."""
        return "".join("1" if self.bits >> i & 1 else "0" for i in range(self.width))


class SubsetKit:
    """Subset algebra of one universe: lattice operations plus enumeration."""

    def __init__(self, universe: Universe, caps: Optional[Caps] = None):
        self.universe = universe
        self.caps = caps or DEFAULT_CAPS

    @property
    def width(self) -> int:
        return self.universe.size

    def empty(self) -> SubsetValue:
        return SubsetValue(self.width, 0)

    def full(self) -> SubsetValue:
        return SubsetValue(self.width, self.universe.full_mask)

    def singleton(self, element: Union[int, str]) -> SubsetValue:
        i = self.universe.index(element) if isinstance(element, str) else element
        if not 0 <= i < self.width:
            raise StructureError(f"Element index {i} outside universe of size {self.width}")
        return SubsetValue.singleton(self.width, i)

    def from_labels(self, labels: Iterable[str]) -> SubsetValue:
        return SubsetValue.from_indices(self.width, (self.universe.index(x) for x in labels))

    def union(self, x: SubsetValue, y: SubsetValue) -> SubsetValue:
        return x.union(y)

    def intersection(self, x: SubsetValue, y: SubsetValue) -> SubsetValue:
        return x.intersection(y)

    def complement(self, x: SubsetValue) -> SubsetValue:
        return x.complement()

    def includes(self, x: SubsetValue, y: SubsetValue) -> bool:
        """True iff x ⊆ y."""
        return x.issubset(y)

    def nonempty_subsets(self) -> list[SubsetValue]:
        """All ``2^n - 1`` non-empty subsets, ordered by increasing mask."""
        if self.width > self.caps.subset_cap:
            raise CapExceededError("subset enumeration (universe size)", self.width, self.caps.subset_cap)
        return [SubsetValue(self.width, m) for m in range(1, 1 << self.width)]


def subset_ops(universe: Universe, caps: Optional[Caps] = None) -> SubsetKit:
    """Return the subset algebra kit for *universe*."""
    return SubsetKit(universe, caps)


def tuples(universe: Union[Universe, int], n: int, caps: Optional[Caps] = None) -> Iterator[tuple[int, ...]]:
    """
    Yield all n-tuples of element indices in lexicographic order.

    ``n = 0`` yields exactly one empty tuple.

    Raises:
        CapExceededError: If ``size ** n`` exceeds the tuple cap.
    """
    size = universe.size if isinstance(universe, Universe) else universe
    caps = caps or DEFAULT_CAPS
    count = size ** n
    if count > caps.tuple_cap:
        raise CapExceededError(f"{n}-tuples over {size} elements", count, caps.tuple_cap)
    return itertools.product(range(size), repeat=n)


# --- Verdicts ---

@dataclass(frozen=True)
class Verdict:
    """
    Outcome of one check.

    ``witness`` is a JSON-ready mapping naming the earliest counterexample in
    canonical order; ``exhaustive`` is False when part of the check was sampled.
    """
    check: str
    ok: bool
    clause: Optional[str] = None
    witness: Optional[dict[str, Any]] = None
    detail: str = ""
    checked: int = 0
    exhaustive: bool = True

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls, check: str, checked: int = 0, exhaustive: bool = True, detail: str = "") -> "Verdict":
        return cls(check=check, ok=True, checked=checked, exhaustive=exhaustive, detail=detail)

    @classmethod
    def failed(
        cls,
        check: str,
        clause: str,
        witness: Optional[dict[str, Any]] = None,
        detail: str = "",
        checked: int = 0,
        exhaustive: bool = True,
    ) -> "Verdict":
        return cls(check=check, ok=False, clause=clause, witness=witness,
                   detail=detail, checked=checked, exhaustive=exhaustive)

    def describe(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        text = f"{self.check}: {status}"
        if self.clause:
            text += f" [{self.clause}]"
        if self.detail:
            text += f" - {self.detail}"
        if not self.exhaustive:
            text += " (sampled)"
        return text

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "status": "pass" if self.ok else "fail",
            "clause": self.clause,
            "witness": self.witness,
            "detail": self.detail,
            "checked": self.checked,
            "exhaustive": self.exhaustive,
        }


def all_passed(verdicts: Iterable[Verdict]) -> bool:
    return all(v.ok for v in verdicts)


# --- Terms ---

@dataclass(frozen=True)
class Var:
    """A variable, addressed by index; ``name`` is for display only."""
    index: int
    name: str = ""

    def __str__(self) -> str:
        return self.name or f"x{self.index}"


@dataclass(frozen=True)
class App:
    """A symbol applied to subterms; build through :func:`apply_symbol`."""
    symbol: str
    args: tuple["Term", ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.symbol
        return f"{self.symbol}({','.join(str(a) for a in self.args)})"


Term = Union[Var, App]
Valuation = Mapping[int, int]


def apply_symbol(signature: Signature, name: str, *args: Term) -> App:
    """Apply *name* to *args*, checking the arity against *signature*."""
    arity = signature.arity(name)
    if len(args) != arity:
        raise StructureError(f"Symbol {name!r} has arity {arity}, got {len(args)} arguments")
    return App(name, tuple(args))


def term_variables(term: Term) -> frozenset[int]:
    if isinstance(term, Var):
        return frozenset((term.index,))
    found: set[int] = set()
    for arg in term.args:
        found |= term_variables(arg)
    return frozenset(found)


def term_depth(term: Term) -> int:
    """Variables and constants have depth 0."""
    if isinstance(term, Var) or not term.args:
        return 0
    return 1 + max(term_depth(a) for a in term.args)


_TERM_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_']*)|(.))")


def parse_term(text: str, signature: Signature) -> tuple[Term, tuple[str, ...]]:
    """
    Parse ``s(f(x,y),c)``-style text into a term.

    Identifiers that are symbols of *signature* become applications; any other
    identifier is a variable, numbered by first occurrence.

    Returns:
        The term and the variable names, indexed by variable index.
    """
    tokens = [(m.group(1), m.group(2)) for m in _TERM_TOKEN.finditer(text) if m.group(0).strip()]
    names: list[str] = []
    pos = 0

    def expect(ch: str) -> None:
        nonlocal pos
        if pos >= len(tokens) or tokens[pos][1] != ch:
            raise StructureError(f"Expected {ch!r} in term {text!r}")
        pos += 1

    def term() -> Term:
        nonlocal pos
        if pos >= len(tokens) or tokens[pos][0] is None:
            raise StructureError(f"Expected identifier in term {text!r}")
        name = tokens[pos][0]
        pos += 1
        has_parens = pos < len(tokens) and tokens[pos][1] == "("
        if name not in signature:
            if has_parens:
                raise StructureError(f"Unknown symbol {name!r} in term {text!r}")
            if name not in names:
                names.append(name)
            return Var(names.index(name), name)
        args: list[Term] = []
        if has_parens:
            pos += 1
            if pos < len(tokens) and tokens[pos][1] == ")":
                pos += 1
            else:
                args.append(term())
                while pos < len(tokens) and tokens[pos][1] == ",":
                    pos += 1
                    args.append(term())
                expect(")")
        return apply_symbol(signature, name, *args)

    result = term()
    if pos != len(tokens):
        raise StructureError(f"Trailing input in term {text!r}")
    return result, tuple(names)
