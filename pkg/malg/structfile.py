#!/usr/bin/env python3
"""
malg — Structure files.

A line-oriented UTF-8 text format; ``#`` starts a comment. Every file opens with
a header::

    format 1
    kind multialgebra
    elements 0 1
    signature s/1

followed by body lines that depend on the kind:

- ``multialgebra`` / ``partial``: ``s(0) = {1}`` (nullary: ``c = {0}``)
- ``poset``: ``a <= b`` (the loader takes the reflexive-transitive closure)
- ``ordered-algebra``: order lines plus ``s(a) = b`` with element values
- ``morphism``: ``a -> b``, or ``a -> {b,c}`` for set-valued maps
- ``term``: ``term s(f(x,y))``

Labels are runs of characters other than whitespace and ``,()={}#``, or
brace-balanced groups such as ``{0,1}`` so that carriers of ``ℙ`` can be
written back. :func:`dumps` prints the canonical form: header, then entries
in signature order and lexicographic tuple order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from malg.config import Caps
from malg.core import Signature, Symbol, Term, Universe, parse_term
from malg.errors import MalgError, StructureError, StructureFileError
from malg.multialg import Morphism, MultiAlgebra, SetValuedAlgebra
from malg.ordalg import (
    FinitePoset,
    OrderedAlgebra,
    transitive_closure,
    validate_cabl,
    validate_ordered_algebra,
    validate_poset,
)
from malg.variants import PartialMultiAlgebra, SetValuedMorphism

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
KINDS = ("multialgebra", "partial", "poset", "ordered-algebra", "morphism", "term")
_STOP = set(" \t,()={}#")


# --- Documents ---

@dataclass
class MapSpec:
    """A morphism file before it is bound to source and target universes."""
    pairs: dict[str, tuple[str, ...]] = field(default_factory=dict)
    set_valued: bool = False

    def bind(self, source: Universe, target: Universe) -> Union[Morphism, SetValuedMorphism]:
        if self.set_valued:
            return SetValuedMorphism.from_labels(source, target, self.pairs)
        return Morphism.from_labels(source, target, {k: v[0] for k, v in self.pairs.items()})


@dataclass
class TermSpec:
    signature: Signature
    text: str
    term: Term
    variables: tuple[str, ...]


@dataclass
class StructureFile:
    """Parsed header and body of a structure file, before domain validation."""
    version: int = FORMAT_VERSION
    kind: str = ""
    elements: tuple[str, ...] = ()
    signature: Signature = field(default_factory=Signature)
    entries: dict[str, dict[tuple[str, ...], tuple[str, ...]]] = field(default_factory=dict)
    order: list[tuple[str, str]] = field(default_factory=list)
    maps: MapSpec = field(default_factory=MapSpec)
    term_text: Optional[str] = None


# --- Scanning ---

class _Line:
    """Cursor over one line; columns are 1-based in errors."""

    def __init__(self, text: str, number: int):
        self.text = text
        self.number = number
        self.pos = 0

    def error(self, message: str, pos: Optional[int] = None) -> StructureFileError:
        return StructureFileError(message, self.number, (self.pos if pos is None else pos) + 1)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self, literal: str) -> bool:
        self.skip_ws()
        return self.text.startswith(literal, self.pos)

    def expect(self, literal: str) -> None:
        if not self.peek(literal):
            raise self.error(f"expected {literal!r}")
        self.pos += len(literal)

    def label(self) -> str:
        self.skip_ws()
        start = self.pos
        if self.peek("{"):
            depth = 0
            while self.pos < len(self.text):
                ch = self.text[self.pos]
                depth += ch == "{"
                depth -= ch == "}"
                self.pos += 1
                if depth == 0:
                    return self.text[start:self.pos]
            raise self.error("unbalanced braces", start)
        while self.pos < len(self.text) and self.text[self.pos] not in _STOP \
                and not self.text.startswith("<=", self.pos) and not self.text.startswith("->", self.pos):
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a label")
        return self.text[start:self.pos]

    def label_set(self) -> tuple[str, ...]:
        """``{a,b}``; members may themselves be braced labels."""
        self.expect("{")
        members: list[str] = []
        if self.peek("}"):
            self.pos += 1
            return ()
        while True:
            members.append(self.label())
            if self.peek(","):
                self.pos += 1
                continue
            self.expect("}")
            return tuple(members)

    def args(self) -> tuple[str, ...]:
        if not self.peek("("):
            return ()
        self.pos += 1
        if self.peek(")"):
            self.pos += 1
            return ()
        out = [self.label()]
        while self.peek(","):
            self.pos += 1
            out.append(self.label())
        self.expect(")")
        return tuple(out)


def _strip_comment(raw: str) -> str:
    depth = 0
    for i, ch in enumerate(raw):
        depth += ch == "{"
        depth -= ch == "}"
        if ch == "#" and depth == 0:
            return raw[:i]
    return raw


def _parse_signature(line: _Line) -> Signature:
    symbols = []
    while not line.at_end():
        start = line.pos
        word = line.label()
        name, sep, arity = word.partition("/")
        if not sep or not arity.isdigit():
            raise line.error(f"expected name/arity, got {word!r}", start)
        symbols.append(Symbol(name, int(arity)))
    try:
        return Signature(tuple(symbols))
    except StructureError as exc:
        raise line.error(str(exc)) from None


# --- Parsing ---

def parse_text(text: str) -> StructureFile:
    """
    Parse structure-file text into a :class:`StructureFile`.

    Raises:
        StructureFileError: On syntax errors, unknown elements or symbols, arity
            mismatches, duplicate entries and empty values where forbidden.
    """
    doc = StructureFile()
    known: set[str] = set()
    seen_header: set[str] = set()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _Line(_strip_comment(raw).rstrip(), number)
        if line.at_end():
            continue
        start = line.pos
        keyword = line.text[start:].split(None, 1)[0]

        if keyword in ("format", "kind", "elements", "signature"):
            if keyword in seen_header:
                raise line.error(f"duplicate {keyword!r} line", start)
            seen_header.add(keyword)
            line.pos = start + len(keyword)
            if keyword == "format":
                value = line.label()
                if value != str(FORMAT_VERSION):
                    raise line.error(f"unsupported format version {value!r}")
                doc.version = int(value)
            elif keyword == "kind":
                value = line.label()
                if value not in KINDS:
                    raise line.error(f"unknown kind {value!r}; expected one of: {', '.join(KINDS)}")
                doc.kind = value
            elif keyword == "elements":
                labels = []
                while not line.at_end():
                    pos = line.pos
                    label = line.label()
                    if label in labels:
                        raise line.error(f"duplicate element {label!r}", pos)
                    labels.append(label)
                doc.elements = tuple(labels)
                known = set(labels)
            else:
                doc.signature = _parse_signature(line)
            if not line.at_end():
                raise line.error("unexpected trailing input")
            continue

        if "format" not in seen_header or "kind" not in seen_header:
            raise line.error("body line before the 'format' and 'kind' header", start)

        if keyword == "term" and doc.kind == "term":
            doc.term_text = line.text[start + len("term"):].strip()
            continue

        if doc.kind == "morphism":
            source = line.label()
            line.expect("->")
            if line.peek("{"):
                value = line.label_set()
                doc.maps.set_valued = True
                if not value:
                    raise line.error("empty image forbidden")
            else:
                value = (line.label(),)
            if source in doc.maps.pairs:
                raise line.error(f"duplicate entry for {source!r}", start)
            doc.maps.pairs[source] = value
        elif line.text.find("<=", start) >= 0 and "(" not in line.text[start:line.text.find("<=", start)]:
            if doc.kind not in ("poset", "ordered-algebra"):
                raise line.error(f"order lines are not allowed in kind {doc.kind!r}", start)
            lower = _known(line, line.label(), known)
            line.expect("<=")
            upper = _known(line, line.label(), known)
            doc.order.append((lower, upper))
        else:
            _parse_entry(line, doc, known)
        if not line.at_end():
            raise line.error("unexpected trailing input")

    if "format" not in seen_header:
        raise StructureFileError("missing 'format' line")
    if "kind" not in seen_header:
        raise StructureFileError("missing 'kind' line")
    if doc.kind not in ("morphism", "term") and not doc.elements:
        raise StructureFileError("missing 'elements' line")
    if doc.kind == "term" and doc.term_text is None:
        raise StructureFileError("missing 'term' line")
    return doc


def _known(line: _Line, label: str, known: set[str]) -> str:
    if label not in known:
        raise line.error(f"unknown element {label!r}", line.pos - len(label))
    return label


def _parse_entry(line: _Line, doc: StructureFile, known: set[str]) -> None:
    start = line.pos
    name = line.label()
    if name not in doc.signature:
        raise line.error(f"unknown symbol {name!r}", start)
    args = line.args()
    arity = doc.signature.arity(name)
    if len(args) != arity:
        raise line.error(f"arity mismatch: {name} takes {arity} arguments, got {len(args)}", start)
    for arg in args:
        if arg not in known:
            raise line.error(f"unknown element {arg!r}", start)
    line.expect("=")
    if doc.kind == "ordered-algebra":
        value: tuple[str, ...] = (_known(line, line.label(), known),)
    elif doc.kind in ("multialgebra", "partial"):
        value_pos = line.pos
        value = line.label_set()
        for member in value:
            if member not in known:
                raise line.error(f"unknown element {member!r}", value_pos)
        if not value and doc.kind == "multialgebra":
            raise line.error(f"empty value forbidden: {name}({','.join(args)})", value_pos)
    else:
        raise line.error(f"operation lines are not allowed in kind {doc.kind!r}", start)
    table = doc.entries.setdefault(name, {})
    if args in table:
        raise line.error(f"duplicate entry for {name}({','.join(args)})", start)
    table[args] = value


# --- Building domain objects ---

Loaded = Union[MultiAlgebra, PartialMultiAlgebra, FinitePoset, OrderedAlgebra, MapSpec, TermSpec]


def build(doc: StructureFile, caps: Optional[Caps] = None) -> Loaded:
    """
    Turn a parsed document into its domain object.

    Posets come back validated as partial orders only; ordered algebras are run
    through the CABL and atom-generation validators, which raise
    :class:`~malg.errors.ValidationFailure` subclasses.
    """
    if doc.kind == "morphism":
        return doc.maps
    if doc.kind == "term":
        assert doc.term_text is not None
        try:
            term, names = parse_term(doc.term_text, doc.signature)
        except StructureError as exc:
            raise StructureFileError(str(exc)) from None
        return TermSpec(doc.signature, doc.term_text, term, names)

    universe = Universe(doc.elements)
    if doc.kind in ("multialgebra", "partial"):
        cls = MultiAlgebra if doc.kind == "multialgebra" else PartialMultiAlgebra
        _require_total(doc, universe)
        values = {name: dict(table) for name, table in doc.entries.items()}
        return cls.from_labels(doc.signature, universe, values)

    poset = _order(doc, universe)
    if doc.kind == "poset":
        return poset
    cert = validate_cabl(poset, caps)
    _require_total(doc, universe)
    tables = {
        name: {tuple(universe.index(a) for a in args): universe.index(value[0]) for args, value in table.items()}
        for name, table in doc.entries.items()
    }
    return validate_ordered_algebra(poset, cert, doc.signature, tables, caps)


def _order(doc: StructureFile, universe: Universe) -> FinitePoset:
    n = universe.size
    rel = np.eye(n, dtype=bool)
    for lower, upper in doc.order:
        rel[universe.index(lower), universe.index(upper)] = True
    return validate_poset(transitive_closure(rel), universe.labels)


def _require_total(doc: StructureFile, universe: Universe) -> None:
    for sym in doc.signature:
        table = doc.entries.get(sym.name, {})
        expected = universe.size ** sym.arity
        if len(table) != expected:
            raise StructureFileError(
                f"table for {sym.name!r} has {len(table)} of {expected} entries")


def loads(text: str, caps: Optional[Caps] = None) -> Loaded:
    return build(parse_text(text), caps)


def load(path: Union[str, Path], caps: Optional[Caps] = None) -> Loaded:
    """
    Read and build a structure file.

    Raises:
        StructureFileError: If the file cannot be read or parsed.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise StructureFileError(f"cannot read {path}: {exc}") from None
    logger.debug("loading structure file %s", path)
    try:
        return loads(text, caps)
    except StructureFileError as exc:
        raise StructureFileError(f"{path}: {exc.message}", exc.line, exc.column) from None
    except StructureError as exc:
        raise StructureFileError(f"{path}: {exc}") from None


# --- Printing ---

def _header(kind: str, universe: Optional[Universe], signature: Optional[Signature]) -> list[str]:
    lines = [f"format {FORMAT_VERSION}", f"kind {kind}"]
    if universe is not None:
        lines.append("elements " + " ".join(universe.labels))
    if signature is not None:
        lines.append(("signature " + " ".join(f"{s.name}/{s.arity}" for s in signature)).rstrip())
    return lines


def _call(name: str, labels: list[str]) -> str:
    return f"{name}({','.join(labels)})" if labels else name


def _order_lines(p: FinitePoset) -> list[str]:
    lab = p.carrier.labels
    return [f"{lab[a]} <= {lab[b]}" for a in range(p.size) for b in range(p.size)
            if a != b and p.le(a, b)]


def dumps(obj: Union[SetValuedAlgebra, FinitePoset, OrderedAlgebra, Morphism, SetValuedMorphism]) -> str:
    """Canonical text of a domain object."""
    if isinstance(obj, SetValuedAlgebra):
        u = obj.universe
        lines = _header(obj.kind, u, obj.signature)
        for name, args, mask in obj.entries():
            lines.append(f"{_call(name, [u.label(a) for a in args])} = {u.format_mask(mask)}")
    elif isinstance(obj, OrderedAlgebra):
        u = obj.carrier
        lines = _header("ordered-algebra", u, obj.signature) + _order_lines(obj.poset)
        for name, args, value in obj.entries():
            lines.append(f"{_call(name, [u.label(a) for a in args])} = {u.label(value)}")
    elif isinstance(obj, FinitePoset):
        lines = _header("poset", obj.carrier, None) + _order_lines(obj)
    elif isinstance(obj, Morphism):
        lines = _header("morphism", None, None)
        lines += [f"{obj.source.label(i)} -> {obj.target.label(t)}" for i, t in enumerate(obj.mapping)]
    elif isinstance(obj, SetValuedMorphism):
        lines = _header("morphism", None, None)
        lines += [f"{obj.source.label(i)} -> {obj.target.format_mask(m)}" for i, m in enumerate(obj.images)]
    else:
        raise MalgError(f"Cannot print objects of type {type(obj).__name__}")
    return "\n".join(lines) + "\n"


def dump(obj, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")
