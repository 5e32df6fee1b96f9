#!/usr/bin/env python3
"""
malg — Σ-multialgebras, their homomorphisms and isomorphism search.

A multialgebra interprets every n-ary symbol as a total table from n-tuples of
element indices to non-empty subsets (bit masks) of the universe. All checkers
walk symbols in signature order and tuples in lexicographic order and report
the first failing position, so verdicts are reproducible.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, ClassVar, Iterable, Iterator, Literal, Mapping, Optional

from malg.config import DEFAULT_CAPS, Caps
from malg.core import (
    App,
    Signature,
    SubsetValue,
    Term,
    Universe,
    Valuation,
    Var,
    Verdict,
    iter_bits,
    mask_of,
    popcount,
    term_variables,
    tuples,
)
from malg.errors import (
    CapExceededError,
    SignatureMismatchError,
    StructureError,
    UnboundVariableError,
)

logger = logging.getLogger(__name__)

Tables = Mapping[str, Mapping[tuple[int, ...], int]]
HomMode = Literal["hom", "full", "iso"]


# --- Structures ---

@dataclass(frozen=True)
class SetValuedAlgebra:
    """
    Common carrier for multialgebras and partial multialgebras.

    ``tables[name][args]`` is the bit mask of ``name(args)``. Subclasses decide
    whether the empty set is an admissible value.
    """
    signature: Signature
    universe: Universe
    tables: Tables

    allows_empty: ClassVar[bool] = False
    kind: ClassVar[str] = "set-valued algebra"

    def __post_init__(self) -> None:
        names = set(self.signature.names)
        extra = set(self.tables) - names
        if extra:
            raise StructureError(f"Tables for symbols outside the signature: {sorted(extra)}")
        size = self.universe.size
        full = self.universe.full_mask
        for sym in self.signature:
            table = self.tables.get(sym.name)
            if table is None:
                raise StructureError(f"Missing table for symbol {sym.name!r}")
            expected = size ** sym.arity
            if len(table) != expected:
                raise StructureError(
                    f"Table for {sym.name!r} has {len(table)} entries, expected {expected}"
                )
            for args, value in table.items():
                if len(args) != sym.arity or any(not 0 <= a < size for a in args):
                    raise StructureError(f"Bad argument tuple {args!r} for {sym.name!r}")
                if value & ~full or value < 0:
                    raise StructureError(f"Value of {sym.name}{args!r} leaves the universe")
                if value == 0 and not self.allows_empty:
                    raise StructureError(
                        f"empty value forbidden: {sym.name}{self.universe.format_tuple(args)}"
                    )

    @classmethod
    def from_function(
        cls,
        signature: Signature,
        universe: Universe,
        fn: Callable[[str, tuple[int, ...]], Iterable[int]],
        caps: Optional[Caps] = None,
    ):
        """Tabulate ``fn(symbol, args) -> element indices`` over all tuples."""
        tables = {
            sym.name: {args: mask_of(fn(sym.name, args)) for args in tuples(universe, sym.arity, caps)}
            for sym in signature
        }
        return cls(signature, universe, tables)

    @classmethod
    def from_labels(
        cls,
        signature: Signature,
        universe: Universe,
        values: Mapping[str, Mapping[tuple[str, ...], Iterable[str]]],
    ):
        """Build from label-level tables: ``values[sym][(a, b)] = {"x", "y"}``."""
        tables = {}
        for name, entries in values.items():
            tables[name] = {
                tuple(universe.index(a) for a in args): mask_of(universe.index(x) for x in result)
                for args, result in entries.items()
            }
        return cls(signature, universe, tables)

    @property
    def size(self) -> int:
        return self.universe.size

    def mask(self, symbol: str, args: tuple[int, ...]) -> int:
        return self.tables[symbol][args]

    def value(self, symbol: str, args: tuple[int, ...]) -> SubsetValue:
        return SubsetValue(self.size, self.tables[symbol][args])

    def entries(self) -> Iterator[tuple[str, tuple[int, ...], int]]:
        """All ``(symbol, args, mask)`` in canonical order."""
        for sym in self.signature:
            table = self.tables[sym.name]
            for args in sorted(table):
                yield sym.name, args, table[args]


@dataclass(frozen=True)
class MultiAlgebra(SetValuedAlgebra):
    """A Σ-multialgebra: every operation value is a non-empty subset."""
    kind: ClassVar[str] = "multialgebra"


@dataclass(frozen=True)
class Morphism:
    """A total map between universes, stored as target indices by source index."""
    source: Universe
    target: Universe
    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.mapping) != self.source.size:
            raise StructureError(
                f"Map covers {len(self.mapping)} elements, source has {self.source.size}"
            )
        for t in self.mapping:
            if not 0 <= t < self.target.size:
                raise StructureError(f"Map value {t} outside target of size {self.target.size}")

    @classmethod
    def identity(cls, universe: Universe) -> "Morphism":
        return cls(universe, universe, tuple(range(universe.size)))

    @classmethod
    def from_labels(cls, source: Universe, target: Universe, pairs: Mapping[str, str]) -> "Morphism":
        missing = [x for x in source.labels if x not in pairs]
        if missing:
            raise StructureError(f"Map is not total; unmapped: {', '.join(missing)}")
        return cls(source, target, tuple(target.index(pairs[x]) for x in source.labels))

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def image(self, mask: int) -> int:
        """Image of a subset mask."""
        out = 0
        for i in iter_bits(mask):
            out |= 1 << self.mapping[i]
        return out

    def compose(self, inner: "Morphism") -> "Morphism":
        """Return ``self ∘ inner``."""
        if inner.target != self.source:
            raise StructureError("Cannot compose: universes do not match")
        return Morphism(inner.source, self.target, tuple(self.mapping[i] for i in inner.mapping))

    def is_injective(self) -> bool:
        return len(set(self.mapping)) == len(self.mapping)

    def is_bijective(self) -> bool:
        return self.is_injective() and self.source.size == self.target.size

    def inverse(self) -> "Morphism":
        if not self.is_bijective():
            raise StructureError("Only bijections have inverses")
        inv = [0] * self.target.size
        for i, t in enumerate(self.mapping):
            inv[t] = i
        return Morphism(self.target, self.source, tuple(inv))

    def as_labels(self) -> dict[str, str]:
        return {self.source.label(i): self.target.label(t) for i, t in enumerate(self.mapping)}


# --- Homomorphism checks ---

def _require_compatible(h: Morphism, src: SetValuedAlgebra, dst: SetValuedAlgebra) -> None:
    if src.signature != dst.signature:
        raise SignatureMismatchError(f"Signatures differ: [{src.signature}] vs [{dst.signature}]")
    if h.source != src.universe or h.target != dst.universe:
        raise StructureError("Morphism universes do not match the structures")


def _witness(src: SetValuedAlgebra, dst: SetValuedAlgebra, symbol: str,
             args: tuple[int, ...], image: int, target: int) -> dict[str, Any]:
    return {
        "symbol": symbol,
        "args": [src.universe.label(a) for a in args],
        "image": dst.universe.format_mask(image),
        "target": dst.universe.format_mask(target),
    }


def _check_images(h: Morphism, src: SetValuedAlgebra, dst: SetValuedAlgebra,
                  check: str, exact: bool) -> Verdict:
    _require_compatible(h, src, dst)
    mapping = h.mapping
    checked = 0
    for symbol, args, value in src.entries():
        image = h.image(value)
        target = dst.tables[symbol][tuple(mapping[a] for a in args)]
        checked += 1
        bad = image != target if exact else bool(image & ~target)
        if bad:
            relation = "image != target" if exact else "image not included in target"
            return Verdict.failed(check, relation, _witness(src, dst, symbol, args, image, target),
                                  detail=f"{symbol}{src.universe.format_tuple(args)}", checked=checked)
    return Verdict.passed(check, checked=checked)


def check_inclusion(h: Morphism, src: SetValuedAlgebra, dst: SetValuedAlgebra,
                    check: str = "hom") -> Verdict:
    """
    Check ``{h(a) : a ∈ σ(a⃗)} ⊆ σ(h(a⃗))`` for every symbol and tuple.

    Shared by multialgebra and partial-multialgebra homomorphisms; an empty
    source value passes at its tuple.
    """
    return _check_images(h, src, dst, check, exact=False)


def check_hom(h: Morphism, src: MultiAlgebra, dst: MultiAlgebra) -> Verdict:
    """Multialgebra homomorphism: images of results are included in target results."""
    return check_inclusion(h, src, dst, "hom")


def check_full_hom(h: Morphism, src: MultiAlgebra, dst: MultiAlgebra) -> Verdict:
    """Full homomorphism: images of results equal target results."""
    return _check_images(h, src, dst, "full hom", exact=True)


def check_iso(h: Morphism, src: MultiAlgebra, dst: MultiAlgebra) -> Verdict:
    """Isomorphism: a bijective full homomorphism."""
    if not h.is_bijective():
        _require_compatible(h, src, dst)
        return Verdict.failed("iso", "not bijective", {"map": h.as_labels()})
    verdict = check_full_hom(h, src, dst)
    if not verdict.ok:
        return Verdict.failed("iso", verdict.clause or "full", verdict.witness, verdict.detail, verdict.checked)
    return Verdict.passed("iso", checked=verdict.checked)


_CHECKERS: dict[str, Callable[[Morphism, MultiAlgebra, MultiAlgebra], Verdict]] = {
    "hom": check_hom,
    "full": check_full_hom,
    "iso": check_iso,
}


def all_maps(source: Universe, target: Universe, caps: Optional[Caps] = None) -> Iterator[Morphism]:
    """All ``|target| ** |source|`` maps in lexicographic order."""
    caps = caps or DEFAULT_CAPS
    count = target.size ** source.size
    if count > caps.map_cap:
        raise CapExceededError("map enumeration", count, caps.map_cap)
    for mapping in itertools.product(range(target.size), repeat=source.size):
        yield Morphism(source, target, mapping)


def all_bijections(source: Universe, target: Universe, caps: Optional[Caps] = None) -> Iterator[Morphism]:
    """All bijections in lexicographic order (none when sizes differ)."""
    caps = caps or DEFAULT_CAPS
    if source.size != target.size:
        return
    count = math.factorial(source.size)
    if count > caps.map_cap:
        raise CapExceededError("bijection enumeration", count, caps.map_cap)
    for mapping in itertools.permutations(range(target.size)):
        yield Morphism(source, target, mapping)


def enumerate_homs(src: MultiAlgebra, dst: MultiAlgebra, mode: HomMode = "hom",
                   caps: Optional[Caps] = None) -> list[Morphism]:
    """
    All maps ``src → dst`` satisfying the selected contract, in lexicographic order.

    Raises:
        CapExceededError: If ``|dst| ** |src|`` exceeds the map cap.
    """
    if mode not in _CHECKERS:
        raise ValueError(f"Invalid mode: '{mode}'. Must be one of: hom, full, iso")
    if src.signature != dst.signature:
        raise SignatureMismatchError(f"Signatures differ: [{src.signature}] vs [{dst.signature}]")
    checker = _CHECKERS[mode]
    caps = caps or DEFAULT_CAPS
    candidates = all_bijections(src.universe, dst.universe, caps) if mode == "iso" \
        else all_maps(src.universe, dst.universe, caps)
    found = [h for h in candidates if checker(h, src, dst).ok]
    logger.debug("enumerate_homs(%s): %d morphisms", mode, len(found))
    return found


# --- Isomorphism search ---

def _profiles(m: MultiAlgebra) -> list[tuple]:
    """
    Per-element invariant preserved by isomorphisms.

    For every symbol and argument position: the sorted result sizes of the
    tuples holding the element there; plus how many results contain it.
    """
    profile: list[list] = [[] for _ in range(m.size)]
    for sym in m.signature:
        table = m.tables[sym.name]
        for pos in range(sym.arity):
            sizes: list[list[int]] = [[] for _ in range(m.size)]
            for args, value in table.items():
                sizes[args[pos]].append(popcount(value))
            for x in range(m.size):
                profile[x].append(tuple(sorted(sizes[x])))
        hits = [0] * m.size
        for value in table.values():
            for x in iter_bits(value):
                hits[x] += 1
        for x in range(m.size):
            profile[x].append(hits[x])
    return [tuple(p) for p in profile]


def is_isomorphic(a: MultiAlgebra, b: MultiAlgebra,
                  caps: Optional[Caps] = None) -> tuple[bool, Optional[Morphism]]:
    """
    Search for an isomorphism ``a → b``.

    Backtracking over bijections, restricted to elements with equal profiles.

    Returns:
        ``(True, witness)`` or ``(False, None)``.
    """
    caps = caps or DEFAULT_CAPS
    if a.signature != b.signature:
        raise SignatureMismatchError(f"Signatures differ: [{a.signature}] vs [{b.signature}]")
    if a.size != b.size:
        return False, None
    count = math.factorial(a.size)
    if count > caps.map_cap:
        raise CapExceededError("isomorphism search", count, caps.map_cap)

    pa, pb = _profiles(a), _profiles(b)
    if sorted(pa) != sorted(pb):
        return False, None
    candidates = [[y for y in range(b.size) if pb[y] == pa[x]] for x in range(a.size)]
    assignment: list[int] = []
    used = [False] * b.size

    def extend(x: int) -> Optional[Morphism]:
        if x == a.size:
            h = Morphism(a.universe, b.universe, tuple(assignment))
            return h if check_full_hom(h, a, b).ok else None
        for y in candidates[x]:
            if used[y]:
                continue
            used[y] = True
            assignment.append(y)
            found = extend(x + 1)
            if found is not None:
                return found
            assignment.pop()
            used[y] = False
        return None

    witness = extend(0)
    return witness is not None, witness


# --- Non-deterministic term evaluation ---

def accumulate(table: Mapping[tuple[int, ...], int], arg_masks: tuple[int, ...]) -> int:
    """Union of ``table[args]`` over every choice of ``args[i] ∈ arg_masks[i]``."""
    out = 0
    for args in itertools.product(*(tuple(iter_bits(m)) for m in arg_masks)):
        out |= table[args]
    return out


def check_valuation(term: Term, valuation: Valuation, size: int) -> None:
    """Reject valuations that miss a variable of *term* or leave the universe."""
    for var in sorted(term_variables(term)):
        if var not in valuation:
            raise UnboundVariableError(f"Variable x{var} is not bound by the valuation")
        if not 0 <= valuation[var] < size:
            raise StructureError(f"Variable x{var} is bound outside the universe")


def check_term_symbols(term: Term, signature: Signature) -> None:
    """Reject terms using a symbol the signature lacks or with the wrong arity."""
    if isinstance(term, Var):
        return
    if term.symbol not in signature:
        raise StructureError(f"Term uses symbol {term.symbol!r} outside the signature [{signature}]")
    if signature.arity(term.symbol) != len(term.args):
        raise StructureError(
            f"Symbol {term.symbol!r} has arity {signature.arity(term.symbol)}, applied to {len(term.args)}")
    for arg in term.args:
        check_term_symbols(arg, signature)


def eval_term_nd(m: MultiAlgebra, term: Term, valuation: Valuation) -> SubsetValue:
    """
    All possible outcomes of *term* under non-deterministic evaluation.

    Variables evaluate to singletons; ``σ(t1..tn)`` to the union of ``σ`` over
    every choice of outcomes of the subterms.
    """
    check_term_symbols(term, m.signature)
    check_valuation(term, valuation, m.size)

    def ev(t: Term) -> int:
        if isinstance(t, Var):
            return 1 << valuation[t.index]
        assert isinstance(t, App)
        return accumulate(m.tables[t.symbol], tuple(ev(arg) for arg in t.args))

    return SubsetValue(m.size, ev(term))
