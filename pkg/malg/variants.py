#!/usr/bin/env python3
"""
malg — Partial multialgebras, MM-homomorphisms and the empty signature.

Partial multialgebras may return the empty set; their ``ℙ`` keeps the empty
subset as a bottom and lands in complete atomic Boolean algebras with bottom.
MM-homomorphisms send elements to non-empty subsets. With no symbols at all,
ordered algebras are bare powersets and their homomorphisms are the
continuous atom-preserving maps.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Any, ClassVar, Mapping, Optional, Sequence

from malg.config import DEFAULT_CAPS, Caps
from malg.core import Signature, Universe, Verdict, iter_bits, popcount, tuples
from malg.errors import CapExceededError, SignatureMismatchError, StructureError
from malg.functors import apply_P, powerset_universe, subset_tables
from malg.multialg import (
    Morphism,
    MultiAlgebra,
    SetValuedAlgebra,
    accumulate,
    all_maps,
    check_hom,
    check_inclusion,
)
from malg.ordalg import (
    CablCertificate,
    OrderedAlgebra,
    check_ordered_hom,
    powerset_poset,
    validate_cabl,
    validate_ordered_algebra,
)

logger = logging.getLogger(__name__)


# --- Partial multialgebras ---

@dataclass(frozen=True)
class PartialMultiAlgebra(SetValuedAlgebra):
    """Like a multialgebra, but operation values may be empty."""
    allows_empty: ClassVar[bool] = True
    kind: ClassVar[str] = "partial"

    @classmethod
    def from_total(cls, m: MultiAlgebra) -> "PartialMultiAlgebra":
        return cls(m.signature, m.universe, m.tables)


def check_partial_hom(h: Morphism, src: SetValuedAlgebra, dst: SetValuedAlgebra) -> Verdict:
    """The multialgebra inclusion condition; tuples with empty values pass."""
    return check_inclusion(h, src, dst, "partial hom")


def apply_P_partial(m: SetValuedAlgebra, caps: Optional[Caps] = None) -> OrderedAlgebra:
    """
    ``ℙ`` over all ``2**|A|`` subsets, the empty one included as bottom.

    Carrier index equals the subset mask. The order is checked against the
    with-bottom validator when it is small enough to check subset by subset.
    """
    caps = caps or DEFAULT_CAPS
    n = m.size
    if n > caps.powerset_cap:
        raise CapExceededError("P functor universe", n, caps.powerset_cap)
    poset = powerset_poset(m.universe, with_empty=True)
    if poset.size <= caps.literal_subset_cap:
        cert = validate_cabl(poset, caps, bottom=True)
    else:
        cert = CablCertificate.for_powerset(n, with_empty=True)
    tables = subset_tables(m, caps, with_empty=True)
    return validate_ordered_algebra(poset, cert, m.signature, tables, caps)


def restrict_to_nonempty(p: OrderedAlgebra) -> dict[str, dict[tuple[int, ...], int]]:
    """
    Tables of a with-bottom powerset algebra on non-empty arguments, re-indexed
    to ``mask - 1`` like ``ℙ``. Values that are the bottom come out as ``-1``.
    """
    out: dict[str, dict[tuple[int, ...], int]] = {}
    for sym in p.signature:
        out[sym.name] = {
            tuple(i - 1 for i in args): value - 1
            for args, value in p.tables[sym.name].items() if all(args)
        }
    return out


# --- MM-homomorphisms ---

@dataclass(frozen=True)
class SetValuedMorphism:
    """``h : A → 𝒫(B) ∖ {∅}``, stored as one target mask per source element."""
    source: Universe
    target: Universe
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.source.size:
            raise StructureError(
                f"Map covers {len(self.images)} elements, source has {self.source.size}")
        for x, mask in enumerate(self.images):
            if not mask:
                raise StructureError(f"Image of {self.source.label(x)} is empty")
            if mask & ~self.target.full_mask:
                raise StructureError(f"Image of {self.source.label(x)} leaves the target")

    @classmethod
    def from_morphism(cls, h: Morphism) -> "SetValuedMorphism":
        return cls(h.source, h.target, tuple(1 << t for t in h.mapping))

    @classmethod
    def from_labels(cls, source: Universe, target: Universe,
                    pairs: Mapping[str, Sequence[str]]) -> "SetValuedMorphism":
        missing = [x for x in source.labels if x not in pairs]
        if missing:
            raise StructureError(f"Map is not total; unmapped: {', '.join(missing)}")
        images = []
        for x in source.labels:
            mask = 0
            for y in pairs[x]:
                mask |= 1 << target.index(y)
            images.append(mask)
        return cls(source, target, tuple(images))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def image(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self.images[i]
        return out

    def is_singleton_valued(self) -> bool:
        return all(popcount(mask) == 1 for mask in self.images)

    def collapse(self) -> Morphism:
        """The ordinary map of a singleton-valued morphism."""
        if not self.is_singleton_valued():
            raise StructureError("Only singleton-valued morphisms collapse to maps")
        return Morphism(self.source, self.target, tuple(m.bit_length() - 1 for m in self.images))

    def as_labels(self) -> dict[str, str]:
        return {self.source.label(i): self.target.format_mask(m) for i, m in enumerate(self.images)}


def check_mm_hom(h: SetValuedMorphism, src: MultiAlgebra, dst: MultiAlgebra) -> Verdict:
    """
    ``⋃{h(a) : a ∈ σ(a⃗)} ⊆ ⋃{σ(b⃗) : bᵢ ∈ h(aᵢ)}`` for every symbol and tuple.
    """
    if src.signature != dst.signature:
        raise SignatureMismatchError(f"Signatures differ: [{src.signature}] vs [{dst.signature}]")
    if h.source != src.universe or h.target != dst.universe:
        raise StructureError("Morphism universes do not match the structures")
    checked = 0
    for symbol, args, value in src.entries():
        checked += 1
        image = h.image(value)
        target = accumulate(dst.tables[symbol], tuple(h.images[a] for a in args))
        if image & ~target:
            return Verdict.failed("mm hom", "image not included in target", {
                "symbol": symbol, "args": [src.universe.label(a) for a in args],
                "image": dst.universe.format_mask(image), "target": dst.universe.format_mask(target),
            }, detail=f"{symbol}{src.universe.format_tuple(args)}", checked=checked)
    return Verdict.passed("mm hom", checked=checked)


# --- Empty signature ---

def bare_powerset(n: int) -> OrderedAlgebra:
    """``𝒫*(n)`` as an ordered algebra over the empty signature."""
    poset = powerset_poset(Universe.of_size(n))
    return OrderedAlgebra(poset, CablCertificate.for_powerset(n), Signature(()), {})


def enumerate_continuous_maps(src: OrderedAlgebra, dst: OrderedAlgebra,
                              caps: Optional[Caps] = None) -> list[Morphism]:
    """
    Atom-preserving maps that preserve every non-empty supremum, by backtracking.

    Elements are assigned in order of their number of atoms; a partial
    assignment is abandoned as soon as a pairwise supremum among assigned
    elements is not preserved. Survivors are re-checked with
    :func:`~malg.ordalg.check_ordered_hom`.
    """
    caps = caps or DEFAULT_CAPS
    sc, dc = src.certificate, dst.certificate
    s_join, d_join = src.poset.pairwise_sup, dst.poset.pairwise_sup
    order = sorted(range(src.size), key=lambda x: (popcount(sc.atom_sets[x]), x))
    assignment: dict[int, int] = {}
    found: list[Morphism] = []

    def consistent(x: int) -> bool:
        for y in assignment:
            s = s_join[x][y]
            if s in assignment and d_join[assignment[x]][assignment[y]] != assignment[s]:
                return False
            for z in assignment:
                if s_join[y][z] == x and d_join[assignment[y]][assignment[z]] != assignment[x]:
                    return False
        return True

    def extend(depth: int) -> None:
        if depth == len(order):
            found.append(Morphism(src.carrier, dst.carrier, tuple(assignment[x] for x in range(src.size))))
            return
        x = order[depth]
        candidates = dc.atoms if sc.is_atom(x) else range(dst.size)
        for v in candidates:
            assignment[x] = v
            if consistent(x):
                extend(depth + 1)
            del assignment[x]

    extend(0)
    verified = [h for h in found if check_ordered_hom(h, src, dst, caps=caps).ok]
    verified.sort(key=lambda h: h.mapping)
    logger.debug("continuous maps: %d found, %d verified", len(found), len(verified))
    return verified


def check_empty_signature_hom_count(k: int, j: int, caps: Optional[Caps] = None) -> Verdict:
    """``j ** k`` maps between atom sets against the continuous maps ``𝒫*(k) → 𝒫*(j)``."""
    maps = j ** k
    continuous = enumerate_continuous_maps(bare_powerset(k), bare_powerset(j), caps)
    if len(continuous) != maps:
        return Verdict.failed("empty signature hom count", "count",
                              {"atoms": [k, j], "maps": maps, "continuous": len(continuous)})
    return Verdict.passed("empty signature hom count", checked=maps)


def empty_signature_mode(m: SetValuedAlgebra, caps: Optional[Caps] = None) -> list[Verdict]:
    """
    For a structure over the empty signature: ``ℙ(m)`` is the bare ``𝒫*(A)``,
    it passes the CABL validator, and on its endomaps the operation clause of
    the ordered homomorphism check examines nothing.
    """
    caps = caps or DEFAULT_CAPS
    if len(m.signature):
        raise StructureError(f"Expected the empty signature, got [{m.signature}]")
    p = apply_P(MultiAlgebra(m.signature, m.universe, {}), caps)
    verdicts: list[Verdict] = []
    expected = (1 << m.size) - 1
    if p.size != expected or p.tables:
        verdicts.append(Verdict.failed("empty signature", "carrier",
                                       {"carrier": p.size, "expected": expected}))
    else:
        verdicts.append(Verdict.passed("empty signature", checked=expected,
                                       detail=f"P carrier has {expected} elements, no tables"))
    validate_cabl(p.poset, caps)
    verdicts.append(Verdict.passed("cabl", checked=p.size))
    operation_entries = sum(1 for _ in p.entries())
    if operation_entries:
        verdicts.append(Verdict.failed("operation clause vacuous", "operation clause",
                                       {"entries": operation_entries}))
    else:
        ident = check_ordered_hom(Morphism.identity(p.carrier), p, p, caps=caps)
        verdicts.append(replace(ident, check="operation clause vacuous"))
    if m.size <= 3:
        verdicts.append(check_empty_signature_hom_count(m.size, m.size, caps))
    return verdicts


# --- Conservativity ---

def check_partial_conservativity(src: MultiAlgebra, dst: MultiAlgebra,
                                 caps: Optional[Caps] = None) -> list[Verdict]:
    """
    On total structures: the partial and ordinary homomorphism checks agree on
    every map, singleton MM-homs agree with their collapse, and the with-bottom
    ``ℙ`` restricted to non-empty subsets is ``ℙ``.
    """
    caps = caps or DEFAULT_CAPS
    verdicts: list[Verdict] = []
    partial_src, partial_dst = PartialMultiAlgebra.from_total(src), PartialMultiAlgebra.from_total(dst)
    maps = list(all_maps(src.universe, dst.universe, caps))
    for name, other in (("partial hom agreement", lambda h: check_partial_hom(h, partial_src, partial_dst)),
                        ("mm hom agreement", lambda h: check_mm_hom(SetValuedMorphism.from_morphism(h), src, dst))):
        failure = next((h for h in maps if other(h).ok != check_hom(h, src, dst).ok), None)
        if failure is None:
            verdicts.append(Verdict.passed(name, checked=len(maps)))
        else:
            verdicts.append(Verdict.failed(name, "disagreement", {"map": failure.as_labels()}))

    for m in (src, dst):
        total = apply_P(m, caps)
        restricted = restrict_to_nonempty(apply_P_partial(m, caps))
        bad: Optional[dict[str, Any]] = None
        for sym in m.signature:
            for args in tuples(total.size, sym.arity, caps):
                if restricted[sym.name][args] != total.tables[sym.name][args]:
                    labels = powerset_universe(m.universe)
                    bad = {"symbol": sym.name, "args": [labels.label(a) for a in args]}
                    break
            if bad:
                break
        if bad is None:
            verdicts.append(Verdict.passed("partial P restricts to P", checked=total.size))
        else:
            verdicts.append(Verdict.failed("partial P restricts to P", "table", bad))
    return verdicts
