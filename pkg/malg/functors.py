#!/usr/bin/env python3
"""
malg — The functors ℙ and 𝔸, the adjunction bijection Φ and the counterexample.

ℙ sends a multialgebra to the ordered algebra of its non-empty subsets; 𝔸 sends
an ordered algebra to the multialgebra of its atoms. Index conventions:

- the carrier index of the subset with mask ``m`` in ``ℙ(𝒜)`` is ``m - 1``, so
  the singleton ``{a}`` sits at ``2**a - 1``;
- the universe of ``𝔸(ℬ)`` lists the atoms of ``ℬ`` in ascending carrier order,
  so element ``i`` of ``𝔸(ℬ)`` is atom position ``i`` of the certificate.

Every construction that takes a morphism re-checks the morphism's contract and
raises :class:`~malg.errors.ContractViolationError` when it fails.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Literal, Mapping, Optional, Sequence, Union

from malg.config import DEFAULT_CAPS, Caps
from malg.core import Signature, Universe, Verdict, iter_bits, popcount, tuples
from malg.errors import (
    CapExceededError,
    ContractViolationError,
    SignatureMismatchError,
    StructureError,
)
from malg.multialg import (
    Morphism,
    MultiAlgebra,
    SetValuedAlgebra,
    all_bijections,
    all_maps,
    check_full_hom,
    check_hom,
    check_iso,
    enumerate_homs,
)
from malg.ordalg import (
    CablCertificate,
    OrderedAlgebra,
    check_ordered_hom,
    check_ordered_iso,
    powerset_poset,
    validate_ordered_algebra,
)

logger = logging.getLogger(__name__)

Contract = Literal["hom", "full", "iso", "ordered", "ordered-iso"]
MULTI_CONTRACTS = ("hom", "full", "iso")
ORDERED_CONTRACTS = ("ordered", "ordered-iso")


# --- ℙ ---

def powerset_universe(universe: Universe) -> Universe:
    """Carrier of ``ℙ`` over *universe*: the non-empty subsets, by mask."""
    return Universe(tuple(universe.format_mask(m) for m in range(1, 1 << universe.size)))


def subset_tables(m: SetValuedAlgebra, caps: Optional[Caps] = None,
                  with_empty: bool = False) -> dict[str, dict[tuple[int, ...], int]]:
    """
    Accumulated operation masks over subsets: ``σ(A₁,…,Aₙ)`` for every tuple of
    non-empty subsets (all subsets with *with_empty*), keyed by carrier index
    ``mask - 1`` (``mask`` with *with_empty*).
    """
    offset = 0 if with_empty else 1
    carrier_size = (1 << m.size) - offset
    tables: dict[str, dict[tuple[int, ...], int]] = {}
    for sym in m.signature:
        base = m.tables[sym.name]
        # tuples arrive in lexicographic order, so splitting off the lowest bit
        # of one coordinate always hits an earlier tuple
        values: dict[tuple[int, ...], int] = {}
        for idx in tuples(carrier_size, sym.arity, caps):
            masks = tuple(i + offset for i in idx)
            for pos, mask in enumerate(masks):
                if not mask:
                    values[idx] = 0
                    break
                if mask & (mask - 1):
                    low = mask & -mask
                    left = idx[:pos] + (low - offset,) + idx[pos + 1:]
                    right = idx[:pos] + (mask - low - offset,) + idx[pos + 1:]
                    values[idx] = values[left] | values[right]
                    break
            else:
                values[idx] = base[tuple(mask.bit_length() - 1 for mask in masks)]
        tables[sym.name] = values
    return tables


def apply_P(m: MultiAlgebra, caps: Optional[Caps] = None) -> OrderedAlgebra:
    """
    ``ℙ(𝒜)``: non-empty subsets ordered by inclusion, with
    ``σ(A₁,…,Aₙ) = ⋃{σ(a₁,…,aₙ) : aᵢ ∈ Aᵢ}``.

    Raises:
        CapExceededError: If ``|A|`` exceeds ``caps.powerset_cap`` or a table would
            exceed ``caps.tuple_cap``.
    """
    caps = caps or DEFAULT_CAPS
    n = m.size
    if n > caps.powerset_cap:
        raise CapExceededError("P functor universe", n, caps.powerset_cap)
    carrier_size = (1 << n) - 1
    tables = {name: {idx: mask - 1 for idx, mask in values.items()}
              for name, values in subset_tables(m, caps).items()}
    poset = powerset_poset(m.universe)
    cert = CablCertificate.for_powerset(n)
    logger.debug("apply_P: %d elements -> carrier of %d", n, carrier_size)
    return validate_ordered_algebra(poset, cert, m.signature, tables, caps)


def apply_P_mor(h: Morphism, src: MultiAlgebra, dst: MultiAlgebra) -> Morphism:
    """``ℙ(h)(A′) = {h(a) : a ∈ A′}`` between ``ℙ(src)`` and ``ℙ(dst)``."""
    verdict = check_hom(h, src, dst)
    if not verdict.ok:
        raise ContractViolationError("P(h) needs a multialgebra homomorphism", verdict)
    return image_map(h, src.universe, dst.universe)


def image_map(h: Morphism, source: Universe, target: Universe) -> Morphism:
    mapping = tuple(h.image(mask) - 1 for mask in range(1, 1 << source.size))
    return Morphism(powerset_universe(source), powerset_universe(target), mapping)


# --- 𝔸 ---

def apply_A(b: OrderedAlgebra) -> MultiAlgebra:
    """``𝔸(ℬ)``: the atoms of ``ℬ`` with ``σ(a⃗) = A_{σ(a⃗)}``."""
    cert = b.certificate
    universe = Universe(tuple(b.carrier.label(x) for x in cert.atoms))
    tables = {
        sym.name: {
            args: cert.atom_sets[b.tables[sym.name][tuple(cert.atoms[i] for i in args)]]
            for args in tuples(universe, sym.arity)
        }
        for sym in b.signature
    }
    return MultiAlgebra(b.signature, universe, tables)


def apply_A_mor(h: Morphism, src: OrderedAlgebra, dst: OrderedAlgebra,
                caps: Optional[Caps] = None) -> Morphism:
    """Restriction of a (Σ,≤)-homomorphism to atoms, as a map ``𝔸(src) → 𝔸(dst)``."""
    verdict = check_ordered_hom(h, src, dst, caps=caps)
    if not verdict.ok:
        raise ContractViolationError("A(h) needs a (Σ,≤)-homomorphism", verdict)
    return _restrict_to_atoms(h, src, dst)


def _restrict_to_atoms(h: Morphism, src: OrderedAlgebra, dst: OrderedAlgebra) -> Morphism:
    sc, dc = src.certificate, dst.certificate
    source = Universe(tuple(src.carrier.label(x) for x in sc.atoms))
    target = Universe(tuple(dst.carrier.label(x) for x in dc.atoms))
    return Morphism(source, target, tuple(dc.atom_position(h(x)) for x in sc.atoms))


def extend_from_atoms(atom_images: Sequence[int], src: OrderedAlgebra, dst: OrderedAlgebra) -> Morphism:
    """
    The continuous map sending atom position ``i`` of *src* to atom position
    ``atom_images[i]`` of *dst*: ``x ↦ sup{h(c) : c ∈ A_x}``.
    """
    sc, dc = src.certificate, dst.certificate
    mapping = []
    for x in range(src.size):
        union = 0
        for i in iter_bits(sc.atom_sets[x]):
            union |= 1 << atom_images[i]
        value = dc.element(union)
        if value is None:
            raise StructureError(f"No supremum for the image of {src.carrier.label(x)}")
        mapping.append(value)
    return Morphism(src.carrier, dst.carrier, tuple(mapping))


# --- Unit and counit ---

def unit_iso(m: MultiAlgebra, caps: Optional[Caps] = None) -> tuple[Morphism, Verdict]:
    """``a ↦ {a}`` from ``m`` onto ``𝔸(ℙ(m))``, verified to be an isomorphism."""
    atoms = apply_A(apply_P(m, caps))
    h = Morphism(m.universe, atoms.universe, tuple(range(m.size)))
    verdict = check_iso(h, m, atoms)
    return h, replace(verdict, check="unit iso")


def counit_iso(b: OrderedAlgebra, caps: Optional[Caps] = None) -> tuple[Morphism, Verdict]:
    """``b ↦ A_b`` from ``b`` onto ``ℙ(𝔸(b))``, verified both ways."""
    if b.certificate.bottom is not None:
        raise StructureError("counit_iso expects a bottomless ordered algebra")
    round_trip = apply_P(apply_A(b), caps)
    h = Morphism(b.carrier, round_trip.carrier, tuple(s - 1 for s in b.certificate.atom_sets))
    verdict = check_ordered_iso(h, b, round_trip, caps)
    return h, replace(verdict, check="counit iso")


# --- Hom-sets ---

@dataclass(frozen=True)
class HomSet:
    """Every morphism ``source → target`` satisfying ``contract``, in lexicographic order."""
    source: Union[MultiAlgebra, OrderedAlgebra]
    target: Union[MultiAlgebra, OrderedAlgebra]
    contract: str
    morphisms: tuple[Morphism, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.morphisms)

    def __iter__(self):
        return iter(self.morphisms)

    def __contains__(self, h: object) -> bool:
        return h in self.morphisms


def enumerate_ordered_homs(src: OrderedAlgebra, dst: OrderedAlgebra, mode: str = "hom",
                           caps: Optional[Caps] = None, brute_force: bool = False) -> list[Morphism]:
    """
    All (Σ,≤)-homomorphisms (``mode="hom"``) or isomorphisms (``"iso"``).

    A (Σ,≤)-homomorphism is determined by where it sends the atoms, so
    candidates are atom assignments extended by suprema; each candidate is then
    re-verified in full. With *brute_force* every carrier map is tried instead.
    """
    caps = caps or DEFAULT_CAPS
    if mode not in ("hom", "iso"):
        raise ValueError(f"Invalid mode: '{mode}'. Must be one of: hom, iso")
    if src.signature != dst.signature:
        raise SignatureMismatchError(f"Signatures differ: [{src.signature}] vs [{dst.signature}]")
    if brute_force:
        candidates = list(all_maps(src.carrier, dst.carrier, caps))
    else:
        k, j = src.certificate.num_atoms, dst.certificate.num_atoms
        if j ** k > caps.map_cap:
            raise CapExceededError("atom assignments", j ** k, caps.map_cap)
        candidates = [extend_from_atoms(images, src, dst)
                      for images in itertools.product(range(j), repeat=k)]
        candidates.sort(key=lambda h: h.mapping)
    check = check_ordered_iso if mode == "iso" else check_ordered_hom
    found = [h for h in candidates if check(h, src, dst, caps=caps).ok]
    logger.debug("enumerate_ordered_homs(%s): %d of %d candidates", mode, len(found), len(candidates))
    return found


def hom_set(src: Union[MultiAlgebra, OrderedAlgebra], dst: Union[MultiAlgebra, OrderedAlgebra],
            contract: Contract = "hom", caps: Optional[Caps] = None) -> HomSet:
    """Enumerate a Hom-set under one of the multialgebra or ordered contracts."""
    if contract in MULTI_CONTRACTS:
        if not isinstance(src, MultiAlgebra) or not isinstance(dst, MultiAlgebra):
            raise StructureError(f"Contract {contract!r} needs two multialgebras")
        morphisms = enumerate_homs(src, dst, contract, caps)  # type: ignore[arg-type]
    elif contract in ORDERED_CONTRACTS:
        if not isinstance(src, OrderedAlgebra) or not isinstance(dst, OrderedAlgebra):
            raise StructureError(f"Contract {contract!r} needs two ordered algebras")
        morphisms = enumerate_ordered_homs(src, dst, "iso" if contract == "ordered-iso" else "hom", caps)
    else:
        raise ValueError(f"Invalid contract: '{contract}'")
    return HomSet(src, dst, contract, tuple(morphisms))


# --- Adjunction ---

def phi(h: Morphism, b: OrderedAlgebra, a: MultiAlgebra,
        atoms_of_b: Optional[MultiAlgebra] = None) -> Morphism:
    """``Φ(h)(x) = {h(c) : c ∈ A_x}`` for ``h : 𝔸(ℬ) → 𝒜``; a map ``ℬ → ℙ(𝒜)``."""
    atoms_of_b = atoms_of_b or apply_A(b)
    verdict = check_hom(h, atoms_of_b, a)
    if not verdict.ok:
        raise ContractViolationError("phi needs a homomorphism A(B) -> A", verdict)
    mapping = tuple(h.image(s) - 1 for s in b.certificate.atom_sets)
    return Morphism(b.carrier, powerset_universe(a.universe), mapping)


def phi_inv(g: Morphism, b: OrderedAlgebra, a: MultiAlgebra,
            powerset_of_a: Optional[OrderedAlgebra] = None,
            caps: Optional[Caps] = None) -> Morphism:
    """
    ``h′(c)`` is the unique element with ``g(c) = {h′(c)}``, for atoms ``c`` of ``ℬ``.
    """
    powerset_of_a = powerset_of_a or apply_P(a, caps)
    verdict = check_ordered_hom(g, b, powerset_of_a, caps=caps)
    if not verdict.ok:
        raise ContractViolationError("phi_inv needs a (Σ,≤)-homomorphism B -> P(A)", verdict)
    mapping = []
    for c in b.certificate.atoms:
        mask = g(c) + 1
        if popcount(mask) != 1:
            raise ContractViolationError(f"g({b.carrier.label(c)}) is not a singleton")
        mapping.append(mask.bit_length() - 1)
    atoms = Universe(tuple(b.carrier.label(c) for c in b.certificate.atoms))
    return Morphism(atoms, a.universe, tuple(mapping))


def check_adjunction(b: OrderedAlgebra, a: MultiAlgebra, caps: Optional[Caps] = None) -> Verdict:
    """
    Φ is a bijection ``Hom(𝔸(ℬ),𝒜) → Hom(ℬ,ℙ(𝒜))``: equal sizes, image equal to the
    enumerated right-hand side, and both round trips the identity.
    """
    caps = caps or DEFAULT_CAPS
    atoms_of_b = apply_A(b)
    powerset_of_a = apply_P(a, caps)
    left = enumerate_homs(atoms_of_b, a, "hom", caps)
    right = enumerate_ordered_homs(b, powerset_of_a, "hom", caps)
    if len(left) != len(right):
        return Verdict.failed("adjunction", "hom-set sizes",
                              {"left": len(left), "right": len(right)})
    images = [phi(h, b, a, atoms_of_b) for h in left]
    if set(m.mapping for m in images) != set(g.mapping for g in right):
        return Verdict.failed("adjunction", "image", {"left": len(left), "right": len(right)})
    for h, g in zip(left, images):
        if phi_inv(g, b, a, powerset_of_a, caps) != h:
            return Verdict.failed("adjunction", "phi_inv after phi", {"map": h.as_labels()})
    for g in right:
        if phi(phi_inv(g, b, a, powerset_of_a, caps), b, a, atoms_of_b) != g:
            return Verdict.failed("adjunction", "phi after phi_inv", {"map": g.as_labels()})
    return Verdict.passed("adjunction", checked=len(left) + len(right))


def check_naturality(h: Morphism, h_prime: Morphism, a: MultiAlgebra, c: MultiAlgebra,
                     b: OrderedAlgebra, d: OrderedAlgebra, caps: Optional[Caps] = None) -> Verdict:
    """
    Naturality of Φ in both arguments for ``h : 𝒜 → 𝒞`` and ``h′ : 𝒟 → ℬ``.

    For every ``f`` in ``Hom(𝔸(ℬ), 𝒜)`` the two paths to ``Hom(𝒟, ℙ(𝒞))`` agree:
    ``ℙ(h) ∘ Φ(f) ∘ h′ = Φ(h ∘ f ∘ 𝔸(h′))``.
    """
    caps = caps or DEFAULT_CAPS
    p_h = apply_P_mor(h, a, c)
    a_h_prime = apply_A_mor(h_prime, d, b, caps)
    atoms_of_b, atoms_of_d = apply_A(b), apply_A(d)
    homs = enumerate_homs(atoms_of_b, a, "hom", caps)
    for f in homs:
        top = p_h.compose(phi(f, b, a, atoms_of_b)).compose(h_prime)
        bottom = phi(h.compose(f).compose(a_h_prime), d, c, atoms_of_d)
        if top != bottom:
            return Verdict.failed("naturality", "square", {
                "f": f.as_labels(), "upper": top.as_labels(), "lower": bottom.as_labels()})
    return Verdict.passed("naturality", checked=len(homs))


# --- Functor properties ---

def check_P_functor_laws(src: MultiAlgebra, mid: MultiAlgebra, dst: MultiAlgebra,
                         caps: Optional[Caps] = None) -> Verdict:
    """``ℙ(id) = id`` and ``ℙ(g∘f) = ℙ(g)∘ℙ(f)`` over enumerated homs."""
    ident = Morphism.identity(src.universe)
    if apply_P_mor(ident, src, src) != Morphism.identity(powerset_universe(src.universe)):
        return Verdict.failed("P functor", "identity", {})
    checked = 1
    firsts = enumerate_homs(src, mid, "hom", caps)
    seconds = enumerate_homs(mid, dst, "hom", caps)
    for f in firsts:
        p_f = apply_P_mor(f, src, mid)
        for g in seconds:
            checked += 1
            if apply_P_mor(g.compose(f), src, dst) != apply_P_mor(g, mid, dst).compose(p_f):
                return Verdict.failed("P functor", "composition",
                                      {"f": f.as_labels(), "g": g.as_labels()}, checked=checked)
    return Verdict.passed("P functor", checked=checked)


def check_A_functor_laws(src: OrderedAlgebra, mid: OrderedAlgebra, dst: OrderedAlgebra,
                         caps: Optional[Caps] = None) -> Verdict:
    """``𝔸(id) = id`` and ``𝔸(g∘f) = 𝔸(g)∘𝔸(f)`` over enumerated (Σ,≤)-homs."""
    ident = apply_A_mor(Morphism.identity(src.carrier), src, src, caps)
    if ident != Morphism.identity(ident.source):
        return Verdict.failed("A functor", "identity", {})
    checked = 1
    firsts = enumerate_ordered_homs(src, mid, caps=caps)
    seconds = enumerate_ordered_homs(mid, dst, caps=caps)
    for f in firsts:
        a_f = apply_A_mor(f, src, mid, caps)
        for g in seconds:
            checked += 1
            if apply_A_mor(g.compose(f), src, dst, caps) != apply_A_mor(g, mid, dst, caps).compose(a_f):
                return Verdict.failed("A functor", "composition",
                                      {"f": f.as_labels(), "g": g.as_labels()}, checked=checked)
    return Verdict.passed("A functor", checked=checked)


def _injective_on(check: str, homs: Sequence[Morphism], images: Sequence[Morphism]) -> Verdict:
    seen: dict[tuple[int, ...], Morphism] = {}
    for h, image in zip(homs, images):
        if image.mapping in seen:
            return Verdict.failed(check, "not injective", {
                "first": seen[image.mapping].as_labels(), "second": h.as_labels()}, checked=len(seen))
        seen[image.mapping] = h
    return Verdict.passed(check, checked=len(homs))


def check_P_faithful(src: MultiAlgebra, dst: MultiAlgebra, caps: Optional[Caps] = None) -> Verdict:
    """``h ↦ ℙ(h)`` is injective on ``Hom(src, dst)``."""
    homs = enumerate_homs(src, dst, "hom", caps)
    return _injective_on("P faithful", homs, [apply_P_mor(h, src, dst) for h in homs])


def check_A_faithful(src: OrderedAlgebra, dst: OrderedAlgebra, caps: Optional[Caps] = None) -> Verdict:
    """``h ↦ 𝔸(h)`` is injective on ``Hom(src, dst)``."""
    homs = enumerate_ordered_homs(src, dst, caps=caps)
    return _injective_on("A faithful", homs, [_restrict_to_atoms(h, src, dst) for h in homs])


def P_preimage(g: Morphism, src: MultiAlgebra, dst: MultiAlgebra,
               caps: Optional[Caps] = None) -> Morphism:
    """
    The homomorphism ``h`` with ``ℙ(h) = g``, read off ``g({a}) = {h(a)}``.

    Raises:
        ContractViolationError: If *g* is not a (Σ,≤)-homomorphism
            ``ℙ(src) → ℙ(dst)`` or has no preimage.
    """
    p_src, p_dst = apply_P(src, caps), apply_P(dst, caps)
    verdict = check_ordered_hom(g, p_src, p_dst, caps=caps)
    if not verdict.ok:
        raise ContractViolationError("P_preimage needs a (Σ,≤)-homomorphism", verdict)
    mapping = []
    for a in range(src.size):
        mask = g((1 << a) - 1) + 1
        if popcount(mask) != 1:
            raise ContractViolationError(f"g({{{src.universe.label(a)}}}) is not a singleton")
        mapping.append(mask.bit_length() - 1)
    h = Morphism(src.universe, dst.universe, tuple(mapping))
    if apply_P_mor(h, src, dst) != g:
        raise ContractViolationError("P(h) does not reproduce g")
    return h


def A_preimage(f: Morphism, src: OrderedAlgebra, dst: OrderedAlgebra,
               caps: Optional[Caps] = None) -> Morphism:
    """
    The (Σ,≤)-homomorphism ``g`` with ``𝔸(g) = f``: ``g(x) = sup{f(c) : c ∈ A_x}``.

    Raises:
        ContractViolationError: If *f* is not a homomorphism ``𝔸(src) → 𝔸(dst)``
            or its extension is not a (Σ,≤)-homomorphism.
    """
    verdict = check_hom(f, apply_A(src), apply_A(dst))
    if not verdict.ok:
        raise ContractViolationError("A_preimage needs a multialgebra homomorphism", verdict)
    g = extend_from_atoms(f.mapping, src, dst)
    if apply_A_mor(g, src, dst, caps) != f:
        raise ContractViolationError("A(g) does not reproduce f")
    return g


def check_P_full(src: MultiAlgebra, dst: MultiAlgebra, caps: Optional[Caps] = None) -> Verdict:
    """Every (Σ,≤)-homomorphism ``ℙ(src) → ℙ(dst)`` has a ℙ-preimage."""
    homs = enumerate_ordered_homs(apply_P(src, caps), apply_P(dst, caps), caps=caps)
    for g in homs:
        try:
            P_preimage(g, src, dst, caps)
        except ContractViolationError as exc:
            return Verdict.failed("P full", "preimage", {"map": g.as_labels()}, detail=str(exc))
    return Verdict.passed("P full", checked=len(homs))


def check_A_full(src: OrderedAlgebra, dst: OrderedAlgebra, caps: Optional[Caps] = None) -> Verdict:
    """Every homomorphism ``𝔸(src) → 𝔸(dst)`` has an 𝔸-preimage."""
    homs = enumerate_homs(apply_A(src), apply_A(dst), "hom", caps)
    for f in homs:
        try:
            A_preimage(f, src, dst, caps)
        except ContractViolationError as exc:
            return Verdict.failed("A full", "preimage", {"map": f.as_labels()}, detail=str(exc))
    return Verdict.passed("A full", checked=len(homs))


# --- Plain Σ-algebras ---

@dataclass(frozen=True)
class PlainAlgebra:
    """A Σ-algebra: ``tables[name][args]`` is a single element index."""
    signature: Signature
    universe: Universe
    tables: Mapping[str, Mapping[tuple[int, ...], int]]

    def __post_init__(self) -> None:
        n = self.universe.size
        for sym in self.signature:
            table = self.tables.get(sym.name)
            if table is None or len(table) != n ** sym.arity:
                raise StructureError(f"Table for {sym.name!r} is not total")
            if any(not 0 <= v < n for v in table.values()):
                raise StructureError(f"Table for {sym.name!r} leaves the universe")

    @property
    def size(self) -> int:
        return self.universe.size


def apply_P_eq(m: MultiAlgebra, caps: Optional[Caps] = None) -> PlainAlgebra:
    """``𝖯₌(𝒜)``: ``ℙ(𝒜)`` with its order forgotten."""
    p = apply_P(m, caps)
    return PlainAlgebra(p.signature, p.carrier, p.tables)


def apply_P_eq_mor(h: Morphism, src: MultiAlgebra, dst: MultiAlgebra) -> Morphism:
    """``𝖯₌(h)`` for a full homomorphism *h*; the image map on subsets."""
    verdict = check_full_hom(h, src, dst)
    if not verdict.ok:
        raise ContractViolationError("P=(h) needs a full homomorphism", verdict)
    return image_map(h, src.universe, dst.universe)


def check_plain_hom(h: Morphism, src: PlainAlgebra, dst: PlainAlgebra) -> Verdict:
    """``h(σ(a⃗)) = σ(h(a⃗))`` for every symbol and tuple."""
    if src.signature != dst.signature:
        raise SignatureMismatchError(f"Signatures differ: [{src.signature}] vs [{dst.signature}]")
    checked = 0
    for sym in src.signature:
        table, target = src.tables[sym.name], dst.tables[sym.name]
        for args in sorted(table):
            checked += 1
            lhs, rhs = h(table[args]), target[tuple(h(x) for x in args)]
            if lhs != rhs:
                return Verdict.failed("plain hom", "homomorphism", {
                    "symbol": sym.name, "args": [src.universe.label(x) for x in args],
                    "h(value)": dst.universe.label(lhs), "target": dst.universe.label(rhs),
                }, checked=checked)
    return Verdict.passed("plain hom", checked=checked)


def enumerate_plain_isos(a: PlainAlgebra, b: PlainAlgebra, caps: Optional[Caps] = None) -> list[Morphism]:
    """Bijective homomorphisms of plain algebras, in lexicographic order."""
    return [h for h in all_bijections(a.universe, b.universe, caps) if check_plain_hom(h, a, b).ok]


# --- The counterexample ---

UNARY_S = Signature.of(("s", 1))


def counterexample_pair() -> tuple[MultiAlgebra, MultiAlgebra]:
    """
    Two non-isomorphic multialgebras over one unary symbol with isomorphic 𝖯₌:
    ``s(0) = s(1) = {1}`` and ``s(0) = s(1) = {0,1}``.
    """
    u = Universe(("0", "1"))
    a = MultiAlgebra.from_labels(UNARY_S, u, {"s": {("0",): {"1"}, ("1",): {"1"}}})
    b = MultiAlgebra.from_labels(UNARY_S, u, {"s": {("0",): {"0", "1"}, ("1",): {"0", "1"}}})
    return a, b


def exhibited_plain_iso(a: MultiAlgebra, b: MultiAlgebra) -> Morphism:
    """
    ``{x} ↦ {x'}``, ``{y} ↦ {x',y'}``, ``{x,y} ↦ {y'}`` where ``x, y`` and
    ``x', y'`` are the two elements of each universe in carrier order.

    Raises:
        StructureError: If either universe does not have exactly two elements.
    """
    if a.universe.size != 2 or b.universe.size != 2:
        raise StructureError(
            f"The exhibited plain iso needs two-element universes, got {a.universe.size} and {b.universe.size}")
    masks = {0b01: 0b01, 0b10: 0b11, 0b11: 0b10}
    return Morphism(powerset_universe(a.universe), powerset_universe(b.universe),
                    tuple(masks[m] - 1 for m in sorted(masks)))


@dataclass(frozen=True)
class Counterexample:
    """Outcome of the three searches separating multialgebras from their 𝖯₌ images."""
    a: MultiAlgebra
    b: MultiAlgebra
    maps_examined: int
    multialgebra_isos: tuple[Morphism, ...]
    plain_isos: tuple[Morphism, ...]
    bijections_examined: int
    exhibited: Morphism
    exhibited_verdict: Verdict
    ordered_isos: tuple[Morphism, ...]
    ordered_candidates: int

    @property
    def holds(self) -> bool:
        return (not self.multialgebra_isos and self.exhibited in self.plain_isos
                and not self.ordered_isos)

    def verdicts(self) -> list[Verdict]:
        """One verdict per claim; all pass exactly when the counterexample holds."""
        def count(check: str, found: tuple[Morphism, ...], want_empty: bool, examined: int) -> Verdict:
            if bool(found) != want_empty:
                return Verdict.passed(check, checked=examined, detail=f"{len(found)} found")
            witness = {"map": found[0].as_labels()} if found else {}
            return Verdict.failed(check, "unexpected count", witness, f"{len(found)} found", examined)

        return [
            count("no multialgebra iso A -> B", self.multialgebra_isos, True, self.maps_examined),
            count("plain iso P=(A) -> P=(B) exists", self.plain_isos, False, self.bijections_examined),
            replace(self.exhibited_verdict, check="exhibited plain iso"),
            count("no ordered iso P(A) -> P(B)", self.ordered_isos, True, self.ordered_candidates),
        ]


def reproduce_counterexample(a: Optional[MultiAlgebra] = None, b: Optional[MultiAlgebra] = None,
                             caps: Optional[Caps] = None) -> Counterexample:
    """
    Search all maps for multialgebra isomorphisms, all bijections of ``𝖯₌`` for
    plain isomorphisms and all carrier maps of ``ℙ`` for ordered isomorphisms.
    """
    caps = caps or DEFAULT_CAPS
    if a is None or b is None:
        a, b = counterexample_pair()
    maps = list(all_maps(a.universe, b.universe, caps))
    multi = tuple(h for h in maps if check_iso(h, a, b).ok)
    plain_a, plain_b = apply_P_eq(a, caps), apply_P_eq(b, caps)
    plain = tuple(enumerate_plain_isos(plain_a, plain_b, caps))
    n_plain = plain_a.universe.size
    bijections = math.factorial(n_plain) if n_plain == plain_b.universe.size else 0
    exhibited = exhibited_plain_iso(a, b)
    p_a, p_b = apply_P(a, caps), apply_P(b, caps)
    carrier_maps = list(all_maps(p_a.carrier, p_b.carrier, caps))
    ordered = tuple(g for g in carrier_maps if g.is_bijective() and check_ordered_iso(g, p_a, p_b, caps).ok)
    logger.debug("counterexample: %d/%d/%d isomorphisms", len(multi), len(plain), len(ordered))
    return Counterexample(a, b, len(maps), multi, plain, bijections, exhibited,
                          check_plain_hom(exhibited, plain_a, plain_b), ordered, len(carrier_maps))
