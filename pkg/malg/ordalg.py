#!/usr/bin/env python3
"""
malg — Finite posets, complete atomic bottomless Boolean algebras, (Σ,≤)-algebras.

Nonexistent suprema and infima are ``None``. No explicit bottom is ever added to
a bottomless poset: "the infimum does not exist" plays the part of "the
infimum is the adjoined zero", and the supremum of the empty set is ``None``.

A validated poset yields a :class:`CablCertificate` recording its atoms and the
atom set ``A_a`` of every element; all downstream suprema go through the
certificate (union of atom sets), while the validator itself and the lemma
checkers use the order relation directly.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Mapping, Optional, Sequence, Union

import numpy as np

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
    popcount,
    tuples,
)
from malg.errors import (
    AtomGenerationError,
    CablConditionError,
    CapExceededError,
    PosetAxiomError,
    SignatureMismatchError,
    StructureError,
)
from malg.multialg import Morphism, check_term_symbols, check_valuation

logger = logging.getLogger(__name__)

Subset = Union[SubsetValue, int]


def _as_mask(s: Subset) -> int:
    return s.bits if isinstance(s, SubsetValue) else s


def _row_mask(row: np.ndarray) -> int:
    packed = np.packbits(row.astype(np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


# --- Posets ---

class FinitePoset:
    """
    Immutable finite partial order on ``carrier``.

    ``leq[i, j]`` is True iff ``i <= j``. Construct through
    :func:`validate_poset` unless the axioms hold by construction.
    """

    def __init__(self, carrier: Universe, leq: np.ndarray):
        leq = np.array(leq, dtype=bool)
        if leq.shape != (carrier.size, carrier.size):
            raise StructureError(f"Order matrix of shape {leq.shape} for {carrier.size} elements")
        leq.flags.writeable = False
        self.carrier = carrier
        self.leq = leq

    @classmethod
    def from_pairs(cls, labels: Sequence[str], pairs: Sequence[tuple[str, str]],
                   close: bool = True) -> "FinitePoset":
        """
        Poset from listed ``a <= b`` pairs; with *close*, the reflexive and
        transitive closure is taken first. Antisymmetry is still validated.
        """
        carrier = Universe(tuple(labels))
        n = carrier.size
        rel = np.zeros((n, n), dtype=bool)
        for a, b in pairs:
            rel[carrier.index(a), carrier.index(b)] = True
        if close:
            rel = transitive_closure(rel | np.eye(n, dtype=bool))
        return validate_poset(rel, carrier.labels)

    @property
    def size(self) -> int:
        return self.carrier.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.carrier == other.carrier and np.array_equal(self.leq, other.leq)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"FinitePoset({self.size} elements)"

    @cached_property
    def up(self) -> tuple[int, ...]:
        """``up[a]``: mask of elements above ``a``."""
        return tuple(_row_mask(self.leq[a, :]) for a in range(self.size))

    @cached_property
    def down(self) -> tuple[int, ...]:
        """``down[a]``: mask of elements below ``a``."""
        return tuple(_row_mask(self.leq[:, a]) for a in range(self.size))

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def upper_bounds(self, mask: int) -> int:
        bounds = (1 << self.size) - 1
        for a in iter_bits(mask):
            bounds &= self.up[a]
        return bounds

    def lower_bounds(self, mask: int) -> int:
        bounds = (1 << self.size) - 1
        for a in iter_bits(mask):
            bounds &= self.down[a]
        return bounds

    def least(self, mask: int) -> Optional[int]:
        """The least element of a subset, if any."""
        for u in iter_bits(mask):
            if mask & ~self.up[u] == 0:
                return u
        return None

    def greatest(self, mask: int) -> Optional[int]:
        for u in iter_bits(mask):
            if mask & ~self.down[u] == 0:
                return u
        return None

    def sup_mask(self, mask: int) -> Optional[int]:
        """Least upper bound; ``None`` when it does not exist or *mask* is empty."""
        if not mask:
            return None
        return self.least(self.upper_bounds(mask))

    def inf_mask(self, mask: int) -> Optional[int]:
        if not mask:
            return None
        return self.greatest(self.lower_bounds(mask))

    def maximum(self) -> Optional[int]:
        return self.greatest((1 << self.size) - 1)

    def minimum(self) -> Optional[int]:
        return self.least((1 << self.size) - 1)

    def minimal(self, mask: Optional[int] = None) -> int:
        """Mask of minimal elements of *mask* (default: the whole carrier)."""
        if mask is None:
            mask = (1 << self.size) - 1
        return sum(1 << a for a in iter_bits(mask) if self.down[a] & mask == 1 << a)

    @cached_property
    def pairwise_sup(self) -> tuple[tuple[Optional[int], ...], ...]:
        n = self.size
        return tuple(tuple(self.sup_mask(1 << a | 1 << b) for b in range(n)) for a in range(n))

    @cached_property
    def pairwise_inf(self) -> tuple[tuple[Optional[int], ...], ...]:
        n = self.size
        return tuple(tuple(self.inf_mask(1 << a | 1 << b) for b in range(n)) for a in range(n))


def transitive_closure(rel: np.ndarray) -> np.ndarray:
    """Transitive closure of a boolean relation matrix (Warshall)."""
    closure = np.array(rel, dtype=bool)
    for k in range(closure.shape[0]):
        closure |= np.outer(closure[:, k], closure[k, :])
    return closure


def validate_poset(leq: Any, labels: Optional[Sequence[str]] = None) -> FinitePoset:
    """
    Validate a square boolean matrix as a partial order.

    Raises:
        PosetAxiomError: naming the failed axiom with its witness pair or triple.
        StructureError: If the matrix is not square or empty.
    """
    rel = np.array(leq, dtype=bool)
    if rel.ndim != 2 or rel.shape[0] != rel.shape[1]:
        raise StructureError(f"Order relation must be a square matrix, got shape {rel.shape}")
    n = rel.shape[0]
    carrier = Universe(tuple(labels) if labels is not None else tuple(str(i) for i in range(n)))
    if carrier.size != n:
        raise StructureError(f"{carrier.size} labels for a {n}x{n} relation")

    lab = carrier.labels
    for i in range(n):
        if not rel[i, i]:
            raise PosetAxiomError(Verdict.failed(
                "poset", "reflexivity", {"element": lab[i]}, detail=f"{lab[i]} <= {lab[i]} missing"))

    both = rel & rel.T & ~np.eye(n, dtype=bool)
    if both.any():
        i, j = (int(v) for v in np.argwhere(both)[0])
        raise PosetAxiomError(Verdict.failed(
            "poset", "antisymmetry", {"pair": [lab[i], lab[j]]},
            detail=f"{lab[i]} <= {lab[j]} and {lab[j]} <= {lab[i]}"))

    as_int = rel.astype(np.int64)
    composed = (as_int @ as_int) > 0
    broken = composed & ~rel
    if broken.any():
        a, c = (int(v) for v in np.argwhere(broken)[0])
        b = int(np.argwhere(rel[a, :] & rel[:, c])[0][0])
        raise PosetAxiomError(Verdict.failed(
            "poset", "transitivity", {"triple": [lab[a], lab[b], lab[c]]},
            detail=f"{lab[a]} <= {lab[b]} <= {lab[c]} but not {lab[a]} <= {lab[c]}"))

    return FinitePoset(carrier, rel)


def sup(p: FinitePoset, s: Subset) -> Optional[int]:
    """
    Least upper bound of a non-empty subset, or ``None`` if it does not exist.

    Raises:
        StructureError: If *s* is empty.
    """
    mask = _as_mask(s)
    if not mask:
        raise StructureError("sup of the empty set is not defined in a bottomless poset")
    return p.sup_mask(mask)


def inf(p: FinitePoset, s: Subset) -> Optional[int]:
    """Greatest lower bound of a non-empty subset, or ``None``."""
    mask = _as_mask(s)
    if not mask:
        raise StructureError("inf of the empty set is not defined")
    return p.inf_mask(mask)


# --- Powerset shapes ---

def powerset_poset(universe: Union[Universe, int], with_empty: bool = False) -> FinitePoset:
    """
    ``𝒫*(X)`` (or ``𝒫(X)`` with *with_empty*) ordered by inclusion.

    Carrier index of the subset with mask ``m`` is ``m - 1`` (``m`` with the
    empty set); labels are ``{a,b}``-style.
    """
    if isinstance(universe, int):
        universe = Universe.of_size(universe)
    offset = 0 if with_empty else 1
    masks = np.arange(offset, 1 << universe.size, dtype=np.int64)
    leq = (masks[:, None] & ~masks[None, :]) == 0
    labels = tuple(universe.format_mask(int(m)) for m in masks)
    return FinitePoset(Universe(labels), leq)


# --- Certificates ---

@dataclass(frozen=True)
class CablCertificate:
    """
    Evidence that a poset is a complete atomic (bottomless) Boolean algebra.

    ``atom_sets[a]`` is ``A_a`` as a mask over atom *positions* (indices into
    ``atoms``). ``bottom`` is set only for the relaxed with-bottom variant.
    """
    top: int
    atoms: tuple[int, ...]
    atom_sets: tuple[int, ...]
    complement: Mapping[int, int]
    bottom: Optional[int] = None
    sampled: bool = False
    element_of: dict[int, int] = field(init=False, repr=False, compare=False, hash=False)
    _atom_position: dict[int, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        element_of: dict[int, int] = {}
        for a, atoms in enumerate(self.atom_sets):
            element_of.setdefault(atoms, a)
        object.__setattr__(self, "element_of", element_of)
        object.__setattr__(self, "_atom_position", {a: i for i, a in enumerate(self.atoms)})

    @classmethod
    def for_powerset(cls, n: int, with_empty: bool = False) -> "CablCertificate":
        """Certificate of :func:`powerset_poset` over ``n`` points, without search."""
        offset = 0 if with_empty else 1
        full = (1 << n) - 1
        atoms = tuple((1 << i) - offset for i in range(n))
        atom_sets = tuple(range(offset, 1 << n))
        complement = {m - offset: (full & ~m) - offset for m in range(offset, 1 << n)
                      if with_empty or m != full}
        return cls(top=full - offset, atoms=atoms, atom_sets=atom_sets, complement=complement,
                   bottom=0 if with_empty else None)

    @property
    def num_atoms(self) -> int:
        return len(self.atoms)

    def is_atom(self, a: int) -> bool:
        return a in self._atom_position

    def atom_position(self, a: int) -> int:
        return self._atom_position[a]

    def element(self, atom_mask: int) -> Optional[int]:
        """The element whose atom set is *atom_mask*; empty mask gives ``bottom``."""
        if not atom_mask:
            return self.bottom
        return self.element_of.get(atom_mask)

    def sup_of(self, mask: int) -> Optional[int]:
        """Supremum of a set of elements via the union of their atom sets."""
        union = 0
        for a in iter_bits(mask):
            union |= self.atom_sets[a]
        return self.element(union)

    def atoms_below(self, a: int) -> tuple[int, ...]:
        """``A_a`` as carrier indices."""
        return tuple(self.atoms[i] for i in iter_bits(self.atom_sets[a]))


def validate_cabl(p: FinitePoset, caps: Optional[Caps] = None, bottom: bool = False) -> CablCertificate:
    """
    Check the conditions characterising complete, atomic, bottomless Boolean algebras.

    1. a maximum exists;
    2. every non-empty subset has a supremum;
    3. every element other than the maximum is semi-complemented;
    4. every element is the supremum of the atoms below it.

    With *bottom* the with-bottom (CABA) restatement is checked instead: a minimum
    exists, ``sup ∅`` is the minimum, "the infimum does not exist" reads "the
    infimum is the minimum", and the maximum must be complemented too.

    Carriers up to ``caps.literal_subset_cap`` have condition 2 checked subset by
    subset; larger ones up to ``caps.cabl_cap`` through all pairs (pairwise
    suprema give all finite ones); beyond that, on sampled pairs and elements,
    and the certificate is marked ``sampled``.

    Raises:
        CablConditionError: naming the first failed condition and its witness.
    """
    caps = caps or DEFAULT_CAPS
    n = p.size
    lab = p.carrier.labels
    check = "caba" if bottom else "cabl"
    sampled = n > caps.cabl_cap
    rng = random.Random(caps.seed)

    def fail(clause: str, witness: dict[str, Any], detail: str) -> CablConditionError:
        return CablConditionError(Verdict.failed(check, clause, witness, detail, exhaustive=not sampled))

    top = p.maximum()
    if top is None:
        maximal = sum(1 << a for a in range(n) if p.up[a] == 1 << a)
        raise fail("1: maximum", {"maximal": p.carrier.format_mask(maximal)}, "no maximum element")
    least_element: Optional[int] = None
    if bottom:
        least_element = p.minimum()
        if least_element is None:
            raise fail("1: minimum", {}, "no minimum element")

    # 2: suprema
    if n <= caps.literal_subset_cap:
        for mask in range(1, 1 << n):
            if p.sup_mask(mask) is None:
                raise fail("2: suprema", {"subset": p.carrier.format_mask(mask)},
                           f"sup {p.carrier.format_mask(mask)} does not exist")
    else:
        pairs = itertools.combinations(range(n), 2) if not sampled else (
            tuple(rng.sample(range(n), 2)) for _ in range(caps.sample_size))
        for a, b in pairs:
            if p.sup_mask(1 << a | 1 << b) is None:
                raise fail("2: suprema", {"subset": p.carrier.format_mask(1 << a | 1 << b)},
                           f"sup {{{lab[a]},{lab[b]}}} does not exist")

    # 3: (semi-)complements
    complement: dict[int, int] = {}
    elements = range(n) if not sampled else sorted(rng.sample(range(n), min(n, caps.sample_size)))
    for a in elements:
        if a == top and not bottom:
            continue
        joins_to_top = 0
        disjoint = 0
        for c in range(n):
            if p.sup_mask(1 << a | 1 << c) == top:
                joins_to_top |= 1 << c
            meet = p.inf_mask(1 << a | 1 << c)
            if meet is None if not bottom else meet == least_element:
                disjoint |= 1 << c
        b1 = p.inf_mask(joins_to_top)
        b2 = p.sup_mask(disjoint)
        if b1 is None or b2 is None or b1 != b2:
            shown = {k: (lab[v] if v is not None else None) for k, v in (("inf_side", b1), ("sup_side", b2))}
            raise fail("3: complement", {"element": lab[a], **shown},
                       f"{lab[a]} has no complement")
        complement[a] = b1

    # 4: atomicity
    atoms_mask = p.minimal() if not bottom else p.minimal(((1 << n) - 1) & ~(1 << least_element))
    for a in range(n):
        below = p.down[a] & atoms_mask
        expected = p.sup_mask(below) if below else least_element
        if expected != a:
            raise fail("4: atomicity", {"element": lab[a], "atoms": p.carrier.format_mask(below)},
                       f"{lab[a]} is not the supremum of the atoms below it")

    atoms = tuple(iter_bits(atoms_mask))
    position = {x: i for i, x in enumerate(atoms)}
    atom_sets = tuple(sum(1 << position[x] for x in iter_bits(p.down[a] & atoms_mask)) for a in range(n))
    expected_size = (1 << len(atoms)) - (0 if bottom else 1)
    if len(set(atom_sets)) != n or n != expected_size:
        raise fail("4: atomicity", {"atoms": len(atoms), "carrier": n},
                   f"{n} elements over {len(atoms)} atoms is not a powerset shape")
    if sampled:
        logger.info("validate_cabl: %d elements exceed cap %d; conditions 2-3 were sampled", n, caps.cabl_cap)
    return CablCertificate(top=top, atoms=atoms, atom_sets=atom_sets, complement=complement,
                           bottom=least_element, sampled=sampled)


def canonicalize(p: FinitePoset, cert: CablCertificate) -> Morphism:
    """
    The order isomorphism ``a ↦ A_a`` onto the powerset of the atoms.

    The target is :func:`powerset_poset` over the atom labels (with the empty
    set when the certificate has a bottom). Both directions of order
    preservation are verified.
    """
    with_empty = cert.bottom is not None
    atom_universe = Universe(tuple(p.carrier.label(a) for a in cert.atoms))
    target = powerset_poset(atom_universe, with_empty=with_empty)
    offset = 0 if with_empty else 1
    h = Morphism(p.carrier, target.carrier, tuple(m - offset for m in cert.atom_sets))
    if not h.is_bijective():
        raise CablConditionError(Verdict.failed("canonicalize", "bijection", {}, "atom sets are not a bijection"))
    for a in range(p.size):
        for b in range(p.size):
            if p.le(a, b) != (cert.atom_sets[a] & ~cert.atom_sets[b] == 0):
                raise CablConditionError(Verdict.failed(
                    "canonicalize", "order", {"pair": [p.carrier.label(a), p.carrier.label(b)]},
                    "order is not inclusion of atom sets"))
    return h


# --- (Σ,≤)-algebras ---

@dataclass(frozen=True)
class OrderedAlgebra:
    """
    A (Σ,≤)-algebra: operation tables over a validated CABL.

    ``tables[name][args]`` is the carrier index of ``name(args)``. Build through
    :func:`validate_ordered_algebra` to have the atom-generation condition checked.
    """
    poset: FinitePoset
    certificate: CablCertificate
    signature: Signature
    tables: Mapping[str, Mapping[tuple[int, ...], int]]

    def __post_init__(self) -> None:
        n = self.poset.size
        extra = set(self.tables) - set(self.signature.names)
        if extra:
            raise StructureError(f"Tables for symbols outside the signature: {sorted(extra)}")
        for sym in self.signature:
            table = self.tables.get(sym.name)
            if table is None or len(table) != n ** sym.arity:
                raise StructureError(f"Table for {sym.name!r} is not total")
            for args, value in table.items():
                if len(args) != sym.arity or any(not 0 <= a < n for a in args) or not 0 <= value < n:
                    raise StructureError(f"Bad entry {sym.name}{args!r} -> {value!r}")

    @property
    def carrier(self) -> Universe:
        return self.poset.carrier

    @property
    def size(self) -> int:
        return self.poset.size

    def apply(self, symbol: str, args: tuple[int, ...]) -> int:
        return self.tables[symbol][args]

    def entries(self):
        for sym in self.signature:
            table = self.tables[sym.name]
            for args in sorted(table):
                yield sym.name, args, table[args]

    def atom_generated(self, symbol: str, args: tuple[int, ...]) -> Optional[int]:
        """``sup{σ(c⃗) : c_i ∈ A_{a_i}}`` through the certificate."""
        cert = self.certificate
        table = self.tables[symbol]
        union = 0
        for choice in itertools.product(*(cert.atoms_below(a) for a in args)):
            union |= cert.atom_sets[table[choice]]
        return cert.element(union)


def validate_ordered_algebra(poset: FinitePoset, cert: CablCertificate, signature: Signature,
                             tables: Mapping[str, Mapping[tuple[int, ...], int]],
                             caps: Optional[Caps] = None) -> OrderedAlgebra:
    """
    Check that every operation is the supremum of its values on atom tuples.

    Raises:
        AtomGenerationError: with the first failing ``(σ, tuple)``.
        StructureError: If a table is not total.
    """
    alg = OrderedAlgebra(poset, cert, signature, tables)
    lab = poset.carrier.labels
    checked = 0
    for sym in signature:
        for args in tuples(poset.size, sym.arity, caps):
            checked += 1
            expected = alg.atom_generated(sym.name, args)
            actual = alg.tables[sym.name][args]
            if expected != actual:
                raise AtomGenerationError(Verdict.failed(
                    "ordered algebra", "atom generation",
                    {"symbol": sym.name, "args": [lab[a] for a in args], "value": lab[actual],
                     "expected": lab[expected] if expected is not None else None},
                    detail=f"{sym.name}{poset.carrier.format_tuple(args)}", checked=checked))
    return alg


def check_monotone(alg: OrderedAlgebra, caps: Optional[Caps] = None) -> Verdict:
    """``a_i ≤ b_i`` for all ``i`` implies ``σ(a⃗) ≤ σ(b⃗)``, over all comparable tuple pairs."""
    p = alg.poset
    checked = 0
    for sym in alg.signature:
        table = alg.tables[sym.name]
        for args in tuples(p.size, sym.arity, caps):
            lower = table[args]
            for bigger in itertools.product(*(tuple(iter_bits(p.up[a])) for a in args)):
                checked += 1
                if not p.le(lower, table[bigger]):
                    return Verdict.failed("monotone", "monotonicity", {
                        "symbol": sym.name,
                        "lower": [p.carrier.label(a) for a in args],
                        "upper": [p.carrier.label(b) for b in bigger],
                    }, checked=checked)
    return Verdict.passed("monotone", checked=checked)


def eval_term_ord(alg: OrderedAlgebra, term: Term, valuation: Valuation) -> int:
    """Deterministic bottom-up evaluation; returns a carrier index."""
    check_term_symbols(term, alg.signature)
    check_valuation(term, valuation, alg.size)

    def ev(t: Term) -> int:
        if isinstance(t, Var):
            return valuation[t.index]
        assert isinstance(t, App)
        return alg.tables[t.symbol][tuple(ev(arg) for arg in t.args)]

    return ev(term)


# --- (Σ,≤)-homomorphisms ---

def _require_ordered_compatible(h: Morphism, src: OrderedAlgebra, dst: OrderedAlgebra) -> None:
    if src.signature != dst.signature:
        raise SignatureMismatchError(f"Signatures differ: [{src.signature}] vs [{dst.signature}]")
    if h.source != src.carrier or h.target != dst.carrier:
        raise StructureError("Morphism universes do not match the ordered algebras")


def _check_continuity(h: Morphism, src: OrderedAlgebra, dst: OrderedAlgebra,
                      caps: Caps, check: str) -> Verdict:
    """``h(sup A') = sup h[A']`` for every non-empty ``A'`` (and ``∅`` with bottoms)."""
    sc, dc = src.certificate, dst.certificate
    if sc.bottom is not None and dc.bottom is not None and h(sc.bottom) != dc.bottom:
        return Verdict.failed(check, "continuity", {"subset": "{}", "h(sup)": dst.carrier.label(h(sc.bottom)),
                                                    "sup(h)": dst.carrier.label(dc.bottom)})
    n = src.size
    mapping = h.mapping

    def compare(mask: int, src_atoms: int, img_atoms: int) -> Optional[Verdict]:
        lhs = dc.atom_sets[mapping[sc.element(src_atoms)]]
        if lhs != img_atoms:
            rhs = dc.element(img_atoms)
            return Verdict.failed(check, "continuity", {
                "subset": src.carrier.format_mask(mask),
                "h(sup)": dst.carrier.label(mapping[sc.element(src_atoms)]),
                "sup(h)": dst.carrier.label(rhs) if rhs is not None else None,
            })
        return None

    if n <= caps.literal_subset_cap:
        src_atoms = [0] * (1 << n)
        img_atoms = [0] * (1 << n)
        for mask in range(1, 1 << n):
            low = mask & -mask
            a = low.bit_length() - 1
            rest = mask ^ low
            src_atoms[mask] = src_atoms[rest] | sc.atom_sets[a]
            img_atoms[mask] = img_atoms[rest] | dc.atom_sets[mapping[a]]
            failure = compare(mask, src_atoms[mask], img_atoms[mask])
            if failure is not None:
                return failure
        return Verdict.passed(check, checked=(1 << n) - 1)

    rng = random.Random(caps.seed)
    probes = [1 << a | 1 << b for a, b in itertools.combinations(range(n), 2)]
    probes += [rng.getrandbits(n) or 1 for _ in range(caps.sample_size)]
    for mask in probes:
        sa = ia = 0
        for a in iter_bits(mask):
            sa |= sc.atom_sets[a]
            ia |= dc.atom_sets[mapping[a]]
        failure = compare(mask, sa, ia)
        if failure is not None:
            return failure
    logger.debug("continuity of %s sampled on %d subsets of %d elements", check, len(probes), n)
    return Verdict.passed(check, checked=len(probes), exhaustive=False)


def check_ordered_hom(h: Morphism, src: OrderedAlgebra, dst: OrderedAlgebra,
                      require_atoms: bool = True, caps: Optional[Caps] = None) -> Verdict:
    """
    (Σ,≤)-homomorphism check.

    Clauses, in evaluation order: atoms map to atoms (skipped when
    *require_atoms* is False, the relaxation used for set-valued
    homomorphisms); ``h(σ(a⃗)) ≤ σ(h(a⃗))`` for every symbol and tuple;
    continuity on non-empty subsets (sampled beyond ``caps.literal_subset_cap``).
    """
    caps = caps or DEFAULT_CAPS
    _require_ordered_compatible(h, src, dst)
    check = "ordered hom" if require_atoms else "ordered hom (atoms relaxed)"
    lab_s, lab_d = src.carrier.labels, dst.carrier.labels

    if require_atoms:
        for x in src.certificate.atoms:
            if not dst.certificate.is_atom(h(x)):
                return Verdict.failed(check, "atoms", {"atom": lab_s[x], "image": lab_d[h(x)]},
                                      detail=f"h({lab_s[x]}) = {lab_d[h(x)]} is not an atom")

    checked = 0
    for symbol, args, value in src.entries():
        checked += 1
        lhs = h(value)
        rhs = dst.tables[symbol][tuple(h(a) for a in args)]
        if not dst.poset.le(lhs, rhs):
            return Verdict.failed(check, "homomorphism", {
                "symbol": symbol, "args": [lab_s[a] for a in args],
                "h(value)": lab_d[lhs], "target": lab_d[rhs],
            }, detail=f"{symbol}{src.carrier.format_tuple(args)}", checked=checked)

    continuity = _check_continuity(h, src, dst, caps, check)
    if not continuity.ok:
        return continuity
    return Verdict.passed(check, checked=checked + continuity.checked, exhaustive=continuity.exhaustive)


def check_ordered_iso(h: Morphism, src: OrderedAlgebra, dst: OrderedAlgebra,
                      caps: Optional[Caps] = None) -> Verdict:
    """Bijective (Σ,≤)-homomorphism whose inverse is a (Σ,≤)-homomorphism."""
    _require_ordered_compatible(h, src, dst)
    if not h.is_bijective():
        return Verdict.failed("ordered iso", "not bijective", {"map": h.as_labels()})
    forward = check_ordered_hom(h, src, dst, caps=caps)
    if not forward.ok:
        return Verdict.failed("ordered iso", f"forward {forward.clause}", forward.witness, forward.detail)
    backward = check_ordered_hom(h.inverse(), dst, src, caps=caps)
    if not backward.ok:
        return Verdict.failed("ordered iso", f"inverse {backward.clause}", backward.witness, backward.detail)
    return Verdict.passed("ordered iso", checked=forward.checked + backward.checked,
                          exhaustive=forward.exhaustive and backward.exhaustive)


# --- Lemma checkers ---

def _subset_masks(n: int, caps: Caps) -> range:
    if n > caps.literal_subset_cap:
        raise CapExceededError("subset exhaustion (carrier)", n, caps.literal_subset_cap)
    return range(1, 1 << n)


def check_lower_bound_sup(p: FinitePoset) -> Verdict:
    """For all pairs: the supremum of the common lower bounds, if any, is a lower bound."""
    checked = 0
    for a in range(p.size):
        for b in range(a, p.size):
            lower = p.lower_bounds(1 << a | 1 << b)
            if not lower:
                continue
            s = p.sup_mask(lower)
            checked += 1
            if s is not None and not (p.le(s, a) and p.le(s, b)):
                return Verdict.failed("lower-bound sup", "lemma", {
                    "pair": [p.carrier.label(a), p.carrier.label(b)], "sup": p.carrier.label(s)})
    return Verdict.passed("lower-bound sup", checked=checked)


def _incremental_sups(p: FinitePoset, n: int) -> list[Optional[int]]:
    """``sups[mask]`` for every mask, built from pairwise suprema."""
    join = p.pairwise_sup
    sups: list[Optional[int]] = [None] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        a = low.bit_length() - 1
        rest = sups[mask ^ low]
        sups[mask] = a if rest is None else join[rest][a]
    return sups


def check_meet_distributivity(p: FinitePoset, caps: Optional[Caps] = None) -> Verdict:
    """
    For every element ``a`` and non-empty ``S``, with ``S^a`` the members whose
    infimum with ``a`` exists: ``S^a`` empty implies ``inf{a, sup S}`` does not
    exist; otherwise ``sup{inf{a,s} : s ∈ S^a} = inf{a, sup S}``.

    Uses the order relation only; expects a validated CABL.
    """
    caps = caps or DEFAULT_CAPS
    n = p.size
    masks = _subset_masks(n, caps)
    join, meet = p.pairwise_sup, p.pairwise_inf
    sups = _incremental_sups(p, n)
    checked = 0
    for a in range(n):
        partial: list[Optional[int]] = [None] * (1 << n)
        for mask in masks:
            low = mask & -mask
            s = low.bit_length() - 1
            prev = partial[mask ^ low]
            m = meet[a][s]
            partial[mask] = prev if m is None else (m if prev is None else join[prev][m])
            total = sups[mask]
            rhs = meet[a][total] if total is not None else None
            checked += 1
            if partial[mask] != rhs:
                lab = p.carrier.labels
                return Verdict.failed("meet distributivity", "lemma", {
                    "element": lab[a], "subset": p.carrier.format_mask(mask),
                    "sup_of_meets": lab[partial[mask]] if partial[mask] is not None else None,
                    "meet_of_sup": lab[rhs] if rhs is not None else None,
                }, checked=checked)
    return Verdict.passed("meet distributivity", checked=checked)


def check_sup_of_sups(p: FinitePoset, trials: int = 200, family_size: int = 4,
                      seed: int = 0) -> Verdict:
    """Randomized families ``{X_i}``: ``sup{sup X_i} = sup ⋃X_i``."""
    rng = random.Random(seed)
    n = p.size
    for trial in range(trials):
        family = [rng.getrandbits(n) or 1 for _ in range(rng.randint(1, family_size))]
        inner = [p.sup_mask(x) for x in family]
        if any(x is None for x in inner):
            continue
        lhs = p.sup_mask(sum(1 << x for x in set(inner)))
        union = 0
        for x in family:
            union |= x
        rhs = p.sup_mask(union)
        if lhs != rhs:
            return Verdict.failed("sup of sups", "lemma", {
                "family": [p.carrier.format_mask(x) for x in family]}, checked=trial + 1)
    return Verdict.passed("sup of sups", checked=trials, exhaustive=False)


def check_atoms_of_sup(p: FinitePoset, caps: Optional[Caps] = None) -> Verdict:
    """``⋃{A_c : c ∈ C} = A_{sup C}`` for every non-empty ``C``."""
    caps = caps or DEFAULT_CAPS
    n = p.size
    masks = _subset_masks(n, caps)
    atoms = p.minimal()
    sups = _incremental_sups(p, n)
    union = [0] * (1 << n)
    for mask in masks:
        low = mask & -mask
        union[mask] = union[mask ^ low] | (p.down[low.bit_length() - 1] & atoms)
        s = sups[mask]
        if s is None or p.down[s] & atoms != union[mask]:
            return Verdict.failed("atoms of sup", "lemma", {"subset": p.carrier.format_mask(mask)})
    return Verdict.passed("atoms of sup", checked=len(masks))


def check_atoms_of_operations(alg: OrderedAlgebra, caps: Optional[Caps] = None) -> Verdict:
    """``A_{σ(a⃗)} = ⋃{A_{σ(c⃗)} : c_i ∈ A_{a_i}}``, with atoms read off the order."""
    p = alg.poset
    atoms = p.minimal()
    checked = 0
    for sym in alg.signature:
        table = alg.tables[sym.name]
        for args in tuples(p.size, sym.arity, caps):
            below = [tuple(iter_bits(p.down[a] & atoms)) for a in args]
            union = 0
            for choice in itertools.product(*below):
                union |= p.down[table[choice]] & atoms
            checked += 1
            if p.down[table[args]] & atoms != union:
                return Verdict.failed("atoms of operations", "lemma", {
                    "symbol": sym.name, "args": [p.carrier.label(a) for a in args]}, checked=checked)
    return Verdict.passed("atoms of operations", checked=checked)


def lemma_suite(p: FinitePoset, alg: Optional[OrderedAlgebra] = None,
                caps: Optional[Caps] = None) -> list[Verdict]:
    """Run every lemma checker that applies to *p* (and *alg*)."""
    caps = caps or DEFAULT_CAPS
    verdicts = [check_lower_bound_sup(p), check_sup_of_sups(p, seed=caps.seed)]
    if p.size <= caps.literal_subset_cap:
        verdicts += [check_meet_distributivity(p, caps), check_atoms_of_sup(p, caps)]
    if alg is not None:
        verdicts += [check_atoms_of_operations(alg, caps), check_monotone(alg, caps)]
    return verdicts


def popcount_sizes(cert: CablCertificate) -> list[int]:
    """Number of atoms below each element, in carrier order."""
    return [popcount(m) for m in cert.atom_sets]
