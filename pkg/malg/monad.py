#!/usr/bin/env python3
"""
malg — The endofunctor P̃ with its unit η and multiplication ε.

``P̃𝒜`` has the non-empty subsets of ``A`` as universe (carrier index
``mask - 1``, as for ``ℙ``) and returns, for each tuple of subsets, the set of
singletons of the accumulated result. Iterating gives a tower whose level
``k + 1`` indexes subsets of level ``k``; level sizes follow
``|P̃^{k+1}| = 2**|P̃^k| - 1``, so the tower is only built while the carrier
stays within ``caps.tilde_carrier_cap``.
"""

from __future__ import annotations

import logging
import random
from typing import Optional

from malg.config import DEFAULT_CAPS, Caps
from malg.core import Verdict, iter_bits
from malg.errors import CapExceededError, ContractViolationError
from malg.functors import image_map, powerset_universe, subset_tables
from malg.multialg import Morphism, MultiAlgebra, check_hom

logger = logging.getLogger(__name__)

MAX_DEPTH = 3


def _singletons_of(mask: int) -> int:
    """Mask over carrier indices of the singletons ``{a}``, ``a ∈ mask``."""
    out = 0
    for a in iter_bits(mask):
        out |= 1 << ((1 << a) - 1)
    return out


def _flatten(members: int) -> int:
    """Carrier index of the union of the level members listed in *members*."""
    union = 0
    for i in iter_bits(members):
        union |= i + 1
    return union - 1


def _require_carrier(size: int, caps: Caps) -> int:
    carrier = (1 << size) - 1
    if carrier > caps.tilde_carrier_cap:
        raise CapExceededError(f"P-tilde carrier over {size} elements", carrier, caps.tilde_carrier_cap)
    return carrier


def apply_Ptilde(m: MultiAlgebra, caps: Optional[Caps] = None) -> MultiAlgebra:
    """
    ``σ(A₁,…,Aₙ) = {{a} : a ∈ ⋃{σ(a₁,…,aₙ) : aᵢ ∈ Aᵢ}}``.

    Raises:
        CapExceededError: If ``2**|A| - 1`` exceeds ``caps.tilde_carrier_cap``.
    """
    caps = caps or DEFAULT_CAPS
    _require_carrier(m.size, caps)
    tables = {name: {idx: _singletons_of(mask) for idx, mask in values.items()}
              for name, values in subset_tables(m, caps).items()}
    return MultiAlgebra(m.signature, powerset_universe(m.universe), tables)


class TildeTower:
    """Memoized levels ``P̃⁰m = m, P̃¹m, …, P̃³m``."""

    def __init__(self, base: MultiAlgebra, caps: Optional[Caps] = None):
        self.base = base
        self.caps = caps or DEFAULT_CAPS
        self._levels: list[MultiAlgebra] = [base]

    def level(self, depth: int) -> MultiAlgebra:
        if not 0 <= depth <= MAX_DEPTH:
            raise ValueError(f"Invalid depth: {depth}. Must be between 0 and {MAX_DEPTH}")
        while len(self._levels) <= depth:
            below = self._levels[-1]
            logger.debug("building P-tilde level %d over %d elements", len(self._levels), below.size)
            self._levels.append(apply_Ptilde(below, self.caps))
        return self._levels[depth]

    def sizes(self) -> list[int]:
        """Carrier sizes of the levels built so far."""
        return [level.size for level in self._levels]


def tilde_level(m: MultiAlgebra, depth: int, caps: Optional[Caps] = None) -> MultiAlgebra:
    return TildeTower(m, caps).level(depth)


def eta(m: MultiAlgebra, caps: Optional[Caps] = None) -> Morphism:
    """``η(a) = {a}``."""
    caps = caps or DEFAULT_CAPS
    _require_carrier(m.size, caps)
    return Morphism(m.universe, powerset_universe(m.universe),
                    tuple((1 << a) - 1 for a in range(m.size)))


def epsilon(m: MultiAlgebra, caps: Optional[Caps] = None) -> Morphism:
    """``ε({A_i}) = ⋃A_i``, from ``P̃²m`` to ``P̃m``."""
    caps = caps or DEFAULT_CAPS
    first = _require_carrier(m.size, caps)
    _require_carrier(first, caps)
    level1 = powerset_universe(m.universe)
    level2 = powerset_universe(level1)
    return Morphism(level2, level1, tuple(_flatten(members) for members in range(1, 1 << first)))


def Ptilde_mor(h: Morphism, src: MultiAlgebra, dst: MultiAlgebra) -> Morphism:
    """``P̃h(A′) = {h(a) : a ∈ A′}``."""
    verdict = check_hom(h, src, dst)
    if not verdict.ok:
        raise ContractViolationError("P-tilde(h) needs a multialgebra homomorphism", verdict)
    return image_map(h, src.universe, dst.universe)


def check_transformations(m: MultiAlgebra, caps: Optional[Caps] = None) -> list[Verdict]:
    """``η_m`` and ``ε_m`` are multialgebra homomorphisms."""
    tower = TildeTower(m, caps)
    return [
        check_hom(eta(m, caps), m, tower.level(1)),
        check_hom(epsilon(m, caps), tower.level(2), tower.level(1)),
    ]


def check_naturality_eta_eps(h: Morphism, src: MultiAlgebra, dst: MultiAlgebra,
                             caps: Optional[Caps] = None) -> Verdict:
    """``P̃h∘η = η∘h`` on ``src`` and ``P̃h∘ε = ε∘P̃P̃h`` on ``P̃²src``, pointwise."""
    caps = caps or DEFAULT_CAPS
    src_tower, dst_tower = TildeTower(src, caps), TildeTower(dst, caps)
    p_h = Ptilde_mor(h, src, dst)
    pp_h = Ptilde_mor(p_h, src_tower.level(1), dst_tower.level(1))

    left, right = p_h.compose(eta(src, caps)), eta(dst, caps).compose(h)
    for a in range(src.size):
        if left(a) != right(a):
            return Verdict.failed("eta/epsilon naturality", "eta", {
                "element": src.universe.label(a),
                "upper": p_h.target.label(left(a)), "lower": p_h.target.label(right(a))})
    checked = src.size

    left, right = p_h.compose(epsilon(src, caps)), epsilon(dst, caps).compose(pp_h)
    for x in range(left.source.size):
        checked += 1
        if left(x) != right(x):
            return Verdict.failed("eta/epsilon naturality", "epsilon", {
                "element": left.source.label(x),
                "upper": p_h.target.label(left(x)), "lower": p_h.target.label(right(x))}, checked=checked)
    return Verdict.passed("eta/epsilon naturality", checked=checked)


def check_monad_laws(m: MultiAlgebra, caps: Optional[Caps] = None) -> Verdict:
    """
    Associativity ``ε∘P̃ε = ε∘ε_{P̃}`` on ``P̃³m`` and the unit laws
    ``ε∘η_{P̃} = ε∘P̃η = id`` on ``P̃m``.

    Associativity is exhaustive when ``P̃³m`` fits ``caps.tilde_carrier_cap``
    (``|m| ≤ 2`` by default) and evaluated on ``caps.sample_size`` random points
    of ``P̃³m`` otherwise, without building that level.
    """
    caps = caps or DEFAULT_CAPS
    tower = TildeTower(m, caps)
    level1, level2 = tower.level(1), tower.level(2)
    eps = epsilon(m, caps)
    eta_up = eta(level1, caps)
    p_eta = Ptilde_mor(eta(m, caps), m, level1)
    checked = 0

    for x in range(level1.size):
        checked += 2
        if eps(eta_up(x)) != x:
            return Verdict.failed("monad laws", "left unit", {"element": level1.universe.label(x)}, checked=checked)
        if eps(p_eta(x)) != x:
            return Verdict.failed("monad laws", "right unit", {"element": level1.universe.label(x)}, checked=checked)

    exhaustive = (1 << level2.size) - 1 <= caps.tilde_carrier_cap
    if exhaustive:
        level3 = tower.level(3)
        p_eps = Ptilde_mor(eps, level2, level1)
        eps_over = epsilon(level1, caps)
        outer = eps.compose(p_eps)
        inner = eps.compose(eps_over)
        points = range(level3.size)

        def sides(x: int) -> tuple[int, int]:
            return outer(x), inner(x)
    else:
        rng = random.Random(caps.seed)
        points = [rng.getrandbits(level2.size) or 1 for _ in range(caps.sample_size)]

        def sides(x: int) -> tuple[int, int]:
            # x is a mask over level-2 indices: a point of level 3 not built here
            mapped = 0
            for j in iter_bits(x):
                mapped |= 1 << eps(j)
            return _flatten(mapped), eps(_flatten(x))

    for x in points:
        checked += 1
        lhs, rhs = sides(x)
        if lhs != rhs:
            where = level2.universe.format_mask(x) if not exhaustive else tower.level(3).universe.label(x)
            return Verdict.failed("monad laws", "associativity", {
                "element": where, "upper": level1.universe.label(lhs),
                "lower": level1.universe.label(rhs)}, checked=checked, exhaustive=exhaustive)
    if not exhaustive:
        logger.info("monad associativity sampled on %d points", len(points))
    return Verdict.passed("monad laws", checked=checked, exhaustive=exhaustive)
