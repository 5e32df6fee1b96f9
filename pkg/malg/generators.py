#!/usr/bin/env python3
"""
malg — Seeded random and exhaustive instance generators.

Every random generator takes a ``seed`` (or an existing ``random.Random``) and
draws in a fixed order, so the same seed always gives the same structure.
"""

from __future__ import annotations

import itertools
import logging
import random
from typing import Iterator, Optional, Union

import numpy as np

from malg.config import DEFAULT_CAPS, Caps
from malg.core import App, Signature, Term, Universe, Valuation, Var, tuples
from malg.errors import CapExceededError
from malg.functors import apply_P
from malg.multialg import Morphism, MultiAlgebra
from malg.ordalg import FinitePoset, OrderedAlgebra, validate_cabl, validate_ordered_algebra
from malg.variants import PartialMultiAlgebra

logger = logging.getLogger(__name__)

Seed = Union[int, random.Random]


def _rng(seed: Seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _universe(size: Union[int, Universe]) -> Universe:
    return size if isinstance(size, Universe) else Universe.of_size(size)


def random_multialgebra(seed: Seed, size: Union[int, Universe], signature: Signature,
                        caps: Optional[Caps] = None) -> MultiAlgebra:
    """Values drawn uniformly from the non-empty subsets."""
    rng = _rng(seed)
    universe = _universe(size)
    full = universe.full_mask
    return MultiAlgebra.from_function(
        signature, universe,
        lambda name, args: _indices(rng.randint(1, full)), caps)


def random_partial_multialgebra(seed: Seed, size: Union[int, Universe], signature: Signature,
                                caps: Optional[Caps] = None) -> PartialMultiAlgebra:
    """Values drawn uniformly from all subsets, the empty one included."""
    rng = _rng(seed)
    universe = _universe(size)
    full = universe.full_mask
    return PartialMultiAlgebra.from_function(
        signature, universe,
        lambda name, args: _indices(rng.randint(0, full)), caps)


def _indices(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def random_ordered_algebra(seed: Seed, atoms: int, signature: Signature, shuffle: bool = True,
                           caps: Optional[Caps] = None) -> OrderedAlgebra:
    """
    A validated ordered algebra with *atoms* atoms.

    Operations on atom tuples are drawn at random and extended to the whole
    carrier by suprema, which is ``ℙ`` of a random multialgebra. With
    *shuffle* the carrier is relabelled ``e0, e1, …`` in random order so the
    result is not presented as a powerset; it is then re-validated from its
    order alone.
    """
    rng = _rng(seed)
    base = apply_P(random_multialgebra(rng, atoms, signature, caps), caps)
    if not shuffle:
        return base
    perm = list(range(base.size))
    rng.shuffle(perm)
    return relabel(base, perm, caps)


def relabel(alg: OrderedAlgebra, perm: list[int], caps: Optional[Caps] = None) -> OrderedAlgebra:
    """Move element ``i`` of *alg* to position ``perm[i]`` under label ``e{perm[i]}``."""
    n = alg.size
    inverse = [0] * n
    for i, j in enumerate(perm):
        inverse[j] = i
    order = np.asarray(alg.poset.leq)[np.ix_(inverse, inverse)]
    poset = FinitePoset(Universe(tuple(f"e{j}" for j in range(n))), order)
    cert = validate_cabl(poset, caps)
    tables = {
        name: {tuple(perm[a] for a in args): perm[value] for args, value in table.items()}
        for name, table in alg.tables.items()
    }
    return validate_ordered_algebra(poset, cert, alg.signature, tables, caps)


def random_map(seed: Seed, source: Universe, target: Universe) -> Morphism:
    """A uniformly random total map; filter with a checker to get homomorphism attempts."""
    rng = _rng(seed)
    return Morphism(source, target, tuple(rng.randrange(target.size) for _ in range(source.size)))


def random_term(seed: Seed, signature: Signature, depth: int, variables: int = 2) -> Term:
    """
    A term of depth at most *depth* over ``x0 .. x{variables-1}``.

    Needs at least one symbol, or ``variables > 0``.
    """
    rng = _rng(seed)
    symbols = list(signature)
    leaves: list[Term] = [Var(i, f"x{i}") for i in range(variables)]
    leaves += [App(s.name) for s in symbols if s.arity == 0]
    compound = [s for s in symbols if s.arity > 0]
    if not leaves:
        raise ValueError("Cannot build a term without variables or constants")

    def build(d: int) -> Term:
        if d == 0 or not compound or rng.random() < 0.3:
            return rng.choice(leaves)
        sym = rng.choice(compound)
        return App(sym.name, tuple(build(d - 1) for _ in range(sym.arity)))

    return build(depth)


def random_valuation(seed: Seed, variables: int, size: int) -> Valuation:
    rng = _rng(seed)
    return {i: rng.randrange(size) for i in range(variables)}


def count_multialgebras(size: int, signature: Signature) -> int:
    """``(2**size - 1) ** (number of table cells)``."""
    cells = sum(size ** s.arity for s in signature)
    return ((1 << size) - 1) ** cells


def all_multialgebras(size: Union[int, Universe], signature: Signature,
                      caps: Optional[Caps] = None) -> Iterator[MultiAlgebra]:
    """
    Every multialgebra on a fixed universe, cells filled in signature and
    lexicographic tuple order.

    Raises:
        CapExceededError: If the count exceeds ``caps.map_cap``.
    """
    caps = caps or DEFAULT_CAPS
    universe = _universe(size)
    total = count_multialgebras(universe.size, signature)
    if total > caps.map_cap:
        raise CapExceededError("multialgebra enumeration", total, caps.map_cap)
    cells = [(s.name, args) for s in signature for args in tuples(universe, s.arity, caps)]
    logger.debug("enumerating %d multialgebras over %d cells", total, len(cells))
    for values in itertools.product(range(1, universe.full_mask + 1), repeat=len(cells)):
        tables: dict[str, dict[tuple[int, ...], int]] = {s.name: {} for s in signature}
        for (name, args), mask in zip(cells, values):
            tables[name][args] = mask
        yield MultiAlgebra(signature, universe, tables)
