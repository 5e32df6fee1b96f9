"""Unit tests for the malg.multialg module."""

import pytest
from hypothesis import given, settings

from malg.config import Caps
from malg.core import App, Signature, Universe, Var, parse_term
from malg.errors import CapExceededError, SignatureMismatchError, StructureError, UnboundVariableError
from malg.multialg import (
    Morphism,
    MultiAlgebra,
    accumulate,
    all_bijections,
    all_maps,
    check_full_hom,
    check_hom,
    check_iso,
    enumerate_homs,
    eval_term_nd,
    is_isomorphic,
)
from tests.conftest import UNARY
from tests.strategies import multialgebras


class TestMultiAlgebra:
    """Tests for MultiAlgebra construction."""

    def test_from_labels(self, cx_a):
        """Label-level tables become masks."""
        assert cx_a.size == 2
        assert cx_a.mask("s", (0,)) == 0b10
        assert cx_a.value("s", (1,)).members() == (1,)

    def test_empty_value_forbidden(self):
        """The empty set is not an admissible value."""
        with pytest.raises(StructureError, match=r"empty value forbidden: s\(0\)"):
            MultiAlgebra(UNARY, Universe.of_size(2), {"s": {(0,): 0, (1,): 1}})

    def test_missing_table(self):
        with pytest.raises(StructureError, match="Missing table"):
            MultiAlgebra(UNARY, Universe.of_size(2), {})

    def test_partial_table(self):
        with pytest.raises(StructureError, match="1 entries, expected 2"):
            MultiAlgebra(UNARY, Universe.of_size(2), {"s": {(0,): 1}})

    def test_value_outside_universe(self):
        with pytest.raises(StructureError, match="leaves the universe"):
            MultiAlgebra(UNARY, Universe.of_size(2), {"s": {(0,): 4, (1,): 1}})

    def test_extra_symbol(self):
        with pytest.raises(StructureError, match="outside the signature"):
            MultiAlgebra(UNARY, Universe.of_size(1), {"s": {(0,): 1}, "g": {(0,): 1}})

    def test_from_function(self):
        """Tabulating a function covers every tuple."""
        sig = Signature.of(("f", 2))
        m = MultiAlgebra.from_function(sig, Universe.of_size(2), lambda name, args: [max(args)])
        assert m.mask("f", (0, 1)) == 0b10
        assert m.mask("f", (0, 0)) == 0b01

    def test_entries_order(self, nmatrix):
        """Entries follow signature order, then lexicographic tuples."""
        entries = list(nmatrix.entries())
        assert [e[0] for e in entries] == ["neg"] * 3 + ["or"] * 9
        assert entries[3][1] == (0, 0)


class TestMorphism:
    """Tests for Morphism."""

    def test_compose_and_inverse(self):
        u = Universe.of_size(3)
        h = Morphism(u, u, (1, 2, 0))
        assert h.compose(h).mapping == (2, 0, 1)
        assert h.inverse().compose(h) == Morphism.identity(u)

    def test_non_bijection_has_no_inverse(self):
        u = Universe.of_size(2)
        with pytest.raises(StructureError):
            Morphism(u, u, (0, 0)).inverse()

    def test_image(self):
        u = Universe.of_size(3)
        assert Morphism(u, u, (2, 2, 0)).image(0b011) == 0b100

    def test_from_labels_not_total(self):
        u = Universe(("a", "b"))
        with pytest.raises(StructureError, match="unmapped: b"):
            Morphism.from_labels(u, u, {"a": "b"})

    def test_value_out_of_range(self):
        with pytest.raises(StructureError):
            Morphism(Universe.of_size(1), Universe.of_size(1), (1,))


class TestHomChecks:
    """Tests for the homomorphism checkers."""

    def test_every_map_into_b_is_a_hom(self, cx_a, cx_b):
        """B answers {0,1} everywhere, so every map A -> B is a homomorphism."""
        assert all(check_hom(h, cx_a, cx_b).ok for h in all_maps(cx_a.universe, cx_b.universe))

    def test_no_full_hom_into_b(self, cx_a, cx_b):
        """Images of singletons never equal {0,1}."""
        assert enumerate_homs(cx_a, cx_b, "full") == []

    def test_hom_failure_witness(self, cx_a, cx_b):
        """A -> B -> A fails at the first tuple with a named witness."""
        v = check_hom(Morphism.identity(cx_b.universe), cx_b, cx_a)
        assert not v.ok
        assert v.clause == "image not included in target"
        assert v.witness == {"symbol": "s", "args": ["0"], "image": "{0,1}", "target": "{1}"}

    def test_swap_endomorphisms(self, swap):
        """The swap structure has exactly two endomorphisms, both isomorphisms."""
        homs = enumerate_homs(swap, swap)
        assert [h.mapping for h in homs] == [(0, 1), (1, 0)]
        assert all(check_iso(h, swap, swap).ok for h in homs)

    def test_iso_needs_bijection(self, swap):
        v = check_iso(Morphism(swap.universe, swap.universe, (0, 0)), swap, swap)
        assert v.clause == "not bijective"

    def test_full_hom(self, swap):
        assert check_full_hom(Morphism(swap.universe, swap.universe, (1, 0)), swap, swap).ok

    def test_signature_mismatch(self, cx_a, nmatrix):
        h = Morphism(cx_a.universe, nmatrix.universe, (0, 0))
        with pytest.raises(SignatureMismatchError):
            check_hom(h, cx_a, nmatrix)

    def test_invalid_mode(self, cx_a):
        with pytest.raises(ValueError, match="Invalid mode"):
            enumerate_homs(cx_a, cx_a, "nope")

    def test_map_cap(self, nmatrix):
        """27 candidate maps against a cap of 26."""
        with pytest.raises(CapExceededError):
            enumerate_homs(nmatrix, nmatrix, caps=Caps(map_cap=26))

    def test_bijection_counts(self):
        u = Universe.of_size(3)
        assert len(list(all_bijections(u, u))) == 6
        assert list(all_bijections(u, Universe.of_size(2))) == []

    @settings(max_examples=40, deadline=None)
    @given(multialgebras(max_size=3))
    def test_identity_is_iso(self, m):
        """The identity is an isomorphism of every multialgebra."""
        assert check_iso(Morphism.identity(m.universe), m, m).ok


class TestIsIsomorphic:
    """Tests for is_isomorphic."""

    def test_counterexample_pair(self, cx_a, cx_b):
        assert is_isomorphic(cx_a, cx_b) == (False, None)

    def test_relabelled_copy(self, swap):
        """A structure is isomorphic to itself through a witness."""
        found, witness = is_isomorphic(swap, swap)
        assert found
        assert check_iso(witness, swap, swap).ok

    @settings(max_examples=30, deadline=None)
    @given(multialgebras(min_size=2, max_size=3))
    def test_agrees_with_enumeration(self, m):
        """Search agrees with brute-force isomorphism enumeration."""
        found, _ = is_isomorphic(m, m)
        assert found == bool(enumerate_homs(m, m, "iso"))


class TestEvalTermNd:
    """Tests for non-deterministic term evaluation."""

    def test_accumulate(self, nmatrix):
        """Union over every choice of arguments."""
        assert accumulate(nmatrix.tables["neg"], (0b011,)) == 0b110

    def test_double_negation(self, nmatrix):
        """neg(neg(x)) is {f} at f and everything at i."""
        term, _ = parse_term("neg(neg(x))", nmatrix.signature)
        assert eval_term_nd(nmatrix, term, {0: 0}).members() == (0,)
        assert eval_term_nd(nmatrix, term, {0: 1}).members() == (0, 1, 2)

    def test_variable_is_singleton(self, nmatrix):
        assert eval_term_nd(nmatrix, Var(0), {0: 2}).members() == (2,)

    def test_unbound_variable(self, nmatrix):
        term, _ = parse_term("or(x,y)", nmatrix.signature)
        with pytest.raises(UnboundVariableError):
            eval_term_nd(nmatrix, term, {0: 0})

    def test_valuation_outside_universe(self, nmatrix):
        with pytest.raises(StructureError):
            eval_term_nd(nmatrix, Var(0), {0: 3})

    def test_symbol_outside_signature(self, nmatrix):
        """A term built against another signature is a structure error."""
        term = App("neg", (App("and", (Var(0), Var(0))),))
        with pytest.raises(StructureError, match="outside the signature"):
            eval_term_nd(nmatrix, term, {0: 0})

    def test_wrong_arity(self, nmatrix):
        with pytest.raises(StructureError, match="arity"):
            eval_term_nd(nmatrix, App("or", (Var(0),)), {0: 0})
