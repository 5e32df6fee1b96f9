"""Unit tests for the malg.variants module."""

import pytest

from malg.core import Signature, Universe
from malg.errors import StructureError
from malg.functors import apply_P
from malg.multialg import Morphism, MultiAlgebra, all_maps, check_hom
from malg.variants import (
    PartialMultiAlgebra,
    SetValuedMorphism,
    apply_P_partial,
    bare_powerset,
    check_empty_signature_hom_count,
    check_mm_hom,
    check_partial_conservativity,
    check_partial_hom,
    empty_signature_mode,
    enumerate_continuous_maps,
    restrict_to_nonempty,
)

CHOICE = Signature.of(("c", 1))


@pytest.fixture
def partial_choice():
    """c(0) is undefined, c(1) = {0,1}."""
    return PartialMultiAlgebra(CHOICE, Universe.of_size(2), {"c": {(0,): 0, (1,): 0b11}})


class TestPartial:
    """Tests for partial multialgebras and their P."""

    def test_empty_values_allowed(self, partial_choice):
        assert partial_choice.mask("c", (0,)) == 0
        with pytest.raises(StructureError, match="empty value forbidden"):
            MultiAlgebra(CHOICE, Universe.of_size(2), {"c": {(0,): 0, (1,): 0b11}})

    def test_P_keeps_the_empty_set(self, partial_choice):
        """Carrier index equals the mask; undefined stays at the bottom."""
        p = apply_P_partial(partial_choice)
        assert p.carrier.labels == ("{}", "{0}", "{1}", "{0,1}")
        assert p.tables["c"] == {(0,): 0, (1,): 0, (2,): 3, (3,): 3}
        assert p.certificate.bottom == 0

    def test_restrict_to_nonempty(self, partial_choice, cx_a):
        """Bottom values come out as -1; on total structures this is P."""
        assert restrict_to_nonempty(apply_P_partial(partial_choice))["c"] == {(0,): -1, (1,): 2, (2,): 2}
        assert restrict_to_nonempty(apply_P_partial(cx_a)) == apply_P(cx_a).tables

    def test_partial_hom(self, partial_choice):
        """Tuples with undefined values impose nothing."""
        homs = [h for h in all_maps(partial_choice.universe, partial_choice.universe)
                if check_partial_hom(h, partial_choice, partial_choice).ok]
        assert [h.mapping for h in homs] == [(0, 1), (1, 1)]

    def test_conservativity(self, cx_a, cx_b):
        verdicts = check_partial_conservativity(cx_a, cx_b)
        assert len(verdicts) == 4
        assert all(v.ok for v in verdicts)


class TestSetValuedMorphism:
    """Tests for MM-homomorphisms."""

    def test_from_labels(self):
        u = Universe(("0", "1"))
        h = SetValuedMorphism.from_labels(u, u, {"0": ["0", "1"], "1": ["1"]})
        assert h.images == (0b11, 0b10)
        assert h.image(0b11) == 0b11
        assert not h.is_singleton_valued()
        assert h.as_labels() == {"0": "{0,1}", "1": "{1}"}

    def test_empty_image(self):
        u = Universe.of_size(2)
        with pytest.raises(StructureError, match="empty"):
            SetValuedMorphism(u, u, (0, 1))

    def test_collapse(self):
        u = Universe.of_size(2)
        h = Morphism(u, u, (1, 0))
        assert SetValuedMorphism.from_morphism(h).collapse() == h
        with pytest.raises(StructureError):
            SetValuedMorphism(u, u, (3, 1)).collapse()

    def test_saturating_map_into_b(self, cx_a, cx_b):
        """Sending everything to {0,1} is an MM-hom A -> B but not B -> A."""
        into_b = SetValuedMorphism(cx_a.universe, cx_b.universe, (0b11, 0b11))
        assert check_mm_hom(into_b, cx_a, cx_b).ok
        v = check_mm_hom(into_b, cx_b, cx_a)
        assert v.clause == "image not included in target"
        assert v.witness == {"symbol": "s", "args": ["0"], "image": "{0,1}", "target": "{1}"}

    def test_singletons_agree_with_hom(self, cx_a, cx_b):
        for h in all_maps(cx_b.universe, cx_a.universe):
            assert check_mm_hom(SetValuedMorphism.from_morphism(h), cx_b, cx_a).ok == check_hom(h, cx_b, cx_a).ok


class TestEmptySignature:
    """Tests for bare powersets."""

    def test_bare_powerset(self):
        p = bare_powerset(2)
        assert p.size == 3
        assert p.tables == {}

    def test_continuous_maps(self):
        """Atom maps extend uniquely, so P*(2) has four endomorphisms."""
        maps = enumerate_continuous_maps(bare_powerset(2), bare_powerset(2))
        assert [h.mapping for h in maps] == [(0, 0, 0), (0, 1, 2), (1, 0, 2), (1, 1, 1)]

    @pytest.mark.parametrize("k,j", [(1, 1), (1, 3), (2, 2), (2, 3), (3, 2)])
    def test_hom_count(self, k, j):
        v = check_empty_signature_hom_count(k, j)
        assert v.ok
        assert v.checked == j ** k

    def test_mode(self):
        m = MultiAlgebra(Signature(), Universe.of_size(2), {})
        verdicts = empty_signature_mode(m)
        assert [v.check for v in verdicts] == [
            "empty signature", "cabl", "operation clause vacuous", "empty signature hom count"]
        assert all(v.ok for v in verdicts)

    def test_mode_needs_empty_signature(self, cx_a):
        with pytest.raises(StructureError, match="empty signature"):
            empty_signature_mode(cx_a)
