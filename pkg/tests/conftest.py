"""Pytest fixtures for malg tests."""

from pathlib import Path

import pytest

from malg.core import Signature, Universe
from malg.functors import apply_P, counterexample_pair
from malg.multialg import MultiAlgebra

UNARY = Signature.of(("s", 1))
UNARY_BINARY = Signature.of(("s", 1), ("f", 2))


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Keep every test away from the user's real config file and env overrides."""
    monkeypatch.setattr("malg.config._config_path", lambda: tmp_path / "malg" / "config.json")
    monkeypatch.delenv("MALG_CAP", raising=False)
    monkeypatch.delenv("MALG_SEED", raising=False)


@pytest.fixture
def pair():
    """The two unary multialgebras with isomorphic plain powerset algebras."""
    return counterexample_pair()


@pytest.fixture
def cx_a(pair):
    return pair[0]


@pytest.fixture
def cx_b(pair):
    return pair[1]


@pytest.fixture
def swap():
    """s(0) = {1}, s(1) = {0}."""
    u = Universe(("0", "1"))
    return MultiAlgebra.from_labels(UNARY, u, {"s": {("0",): {"1"}, ("1",): {"0"}}})


@pytest.fixture
def nmatrix():
    """Three truth values with a non-deterministic negation and disjunction."""
    u = Universe(("f", "i", "t"))
    sig = Signature.of(("neg", 1), ("or", 2))
    values = {
        "neg": {("f",): {"t"}, ("i",): {"i", "t"}, ("t",): {"f"}},
        "or": {
            ("f", "f"): {"f"}, ("f", "i"): {"i", "t"}, ("f", "t"): {"t"},
            ("i", "f"): {"i", "t"}, ("i", "i"): {"i", "t"}, ("i", "t"): {"t"},
            ("t", "f"): {"t"}, ("t", "i"): {"t"}, ("t", "t"): {"t"},
        },
    }
    return MultiAlgebra.from_labels(sig, u, values)


@pytest.fixture
def p_cx_a(cx_a):
    return apply_P(cx_a)


@pytest.fixture
def write_file(tmp_path):
    """Write text to a file under tmp_path and return its path."""
    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write


@pytest.fixture
def project_root():
    """Return the project root directory."""
    return Path(__file__).parent.parent
