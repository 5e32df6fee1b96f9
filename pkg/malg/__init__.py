"""malg — finite multialgebras, ordered algebras and the functors between them."""

__version__ = "0.4.0"
