"""Planning-based prover for elementary commutative-ring identities."""

__version__ = "0.1.0"
