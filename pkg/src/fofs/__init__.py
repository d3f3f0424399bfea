"""First-order Fischer Servi modal logic: proofs, models and trace combinatorics."""
__version__ = "0.1.0"
