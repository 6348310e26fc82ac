"""Exact verification toolkit for Onsager, q-Onsager and augmented q-Onsager algebras."""

__version__ = "0.1.0"
