"""Proof-term calculi for multiplicative (exponential) linear logic with contra-substitution."""

__version__ = "0.1.0"
