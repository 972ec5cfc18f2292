"""Kodaira types of rational elliptic curves at p >= 5: exact local densities and height-ordered censuses."""
from .core import CensusWindow, WeierstrassPair, height, make_curve, singular_locus, valuation
from .kodaira import KodairaType, LocalReduction, bad_primes_ge5, classify, conductor_star, twist_by_p

__version__ = "0.1.0"

__all__ = [
    "CensusWindow",
    "KodairaType",
    "LocalReduction",
    "WeierstrassPair",
    "bad_primes_ge5",
    "classify",
    "conductor_star",
    "height",
    "make_curve",
    "singular_locus",
    "twist_by_p",
    "valuation",
]
