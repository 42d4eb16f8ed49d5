"""Exact verification engine for tautological intersection numbers on C x C x Pic
and for the divisor-class computations built on them."""

from .exactnum import ExactRational, binomial, format_rational, vandermonde_v
from .tautring import RingSignature, TautClass, TautMonomial

__all__ = [
    "ExactRational",
    "RingSignature",
    "TautClass",
    "TautMonomial",
    "binomial",
    "format_rational",
    "vandermonde_v",
]
