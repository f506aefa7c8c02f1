"""Ramanujan primes and mechanical checks of explicit upper bounds on their prime index."""

from .bounds import BoundParams
from .prime_engine import PrimeTable, build_sieve
from .ramanujan_core import RamanujanTable, build_table, load_table, save_table

__all__ = [
    "BoundParams",
    "PrimeTable",
    "RamanujanTable",
    "build_sieve",
    "build_table",
    "load_table",
    "save_table",
]
