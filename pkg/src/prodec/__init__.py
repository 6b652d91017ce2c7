"""Product and staircase code laboratory.

Hard-decision BCH component decoding, the soft-aided iterative decoder
family built on it, density-evolution analysis, and a seeded Monte-Carlo
BER sweep harness.
"""

from .bch import BchCode, TernaryWord, build_code
from .fixtures import all_fixtures, fixture_info, get_code, get_scc_code
from .gf import GaloisField

__all__ = [
    "BchCode",
    "TernaryWord",
    "build_code",
    "GaloisField",
    "get_code",
    "get_scc_code",
    "fixture_info",
    "all_fixtures",
]

__version__ = "0.1.0"
