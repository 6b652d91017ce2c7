"""Standard component-code fixtures and their derived rates.

The Shannon-limit columns are reference constants (dB) for plot markers
and reporting; they are consumed, not derived here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bch import BchCode, build_code

# (v, t, s, extended) per fixture id.
FIXTURE_PARAMS = {
    "C1": (8, 2, 0, True),
    "C2": (8, 3, 0, False),
    "C3": (9, 3, 0, False),
}

# Reference limits in dB at the product / staircase rates: (HD, SD).
SHANNON_LIMITS_DB = {
    "C1": {"pc": (4.05, 2.64), "scc": (3.99, 2.74)},
    "C2": {"pc": (3.54, 2.23), "scc": (3.46, 2.14)},
    "C3": {"pc": (4.36, 3.15), "scc": (4.32, 3.11)},
}


@dataclass
class FixtureInfo:
    code_id: str
    code: BchCode
    scc_code: BchCode
    pc_rate: Fraction
    scc_rate: Fraction


def get_code(code_id: str) -> BchCode:
    if code_id not in FIXTURE_PARAMS:
        raise KeyError(f"unknown code fixture {code_id!r} (have {sorted(FIXTURE_PARAMS)})")
    v, t, s, ext = FIXTURE_PARAMS[code_id]
    return build_code(v, t, s, ext, name=code_id)


def get_scc_code(code_id: str) -> BchCode:
    """Fixture code with one extra bit of shortening when n is odd.

    Staircase blocks need an even component length so that a codeword spans
    exactly two square blocks.
    """
    v, t, s, ext = FIXTURE_PARAMS[code_id]
    base = build_code(v, t, s, ext)
    if base.n % 2 == 1:
        return build_code(v, t, s + 1, ext, name=f"{code_id}-scc")
    return build_code(v, t, s, ext, name=f"{code_id}-scc")


def pc_rate(code: BchCode) -> Fraction:
    return Fraction(code.k, code.n) ** 2


def scc_rate(code: BchCode) -> Fraction:
    if code.n % 2:
        raise ValueError("staircase rate needs an even component length")
    return 1 - Fraction(2 * (code.n - code.k), code.n)


def fixture_info(code_id: str) -> FixtureInfo:
    code = get_code(code_id)
    scc = get_scc_code(code_id)
    return FixtureInfo(code_id=code_id, code=code, scc_code=scc,
                       pc_rate=pc_rate(code), scc_rate=scc_rate(scc))


def all_fixtures() -> list[FixtureInfo]:
    return [fixture_info(cid) for cid in FIXTURE_PARAMS]
