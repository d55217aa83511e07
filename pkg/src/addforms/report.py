"""Deterministic JSON report helpers shared by the checkers and the CLI.

Exact rationals render as {"num", "den", "dec"}; the decimal string is
computed with integer arithmetic only, so identical inputs give identical
bytes on every platform.
"""

from __future__ import annotations

import json
from fractions import Fraction

SCHEMA = "addforms/1"

_DECIMAL_PLACES = 12


def decimal_str(value: Fraction, places: int = _DECIMAL_PLACES) -> str:
    """Fixed-point decimal rendering, round half away from zero, trailing
    zeros trimmed."""
    value = Fraction(value)
    sign = "-" if value < 0 else ""
    num, den = abs(value.numerator), value.denominator
    scaled, rem = divmod(num * 10**places, den)
    if 2 * rem >= den:
        scaled += 1
    digits = str(scaled).rjust(places + 1, "0")
    whole, frac = digits[:-places], digits[-places:]
    frac = frac.rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"


def rational_json(value: Fraction) -> dict:
    value = Fraction(value)
    return {
        "num": value.numerator,
        "den": value.denominator,
        "dec": decimal_str(value),
    }


def make_report(kind: str, **fields) -> dict:
    report = {"schema": SCHEMA, "check": kind}
    report.update(fields)
    return report


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
