"""Number handling shared by every module: exact rationals, floats, and +inf.

Two numeric modes run through the whole library.  In "rational" mode all
quantities are `fractions.Fraction` (or int) and comparisons are exact; in
"float" mode quantities are floats and comparisons carry a tolerance.
+inf is always represented by the float infinity, even in rational mode,
where it marks forbidden cost cells.  -inf and NaN are rejected at the door.
"""

from __future__ import annotations

import math
from fractions import Fraction

INF = float("inf")

#: default float-mode tolerance
FLOAT_TOL = 1e-9

RATIONAL = "rational"
FLOAT = "float"

MODES = (RATIONAL, FLOAT)


def is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x)


def check_extended(x, where: str = "entry"):
    """Reject NaN and -inf; +inf passes through."""
    if isinstance(x, float):
        if math.isnan(x):
            raise DataError(f"NaN {where}")
        if x == -INF:
            raise DataError(f"-inf {where}")
    return x


def parse_number(value, mode: str):
    """Parse a JSON-level value ("p/q" string, decimal string, or number).

    "inf" / "+inf" / "Infinity" map to +inf in either mode.
    """
    if isinstance(value, str):
        s = value.strip()
        if s.lstrip("+").lower() in ("inf", "infinity"):
            return INF
        if s.startswith("-") and s[1:].lstrip("+").lower() in ("inf", "infinity"):
            raise DataError("-inf is not allowed")
        frac = Fraction(s)  # handles both "p/q" and decimal strings
        return frac if mode == RATIONAL else float(frac)
    if isinstance(value, bool):
        raise DataError("boolean is not a number")
    if isinstance(value, (int, Fraction)):
        return Fraction(value) if mode == RATIONAL else float(value)
    if isinstance(value, float):
        check_extended(value)
        if is_inf(value):
            return INF
        # decimal reading keeps 0.1 meaning 1/10, not the binary float
        return Fraction(str(value)) if mode == RATIONAL else value
    raise DataError(f"cannot interpret {value!r} as a number")


def format_number(x) -> str:
    """Serialize losslessly: "p/q" for rationals, 17 significant digits for floats."""
    if is_inf(x):
        return "+inf"
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def mul0(cost, mass):
    """cost * mass with the integration convention 0 * inf = 0."""
    if mass == 0:
        return 0
    if is_inf(cost):
        return INF
    return cost * mass


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def infer_mode(values) -> str:
    """Rational iff every value is an int or Fraction."""
    return RATIONAL if all(is_exact(v) for v in values) else FLOAT


def default_tol(mode: str):
    return 0 if mode == RATIONAL else FLOAT_TOL


def close(x, y, tol) -> bool:
    if is_inf(x) or is_inf(y):
        return is_inf(x) and is_inf(y)
    return abs(x - y) <= tol


class ShapeError(ValueError):
    """Mismatched or non-rectangular dimensions."""


class DataError(ValueError):
    """NaN, -inf, or otherwise malformed numeric data."""


class DomainError(ValueError):
    """Input outside an operation's domain (negative weight, space mismatch, ...)."""


class ParameterError(ValueError):
    """Invalid parameter (p < 1, oracle size limit exceeded, ...)."""


class NormalizationError(DomainError):
    """Weights do not sum to one; constructors never renormalize silently."""


class EmptyRestrictionError(DomainError):
    """Restriction mask selects zero mass."""


class GlueError(DomainError):
    """Middle marginals of the two plans to glue do not match."""
