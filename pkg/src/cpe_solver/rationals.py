"""Exact rational scalars.

Every number that flows through this package is an exact rational: payoffs,
probabilities, deviation gains, LP tableaux, polynomial coefficients.  There
is deliberately no floating-point path anywhere, because the solver's core
question ("does this inequality hold with equality?") is meaningless under
rounding.

gmpy2's mpq is used when available (it pivots roughly 3x faster than
fractions.Fraction); otherwise the stdlib Fraction is a drop-in fallback.
Both normalise to lowest terms with a positive denominator.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover - gmpy2 is a hard dependency, Fraction kept as a safety net
    Rational = Fraction

ZERO = Rational(0)
ONE = Rational(1)

# includes gmpy2's integer type when the fast backend is active
_ACCEPTED = (int, Fraction, type(ZERO), type(ZERO.numerator))


def rat(value, denominator=None):
    """Coerce ``value`` to an exact Rational.

    Accepts ints, rationals, Fractions and strings like ``"3"`` or ``"-5/7"``.
    Floats are rejected outright: a float in the input is almost always a bug
    in an exact pipeline.
    """
    if denominator is not None:
        return Rational(rat(value), rat(denominator))
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}; use int, string or Rational")
    if isinstance(value, _ACCEPTED):
        return Rational(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def parse_rational(text: str):
    """Parse ``"p"`` or ``"p/q"`` (q > 0 after normalisation) into a Rational."""
    body = text.strip()
    if not body:
        raise ValueError("empty rational literal")
    num, sep, den = body.partition("/")
    try:
        if sep:
            value = Rational(int(num), int(den))
        else:
            value = Rational(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational literal {text!r}: {exc}") from exc
    return value


def format_rational(value) -> str:
    """Render a Rational as ``"p"`` or ``"p/q"``, the package's wire format."""
    q = rat(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def is_rational(value) -> bool:
    return isinstance(value, _ACCEPTED) and not isinstance(value, bool)
