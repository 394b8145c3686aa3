"""Univariate polynomials in a small positive parameter eps, with exact
rational coefficients.

These represent parametric probability masses and deviation gains along
tremble/noise sequences.  The only question ever asked of them is their
sign for all sufficiently small eps > 0, which is decided exactly by the
lowest-order nonzero coefficient; no numeric threshold is involved.
"""

from __future__ import annotations

from .rationals import ZERO, format_rational, rat


class EpsPolynomial:
    """Polynomial a0 + a1*eps + a2*eps^2 + ... with Rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coefficients=()):
        coeffs = [rat(c) for c in coefficients]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @classmethod
    def constant(cls, value) -> "EpsPolynomial":
        return cls((rat(value),))

    @classmethod
    def zero(cls) -> "EpsPolynomial":
        return cls()

    @classmethod
    def one(cls) -> "EpsPolynomial":
        return cls((1,))

    @classmethod
    def eps(cls) -> "EpsPolynomial":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial reported as -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, power: int):
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return ZERO

    @property
    def constant_term(self):
        return self.coefficient(0)

    def lowest_term(self):
        """(power, coefficient) of the lowest-order nonzero term, or None."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k, c
        return None

    def sign_near_zero(self) -> int:
        """Sign of the polynomial on a punctured right neighbourhood of 0.

        A nonzero polynomial has constant sign for all sufficiently small
        eps > 0, equal to the sign of its lowest-order nonzero coefficient.
        Returns -1, 0 (zero polynomial) or +1.
        """
        low = self.lowest_term()
        if low is None:
            return 0
        return 1 if low[1] > 0 else -1

    def is_positive_near_zero(self) -> bool:
        return self.sign_near_zero() > 0

    def is_nonnegative_near_zero(self) -> bool:
        return self.sign_near_zero() >= 0

    def evaluate(self, eps_value):
        """Exact value at a rational point (Horner)."""
        x = rat(eps_value)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return EpsPolynomial(
            tuple(self.coefficient(k) + other.coefficient(k) for k in range(n))
        )

    __radd__ = __add__

    def __neg__(self):
        return EpsPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return EpsPolynomial()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] += a * b
        return EpsPolynomial(out)

    __rmul__ = __mul__

    def scale(self, factor):
        f = rat(factor)
        return EpsPolynomial(tuple(c * f for c in self.coeffs))

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"EpsPolynomial({[format_rational(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mag = format_rational(abs(c))
            if k == 0:
                body = mag
            else:
                power = "eps" if k == 1 else f"eps^{k}"
                body = power if mag == "1" else f"{mag}*{power}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


def _coerce(value):
    if isinstance(value, EpsPolynomial):
        return value
    try:
        return EpsPolynomial((rat(value),))
    except TypeError:
        return NotImplemented


def limit_ratio_at_zero(numerator: EpsPolynomial, denominator: EpsPolynomial):
    """Exact limit of numerator/denominator as eps -> 0+.

    Requires the denominator to be nonzero and of order <= the numerator's
    (otherwise the ratio diverges and ValueError is raised).
    """
    den_low = denominator.lowest_term()
    if den_low is None:
        raise ValueError("denominator is the zero polynomial")
    k, lead = den_low
    num_low = numerator.lowest_term()
    if num_low is None:
        return ZERO
    if num_low[0] < k:
        raise ValueError("ratio diverges as eps -> 0+")
    return numerator.coefficient(k) / lead
