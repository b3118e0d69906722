"""Exact Gaussian rational scalars.

The coefficient field for every polynomial in the package is Q(i): pairs of
arbitrary-precision rationals (real and imaginary part).  No rounding ever
occurs, so every identity test in the workbench is an exact equality.

The deformation parameter theta is NOT a scalar; it is the grading of
ThetaSeries (see series.py).
"""

from __future__ import annotations

from fractions import Fraction

_RatLike = (int, Fraction)


_ZERO_FRACTION = Fraction(0)


class GaussianRational:
    """A Gaussian rational re + im*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- constructors -------------------------------------------------

    @staticmethod
    def _mk(re: Fraction, im: Fraction) -> "GaussianRational":
        """Internal fast constructor: parts must already be Fractions."""
        out = object.__new__(GaussianRational)
        out.re = re
        out.im = im
        return out

    @staticmethod
    def of(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, _RatLike):
            return GaussianRational(value)
        raise TypeError(f"cannot interpret {value!r} as a Gaussian rational")

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_one(self) -> bool:
        return self.re == 1 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational._mk(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._mk(-self.re, -self.im)

    def __sub__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational._mk(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.of(other) - self

    def __mul__(self, other):
        other = GaussianRational.of(other)
        if not self.im and not other.im:
            return GaussianRational._mk(self.re * other.re, _ZERO_FRACTION)
        return GaussianRational._mk(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        norm = self.re * self.re + self.im * self.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(self.re / norm, -self.im / norm)

    def __truediv__(self, other):
        return self * GaussianRational.of(other).inverse()

    def __rtruediv__(self, other):
        return GaussianRational.of(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # -- comparison / hashing -------------------------------------------

    def __eq__(self, other):
        if isinstance(other, _RatLike):
            other = GaussianRational(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    # -- printing --------------------------------------------------------

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
IMAG = GaussianRational(0, 1)


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(c: GaussianRational) -> str:
    """Canonical printed form, re-parseable by the expression parser.

    Purely real: "3/2".  Purely imaginary: "i", "-i", "3/2*i".
    Mixed: "(1/2+3*i)", always parenthesized.
    """
    if c.im == 0:
        return _frac_str(c.re)
    if c.re == 0:
        if c.im == 1:
            return "i"
        if c.im == -1:
            return "-i"
        return f"{_frac_str(c.im)}*i"
    im_part = "i" if c.im == 1 else ("-i" if c.im == -1 else f"{_frac_str(c.im)}*i")
    sep = "" if im_part.startswith("-") else "+"
    return f"({_frac_str(c.re)}{sep}{im_part})"
