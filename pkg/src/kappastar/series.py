"""Finitely supported formal power series in the deformation parameter theta.

Coefficients are polynomials.  On polynomial inputs every star product in the
package terminates, so an uncapped ThetaSeries is exact; with cap = N all
arithmetic agrees with the exact result modulo theta^(N+1).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Optional

from .poly import Poly, TableMismatchError, VarTable
from .scalars import GaussianRational


def _merge_cap(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class ThetaSeries:
    """Map from theta-order to polynomial coefficient, plus an optional cap."""

    __slots__ = ("table", "coeffs", "cap")

    def __init__(self, table: VarTable, coeffs: Mapping[int, Poly] | None = None,
                 cap: Optional[int] = None):
        self.table = table
        self.cap = cap
        clean: Dict[int, Poly] = {}
        if coeffs:
            for order, poly in coeffs.items():
                if order < 0:
                    raise ValueError("theta orders must be non-negative")
                if cap is not None and order > cap:
                    continue
                if not poly.is_zero():
                    clean[order] = poly
        self.coeffs = clean

    @staticmethod
    def zero(table: VarTable, cap: Optional[int] = None) -> "ThetaSeries":
        return ThetaSeries(table, {}, cap)

    @staticmethod
    def of_poly(p: Poly, order: int = 0, cap: Optional[int] = None) -> "ThetaSeries":
        return ThetaSeries(p.table, {order: p}, cap)

    def order_coeff(self, order: int) -> Poly:
        return self.coeffs.get(order, Poly.zero(self.table))

    def orders(self):
        return sorted(self.coeffs)

    def max_order(self) -> int:
        return max(self.coeffs, default=-1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def first_nonzero_order(self) -> Optional[int]:
        return min(self.coeffs, default=None)

    def __add__(self, other: "ThetaSeries") -> "ThetaSeries":
        if self.table != other.table:
            raise TableMismatchError("series live over different variable tables")
        out = dict(self.coeffs)
        for order, poly in other.coeffs.items():
            acc = out.get(order)
            s = poly if acc is None else acc + poly
            if s.is_zero():
                out.pop(order, None)
            else:
                out[order] = s
        return ThetaSeries(self.table, out, _merge_cap(self.cap, other.cap))

    def __neg__(self):
        return ThetaSeries(self.table, {o: -p for o, p in self.coeffs.items()}, self.cap)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        if isinstance(other, Poly):
            return ThetaSeries(self.table, {o: p * other for o, p in self.coeffs.items()}, self.cap)
        if self.table != other.table:
            raise TableMismatchError("series live over different variable tables")
        cap = _merge_cap(self.cap, other.cap)
        out: Dict[int, Poly] = {}
        for o1, p1 in self.coeffs.items():
            for o2, p2 in other.coeffs.items():
                order = o1 + o2
                if cap is not None and order > cap:
                    continue
                prod = p1 * p2
                acc = out.get(order)
                out[order] = prod if acc is None else acc + prod
        return ThetaSeries(self.table, out, cap)

    __rmul__ = __mul__

    def scale(self, c) -> "ThetaSeries":
        return ThetaSeries(self.table, {o: p.scale(c) for o, p in self.coeffs.items()}, self.cap)

    def shift(self, k: int) -> "ThetaSeries":
        """Multiply by theta^k."""
        return ThetaSeries(self.table, {o + k: p for o, p in self.coeffs.items()}, self.cap)

    def truncate(self, cap: Optional[int]) -> "ThetaSeries":
        return ThetaSeries(self.table, self.coeffs, _merge_cap(self.cap, cap))

    def map_coeffs(self, fn) -> "ThetaSeries":
        """Apply fn to every polynomial coefficient (e.g. a pullback)."""
        out = {o: fn(p) for o, p in self.coeffs.items()}
        table = next(iter(out.values())).table if out else self.table
        return ThetaSeries(table, out, self.cap)

    def __eq__(self, other):
        if isinstance(other, Poly):
            other = ThetaSeries.of_poly(other)
        if not isinstance(other, ThetaSeries):
            return NotImplemented
        return self.table == other.table and self.coeffs == other.coeffs

    def __str__(self):
        if not self.coeffs:
            return "0"
        pieces = []
        for order in self.orders():
            poly = self.coeffs[order]
            if order == 0:
                pieces.append(str(poly))
            elif order == 1:
                pieces.append(f"theta*({poly})")
            else:
                pieces.append(f"theta^{order}*({poly})")
        return " + ".join(pieces)

    def __repr__(self):
        return f"ThetaSeries({self})"
