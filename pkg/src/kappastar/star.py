"""The four star products, the exponential engine and the Poisson brackets.

Every product is realized as a theta-graded family of bidifferential
operators: the order-n term is the exact n-th term of the defining
exponential (generator^n / n! under the inert star power).  Products coming
from twists plug into the same interface through a custom term builder.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional

from .diffop import BiDiffOp, bidiff_exp_term
from .poly import AlgebraError, Poly, VarTable
from .scalars import IMAG, GaussianRational
from .series import ThetaSeries

EXPONENTIAL_KINDS = ("moyal", "wick_voros", "kappa", "su2")
TWIST_KINDS = ("jordanian", "jordanian_rs")

# Levi-Civita symbol on {1,2,3}, used by the su2 product.
_EPSILON = {
    (1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1,
    (2, 1, 3): -1, (3, 2, 1): -1, (1, 3, 2): -1,
}


def epsilon(i: int, j: int, k: int) -> int:
    return _EPSILON.get((i, j, k), 0)


class StarProduct:
    """A star product as a lazily expanded theta-graded BiDiffOp family."""

    def __init__(self, kind: str, d: int, table: VarTable,
                 term_builder: Callable[[int], BiDiffOp],
                 order_bound: Callable[[Poly, Poly], int],
                 cap: Optional[int] = None):
        self.kind = kind
        self.d = d
        self.table = table
        self.cap = cap
        self._term_builder = term_builder
        self._order_bound = order_bound
        self._terms: Dict[int, BiDiffOp] = {}

    def order_term(self, n: int) -> BiDiffOp:
        got = self._terms.get(n)
        if got is None:
            got = self._term_builder(n)
            self._terms[n] = got
        return got

    def max_useful_order(self, f: Poly, g: Poly) -> int:
        bound = self._order_bound(f, g)
        if self.cap is not None:
            bound = min(bound, self.cap)
        return max(bound, 0)

    def apply(self, f: Poly, g: Poly) -> ThetaSeries:
        """Exact star product of two polynomials (modulo theta^(cap+1) if capped)."""
        if f.table != self.table or g.table != self.table:
            raise AlgebraError(
                f"operands must live over the {self.kind} product's variable table")
        if f.is_zero() or g.is_zero():
            return ThetaSeries.zero(self.table, self.cap)
        result = ThetaSeries.zero(self.table, self.cap)
        for n in range(self.max_useful_order(f, g) + 1):
            result = result + self.order_term(n).apply(f, g, self.cap)
        return result

    def apply_series(self, F, G) -> ThetaSeries:
        """Bilinear extension of the product to ThetaSeries arguments."""
        if isinstance(F, Poly):
            F = ThetaSeries.of_poly(F)
        if isinstance(G, Poly):
            G = ThetaSeries.of_poly(G)
        result = ThetaSeries.zero(self.table, self.cap)
        for a, fa in F.coeffs.items():
            for b, gb in G.coeffs.items():
                if self.cap is not None and a + b > self.cap:
                    continue
                result = result + self.apply(fa, gb).shift(a + b)
        return result

    def commutator(self, f: Poly, g: Poly) -> ThetaSeries:
        return self.apply(f, g) - self.apply(g, f)

    def __repr__(self):
        return f"StarProduct(kind={self.kind!r}, d={self.d})"


# -- generators --------------------------------------------------------------


def _wick_voros_generator(table: VarTable) -> BiDiffOp:
    terms = {}
    one = Poly.one(table)
    for zi, zbi in zip(table.z_indices(), table.zbar_indices()):
        terms[(table.unit_exp(zi), table.unit_exp(zbi), 1)] = one
    return BiDiffOp(table, terms)


def _moyal_generator(table: VarTable) -> BiDiffOp:
    terms = {}
    half = Poly.constant(table, Fraction(1, 2))
    for zi, zbi in zip(table.z_indices(), table.zbar_indices()):
        terms[(table.unit_exp(zi), table.unit_exp(zbi), 1)] = half
        terms[(table.unit_exp(zbi), table.unit_exp(zi), 1)] = -half
    return BiDiffOp(table, terms)


def _kappa_generator(table: VarTable) -> BiDiffOp:
    """d_0 on the left, x^nu d_nu (inert coefficient) on the right."""
    terms = {}
    left = table.unit_exp(table.index("x0"))
    for nu in range(len(table)):
        terms[(left, table.unit_exp(nu), 1)] = Poly.variable(table, table.names[nu])
    return BiDiffOp(table, terms)


def _su2_generator(table: VarTable) -> BiDiffOp:
    """Spatial legs with middle (1/2)(delta^{ij} x0 + i eps^{ij}_k x^k)."""
    terms = {}
    x0 = Poly.variable(table, "x0")
    xs = {k: Poly.variable(table, f"x{k}") for k in (1, 2, 3)}
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            mid = Poly.zero(table)
            if i == j:
                mid = mid + x0
            for k in (1, 2, 3):
                s = epsilon(i, j, k)
                if s:
                    mid = mid + xs[k].scale(IMAG * s)
            mid = mid.scale(Fraction(1, 2))
            if not mid.is_zero():
                terms[(table.unit_exp(i), table.unit_exp(j), 1)] = mid
    return BiDiffOp(table, terms)


def _min_degree_bound(f: Poly, g: Poly) -> int:
    # every order-n term applies n derivatives to each slot
    return min(f.total_degree(), g.total_degree())


def build_star(kind: str, d: int | None = None, cap: Optional[int] = None) -> StarProduct:
    """Construct one of the supported star products.

    kind in {moyal, wick_voros, kappa, su2, jordanian, jordanian_rs}; su2 is
    fixed at d = 3 spatial coordinates with x0 a formal radius bookkeeping
    symbol that the product never differentiates.
    """
    if kind in ("jordanian", "jordanian_rs"):
        from . import twist  # local import keeps the module graph acyclic
        if d is None:
            raise AlgebraError("twist star products require a dimension d")
        return twist.twist_star_product(kind, d, cap)
    if kind == "su2":
        if d not in (None, 3):
            raise AlgebraError("the su2 star product is defined for d = 3 only")
        table = VarTable.spacetime(3)
        gen = _su2_generator(table)
        return StarProduct("su2", 3, table,
                           lambda n: bidiff_exp_term(gen, n),
                           _min_degree_bound, cap)
    if d is None or d < 1:
        raise AlgebraError(f"star product kind {kind!r} requires a dimension d >= 1")
    if kind == "wick_voros":
        table = VarTable.complex_plane(d)
        gen = _wick_voros_generator(table)
    elif kind == "moyal":
        table = VarTable.complex_plane(d)
        gen = _moyal_generator(table)
    elif kind == "kappa":
        table = VarTable.spacetime(d)
        gen = _kappa_generator(table)
    else:
        raise AlgebraError(f"unsupported star product kind {kind!r}")
    return StarProduct(kind, d, table,
                       lambda n: bidiff_exp_term(gen, n),
                       _min_degree_bound, cap)


def star_apply(product: StarProduct, f: Poly, g: Poly) -> ThetaSeries:
    return product.apply(f, g)


def star_commutator(product: StarProduct, f: Poly, g: Poly) -> ThetaSeries:
    return product.commutator(f, g)


# -- Poisson brackets ---------------------------------------------------------


def poisson_bracket(f: Poly, g: Poly, structure: str) -> Poly:
    """Classical brackets: {x0, xi} = i*xi (kappa_classical), {z, zb} = i (canonical_z)."""
    if f.table != g.table:
        raise AlgebraError("bracket operands live over different variable tables")
    table = f.table
    out = Poly.zero(table)
    if structure == "kappa_classical":
        i0 = table.index("x0")
        f0 = f.partial(i0)
        g0 = g.partial(i0)
        for k in table.spatial_indices():
            xk = Poly.variable(table, table.names[k])
            out = out + (f0 * xk * g.partial(k) - f.partial(k) * xk * g0).scale(IMAG)
        return out
    if structure == "canonical_z":
        for zi, zbi in zip(table.z_indices(), table.zbar_indices()):
            out = out + (f.partial(zi) * g.partial(zbi)
                         - f.partial(zbi) * g.partial(zi)).scale(IMAG)
        return out
    raise AlgebraError(f"unknown Poisson structure {structure!r}")


# -- verification helpers -----------------------------------------------------


@dataclass
class AssociativityResult:
    ok: bool
    order: Optional[int] = None
    difference: Optional[Poly] = None

    def witness(self) -> str:
        if self.ok:
            return ""
        return f"first defect at theta^{self.order}: {self.difference}"


def verify_associativity(product: StarProduct, f: Poly, g: Poly, h: Poly) -> AssociativityResult:
    """Exact check of (f*g)*h = f*(g*h); on failure reports the first bad order."""
    left = product.apply_series(product.apply(f, g), ThetaSeries.of_poly(h))
    right = product.apply_series(ThetaSeries.of_poly(f), product.apply(g, h))
    diff = left - right
    if diff.is_zero():
        return AssociativityResult(True)
    order = diff.first_nonzero_order()
    return AssociativityResult(False, order, diff.order_coeff(order))
