"""Jordanian twist machinery: inverse twist series, falling factorials,
twist-induced star products, the r-symmetric variant and the deformed wedge.

The logarithm ln(1 + theta*d_0) is never represented symbolically; only the
resummed expansion is stored, whose order-n tensor term is
(1/n!) d_0^n (x) (x^mu d_mu)^(falling n), and the falling factorial of the
Euler operator collapses to the pure term sum x^(k) d^(k) (|k| = n).

Evaluation of the r-symmetric product works on a monomial-pair basis, where
every exponential factor terminates because each order lowers the combined
degree of the two slots by at least one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .diffop import BiDiffOp, DiffOp, OneForm, TwoForm, VectorField, lie_derivative, wedge
from .poly import AlgebraError, Exponent, Poly, VarTable
from .scalars import GaussianRational
from .series import ThetaSeries
from .star import StarProduct

TensorTerm = Tuple[DiffOp, DiffOp]  # scalar factors folded into the left leg

JORDANIAN = "jordanian"
JORDANIAN_RS = "jordanian_rs"


def _multinomial(n: int, word: Exponent) -> int:
    out = factorial(n)
    for k in word:
        out //= factorial(k)
    return out


def _words_of_weight(nvars: int, n: int) -> Iterable[Exponent]:
    if nvars == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _words_of_weight(nvars - 1, n - first):
            yield (first,) + rest


def pure_falling_op(table: VarTable, n: int) -> DiffOp:
    """sum over |k| = n of (n!/k!) x^k d^k, the expected falling-factorial normal form."""
    if n == 0:
        return DiffOp.identity(table)
    terms = {}
    for word in _words_of_weight(len(table), n):
        terms[(word, 0)] = Poly.monomial(table, word, _multinomial(n, word))
    return DiffOp(table, terms)


def falling_factorial_op(table: VarTable, n: int) -> DiffOp:
    """E(E-1)...(E-n+1) with E = x^mu d_mu, composed and normal ordered."""
    if n < 0:
        raise AlgebraError("falling factorial order must be non-negative")
    result = DiffOp.identity(table)
    euler = DiffOp.euler(table)
    for j in range(n):
        factor = euler - DiffOp.identity(table).scale(j)
        result = result.compose(factor)
    return result


# -- tensor series building blocks --------------------------------------------


def _tensor_compose(a: TensorTerm, b: TensorTerm) -> TensorTerm:
    return (a[0].compose(b[0]), a[1].compose(b[1]))


def _tensor_exp_terms(generators: List[TensorTerm], n: int, table: VarTable) -> List[TensorTerm]:
    """Order-n term of exp(sum of grade-1 generators): all length-n products / n!.

    Exponential in n; intended for the small orders needed by the integrand
    and wedge machinery.  Star evaluation uses the monomial-pair pipeline.
    """
    if n == 0:
        return [(DiffOp.identity(table), DiffOp.identity(table))]
    layer: List[TensorTerm] = [g for g in generators]
    for _ in range(n - 1):
        layer = [_tensor_compose(t, g) for t in layer for g in generators]
    scale = Fraction(1, factorial(n))
    return [(left.scale(scale), right) for (left, right) in layer]


def _convolve(series_a: Callable[[int], List[TensorTerm]],
              series_b: Callable[[int], List[TensorTerm]],
              n: int) -> List[TensorTerm]:
    out: List[TensorTerm] = []
    for k in range(n + 1):
        for ta in series_a(k):
            for tb in series_b(n - k):
                out.append(_tensor_compose(ta, tb))
    return out


def _rs_generators(table: VarTable) -> Tuple[List[TensorTerm], List[TensorTerm]]:
    """Grade-1 generators of the outer exponentials of the r-symmetric inverse twist."""
    ident = DiffOp.identity(table)
    p0 = DiffOp.partial(table, "x0")
    euler = DiffOp.euler(table)
    dil = euler.compose(p0)  # x^mu d_mu d_0
    half = Fraction(1, 2)
    outer_first = [  # exp(-theta/2 (D x 1 + E x d0 + d0 x E + 1 x D)), applied last
        (dil.scale(-half), ident),
        (euler.scale(-half), p0),
        (p0.scale(-half), euler),
        (ident.scale(-half), dil),
    ]
    outer_last = [  # exp(+theta/2 (D x 1 + 1 x D)), applied first
        (dil.scale(half), ident),
        (ident.scale(half), dil),
    ]
    return outer_first, outer_last


class TwistSeries:
    """Theta-graded tensor term family of an inverse twist operator."""

    def __init__(self, kind: str, d: int):
        if kind not in (JORDANIAN, JORDANIAN_RS):
            raise AlgebraError(f"unsupported twist kind {kind!r}")
        if d < 1:
            raise AlgebraError("twist dimension must be >= 1")
        self.kind = kind
        self.d = d
        self.table = VarTable.spacetime(d)
        self._cache: Dict[int, List[TensorTerm]] = {}

    def _jordanian_terms(self, n: int) -> List[TensorTerm]:
        left = DiffOp.derivative_word(
            self.table, tuple(n if i == 0 else 0 for i in range(len(self.table)))
        ).scale(Fraction(1, factorial(n)))
        return [(left, pure_falling_op(self.table, n))]

    def terms_at(self, n: int) -> List[TensorTerm]:
        got = self._cache.get(n)
        if got is not None:
            return got
        if self.kind == JORDANIAN:
            terms = self._jordanian_terms(n)
        else:
            outer_first, outer_last = _rs_generators(self.table)

            def first_series(k: int) -> List[TensorTerm]:
                return _tensor_exp_terms(outer_first, k, self.table)

            def last_series(k: int) -> List[TensorTerm]:
                return _tensor_exp_terms(outer_last, k, self.table)

            middle = self._jordanian_terms
            terms = _convolve(lambda k: _convolve(first_series, middle, k), last_series, n)
        self._cache[n] = terms
        return terms

    def order_bidiff(self, n: int) -> BiDiffOp:
        """The order-n tensor terms flattened to a bidifferential operator."""
        out = BiDiffOp.zero(self.table)
        for left, right in self.terms_at(n):
            terms: Dict[Tuple[Exponent, Exponent, int], Poly] = {}
            for (lw, lt), lc in left.terms.items():
                if lt:
                    raise AlgebraError("twist legs must be theta free")
                for (rw, rt), rc in right.terms.items():
                    if rt:
                        raise AlgebraError("twist legs must be theta free")
                    key = (lw, rw, n)
                    mid = lc * rc
                    acc = terms.get(key)
                    terms[key] = mid if acc is None else acc + mid
            out = out + BiDiffOp(self.table, terms)
        return out


def build_twist(kind: str, d: int) -> TwistSeries:
    return TwistSeries(kind, d)


# -- star products from twists -------------------------------------------------


PairState = Dict[Tuple[Exponent, Exponent, int], GaussianRational]


def _poly_pairs(state: PairState, table: VarTable) -> ThetaSeries:
    orders: Dict[int, Poly] = {}
    for (e1, e2, k), c in state.items():
        mono = Poly.monomial(table, e1, c) * Poly.monomial(table, e2)
        acc = orders.get(k)
        orders[k] = mono if acc is None else acc + mono
    return ThetaSeries(table, orders)


def _state_add(state: PairState, key, value: GaussianRational):
    acc = state.get(key)
    s = value if acc is None else acc + value
    if s.is_zero():
        state.pop(key, None)
    else:
        state[key] = s


def _apply_exp_generators(state: PairState, generators: List[TensorTerm],
                          table: VarTable) -> PairState:
    """exp(sum generators) on a monomial-pair state; terminates by degree drop."""
    total: PairState = dict(state)
    current = state
    m = 0
    while current:
        m += 1
        nxt: PairState = {}
        inv_m = Fraction(1, m)
        for (e1, e2, k), c in current.items():
            m1 = Poly.monomial(table, e1)
            m2 = Poly.monomial(table, e2)
            for left, right in generators:
                lp = left.apply_poly(m1)
                if lp.is_zero():
                    continue
                rp = right.apply_poly(m2)
                if rp.is_zero():
                    continue
                for le, lc in lp.terms.items():
                    for re, rc in rp.terms.items():
                        _state_add(nxt, (le, re, k + 1), c * lc * rc * inv_m)
        for key, value in nxt.items():
            _state_add(total, key, value)
        current = nxt
    return total


def _apply_jordanian_factor(state: PairState, table: VarTable) -> PairState:
    """The resummed middle factor: order b maps (m1, m2) to
    C(n0, b) * (deg m2)^(falling b) * (m1 shifted down b in x0, m2)."""
    i0 = table.index("x0")
    out: PairState = {}
    for (e1, e2, k), c in state.items():
        n0 = e1[i0]
        deg2 = sum(e2)
        for b in range(min(n0, deg2) + 1):
            coeff = comb(n0, b)
            for j in range(b):
                coeff *= (deg2 - j)
            if coeff == 0:
                continue
            shifted = list(e1)
            shifted[i0] = n0 - b
            _state_add(out, (tuple(shifted), e2, k + b), c * coeff)
    return out


class TwistStarProduct(StarProduct):
    """Star product f,g -> mu(F^{-1}(f (x) g)) for an inverse twist series."""

    def __init__(self, twist: TwistSeries, cap: Optional[int] = None):
        self.twist = twist
        super().__init__(twist.kind, twist.d, twist.table,
                         twist.order_bidiff,
                         lambda f, g: max(f.total_degree(), 0) + max(g.total_degree(), 0),
                         cap)

    def apply(self, f: Poly, g: Poly) -> ThetaSeries:
        if f.table != self.table or g.table != self.table:
            raise AlgebraError("operands must live over the twist's variable table")
        state: PairState = {}
        for e1, c1 in f.terms.items():
            for e2, c2 in g.terms.items():
                _state_add(state, (e1, e2, 0), c1 * c2)
        if self.kind == JORDANIAN_RS:
            outer_first, outer_last = _rs_generators(self.table)
            state = _apply_exp_generators(state, outer_last, self.table)
            state = _apply_jordanian_factor(state, self.table)
            state = _apply_exp_generators(state, outer_first, self.table)
        else:
            state = _apply_jordanian_factor(state, self.table)
        return _poly_pairs(state, self.table).truncate(self.cap)


def twist_star_product(kind: str, d: int, cap: Optional[int] = None) -> TwistStarProduct:
    return TwistStarProduct(TwistSeries(kind, d), cap)


def apply_tensor_terms(terms_by_order: Dict[int, List[TensorTerm]],
                       f: Poly, g: Poly) -> ThetaSeries:
    """Directly evaluate theta-graded tensor terms on a pair of polynomials."""
    table = f.table
    orders: Dict[int, Poly] = {}
    for n, terms in terms_by_order.items():
        acc = Poly.zero(table)
        for left, right in terms:
            lp = left.apply_poly(f)
            if lp.is_zero():
                continue
            rp = right.apply_poly(g)
            if rp.is_zero():
                continue
            acc = acc + lp * rp
        if not acc.is_zero():
            orders[n] = acc
    return ThetaSeries(table, orders)


def star_from_twist(twist: TwistSeries, f: Poly, g: Poly,
                    cap: Optional[int] = None) -> ThetaSeries:
    return TwistStarProduct(twist, cap).apply(f, g)


# -- Lemma-style verification ---------------------------------------------------


@dataclass
class SweepResult:
    ok: bool
    witness: str = ""


def _monomials_up_to(table: VarTable, degree: int) -> List[Exponent]:
    out = [w for n in range(degree + 1) for w in _words_of_weight(len(table), n)]
    return out


def verify_lemma2(d: int, max_degree: int) -> SweepResult:
    """Twist route equals the closed-form product on all monomial pairs."""
    from .star import build_star
    kappa = build_star("kappa", d)
    jordan = twist_star_product(JORDANIAN, d)
    table = kappa.table
    for e1 in _monomials_up_to(table, max_degree):
        f = Poly.monomial(table, e1)
        for e2 in _monomials_up_to(table, max_degree):
            g = Poly.monomial(table, e2)
            lhs = jordan.apply(f, g)
            rhs = kappa.apply(f, g)
            if lhs != rhs:
                diff = lhs - rhs
                order = diff.first_nonzero_order()
                return SweepResult(False, (f"pair ({f}, {g}) differs at theta^{order}: "
                                           f"{diff.order_coeff(order)}"))
    return SweepResult(True)


def verify_falling_factorial(d: int, max_n: int) -> SweepResult:
    table = VarTable.spacetime(d)
    for n in range(max_n + 1):
        composed = falling_factorial_op(table, n)
        pure = pure_falling_op(table, n)
        if composed != pure:
            return SweepResult(False, f"falling factorial mismatch at n={n}")
    return SweepResult(True)


# -- deformed wedge --------------------------------------------------------------


def wedge_star(mu: int, nu: int, d: int, order: int) -> Dict[int, TwoForm]:
    """Deformed wedge of coordinate one-forms under the Jordanian twist legs.

    The legs act through Lie derivatives: the left leg is L_{d_0}^n, the
    right leg the falling factorial of L_E with E the full Euler field.
    Returns the theta-graded two-form up to the requested order.
    """
    table = VarTable.spacetime(d)
    if not (0 <= mu <= d and 0 <= nu <= d):
        raise AlgebraError("form indices must lie in 0..d")
    p0_field = VectorField.coordinate(table, "x0")
    euler_field = VectorField.euler(table)
    omega_mu = OneForm.coordinate(table, mu)
    omega_nu = OneForm.coordinate(table, nu)
    result: Dict[int, TwoForm] = {}
    for n in range(order + 1):
        left = omega_mu
        for _ in range(n):
            left = lie_derivative(p0_field, left)
            if left.is_zero():
                break
        if left.is_zero():
            continue
        right = omega_nu
        for j in range(n):
            right = lie_derivative(euler_field, right) - right.scale(j)
            if right.is_zero():
                break
        if right.is_zero():
            continue
        term = wedge(left, right).scale(Fraction(1, factorial(n)))
        if not term.is_zero():
            result[n] = term
    return result


def wedge_star_is_undeformed(mu: int, nu: int, d: int, order: int) -> bool:
    table = VarTable.spacetime(d)
    deformed = wedge_star(mu, nu, d, order)
    undeformed = wedge(OneForm.coordinate(table, mu), OneForm.coordinate(table, nu))
    positive_clean = all(n == 0 for n in deformed)
    return positive_clean and deformed.get(0, TwoForm.zero(table)) == undeformed


# -- r-symmetric expansion and the printed second-order cross-check ---------------


def expand_rs_product(f: Poly, g: Poly, up_to_order: int = 2) -> ThetaSeries:
    """Coefficients of the r-symmetric twisted product through the given order."""
    if f.table != g.table:
        raise AlgebraError("operands live over different variable tables")
    d = f.table.d
    return twist_star_product(JORDANIAN_RS, d).apply(f, g).truncate(up_to_order)


def rs_first_order_form(f: Poly, g: Poly) -> Poly:
    """(1/2) x^mu (d0 f d_mu g - d_mu f d0 g), the expected theta^1 coefficient."""
    table = f.table
    i0 = table.index("x0")
    out = Poly.zero(table)
    f0, g0 = f.partial(i0), g.partial(i0)
    for muu in range(len(table)):
        xm = Poly.variable(table, table.names[muu])
        out = out + xm * (f0 * g.partial(muu) - f.partial(muu) * g0)
    return out.scale(Fraction(1, 2))


def rs_theta2_printed_form(f: Poly, g: Poly) -> Poly:
    """Hand-published closed form for the theta^2 coefficient, used only as a
    cross-check target; the series engine is authoritative where they differ.

    The second bracket is printed with a free contraction index against the
    coefficient x^mu; it is implemented here as the only well-formed reading,
    the contraction sum_rho x^rho [...].
    """
    table = f.table
    i0 = table.index("x0")
    n = len(table)

    def dw(p: Poly, *vars_) -> Poly:
        for v in vars_:
            p = p.partial(v)
        return p

    total = Poly.zero(table)
    for mu in range(n):
        xmu = Poly.variable(table, table.names[mu])
        for rho in range(n):
            xrho = Poly.variable(table, table.names[rho])
            block = (
                dw(f, rho, mu, i0, i0) * g
                + f * dw(g, rho, mu, i0, i0)
                + dw(f, rho, mu) * dw(g, i0, i0) * 2
                + dw(f, i0, i0) * dw(g, rho, mu) * 2
                + dw(f, i0) * dw(g, rho, mu, i0) * 2
                + dw(f, rho, mu, i0) * dw(g, i0) * 2
                + dw(f, rho, i0) * dw(g, i0, mu) * 2
                + dw(f, rho, i0, i0) * dw(g, mu) * 2
                + dw(f, rho) * dw(g, mu, i0, i0) * 2
            )
            total = total + xmu * xrho * block
    for rho in range(n):
        xrho = Poly.variable(table, table.names[rho])
        bracket = (
            dw(f, rho, i0) * dw(g, i0)
            + dw(f, i0) * dw(g, rho, i0)
            + dw(f, i0, i0) * dw(g, rho) * 3
            + dw(f, rho) * dw(g, i0, i0)
            + dw(f, rho, i0, i0) * g
            + f * dw(g, rho, i0, i0)
        )
        total = total + xrho.scale(2) * bracket
    return total.scale(Fraction(1, 8))


def rs_theta2_diff(f: Poly, g: Poly) -> Poly:
    """Engine theta^2 coefficient minus the printed closed form."""
    engine = expand_rs_product(f, g, up_to_order=2).order_coeff(2)
    return engine - rs_theta2_printed_form(f, g)
