"""Differential operators, bidifferential operators and a minimal form layer.

DiffOp terms are stored normal-ordered (polynomial coefficient to the left of
the derivative multi-index), with an integer theta weight per term, so that
operator equality is syntactic and commutators are exact term rewrites.

BiDiffOp is the carrier of every star product: a finite sum of
(left multi-index, middle polynomial, right multi-index) terms graded by
theta order.  Middle coefficients are functions of the common evaluation
point only and are inert under the "star power" used to exponentiate
order-one generators.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Dict, Iterator, Tuple

from .poly import Exponent, Poly, TableMismatchError, VarTable, exp_add
from .scalars import GaussianRational
from .series import ThetaSeries

DiffKey = Tuple[Exponent, int]  # (derivative multi-index, theta power)


def _iter_subindices(alpha: Exponent, limits: Exponent) -> Iterator[Exponent]:
    """All gamma with 0 <= gamma <= min(alpha, limits) componentwise."""
    ranges = [range(min(a, l) + 1) for a, l in zip(alpha, limits)]

    def rec(i, acc):
        if i == len(ranges):
            yield tuple(acc)
            return
        for v in ranges[i]:
            acc.append(v)
            yield from rec(i + 1, acc)
            acc.pop()

    yield from rec(0, [])


def _multi_binom(alpha: Exponent, gamma: Exponent) -> int:
    out = 1
    for a, g in zip(alpha, gamma):
        out *= comb(a, g)
    return out


class DiffOp:
    """Finite sum of terms coeff * theta^t * d^alpha, normal ordered."""

    __slots__ = ("table", "terms")

    def __init__(self, table: VarTable, terms: Dict[DiffKey, Poly] | None = None):
        self.table = table
        clean: Dict[DiffKey, Poly] = {}
        if terms:
            for key, coeff in terms.items():
                if not coeff.is_zero():
                    clean[key] = coeff
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(table: VarTable) -> "DiffOp":
        return DiffOp(table)

    @staticmethod
    def identity(table: VarTable) -> "DiffOp":
        return DiffOp(table, {(table.zero_exp(), 0): Poly.one(table)})

    @staticmethod
    def from_poly(p: Poly) -> "DiffOp":
        """The multiplication operator f -> p*f."""
        return DiffOp(p.table, {(p.table.zero_exp(), 0): p})

    @staticmethod
    def partial(table: VarTable, var: str | int) -> "DiffOp":
        i = var if isinstance(var, int) else table.index(var)
        return DiffOp(table, {(table.unit_exp(i), 0): Poly.one(table)})

    @staticmethod
    def derivative_word(table: VarTable, word: Exponent) -> "DiffOp":
        return DiffOp(table, {(tuple(word), 0): Poly.one(table)})

    @staticmethod
    def euler(table: VarTable, spatial_only: bool = False) -> "DiffOp":
        """x^mu d_mu (all variables) or x^k d_k (spatial part only)."""
        indices = table.spatial_indices() if spatial_only else range(len(table))
        terms: Dict[DiffKey, Poly] = {}
        for i in indices:
            terms[(table.unit_exp(i), 0)] = Poly.variable(table, table.names[i])
        return DiffOp(table, terms)

    # -- linear structure -------------------------------------------------

    def __add__(self, other: "DiffOp") -> "DiffOp":
        if self.table != other.table:
            raise TableMismatchError("operators live over different variable tables")
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            acc = out.get(key)
            s = coeff if acc is None else acc + coeff
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        op = DiffOp.__new__(DiffOp)
        op.table = self.table
        op.terms = out
        return op

    def __neg__(self):
        op = DiffOp.__new__(DiffOp)
        op.table = self.table
        op.terms = {k: -c for k, c in self.terms.items()}
        return op

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DiffOp":
        c = GaussianRational.of(c)
        if c.is_zero():
            return DiffOp.zero(self.table)
        op = DiffOp.__new__(DiffOp)
        op.table = self.table
        op.terms = {k: v * c for k, v in self.terms.items()}
        return op

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def with_theta(self, k: int) -> "DiffOp":
        """Multiply by theta^k (shift every term's theta weight)."""
        return DiffOp(self.table, {(d, t + k): c for (d, t), c in self.terms.items()})

    def is_theta_free(self) -> bool:
        return all(t == 0 for (_, t) in self.terms)

    # -- action and composition -------------------------------------------

    def apply(self, f) -> ThetaSeries:
        """Apply to a Poly or ThetaSeries; result is a ThetaSeries."""
        if isinstance(f, Poly):
            f = ThetaSeries.of_poly(f)
        if f.table != self.table:
            raise TableMismatchError("operand lives over a different variable table")
        result = ThetaSeries.zero(self.table, f.cap)
        for (word, t), coeff in self.terms.items():
            for order, poly in f.coeffs.items():
                df = poly.partial_word(word)
                if df.is_zero():
                    continue
                result = result + ThetaSeries.of_poly(coeff * df, order + t, f.cap)
        return result

    def apply_poly(self, f: Poly) -> Poly:
        """Apply a theta-free operator to a polynomial."""
        if f.table != self.table:
            raise TableMismatchError("operand lives over a different variable table")
        out = Poly.zero(self.table)
        for (word, t), coeff in self.terms.items():
            if t != 0:
                raise ValueError("apply_poly requires a theta-free operator")
            df = f.partial_word(word)
            if not df.is_zero():
                out = out + coeff * df
        return out

    def compose(self, other: "DiffOp") -> "DiffOp":
        """Normal-ordered composition self o other (other acts first)."""
        if self.table != other.table:
            raise TableMismatchError("operators live over different variable tables")
        out: Dict[DiffKey, Poly] = {}
        for (alpha, t1), c1 in self.terms.items():
            for (beta, t2), c2 in other.terms.items():
                limits = tuple(c2.degree_in(i) if not c2.is_zero() else 0
                               for i in range(len(self.table)))
                for gamma in _iter_subindices(alpha, limits):
                    dc2 = c2.partial_word(gamma)
                    if dc2.is_zero():
                        continue
                    coeff = c1 * dc2 * _multi_binom(alpha, gamma)
                    word = exp_add(tuple(a - g for a, g in zip(alpha, gamma)), beta)
                    key = (word, t1 + t2)
                    acc = out.get(key)
                    s = coeff if acc is None else acc + coeff
                    if s.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = s
        op = DiffOp.__new__(DiffOp)
        op.table = self.table
        op.terms = out
        return op

    def __matmul__(self, other):
        return self.compose(other)

    def commutator(self, other: "DiffOp") -> "DiffOp":
        return self.compose(other) - other.compose(self)

    # -- comparison / printing ----------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def _word_str(self, word: Exponent) -> str:
        parts = []
        for name, k in zip(self.table.names, word):
            if k == 1:
                parts.append(f"d_{name}")
            elif k > 1:
                parts.append(f"d_{name}^{k}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda k: (k[1], sum(k[0]), k[0]))
        pieces = []
        for word, t in keys:
            coeff = self.terms[(word, t)]
            bits = []
            if t == 1:
                bits.append("theta")
            elif t > 1:
                bits.append(f"theta^{t}")
            bits.append(f"({coeff})")
            ws = self._word_str(word)
            if ws:
                bits.append(ws)
            pieces.append("*".join(bits))
        return " + ".join(pieces)

    def __repr__(self):
        return f"DiffOp({self})"


BiKey = Tuple[Exponent, Exponent, int]  # (left word, right word, theta order)


class BiDiffOp:
    """Finite sum of (left word, mid poly, right word) terms, theta graded."""

    __slots__ = ("table", "terms")

    def __init__(self, table: VarTable, terms: Dict[BiKey, Poly] | None = None):
        self.table = table
        clean: Dict[BiKey, Poly] = {}
        if terms:
            for key, mid in terms.items():
                if not mid.is_zero():
                    clean[key] = mid
        self.terms = clean

    @staticmethod
    def zero(table: VarTable) -> "BiDiffOp":
        return BiDiffOp(table)

    @staticmethod
    def identity(table: VarTable) -> "BiDiffOp":
        z = table.zero_exp()
        return BiDiffOp(table, {(z, z, 0): Poly.one(table)})

    def __add__(self, other: "BiDiffOp") -> "BiDiffOp":
        if self.table != other.table:
            raise TableMismatchError("operators live over different variable tables")
        out = dict(self.terms)
        for key, mid in other.terms.items():
            acc = out.get(key)
            s = mid if acc is None else acc + mid
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return BiDiffOp(self.table, out)

    def __neg__(self):
        return BiDiffOp(self.table, {k: -m for k, m in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "BiDiffOp":
        c = GaussianRational.of(c)
        return BiDiffOp(self.table, {k: m * c for k, m in self.terms.items()})

    def star_power_mul(self, other: "BiDiffOp") -> "BiDiffOp":
        """Inert product: words concatenate, mids multiply, grades add.

        This is the multiplication under which the n-th term of an
        exponential star product is generator^n / n!; the right derivative
        legs never act on the middle coefficients.
        """
        if self.table != other.table:
            raise TableMismatchError("operators live over different variable tables")
        out: Dict[BiKey, Poly] = {}
        for (l1, r1, t1), m1 in self.terms.items():
            for (l2, r2, t2), m2 in other.terms.items():
                key = (exp_add(l1, l2), exp_add(r1, r2), t1 + t2)
                prod = m1 * m2
                acc = out.get(key)
                s = prod if acc is None else acc + prod
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        return BiDiffOp(self.table, out)

    def apply(self, f: Poly, g: Poly, cap: int | None = None) -> ThetaSeries:
        """Evaluate: sum of theta^grade * mid * d^left(f) * d^right(g)."""
        if f.table != self.table or g.table != self.table:
            raise TableMismatchError("operands live over a different variable table")
        out: Dict[int, Poly] = {}
        for (left, right, grade), mid in self.terms.items():
            if cap is not None and grade > cap:
                continue
            df = f.partial_word(left)
            if df.is_zero():
                continue
            dg = g.partial_word(right)
            if dg.is_zero():
                continue
            piece = mid * df * dg
            acc = out.get(grade)
            out[grade] = piece if acc is None else acc + piece
        return ThetaSeries(self.table, out, cap)

    def __eq__(self, other):
        if not isinstance(other, BiDiffOp):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_keys(self):
        return sorted(self.terms, key=lambda k: (k[2], k[0], k[1]))

    def __repr__(self):
        return f"BiDiffOp({len(self.terms)} terms)"


def bidiff_exp_term(generator: BiDiffOp, n: int) -> BiDiffOp:
    """The order-n term generator^n / n! of the exponential series."""
    if n == 0:
        return BiDiffOp.identity(generator.table)
    power = generator
    for _ in range(n - 1):
        power = power.star_power_mul(generator)
    return power.scale(Fraction(1, factorial(n)))


# ---------------------------------------------------------------------------
# Minimal one-form layer: enough exterior calculus for the deformed wedge.
# ---------------------------------------------------------------------------


class VectorField:
    """X = X^mu d_mu with polynomial components."""

    __slots__ = ("table", "components")

    def __init__(self, table: VarTable, components):
        self.table = table
        comps = tuple(components)
        if len(comps) != len(table):
            raise TableMismatchError("component count does not match the table")
        self.components = comps

    @staticmethod
    def coordinate(table: VarTable, var: str | int) -> "VectorField":
        i = var if isinstance(var, int) else table.index(var)
        comps = [Poly.zero(table)] * len(table)
        comps[i] = Poly.one(table)
        return VectorField(table, comps)

    @staticmethod
    def euler(table: VarTable) -> "VectorField":
        return VectorField(table, [Poly.variable(table, n) for n in table.names])


class OneForm:
    """omega = p_mu dx^mu with polynomial components."""

    __slots__ = ("table", "components")

    def __init__(self, table: VarTable, components):
        self.table = table
        comps = tuple(components)
        if len(comps) != len(table):
            raise TableMismatchError("component count does not match the table")
        self.components = comps

    @staticmethod
    def zero(table: VarTable) -> "OneForm":
        return OneForm(table, [Poly.zero(table)] * len(table))

    @staticmethod
    def coordinate(table: VarTable, var: str | int) -> "OneForm":
        i = var if isinstance(var, int) else table.index(var)
        comps = [Poly.zero(table)] * len(table)
        comps[i] = Poly.one(table)
        return OneForm(table, comps)

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm(self.table, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "OneForm") -> "OneForm":
        return OneForm(self.table, [a - b for a, b in zip(self.components, other.components)])

    def scale(self, c) -> "OneForm":
        return OneForm(self.table, [p.scale(c) for p in self.components])

    def mul_poly(self, p: Poly) -> "OneForm":
        return OneForm(self.table, [p * q for q in self.components])

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components)

    def __eq__(self, other):
        if not isinstance(other, OneForm):
            return NotImplemented
        return self.table == other.table and all(
            a == b for a, b in zip(self.components, other.components))

    def __str__(self):
        parts = [f"({p})*d{name}" for name, p in zip(self.table.names, self.components)
                 if not p.is_zero()]
        return " + ".join(parts) if parts else "0"


class TwoForm:
    """Antisymmetric rank-2 form, stored on index pairs mu < nu."""

    __slots__ = ("table", "components")

    def __init__(self, table: VarTable, components: Dict[Tuple[int, int], Poly] | None = None):
        self.table = table
        clean: Dict[Tuple[int, int], Poly] = {}
        if components:
            for (mu, nu), p in components.items():
                if mu >= nu:
                    raise ValueError("two-form keys must satisfy mu < nu")
                if not p.is_zero():
                    clean[(mu, nu)] = p
        self.components = clean

    @staticmethod
    def zero(table: VarTable) -> "TwoForm":
        return TwoForm(table)

    def __add__(self, other: "TwoForm") -> "TwoForm":
        out = dict(self.components)
        for key, p in other.components.items():
            acc = out.get(key)
            s = p if acc is None else acc + p
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return TwoForm(self.table, out)

    def scale(self, c) -> "TwoForm":
        return TwoForm(self.table, {k: p.scale(c) for k, p in self.components.items()})

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other):
        if not isinstance(other, TwoForm):
            return NotImplemented
        return self.table == other.table and self.components == other.components

    def __str__(self):
        if not self.components:
            return "0"
        names = self.table.names
        parts = [f"({p})*d{names[mu]}^d{names[nu]}"
                 for (mu, nu), p in sorted(self.components.items())]
        return " + ".join(parts)


def lie_derivative(X: VectorField, omega: OneForm) -> OneForm:
    """(L_X omega)_mu = X^nu d_nu(omega_mu) + omega_nu d_mu(X^nu)."""
    if X.table != omega.table:
        raise TableMismatchError("vector field and form live over different tables")
    table = X.table
    n = len(table)
    comps = []
    for mu in range(n):
        acc = Poly.zero(table)
        for nu in range(n):
            acc = acc + X.components[nu] * omega.components[mu].partial(nu)
            acc = acc + omega.components[nu] * X.components[nu].partial(mu)
        comps.append(acc)
    return OneForm(table, comps)


def wedge(a: OneForm, b: OneForm) -> TwoForm:
    """Antisymmetrized product of two one-forms."""
    if a.table != b.table:
        raise TableMismatchError("forms live over different tables")
    table = a.table
    out: Dict[Tuple[int, int], Poly] = {}
    n = len(table)
    for mu in range(n):
        for nu in range(mu + 1, n):
            p = a.components[mu] * b.components[nu] - a.components[nu] * b.components[mu]
            if not p.is_zero():
                out[(mu, nu)] = p
    return TwoForm(table, out)
