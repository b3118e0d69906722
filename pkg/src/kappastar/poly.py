"""Variable tables, sparse multivariate polynomials and rational functions.

A Poly is a map from exponent vectors (one non-negative integer per variable
of its VarTable) to nonzero GaussianRational coefficients.  All arithmetic is
exact and canonical: two polynomials are equal iff their term maps are equal.

Monomial printing order is graded lexicographic over the VarTable order
(higher total degree first, then lexicographically larger exponent vector),
which keeps every printed result byte-deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

from .scalars import ONE, ZERO, GaussianRational, format_scalar

Exponent = Tuple[int, ...]


class AlgebraError(ValueError):
    """Base class for exact-algebra usage errors."""


class TableMismatchError(AlgebraError):
    pass


class UnknownVariableError(AlgebraError):
    pass


class SubstitutionError(AlgebraError):
    pass


# kinds: spacetime coordinate, holomorphic, antiholomorphic
KIND_X = "x"
KIND_Z = "z"
KIND_ZBAR = "zb"


class VarTable:
    """Ordered list of named, kinded variables.

    Spacetime tables hold x0..xd (n = d+1 variables); complex-plane tables
    hold z1..zd followed by zb1..zbd.  z and zb commute as ordinary
    polynomial variables; noncommutativity lives only in star products.
    """

    __slots__ = ("names", "kinds", "d", "_index")

    def __init__(self, names: Iterable[str], kinds: Iterable[str], d: int):
        self.names = tuple(names)
        self.kinds = tuple(kinds)
        self.d = d
        if len(self.names) != len(set(self.names)):
            raise AlgebraError("variable names must be unique")
        if len(self.names) != len(self.kinds):
            raise AlgebraError("names and kinds must have equal length")
        self._index = {name: i for i, name in enumerate(self.names)}

    @staticmethod
    def spacetime(d: int) -> "VarTable":
        if d < 1:
            raise AlgebraError("dimension d must be >= 1")
        names = [f"x{mu}" for mu in range(d + 1)]
        return VarTable(names, [KIND_X] * (d + 1), d)

    @staticmethod
    def complex_plane(d: int) -> "VarTable":
        if d < 1:
            raise AlgebraError("dimension d must be >= 1")
        names = [f"z{i}" for i in range(1, d + 1)] + [f"zb{i}" for i in range(1, d + 1)]
        kinds = [KIND_Z] * d + [KIND_ZBAR] * d
        return VarTable(names, kinds, d)

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {name!r}") from None

    def spatial_indices(self) -> Tuple[int, ...]:
        """Indices of x1..xd (spacetime tables only)."""
        return tuple(i for i, k in enumerate(self.kinds) if k == KIND_X and self.names[i] != "x0")

    def z_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, k in enumerate(self.kinds) if k == KIND_Z)

    def zbar_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, k in enumerate(self.kinds) if k == KIND_ZBAR)

    def zero_exp(self) -> Exponent:
        return (0,) * len(self.names)

    def unit_exp(self, i: int) -> Exponent:
        e = [0] * len(self.names)
        e[i] = 1
        return tuple(e)

    def __eq__(self, other):
        if not isinstance(other, VarTable):
            return NotImplemented
        return self.names == other.names and self.kinds == other.kinds and self.d == other.d

    def __hash__(self):
        return hash((self.names, self.kinds, self.d))

    def __repr__(self):
        return f"VarTable({list(self.names)!r}, d={self.d})"


def _check_same_table(a: "Poly", b: "Poly"):
    if a.table != b.table:
        raise TableMismatchError("polynomials live over different variable tables")


def exp_add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def exp_total(a: Exponent) -> int:
    return sum(a)


def grlex_key(e: Exponent):
    return (exp_total(e), e)


class Poly:
    """Sparse exact polynomial over a VarTable."""

    __slots__ = ("table", "terms")

    def __init__(self, table: VarTable, terms: Mapping[Exponent, GaussianRational] | None = None):
        self.table = table
        clean: Dict[Exponent, GaussianRational] = {}
        if terms:
            for exp, coeff in terms.items():
                coeff = GaussianRational.of(coeff)
                if not coeff.is_zero():
                    clean[exp] = coeff
        self.terms = clean

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(table: VarTable) -> "Poly":
        return Poly(table)

    @staticmethod
    def constant(table: VarTable, value) -> "Poly":
        return Poly(table, {table.zero_exp(): GaussianRational.of(value)})

    @staticmethod
    def one(table: VarTable) -> "Poly":
        return Poly.constant(table, 1)

    @staticmethod
    def variable(table: VarTable, name: str) -> "Poly":
        return Poly(table, {table.unit_exp(table.index(name)): ONE})

    @staticmethod
    def monomial(table: VarTable, exp: Exponent, coeff=1) -> "Poly":
        return Poly(table, {tuple(exp): GaussianRational.of(coeff)})

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exp: Exponent) -> GaussianRational:
        return self.terms.get(tuple(exp), ZERO)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((exp_total(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        _check_same_table(self, other)
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            acc = out.get(exp)
            s = coeff if acc is None else acc + coeff
            if s.is_zero():
                out.pop(exp, None)
            else:
                out[exp] = s
        p = Poly.__new__(Poly)
        p.table = self.table
        p.terms = out
        return p

    def __neg__(self) -> "Poly":
        p = Poly.__new__(Poly)
        p.table = self.table
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        _check_same_table(self, other)
        out: Dict[Exponent, GaussianRational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = exp_add(e1, e2)
                prod = c1 * c2
                acc = out.get(exp)
                s = prod if acc is None else acc + prod
                if s.is_zero():
                    out.pop(exp, None)
                else:
                    out[exp] = s
        p = Poly.__new__(Poly)
        p.table = self.table
        p.terms = out
        return p

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "Poly":
        c = GaussianRational.of(c)
        if c.is_zero():
            return Poly.zero(self.table)
        p = Poly.__new__(Poly)
        p.table = self.table
        p.terms = {e: c * v for e, v in self.terms.items()}
        return p

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial exponent must be a non-negative integer")
        result = Poly.one(self.table)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- calculus ---------------------------------------------------------

    def partial(self, var: str | int) -> "Poly":
        """Exact partial derivative with respect to one variable."""
        i = var if isinstance(var, int) else self.table.index(var)
        if not 0 <= i < len(self.table):
            raise UnknownVariableError(f"variable index {i} out of range")
        out: Dict[Exponent, GaussianRational] = {}
        for exp, coeff in self.terms.items():
            k = exp[i]
            if k == 0:
                continue
            new = list(exp)
            new[i] = k - 1
            out[tuple(new)] = GaussianRational._mk(coeff.re * k, coeff.im * k)
        p = Poly.__new__(Poly)
        p.table = self.table
        p.terms = out
        return p

    def partial_word(self, word: Exponent) -> "Poly":
        p = self
        for i, k in enumerate(word):
            for _ in range(k):
                p = p.partial(i)
                if p.is_zero():
                    return p
        return p

    def substitute(self, mapping: Mapping[str, "Poly"], target: VarTable | None = None) -> "Poly":
        """Simultaneous substitution of variables by polynomials.

        Every variable actually occurring in self must be mapped; the images
        must all live over one table (the target).
        """
        images: Dict[int, Poly] = {}
        for name, image in mapping.items():
            images[self.table.index(name)] = image
        tgt = target
        for img in images.values():
            if tgt is None:
                tgt = img.table
            elif img.table != tgt:
                raise SubstitutionError("substitution images live over different tables")
        if tgt is None:
            tgt = self.table
        used = set()
        for exp in self.terms:
            for i, k in enumerate(exp):
                if k > 0:
                    used.add(i)
        missing = sorted(i for i in used if i not in images)
        if missing:
            names = ", ".join(self.table.names[i] for i in missing)
            raise SubstitutionError(f"substitution map does not cover used variable(s): {names}")

        power_cache: Dict[Tuple[int, int], Poly] = {}

        def img_pow(i: int, k: int) -> Poly:
            key = (i, k)
            got = power_cache.get(key)
            if got is None:
                got = images[i] ** k
                power_cache[key] = got
            return got

        result = Poly.zero(tgt)
        for exp, coeff in self.terms.items():
            term = Poly.constant(tgt, coeff)
            for i, k in enumerate(exp):
                if k:
                    term = term * img_pow(i, k)
            result = result + term
        return result

    # -- comparison / canonical form ----------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def canonical_key(self):
        """Hashable canonical form (used for dedup and witness reporting)."""
        items = sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)
        return tuple((e, c.re, c.im) for e, c in items)

    def monomial_content(self) -> Exponent:
        """Componentwise minimum exponent over all terms (zero poly: all-zero)."""
        if not self.terms:
            return self.table.zero_exp()
        exps = list(self.terms)
        return tuple(min(e[i] for e in exps) for i in range(len(self.table)))

    def divide_monomial(self, content: Exponent) -> "Poly":
        out = {}
        for exp, coeff in self.terms.items():
            new = tuple(a - b for a, b in zip(exp, content))
            if any(k < 0 for k in new):
                raise AlgebraError("monomial does not divide all terms")
            out[new] = coeff
        return Poly(self.table, out)

    # -- printing -----------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def _monomial_str(self, exp: Exponent) -> str:
        parts = []
        for name, k in zip(self.table.names, exp):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for exp, coeff in self.sorted_terms():
            mon = self._monomial_str(exp)
            cs = format_scalar(coeff)
            if not mon:
                pieces.append(cs)
            elif coeff.is_one():
                pieces.append(mon)
            elif coeff == GaussianRational(-1):
                pieces.append(f"-{mon}")
            else:
                pieces.append(f"{cs}*{mon}")
        out = pieces[0]
        for piece in pieces[1:]:
            if piece.startswith("-"):
                out += f" - {piece[1:]}"
            else:
                out += f" + {piece}"
        return out

    def __repr__(self):
        return f"Poly({self})"


class RationalFn:
    """Quotient of two polynomials with nonzero denominator.

    Reduction extracts the common monomial content and normalizes the
    denominator's leading coefficient to 1 (no full multivariate gcd, which
    the workbench does not need).  Equality is exact cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly):
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        _check_same_table(num, den)
        num, den = _reduce_fraction(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def from_poly(p: Poly) -> "RationalFn":
        return RationalFn(p, Poly.one(p.table))

    @property
    def table(self) -> VarTable:
        return self.num.table

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "RationalFn") -> "RationalFn":
        return RationalFn(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RationalFn(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return RationalFn(self.num.scale(other), self.den)
        if isinstance(other, Poly):
            return RationalFn(self.num * other, self.den)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: "RationalFn") -> "RationalFn":
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFn(self.num * other.den, self.den * other.num)

    def partial(self, var: str | int) -> "RationalFn":
        """Quotient-rule derivative, reduced."""
        dn = self.num.partial(var)
        dd = self.den.partial(var)
        return RationalFn(dn * self.den - self.num * dd, self.den * self.den)

    def __eq__(self, other):
        if isinstance(other, Poly):
            other = RationalFn.from_poly(other)
        if not isinstance(other, RationalFn):
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __str__(self):
        num = str(self.num)
        if self.den == Poly.one(self.den.table):
            return num
        return f"({num})/({self.den})"

    def __repr__(self):
        return f"RationalFn({self})"


def _reduce_fraction(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    if num.is_zero():
        return num, Poly.one(den.table)
    cn = num.monomial_content()
    cd = den.monomial_content()
    common = tuple(min(a, b) for a, b in zip(cn, cd))
    if any(common):
        num = num.divide_monomial(common)
        den = den.divide_monomial(common)
    lead_exp = max(den.terms, key=grlex_key)
    lead = den.terms[lead_exp]
    if not lead.is_one():
        inv = lead.inverse()
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den
