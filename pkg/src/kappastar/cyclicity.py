"""Integration-by-parts engine over an abstract measure density h(x).

An IBPExpression is a finite sum of terms

    coeff(x) * d^(hword) h * d^(fword) f * d^(gword) g

at a fixed theta order, with f, g, h abstract.  Normalization repeatedly
moves derivatives off the f slot (discarding boundary terms, which is valid
on compactly supported test functions; see the exact bump-surrogate check in
the test suite).  Conditions are the coefficient expressions in h grouped by
the surviving g word; the reduction step decides membership of a condition
in the span of monomial multiples of derivative consequences of the assumed
rules by exact sparse elimination over the Gaussian rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .poly import AlgebraError, Exponent, Poly, RationalFn, VarTable, exp_add, grlex_key
from .scalars import ONE, ZERO, GaussianRational
from .star import StarProduct

TermKey = Tuple[Exponent, Exponent, Exponent]  # (hword, fword, gword)


class IBPExpression:
    """Theta-order coefficient of an integrand in abstract f, g, h."""

    __slots__ = ("table", "order", "terms")

    def __init__(self, table: VarTable, order: int,
                 terms: Dict[TermKey, Poly] | None = None):
        self.table = table
        self.order = order
        clean: Dict[TermKey, Poly] = {}
        if terms:
            for key, coeff in terms.items():
                if not coeff.is_zero():
                    clean[key] = coeff
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def add_term(self, hword: Exponent, fword: Exponent, gword: Exponent, coeff: Poly):
        key = (tuple(hword), tuple(fword), tuple(gword))
        acc = self.terms.get(key)
        s = coeff if acc is None else acc + coeff
        if s.is_zero():
            self.terms.pop(key, None)
        else:
            self.terms[key] = s

    def __neg__(self):
        return IBPExpression(self.table, self.order, {k: -c for k, c in self.terms.items()})

    def swapped_slots(self) -> "IBPExpression":
        return IBPExpression(self.table, self.order,
                             {(h, g, f): c for (h, f, g), c in self.terms.items()})

    def instantiate(self, f: Poly, g: Poly, h: Poly) -> Poly:
        """Substitute concrete polynomials for the abstract slots."""
        out = Poly.zero(self.table)
        for (hw, fw, gw), coeff in self.terms.items():
            dh = h.partial_word(hw)
            if dh.is_zero():
                continue
            df = f.partial_word(fw)
            if df.is_zero():
                continue
            dg = g.partial_word(gw)
            if dg.is_zero():
                continue
            out = out + coeff * dh * df * dg
        return out

    def __eq__(self, other):
        if not isinstance(other, IBPExpression):
            return NotImplemented
        return (self.table == other.table and self.order == other.order
                and self.terms == other.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __str__(self):
        if not self.terms:
            return "0"

        def word(label, w):
            return "".join(f"d_{self.table.names[i]}" * k for i, k in enumerate(w)) + label

        pieces = []
        for (hw, fw, gw), coeff in self.sorted_terms():
            pieces.append(f"({coeff})*{word('h', hw)}*{word('f', fw)}*{word('g', gw)}")
        return " + ".join(pieces)


def commutator_integrand(product: StarProduct, order: int) -> IBPExpression:
    """The theta^order coefficient of h*(f star g - g star f), slots abstract."""
    table = product.table
    expr = IBPExpression(table, order)
    if order == 0:
        return expr
    bidiff = product.order_term(order)
    for (left, right, grade), mid in bidiff.terms.items():
        if grade != order:
            raise AlgebraError("star product term carries an unexpected theta grade")
        zero = table.zero_exp()
        expr.add_term(zero, left, right, mid)
        expr.add_term(zero, right, left, -mid)
    return expr


def ibp_normalize(expr: IBPExpression, onto: str = "f") -> IBPExpression:
    """Move every derivative off the chosen slot by repeated integration by parts.

    Each step rewrites c * d^a h * d_mu d^b f * d^c g into the three terms of
    -d_mu(c * d^a h * d^c g) * d^b f; boundary contributions are discarded.
    """
    if onto not in ("f", "g"):
        raise AlgebraError("normalization slot must be 'f' or 'g'")
    work = expr if onto == "f" else expr.swapped_slots()
    terms = dict(work.terms)
    while True:
        pending = [key for key in terms if any(key[1])]
        if not pending:
            break
        out: Dict[TermKey, Poly] = {}

        def add(key: TermKey, coeff: Poly):
            acc = out.get(key)
            s = coeff if acc is None else acc + coeff
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s

        for key, coeff in terms.items():
            hw, fw, gw = key
            if not any(fw):
                add(key, coeff)
                continue
            mu = next(i for i, k in enumerate(fw) if k)
            e_mu = work.table.unit_exp(mu)
            reduced = tuple(k - e for k, e in zip(fw, e_mu))
            add((hw, reduced, gw), -coeff.partial(mu))
            add((exp_add(hw, e_mu), reduced, gw), -coeff)
            add((hw, reduced, exp_add(gw, e_mu)), -coeff)
        terms = out
    result = IBPExpression(work.table, work.order, terms)
    return result if onto == "f" else result.swapped_slots()


# -- conditions -----------------------------------------------------------------


HExpr = Dict[Exponent, Poly]  # hword -> polynomial coefficient


def _hexpr_canonicalize(table: VarTable, terms: HExpr) -> HExpr:
    """Divide out common monomial and rational content; normalize the sign."""
    clean = {hw: c for hw, c in terms.items() if not c.is_zero()}
    if not clean:
        return {}
    nvars = len(table)
    content = [min(min(e[i] for e in c.terms) for c in clean.values())
               for i in range(nvars)]
    content = tuple(content)
    if any(content):
        clean = {hw: c.divide_monomial(content) for hw, c in clean.items()}
    nums: List[int] = []
    dens: List[int] = []
    for c in clean.values():
        for coeff in c.terms.values():
            for part in (coeff.re, coeff.im):
                if part:
                    nums.append(abs(part.numerator))
                    dens.append(part.denominator)
    from math import gcd, lcm
    g = 0
    for n in nums:
        g = gcd(g, n)
    m = 1
    for dd in dens:
        m = lcm(m, dd)
    scale = Fraction(m, g) if g else Fraction(1)
    lead_key = min(clean)
    lead = clean[lead_key]
    lead_coeff = lead.terms[min(lead.terms, key=grlex_key)]
    flip = (lead_coeff.re < 0) or (lead_coeff.re == 0 and lead_coeff.im < 0)
    if flip:
        scale = -scale
    if scale != 1:
        clean = {hw: c.scale(scale) for hw, c in clean.items()}
    return clean


@dataclass
class Condition:
    """One vanishing requirement on h: sum of coeff * d^(hword) h terms."""

    table: VarTable
    terms: HExpr
    gwords: Tuple[Exponent, ...] = ()

    def canonical_key(self):
        return tuple(sorted((hw, c.canonical_key()) for hw, c in self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def max_hword_order(self) -> int:
        return max((sum(hw) for hw in self.terms), default=0)

    def max_coeff_degree(self) -> int:
        return max((c.total_degree() for c in self.terms.values()), default=0)

    def __str__(self):
        if not self.terms:
            return "0 = 0"
        pieces = []
        for hw in sorted(self.terms):
            coeff = self.terms[hw]
            dh = "".join(f"d_{self.table.names[i]}" * k for i, k in enumerate(hw)) + "h"
            pieces.append(f"({coeff})*{dh}")
        return " + ".join(pieces) + " = 0"


@dataclass
class ConditionSet:
    table: VarTable
    conditions: Tuple[Condition, ...]

    def __len__(self):
        return len(self.conditions)

    def canonical_keys(self):
        return [c.canonical_key() for c in self.conditions]

    def __eq__(self, other):
        if not isinstance(other, ConditionSet):
            return NotImplemented
        return self.table == other.table and self.canonical_keys() == other.canonical_keys()

    def __str__(self):
        if not self.conditions:
            return "(no conditions)"
        return "\n".join(str(c) for c in self.conditions)


def extract_conditions(expr: IBPExpression, normalize: bool = True,
                       grouped_slot: str = "g") -> ConditionSet:
    """Group a normalized expression by the surviving derivative word.

    Each group is one condition on h; conditions are content-reduced and
    deduplicated, and by default sign-normalized to a canonical form.
    """
    slot = 1 if grouped_slot == "f" else 2
    other = 2 if grouped_slot == "f" else 1
    groups: Dict[Exponent, HExpr] = {}
    for key, coeff in expr.terms.items():
        if any(key[other]):
            raise AlgebraError("expression is not normalized onto the grouped slot")
        hw = key[0]
        gw = key[slot]
        grp = groups.setdefault(gw, {})
        acc = grp.get(hw)
        s = coeff if acc is None else acc + coeff
        if s.is_zero():
            grp.pop(hw, None)
        else:
            grp[hw] = s
    dedup: Dict[tuple, Condition] = {}
    for gw in sorted(groups):
        terms = _hexpr_canonicalize(expr.table, groups[gw]) if normalize else \
            {hw: c for hw, c in groups[gw].items() if not c.is_zero()}
        if not terms:
            continue
        cond = Condition(expr.table, terms, (gw,))
        key = cond.canonical_key()
        if key in dedup:
            dedup[key] = Condition(expr.table, dedup[key].terms,
                                   dedup[key].gwords + (gw,))
        else:
            dedup[key] = cond
    ordered = sorted(dedup.values(), key=lambda c: c.canonical_key())
    return ConditionSet(expr.table, tuple(ordered))


def first_order_rules(table: VarTable) -> ConditionSet:
    """The measure equations: d0 h = 0 and x^k d_k h + d*h = 0."""
    d = table.d
    zero = table.zero_exp()
    cond1 = Condition(table, {table.unit_exp(table.index("x0")): Poly.one(table)})
    euler_terms: HExpr = {zero: Poly.constant(table, d)}
    for k in table.spatial_indices():
        euler_terms[table.unit_exp(k)] = Poly.variable(table, table.names[k])
    cond2 = Condition(table, euler_terms)
    ordered = sorted([cond1, cond2], key=lambda c: c.canonical_key())
    return ConditionSet(table, tuple(ordered))


# -- rule reduction ----------------------------------------------------------------


def _hexpr_partial(table: VarTable, terms: HExpr, mu: int) -> HExpr:
    out: HExpr = {}
    e_mu = table.unit_exp(mu)
    for hw, coeff in terms.items():
        dc = coeff.partial(mu)
        if not dc.is_zero():
            acc = out.get(hw)
            out[hw] = dc if acc is None else acc + dc
        key = exp_add(hw, e_mu)
        acc = out.get(key)
        out[key] = coeff if acc is None else acc + coeff
    return {hw: c for hw, c in out.items() if not c.is_zero()}


def _hexpr_mul_monomial(terms: HExpr, table: VarTable, mono: Exponent) -> HExpr:
    m = Poly.monomial(table, mono)
    return {hw: c * m for hw, c in terms.items()}


BasisKey = Tuple[Exponent, Exponent]  # (coefficient monomial, hword)


def _vectorize(terms: HExpr) -> Dict[BasisKey, GaussianRational]:
    vec: Dict[BasisKey, GaussianRational] = {}
    for hw, coeff in terms.items():
        for mono, c in coeff.terms.items():
            key = (mono, hw)
            acc = vec.get(key, ZERO) + c
            if acc.is_zero():
                vec.pop(key, None)
            else:
                vec[key] = acc
    return vec


def _basis_order(key: BasisKey):
    mono, hw = key
    return (sum(hw), hw, sum(mono), mono)


def _pivot(vec: Dict[BasisKey, GaussianRational]) -> BasisKey:
    return max(vec, key=_basis_order)


def _row_reduce(vec, echelon):
    vec = dict(vec)
    while vec:
        piv = _pivot(vec)
        row = echelon.get(piv)
        if row is None:
            return vec, piv
        factor = vec[piv]
        for key, val in row.items():
            acc = vec.get(key, ZERO) - factor * val
            if acc.is_zero():
                vec.pop(key, None)
            else:
                vec[key] = acc
    return vec, None


@dataclass
class ReducedCondition:
    original: Condition
    reduced: bool
    scalar: Optional[GaussianRational] = None  # set when residue is scalar * h
    residual: Optional[Condition] = None       # set when irreducible

    @property
    def vanishes(self) -> bool:
        return self.reduced and self.scalar is None

    @property
    def forces_h_zero(self) -> bool:
        return self.reduced and self.scalar is not None and not self.scalar.is_zero()

    def describe(self) -> str:
        if self.vanishes:
            return "reduces to 0 (implied by the rules)"
        if self.forces_h_zero:
            return f"reduces to ({self.scalar})*h = 0"
        return f"not reducible within the rewrite class; residual: {self.residual}"


@dataclass
class RuleReduction:
    rules: ConditionSet
    results: List[ReducedCondition] = field(default_factory=list)

    def all_implied(self) -> bool:
        return all(r.vanishes for r in self.results)

    def obstructions(self) -> List[ReducedCondition]:
        return [r for r in self.results if r.forces_h_zero]

    def flagged(self) -> List[ReducedCondition]:
        return [r for r in self.results if not r.reduced]


def reduce_with_rules(conds: ConditionSet, rules: ConditionSet) -> RuleReduction:
    """Reduce each condition modulo monomial multiples of derivative
    consequences of the rules, by exact sparse elimination.

    The generated relation family contains every instance of the Euler
    eigenvalue rewrite (commuting a contracted x^mu d_mu across a derivative
    word costs the word's weight), so e.g. x^rho x^mu d_rho d_mu h reduces to
    d(d+1) h when the rules are the first-order measure equations.
    """
    table = conds.table
    max_order = max((c.max_hword_order() for c in conds.conditions), default=0)
    max_degree = max((c.max_coeff_degree() for c in conds.conditions), default=0)
    for rule in rules.conditions:
        max_order = max(max_order, rule.max_hword_order())
        max_degree = max(max_degree, rule.max_coeff_degree())

    nvars = len(table)
    monomials = list(_words_up_to(nvars, max_degree))

    echelon: Dict[BasisKey, Dict[BasisKey, GaussianRational]] = {}

    def insert(vec):
        vec, piv = _row_reduce(vec, echelon)
        if piv is None:
            return
        inv = vec[piv].inverse()
        echelon[piv] = {k: v * inv for k, v in vec.items()}

    for rule in rules.conditions:
        # derivative closure of the rule up to the conditions' hword order
        derived: Dict[Exponent, HExpr] = {table.zero_exp(): dict(rule.terms)}
        frontier = [table.zero_exp()]
        while frontier:
            word = frontier.pop()
            terms = derived[word]
            for mu in range(nvars):
                new_word = exp_add(word, table.unit_exp(mu))
                if sum(new_word) > max_order or new_word in derived:
                    continue
                derived[new_word] = _hexpr_partial(table, terms, mu)
                frontier.append(new_word)
        for terms in derived.values():
            for mono in monomials:
                inst = _hexpr_mul_monomial(terms, table, mono) if any(mono) else terms
                vec = _vectorize(inst)
                if vec:
                    insert(vec)

    report = RuleReduction(rules)
    unit_key = (table.zero_exp(), table.zero_exp())
    for cond in conds.conditions:
        vec = _vectorize(cond.terms)
        residual = _row_reduce_full(vec, echelon)
        if not residual:
            report.results.append(ReducedCondition(cond, True))
        elif set(residual) == {unit_key}:
            report.results.append(ReducedCondition(cond, True, scalar=residual[unit_key]))
        else:
            terms: HExpr = {}
            for (mono, hw), c in residual.items():
                acc = terms.get(hw, Poly.zero(table))
                terms[hw] = acc + Poly.monomial(table, mono, c)
            report.results.append(ReducedCondition(
                cond, False, residual=Condition(table, terms)))
    return report


def _row_reduce_full(vec, echelon):
    """Eliminate every reducible component, not only leading ones."""
    vec = dict(vec)
    done: Dict[BasisKey, GaussianRational] = {}
    while vec:
        piv = _pivot(vec)
        row = echelon.get(piv)
        if row is None:
            done[piv] = vec.pop(piv)
            continue
        factor = vec[piv]
        for key, val in row.items():
            if key in done:
                done[key] = done[key] - factor * val
                if done[key].is_zero():
                    done.pop(key)
                continue
            acc = vec.get(key, ZERO) - factor * val
            if acc.is_zero():
                vec.pop(key, None)
            else:
                vec[key] = acc
    return {k: v for k, v in done.items() if not v.is_zero()}


def _words_up_to(nvars: int, bound: int):
    from .twist import _words_of_weight
    for n in range(bound + 1):
        yield from _words_of_weight(nvars, n)


# -- measure candidates -------------------------------------------------------------


class PowerMeasure:
    """h = base(x)^exponent with a rational exponent; exact derivative closure.

    Every derivative word applied to h is a finite sum p_j(x) * base^(e-j);
    a residual vanishes iff the polynomial sum p_j * base^(J-j) does, which
    is an exact identity test even for fractional exponents.
    """

    def __init__(self, name: str, base: Poly, exponent: Fraction):
        if base.is_zero():
            raise AlgebraError("measure base must be nonzero")
        self.name = name
        self.base = base
        self.exponent = Fraction(exponent)
        self.table = base.table
        self._cache: Dict[Exponent, Dict[int, Poly]] = {
            base.table.zero_exp(): {0: Poly.one(base.table)}}

    def derivative(self, hword: Exponent) -> Dict[int, Poly]:
        hword = tuple(hword)
        got = self._cache.get(hword)
        if got is not None:
            return got
        mu = next(i for i, k in enumerate(hword) if k)
        prev_word = tuple(k - (1 if i == mu else 0) for i, k in enumerate(hword))
        prev = self.derivative(prev_word)
        out: Dict[int, Poly] = {}
        dbase = self.base.partial(mu)
        for j, p in prev.items():
            dp = p.partial(mu)
            if not dp.is_zero():
                acc = out.get(j, Poly.zero(self.table))
                out[j] = acc + dp
            factor_num = self.exponent - j
            if factor_num != 0 and not dbase.is_zero():
                scaled = (p * dbase).scale(factor_num)
                acc = out.get(j + 1, Poly.zero(self.table))
                out[j + 1] = acc + scaled
        out = {j: p for j, p in out.items() if not p.is_zero()}
        self._cache[hword] = out
        return out

    def condition_residual(self, cond: Condition) -> Tuple[bool, str]:
        acc: Dict[int, Poly] = {}
        for hw, coeff in cond.terms.items():
            for j, p in self.derivative(hw).items():
                got = acc.get(j, Poly.zero(self.table))
                acc[j] = got + coeff * p
        acc = {j: p for j, p in acc.items() if not p.is_zero()}
        if not acc:
            return True, "0"
        jmax = max(acc)
        combined = Poly.zero(self.table)
        for j, p in acc.items():
            combined = combined + p * (self.base ** (jmax - j))
        if combined.is_zero():
            return True, "0"
        parts = [f"({p})*B^({self.exponent - j})" for j, p in sorted(acc.items())]
        return False, " + ".join(parts)

    def __repr__(self):
        return f"PowerMeasure({self.name})"


class RationalMeasure:
    """h given as an exact rational function; derivatives via the quotient rule."""

    def __init__(self, name: str, h: RationalFn):
        self.name = name
        self.h = h
        self.table = h.table
        self._cache: Dict[Exponent, RationalFn] = {h.table.zero_exp(): h}

    def derivative(self, hword: Exponent) -> RationalFn:
        hword = tuple(hword)
        got = self._cache.get(hword)
        if got is not None:
            return got
        mu = next(i for i, k in enumerate(hword) if k)
        prev_word = tuple(k - (1 if i == mu else 0) for i, k in enumerate(hword))
        out = self.derivative(prev_word).partial(mu)
        self._cache[hword] = out
        return out

    def condition_residual(self, cond: Condition) -> Tuple[bool, str]:
        acc = RationalFn.from_poly(Poly.zero(self.table))
        for hw, coeff in cond.terms.items():
            acc = acc + self.derivative(hw) * coeff
        if acc.is_zero():
            return True, "0"
        return False, str(acc)

    def __repr__(self):
        return f"RationalMeasure({self.name})"


def standard_candidates(d: int, power_sum_k: Tuple[int, ...] = (2, 3)) -> List[PowerMeasure]:
    """The three solution families at dimension d."""
    table = VarTable.spacetime(d)
    radius_sq = Poly.zero(table)
    prod = Poly.one(table)
    for k in table.spatial_indices():
        xk = Poly.variable(table, table.names[k])
        radius_sq = radius_sq + xk * xk
        prod = prod * xk
    out = [
        PowerMeasure("r^(-d)", radius_sq, Fraction(-d, 2)),
        PowerMeasure("(prod_i x_i)^(-1)", prod, Fraction(-1)),
    ]
    for k in power_sum_k:
        base = Poly.zero(table)
        for idx in table.spatial_indices():
            base = base + Poly.variable(table, table.names[idx]) ** k
        out.append(PowerMeasure(f"(sum_i x_i^{k})^(-{d}/{k})", base, Fraction(-d, k)))
    return out


@dataclass
class CandidateConditionResult:
    condition: str
    passed: bool
    residual: str


@dataclass
class CandidateReport:
    name: str
    order: int
    results: List[CandidateConditionResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def check_candidate(measure, product: StarProduct, order: int) -> CandidateReport:
    """Evaluate the order's cyclicity conditions on a concrete measure."""
    expr = ibp_normalize(commutator_integrand(product, order))
    conds = extract_conditions(expr)
    results = []
    for cond in conds.conditions:
        ok, residual = measure.condition_residual(cond)
        results.append(CandidateConditionResult(str(cond), ok, residual))
    return CandidateReport(getattr(measure, "name", repr(measure)), order, results)


# -- exact box integration for the bump-surrogate check -------------------------------


def box_integral(p: Poly, bounds: List[Tuple[Fraction, Fraction]]) -> GaussianRational:
    """Exact integral of a polynomial over a rectangular box."""
    if len(bounds) != len(p.table):
        raise AlgebraError("bounds must cover every variable")
    total = ZERO
    for exp, coeff in p.terms.items():
        factor = ONE
        for k, (lo, hi) in zip(exp, bounds):
            lo_f, hi_f = Fraction(lo), Fraction(hi)
            factor = factor * (Fraction(hi_f ** (k + 1) - lo_f ** (k + 1), k + 1))
        total = total + coeff * factor
    return total
