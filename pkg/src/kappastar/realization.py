"""Symplectic realizations, reduction checks and the truncated Fock picture.

The reduction statement (pullback of the closed-form product equals the
Wick-Voros product of the pullbacks) is verified extensionally: both sides
are expanded to exact, finite theta series and compared degree by degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .diffop import DiffOp
from .poly import AlgebraError, Poly, VarTable
from .scalars import IMAG, ONE, GaussianRational
from .series import ThetaSeries
from .star import StarProduct, build_star


class Realization:
    """A substitution map from spacetime coordinates to z/zb polynomials."""

    def __init__(self, kind: str, d: int, source: VarTable, target: VarTable,
                 mapping: Dict[str, Poly]):
        self.kind = kind
        self.d = d
        self.source = source
        self.target = target
        self.mapping = mapping
        self._monomial_cache: Dict[tuple, Poly] = {}

    def pullback(self, f):
        """Apply the substitution to a Poly or, order-wise, to a ThetaSeries."""
        if isinstance(f, ThetaSeries):
            return f.map_coeffs(self.pullback)
        if f.table != self.source:
            raise AlgebraError("polynomial does not live over the realization's source table")
        out = Poly.zero(self.target)
        for exp, coeff in f.terms.items():
            image = self._monomial_cache.get(exp)
            if image is None:
                image = Poly.one(self.target)
                for i, k in enumerate(exp):
                    if k:
                        image = image * (self.mapping[self.source.names[i]] ** k)
                self._monomial_cache[exp] = image
            out = out + image.scale(coeff)
        return out


def kappa_realization(d: int) -> Realization:
    """x0 -> sum_i zb_i z_i, x_i -> zb_i."""
    source = VarTable.spacetime(d)
    target = VarTable.complex_plane(d)
    mapping: Dict[str, Poly] = {}
    x0_image = Poly.zero(target)
    for i in range(1, d + 1):
        x0_image = x0_image + Poly.variable(target, f"zb{i}") * Poly.variable(target, f"z{i}")
        mapping[f"x{i}"] = Poly.variable(target, f"zb{i}")
    mapping["x0"] = x0_image
    return Realization("kappa", d, source, target, mapping)


# Pauli matrices as (row, col) -> scalar over indices {1, 2}.
_PAULI = {
    0: {(1, 1): ONE, (2, 2): ONE},
    1: {(1, 2): ONE, (2, 1): ONE},
    2: {(1, 2): -IMAG, (2, 1): IMAG},
    3: {(1, 1): ONE, (2, 2): -ONE},
}


def su2_realization() -> Realization:
    """x^mu -> (1/2) zb^a sigma^mu_{ab} z^b over two complex planes."""
    source = VarTable.spacetime(3)
    target = VarTable.complex_plane(2)
    mapping: Dict[str, Poly] = {}
    for mu in range(4):
        image = Poly.zero(target)
        for (a, b), s in _PAULI[mu].items():
            image = image + (Poly.variable(target, f"zb{a}")
                             * Poly.variable(target, f"z{b}")).scale(s * Fraction(1, 2))
        mapping[f"x{mu}"] = image
    return Realization("su2", 3, source, target, mapping)


@dataclass
class ReductionResult:
    ok: bool
    order: Optional[int] = None
    lhs: Optional[Poly] = None
    rhs: Optional[Poly] = None

    def witness(self) -> str:
        if self.ok:
            return ""
        return (f"mismatch at theta^{self.order}: pullback side {self.lhs} "
                f"vs star side {self.rhs}")


def _compare_series(lhs: ThetaSeries, rhs: ThetaSeries) -> ReductionResult:
    diff = lhs - rhs
    if diff.is_zero():
        return ReductionResult(True)
    order = diff.first_nonzero_order()
    return ReductionResult(False, order, lhs.order_coeff(order), rhs.order_coeff(order))


def verify_reduction_kappa(f: Poly, g: Poly, d: int,
                           kappa: StarProduct | None = None,
                           wv: StarProduct | None = None,
                           realization: Realization | None = None) -> ReductionResult:
    """pullback(f *_kappa g) == pullback(f) *_WV pullback(g), exactly."""
    kappa = kappa or build_star("kappa", d)
    wv = wv or build_star("wick_voros", d)
    realization = realization or kappa_realization(d)
    lhs = realization.pullback(kappa.apply(f, g))
    rhs = wv.apply_series(ThetaSeries.of_poly(realization.pullback(f)),
                          ThetaSeries.of_poly(realization.pullback(g)))
    return _compare_series(lhs, rhs)


def verify_reduction_su2(f: Poly, g: Poly,
                         su2: StarProduct | None = None,
                         wv: StarProduct | None = None,
                         realization: Realization | None = None) -> ReductionResult:
    """Same statement for the su2 product under the Pauli realization.

    f and g must not contain x0; the product's output may, and the pullback
    replaces it by its quadratic image.
    """
    realization = realization or su2_realization()
    i0 = realization.source.index("x0")
    if f.degree_in(i0) > 0 or g.degree_in(i0) > 0:
        raise AlgebraError("su2 reduction inputs must be polynomials in x1, x2, x3")
    su2 = su2 or build_star("su2")
    wv = wv or build_star("wick_voros", 2)
    lhs = realization.pullback(su2.apply(f, g))
    rhs = wv.apply_series(ThetaSeries.of_poly(realization.pullback(f)),
                          ThetaSeries.of_poly(realization.pullback(g)))
    return _compare_series(lhs, rhs)


def compare_moyal_reduction(f: Poly, g: Poly, d: int) -> ThetaSeries:
    """pullback(f) *_M pullback(g) - pullback(f *_kappa g).

    A nonzero result exhibits that reducing the Moyal product does not
    reproduce the closed-form product.
    """
    kappa = build_star("kappa", d)
    moyal = build_star("moyal", d)
    real = kappa_realization(d)
    moyal_side = moyal.apply_series(ThetaSeries.of_poly(real.pullback(f)),
                                    ThetaSeries.of_poly(real.pullback(g)))
    kappa_side = real.pullback(kappa.apply(f, g))
    return moyal_side - kappa_side


def left_right_realizations(d: int) -> Tuple[List[DiffOp], List[DiffOp]]:
    """The operator families x^mu + theta*delta^mu_0 x^nu d_nu and x^mu (1 + theta d_0)."""
    table = VarTable.spacetime(d)
    lefts: List[DiffOp] = []
    rights: List[DiffOp] = []
    d0 = DiffOp.partial(table, "x0")
    euler = DiffOp.euler(table)
    for mu in range(d + 1):
        xmu = DiffOp.from_poly(Poly.variable(table, f"x{mu}"))
        if mu == 0:
            lefts.append(xmu + euler.with_theta(1))
        else:
            lefts.append(xmu)
        rights.append(xmu + DiffOp.from_poly(Poly.variable(table, f"x{mu}")).compose(d0).with_theta(1))
    return lefts, rights


# ---------------------------------------------------------------------------
# Truncated Fock space with exact square-root bookkeeping.
# ---------------------------------------------------------------------------


def _squarefree_split(m: int) -> Tuple[int, int]:
    """m = s^2 * r with r squarefree; returns (s, r).  m is a small integer."""
    if m == 0:
        return (0, 1)
    s, r = 1, 1
    k = 2
    n = m
    while k * k <= n:
        count = 0
        while n % k == 0:
            n //= k
            count += 1
        s *= k ** (count // 2)
        if count % 2:
            r *= k
        k += 1
    r *= n
    return (s, r)


class Radical:
    """Exact sum of q * sqrt(r) terms with rational q and squarefree r."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[int, Fraction] | None = None):
        clean: Dict[int, Fraction] = {}
        if terms:
            for r, q in terms.items():
                if q:
                    clean[r] = q
        self.terms = clean

    @staticmethod
    def sqrt_of(m: int) -> "Radical":
        s, r = _squarefree_split(m)
        if s == 0:
            return Radical()
        return Radical({r: Fraction(s)})

    @staticmethod
    def of_int(n: int) -> "Radical":
        return Radical({1: Fraction(n)}) if n else Radical()

    def __add__(self, other: "Radical") -> "Radical":
        out = dict(self.terms)
        for r, q in other.terms.items():
            s = out.get(r, Fraction(0)) + q
            if s:
                out[r] = s
            else:
                out.pop(r, None)
        return Radical(out)

    def __neg__(self):
        return Radical({r: -q for r, q in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "Radical") -> "Radical":
        out: Dict[int, Fraction] = {}
        for r1, q1 in self.terms.items():
            for r2, q2 in other.terms.items():
                s, r = _squarefree_split(r1 * r2)
                q = q1 * q2 * s
                acc = out.get(r, Fraction(0)) + q
                if acc:
                    out[r] = acc
                else:
                    out.pop(r, None)
        return Radical(out)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Radical):
            return NotImplemented
        return self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for r in sorted(self.terms):
            q = self.terms[r]
            parts.append(str(q) if r == 1 else f"{q}*sqrt({r})")
        return " + ".join(parts)


State = Tuple[int, ...]
SparseOp = Dict[State, Dict[State, Radical]]  # column state -> {row state: entry}


def _op_apply_column(op: SparseOp, col: State) -> Dict[State, Radical]:
    return op.get(col, {})


def _op_compose(a: SparseOp, b: SparseOp) -> SparseOp:
    """(a o b): apply b first."""
    out: SparseOp = {}
    for col, mid in b.items():
        acc: Dict[State, Radical] = {}
        for m_state, m_entry in mid.items():
            for row, a_entry in a.get(m_state, {}).items():
                got = acc.get(row)
                val = m_entry * a_entry if got is None else got + (m_entry * a_entry)
                if val.is_zero():
                    acc.pop(row, None)
                else:
                    acc[row] = val
        if acc:
            out[col] = acc
    return out


def _op_add(a: SparseOp, b: SparseOp) -> SparseOp:
    out: SparseOp = {col: dict(rows) for col, rows in a.items()}
    for col, rows in b.items():
        acc = out.setdefault(col, {})
        for row, entry in rows.items():
            got = acc.get(row)
            val = entry if got is None else got + entry
            if val.is_zero():
                acc.pop(row, None)
            else:
                acc[row] = val
        if not acc:
            out.pop(col, None)
    return out


def _op_neg(a: SparseOp) -> SparseOp:
    return {col: {row: -e for row, e in rows.items()} for col, rows in a.items()}


def _op_sub(a: SparseOp, b: SparseOp) -> SparseOp:
    return _op_add(a, _op_neg(b))


class FockRep:
    """d families of truncated creation/annihilation operators at cutoff M."""

    def __init__(self, d: int, M: int):
        if M < 2:
            raise AlgebraError("Fock cutoff M must be at least 2")
        self.d = d
        self.M = M
        self.states: List[State] = []

        def gen(prefix):
            if len(prefix) == d:
                self.states.append(tuple(prefix))
                return
            for n in range(M + 1):
                gen(prefix + [n])

        gen([])
        self.a: List[SparseOp] = []
        self.adag: List[SparseOp] = []
        for i in range(d):
            lower: SparseOp = {}
            raise_: SparseOp = {}
            for st in self.states:
                n = st[i]
                if n >= 1:
                    dest = list(st)
                    dest[i] = n - 1
                    lower[st] = {tuple(dest): Radical.sqrt_of(n)}
                if n + 1 <= M:
                    dest = list(st)
                    dest[i] = n + 1
                    raise_[st] = {tuple(dest): Radical.sqrt_of(n + 1)}
            self.a.append(lower)
            self.adag.append(raise_)

    def number_total(self) -> SparseOp:
        """X0 = sum_i adag_i a_i."""
        out: SparseOp = {}
        for i in range(self.d):
            out = _op_add(out, _op_compose(self.adag[i], self.a[i]))
        return out

    def coordinate(self, i: int) -> SparseOp:
        """X^i = adag_i."""
        return self.adag[i - 1]


@dataclass
class IdentityReport:
    name: str
    failing_states: List[State] = field(default_factory=list)
    relevant: Tuple[int, ...] = ()

    @property
    def holds_everywhere(self) -> bool:
        return not self.failing_states

    def boundary_only(self, M: int) -> bool:
        """All failures sit at the cutoff in a relevant occupation slot.

        Equivalently: the identity holds on the sub-cutoff subspace spanned
        by states whose relevant occupations are all below M.
        """
        return all(any(st[i - 1] == M for i in self.relevant)
                   for st in self.failing_states)


@dataclass
class FockReport:
    d: int
    M: int
    identities: List[IdentityReport]

    def all_boundary_only(self) -> bool:
        return all(rep.boundary_only(self.M) for rep in self.identities)


def _defect_states(defect: SparseOp) -> List[State]:
    return sorted(col for col, rows in defect.items() if rows)


def fock_check(d: int, M: int) -> FockReport:
    """Check the operator relations on the truncated space and report boundaries.

    Identities checked: [X0, X^i] = X^i, [X^i, X^j] = 0 and the canonical
    [a_i, a_j^dag] = delta_ij.  Failures are reported per basis state; they
    are expected only at top occupation states (the cutoff boundary).
    """
    rep = FockRep(d, M)
    x0 = rep.number_total()
    reports: List[IdentityReport] = []

    for i in range(1, d + 1):
        xi = rep.coordinate(i)
        comm = _op_sub(_op_compose(x0, xi), _op_compose(xi, x0))
        defect = _op_sub(comm, xi)
        reports.append(IdentityReport(f"[X0, X{i}] = X{i}", _defect_states(defect), (i,)))

    for i in range(1, d + 1):
        for j in range(i + 1, d + 1):
            xi, xj = rep.coordinate(i), rep.coordinate(j)
            defect = _op_sub(_op_compose(xi, xj), _op_compose(xj, xi))
            reports.append(IdentityReport(f"[X{i}, X{j}] = 0", _defect_states(defect), (i, j)))

    identity_op: SparseOp = {st: {st: Radical.of_int(1)} for st in rep.states}
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            comm = _op_sub(_op_compose(rep.a[i - 1], rep.adag[j - 1]),
                           _op_compose(rep.adag[j - 1], rep.a[i - 1]))
            defect = _op_sub(comm, identity_op) if i == j else comm
            reports.append(IdentityReport(
                f"[a{i}, adag{j}] = {'1' if i == j else '0'}",
                _defect_states(defect), (i, j)))

    return FockReport(d, M, reports)
