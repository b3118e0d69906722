import pytest

from kappastar.diffop import (BiDiffOp, DiffOp, OneForm, VectorField, lie_derivative,
                              wedge)
from kappastar.poly import Poly, VarTable
from kappastar.realization import left_right_realizations
from kappastar.series import ThetaSeries


@pytest.fixture
def t2():
    return VarTable.spacetime(2)


class TestDiffOpApply:
    def test_left_realization_kills_constants(self, t2):
        lefts, _ = left_right_realizations(2)
        assert lefts[0].apply(Poly.one(t2)) == ThetaSeries.of_poly(
            Poly.variable(t2, "x0"))

    def test_right_realization_on_x0(self, t2):
        _, rights = left_right_realizations(2)
        x0 = Poly.variable(t2, "x0")
        expected = ThetaSeries(t2, {0: x0 * x0, 1: x0})
        assert rights[0].apply(x0) == expected

    def test_partial_annihilates_other_variable(self, t2):
        d0 = DiffOp.partial(t2, "x0")
        assert d0.apply(Poly.variable(t2, "x1")).is_zero()


class TestCompose:
    def test_canonical_commutator_is_identity(self, t2):
        d0 = DiffOp.partial(t2, "x0")
        mx0 = DiffOp.from_poly(Poly.variable(t2, "x0"))
        assert d0.commutator(mx0) == DiffOp.identity(t2)

    def test_left_family_commutators(self, t2):
        lefts, _ = left_right_realizations(2)
        for k in (1, 2):
            assert lefts[0].commutator(lefts[k]) == lefts[k].with_theta(1)

    def test_right_family_commutators(self, t2):
        _, rights = left_right_realizations(2)
        for k in (1, 2):
            assert rights[0].commutator(rights[k]) == rights[k].with_theta(1).scale(-1)

    def test_normal_form_uniqueness(self, t2):
        # d0 o x0 and x0 d0 + 1 are the same operator, hence equal normal forms
        d0 = DiffOp.partial(t2, "x0")
        mx0 = DiffOp.from_poly(Poly.variable(t2, "x0"))
        composed = d0.compose(mx0)
        by_hand = mx0.compose(d0) + DiffOp.identity(t2)
        assert composed == by_hand


class TestBiDiffOp:
    def test_single_term_evaluation(self, t2):
        term = BiDiffOp(t2, {(t2.unit_exp(0), t2.unit_exp(1), 1):
                             Poly.variable(t2, "x1")})
        out = term.apply(Poly.variable(t2, "x0"), Poly.variable(t2, "x1"))
        assert out == ThetaSeries(t2, {1: Poly.variable(t2, "x1")})

    def test_unit_law_for_derivative_heavy_terms(self, t2):
        terms = {(t2.zero_exp(), t2.zero_exp(), 0): Poly.one(t2),
                 (t2.unit_exp(0), t2.unit_exp(1), 1): Poly.variable(t2, "x2")}
        op = BiDiffOp(t2, terms)
        g = Poly.variable(t2, "x1") * Poly.variable(t2, "x2")
        assert op.apply(Poly.one(t2), g) == ThetaSeries.of_poly(g)

    def test_zero_order_only_is_pointwise_product(self, t2):
        op = BiDiffOp.identity(t2)
        f = Poly.variable(t2, "x0")
        g = Poly.variable(t2, "x1")
        assert op.apply(f, g) == ThetaSeries.of_poly(f * g)


class TestForms:
    def test_time_translation_kills_coordinate_forms(self, t2):
        p0 = VectorField.coordinate(t2, "x0")
        for mu in range(3):
            assert lie_derivative(p0, OneForm.coordinate(t2, mu)).is_zero()

    def test_euler_field_fixes_coordinate_forms(self, t2):
        euler = VectorField.euler(t2)
        for nu in range(3):
            omega = OneForm.coordinate(t2, nu)
            assert lie_derivative(euler, omega) == omega

    def test_euler_field_with_linear_coefficient(self, t2):
        euler = VectorField.euler(t2)
        omega = OneForm.coordinate(t2, 2).mul_poly(Poly.variable(t2, "x1"))
        assert lie_derivative(euler, omega) == omega.scale(2)

    def test_leibniz_for_lie_derivative(self, t2):
        euler = VectorField.euler(t2)
        p = Poly.variable(t2, "x1") * Poly.variable(t2, "x2")
        omega = OneForm.coordinate(t2, 0)
        lhs = lie_derivative(euler, omega.mul_poly(p))
        euler_p = Poly.zero(t2)
        for i, name in enumerate(t2.names):
            euler_p = euler_p + Poly.variable(t2, name) * p.partial(i)
        rhs = lie_derivative(euler, omega).mul_poly(p) + omega.mul_poly(euler_p)
        assert lhs == rhs

    def test_wedge_antisymmetry(self, t2):
        a = OneForm.coordinate(t2, 0)
        b = OneForm.coordinate(t2, 1)
        assert wedge(a, a).is_zero()
        assert wedge(a, b) == wedge(b, a).scale(-1)
