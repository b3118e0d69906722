from fractions import Fraction

import pytest

from kappastar.poly import (Poly, RationalFn, SubstitutionError, TableMismatchError,
                            UnknownVariableError, VarTable)
from kappastar.scalars import IMAG, GaussianRational


def x(table, name):
    return Poly.variable(table, name)


class TestPolyArithmetic:
    def test_cancellation(self):
        t = VarTable.spacetime(1)
        assert (x(t, "x0") + x(t, "x1")) + (x(t, "x0") - x(t, "x1")) == x(t, "x0").scale(2)

    def test_monomial_product(self):
        t = VarTable.spacetime(1)
        assert x(t, "x0") * x(t, "x1") == Poly.monomial(t, (1, 1))

    def test_zbar_z_product(self):
        t = VarTable.complex_plane(1)
        zbz = x(t, "zb1") * x(t, "z1")
        assert zbz * x(t, "zb1") == Poly.monomial(t, (1, 2))

    def test_table_mismatch_raises(self):
        with pytest.raises(TableMismatchError):
            x(VarTable.spacetime(1), "x0") + x(VarTable.spacetime(2), "x0")

    def test_zero_coefficients_absent(self):
        t = VarTable.spacetime(1)
        p = x(t, "x0") - x(t, "x0")
        assert p.terms == {} and p.is_zero()


class TestPartial:
    def test_power_rule(self):
        t = VarTable.complex_plane(1)
        assert (x(t, "zb1") * x(t, "z1")).partial("z1") == x(t, "zb1")

    def test_product_variables(self):
        t = VarTable.spacetime(1)
        assert (x(t, "x0") * x(t, "x1")).partial("x0") == x(t, "x1")

    def test_cube(self):
        t = VarTable.spacetime(1)
        assert (x(t, "x1") ** 3).partial("x1") == (x(t, "x1") ** 2).scale(3)

    def test_unknown_variable(self):
        t = VarTable.spacetime(1)
        with pytest.raises(UnknownVariableError):
            x(t, "x0").partial("x7")


class TestSubstitute:
    def test_single_variable(self):
        xt = VarTable.spacetime(1)
        zt = VarTable.complex_plane(1)
        image = x(zt, "zb1") * x(zt, "z1")
        assert x(xt, "x0").substitute({"x0": image}) == image

    def test_spatial(self):
        xt = VarTable.spacetime(1)
        zt = VarTable.complex_plane(1)
        assert x(xt, "x1").substitute({"x1": x(zt, "zb1")}) == x(zt, "zb1")

    def test_composed(self):
        xt = VarTable.spacetime(1)
        zt = VarTable.complex_plane(1)
        zbz = x(zt, "zb1") * x(zt, "z1")
        out = (x(xt, "x0") * x(xt, "x1")).substitute({"x0": zbz, "x1": x(zt, "zb1")})
        assert out == Poly.monomial(zt, (1, 2))

    def test_partial_map_rejected(self):
        xt = VarTable.spacetime(1)
        zt = VarTable.complex_plane(1)
        with pytest.raises(SubstitutionError):
            (x(xt, "x0") * x(xt, "x1")).substitute({"x0": x(zt, "z1")})

    def test_unused_variables_need_no_image(self):
        xt = VarTable.spacetime(2)
        zt = VarTable.complex_plane(2)
        assert x(xt, "x1").substitute({"x1": x(zt, "zb1")}) == x(zt, "zb1")


class TestRationalFn:
    def _h(self, d=2):
        t = VarTable.spacetime(d)
        den = Poly.one(t)
        for k in range(1, d + 1):
            den = den * x(t, f"x{k}")
        return RationalFn(Poly.one(t), den), t

    def test_no_x0_dependence(self):
        h, t = self._h()
        assert h.partial("x0").is_zero()

    def test_quotient_rule_reduced(self):
        h, t = self._h()
        dh = h.partial("x1")
        expected = RationalFn(-Poly.one(t), x(t, "x1") ** 2 * x(t, "x2"))
        assert dh == expected
        # the reduced denominator really is x1^2 x2, not the raw square
        assert dh.den == x(t, "x1") ** 2 * x(t, "x2")

    def test_euler_eigenvalue(self):
        h, t = self._h()
        acc = RationalFn.from_poly(Poly.zero(t))
        for k in (1, 2):
            acc = acc + h.partial(f"x{k}") * x(t, f"x{k}")
        assert acc == h * Poly.constant(t, -2)

    def test_zero_denominator_rejected(self):
        t = VarTable.spacetime(1)
        with pytest.raises(ZeroDivisionError):
            RationalFn(Poly.one(t), Poly.zero(t))

    def test_cross_multiplication_equality(self):
        t = VarTable.spacetime(1)
        a = RationalFn(x(t, "x1"), x(t, "x1") * x(t, "x1"))
        b = RationalFn(Poly.one(t), x(t, "x1"))
        assert a == b


class TestPrinting:
    def test_graded_lex_order(self):
        t = VarTable.spacetime(1)
        p = Poly.one(t) + x(t, "x1") + x(t, "x0") + x(t, "x0") * x(t, "x1")
        assert str(p) == "x0*x1 + x0 + x1 + 1"

    def test_gaussian_coefficients(self):
        t = VarTable.spacetime(1)
        p = x(t, "x1").scale(IMAG) + Poly.constant(t, Fraction(3, 2))
        assert str(p) == "i*x1 + 3/2"

    def test_negative_leading(self):
        t = VarTable.spacetime(1)
        p = -x(t, "x0") + Poly.one(t)
        assert str(p) == "-x0 + 1"

    def test_zero(self):
        assert str(Poly.zero(VarTable.spacetime(1))) == "0"
