import pytest

from kappastar.poly import Poly, TableMismatchError, VarTable
from kappastar.series import ThetaSeries


@pytest.fixture
def table():
    return VarTable.spacetime(1)


def test_zero_and_of_poly(table):
    x0 = Poly.variable(table, "x0")
    s = ThetaSeries.of_poly(x0, 1)
    assert s.order_coeff(1) == x0
    assert s.order_coeff(0).is_zero()
    assert ThetaSeries.zero(table).is_zero()


def test_shift_and_scale(table):
    x0 = Poly.variable(table, "x0")
    s = ThetaSeries.of_poly(x0).shift(2).scale(3)
    assert s.order_coeff(2) == x0.scale(3)


def test_cap_drops_high_orders(table):
    x0 = Poly.variable(table, "x0")
    s = ThetaSeries(table, {0: x0, 3: x0}, cap=2)
    assert s.orders() == [0]


def test_product_convolves_orders(table):
    x0 = Poly.variable(table, "x0")
    x1 = Poly.variable(table, "x1")
    a = ThetaSeries(table, {0: x0, 1: x1})
    b = ThetaSeries(table, {1: x0})
    prod = a * b
    assert prod.order_coeff(1) == x0 * x0
    assert prod.order_coeff(2) == x1 * x0


def test_table_mismatch(table):
    other = ThetaSeries.of_poly(Poly.one(VarTable.spacetime(2)))
    with pytest.raises(TableMismatchError):
        ThetaSeries.of_poly(Poly.one(table)) + other


def test_first_nonzero_order(table):
    x1 = Poly.variable(table, "x1")
    assert ThetaSeries(table, {2: x1}).first_nonzero_order() == 2
    assert ThetaSeries.zero(table).first_nonzero_order() is None


def test_str(table):
    x0 = Poly.variable(table, "x0")
    s = ThetaSeries(table, {0: x0 * x0, 1: x0, 2: Poly.one(table)})
    assert str(s) == "x0^2 + theta*(x0) + theta^2*(1)"
