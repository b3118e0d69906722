import random
from fractions import Fraction

import pytest

from kappastar.diffop import BiDiffOp
from kappastar.poly import AlgebraError, Poly, VarTable
from kappastar.randgen import random_poly
from kappastar.scalars import IMAG, GaussianRational
from kappastar.series import ThetaSeries
from kappastar.star import (StarProduct, build_star, poisson_bracket,
                            verify_associativity)


def var(table, name):
    return Poly.variable(table, name)


class TestGenerators:
    def test_kappa_first_order_terms(self):
        p = build_star("kappa", 1)
        t = p.table
        term = p.order_term(1)
        expected = {
            (t.unit_exp(0), t.unit_exp(0), 1): var(t, "x0"),
            (t.unit_exp(0), t.unit_exp(1), 1): var(t, "x1"),
        }
        assert term == BiDiffOp(t, expected)

    def test_wick_voros_first_order(self):
        p = build_star("wick_voros", 1)
        t = p.table
        zi, zbi = t.index("z1"), t.index("zb1")
        assert p.order_term(1) == BiDiffOp(
            t, {(t.unit_exp(zi), t.unit_exp(zbi), 1): Poly.one(t)})

    def test_moyal_first_order(self):
        p = build_star("moyal", 1)
        t = p.table
        zi, zbi = t.index("z1"), t.index("zb1")
        half = Poly.constant(t, Fraction(1, 2))
        assert p.order_term(1) == BiDiffOp(t, {
            (t.unit_exp(zi), t.unit_exp(zbi), 1): half,
            (t.unit_exp(zbi), t.unit_exp(zi), 1): -half,
        })

    def test_unsupported_kind(self):
        with pytest.raises(AlgebraError):
            build_star("weyl", 2)
        with pytest.raises(AlgebraError):
            build_star("su2", 2)


class TestStarApply:
    def test_wick_voros_coordinates(self):
        p = build_star("wick_voros", 1)
        t = p.table
        z, zb = var(t, "z1"), var(t, "zb1")
        assert p.apply(z, zb) == ThetaSeries(t, {0: z * zb, 1: Poly.one(t)})
        assert p.apply(zb, z) == ThetaSeries.of_poly(zb * z)
        assert p.commutator(z, zb) == ThetaSeries(t, {1: Poly.one(t)})

    def test_kappa_coordinates(self):
        p = build_star("kappa", 1)
        t = p.table
        x0, x1 = var(t, "x0"), var(t, "x1")
        assert p.apply(x0, x1) == ThetaSeries(t, {0: x0 * x1, 1: x1})
        assert p.apply(x1, x0) == ThetaSeries.of_poly(x1 * x0)
        assert p.apply(x0, x0) == ThetaSeries(t, {0: x0 * x0, 1: x0})

    def test_moyal_coordinates(self):
        p = build_star("moyal", 1)
        t = p.table
        z, zb = var(t, "z1"), var(t, "zb1")
        assert p.apply(z, zb) == ThetaSeries(
            t, {0: z * zb, 1: Poly.constant(t, Fraction(1, 2))})

    def test_kind_mismatch_raises(self):
        p = build_star("kappa", 1)
        z = var(build_star("wick_voros", 1).table, "z1")
        with pytest.raises(AlgebraError):
            p.apply(z, z)


class TestCommutators:
    def test_kappa_relations_d3(self):
        p = build_star("kappa", 3)
        t = p.table
        assert p.commutator(var(t, "x0"), var(t, "x2")) == ThetaSeries(
            t, {1: var(t, "x2")})
        assert p.commutator(var(t, "x1"), var(t, "x2")).is_zero()

    def test_su2_relations(self):
        p = build_star("su2")
        t = p.table
        comm = p.commutator(var(t, "x1"), var(t, "x2"))
        assert comm == ThetaSeries(t, {1: var(t, "x3").scale(IMAG)})

    def test_antisymmetry(self):
        for kind, d in (("kappa", 2), ("moyal", 2), ("wick_voros", 2), ("su2", None)):
            p = build_star(kind, d)
            rng = random.Random(5)
            f = random_poly(p.table, rng, 3)
            assert p.commutator(f, f).is_zero()


class TestPoisson:
    def test_kappa_classical(self):
        t = VarTable.spacetime(2)
        assert poisson_bracket(var(t, "x0"), var(t, "x1"), "kappa_classical") == \
            var(t, "x1").scale(IMAG)
        assert poisson_bracket(var(t, "x1"), var(t, "x2"), "kappa_classical").is_zero()

    def test_canonical_z(self):
        t = VarTable.complex_plane(1)
        assert poisson_bracket(var(t, "z1"), var(t, "zb1"), "canonical_z") == \
            Poly.constant(t, IMAG)

    def test_unknown_structure(self):
        t = VarTable.spacetime(1)
        with pytest.raises(AlgebraError):
            poisson_bracket(var(t, "x0"), var(t, "x1"), "symplectic")


class TestUnitAndStructure:
    @pytest.mark.parametrize("kind,d", [("moyal", 2), ("wick_voros", 2),
                                        ("kappa", 2), ("su2", None),
                                        ("jordanian", 2), ("jordanian_rs", 2)])
    def test_unit_laws(self, kind, d):
        p = build_star(kind, d)
        rng = random.Random(11)
        indices = tuple(p.table.spatial_indices()) if kind == "su2" else None
        f = random_poly(p.table, rng, 3, indices=indices)
        one = Poly.one(p.table)
        assert p.apply(one, f) == ThetaSeries.of_poly(f)
        assert p.apply(f, one) == ThetaSeries.of_poly(f)

    def test_semiclassical_antisymmetric_part(self):
        # order-theta part of the kappa commutator equals the bivector action
        # d0 f x^k d_k g - x^k d_k f d0 g
        p = build_star("kappa", 2)
        t = p.table
        rng = random.Random(3)
        for _ in range(10):
            f = random_poly(t, rng, 3)
            g = random_poly(t, rng, 3)
            comm1 = p.commutator(f, g).order_coeff(1)
            expected = Poly.zero(t)
            f0, g0 = f.partial(0), g.partial(0)
            for k in t.spatial_indices():
                xk = var(t, t.names[k])
                expected = expected + f0 * xk * g.partial(k) - xk * f.partial(k) * g0
            assert comm1 == expected

    def test_wv_moyal_commutators_agree_and_difference_symmetric(self):
        wv = build_star("wick_voros", 2)
        moyal = build_star("moyal", 2)
        t = wv.table
        for a in t.names:
            for b in t.names:
                assert wv.commutator(var(t, a), var(t, b)) == \
                    moyal.commutator(var(t, a), var(t, b))
        rng = random.Random(9)
        for _ in range(8):
            f = random_poly(t, rng, 3)
            g = random_poly(t, rng, 3)
            diff_fg = wv.apply(f, g) - moyal.apply(f, g)
            diff_gf = wv.apply(g, f) - moyal.apply(g, f)
            assert diff_fg == diff_gf


class TestAssociativity:
    def test_kappa_example(self):
        p = build_star("kappa", 1)
        t = p.table
        assert verify_associativity(p, var(t, "x0"), var(t, "x1"), var(t, "x0")).ok

    def test_wick_voros_random(self):
        p = build_star("wick_voros", 2)
        rng = random.Random(17)
        for _ in range(5):
            f, g, h = (random_poly(p.table, rng, 3) for _ in range(3))
            assert verify_associativity(p, f, g, h).ok

    def test_corrupted_order_two_term_detected(self):
        good = build_star("kappa", 1)
        t = good.table

        def corrupted_terms(n):
            term = good.order_term(n)
            if n == 2:
                return term.scale(GaussianRational(3))
            return term

        bad = StarProduct("kappa-corrupted", 1, t, corrupted_terms,
                          lambda f, g: min(f.total_degree(), g.total_degree()))
        res = verify_associativity(bad, var(t, "x0") * var(t, "x0"),
                                   var(t, "x0"), var(t, "x1"))
        assert not res.ok
        assert res.order == 2
        assert res.difference is not None and not res.difference.is_zero()

    def test_su2_formal_radius_is_not_associative(self):
        # the closed form treats x0 as an inert radius symbol; iterating the
        # product leaves its domain of validity and associativity fails
        p = build_star("su2")
        t = p.table
        res = verify_associativity(p, var(t, "x1"), var(t, "x1"), var(t, "x2"))
        assert not res.ok
        assert res.order == 2
        assert res.difference == var(t, "x2").scale(Fraction(-1, 4))
