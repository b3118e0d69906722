"""Seeded random polynomial generation for the verification suites."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .poly import Poly, VarTable
from .scalars import GaussianRational


def random_poly(table: VarTable, rng: random.Random, degree: int = 4,
                max_terms: int = 4, gaussian: bool = True,
                indices: Optional[tuple] = None) -> Poly:
    """A small random polynomial with bounded total degree.

    Coefficients are Gaussian rationals with single-digit parts; `indices`
    restricts which variables may appear (e.g. spatial slots only).
    """
    allowed = list(indices) if indices is not None else list(range(len(table)))
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        total = rng.randint(0, degree)
        exp = [0] * len(table)
        for _ in range(total):
            exp[rng.choice(allowed)] += 1
        re = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        im = Fraction(rng.randint(-2, 2), 1) if gaussian and rng.random() < 0.3 else Fraction(0)
        coeff = GaussianRational(re, im)
        if coeff.is_zero():
            coeff = GaussianRational(1)
        terms[tuple(exp)] = coeff
    p = Poly(table, terms)
    if p.is_zero():
        p = Poly.one(table)
    return p
