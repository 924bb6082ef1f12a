"""Cochains, the CE differential, the lambda solver, the catalogue."""

import random
from fractions import Fraction

import pytest

from jetcocycles.cochains import (
    CATALOGUE_NAMES,
    Cochain1,
    Cochain2,
    catalogue,
    catalogue_lambda,
    catalogue_weight,
    ce_differential,
    coboundary,
    det_cochain,
    det_expr,
    lambda_solutions,
)
from jetcocycles.calculus import bracket_expr
from jetcocycles.expr import jet, substitute
from jetcocycles.lampoly import LAM, LamPoly

from helpers import random_coeff


def test_det_cochain_basics():
    c = det_cochain(0, 1)
    assert c.coeff == jet("f", 0) * jet("g", 1) - jet("f", 1) * jet("g", 0)
    assert c.value_weight == -1
    assert det_cochain(3, 4).value_weight == 5
    with pytest.raises(ValueError):
        det_cochain(1, 1)
    with pytest.raises(ValueError):
        det_cochain(2, 1)


def test_cochain_validation():
    with pytest.raises(ValueError):
        Cochain2(jet("f", 0) * jet("g", 1), 0)       # not antisymmetric
    with pytest.raises(ValueError):
        Cochain2(jet("f", 0) ** 2 * jet("g", 1) - jet("g", 0) ** 2 * jet("f", 1), 0)
    with pytest.raises(ValueError):
        Cochain1(jet("f", 0) ** 2, 0, LamPoly.const(0))


def test_ce_differential_table_rows():
    assert ce_differential(det_cochain(0, 1)).is_zero()
    d02 = ce_differential(det_cochain(0, 2))
    assert not d02.is_zero()
    assert d02.subst_lambda(1).is_zero()
    assert not d02.subst_lambda(2).is_zero()
    assert not ce_differential(det_cochain(0, 4).at_lambda(3)).is_zero()


def test_lambda_solutions_examples():
    v12 = lambda_solutions(det_cochain(1, 2))
    assert v12.trivial_action_pass
    assert lambda_solutions(det_cochain(2, 3)).values == (Fraction(3),)
    assert lambda_solutions(det_cochain(3, 4)).values == (Fraction(5),)
    with pytest.raises(ValueError):
        lambda_solutions(det_cochain(0, 2).at_lambda(1))


def test_coboundary_examples():
    # Leibniz-compatible: delta(f -> f') vanishes at lam = 0
    b = Cochain1(jet("f", 1), 0, LamPoly.const(0))
    assert coboundary(b).coeff.is_zero()
    # identity cochain on the adjoint module: delta(id)(f,g) = [f,g]
    ident = Cochain1(jet("f", 0), -1, LamPoly.const(-1))
    assert coboundary(ident).coeff == bracket_expr()
    # delta(f -> f'') = (lam-1) det(1,2)
    b2 = Cochain1(jet("f", 2), 1, LamPoly.lam())
    assert coboundary(b2).coeff == det_expr(1, 2).scale(LAM - 1)


def test_coboundaries_are_cocycles():
    rng = random.Random(17)
    for trial in range(20):
        order = rng.randrange(0, 4)
        lam = LamPoly.lam() if trial % 3 else LamPoly.const(rng.randint(-3, 5))
        coeff = jet("f", order).scale(random_coeff(rng, 0))
        if trial % 4 == 0:
            coeff = coeff * jet("T", rng.randrange(0, 2))
        b = Cochain1(coeff, 0, lam)
        assert ce_differential(coboundary(b)).is_zero()


def test_catalogue_flat_forms():
    assert catalogue("cbar0", "flat").coeff == det_expr(0, 1)
    assert catalogue("c5", "flat").coeff == det_expr(3, 4)
    assert catalogue("c7", "flat").coeff == 2 * det_expr(3, 6) - 9 * det_expr(4, 5)
    assert catalogue("c0w", "flat").coeff == det_expr(0, 3).scale(Fraction(1, 2))
    assert catalogue("c0w", "flat").trivial_action


def test_catalogue_unicode_aliases_and_errors():
    assert catalogue("c̄₂", "connection").coeff == catalogue("cbar2", "connection").coeff
    with pytest.raises(KeyError):
        catalogue("c9", "flat")
    with pytest.raises(KeyError):
        catalogue("c1", "omega")          # unbarred: no 1-form pairing
    with pytest.raises(KeyError):
        catalogue("c7", "connection")     # only via the solver
    with pytest.raises(KeyError):
        catalogue("c0w", "covariant")
    with pytest.raises(KeyError):
        catalogue("c1", "nonsense")


def test_catalogue_weight_lambda_agreement():
    for name in CATALOGUE_NAMES:
        w, lam = catalogue_weight(name), catalogue_lambda(name)
        if name == "c0w":
            continue
        if name.startswith("cbar"):
            assert w + 1 == lam
            assert catalogue(name, "omega").value_weight == lam
        else:
            assert w == lam


def test_omega_forms_carry_background_jet():
    c = catalogue("cbar2", "omega")
    assert "w" in c.coeff.families()
    assert c.value_weight == 2


def test_connection_forms_are_flat_plus_corrections():
    for name in ("c1", "cbar1", "c2", "cbar2", "c5"):
        conn = catalogue(name, "connection").coeff
        flat = catalogue(name, "flat").coeff
        correction = conn - flat
        fams = correction.families()
        assert fams <= {"f", "g", "T", "R"}
        # corrections all carry at least one connection symbol
        for mono, _ in correction.terms():
            assert any(fam in ("T", "R")
                       for fam in (("f", "g", "k", "T", "R", "w", "h", "hinv")[r]
                                   for (r, _o), _e in mono))


def test_covariant_forms_reduce_to_flat_without_connection():
    for name in ("c1", "cbar1", "c2", "cbar2", "c5", "c7"):
        cov = catalogue(name, "covariant").coeff
        flat_part = substitute(cov, {"T": jet("T", 0).scale(0)})
        assert flat_part == catalogue(name, "flat").coeff
