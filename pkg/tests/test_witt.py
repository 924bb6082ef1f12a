"""Laurent model: actions, evaluation, residues, certificates."""

import random
from fractions import Fraction

import pytest

from jetcocycles.cochains import Cochain1, catalogue, coboundary, det_cochain
from jetcocycles.expr import DiffExpr, jet
from jetcocycles.lampoly import LamPoly
from jetcocycles.wittmodel import (
    LaurentDensity,
    WittField,
    evaluate_cochain,
    kn_value,
    laurent_action,
    nontriviality_certificate,
    residue_pair,
)


def test_action_eigenvalues():
    for m, lam in ((-3, 2), (0, 0), (4, 5)):
        a = LaurentDensity.monomial(m, lam)
        assert laurent_action(WittField.basis(0), a) == a.scale(m + lam)


def test_action_kernel_coefficient():
    # L_m z^s has coefficient s + lam (m+1); vanishes at s = -lam(m+1)
    lam, m = 3, 2
    s = -lam * (m + 1)
    out = laurent_action(WittField.basis(m), LaurentDensity.monomial(s, lam))
    assert out.is_zero()


def test_adjoint_action_is_bracket():
    for m in range(-3, 4):
        for n in range(-3, 4):
            via_action = laurent_action(WittField.basis(m),
                                        WittField.basis(n).as_density())
            via_bracket = WittField.basis(m).bracket(WittField.basis(n)).as_density()
            assert via_action == via_bracket
            assert via_bracket == LaurentDensity.of({m + n + 1: n - m}, -1)


def test_module_axiom_random():
    rng = random.Random(13)
    for _ in range(30):
        x = WittField.of({rng.randint(-3, 4): Fraction(rng.randint(-5, 5)) for _ in range(2)})
        y = WittField.of({rng.randint(-3, 4): Fraction(rng.randint(-5, 5)) for _ in range(2)})
        a = LaurentDensity.of({rng.randint(-4, 4): Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                               for _ in range(3)}, rng.choice((0, 1, 2, 5)))
        lhs = laurent_action(x, laurent_action(y, a)) - laurent_action(y, laurent_action(x, a))
        assert lhs == laurent_action(x.bracket(y), a)


def test_evaluate_cochain_det13_closed_form():
    c = det_cochain(1, 3).at_lambda(2)
    for m, n in ((2, 3), (-3, 2), (0, -4), (5, -5)):
        v = evaluate_cochain(c, m, n)
        coeff = Fraction((m + 1) * (n + 1) * (n * (n - 1) - m * (m - 1)))
        expected = LaurentDensity.of({m + n - 2: coeff}, 2)
        assert v == expected


def test_evaluate_cochain_bracket_and_antisymmetry():
    cbar0 = catalogue("cbar0", "flat")
    for m, n in ((1, 2), (-2, 3), (4, -1)):
        assert evaluate_cochain(cbar0, m, n) == LaurentDensity.of({m + n + 1: n - m}, -1)
    assert evaluate_cochain(catalogue("c5", "flat"), 3, 3).is_zero()


def test_evaluate_cochain_commutes_with_normalization():
    # evaluating term by term equals evaluating the canonical sum
    c = catalogue("c7", "flat")
    m, n = 2, -3
    total = LaurentDensity((), 7)
    for mono, coef in c.coeff.terms():
        total = total + evaluate_cochain(DiffExpr({mono: coef}), m, n, weight=7)
    assert total == evaluate_cochain(c, m, n)


def test_evaluate_cochain_rejects_backgrounds_and_symbolic():
    with pytest.raises(ValueError):
        evaluate_cochain(catalogue("cbar2", "connection"), 1, 2)
    from jetcocycles.lampoly import LAM
    lam_carrying = det_cochain(0, 2).coeff.scale(LAM)
    with pytest.raises(ValueError):
        evaluate_cochain(lam_carrying, 1, 2, weight=0)
    assert not evaluate_cochain(lam_carrying, 1, 2, lam_value=3, weight=0).is_zero()


def test_residue_pair():
    assert residue_pair(LaurentDensity.monomial(-1, 1)) == 1
    assert residue_pair(LaurentDensity.monomial(4, 1)) == 0
    with pytest.raises(ValueError):
        residue_pair(LaurentDensity.monomial(-1, 2))
    with pytest.raises(ValueError):
        residue_pair(LaurentDensity.monomial(-1, 1), cycle_index=1)


def test_kn_values():
    assert kn_value(1, -1) == 0
    assert kn_value(2, -2) == -6
    for m in range(2, 11):
        assert kn_value(m, -m) * 6 == kn_value(2, -2) * (m ** 3 - m)
    for m, n in ((2, 3), (0, 4), (-1, 3)):
        assert kn_value(m, n) == 0


def test_kn_certificate_nontrivial():
    res = nontriviality_certificate(catalogue("c0w", "flat"), window=6)
    assert res.verdict == "NONTRIVIAL" and res.trivial_action


def test_c5_certificate_nontrivial():
    res = nontriviality_certificate(catalogue("c5", "flat"), window=6)
    assert res.verdict == "NONTRIVIAL"
    assert res.degree_shift == -5 and res.module_lambda == 5


def test_c7_certificate_nontrivial():
    res = nontriviality_certificate(catalogue("c7", "flat"), window=8)
    assert res.verdict == "NONTRIVIAL"
    assert res.degree_shift == -7


def test_coboundaries_inconclusive():
    rng = random.Random(31)
    for _ in range(6):
        j = rng.randrange(0, 5)
        lam = rng.choice((0, 1, 2, 5))
        b = Cochain1(jet("f", j).scale(Fraction(rng.randint(1, 9), rng.randint(1, 4))),
                     lam, LamPoly.const(lam))
        res = nontriviality_certificate(coboundary(b), window=6)
        assert res.verdict == "INCONCLUSIVE"


def test_certificate_rejects_ungraded():
    from jetcocycles.cochains import Cochain2, det_expr

    mixed = Cochain2(det_expr(0, 1) + det_expr(0, 2), 0, LamPoly.const(1))
    with pytest.raises(ValueError):
        nontriviality_certificate(mixed, window=4)


def _numeric_witt_delta(c, m: int, n: int, p: int):
    """Cocycle identity on (L_m, L_n, L_p) computed purely in the Laurent
    model; independent of the symbolic normalizer."""
    lam = c.module_lambda.constant_value()

    def act(i, val):
        return laurent_action(WittField.basis(i), val, module_lambda=lam)

    def c_at(i, j):
        return evaluate_cochain(c, i, j)

    total = act(m, c_at(n, p))
    total = total - act(n, c_at(m, p))
    total = total + act(p, c_at(m, n))
    total = total - c_at(m + n, p).scale(n - m)
    total = total + c_at(m + p, n).scale(p - m)
    total = total - c_at(n + p, m).scale(p - n)
    return total


def test_symbolic_and_graded_verdicts_agree():
    # flat generators: symbolically closed at their rows, and numerically
    # closed on the whole window
    for name, lam in (("c1", 1), ("cbar1", 1), ("c2", 2), ("cbar2", 2),
                      ("c5", 5), ("c7", 7)):
        c = catalogue(name, "flat").at_lambda(lam)
        from jetcocycles.cochains import ce_differential
        assert ce_differential(c).is_zero()
        for m in range(-3, 4):
            for n in range(-3, 4):
                for p in range(-3, 4):
                    assert _numeric_witt_delta(c, m, n, p).is_zero(), (name, m, n, p)


def test_certificate_inconclusive_cases():
    # zero cochain on the window: feasible by construction
    zero = coboundary(Cochain1(jet("f", 1), 0, LamPoly.const(0)))
    assert nontriviality_certificate(zero, lam=0, window=4).verdict == "INCONCLUSIVE"
    # the weight-0 block at lam=1: the window-5 graded system happens to be
    # feasible, so the certificate (soundly) refuses to claim anything
    c = det_cochain(0, 2).at_lambda(1)
    assert nontriviality_certificate(c, window=5).verdict == "INCONCLUSIVE"
