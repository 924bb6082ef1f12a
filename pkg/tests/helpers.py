"""Shared test utilities: random expressions and exact evaluation points."""

from __future__ import annotations

import random
from fractions import Fraction

from jetcocycles.expr import DiffExpr, FAMILIES, eval_rational, jet, hinv
from jetcocycles.lampoly import LamPoly

DEFAULT_FAMILIES = ("f", "g", "T", "h")


def random_coeff(rng: random.Random, lam_degree: int = 1) -> LamPoly:
    deg = rng.randrange(lam_degree + 1)
    return LamPoly([Fraction(rng.randint(-6, 6), rng.randint(1, 4))
                    for _ in range(deg + 1)])


def random_expr(rng: random.Random, families=DEFAULT_FAMILIES, max_order: int = 3,
                terms: int = 3, factors: int = 2, lam_degree: int = 1,
                with_hinv: bool = False) -> DiffExpr:
    out = DiffExpr.zero()
    for _ in range(rng.randrange(1, terms + 1)):
        piece = DiffExpr.coefficient(random_coeff(rng, lam_degree))
        for _ in range(rng.randrange(0, factors + 1)):
            if with_hinv and rng.random() < 0.2:
                piece = piece * hinv()
            else:
                fam = rng.choice(families)
                order = rng.randrange(1, max_order + 1) if fam == "h" \
                    else rng.randrange(0, max_order + 1)
                piece = piece * jet(fam, order)
        out = out + piece
    return out


def random_point(rng: random.Random, *exprs: DiffExpr) -> dict:
    """Exact rational assignment covering every jet in the expressions."""
    point = {}
    for e in exprs:
        for fam in e.families():
            if fam == "hinv":
                fam = "h"
                top = 1
            else:
                top = e.max_order(fam)
            lo = 1 if fam == "h" else 0
            for order in range(lo, top + 1):
                point.setdefault((fam, order),
                                 Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
    if ("h", 1) in point or any("hinv" in e.families() for e in exprs):
        v = point.get(("h", 1), Fraction(0))
        if v == 0:
            point[("h", 1)] = Fraction(rng.randint(1, 9), rng.randint(1, 5))
    return point


def eval_at(e: DiffExpr, point: dict, lam: Fraction) -> Fraction:
    return eval_rational(e, point, lam_value=lam)


def random_lambda(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-8, 8), rng.randint(1, 4))
