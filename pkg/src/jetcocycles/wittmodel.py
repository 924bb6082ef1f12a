"""Concrete realization on the punctured plane.

Genus 0 with two punctures is the flat setting: a global coordinate z, all
bundles trivialized, T = R = 0.  Vector fields are Laurent polynomials
times d/dz with basis L_m = z^(m+1) d/dz, densities are Laurent polynomials
times (dz)^w, and the pairing against the cycle around the puncture is the
residue at 0.  Everything is exact.

Grading: z^s (dz)^w has degree s and L_m degree m, so a determinant cochain
built from orders p, q shifts degree by 2-(p+q).  The graded structure is
what makes the non-triviality certificates finite: if c = delta b globally,
the degree-d component of b solves the windowed system, so infeasibility of
that exact linear system proves the class nonzero.  Feasibility proves
nothing (hence INCONCLUSIVE).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple, Union

from .cochains import Cochain2, catalogue
from .expr import DiffExpr, FAMILIES
from .linalg import solve_affine

Rat = Union[int, Fraction]


def _clean(coeffs: Dict[int, Fraction]) -> Dict[int, Fraction]:
    return {s: c for s, c in coeffs.items() if c}


@dataclass(frozen=True)
class LaurentDensity:
    """Finite Laurent polynomial sum a_s z^s carrying (dz)^weight."""

    coeffs: Tuple[Tuple[int, Fraction], ...]
    weight: int

    @staticmethod
    def of(coeffs: Dict[int, Rat], weight: int) -> "LaurentDensity":
        clean = _clean({int(s): Fraction(c) for s, c in coeffs.items()})
        return LaurentDensity(tuple(sorted(clean.items())), weight)

    @staticmethod
    def monomial(s: int, weight: int, coeff: Rat = 1) -> "LaurentDensity":
        return LaurentDensity.of({s: Fraction(coeff)}, weight)

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "LaurentDensity") -> "LaurentDensity":
        if self.weight != other.weight:
            raise ValueError("cannot add densities of different weights")
        out = self.as_dict()
        for s, c in other.coeffs:
            out[s] = out.get(s, Fraction(0)) + c
        return LaurentDensity.of(out, self.weight)

    def __neg__(self) -> "LaurentDensity":
        return LaurentDensity(tuple((s, -c) for s, c in self.coeffs), self.weight)

    def __sub__(self, other: "LaurentDensity") -> "LaurentDensity":
        return self + (-other)

    def scale(self, q: Rat) -> "LaurentDensity":
        q = Fraction(q)
        if not q:
            return LaurentDensity((), self.weight)
        return LaurentDensity(tuple((s, c * q) for s, c in self.coeffs), self.weight)

    def derivative(self) -> "LaurentDensity":
        return LaurentDensity.of({s - 1: c * s for s, c in self.coeffs}, self.weight)

    def multiply(self, other: "LaurentDensity") -> "LaurentDensity":
        out: Dict[int, Fraction] = {}
        for s, c in self.coeffs:
            for t, d in other.coeffs:
                st = s + t
                out[st] = out.get(st, Fraction(0)) + c * d
        return LaurentDensity.of(out, self.weight + other.weight)

    def degrees(self) -> Tuple[int, ...]:
        return tuple(s for s, _ in self.coeffs)

    def describe(self) -> str:
        if not self.coeffs:
            body = "0"
        else:
            parts = []
            for s, c in self.coeffs:
                mag = abs(c)
                z = "1" if s == 0 else ("z" if s == 1 else f"z^{s}")
                piece = z if (mag == 1 and s != 0) else (str(mag) if s == 0 else f"{mag}*{z}")
                parts.append(("- " if c < 0 else "+ ") + piece)
            body = " ".join(parts)
            if body.startswith("+ "):
                body = body[2:]
            else:
                body = "-" + body[2:]
        return f"({body}) (dz)^{self.weight}"


@dataclass(frozen=True)
class WittField:
    """Laurent vector field: coefficient of d/dz; L_m is z^(m+1) d/dz."""

    coeffs: Tuple[Tuple[int, Fraction], ...]

    @staticmethod
    def basis(m: int) -> "WittField":
        return WittField(((m + 1, Fraction(1)),))

    @staticmethod
    def of(coeffs: Dict[int, Rat]) -> "WittField":
        clean = _clean({int(s): Fraction(c) for s, c in coeffs.items()})
        return WittField(tuple(sorted(clean.items())))

    def as_density(self) -> LaurentDensity:
        return LaurentDensity(self.coeffs, -1)

    def bracket(self, other: "WittField") -> "WittField":
        a, b = self.as_density(), other.as_density()
        out = a.multiply(b.derivative()) - a.derivative().multiply(b)
        return WittField(out.coeffs)


def laurent_action(fld: WittField, a: LaurentDensity,
                   module_lambda: Optional[Rat] = None) -> LaurentDensity:
    """L_fld a = fld a' + lam fld' a; on basis elements
    L_m z^s (dz)^lam = (s + lam (m+1)) z^(m+s) (dz)^lam."""
    lam = Fraction(a.weight if module_lambda is None else module_lambda)
    f = fld.as_density()
    out = f.multiply(a.derivative()) + f.derivative().multiply(a).scale(lam)
    return LaurentDensity(out.coeffs, a.weight)


def evaluate_cochain(c: Union[Cochain2, DiffExpr], m: int, n: int,
                     lam_value: Optional[Rat] = None,
                     weight: Optional[int] = None) -> LaurentDensity:
    """Value of a flat cochain on (L_m, L_n): substitute f = z^(m+1),
    g = z^(n+1) and differentiate exactly."""
    if isinstance(c, Cochain2):
        expr = c.coeff
        weight = c.value_weight if weight is None else weight
    else:
        expr = c
        if weight is None:
            raise ValueError("weight is required for a bare expression")
    fams = expr.families()
    if fams - {"f", "g"}:
        raise ValueError(f"flat cochain expected; found families {sorted(fams - {'f', 'g'})}")
    exps = {"f": m + 1, "g": n + 1}
    out: Dict[int, Fraction] = {}
    for mono, coef in expr.terms():
        if coef.is_constant():
            cval = coef.constant_value()
        elif lam_value is not None:
            cval = coef.eval(lam_value)
        else:
            raise ValueError("cochain depends on lam; supply lam_value")
        z = 0
        for (rank, order), e in mono:
            base = exps[FAMILIES[rank]]
            for _ in range(e):
                fall = Fraction(1)
                for i in range(order):
                    fall *= base - i
                cval *= fall
                z += base - order
        if cval:
            out[z] = out.get(z, Fraction(0)) + cval
    return LaurentDensity.of(out, weight)


def residue_pair(a: LaurentDensity, cycle_index: int = 0) -> Fraction:
    """Pairing of a 1-form with the cycle around the puncture: the z^-1
    coefficient.  Genus 0 with two punctures has a single cycle class."""
    if a.weight != 1:
        raise ValueError(f"residue pairing needs a 1-form, got weight {a.weight}")
    if cycle_index != 0:
        raise ValueError("only the puncture cycle (index 0) exists at genus 0, r=2")
    return a.as_dict().get(-1, Fraction(0))


def kn_value(m: int, n: int) -> Fraction:
    """Residue-paired value of the weight-1 integrand (flat chart, R = 0):
    Res_0[ (f g''' - g f''')/2 ] = -(m^3 - m) when n = -m, else 0."""
    integrand = evaluate_cochain(catalogue("c0w", "flat"), m, n)
    return residue_pair(integrand)


# -- non-triviality certificates -----------------------------------------


@dataclass(frozen=True)
class CertificateResult:
    verdict: str            # "NONTRIVIAL" | "INCONCLUSIVE"
    window: int
    module_lambda: Optional[Fraction]
    degree_shift: Optional[int]
    trivial_action: bool

    @property
    def ok(self) -> bool:
        return self.verdict == "NONTRIVIAL"


ValueTable = Callable[[int, int], LaurentDensity]


def nontriviality_certificate(c: Union[Cochain2, ValueTable], lam: Optional[Rat] = None,
                              window: int = 6,
                              trivial_action: Optional[bool] = None) -> CertificateResult:
    """Exact graded obstruction to c = delta b on the window.

    For a graded density-valued cochain the unknowns are the coefficients
    b(L_m) = beta_m z^(m+d) (dz)^lam for |m| <= window; the equations are
    delta b (L_m, L_n) = c(L_m, L_n) for all |m|, |n|, |m+n| <= window.  Any
    global primitive restricts to a solution of this projected system, so
    infeasibility is a proof of non-triviality.  With trivial action the
    values pair to constants and the system is -(n-m) beta_{m+n} = c(m, n).
    """
    if isinstance(c, Cochain2):
        if trivial_action is None:
            trivial_action = c.trivial_action
        if lam is None and not c.is_symbolic() and not trivial_action:
            lam = c.module_lambda.constant_value()
        cochain = c

        def values(m: int, n: int) -> LaurentDensity:
            return evaluate_cochain(cochain, m, n, lam_value=lam)

    else:
        values = c
        if trivial_action is None:
            trivial_action = False
    if lam is None and not trivial_action:
        raise ValueError("a concrete module parameter is required")

    pairs = [(m, n) for m in range(-window, window + 1)
             for n in range(m + 1, window + 1) if abs(m + n) <= window]

    if trivial_action:
        rows = []
        for m, n in pairs:
            v = residue_pair(values(m, n))
            rows.append(({window + m + n: Fraction(-(n - m))}, v))
        feasible = solve_affine(rows, 2 * window + 1) is not None
        return CertificateResult("INCONCLUSIVE" if feasible else "NONTRIVIAL",
                                 window, None, None, True)

    lam = Fraction(lam)
    # infer and check the grading
    shift: Optional[int] = None
    table: Dict[Tuple[int, int], LaurentDensity] = {}
    for m, n in pairs:
        v = values(m, n)
        table[(m, n)] = v
        degs = v.degrees()
        if not degs:
            continue
        if len(degs) > 1:
            raise ValueError(f"cochain is not graded: value at ({m},{n}) has degrees {degs}")
        d = degs[0] - (m + n)
        if shift is None:
            shift = d
        elif shift != d:
            raise ValueError(f"cochain is not graded: shifts {shift} and {d} both occur")
    if shift is None:
        return CertificateResult("INCONCLUSIVE", window, lam, None, False)

    rows = []
    for m, n in pairs:
        v = table[(m, n)]
        rhs = v.as_dict().get(m + n + shift, Fraction(0))
        row = {
            window + n: Fraction(n + shift) + lam * (m + 1),
            window + m: -(Fraction(m + shift) + lam * (n + 1)),
        }
        row[window + m + n] = row.get(window + m + n, Fraction(0)) - (n - m)
        rows.append(({i: q for i, q in row.items() if q}, rhs))
    feasible = solve_affine(rows, 2 * window + 1) is not None
    return CertificateResult("INCONCLUSIVE" if feasible else "NONTRIVIAL",
                             window, lam, shift, False)
