"""Exact differential-polynomial kernel.

Expressions are finite Q[lam]-linear combinations of monomials in jet
symbols.  A jet symbol is a pair (family, order): the families are

    f, g, k   -- vector-field coefficient functions,
    T         -- affine connection symbol,
    R         -- projective connection symbol,
    w         -- coefficient of a background 1-form,
    h         -- transition jets (order >= 1, h[1] is h'),
    hinv      -- the reciprocal of h[1] (order 0 only).

hinv is the single allowed "inverse": the unit relation hinv*h[1] = 1 is
applied during monomial assembly, and d/dz maps hinv to -h[2]*hinv^2, so no
localization machinery is needed.

Everything is canonical by construction: monomials are sorted tuples keyed
by (family rank, order), terms are keyed by monomial with nonzero LamPoly
coefficients, and all operations return freshly normalized expressions.
Expressions are immutable values; every function here is pure.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from .lampoly import LamPoly, Rat, _as_fraction

FAMILIES = ("f", "g", "k", "T", "R", "w", "h", "hinv")
_RANK = {name: i for i, name in enumerate(FAMILIES)}

DEFAULT_ORDER_CAP = 12

# atom: (rank, order); monomial: tuple of (atom, exponent) sorted by atom
Atom = Tuple[int, int]
Monomial = Tuple[Tuple[Atom, int], ...]

_H = _RANK["h"]
_HINV = _RANK["hinv"]
_H1: Atom = (_H, 1)
_HINV0: Atom = (_HINV, 0)


class OrderCapExceeded(ValueError):
    """A jet order went past the configured cap."""


def _check_atom(family: str, order: int, cap: int) -> Atom:
    if family not in _RANK:
        raise ValueError(f"unknown jet family {family!r}")
    if not isinstance(order, int) or order < 0:
        raise ValueError(f"jet order must be a non-negative integer, got {order!r}")
    if family == "h" and order < 1:
        raise ValueError("h jets start at order 1 (h[1] is h')")
    if family == "hinv" and order != 0:
        raise ValueError("hinv carries no independent jets")
    if order > cap:
        raise OrderCapExceeded(f"jet order {order} exceeds cap {cap} for family {family!r}")
    return (_RANK[family], order)


def atom_name(atom: Atom) -> str:
    rank, order = atom
    return FAMILIES[rank] if rank == _HINV else f"{FAMILIES[rank]}[{order}]"


def _mono_from_pairs(pairs: Iterable[Tuple[Atom, int]]) -> Monomial:
    """Assemble a monomial from (atom, exp) pairs, applying hinv*h[1] -> 1."""
    acc: Dict[Atom, int] = {}
    for atom, exp in pairs:
        if exp == 0:
            continue
        if exp < 0:
            raise ValueError("negative exponents are not representable; use hinv")
        acc[atom] = acc.get(atom, 0) + exp
    a = acc.get(_HINV0, 0)
    b = acc.get(_H1, 0)
    if a and b:
        m = min(a, b)
        for atom, e in ((_HINV0, a - m), (_H1, b - m)):
            if e:
                acc[atom] = e
            else:
                del acc[atom]
    return tuple(sorted(acc.items()))


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    return _mono_from_pairs(list(m1) + list(m2))


class DiffExpr:
    """Canonical differential polynomial.  Immutable; compare with ==."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, LamPoly]] = None):
        # terms are assumed canonical apart from zero stripping
        clean: Dict[Monomial, LamPoly] = {}
        if terms:
            for mono, coef in terms.items():
                if not coef.is_zero():
                    clean[mono] = coef
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("DiffExpr is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "DiffExpr":
        return _ZERO

    @staticmethod
    def one() -> "DiffExpr":
        return _ONE

    @staticmethod
    def rational(q: Rat) -> "DiffExpr":
        return DiffExpr({(): LamPoly.const(q)})

    @staticmethod
    def coefficient(poly: LamPoly) -> "DiffExpr":
        return DiffExpr({(): poly})

    # -- inspection ---------------------------------------------------

    def terms(self) -> Tuple[Tuple[Monomial, LamPoly], ...]:
        return tuple(sorted(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient_of(self, mono: Monomial) -> LamPoly:
        return self._terms.get(mono, LamPoly.zero())

    def constant_term(self) -> LamPoly:
        return self._terms.get((), LamPoly.zero())

    def families(self) -> set:
        out = set()
        for mono in self._terms:
            for (rank, _), _e in mono:
                out.add(FAMILIES[rank])
        return out

    def max_order(self, family: str) -> int:
        """Highest jet order of the family present; -1 if absent."""
        rank = _RANK[family]
        best = -1
        for mono in self._terms:
            for (r, order), _e in mono:
                if r == rank and order > best:
                    best = order
        return best

    def degree_in(self, family: str) -> set:
        """Set of total exponents of the family across monomials."""
        rank = _RANK[family]
        out = set()
        for mono in self._terms:
            out.add(sum(e for (r, _o), e in mono if r == rank))
        return out

    # -- ring structure -----------------------------------------------

    def __add__(self, other) -> "DiffExpr":
        other = _coerce_expr(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for mono, coef in other._terms.items():
            acc = out.get(mono)
            s = coef if acc is None else acc + coef
            if s.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = s
        return DiffExpr(out)

    __radd__ = __add__

    def __neg__(self) -> "DiffExpr":
        return DiffExpr({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "DiffExpr":
        other = _coerce_expr(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "DiffExpr":
        other = _coerce_expr(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "DiffExpr":
        if isinstance(other, (int, Fraction, LamPoly)):
            return self.scale(other)
        if not isinstance(other, DiffExpr):
            return NotImplemented
        if not self._terms or not other._terms:
            return _ZERO
        a, b = self._terms, other._terms
        if len(a) > len(b):
            a, b = b, a
        out: Dict[Monomial, LamPoly] = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                mono = _mono_mul(m1, m2)
                c = c1 * c2
                acc = out.get(mono)
                s = c if acc is None else acc + c
                if s.is_zero():
                    out.pop(mono, None)
                else:
                    out[mono] = s
        return DiffExpr(out)

    def __rmul__(self, other) -> "DiffExpr":
        if isinstance(other, (int, Fraction, LamPoly)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: Union[Rat, LamPoly]) -> "DiffExpr":
        poly = c if isinstance(c, LamPoly) else LamPoly.const(c)
        if poly.is_zero():
            return _ZERO
        return DiffExpr({m: coef * poly for m, coef in self._terms.items()})

    def __pow__(self, n: int) -> "DiffExpr":
        if not isinstance(n, int):
            raise ValueError(f"non-integer exponent {n!r}")
        if n < 0:
            raise ValueError("negative powers are not representable; use hinv for 1/h'")
        acc = _ONE
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base if n > 1 else base
            n >>= 1
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, DiffExpr):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == _coerce_expr(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(frozenset(self._terms.items()))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        from .syntax import to_text

        return f"DiffExpr({to_text(self)})"

    # -- lam handling ---------------------------------------------------

    def subst_lambda(self, lam_value: Rat) -> "DiffExpr":
        """Evaluate all coefficients at a rational value of lam."""
        out: Dict[Monomial, LamPoly] = {}
        for mono, coef in self._terms.items():
            v = coef.eval(lam_value)
            if v:
                out[mono] = LamPoly.const(v)
        return DiffExpr(out)

    def coefficient_polys(self) -> Tuple[LamPoly, ...]:
        return tuple(self._terms.values())


_ZERO = DiffExpr()
_ONE = DiffExpr({(): LamPoly.one()})


def _coerce_expr(x):
    if isinstance(x, DiffExpr):
        return x
    if isinstance(x, (int, Fraction)):
        return DiffExpr.rational(x) if x else _ZERO
    if isinstance(x, LamPoly):
        return DiffExpr.coefficient(x)
    return NotImplemented


def jet(family: str, order: int, cap: int = DEFAULT_ORDER_CAP) -> DiffExpr:
    """The jet symbol family[order] as an expression."""
    return DiffExpr({((_check_atom(family, order, cap), 1),): LamPoly.one()})


def hinv() -> DiffExpr:
    return DiffExpr({((_HINV0, 1),): LamPoly.one()})


def hinv_power(n: int) -> DiffExpr:
    """(h')^(-n) for n >= 0, (h')^(+|n|) for n < 0."""
    if n >= 0:
        mono = ((_HINV0, n),) if n else ()
    else:
        mono = ((_H1, -n),)
    return DiffExpr({mono: LamPoly.one()})


def lam_expr() -> DiffExpr:
    return DiffExpr.coefficient(LamPoly.lam())


# -- total derivative -------------------------------------------------

_D_HINV_MONO = _mono_from_pairs([((_H, 2), 1), (_HINV0, 2)])


def total_derivative(e: DiffExpr, cap: int = DEFAULT_ORDER_CAP) -> DiffExpr:
    """Formal d/dz: Leibniz over monomials, family[n] -> family[n+1],
    hinv -> -h[2]*hinv^2, lam and rationals constant."""
    out: Dict[Monomial, LamPoly] = {}
    for mono, coef in e._terms.items():
        for i, (atom, exp) in enumerate(mono):
            rest = mono[:i] + ((atom, exp - 1),) + mono[i + 1:]
            if atom == _HINV0:
                new = _mono_mul(_mono_from_pairs(rest), _D_HINV_MONO)
                c = coef * (-exp)
            else:
                rank, order = atom
                if order + 1 > cap:
                    raise OrderCapExceeded(
                        f"derivative pushes {atom_name(atom)} past order cap {cap}"
                    )
                new = _mono_mul(_mono_from_pairs(rest), (((rank, order + 1), 1),))
                c = coef * exp
            acc = out.get(new)
            s = c if acc is None else acc + c
            if s.is_zero():
                out.pop(new, None)
            else:
                out[new] = s
    return DiffExpr(out)


def derivative_power(e: DiffExpr, n: int, cap: int = DEFAULT_ORDER_CAP) -> DiffExpr:
    for _ in range(n):
        e = total_derivative(e, cap)
    return e


# -- substitution -----------------------------------------------------


def substitute(
    e: DiffExpr,
    bindings: Mapping[str, DiffExpr],
    cap: int = DEFAULT_ORDER_CAP,
) -> DiffExpr:
    """Simultaneously replace whole families.

    Each binding gives the order-0 replacement; family[n] is replaced by the
    n-th total derivative of the binding.  Replacement is single-pass: the
    prolonged tables are built from the original bindings before anything is
    rewritten, so self-referential bindings (bracket insertion) are fine.
    """
    for fam in bindings:
        if fam not in _RANK:
            raise ValueError(f"unknown jet family {fam!r}")
        if fam in ("h", "hinv"):
            raise ValueError(f"family {fam!r} cannot be rebound")
    ranks = {_RANK[fam]: fam for fam in bindings}
    table: Dict[Atom, DiffExpr] = {}
    for fam, base in bindings.items():
        need = e.max_order(fam)
        cur = base
        rank = _RANK[fam]
        for order in range(0, need + 1):
            table[(rank, order)] = cur
            if order < need:
                cur = total_derivative(cur, cap)
    return substitute_jets(e, table, partial_ok=False)


def substitute_jets(
    e: DiffExpr,
    table: Mapping[Atom, DiffExpr],
    partial_ok: bool = False,
) -> DiffExpr:
    """Replace individual jet symbols by expressions (homomorphically).

    Families that appear in the table must be fully covered at every order
    occurring in ``e`` unless partial_ok is set.
    """
    bound_ranks = {atom[0] for atom in table}
    powers: Dict[Tuple[Atom, int], DiffExpr] = {}

    def power_of(atom: Atom, exp: int) -> DiffExpr:
        key = (atom, exp)
        got = powers.get(key)
        if got is None:
            got = table[atom] ** exp
            powers[key] = got
        return got

    out = _ZERO
    for mono, coef in e._terms.items():
        keep = []
        factors = []
        for atom, exp in mono:
            if atom in table:
                factors.append(power_of(atom, exp))
            elif atom[0] in bound_ranks and not partial_ok:
                raise KeyError(
                    f"binding table covers family {FAMILIES[atom[0]]!r} "
                    f"but not order {atom[1]}"
                )
            else:
                keep.append((atom, exp))
        piece = DiffExpr({_mono_from_pairs(keep): coef})
        for fac in factors:
            piece = piece * fac
        out = out + piece
    return out


# -- evaluation oracle -------------------------------------------------


def eval_rational(
    e: DiffExpr,
    point: Mapping[Tuple[str, int], Rat],
    lam_value: Optional[Rat] = None,
) -> Fraction:
    """Evaluate at an exact rational point.

    ``point`` maps (family, order) to rationals.  hinv is taken to be the
    reciprocal of h[1]'s value (assigning it explicitly and inconsistently is
    an error), and lam_value must be supplied when lam occurs.
    """
    values: Dict[Atom, Fraction] = {}
    for (fam, order), v in point.items():
        values[_check_atom(fam, order, cap=10**9)] = _as_fraction(v)
    h1 = values.get(_H1)
    if _HINV0 in values:
        if h1 is None or values[_HINV0] * h1 != 1:
            raise ValueError("hinv must be assigned the exact reciprocal of h[1]")
    elif h1 is not None:
        if h1 == 0:
            raise ValueError("h[1] assigned 0; the transition must be invertible")
        values[_HINV0] = Fraction(1) / h1

    total = Fraction(0)
    for mono, coef in e._terms.items():
        if coef.degree > 0:
            if lam_value is None:
                raise ValueError("expression depends on lam; supply lam_value")
            c = coef.eval(lam_value)
        else:
            c = coef.constant_value()
        acc = c
        for atom, exp in mono:
            v = values.get(atom)
            if v is None:
                if atom == _HINV0:
                    raise ValueError("h[1] must be assigned to evaluate hinv")
                raise ValueError(f"unassigned jet symbol {atom_name(atom)}")
            acc *= v ** exp
        total += acc
    return total


# -- variational calculus ----------------------------------------------


def partial_derivative(e: DiffExpr, family: str, order: int) -> DiffExpr:
    """Formal partial derivative with respect to one jet symbol."""
    atom = _check_atom(family, order, cap=10**9)
    out: Dict[Monomial, LamPoly] = {}
    for mono, coef in e._terms.items():
        for i, (a, exp) in enumerate(mono):
            if a == atom:
                rest = _mono_from_pairs(mono[:i] + ((a, exp - 1),) + mono[i + 1:])
                c = coef * exp
                acc = out.get(rest)
                s = c if acc is None else acc + c
                if s.is_zero():
                    out.pop(rest, None)
                else:
                    out[rest] = s
                break
    return DiffExpr(out)


def euler_derivative(e: DiffExpr, family: str, cap: int = DEFAULT_ORDER_CAP) -> DiffExpr:
    """Variational derivative sum_j (-D)^j (d e / d family[j])."""
    top = e.max_order(family)
    out = _ZERO
    for j in range(top + 1):
        piece = partial_derivative(e, family, j)
        for _ in range(j):
            piece = -total_derivative(piece, cap)
        out = out + piece
    return out


def is_total_derivative(e: DiffExpr, cap: int = DEFAULT_ORDER_CAP) -> bool:
    """Exactness test: e = D(Y) for some differential polynomial Y.

    Valid for expressions in free jet families only (hinv's derivative rule
    is nonlinear, so expressions containing hinv are rejected).  A polynomial
    with no explicit z dependence is exact iff its constant term vanishes and
    every variational derivative is zero.
    """
    fams = e.families()
    if "hinv" in fams:
        raise ValueError("exactness test is only defined for hinv-free expressions")
    if not e.constant_term().is_zero():
        return False
    return all(euler_derivative(e, fam, cap).is_zero() for fam in fams)
