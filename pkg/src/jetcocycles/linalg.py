"""Exact rational linear algebra for the correction solver and certificates.

Systems arrive as sparse rows over Fraction.  Incremental row reduction
keeps at most one pivot row per variable, so feeding many thousands of
mostly-redundant equations is cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

Row = Dict[int, Fraction]


@dataclass
class AffineSolution:
    """Solution set of A x = b: particular point plus nullspace basis."""

    nvars: int
    particular: Dict[int, Fraction]
    nullspace: List[Dict[int, Fraction]]

    @property
    def dimension(self) -> int:
        return len(self.nullspace)

    def point(self, gauge: Iterable[Fraction]) -> Dict[int, Fraction]:
        out = dict(self.particular)
        for t, vec in zip(gauge, self.nullspace):
            if t:
                for i, v in vec.items():
                    out[i] = out.get(i, Fraction(0)) + t * v
        return {i: v for i, v in out.items() if v}


def solve_affine(rows: Iterable[Tuple[Row, Fraction]], nvars: int) -> Optional[AffineSolution]:
    """Solve the sparse system; None when inconsistent.

    The particular solution sets all free variables to zero.  Deterministic:
    pivots are chosen as the smallest variable index in each reduced row.
    """
    pivots: Dict[int, Tuple[Row, Fraction]] = {}
    for row, rhs in rows:
        work = {i: v for i, v in row.items() if v}
        while work:
            lead = min(work)
            hit = pivots.get(lead)
            if hit is None:
                inv = Fraction(1) / work[lead]
                norm = {i: v * inv for i, v in work.items()}
                pivots[lead] = (norm, rhs * inv)
                break
            prow, prhs = hit
            factor = work[lead]
            for i, v in prow.items():
                nv = work.get(i, Fraction(0)) - factor * v
                if nv:
                    work[i] = nv
                else:
                    work.pop(i, None)
            rhs = rhs - factor * prhs
        else:
            if rhs != 0:
                return None

    # back-substitute to reduced echelon form
    for lead in sorted(pivots, reverse=True):
        prow, prhs = pivots[lead]
        for other in sorted(pivots):
            if other >= lead:
                break
            orow, orhs = pivots[other]
            factor = orow.get(lead)
            if factor:
                for i, v in prow.items():
                    nv = orow.get(i, Fraction(0)) - factor * v
                    if nv:
                        orow[i] = nv
                    else:
                        orow.pop(i, None)
                pivots[other] = (orow, orhs - factor * prhs)

    particular = {lead: prhs for lead, (_prow, prhs) in pivots.items() if prhs}
    free = [i for i in range(nvars) if i not in pivots]
    nullspace = []
    for fv in free:
        vec: Row = {fv: Fraction(1)}
        for lead, (prow, _prhs) in pivots.items():
            coef = prow.get(fv)
            if coef:
                vec[lead] = -coef
        nullspace.append(vec)
    return AffineSolution(nvars, particular, nullspace)
