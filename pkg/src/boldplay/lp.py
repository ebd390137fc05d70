"""Dense two-phase simplex over exact rationals.

Small and slow by design: the realizability LPs have a few dozen rows, and a
floating point solver cannot certify that an optimal margin is strictly
positive.  Bland's rule guarantees termination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = ["LPResult", "linprog_exact"]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    objective: Fraction | None = None

    @property
    def success(self) -> bool:
        return self.status == OPTIMAL


def _pivot(rows: list[list[Fraction]], r: int, c: int) -> None:
    prow = rows[r]
    inv = 1 / prow[c]
    if inv != 1:
        rows[r] = prow = [v * inv if v else v for v in prow]
    nz = [j for j, v in enumerate(prow) if v]
    for i, row in enumerate(rows):
        if i == r:
            continue
        f = row[c]
        if f:
            for j in nz:
                row[j] -= f * prow[j]


def _run(rows: list[list[Fraction]], basis: list[int], ncols: int) -> str:
    """Maximize the objective stored (negated) in the last row of ``rows``."""
    z = rows[-1]
    while True:
        enter = next((j for j in range(ncols) if z[j] < 0), None)
        if enter is None:
            return OPTIMAL
        best = None
        for i in range(len(rows) - 1):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return UNBOUNDED
        leave = best[1]
        _pivot(rows, leave, enter)
        basis[leave] = enter
        z = rows[-1]


def linprog_exact(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    """Maximize ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``.

    All coefficients are converted to :class:`Fraction`; the returned point and
    objective are exact.
    """
    n = len(c)
    cons: list[tuple[list[Fraction], Fraction, str]] = []
    for row, b in zip(A_ub, b_ub):
        cons.append(([Fraction(v) for v in row], Fraction(b), "ub"))
    for row, b in zip(A_eq, b_eq):
        cons.append(([Fraction(v) for v in row], Fraction(b), "eq"))
    for row, _, _ in cons:
        if len(row) != n:
            raise ValueError("constraint width does not match the objective")

    n_slack = sum(1 for _, _, kind in cons if kind == "ub")
    needs_art = [kind == "eq" or b < 0 for _, b, kind in cons]
    n_art = sum(needs_art)
    width = n + n_slack + n_art
    zero = Fraction(0)

    rows: list[list[Fraction]] = []
    basis: list[int] = []
    slack_at = n
    art_at = n + n_slack
    for (row, b, kind), art in zip(cons, needs_art):
        full = row + [zero] * (n_slack + n_art) + [b]
        if kind == "ub":
            full[slack_at] = Fraction(1)
            slack_col = slack_at
            slack_at += 1
        if b < 0:
            full = [-v for v in full]
        if art:
            full[art_at] = Fraction(1)
            basis.append(art_at)
            art_at += 1
        else:
            basis.append(slack_col)
        rows.append(full)

    # phase one: maximize -(sum of artificials)
    if n_art:
        z = [zero] * (width + 1)
        for j in range(n + n_slack, width):
            z[j] = Fraction(1)
        for i, b in enumerate(basis):
            if b >= n + n_slack:
                z = [zv - rv for zv, rv in zip(z, rows[i])]
        rows.append(z)
        _run(rows, basis, width)
        if rows[-1][-1] != 0:
            return LPResult(INFEASIBLE)
        rows.pop()
        # drive artificials at level zero out of the basis
        keep = []
        for i, b in enumerate(basis):
            if b >= n + n_slack:
                col = next((j for j in range(n + n_slack) if rows[i][j] != 0), None)
                if col is None:
                    continue
                _pivot(rows, i, col)
                basis[i] = col
            keep.append(i)
        rows = [rows[i][: n + n_slack] + [rows[i][-1]] for i in keep]
        basis = [basis[i] for i in keep]
        width = n + n_slack

    z = [-Fraction(v) for v in c] + [zero] * (width - n + 1)
    for i, b in enumerate(basis):
        if z[b]:
            f = z[b]
            z = [zv - f * rv for zv, rv in zip(z, rows[i])]
    rows.append(z)
    status = _run(rows, basis, width)
    if status != OPTIMAL:
        return LPResult(status)
    x = [zero] * width
    for i, b in enumerate(basis):
        x[b] = rows[i][-1]
    return LPResult(OPTIMAL, tuple(x[:n]), rows[-1][-1])
