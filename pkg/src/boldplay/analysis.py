"""Bounds on the diagonal p = t, the settled-region classifier, binomial tails.

The classifier encodes the known optimality results for bold play as exact
predicates on ``(p, t)``.  Each verdict carries a citation key:

================================  ============================================
key                               hypothesis
================================  ============================================
``weak-law``                      ``t < p`` (supremum is 1, never attained)
``high-threshold-half``           ``p <= t == 1/2``
``high-threshold``                ``p <= 1/2 < t``
``favorable-odds``                ``k/(k+1) < p <= (k+1)/(k+2) < t``
``favorable-odds-diagonal``       ``p == t == (k+1)/(k+2)``
``favorable-odds-odd-point``      ``p == (2k+1)/(2k+3)``, ``t == (k+1)/(k+2)``, k > 1
``unfavorable-odds``              ``p < 1/(2k+1)`` and ``t > 1/(k+1)``
``third-threshold``               ``t == 1/3`` and ``p == 1/b``, integer b >= 3
``majority-family``               ``1/2 < p <= t <= 2/3`` (bold play loses)
================================  ============================================
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import IO, Iterable

from .core import (
    Params,
    RationalLike,
    StrategyValue,
    as_fraction,
    average_play,
    binomial_tail,
    bold_play,
    format_decimal,
    format_fraction,
)
from .errors import RegimeError

__all__ = [
    "PRECISION",
    "BOUND_TOL",
    "HypotenuseBounds",
    "RegionVerdict",
    "BestAverage",
    "pz_upper",
    "feige_upper",
    "bold_lower_hyp",
    "hypotenuse_bounds",
    "bound_curve",
    "classify",
    "region_grid",
    "candidate_ks",
    "best_average",
    "pepys_sequence",
    "chaundy_bullard_check",
    "write_region_csv",
    "write_bounds_csv",
]

# decimal digits for the irrational bounds (about 133 bits of mantissa)
PRECISION = 40
BOUND_TOL = Decimal("1e-12")
FEIGE_CONSTANT = Decimal("0.1798")

BOLD_OPTIMAL = "bold_optimal"
BOLD_NOT_OPTIMAL = "bold_not_optimal"
UNKNOWN = "unknown"
SUP_IS_ONE = "sup_is_one"
STATUSES = (BOLD_OPTIMAL, BOLD_NOT_OPTIMAL, UNKNOWN, SUP_IS_ONE)


def _dec(x: Fraction) -> Decimal:
    return Decimal(x.numerator) / Decimal(x.denominator)


def _open_unit(p: Fraction) -> None:
    if not 0 < p < 1:
        raise ValueError(f"p must lie strictly between 0 and 1, got {format_fraction(p)}")


def pz_upper(p: RationalLike) -> Decimal:
    """Paley-Zygmund type bound ``1 - (2 sqrt 3 - 3) / max(3, 1/(p(1-p)) - 3)``."""
    p = as_fraction(p)
    _open_unit(p)
    with localcontext() as ctx:
        ctx.prec = PRECISION
        denom = max(Decimal(3), _dec(1 / (p * (1 - p))) - 3)
        return 1 - (2 * Decimal(3).sqrt() - 3) / denom


def feige_upper(p: RationalLike) -> Decimal:
    """Linear bound ``0.8202 + 0.1798 p`` from the small-deviation constant 0.1798."""
    p = as_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    with localcontext() as ctx:
        ctx.prec = PRECISION
        return 1 - FEIGE_CONSTANT + FEIGE_CONSTANT * _dec(p)


def bold_lower_hyp(p: RationalLike) -> Fraction:
    """Bold play at ``t = p``: ``1 - (1-p)^k`` with ``1/(k+1) < p <= 1/k``."""
    p = as_fraction(p)
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    k = p.denominator // p.numerator
    return 1 - (1 - p) ** k


@dataclass(frozen=True)
class HypotenuseBounds:
    p: Fraction
    lower: Fraction
    upper_pz: Decimal
    upper_feige: Decimal

    @property
    def upper(self) -> Decimal:
        return min(self.upper_pz, self.upper_feige)

    def consistent(self, tol: Decimal = BOUND_TOL) -> bool:
        return _dec(self.lower) <= self.upper + tol


def hypotenuse_bounds(p: RationalLike) -> HypotenuseBounds:
    p = as_fraction(p)
    return HypotenuseBounds(p, bold_lower_hyp(p), pz_upper(p), feige_upper(p))


def bound_curve(resolution: int) -> list[HypotenuseBounds]:
    """Bounds at ``p = i/resolution`` for ``0 < i < resolution``."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    return [hypotenuse_bounds(Fraction(i, resolution)) for i in range(1, resolution)]


@dataclass(frozen=True)
class RegionVerdict:
    status: str
    justification: str | None = None
    witness: StrategyValue | None = None

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.status != UNKNOWN and not self.justification:
            raise ValueError("settled verdicts need a justification")


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _favorable_k(p: Fraction, t: Fraction) -> int | None:
    if p >= 1:
        return None
    for k in range(1, _ceil(1 / (1 - p)) + 2):
        if Fraction(k, k + 1) < p <= Fraction(k + 1, k + 2) < t:
            return k
    return None


def _diagonal_k(p: Fraction, t: Fraction) -> int | None:
    # p == t == (k+1)/(k+2)  <=>  p has the form m/(m+1) with m >= 2
    if p != t or p.denominator != p.numerator + 1 or p.numerator < 2:
        return None
    return p.numerator - 1


def _odd_point_k(p: Fraction, t: Fraction) -> int | None:
    if t.denominator != t.numerator + 1 or t.numerator < 3:
        return None
    k = t.numerator - 1
    return k if p == Fraction(2 * k + 1, 2 * k + 3) else None


def _unfavorable_k(p: Fraction, t: Fraction) -> int | None:
    if t <= 0:
        return None
    for k in range(1, _ceil(1 / t) + 1):
        if p < Fraction(1, 2 * k + 1) and t > Fraction(1, k + 1):
            return k
    return None


def _majority_k(t: Fraction) -> int:
    """Largest k with ``t <= (k+1)/(2k+1)``, for ``1/2 < t <= 2/3``."""
    # (k+1)/(2k+1) >= t  <=>  k (2t - 1) <= 1 - t
    return math.floor((1 - t) / (2 * t - 1))


def classify(params: Params) -> RegionVerdict:
    """Settle bold play at ``(p, t)`` from the known results, or report unknown."""
    p, t = params.p, params.t
    half = Fraction(1, 2)
    if t < p:
        return RegionVerdict(SUP_IS_ONE, "weak-law")
    if t == half:
        return RegionVerdict(BOLD_OPTIMAL, "high-threshold-half", bold_play(params))
    if p <= half < t:
        return RegionVerdict(BOLD_OPTIMAL, "high-threshold", bold_play(params))
    if _favorable_k(p, t) is not None:
        return RegionVerdict(BOLD_OPTIMAL, "favorable-odds", bold_play(params))
    k = _diagonal_k(p, t)
    if k is not None:
        if k > 1:
            return RegionVerdict(BOLD_OPTIMAL, "favorable-odds-diagonal", bold_play(params))
        return RegionVerdict(BOLD_NOT_OPTIMAL, "favorable-odds-diagonal", average_play(3, params))
    if _odd_point_k(p, t) is not None:
        return RegionVerdict(BOLD_OPTIMAL, "favorable-odds-odd-point", bold_play(params))
    if _unfavorable_k(p, t) is not None:
        return RegionVerdict(BOLD_OPTIMAL, "unfavorable-odds", bold_play(params))
    if t == Fraction(1, 3) and p > 0 and p.numerator == 1 and p.denominator >= 3:
        return RegionVerdict(BOLD_OPTIMAL, "third-threshold", bold_play(params))
    if half < p <= t <= Fraction(2, 3):
        k = _majority_k(t)
        return RegionVerdict(BOLD_NOT_OPTIMAL, "majority-family", average_play(2 * k + 1, params))
    return RegionVerdict(UNKNOWN)


@dataclass(frozen=True)
class GridPoint:
    p: Fraction
    t: Fraction
    verdict: RegionVerdict


def region_grid(resolution: int) -> list[GridPoint]:
    """Classify every ``(i/r, j/r)`` with ``p <= t``, ordered by ``(p, t)``."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    out = []
    for i in range(resolution + 1):
        for j in range(i, resolution + 1):
            p, t = Fraction(i, resolution), Fraction(j, resolution)
            out.append(GridPoint(p, t, classify(Params(p, t))))
    return out


def candidate_ks(t: RationalLike, n_max: int) -> list[int]:
    """``floor(n/t)`` for ``n = 1..n_max``: the only averages worth considering."""
    t = as_fraction(t)
    if not 0 < t <= 1:
        raise ValueError("t must lie in (0, 1]")
    return sorted({math.floor(n / t) for n in range(1, n_max + 1)})


@dataclass(frozen=True)
class BestAverage:
    k: int
    value: Fraction
    maximizers: tuple[int, ...]

    @property
    def strategy(self) -> StrategyValue:
        return StrategyValue("average", self.value, k=self.k)


def best_average(params: Params, n_max: int, ks: Iterable[int] | None = None) -> BestAverage:
    """Best equal-stakes strategy among :func:`candidate_ks` (or an explicit ``ks``)."""
    params.require_regime()
    if params.t <= 0:
        raise RegimeError("t must be positive")
    ks = candidate_ks(params.t, n_max) if ks is None else sorted(set(ks))
    values = {k: average_play(k, params).value for k in ks}
    top = max(values.values())
    winners = tuple(k for k in ks if values[k] == top)
    return BestAverage(winners[0], top, winners)


def pepys_sequence(a: int, p: RationalLike, k_max: int) -> list[Fraction]:
    """``P(Bin(k a, p) >= k)`` for ``k = 1..k_max``."""
    p = as_fraction(p)
    return [binomial_tail(k * a, p, k) for k in range(1, k_max + 1)]


def chaundy_bullard_check(a: int, k_max: int, p: RationalLike) -> bool:
    """True iff ``P(Bin(k a, p) >= k)`` strictly decreases over ``k = 1..k_max``."""
    p = as_fraction(p)
    if a < 2:
        raise ValueError("a must be at least 2")
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    if not 0 < p <= Fraction(1, a):
        raise RegimeError(f"monotonicity is only established for 0 < p <= 1/{a}")
    seq = pepys_sequence(a, p, k_max)
    return all(x > y for x, y in zip(seq, seq[1:]))


def write_region_csv(points: Iterable[GridPoint], fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["p", "t", "status", "citation"])
    for pt in points:
        writer.writerow(
            [
                format_fraction(pt.p),
                format_fraction(pt.t),
                pt.verdict.status,
                pt.verdict.justification or "",
            ]
        )


def write_bounds_csv(rows: Iterable[HypotenuseBounds], fh: IO[str], digits: int = 12) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["p", "lower", "upper_pz", "upper_feige"])
    q = Decimal(1).scaleb(-digits)
    for row in rows:
        writer.writerow(
            [
                format_fraction(row.p),
                format_decimal(row.lower, digits),
                str(row.upper_pz.quantize(q)),
                str(row.upper_feige.quantize(q)),
            ]
        )
