"""Maximizing P(S >= t) over stake vectors with at most ``n`` bets.

Exhaustive search walks the threshold families instead of the stakes: the tail
depends on the stakes only through their family, and every realizable family
comes with witness stakes from an exact LP.  All reported values are
*restricted* maxima over vectors of at most ``n`` stakes.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .core import (
    Params,
    Stakes,
    StrategyValue,
    average_play,
    bold_play,
    format_fraction,
    tail_dp,
    tail_enum,
)
from .errors import SizeCapError
from .families import ENUMERATION_CAP, enumerate_threshold_families, family_weight, threshold_family

__all__ = [
    "SearchReport",
    "ConjectureVerdict",
    "optimize_exhaustive",
    "optimize_local",
    "csoka_check",
    "conjecture_scan",
]

METHODS = ("exhaustive_families", "local_search", "averages_only")


def _representative_key(stakes: Stakes) -> tuple:
    # fewest non-zero stakes first, then lexicographically largest
    return (stakes.n, tuple(-c for c in stakes.coefficients))


def _strategy_for(stakes: Stakes, value: Fraction, params: Params) -> StrategyValue:
    if stakes.is_average():
        k = stakes.n
        kind = "bold" if params.t > 0 and k == params.t.denominator // params.t.numerator else "average"
        return StrategyValue(kind, value, k=k)
    return StrategyValue("general", value, stakes=stakes)


@dataclass(frozen=True)
class SearchReport:
    """Best value found and every maximizing stake vector (canonical, deduplicated)."""

    params: Params
    best: StrategyValue
    all_maximizers: tuple[Stakes, ...]
    method: str
    n_cap: int
    certificate: str | None = None

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")

    def to_json(self) -> dict:
        return {
            "p": format_fraction(self.params.p),
            "t": format_fraction(self.params.t),
            "method": self.method,
            "n_cap": self.n_cap,
            "scope": f"restricted to <= {self.n_cap} stakes",
            "best": {
                "kind": self.best.kind,
                "k": self.best.k,
                "value": format_fraction(self.best.value),
                "stakes": self.best.stakes.to_strings(),
            },
            "all_maximizers": [s.to_strings() for s in self.all_maximizers],
            "certificate": self.certificate,
        }


def _preferred_stakes(family, witness: Stakes, t: Fraction, n: int) -> Stakes:
    """An equal-stakes vector producing ``family`` if one exists, else the LP witness."""
    for k in range(1, n + 1):
        avg = Stakes.average(k)
        if threshold_family(avg, t, n) == family:
            return avg
    return witness


def optimize_exhaustive(params: Params, n: int, force: bool = False) -> SearchReport:
    """Exact maximum of the tail over all stake vectors with at most ``n`` bets."""
    params.require_regime()
    limit = ENUMERATION_CAP + 1 if force else ENUMERATION_CAP
    if not 1 <= n <= limit:
        raise SizeCapError(f"exhaustive search needs 1 <= n <= {ENUMERATION_CAP} (got {n})")
    scored = [
        (family_weight(fam, params.p), fam, w)
        for fam, w in enumerate_threshold_families(n, params.t, force=force)
    ]
    top = max(v for v, _, _ in scored)
    maximizers = sorted(
        {_preferred_stakes(fam, w.stakes, params.t, n) for v, fam, w in scored if v == top},
        key=_representative_key,
    )
    best = _strategy_for(maximizers[0], top, params)
    averages = [k for k in range(1, n + 1) if average_play(k, params).value == top]
    certificate = None
    if averages:
        certificate = f"maximum over <= {n} stakes is attained by the {averages[0]}-average"
    return SearchReport(params, best, tuple(maximizers), "exhaustive_families", n, certificate)


def _composition_start(n: int, cap: int, k: int) -> list[int]:
    """Integer stakes (in units of 1/cap) spreading ``cap`` as evenly as possible over ``k`` bets."""
    base, extra = divmod(cap, k)
    units = [base + (1 if i < extra else 0) for i in range(k)]
    return units + [0] * (n - k)


def _random_start(n: int, cap: int, rng: random.Random) -> list[int]:
    cuts = sorted(rng.randint(0, cap) for _ in range(n - 1))
    return [b - a for a, b in zip([0] + cuts, cuts + [cap])]


def optimize_local(
    params: Params,
    n: int,
    denominator_cap: int = 60,
    restarts: int = 10,
    seed: int = 0,
    max_steps: int = 200,
) -> SearchReport:
    """Hill climbing over stakes with entries in ``(1/denominator_cap) Z``.

    Starts from the near-uniform ``n``-vector, then every ``k``-average with
    ``k < n`` (as nearly as the grid allows), then ``restarts`` random vectors
    drawn with ``random.Random(seed)``.  A move transfers ``d`` units from one
    bet to another, with ``d`` ranging over powers of two and the whole stake;
    improving moves are taken greedily and sideways moves are allowed a bounded
    number of times to cross plateaus.  The result is a lower bound on the
    restricted maximum.
    """
    params.require_regime()
    if n < 1 or denominator_cap < 1:
        raise ValueError("n and denominator_cap must be positive")
    rng = random.Random(seed)
    cache: dict[tuple[int, ...], Fraction] = {}

    def score(units: list[int]) -> tuple[Fraction, tuple[int, ...]]:
        key = tuple(sorted(units, reverse=True))
        if key not in cache:
            stakes = Stakes(tuple(Fraction(u, denominator_cap) for u in key))
            cache[key] = tail_dp(stakes, params).value
        return cache[key], key

    def neighbours(units: list[int]) -> Iterable[list[int]]:
        for i in range(n):
            if not units[i]:
                continue
            deltas = {units[i]}
            d = 1
            while d < units[i]:
                deltas.add(d)
                d *= 2
            for j in range(n):
                if i == j:
                    continue
                for d in sorted(deltas):
                    moved = list(units)
                    moved[i] -= d
                    moved[j] += d
                    yield moved

    starts = [_composition_start(n, denominator_cap, n)]
    starts += [_composition_start(n, denominator_cap, k) for k in range(1, n)]
    starts += [_random_start(n, denominator_cap, rng) for _ in range(restarts)]

    best_value = Fraction(-1)
    best_keys: set[tuple[int, ...]] = set()
    for units in starts:
        value, key = score(units)
        seen = {key}
        sideways = n * 4
        for _ in range(max_steps):
            improved = None
            flat = []
            for cand in neighbours(list(key)):
                v, k2 = score(cand)
                if v > value:
                    if improved is None or v > improved[0]:
                        improved = (v, k2)
                elif v == value and k2 not in seen:
                    flat.append(k2)
            if improved is not None:
                value, key = improved
            elif flat and sideways:
                sideways -= 1
                key = flat[rng.randrange(len(flat))]
            else:
                break
            seen.add(key)
        # collect every visited vector at the running best
        for k2 in seen:
            v = cache[k2]
            if v > best_value:
                best_value, best_keys = v, {k2}
            elif v == best_value:
                best_keys.add(k2)

    maximizers = sorted(
        {Stakes(tuple(Fraction(u, denominator_cap) for u in k)) for k in best_keys},
        key=_representative_key,
    )
    best = _strategy_for(maximizers[0], best_value, params)
    return SearchReport(params, best, tuple(maximizers), "local_search", n)


@dataclass(frozen=True)
class ConjectureVerdict:
    """Whether an average attains the restricted maximum at ``params``."""

    params: Params
    n_max: int
    confirmed: bool
    max_value: Fraction
    optimal_k: int | None
    bold_k: int
    report: SearchReport = field(repr=False)
    counterexample: Stakes | None = None

    @property
    def is_bold(self) -> bool:
        return self.optimal_k == self.bold_k

    def to_json(self) -> dict:
        return {
            "p": format_fraction(self.params.p),
            "t": format_fraction(self.params.t),
            "n_max": self.n_max,
            "scope": f"restricted to <= {self.n_max} stakes",
            "confirmed": self.confirmed,
            "max_value": format_fraction(self.max_value),
            "optimal_k": self.optimal_k,
            "bold_k": self.bold_k,
            "is_bold": self.is_bold if self.confirmed else False,
            "counterexample": self.counterexample.to_strings() if self.counterexample else None,
            "report": self.report.to_json(),
        }


def csoka_check(params: Params, n_max: int, force: bool = False) -> ConjectureVerdict:
    """Test, within vectors of at most ``n_max`` stakes, that an average is optimal.

    The optimal ``k`` is the smallest ``k <= n_max`` whose average attains the
    exhaustive maximum.  On failure the lexicographically preferred maximizer is
    returned as a counterexample.
    """
    report = optimize_exhaustive(params, n_max, force=force)
    top = report.best.value
    ks = [k for k in range(1, n_max + 1) if average_play(k, params).value == top]
    # the tail of each listed maximizer is recomputed independently of the family weights
    for stakes in report.all_maximizers:
        if tail_enum(stakes, params).value != top:
            raise RuntimeError(f"maximizer {stakes} does not reproduce the family weight")
    bold_k = bold_play(params).k if params.t > 0 else 0
    if ks:
        return ConjectureVerdict(params, n_max, True, top, ks[0], bold_k, report)
    return ConjectureVerdict(
        params, n_max, False, top, None, bold_k, report, counterexample=report.all_maximizers[0]
    )


def conjecture_scan(points: Iterable[Params], n_max: int, force: bool = False) -> dict:
    """Run :func:`csoka_check` over ``points`` and summarize the outcome."""
    verdicts = [csoka_check(pt, n_max, force=force) for pt in points]
    return {
        "n_max": n_max,
        "scope": f"restricted to <= {n_max} stakes",
        "points": len(verdicts),
        "confirmed": sum(v.confirmed for v in verdicts),
        "counterexamples": [
            {
                "p": format_fraction(v.params.p),
                "t": format_fraction(v.params.t),
                "stakes": v.counterexample.to_strings(),
                "value": format_fraction(v.max_value),
            }
            for v in verdicts
            if not v.confirmed
        ],
        "optimal_k": [
            {
                "p": format_fraction(v.params.p),
                "t": format_fraction(v.params.t),
                "k": v.optimal_k,
                "bold": v.is_bold,
                "value": format_fraction(v.max_value),
            }
            for v in verdicts
        ],
    }


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"
