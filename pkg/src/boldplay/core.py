"""Stake vectors and exact engines for P(S >= t).

A stake vector ``c_1 >= c_2 >= ... >= c_n`` (summing to one) is applied to iid
Bernoulli(p) bets; ``S = sum c_i * beta_i`` is the total return.  Every exact
quantity is a :class:`fractions.Fraction`; binary floats only appear in the
Monte Carlo standard error and in decimal rendering.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import RegimeError, SizeCapError

__all__ = [
    "RationalLike",
    "as_fraction",
    "format_fraction",
    "format_decimal",
    "Stakes",
    "Params",
    "TailResult",
    "StrategyValue",
    "ENUM_CAP",
    "SUPPORT_CAP",
    "binomial_tail",
    "distribution",
    "tail_enum",
    "tail_dp",
    "tail_mc",
    "bold_play",
    "average_play",
]

RationalLike = Union[Fraction, int, str, Decimal]

ENUM_CAP = 24
SUPPORT_CAP = 2**22


def as_fraction(value: RationalLike) -> Fraction:
    """Convert ``value`` to an exact :class:`Fraction`.

    Strings may be ``"num/den"`` or decimal literals (``"0.37"``), both
    converted exactly.  Binary floats are refused: ``0.1`` is not one tenth.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational literal {value!r}") from exc
    if isinstance(value, float):
        raise TypeError(
            f"binary float {value!r} is not an exact quantity; pass a string such as '{value!r}'"
        )
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)


def format_decimal(value: Fraction, digits: int = 12) -> str:
    """Render ``value`` with ``digits`` places after the point (display only)."""
    with localcontext() as ctx:
        ctx.prec = max(50, digits + 20)
        dec = Decimal(value.numerator) / Decimal(value.denominator)
        return f"{dec:.{digits}f}"


def _common_denominator(values: Iterable[Fraction]) -> int:
    d = 1
    for v in values:
        d = math.lcm(d, v.denominator)
    return d


def _integer_weights(values: Sequence[Fraction]) -> tuple[list[int], int]:
    d = _common_denominator(values)
    return [int(v * d) for v in values], d


def _integer_threshold(t: Fraction, denom: int) -> int:
    # an integer subset sum s satisfies s/denom >= t iff s >= ceil(t * denom)
    return -((-t.numerator * denom) // t.denominator)


@dataclass(frozen=True)
class Stakes:
    """A canonical stake vector: sorted descending, trailing zeros stripped.

    Construction accepts any ordering and any :data:`RationalLike` entries, so
    two vectors that differ only by a permutation or zero padding compare equal.
    """

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coeffs = sorted((as_fraction(c) for c in self.coefficients), reverse=True)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            raise ValueError("stake vector must have at least one positive coefficient")
        if any(c < 0 or c > 1 for c in coeffs):
            raise ValueError("every stake must lie in [0, 1]")
        total = sum(coeffs, Fraction(0))
        if total != 1:
            raise ValueError(f"stakes must sum to exactly 1, got {format_fraction(total)}")
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def of(cls, *values: RationalLike) -> Stakes:
        return cls(tuple(values))

    @classmethod
    def normalized(cls, values: Iterable[RationalLike]) -> Stakes:
        """Rescale non-negative ``values`` by their total so they sum to one."""
        fracs = [as_fraction(v) for v in values]
        if any(v < 0 for v in fracs):
            raise ValueError("stakes must be non-negative")
        total = sum(fracs, Fraction(0))
        if total <= 0:
            raise ValueError("cannot normalize a vector with zero total")
        return cls(tuple(v / total for v in fracs))

    @classmethod
    def average(cls, k: int) -> Stakes:
        if k < 1:
            raise ValueError("an average needs k >= 1 bets")
        return cls((Fraction(1, k),) * k)

    @classmethod
    def parse(cls, text: str, normalize: bool = False) -> Stakes:
        """Parse a comma separated list such as ``"1/2,1/4,1/4"``."""
        parts = [p for p in text.split(",") if p.strip()]
        if not parts:
            raise ValueError("empty stake list")
        return cls.normalized(parts) if normalize else cls(tuple(parts))

    @property
    def n(self) -> int:
        return len(self.coefficients)

    def __len__(self) -> int:
        return len(self.coefficients)

    def __iter__(self):
        return iter(self.coefficients)

    def __getitem__(self, i: int) -> Fraction:
        return self.coefficients[i]

    def padded(self, n: int) -> tuple[Fraction, ...]:
        if n < self.n:
            raise ValueError(f"cannot pad {self.n} stakes down to {n}")
        return self.coefficients + (Fraction(0),) * (n - self.n)

    def is_average(self) -> bool:
        return all(c == self.coefficients[0] for c in self.coefficients)

    def __str__(self) -> str:
        return ",".join(format_fraction(c) for c in self.coefficients)

    def to_strings(self) -> list[str]:
        return [format_fraction(c) for c in self.coefficients]


@dataclass(frozen=True)
class Params:
    """Success probability ``p`` and threshold ``t``, both exact and in [0, 1]."""

    p: Fraction
    t: Fraction

    def __post_init__(self) -> None:
        p, t = as_fraction(self.p), as_fraction(self.t)
        if not 0 <= p <= 1:
            raise ValueError(f"p must lie in [0, 1], got {format_fraction(p)}")
        if not 0 <= t <= 1:
            raise ValueError(f"t must lie in [0, 1], got {format_fraction(t)}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "t", t)

    def require_regime(self) -> None:
        """Raise :class:`RegimeError` unless ``p <= t``."""
        if self.p > self.t:
            raise RegimeError(
                f"p = {format_fraction(self.p)} exceeds t = {format_fraction(self.t)}; "
                "the supremum is 1 there and no stake vector attains it"
            )

    def __str__(self) -> str:
        return f"p={format_fraction(self.p)}, t={format_fraction(self.t)}"


METHODS = ("enumeration", "convolution", "monte-carlo")


@dataclass(frozen=True)
class TailResult:
    value: Fraction
    method: str
    stderr: float | None = None

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "monte-carlo":
            if self.stderr is None or self.stderr < 0:
                raise ValueError("monte-carlo results carry a non-negative stderr")
        elif self.stderr is not None:
            raise ValueError("exact results carry no stderr")


@dataclass(frozen=True)
class StrategyValue:
    """The tail probability achieved by a strategy.

    ``kind`` is ``"bold"`` (the ``floor(1/t)``-average), ``"average"`` (equal
    stakes on ``k`` bets) or ``"general"`` (arbitrary stakes).
    """

    kind: str
    value: Fraction
    k: int | None = None
    stakes: Stakes | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.kind in ("bold", "average"):
            if self.k is None or self.k < 1:
                raise ValueError(f"{self.kind} strategies need k >= 1")
            if self.stakes is None:
                object.__setattr__(self, "stakes", Stakes.average(self.k))
        elif self.kind == "general":
            if self.stakes is None:
                raise ValueError("general strategies need explicit stakes")
        else:
            raise ValueError(f"unknown strategy kind {self.kind!r}")

    def describe(self) -> str:
        if self.kind == "general":
            return f"general({self.stakes})"
        return f"{self.kind}(k={self.k})"


def binomial_tail(n: int, p: RationalLike, m: int) -> Fraction:
    """Exact ``P(Bin(n, p) >= m)``."""
    p = as_fraction(p)
    if m <= 0:
        return Fraction(1)
    if m > n:
        return Fraction(0)
    a, b = p.numerator, p.denominator
    q = b - a
    # sum over the shorter side of the distribution
    if m > n // 2:
        num = sum(math.comb(n, j) * a**j * q ** (n - j) for j in range(m, n + 1))
        return Fraction(num, b**n)
    num = sum(math.comb(n, j) * a**j * q ** (n - j) for j in range(m))
    return 1 - Fraction(num, b**n)


def _weight_by_size(counts: Sequence[int], n: int, p: Fraction) -> Fraction:
    """``sum_j counts[j] p^j (1-p)^(n-j)`` as an exact fraction."""
    a, b = p.numerator, p.denominator
    q = b - a
    num = sum(int(c) * a**j * q ** (n - j) for j, c in enumerate(counts) if c)
    return Fraction(num, b**n)


def _subset_sums(weights: Sequence[int], big: bool) -> tuple[np.ndarray, np.ndarray]:
    dtype = object if big else np.int64
    sums = np.zeros(1, dtype=dtype)
    sizes = np.zeros(1, dtype=np.int8)
    for w in weights:
        sums = np.concatenate([sums, sums + w])
        sizes = np.concatenate([sizes, sizes + 1])
    return sums, sizes


def tail_enum(stakes: Stakes, params: Params, cap: int = ENUM_CAP) -> TailResult:
    """Sum ``p^|V| (1-p)^(n-|V|)`` over every index set ``V`` whose stakes reach ``t``."""
    n = stakes.n
    if n > cap:
        raise SizeCapError(f"{n} stakes exceed the enumeration cap of {cap}")
    weights, denom = _integer_weights(stakes.coefficients)
    threshold = _integer_threshold(params.t, denom)
    sums, sizes = _subset_sums(weights, big=denom >= 2**62)
    hit_sizes = sizes[(sums >= threshold).astype(bool)]
    counts = np.bincount(hit_sizes.astype(np.int64), minlength=n + 1)
    return TailResult(_weight_by_size(counts.tolist(), n, params.p), "enumeration")


def _mass_distribution(weights: Sequence[int], p: Fraction, cap: int) -> dict[int, int]:
    # masses are numerators over the common denominator p.denominator ** n
    a, b = p.numerator, p.denominator
    q = b - a
    dist: dict[int, int] = {0: 1}
    for w in weights:
        nxt: dict[int, int] = defaultdict(int)
        for s, m in dist.items():
            if q:
                nxt[s] += m * q
            if a:
                nxt[s + w] += m * a
        if len(nxt) > cap:
            raise SizeCapError(f"support of {len(nxt)} points exceeds the cap of {cap}")
        dist = nxt
    return dist


def distribution(
    stakes: Stakes, p: RationalLike, cap: int = SUPPORT_CAP
) -> list[tuple[Fraction, Fraction]]:
    """Exact law of ``S`` as ``(value, probability)`` pairs sorted by value."""
    p = as_fraction(p)
    weights, denom = _integer_weights(stakes.coefficients)
    scale = p.denominator ** stakes.n
    dist = _mass_distribution(weights, p, cap)
    return [(Fraction(s, denom), Fraction(m, scale)) for s, m in sorted(dist.items()) if m]


def tail_dp(stakes: Stakes, params: Params, cap: int = SUPPORT_CAP) -> TailResult:
    """Convolve the bets one at a time and read off the mass on ``[t, 1]``."""
    weights, denom = _integer_weights(stakes.coefficients)
    threshold = _integer_threshold(params.t, denom)
    dist = _mass_distribution(weights, params.p, cap)
    num = sum(m for s, m in dist.items() if s >= threshold)
    return TailResult(Fraction(num, params.p.denominator ** stakes.n), "convolution")


_MC_BATCH = 1 << 16


def tail_mc(stakes: Stakes, params: Params, samples: int, seed: int = 0) -> TailResult:
    """Monte Carlo frequency estimate of ``P(S >= t)``.

    Bets are drawn as ``U{0..b-1} < a`` for ``p = a/b`` from numpy's PCG64
    generator seeded with ``seed``, so each Bernoulli is exact and every sample
    is compared with ``t`` in integer arithmetic.
    """
    if samples < 1:
        raise ValueError("samples must be a positive integer")
    a, b = params.p.numerator, params.p.denominator
    if b >= 2**63:
        raise ValueError("p has a denominator too large for exact sampling")
    weights, denom = _integer_weights(stakes.coefficients)
    threshold = _integer_threshold(params.t, denom)
    w = np.array(weights, dtype=object if denom >= 2**62 else np.int64)
    rng = np.random.default_rng(seed)
    hits = 0
    remaining = samples
    while remaining:
        m = min(remaining, _MC_BATCH)
        bets = rng.integers(0, b, size=(m, stakes.n)) < a
        totals = bets.astype(w.dtype) @ w
        hits += int(np.count_nonzero((totals >= threshold).astype(bool)))
        remaining -= m
    q = hits / samples
    return TailResult(Fraction(hits, samples), "monte-carlo", math.sqrt(q * (1 - q) / samples))


def bold_play(params: Params) -> StrategyValue:
    """Equal stakes on ``k = floor(1/t)`` bets; succeeds iff one bet wins."""
    if params.t <= 0:
        raise RegimeError("bold play needs t > 0 (floor(1/t) is unbounded at t = 0)")
    k = params.t.denominator // params.t.numerator
    return StrategyValue("bold", 1 - (1 - params.p) ** k, k=k)


def average_play(k: int, params: Params) -> StrategyValue:
    """Equal stakes ``1/k``: the tail is ``P(Bin(k, p) >= k t)``."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    kt = k * params.t
    m = -((-kt.numerator) // kt.denominator)
    return StrategyValue("average", binomial_tail(k, params.p, m), k=k)
