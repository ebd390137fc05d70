"""Set-family view of tail probabilities.

Index sets are bitmasks over a ground set ``{1..n}``: bit ``i`` stands for
element ``i + 1``, and element 1 carries the largest stake.  The tail of a
stake vector only depends on its threshold family (the index sets whose stakes
reach ``t``), so most of the combinatorics here works on families directly.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .core import (
    RationalLike,
    Stakes,
    _integer_threshold,
    _integer_weights,
    _weight_by_size,
    as_fraction,
    format_fraction,
)
from .errors import RegimeError, SizeCapError, StructureError
from .lp import linprog_exact

__all__ = [
    "GROUND_CAP",
    "SubsetFamily",
    "IntervalFamily",
    "RealizabilityWitness",
    "FishburnMaximum",
    "threshold_family",
    "family_weight",
    "is_intersecting",
    "matching_number",
    "fishburn_max",
    "max_intersecting_weight",
    "realizable",
    "up_sets",
    "shifted_up_sets",
    "enumerate_threshold_families",
    "verify_interval_union",
    "verify_cross_intersecting",
    "verify_measure_intersection",
    "scan_interval_union",
    "scan_cross_intersecting",
    "scan_measure_intersection",
]

GROUND_CAP = 24
REALIZABLE_CAP = 12
ENUMERATION_CAP = 5


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _elements(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


@dataclass(frozen=True)
class SubsetFamily:
    """A family of subsets of ``{1..n}`` stored as bitmasks."""

    n: int
    members: frozenset[int]

    def __post_init__(self) -> None:
        if not 0 <= self.n <= GROUND_CAP:
            raise SizeCapError(f"ground size {self.n} outside 0..{GROUND_CAP}")
        members = frozenset(self.members)
        limit = 1 << self.n
        if any(not 0 <= m < limit for m in members):
            raise StructureError(f"member outside the ground set of size {self.n}")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> SubsetFamily:
        """Build from 1-based index collections, e.g. ``[[1], [2, 3]]``."""
        masks = set()
        for s in sets:
            mask = 0
            for i in s:
                if not 1 <= i <= n:
                    raise StructureError(f"index {i} outside 1..{n}")
                mask |= 1 << (i - 1)
            masks.add(mask)
        return cls(n, frozenset(masks))

    @classmethod
    def where(cls, n: int, predicate: Callable[[int], bool]) -> SubsetFamily:
        return cls(n, frozenset(m for m in range(1 << n) if predicate(m)))

    @classmethod
    def star(cls, n: int) -> SubsetFamily:
        """All sets containing element 1."""
        return cls.where(n, lambda m: m & 1)

    @classmethod
    def majority(cls, n: int) -> SubsetFamily:
        """All sets with more than ``n/2`` elements."""
        return cls.where(n, lambda m: 2 * _popcount(m) > n)

    @classmethod
    def power_set(cls, n: int) -> SubsetFamily:
        return cls(n, frozenset(range(1 << n)))

    def __contains__(self, item) -> bool:
        if isinstance(item, int):
            return item in self.members
        return self.from_sets(self.n, [item]).members <= self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members, key=lambda m: (_popcount(m), _elements(m))))

    def to_sets(self) -> list[list[int]]:
        return [[i + 1 for i in _elements(m)] for m in self]

    def to_json(self) -> dict:
        return {"n": self.n, "members": self.to_sets()}

    @classmethod
    def from_json(cls, data: Mapping | str) -> SubsetFamily:
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_sets(int(data["n"]), data["members"])

    def is_up_set(self) -> bool:
        full = (1 << self.n) - 1
        for m in self.members:
            free = full & ~m
            while free:
                bit = free & -free
                if m | bit not in self.members:
                    return False
                free ^= bit
        return True

    def minimal_members(self) -> list[int]:
        return [m for m in self.members if not any(o != m and o & m == o for o in self.members)]

    def maximal_non_members(self) -> list[int]:
        """Maximal sets outside the family (only meaningful for up-sets)."""
        full = (1 << self.n) - 1
        out = [m for m in range(1 << self.n) if m not in self.members]
        outside = set(out)
        result = []
        for m in out:
            free = full & ~m
            maximal = True
            while free:
                bit = free & -free
                if m | bit in outside:
                    maximal = False
                    break
                free ^= bit
            if maximal:
                result.append(m)
        return result

    def padded(self, n: int) -> SubsetFamily:
        """The up-set generated on a larger ground set by adding free elements."""
        if n < self.n:
            raise ValueError("cannot shrink the ground set")
        extra = n - self.n
        return SubsetFamily(
            n, frozenset(m | (e << self.n) for m in self.members for e in range(1 << extra))
        )

    def __repr__(self) -> str:
        return f"SubsetFamily(n={self.n}, members={self.to_sets()})"


@dataclass(frozen=True)
class IntervalFamily:
    """Cyclic intervals ``[b, b + a)`` in ``Z/nZ`` given as ``(b, a)`` pairs."""

    modulus: int
    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        n = self.modulus
        if n < 2:
            raise ValueError("modulus must be at least 2")
        normalized = []
        for b, a in self.intervals:
            if not 0 < a < n:
                raise StructureError(f"interval length {a} must satisfy 0 < a < {n}")
            normalized.append((b % n, a))
        object.__setattr__(self, "intervals", tuple(normalized))

    def interval_set(self, b: int, a: int) -> frozenset[int]:
        return frozenset((b + i) % self.modulus for i in range(a))

    def sets(self) -> list[frozenset[int]]:
        return [self.interval_set(b, a) for b, a in self.intervals]

    def distinct(self) -> set[tuple[int, int]]:
        return set(self.intervals)

    def union(self) -> frozenset[int]:
        return frozenset().union(*self.sets()) if self.intervals else frozenset()


@dataclass(frozen=True)
class RealizabilityWitness:
    """Outcome of a realizability LP.

    ``weights`` lists the per-element stakes in ground-set order (zeros
    included); ``stakes`` is their canonical form.  ``margin`` is the optimal
    gap between ``t`` and the heaviest non-member (zero when not realizable).
    """

    stakes: Stakes | None
    margin: Fraction
    weights: tuple[Fraction, ...] | None = None

    @property
    def realizable(self) -> bool:
        return self.stakes is not None

    def to_json(self) -> dict:
        return {
            "stakes": self.stakes.to_strings() if self.stakes else None,
            "weights": [format_fraction(w) for w in self.weights] if self.weights else None,
            "margin": format_fraction(self.margin),
        }


def _family_from_weights(weights: Sequence[Fraction], t: Fraction) -> SubsetFamily:
    n = len(weights)
    if n > GROUND_CAP:
        raise SizeCapError(f"ground size {n} exceeds the cap of {GROUND_CAP}")
    ints, denom = _integer_weights(list(weights))
    threshold = _integer_threshold(t, denom)
    sums = [0]
    for w in ints:
        sums += [s + w for s in sums]
    return SubsetFamily(n, frozenset(m for m, s in enumerate(sums) if s >= threshold))


def threshold_family(stakes: Stakes, t: RationalLike, n: int | None = None) -> SubsetFamily:
    """Index sets ``V`` with ``sum(c_i for i in V) >= t``.

    ``n`` pads the stake vector with zero stakes to a larger ground set.
    """
    t = as_fraction(t)
    n = stakes.n if n is None else n
    return _family_from_weights(stakes.padded(n), t)


def family_weight(family: SubsetFamily, p: RationalLike) -> Fraction:
    """``sum over V in family of p^|V| (1-p)^(n-|V|)``."""
    p = as_fraction(p)
    counts = [0] * (family.n + 1)
    for m in family.members:
        counts[_popcount(m)] += 1
    return _weight_by_size(counts, family.n, p)


def is_intersecting(family: SubsetFamily) -> bool:
    """True iff no two members (a member with itself included) are disjoint."""
    mins = family.minimal_members()
    # disjoint members shrink to disjoint minimal members
    return all(a & b for a, b in itertools.combinations_with_replacement(mins, 2))


def matching_number(family: SubsetFamily) -> int:
    """Largest number of pairwise disjoint members."""
    # the empty set is disjoint from everything, so it is matched on its own
    rest = SubsetFamily(family.n, family.members - {0})
    mins = list(rest.minimal_members())
    bonus = 1 if 0 in family.members else 0
    if not mins:
        return bonus
    by_low: dict[int, list[int]] = {}
    for m in mins:
        by_low.setdefault(m & -m, []).append(m)
    union = 0
    for m in mins:
        union |= m

    @lru_cache(maxsize=None)
    def best(avail: int) -> int:
        if not avail:
            return 0
        low = avail & -avail
        # either the lowest free element is left unused ...
        value = best(avail ^ low)
        # ... or it is covered by a member whose lowest element it is
        for m in by_low.get(low, ()):
            if m & avail == m:
                value = max(value, 1 + best(avail & ~m))
        return value

    return bonus + best(union)


@dataclass(frozen=True)
class FishburnMaximum:
    """Maximizing intersecting families for a fixed ``n`` and ``p``."""

    families: tuple[SubsetFamily, ...]
    weight: Fraction

    @property
    def family(self) -> SubsetFamily:
        return self.families[0]

    @property
    def tie(self) -> bool:
        return len(self.families) > 1


def fishburn_max(n: int, p: RationalLike) -> FishburnMaximum:
    """Heaviest intersecting family: the star for p <= 1/2, the majority for odd n and p >= 1/2."""
    p = as_fraction(p)
    if n < 1:
        raise ValueError("n must be positive")
    half = Fraction(1, 2)
    if p > half and n % 2 == 0:
        raise RegimeError("the maximizer for p > 1/2 is only known for odd n")
    families = []
    if p <= half:
        families.append(SubsetFamily.star(n))
    if p >= half:
        maj = SubsetFamily.majority(n)
        if maj not in families:
            families.append(maj)
    return FishburnMaximum(tuple(families), family_weight(families[0], p))


def _antichains(
    elements: Sequence[int], compatible: Callable[[int, int], bool]
) -> Iterator[tuple[int, ...]]:
    """Every set of pairwise compatible elements, each exactly once."""
    size = len(elements)
    later = [0] * size
    for i in range(size):
        mask = 0
        for j in range(i + 1, size):
            if compatible(elements[i], elements[j]):
                mask |= 1 << j
        later[i] = mask
    stack: list[tuple[int, tuple[int, ...]]] = [((1 << size) - 1, ())]
    while stack:
        candidates, chosen = stack.pop()
        yield tuple(elements[i] for i in chosen)
        while candidates:
            low = candidates & -candidates
            j = low.bit_length() - 1
            candidates ^= low
            stack.append((candidates & later[j], chosen + (j,)))


def _incomparable(u: int, v: int) -> bool:
    w = u & v
    return w != u and w != v


def _dominates(w: int, v: int) -> bool:
    """True when ``w`` contains a left-shifted copy of ``v``.

    For non-increasing stakes this forces ``sum(w) >= sum(v)``.
    """
    ew, ev = _elements(w), _elements(v)
    return len(ew) >= len(ev) and all(a <= b for a, b in zip(ew, ev))


@lru_cache(maxsize=None)
def _dominance_table(n: int) -> tuple[int, ...]:
    # bit w of table[v] is set when w dominates v
    table = []
    for v in range(1 << n):
        row = 0
        for w in range(1 << n):
            if _dominates(w, v):
                row |= 1 << w
        table.append(row)
    return tuple(table)


def _check_enumeration_size(n: int, force: bool) -> None:
    if n < 0:
        raise ValueError("n must be non-negative")
    limit = ENUMERATION_CAP + 1 if force else ENUMERATION_CAP
    if n > limit:
        raise SizeCapError(
            f"up-set enumeration is capped at n = {ENUMERATION_CAP}"
            + ("" if force else " (n = 6 needs force=True)")
        )


def up_sets(n: int, force: bool = False) -> Iterator[SubsetFamily]:
    """All up-sets (monotone families) on ``{1..n}``, generated from their antichains."""
    _check_enumeration_size(n, force)
    for anti in _antichains(list(range(1 << n)), _incomparable):
        members = set()
        for m in range(1 << n):
            if any(m & a == a for a in anti):
                members.add(m)
        yield SubsetFamily(n, frozenset(members))


def shifted_up_sets(n: int, force: bool = False) -> Iterator[SubsetFamily]:
    """Up-sets closed under replacing an element by a smaller index.

    These are the only families a non-increasing stake vector can produce.
    """
    _check_enumeration_size(n, force)
    table = _dominance_table(n)

    def compatible(u: int, v: int) -> bool:
        return not (table[u] >> v & 1) and not (table[v] >> u & 1)

    for anti in _antichains(list(range(1 << n)), compatible):
        bits = 0
        for a in anti:
            bits |= table[a]
        yield SubsetFamily(n, frozenset(_elements(bits)))


def realizable(family: SubsetFamily, t: RationalLike, ordered: bool = True) -> RealizabilityWitness:
    """Decide whether some stake vector has exactly ``family`` as threshold family.

    Maximizes the margin ``delta`` in ``sum(V) <= t - delta`` over maximal
    non-members, subject to ``sum(V) >= t`` on minimal members and the stakes
    summing to one; the family is realizable iff the optimal margin is
    positive.  With ``ordered`` the stakes must also be non-increasing along the
    ground set, so that the canonical :class:`Stakes` regenerate the family.
    """
    t = as_fraction(t)
    n = family.n
    if n > REALIZABLE_CAP:
        raise SizeCapError(f"realizability is capped at ground size {REALIZABLE_CAP}")
    if n == 0:
        raise StructureError("the ground set must be non-empty")
    if not family.is_up_set():
        raise StructureError("only up-sets can be threshold families")

    # variables: c_1..c_n, then d = delta + 1 in [0, 2]
    width = n + 1
    a_ub: list[list[int]] = []
    b_ub: list[Fraction] = []
    for m in family.minimal_members():
        a_ub.append([-(m >> i & 1) for i in range(n)] + [0])
        b_ub.append(-t)
    for m in family.maximal_non_members():
        a_ub.append([m >> i & 1 for i in range(n)] + [1])
        b_ub.append(t + 1)
    if ordered:
        for i in range(n - 1):
            row = [0] * width
            row[i], row[i + 1] = -1, 1
            a_ub.append(row)
            b_ub.append(Fraction(0))
    a_ub.append([0] * n + [1])
    b_ub.append(Fraction(2))
    res = linprog_exact([0] * n + [1], a_ub, b_ub, [[1] * n + [0]], [1])
    if not res.success:
        return RealizabilityWitness(None, Fraction(0))
    margin = res.x[-1] - 1
    if margin <= 0:
        return RealizabilityWitness(None, Fraction(0))
    weights = res.x[:n]
    return RealizabilityWitness(Stakes(weights), margin, tuple(weights))


@lru_cache(maxsize=64)
def _threshold_families(
    n: int, t: Fraction, canonical_only: bool, force: bool
) -> tuple[tuple[SubsetFamily, RealizabilityWitness], ...]:
    source = shifted_up_sets(n, force) if canonical_only else up_sets(n, force)
    out = []
    for fam in source:
        w = realizable(fam, t, ordered=canonical_only)
        if w.realizable:
            out.append((fam, w))
    return tuple(out)


def enumerate_threshold_families(
    n: int, t: RationalLike, canonical_only: bool = True, force: bool = False
) -> list[tuple[SubsetFamily, RealizabilityWitness]]:
    """Every threshold family on ``{1..n}`` at threshold ``t``, with a witness.

    With ``canonical_only`` (the default) only families of non-increasing stake
    vectors are produced, one per permutation class, and each witness
    regenerates its family through :func:`threshold_family`.  Otherwise every
    realizable up-set is returned and the witness ``weights`` (in ground-set
    order) regenerate it.  Zero stakes are allowed, so families of fewer than
    ``n`` bets appear padded to ground size ``n``.
    """
    return list(_threshold_families(n, as_fraction(t), canonical_only, force))


def max_intersecting_weight(n: int, p: RationalLike) -> tuple[Fraction, list[SubsetFamily]]:
    """Brute-force maximum of ``family_weight`` over every intersecting family.

    The up-closure of an intersecting family is intersecting and no lighter, so
    it suffices to scan intersecting up-sets, i.e. antichains of pairwise
    intersecting non-empty sets.  Returns the maximum and all maximizing up-sets.
    """
    p = as_fraction(p)
    _check_enumeration_size(n, force=False)
    elems = list(range(1, 1 << n))
    best = Fraction(-1)
    winners: list[SubsetFamily] = []
    for anti in _antichains(elems, lambda u, v: _incomparable(u, v) and bool(u & v)):
        fam = SubsetFamily.where(n, lambda m: any(m & a == a for a in anti))
        w = family_weight(fam, p)
        if w > best:
            best, winners = w, [fam]
        elif w == best:
            winners.append(fam)
    return best, winners


# Interval lemmas on Z/nZ ---------------------------------------------------


def verify_interval_union(n: int, a: int, family: IntervalFamily) -> bool:
    """Check ``|union| >= k + a - 1`` for ``k`` distinct intervals of length ``a``."""
    if family.modulus != n:
        raise StructureError("interval family lives in a different modulus")
    if any(length != a for _, length in family.intervals):
        raise StructureError(f"every interval must have length {a}")
    union = family.union()
    if len(union) >= n:
        raise RegimeError("the union covers Z/nZ; the bound needs a proper subset")
    k = len(family.distinct())
    return len(union) >= k + a - 1


def _cross_intersecting(f: Sequence[frozenset[int]], g: Sequence[frozenset[int]]) -> bool:
    return all(x & y for x in f for y in g)


def verify_cross_intersecting(
    n: int, k: int, a: int, G: IntervalFamily, F: IntervalFamily | None = None
) -> bool:
    """Check ``|G| <= a`` for ``G`` cross-intersecting ``k`` intervals of length ``k``.

    With ``F`` omitted, every family of ``k`` distinct length-``k`` intervals
    that cross-intersects ``G`` is generated and the claim checked against each
    (vacuously true when there is none).
    """
    if not 1 <= k < n:
        raise StructureError(f"need 1 <= k < n, got k={k}, n={n}")
    if not 1 <= a <= n - k:
        raise StructureError(f"need 1 <= a <= n - k, got a={a}")
    if G.modulus != n or any(length != a for _, length in G.intervals):
        raise StructureError(f"G must consist of length-{a} intervals in Z/{n}Z")
    g_sets = G.sets()
    size_ok = len(G.distinct()) <= a
    if F is not None:
        if F.modulus != n or any(length != k for _, length in F.intervals):
            raise StructureError(f"F must consist of length-{k} intervals in Z/{n}Z")
        if len(F.distinct()) != k:
            raise StructureError(f"F must contain exactly {k} distinct intervals")
        if not _cross_intersecting(F.sets(), g_sets):
            raise StructureError("F and G are not cross-intersecting")
        return size_ok
    for starts in itertools.combinations(range(n), k):
        f = IntervalFamily(n, tuple((b, k) for b in starts))
        if _cross_intersecting(f.sets(), g_sets) and not size_ok:
            return False
    return True


def verify_measure_intersection(
    ground: Iterable,
    subsets: Sequence[Iterable],
    t: RationalLike,
    weights: Mapping | None = None,
) -> bool:
    """Check ``mu(V_1 & ... & V_k) >= k t - (k - 1) mu(V)`` on explicit sets.

    ``weights`` defines the finite measure point by point (counting measure
    when omitted).  Every ``V_i`` must lie inside ``ground`` with measure at
    least ``t``.
    """
    ground = frozenset(ground)
    t = as_fraction(t)
    if weights is None:
        mu = lambda s: Fraction(len(s))  # noqa: E731
    else:
        w = {x: as_fraction(v) for x, v in weights.items()}
        if any(w.get(x, 0) < 0 for x in ground):
            raise ValueError("measure weights must be non-negative")
        mu = lambda s: sum((w.get(x, Fraction(0)) for x in s), Fraction(0))  # noqa: E731
    sets = [frozenset(s) for s in subsets]
    if not sets:
        raise ValueError("need at least one subset")
    for s in sets:
        if not s <= ground:
            raise StructureError("subset not contained in the ground set")
        if mu(s) < t:
            raise ValueError("every subset must have measure at least t")
    k = len(sets)
    return mu(frozenset.intersection(*sets)) >= k * t - (k - 1) * mu(ground)


def scan_interval_union(n_max: int = 9, max_intervals: int = 3) -> list[tuple]:
    """Exhaustive search for counterexamples to the interval-union bound."""
    bad = []
    for n in range(2, n_max + 1):
        for a in range(1, n - 1):
            for k in range(1, max_intervals + 1):
                for starts in itertools.combinations(range(n), k):
                    fam = IntervalFamily(n, tuple((b, a) for b in starts))
                    if len(fam.union()) >= n:
                        continue
                    if not verify_interval_union(n, a, fam):
                        bad.append((n, a, starts))
    return bad


def scan_cross_intersecting(n_max: int = 9) -> list[tuple]:
    """Exhaustive search over all ``F`` and the largest compatible ``G``.

    For each ``F`` the set of length-``a`` intervals meeting every member of
    ``F`` is the largest cross-intersecting ``G``; every other ``G`` is a
    subfamily of it, so checking it covers all of them.
    """
    bad = []
    for n in range(2, n_max + 1):
        for k in range(1, n):
            for a in range(1, n - k + 1):
                for starts in itertools.combinations(range(n), k):
                    f = IntervalFamily(n, tuple((b, k) for b in starts))
                    f_sets = f.sets()
                    g = IntervalFamily(
                        n,
                        tuple(
                            (c, a)
                            for c in range(n)
                            if all(f.interval_set(c, a) & s for s in f_sets)
                        ),
                    )
                    if not verify_cross_intersecting(n, k, a, g, f):
                        bad.append((n, k, a, starts))
    return bad


def scan_measure_intersection(trials: int = 10_000, max_ground: int = 16, seed: int = 0) -> list:
    """Randomized search for counterexamples to the intersection measure bound."""
    rng = random.Random(seed)
    bad = []
    for trial in range(trials):
        size = rng.randint(1, max_ground)
        ground = range(size)
        k = rng.randint(1, 5)
        subsets = [{x for x in ground if rng.random() < 0.7} for _ in range(k)]
        weights = None
        if trial % 2:
            weights = {x: Fraction(rng.randint(0, 9), rng.randint(1, 9)) for x in ground}
            mu = lambda s: sum((weights[x] for x in s), Fraction(0))  # noqa: E731
        else:
            mu = lambda s: Fraction(len(s))  # noqa: E731
        t = min(mu(s) for s in subsets)
        if not verify_measure_intersection(ground, subsets, t, weights):
            bad.append((trial, size, subsets, t))
    return bad
