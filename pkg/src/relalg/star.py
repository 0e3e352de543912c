"""The star relation: reflexive, symmetric, and expensive to cover.

``R = D ∪ ({hub} × C) ∪ (C × {hub})`` on an n-point carrier ``C``.  Any
equivalence relation inside ``R`` holds at most one off-diagonal hub pair,
since two of them would force by transitivity a pair that avoids the hub.
So ``R`` needs n-1 equivalence relations to cover it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .relations import GroundSpace, Relation, is_equivalence, union_all

MAX_N = 12
MAX_EXHAUSTIVE_N = 5


@dataclass(frozen=True)
class StarInstance:
    n: int
    space: GroundSpace = field(init=False, repr=False, compare=False)
    hub: str = field(init=False)

    def __post_init__(self):
        if not 2 <= self.n <= MAX_N:
            raise ValueError(f"star size must be within 2..{MAX_N}, got {self.n}")
        space = GroundSpace.flat(f"s{i}" for i in range(self.n))
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "hub", space.points[0])

    @property
    def spokes(self) -> tuple:
        return self.space.points[1:]

    @property
    def D(self) -> Relation:
        return Relation.diagonal(self.space)

    @property
    def R(self) -> Relation:
        h = self.hub
        pairs = {(p, p) for p in self.space.points}
        pairs |= {(h, b) for b in self.spokes} | {(b, h) for b in self.spokes}
        return Relation(self.space, pairs)

    def spoke_relation(self, b) -> Relation:
        return Relation(self.space, self.D.pairs | {(self.hub, b), (b, self.hub)})


def canonical_family(s: StarInstance) -> list[Relation]:
    return [s.spoke_relation(b) for b in s.spokes]


def equiv_subrelations(s: StarInstance) -> list[Relation]:
    """Equivalence relations contained in R: D and the n-1 spoke relations."""
    return [s.D] + canonical_family(s)


def enumerate_equiv_subrelations(s: StarInstance) -> list[Relation]:
    """Brute force over all reflexive subsets of R (small n only)."""
    if s.n > MAX_EXHAUSTIVE_N:
        raise ValueError(f"exhaustive enumeration is limited to n <= {MAX_EXHAUSTIVE_N}")
    off = sorted(s.R.pairs - s.D.pairs, key=s.space.sort_key)
    found = []
    for mask in range(1 << len(off)):
        chosen = {off[i] for i in range(len(off)) if mask >> i & 1}
        r = Relation(s.space, s.D.pairs | chosen)
        if is_equivalence(r):
            found.append(r)
    return found


def min_cover_size(s: StarInstance) -> int:
    """n-1: each spoke pair lies in exactly one equivalence subrelation."""
    subs = equiv_subrelations(s)
    for b in s.spokes:
        holders = [r for r in subs if (s.hub, b) in r]
        assert len(holders) == 1, f"spoke {b} is covered by {len(holders)} subrelations"
    return len(s.spokes)


def exhaustive_min_cover(s: StarInstance) -> int:
    """Smallest k such that k equivalence subrelations (found by brute force)
    union to R."""
    subs = enumerate_equiv_subrelations(s)
    target = s.R
    for k in range(1, len(subs) + 1):
        for combo in itertools.combinations(subs, k):
            if union_all(s.space, combo) == target:
                return k
    raise AssertionError("R is not a union of its equivalence subrelations")


def covering_families(s: StarInstance) -> list[list[Relation]]:
    """Every set of equivalence relations whose union is exactly R."""
    subs = equiv_subrelations(s)
    target = s.R
    out = []
    for k in range(1, len(subs) + 1):
        for combo in itertools.combinations(subs, k):
            if union_all(s.space, combo) == target:
                out.append(list(combo))
    return out


UNIQUENESS_NOTE = (
    "the spoke family is the only cover of R by equivalence relations "
    "apart from also including the diagonal D"
)


def star_report(n: int) -> dict:
    s = StarInstance(n)
    family = canonical_family(s)
    report = {
        "n": n,
        "minCover": min_cover_size(s),
        "familySize": len(family),
        "uniquenessNote": UNIQUENESS_NOTE,
        "familyUnionIsR": union_all(s.space, family) == s.R,
    }
    if n <= MAX_EXHAUSTIVE_N:
        enumerated = enumerate_equiv_subrelations(s)
        report["exhaustiveMinCover"] = exhaustive_min_cover(s)
        report["subrelationsMatch"] = set(enumerated) == set(equiv_subrelations(s))
    return report
