"""Witness sets and the two equivalence relations I, J built from them.

Given an equivalence relation ``E`` on the X points of a ground space and a
transposition-invariant witness set ``F ⊆ X³`` projecting onto ``E``:

    G = {(a, j(a,b,c)) : (a,b,c) ∈ F}
    H = {(j(a,b,c), j(b,a,c)) : a, b, c ∈ X}
    I = D ∪ G ∪ G' ∪ G'G
    J = D ∪ H

where ``G'`` is the converse of ``G`` and ``D`` the diagonal of the whole
space.  The transitive closure of ``I ∪ J`` restricted to X is ``E``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from .relations import (
    X,
    Y,
    GroundSpace,
    NotAnEquivalence,
    Relation,
    compose,
    converse,
    is_equivalence,
    pair_from_json,
    require_equivalence,
    space_from_json,
    space_to_json,
    union_all,
)


class WitnessError(ValueError):
    pass


def transpose_tuple(t: tuple, i: int, j: int) -> tuple:
    """Swap entries ``i`` and ``j`` (1-based, ``i < j``) of ``t``."""
    if not 1 <= i < j <= len(t):
        raise IndexError(f"need 1 <= i < j <= {len(t)}, got i={i}, j={j}")
    t = list(t)
    t[i - 1], t[j - 1] = t[j - 1], t[i - 1]
    return tuple(t)


@dataclass(frozen=True)
class WitnessSet:
    space: GroundSpace
    triples: frozenset

    def __post_init__(self):
        xs = self.space.x_set
        for t in self.triples:
            if len(t) != 3 or not set(t) <= xs:
                raise WitnessError(f"witness {t!r} is not a triple over X")

    def is_invariant(self) -> bool:
        return all(transpose_tuple(t, 1, 2) in self.triples for t in self.triples)

    def __len__(self):
        return len(self.triples)

    def __iter__(self):
        idx = self.space.index
        return iter(sorted(self.triples, key=lambda t: tuple(map(idx, t))))


def equivalence_from_blocks(space: GroundSpace, blocks: Iterable[Iterable]) -> Relation:
    """The equivalence relation on X whose classes are ``blocks``."""
    pairs = set()
    for block in blocks:
        block = list(block)
        pairs.update(itertools.product(block, repeat=2))
    return Relation(space, pairs, (X, X))


def check_target(e: Relation) -> None:
    """E must be an equivalence relation on the X points."""
    require_equivalence(e, e.space.x_points, "E")


def make_witness(e: Relation) -> WitnessSet:
    """Default witness ``E × X``: every third coordinate is admitted."""
    check_target(e)
    xs = e.space.x_points
    return WitnessSet(e.space, frozenset((a, b, c) for a, b in e.pairs for c in xs))


def symmetrize_witness(space: GroundSpace, triples: Iterable) -> WitnessSet:
    raw = frozenset(tuple(t) for t in triples)
    return WitnessSet(space, raw | {transpose_tuple(t, 1, 2) for t in raw})


def project_witness(f: WitnessSet) -> Relation:
    return Relation(f.space, ((a, b) for a, b, _ in f.triples), (X, X))


def j_map(space: GroundSpace, a, b, c) -> str:
    return space.j(a, b, c)


def build_g(f: WitnessSet) -> Relation:
    j = f.space.j
    return Relation(f.space, ((a, j(a, b, c)) for a, b, c in f.triples), (X, Y))


def build_h(space: GroundSpace) -> Relation:
    j = space.j
    return Relation(
        space,
        ((j(a, b, c), j(b, a, c)) for a, b, c in itertools.product(space.x_points, repeat=3)),
        (Y, Y),
    )


@dataclass(frozen=True, eq=False)
class ConstructionBundle:
    space: GroundSpace
    E: Relation
    F: WitnessSet
    G: Relation
    Gbar: Relation
    H: Relation
    I: Relation
    J: Relation

    @cached_property
    def D(self) -> Relation:
        return Relation.diagonal(self.space)

    @cached_property
    def P(self) -> Relation:
        return Relation.diagonal(self.space, self.space.x_points)

    @cached_property
    def Q(self) -> Relation:
        return Relation.diagonal(self.space, self.space.y_points)

    @cached_property
    def IJ(self) -> Relation:
        return self.I | self.J

    def atoms(self) -> dict:
        """Concrete value of each symbolic atom name."""
        return {
            "D": self.D,
            "P": self.P,
            "Q": self.Q,
            "E": self.E,
            "G": self.G,
            "G'": self.Gbar,
            "H": self.H,
        }

    def relations(self) -> dict:
        return {"E": self.E, "G": self.G, "G'": self.Gbar, "H": self.H, "I": self.I, "J": self.J}

    def __eq__(self, other):
        if not isinstance(other, ConstructionBundle):
            return NotImplemented
        return (
            self.space == other.space
            and self.F.triples == other.F.triples
            and self.relations() == other.relations()
        )

    __hash__ = None


def assemble(e: Relation, f: WitnessSet) -> ConstructionBundle:
    """Build every relation from ``e`` and ``f`` without validating them."""
    space = e.space
    g = build_g(f)
    gbar = converse(g)
    d = Relation.diagonal(space)
    h = build_h(space)
    i = union_all(space, [d, g, gbar, compose(gbar, g)])
    j = union_all(space, [d, h])
    return ConstructionBundle(space, e, f, g, gbar, h, i, j)


def build_ij(e: Relation, f: WitnessSet | None = None) -> ConstructionBundle:
    """Validated construction; ``f`` defaults to :func:`make_witness`."""
    check_target(e)
    if f is None:
        f = make_witness(e)
    if f.space != e.space:
        raise WitnessError("witness and target live on different spaces")
    if not f.is_invariant():
        raise WitnessError("witness set is not invariant under swapping its first two entries")
    if project_witness(f) != e:
        raise WitnessError("witness set does not project onto E")
    return assemble(e, f)


class IdentityCheck(NamedTuple):
    name: str
    ok: bool
    counterexample: tuple = ()

    def __bool__(self):
        return self.ok


def _diff(got: Relation, want: Relation) -> tuple:
    extra = got.pairs - want.pairs
    missing = want.pairs - got.pairs
    key = got.space.sort_key
    if extra:
        return ("unexpected", min(extra, key=key))
    if missing:
        return ("missing", min(missing, key=key))
    return ()


def check_identities(b: ConstructionBundle) -> list[IdentityCheck]:
    """Check the six composition identities of the construction exactly."""
    sp = b.space
    j = sp.j
    triples = b.F.triples
    by_first: dict = {}
    for t in triples:
        by_first.setdefault(t[0], []).append(t)
    gbar_g = Relation(
        sp,
        (
            (j(*s), j(*t))
            for rows in by_first.values()
            for s in rows
            for t in rows
        ),
    )
    g_h = Relation(sp, ((a, j(bb, a, c)) for a, bb, c in triples))
    gh = compose(b.G, b.H)
    cases = [
        ("G G' = P", compose(b.G, b.Gbar), b.P),
        ("G' G = {(j(a,b,c), j(a,d,e))}", compose(b.Gbar, b.G), gbar_g),
        ("H = converse(H)", converse(b.H), b.H),
        ("H H = Q", compose(b.H, b.H), b.Q),
        ("G H = {(a, j(b,a,c))}", gh, g_h),
        ("G H G' = E", compose(gh, b.Gbar), b.E),
    ]
    return [IdentityCheck(name, got == want, _diff(got, want)) for name, got, want in cases]


def check_bundle(b: ConstructionBundle) -> None:
    """Raise ``ValueError`` naming the first violated bundle invariant."""
    sp = b.space
    if b.F.space != sp or any(r.space != sp for r in b.relations().values()):
        raise ValueError("bundle relations live on different spaces")
    report = is_equivalence(b.E, sp.x_points)
    if not report:
        raise NotAnEquivalence(f"isEquivalence(E) failed: {report.reason} at {report.witness}")
    for name, r in (("I", b.I), ("J", b.J)):
        report = is_equivalence(r)
        if not report:
            raise NotAnEquivalence(
                f"isEquivalence({name}) failed: {report.reason} at {report.witness}"
            )
    if not all(sp.sort_of(a) == X and sp.sort_of(c) == Y for a, c in b.G.pairs):
        raise ValueError("invariant G ⊆ X×Y violated")
    if not all(sp.sort_of(a) == Y and sp.sort_of(c) == Y for a, c in b.H.pairs):
        raise ValueError("invariant H ⊆ Y×Y violated")
    rebuilt = assemble(b.E, b.F)
    for name in ("G", "G'", "H", "I", "J"):
        if rebuilt.relations()[name] != b.relations()[name]:
            raise ValueError(f"invariant violated: {name} does not match its definition from E and F")


# -- JSON ------------------------------------------------------------------

_RELATION_NAMES = ("E", "G", "G'", "H", "I", "J")


def bundle_to_json(b: ConstructionBundle) -> dict:
    rels = b.relations()
    doc = {"space": space_to_json(b.space)}
    doc["relations"] = {name: [list(p) for p in rels[name].sorted_pairs()] for name in _RELATION_NAMES}
    doc["relations"]["F"] = [list(t) for t in b.F]
    return doc


def bundle_from_json(doc: dict) -> ConstructionBundle:
    """Rebuild a bundle and check every invariant; raises ``ValueError``."""
    if not isinstance(doc, dict) or "space" not in doc or "relations" not in doc:
        raise ValueError("bundle must have 'space' and 'relations'")
    space = space_from_json(doc["space"])
    rels = doc["relations"]
    missing = [n for n in _RELATION_NAMES + ("F",) if n not in rels]
    if missing:
        raise ValueError(f"bundle is missing relations {missing}")
    loaded = {n: Relation(space, [pair_from_json(space, p) for p in rels[n]]) for n in _RELATION_NAMES}
    for t in rels["F"]:
        if not isinstance(t, list) or len(t) != 3:
            raise ValueError(f"witness must be a three-element list: {t!r}")
    f = WitnessSet(space, frozenset(tuple(t) for t in rels["F"]))
    b = ConstructionBundle(
        space, loaded["E"], f, loaded["G"], loaded["G'"], loaded["H"], loaded["I"], loaded["J"]
    )
    check_bundle(b)
    return b
