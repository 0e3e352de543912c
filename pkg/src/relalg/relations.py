"""Finite binary relations over a sorted ground space.

A :class:`GroundSpace` is the disjoint union of a set of plain points (sort
``X``) and a set of formal triples ``j(a,b,c)`` over those points (sort
``Y``).  A :class:`Relation` is an immutable set of ordered pairs of points
of one space.  Composition is diagrammatic: ``compose(K, L)`` contains
``(a, c)`` whenever ``(a, b)`` is in ``K`` and ``(b, c)`` is in ``L``.
"""

from __future__ import annotations

import itertools
import json
import re
from typing import Hashable, Iterable, NamedTuple

X = "X"
Y = "Y"
ANY = "Any"
SORTS = (X, Y, ANY)

_TRIPLE_ID = re.compile(r"^j\(([^,()]+),([^,()]+),([^,()]+)\)$")


class SpaceMismatch(ValueError):
    pass


class NotAnEquivalence(ValueError):
    pass


def triple_id(a, b, c) -> str:
    return f"j({a},{b},{c})"


def parse_triple_id(text: str) -> tuple[str, str, str]:
    m = _TRIPLE_ID.match(text) if isinstance(text, str) else None
    if m is None:
        raise ValueError(f"not a triple point id of the form j(a,b,c): {text!r}")
    return m.group(1), m.group(2), m.group(3)


class GroundSpace:
    """Finite universe X ⊎ Y.

    ``y_triples`` lists the formal triples that make up Y; ``None`` means
    all of X³ in lexicographic order of X.
    """

    def __init__(self, x_points: Iterable[Hashable], y_triples=None):
        self.x_points = tuple(x_points)
        if len(set(self.x_points)) != len(self.x_points):
            raise ValueError("duplicate X point identifiers")
        if y_triples is None:
            y_triples = itertools.product(self.x_points, repeat=3)
        self.y_triples = tuple(tuple(t) for t in y_triples)
        xs = set(self.x_points)
        for t in self.y_triples:
            if len(t) != 3 or not set(t) <= xs:
                raise ValueError(f"Y triple {t!r} is not a triple over X")
        self.y_points = tuple(triple_id(*t) for t in self.y_triples)
        if len(set(self.y_points)) != len(self.y_points):
            raise ValueError("duplicate Y triples")
        if xs & set(self.y_points):
            raise ValueError("X and Y point identifiers overlap")
        self.points = self.x_points + self.y_points
        self._index = {p: i for i, p in enumerate(self.points)}
        self._triple = dict(zip(self.y_points, self.y_triples))
        self.x_set = frozenset(self.x_points)
        self.y_set = frozenset(self.y_points)

    @classmethod
    def flat(cls, points: Iterable[Hashable]) -> "GroundSpace":
        """A space with no Y points, for plain state sets."""
        return cls(points, ())

    @property
    def auto_y(self) -> bool:
        return self.y_triples == tuple(itertools.product(self.x_points, repeat=3))

    def __len__(self):
        return len(self.points)

    def __contains__(self, point):
        return point in self._index

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, GroundSpace):
            return NotImplemented
        return self.x_points == other.x_points and self.y_triples == other.y_triples

    def __hash__(self):
        return hash((self.x_points, self.y_triples))

    def __repr__(self):
        return f"GroundSpace(|X|={len(self.x_points)}, |Y|={len(self.y_points)})"

    def index(self, point) -> int:
        return self._index[point]

    def sort_of(self, point) -> str:
        if point in self.x_set:
            return X
        if point in self.y_set:
            return Y
        raise KeyError(point)

    def triple(self, point) -> tuple:
        return self._triple[point]

    def j(self, a, b, c) -> str:
        """The Y point ``j(a, b, c)``; errors if any argument is not in X."""
        for p in (a, b, c):
            if p not in self.x_set:
                raise ValueError(f"{p!r} is not an X point")
        pid = triple_id(a, b, c)
        if pid not in self._triple:
            raise ValueError(f"{pid} is not a point of this space")
        return pid

    def sort_key(self, pair):
        return self._index[pair[0]], self._index[pair[1]]

    def sorted_points(self, points: Iterable) -> list:
        return sorted(points, key=self._index.__getitem__)

    def sort_of_set(self, points) -> str:
        sorts = {self.sort_of(p) for p in points}
        return sorts.pop() if len(sorts) == 1 else ANY

    def check_points(self, points) -> None:
        unknown = [p for p in points if p not in self._index]
        if unknown:
            raise ValueError(f"points not in the ground space: {unknown[:5]!r}")


def _join(s: str, t: str) -> str:
    return s if s == t else ANY


class Relation:
    """Immutable set of pairs over a ground space.

    Equality and hashing look at the space and the pair set only; the
    optional ``signature`` (domain sort, codomain sort) is a checked
    annotation.
    """

    def __init__(self, space: GroundSpace, pairs: Iterable = (), signature=None):
        self.space = space
        self.pairs = frozenset((a, b) for a, b in pairs)
        index = space._index
        for a, b in self.pairs:
            if a not in index or b not in index:
                raise ValueError(f"pair {(a, b)!r} references a point outside the space")
        if signature is not None:
            signature = tuple(signature)
            if len(signature) != 2 or not all(s in SORTS for s in signature):
                raise ValueError(f"bad signature {signature!r}")
            dom, cod = signature
            for a, b in self.pairs:
                if (dom != ANY and space.sort_of(a) != dom) or (
                    cod != ANY and space.sort_of(b) != cod
                ):
                    raise ValueError(f"pair {(a, b)!r} violates signature {signature}")
        self.signature = signature
        self._succ = None

    @classmethod
    def _trusted(cls, space: GroundSpace, pairs: frozenset, signature=None) -> "Relation":
        # Skips validation; only for pairs derived from validated relations.
        r = cls.__new__(cls)
        r.space, r.pairs, r.signature, r._succ = space, pairs, signature, None
        return r

    @classmethod
    def diagonal(cls, space: GroundSpace, points=None) -> "Relation":
        if points is None:
            return cls(space, ((p, p) for p in space.points), (ANY, ANY))
        points = list(points)
        space.check_points(points)
        s = space.sort_of_set(points) if points else ANY
        return cls(space, ((p, p) for p in points), (s, s))

    @classmethod
    def empty(cls, space: GroundSpace) -> "Relation":
        return cls(space, ())

    @classmethod
    def full(cls, space: GroundSpace, points=None) -> "Relation":
        points = space.points if points is None else list(points)
        return cls(space, itertools.product(points, repeat=2))

    def successors(self) -> dict:
        if self._succ is None:
            succ: dict = {}
            for a, b in self.pairs:
                succ.setdefault(a, set()).add(b)
            self._succ = succ
        return self._succ

    def field(self) -> frozenset:
        return frozenset(p for pair in self.pairs for p in pair)

    def image(self, points) -> set:
        succ = self.successors()
        out = set()
        for p in points:
            out |= succ.get(p, set())
        return out

    def sorted_pairs(self) -> list:
        return sorted(self.pairs, key=self.space.sort_key)

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return self.space == other.space and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.sorted_pairs())

    def __contains__(self, pair):
        return tuple(pair) in self.pairs

    def __le__(self, other: "Relation") -> bool:
        _same_space(self, other)
        return self.pairs <= other.pairs

    def __or__(self, other: "Relation") -> "Relation":
        return union(self, other)

    def __repr__(self):
        shown = ", ".join(f"({a},{b})" for a, b in self.sorted_pairs()[:8])
        more = ", ..." if len(self.pairs) > 8 else ""
        return f"Relation({len(self.pairs)} pairs: {{{shown}{more}}})"


class Partition:
    """Blocks covering a carrier; blocks non-empty and pairwise disjoint."""

    def __init__(self, blocks: Iterable[Iterable], carrier=None):
        self.blocks = frozenset(frozenset(b) for b in blocks)
        covered = set()
        for b in self.blocks:
            if not b:
                raise ValueError("empty block")
            if covered & b:
                raise ValueError("blocks overlap")
            covered |= b
        self.carrier = frozenset(covered if carrier is None else carrier)
        if covered != self.carrier:
            raise ValueError("blocks do not cover the carrier exactly")
        self._block_of = {p: b for b in self.blocks for p in b}

    @classmethod
    def discrete(cls, carrier) -> "Partition":
        return cls(([p] for p in carrier), carrier)

    def block_of(self, point) -> frozenset:
        return self._block_of[point]

    def saturate(self, points) -> frozenset:
        """Union of the blocks that meet ``points``."""
        out = set()
        for p in points:
            if p not in self._block_of:
                raise ValueError(f"{p!r} is not in the partition's carrier")
            out |= self._block_of[p]
        return frozenset(out)

    def refines(self, other: "Partition") -> bool:
        """True if every block of self lies inside a block of ``other``."""
        return self.carrier == other.carrier and all(
            b <= other.block_of(next(iter(b))) for b in self.blocks
        )

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.carrier == other.carrier and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __repr__(self):
        return "Partition(%s)" % sorted(sorted(map(str, b)) for b in self.blocks)


def _same_space(a: Relation, b: Relation) -> None:
    if a.space != b.space:
        raise SpaceMismatch("relations live on different ground spaces")


def union(a: Relation, b: Relation) -> Relation:
    _same_space(a, b)
    sig = None
    if a.signature is not None and b.signature is not None:
        sig = (_join(a.signature[0], b.signature[0]), _join(a.signature[1], b.signature[1]))
    return Relation._trusted(a.space, a.pairs | b.pairs, sig)


def union_all(space: GroundSpace, relations: Iterable[Relation]) -> Relation:
    pairs = set()
    for r in relations:
        if r.space != space:
            raise SpaceMismatch("relations live on different ground spaces")
        pairs |= r.pairs
    return Relation._trusted(space, frozenset(pairs))


def compose(first: Relation, then: Relation) -> Relation:
    """Pairs (a, c) with (a, b) in ``first`` and (b, c) in ``then``."""
    _same_space(first, then)
    succ = then.successors()
    empty = ()
    out = frozenset((a, c) for a, b in first.pairs for c in succ.get(b, empty))
    sig = None
    if first.signature is not None and then.signature is not None:
        sig = (first.signature[0], then.signature[1])
    return Relation._trusted(first.space, out, sig)


def converse(r: Relation) -> Relation:
    sig = None if r.signature is None else (r.signature[1], r.signature[0])
    return Relation._trusted(r.space, frozenset((b, a) for a, b in r.pairs), sig)


def restrict(r: Relation, z) -> Relation:
    """``r ∩ (z × z)``."""
    z = frozenset(z)
    r.space.check_points(z)
    s = r.space.sort_of_set(z) if z else ANY
    return Relation(r.space, ((a, b) for a, b in r.pairs if a in z and b in z), (s, s))


def power(r: Relation, n: int) -> Relation:
    """``r`` composed with itself n times, generator on the left."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("power is defined for n >= 1")
    out = r
    for _ in range(n - 1):
        out = compose(r, out)
    return out


class Closure(NamedTuple):
    relation: Relation
    stages: int


def transitive_closure(r: Relation) -> Closure:
    """Least transitive superset of ``r`` and the stage where it settles.

    Powers are accumulated into a running union and the loop stops at the
    first n with ``r ∪ ... ∪ r^(n+1) = r ∪ ... ∪ r^(n)``.  For reflexive
    ``r`` the powers already increase, so this is the first n with
    ``r^(n) = r^(n+1)``.
    """
    acc = set(r.pairs)
    current = r
    n = 1
    while True:
        current = compose(r, current)
        if current.pairs <= acc:
            return Closure(Relation._trusted(r.space, frozenset(acc)), n)
        acc |= current.pairs
        n += 1


class EquivalenceReport(NamedTuple):
    ok: bool
    reason: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def is_equivalence(r: Relation, carrier=None) -> EquivalenceReport:
    """Check that ``r`` is an equivalence relation on ``carrier``.

    ``carrier`` defaults to the whole space.  Pairs outside the carrier
    count as a violation.
    """
    carrier = frozenset(r.space.points if carrier is None else carrier)
    r.space.check_points(carrier)
    for a, b in r.sorted_pairs():
        if a not in carrier or b not in carrier:
            return EquivalenceReport(False, "pair outside carrier", (a, b))
    for p in r.space.sorted_points(carrier):
        if (p, p) not in r.pairs:
            return EquivalenceReport(False, "not reflexive", (p, p))
    for a, b in r.sorted_pairs():
        if (b, a) not in r.pairs:
            return EquivalenceReport(False, "not symmetric", (a, b))
    # Reflexive and symmetric: transitive iff related points share successors.
    succ = r.successors()
    block_id: dict = {}
    ids = {p: block_id.setdefault(frozenset(s), len(block_id)) for p, s in succ.items()}
    for a, b in r.sorted_pairs():
        if ids[a] != ids[b]:
            if succ[b] - succ[a]:
                c = min(succ[b] - succ[a], key=r.space.index)
                return EquivalenceReport(False, "not transitive", (a, b, c))
            c = min(succ[a] - succ[b], key=r.space.index)
            return EquivalenceReport(False, "not transitive", (b, a, c))
    return EquivalenceReport(True)


def require_equivalence(r: Relation, carrier=None, name="relation") -> None:
    report = is_equivalence(r, carrier)
    if not report:
        raise NotAnEquivalence(f"isEquivalence({name}) failed: {report.reason} at {report.witness}")


def saturate(points, r: Relation, carrier=None) -> frozenset:
    """Union of the ``r``-classes meeting ``points``.

    ``r`` must be an equivalence relation on ``carrier`` (default: the
    points ``r`` mentions).
    """
    carrier = r.field() if carrier is None else frozenset(carrier)
    require_equivalence(r, carrier)
    points = frozenset(points)
    if not points <= carrier:
        raise ValueError("points to saturate lie outside the relation's carrier")
    return frozenset(r.image(points))


def natural_key(value):
    """Sort key for mixed ids: ints before strings, each in natural order."""
    return type(value).__name__, value


def partition_to_relation(p: Partition, space: GroundSpace | None = None) -> Relation:
    if space is None:
        space = GroundSpace.flat(sorted(p.carrier, key=natural_key))
    pairs = ((a, b) for block in p.blocks for a in block for b in block)
    return Relation(space, pairs)


def relation_to_partition(r: Relation, carrier=None) -> Partition:
    carrier = frozenset(r.space.points if carrier is None else carrier)
    require_equivalence(r, carrier)
    succ = r.successors()
    blocks = {frozenset(succ[p]) for p in carrier}
    return Partition(blocks, carrier)


# -- JSON ------------------------------------------------------------------


def space_to_json(space: GroundSpace) -> dict:
    return {
        "X": list(space.x_points),
        "Y": "auto" if space.auto_y else [list(t) for t in space.y_triples],
    }


def space_from_json(doc: dict) -> GroundSpace:
    if not isinstance(doc, dict) or "X" not in doc:
        raise ValueError("space must be an object with an 'X' list")
    xs = doc["X"]
    if not isinstance(xs, list) or not all(isinstance(x, str) for x in xs):
        raise ValueError("space.X must be a list of string ids")
    ys = doc.get("Y", "auto")
    if ys == "auto":
        return GroundSpace(xs)
    if not isinstance(ys, list):
        raise ValueError("space.Y must be 'auto' or a list of triples")
    triples = []
    for t in ys:
        if isinstance(t, str):
            t = parse_triple_id(t)
        triples.append(tuple(t))
    return GroundSpace(xs, triples)


def pair_from_json(space: GroundSpace, pair) -> tuple:
    if not isinstance(pair, list) or len(pair) != 2:
        raise ValueError(f"pair must be a two-element list: {pair!r}")
    for p in pair:
        if p not in space:
            parse_triple_id(p)
            raise ValueError(f"unknown point id {p!r}")
    return tuple(pair)


def relation_to_json(r: Relation) -> dict:
    doc = {"space": space_to_json(r.space), "pairs": [list(p) for p in r.sorted_pairs()]}
    if r.signature is not None:
        doc["signature"] = list(r.signature)
    return doc


def relation_from_json(doc: dict, space: GroundSpace | None = None) -> Relation:
    if space is None:
        space = space_from_json(doc["space"])
    pairs = [pair_from_json(space, p) for p in doc.get("pairs", [])]
    return Relation(space, pairs, doc.get("signature"))


def partition_to_json(p: Partition) -> dict:
    key = natural_key
    return {
        "carrier": sorted(p.carrier, key=key),
        "blocks": sorted((sorted(b, key=key) for b in p.blocks), key=lambda b: key(b[0])),
    }


def partition_from_json(doc: dict) -> Partition:
    return Partition(doc["blocks"], doc["carrier"])


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
