"""Knowledge and common knowledge on finite partition models.

An agent knows event ``A`` at the states ``A \\ [Ω \\ A]``, where ``[.]`` is
saturation under the agent's information partition.  Common knowledge uses
the meet of all agents' partitions, which is induced by the transitive
closure of the union of their equivalence relations.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Hashable, Iterable

from .construction import build_ij
from .relations import (
    GroundSpace,
    Partition,
    Relation,
    natural_key,
    partition_to_relation,
    relation_to_partition,
    require_equivalence,
    transitive_closure,
    union_all,
)


@dataclass(frozen=True)
class EpistemicModel:
    states: frozenset
    partitions: dict  # agent -> Partition, in agent order

    def __post_init__(self):
        if not self.partitions:
            raise ValueError("a model needs at least one agent")
        for agent, p in self.partitions.items():
            if p.carrier != self.states:
                raise ValueError(f"partition of agent {agent!r} does not cover the states exactly")

    @classmethod
    def from_blocks(cls, states: Iterable[Hashable], partitions: dict) -> "EpistemicModel":
        states = frozenset(states)
        return cls(states, {a: Partition(blocks, states) for a, blocks in partitions.items()})

    @property
    def agents(self) -> list:
        return list(self.partitions)

    def event(self, states: Iterable) -> frozenset:
        ev = frozenset(states)
        if not ev <= self.states:
            raise ValueError(f"event mentions unknown states: {sorted(ev - self.states, key=natural_key)}")
        return ev


def knows(a: Iterable, p: Partition) -> frozenset:
    a = frozenset(a)
    return a - p.saturate(p.carrier - a)


def everyone_knows(a: Iterable, m: EpistemicModel) -> frozenset:
    a = m.event(a)
    out = m.states
    for p in m.partitions.values():
        out = out & knows(a, p)
    return out


def meet_partitions(m: EpistemicModel) -> Partition:
    space = GroundSpace.flat(sorted(m.states, key=natural_key))
    joined = union_all(space, (partition_to_relation(p, space) for p in m.partitions.values()))
    return relation_to_partition(transitive_closure(joined).relation, m.states)


def common_knowledge_meet(a: Iterable, m: EpistemicModel) -> frozenset:
    return knows(m.event(a), meet_partitions(m))


def common_knowledge_iterated(a: Iterable, m: EpistemicModel) -> frozenset:
    """Intersection of the iterates EK(a), EK(EK(a)), ... .

    The iterates decrease, so the first repeat is the intersection; that
    happens within ``|states| + 1`` steps.
    """
    cur = everyone_knows(a, m)
    for _ in range(len(m.states) + 1):
        nxt = everyone_knows(cur, m)
        if nxt == cur:
            return cur
        cur = nxt
    raise AssertionError("mutual-knowledge iteration failed to stabilize")


def pathology_model(n: int, chosen: Iterable[int]) -> EpistemicModel:
    """States 0..2n-1; agent 1 pairs ω with ω+n for ω in ``chosen``, agent 2
    lumps the top half together.  The meet block containing the top half is
    ``chosen ∪ {n..2n-1}``."""
    chosen = set(chosen)
    if not chosen <= set(range(n)):
        raise ValueError("chosen states must lie in 0..n-1")
    states = range(2 * n)
    p1 = [[w, w + n] for w in sorted(chosen)]
    p1 += [[w] for w in states if w not in chosen and w - n not in chosen]
    p2 = [[w] for w in range(n)] + [list(range(n, 2 * n))]
    return EpistemicModel.from_blocks(states, {"1": p1, "2": p2})


def load_model(doc: dict) -> EpistemicModel:
    if not isinstance(doc, dict) or not {"states", "partitions"} <= doc.keys():
        raise ValueError("model must have 'states' and 'partitions'")
    agents = doc.get("agents", list(doc["partitions"]))
    if set(agents) != set(doc["partitions"]):
        raise ValueError("'agents' and the keys of 'partitions' disagree")
    return EpistemicModel.from_blocks(doc["states"], {a: doc["partitions"][a] for a in agents})


def model_to_json(m: EpistemicModel) -> dict:
    key = natural_key
    return {
        "states": sorted(m.states, key=key),
        "agents": m.agents,
        "partitions": {
            a: sorted((sorted(b, key=key) for b in p.blocks), key=lambda b: key(b[0]))
            for a, p in m.partitions.items()
        },
    }


def read_model(path) -> EpistemicModel:
    with open(path) as fh:
        return load_model(json.load(fh))


# -- saturation property of the closure construction -------------------------


@dataclass
class SaturationReport:
    carrier: list
    omega0: list
    s: list
    checked: list  # (A, saturation ∩ Ω₀) for every tested A
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "carrier": self.carrier,
            "omega0": self.omega0,
            "S": self.s,
            "checked": len(self.checked),
            "failures": [[a, got] for a, got in self.failures],
            "ok": self.ok,
        }


def saturation_demo(carrier, omega0, s, seed: int = 0, samples: int = 10) -> SaturationReport:
    """Check that every non-empty ``A ⊆ S`` saturates to exactly ``S`` inside
    ``omega0`` under the closure of ``I ∪ J``.

    ``E`` relates two carrier points iff both lie in ``S`` or they are equal,
    so the points outside ``omega0`` are singleton classes.  ``I`` and ``J``
    are built on the carrier with the formal triples as extra room.  Tested
    sets: every singleton of ``S`` and ``samples`` random non-empty subsets.
    """
    carrier = [str(c) for c in carrier]
    omega0 = [str(c) for c in omega0]
    s = [str(c) for c in s]
    if len(set(carrier)) != len(carrier):
        raise ValueError("carrier has duplicate points")
    if not set(omega0) < set(carrier):
        raise ValueError("omega0 must be a proper subset of the carrier")
    if not s or not set(s) <= set(omega0):
        raise ValueError("S must be a non-empty subset of omega0")
    space = GroundSpace(carrier)
    in_s = set(s)
    e = Relation(
        space,
        ((a, b) for a in carrier for b in carrier if a == b or (a in in_s and b in in_s)),
    )
    closure = transitive_closure(build_ij(e).IJ).relation
    require_equivalence(closure, name="t(I ∪ J)")
    rng = random.Random(seed)
    tests = [[x] for x in s]
    for _ in range(samples):
        k = rng.randint(1, len(s))
        tests.append(sorted(rng.sample(s, k), key=space.index))
    target = set(s)
    checked, failures = [], []
    for a in tests:
        got = closure.image(a) & set(omega0)
        got = space.sorted_points(got)
        checked.append((a, got))
        if set(got) != target:
            failures.append((a, got))
    return SaturationReport(carrier, omega0, s, checked, failures)
