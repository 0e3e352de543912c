"""Randomized verification of the construction against concrete semantics."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

from .construction import ConstructionBundle, build_ij, check_identities, equivalence_from_blocks
from .oracles import random_partition
from .relations import GroundSpace, compose, is_equivalence, restrict, transitive_closure
from .symbolic import (
    GENERATOR,
    I_EXPR,
    J_EXPR,
    audit_deletions,
    closure_trace,
    evaluate_on_model,
    expand_step,
    normalize,
    verify_square_idempotent,
)

MAX_STAGE = 6
MAX_SIZE = 8


def x_space(size: int) -> GroundSpace:
    if not 0 <= size <= MAX_SIZE:
        raise ValueError(f"|X| must be within 0..{MAX_SIZE}, got {size}")
    return GroundSpace(f"x{i + 1}" for i in range(size))


def random_instance(size: int, rng: random.Random) -> ConstructionBundle:
    space = x_space(size)
    blocks = random_partition(space.x_points, rng)
    ordered = sorted((space.sorted_points(b) for b in blocks), key=lambda b: space.index(b[0]))
    return build_ij(equivalence_from_blocks(space, ordered))


@lru_cache(maxsize=1)
def audited_stages():
    """Stage k normal forms with the deletions made while producing each."""
    trace = closure_trace()
    events = []
    first: list = []
    normalize(GENERATOR, first)
    events.append(first)
    for k in range(1, MAX_STAGE):
        ev = []
        normalize(expand_step(trace.stage(k)), ev)
        events.append(ev)
    return tuple(trace.stage(k) for k in range(1, MAX_STAGE + 1)), tuple(events)


@dataclass
class InstanceResult:
    size: int
    blocks: list
    closure_stages: int
    failures: list = field(default_factory=list)  # (check name, detail)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_bundle(b: ConstructionBundle, audit: bool = False) -> InstanceResult:
    sp = b.space
    fails = []
    for check in check_identities(b):
        if not check:
            fails.append((f"identity {check.name}", check.counterexample))
    for name, r in (("I", b.I), ("J", b.J)):
        rep = is_equivalence(r)
        if not rep:
            fails.append((f"isEquivalence({name})", (rep.reason,) + rep.witness))
        if compose(r, r) != r:
            fails.append((f"{name}∘{name} = {name}", ()))

    ij = b.IJ
    powers = [ij]
    for _ in range(MAX_STAGE - 1):
        powers.append(compose(ij, powers[-1]))
    closure = transitive_closure(ij)
    restricted = restrict(closure.relation, sp.x_points)
    if restricted.pairs != b.E.pairs:
        diff = sorted(restricted.pairs ^ b.E.pairs, key=sp.sort_key)[:1]
        fails.append(("t(I∪J)↾X = E", tuple(diff)))
    if closure.stages > 5:
        fails.append(("closure stage <= 5", (closure.stages,)))

    stages, events = audited_stages()
    for k, (expr, power_k) in enumerate(zip(stages, powers), start=1):
        if evaluate_on_model(expr, b) != power_k:
            fails.append((f"stage {k} evaluates to (I∪J)^({k})", ()))
        if audit:
            for ev in audit_deletions(events[k - 1], b, expr):
                fails.append((f"stage {k} deletion is covered", (str(ev),)))

    blocks = sorted({tuple(sp.sorted_points(b.E.image([x]))) for x in sp.x_points})
    return InstanceResult(len(sp.x_points), [list(bl) for bl in blocks], closure.stages, fails)


@dataclass
class SweepReport:
    seed: int
    results: list
    symbolic_failures: list

    @property
    def ok(self) -> bool:
        return not self.symbolic_failures and all(r.ok for r in self.results)

    def first_failure(self):
        if self.symbolic_failures:
            return self.symbolic_failures[0]
        for i, r in enumerate(self.results):
            if r.failures:
                return (f"instance {i} (|X|={r.size}, E blocks {r.blocks})",) + r.failures[0]
        return None

    def text(self) -> str:
        lines = [f"verify: {len(self.results)} instances, seed {self.seed}"]
        lines.append(f"symbolic idempotence (I, J): {'ok' if not self.symbolic_failures else 'FAIL'}")
        for i, r in enumerate(self.results):
            status = "ok" if r.ok else "FAIL " + "; ".join(f"{n} {d}" for n, d in r.failures[:3])
            lines.append(f"  [{i:3d}] |X|={r.size} blocks={len(r.blocks)} closure stage={r.closure_stages} {status}")
        lines.append("result: " + ("PASS" if self.ok else "FAIL"))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "ok": self.ok,
            "symbolic_failures": self.symbolic_failures,
            "instances": [
                {
                    "size": r.size,
                    "blocks": r.blocks,
                    "closure_stages": r.closure_stages,
                    "failures": [[n, list(map(str, d))] for n, d in r.failures],
                }
                for r in self.results
            ],
        }


def sweep(count: int, seed: int, size: int | None = None, audit: bool = False) -> SweepReport:
    """``count`` random instances; ``size`` fixed or drawn from 1..6."""
    rng = random.Random(seed)
    symbolic = []
    for name, e in (("I", I_EXPR), ("J", J_EXPR)):
        if not verify_square_idempotent(e):
            symbolic.append((f"symbolic {name}∘{name} = {name}",))
    results = []
    for _ in range(count):
        n = size if size is not None else rng.randint(1, 6)
        results.append(verify_bundle(random_instance(n, rng), audit))
    return SweepReport(seed, results, symbolic)
