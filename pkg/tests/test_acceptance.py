"""Acceptance gate: one check per criterion, each with its time budget.

Run with ``pytest tests/test_acceptance.py`` (the lines are printed in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import itertools
import random
import sys
import time
from functools import lru_cache
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES  # noqa: E402
from relalg.construction import build_ij, check_identities, equivalence_from_blocks  # noqa: E402
from relalg.epistemic import (  # noqa: E402
    EpistemicModel,
    common_knowledge_iterated,
    common_knowledge_meet,
    saturation_demo,
)
from relalg.oracles import all_partitions, random_partition, random_relation, warshall_closure  # noqa: E402
from relalg.relations import GroundSpace, compose, is_equivalence, restrict, transitive_closure  # noqa: E402
from relalg.star import (  # noqa: E402
    StarInstance,
    canonical_family,
    enumerate_equiv_subrelations,
    equiv_subrelations,
    exhaustive_min_cover,
    min_cover_size,
)
from relalg.symbolic import (  # noqa: E402
    I_EXPR,
    J_EXPR,
    audit_deletions,
    closure_trace,
    evaluate_on_model,
    format_expr,
    verify_square_idempotent,
)
from relalg.sweep import audited_stages  # noqa: E402

GOLDEN_TRACE = [
    "D+G+G'+G'G+H",
    "D+Q+G+GH+G'+G'G+G'GH+H+HG'+HG'G",
    "Q+E+EG+GH+G'E+G'EG+G'GH+H+HG'+HG'G+HG'GH",
    "Q+E+EG+EGH+G'E+G'EG+G'EGH+H+HG'E+HG'EG+HG'GH",
    "Q+E+EG+EGH+G'E+G'EG+G'EGH+H+HG'E+HG'EG+HG'EGH",
]

SEED = 20240611


def record(number, title, budget, check):
    """Run ``check`` (returning a list of problems), time it, log one line,
    and return the problems plus any budget overrun."""
    start = time.perf_counter()
    problems = list(check())
    elapsed = time.perf_counter() - start
    if elapsed >= budget:
        problems.append(f"took {elapsed:.2f}s, budget {budget}s")
    status = "PASS" if not problems else "FAIL"
    line = f"{status} criterion {number}: {title} ({elapsed:.2f}s < {budget}s)"
    if problems:
        line += " :: " + str(problems[0])
    ACCEPTANCE_LINES.append(line)
    print(line)
    return problems


@lru_cache(maxsize=1)
def instances():
    rng = random.Random(SEED)
    out = []
    for _ in range(100):
        space = GroundSpace(f"x{i + 1}" for i in range(rng.randint(1, 6)))
        e = equivalence_from_blocks(space, random_partition(space.x_points, rng))
        out.append(build_ij(e))
    return tuple(out)


# -- 1. closure trace ---------------------------------------------------------


def check_trace():
    trace = closure_trace()
    got = [format_expr(s) for s in trace.stages]
    if got[:5] != GOLDEN_TRACE:
        yield f"stages differ: {got[:5]}"
    if trace.fixpoint != 5:
        yield f"fixpoint {trace.fixpoint}"
    if trace.stage(6) != trace.stage(5):
        yield "stage 6 differs from stage 5"


def test_criterion_1_closure_trace():
    assert record(1, "golden closure trace, fixpoint 5", 1.0, check_trace) == []


# -- 2. idempotence -----------------------------------------------------------


def check_idempotence():
    for name, e in (("D+G+G'+G'G", I_EXPR), ("D+H", J_EXPR)):
        if not verify_square_idempotent(e):
            yield f"{name} squared is not {name}"


def test_criterion_2_idempotence():
    assert record(2, "symbolic I∘I = I and J∘J = J", 1.0, check_idempotence) == []


# -- 3. closure recovers E ----------------------------------------------------


def check_closure_recovers_e():
    for i, b in enumerate(instances()):
        closed, stages = transitive_closure(b.IJ)
        if restrict(closed, b.space.x_points) != b.E:
            yield f"instance {i}: t(I∪J)↾X != E"
        if stages > 5:
            yield f"instance {i}: closure stage {stages}"


def test_criterion_3_closure_recovers_e():
    assert record(3, "t(I∪J)↾X = E on 100 seeded E, stage <= 5", 30.0, check_closure_recovers_e) == []


# -- 4. composition identities ------------------------------------------------


def check_composition_identities():
    for i, b in enumerate(instances()):
        for c in check_identities(b):
            if not c:
                yield f"instance {i}: {c.name} fails at {c.counterexample}"
        for name, r in (("I", b.I), ("J", b.J)):
            if compose(r, r) != r:
                yield f"instance {i}: {name}∘{name} != {name}"
            if not is_equivalence(r):
                yield f"instance {i}: {name} is not an equivalence"


def test_criterion_4_identities():
    assert record(4, "six identities, I² = I, J² = J, equivalences", 60.0, check_composition_identities) == []


# -- 5. soundness bridge ------------------------------------------------------


def check_soundness():
    stages, events = audited_stages()
    for i, b in enumerate(instances()):
        powers = [b.IJ]
        for _ in range(5):
            powers.append(compose(b.IJ, powers[-1]))
        for k in range(1, 7):
            if evaluate_on_model(stages[k - 1], b) != powers[k - 1]:
                yield f"instance {i}: stage {k} != (I∪J)^({k})"
            for ev in audit_deletions(events[k - 1], b, stages[k - 1]):
                yield f"instance {i}: uncovered deletion {ev}"


def test_criterion_5_soundness():
    assert record(5, "stage k evaluates to (I∪J)^(k), k=1..6, audited", 60.0, check_soundness) == []


# -- 6. two definitions of common knowledge ----------------------------------


def _compare_all_events(m):
    states = sorted(m.states)
    for r in range(len(states) + 1):
        for a in itertools.combinations(states, r):
            if common_knowledge_meet(a, m) != common_knowledge_iterated(a, m):
                yield f"disagree on {a} in {m}"


def check_common_knowledge():
    for n in range(1, 6):
        parts = list(all_partitions(list(range(n))))
        for p1, p2 in itertools.product(parts, repeat=2):
            yield from _compare_all_events(EpistemicModel.from_blocks(range(n), {"1": p1, "2": p2}))
    rng = random.Random(SEED)
    for _ in range(500):
        states = list(range(rng.randint(1, 8)))
        parts = {str(k): random_partition(states, rng) for k in range(rng.randint(1, 3))}
        m = EpistemicModel.from_blocks(states, parts)
        a = [s for s in states if rng.random() < 0.6]
        if common_knowledge_meet(a, m) != common_knowledge_iterated(a, m):
            yield f"disagree on {a} in {m}"


def test_criterion_6_common_knowledge():
    assert record(6, "CK via meet = CK via iteration", 60.0, check_common_knowledge) == []


# -- 7. star relation ---------------------------------------------------------


def check_star():
    from relalg.relations import union_all

    for n in range(2, 8):
        s = StarInstance(n)
        if min_cover_size(s) != n - 1:
            yield f"n={n}: minCover {min_cover_size(s)}"
        if union_all(s.space, canonical_family(s)) != s.R:
            yield f"n={n}: family does not cover R"
        if n <= 5:
            if exhaustive_min_cover(s) != n - 1:
                yield f"n={n}: exhaustive cover {exhaustive_min_cover(s)}"
            if set(enumerate_equiv_subrelations(s)) != set(equiv_subrelations(s)):
                yield f"n={n}: equivalence subrelations differ from D plus the family"


def test_criterion_7_star():
    assert record(7, "star relation needs n-1 equivalences, n=2..7", 60.0, check_star) == []


# -- 8. saturation demo -------------------------------------------------------


def check_saturation_demo():
    rng = random.Random(SEED)
    for i in range(50):
        n = rng.randint(2, 6)
        omega0 = rng.sample(range(n), rng.randint(1, n - 1))
        s = rng.sample(omega0, rng.randint(1, len(omega0)))
        rep = saturation_demo(range(n), omega0, s, seed=i)
        if not rep.ok:
            yield f"instance {i}: {rep.failures[0]}"


def test_criterion_8_saturation_demo():
    assert record(8, "saturation of every non-empty A ⊆ S meets Ω₀ in S, 50 instances", 10.0, check_saturation_demo) == []


# -- 9. closure vs reachability oracle ---------------------------------------


def check_closure_oracle():
    rng = random.Random(SEED)
    for i in range(1000):
        space = GroundSpace.flat(f"p{k}" for k in range(rng.randint(1, 30)))
        r = random_relation(space, rng, rng.choice([0.02, 0.05, 0.1, 0.3]))
        if transitive_closure(r).relation != warshall_closure(r):
            yield f"relation {i} differs"


def test_criterion_9_closure_oracle():
    assert record(9, "transitive closure = Warshall on 1000 relations", 30.0, check_closure_oracle) == []


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
