import itertools

import pytest
from hypothesis import strategies as st

from relalg.construction import build_ij, equivalence_from_blocks
from relalg.relations import GroundSpace, Relation

ACCEPTANCE_LINES = []


@pytest.fixture
def ref_space():
    return GroundSpace(["x1", "x2", "x3"])


@pytest.fixture
def ref_e(ref_space):
    return equivalence_from_blocks(ref_space, [["x1", "x2"], ["x3"]])


@pytest.fixture
def ref_bundle(ref_e):
    return build_ij(ref_e)


@st.composite
def relations(draw, max_points=20):
    n = draw(st.integers(min_value=1, max_value=max_points))
    space = GroundSpace.flat(f"p{i}" for i in range(n))
    pairs = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n))
    return Relation(space, ((f"p{a}", f"p{b}") for a, b in pairs))


@st.composite
def relation_families(draw, k=3, max_points=20):
    """``k`` random relations over one shared flat space."""
    n = draw(st.integers(min_value=1, max_value=max_points))
    space = GroundSpace.flat(f"p{i}" for i in range(n))
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    out = []
    for _ in range(k):
        pairs = draw(st.sets(pair, max_size=3 * n))
        out.append(Relation(space, ((f"p{a}", f"p{b}") for a, b in pairs)))
    return out


@st.composite
def set_partitions(draw, points):
    labels = draw(st.lists(st.integers(0, len(points)), min_size=len(points), max_size=len(points)))
    blocks = {}
    for p, lab in zip(points, labels):
        blocks.setdefault(lab, []).append(p)
    return list(blocks.values())


def brute_compose(k, l):
    """Definition-level composition, used as an oracle."""
    return {(a, d) for (a, b), (c, d) in itertools.product(k.pairs, l.pairs) if b == c}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
