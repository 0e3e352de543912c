import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import set_partitions
from relalg.epistemic import (
    EpistemicModel,
    common_knowledge_iterated,
    common_knowledge_meet,
    everyone_knows,
    knows,
    load_model,
    meet_partitions,
    model_to_json,
    pathology_model,
    saturation_demo,
)
from relalg.relations import Partition


@pytest.fixture
def coordinated():
    return EpistemicModel.from_blocks(
        [1, 2, 3, 4], {"1": [[1, 2], [3, 4]], "2": [[1], [2, 3], [4]]}
    )


def test_knows_examples():
    p = Partition([[1, 2], [3]])
    assert knows({1, 3}, p) == {3}
    assert knows({1, 2, 3}, p) == {1, 2, 3}
    assert knows({1, 3}, Partition([[1], [2], [3]])) == {1, 3}
    assert knows(set(), p) == set()


def test_coordinated_model(coordinated):
    a = {1, 2, 3}
    assert everyone_knows(a, coordinated) == {1, 2}
    # the iterates shrink one step at a time before vanishing
    assert everyone_knows({1, 2}, coordinated) == {1}
    assert everyone_knows({1}, coordinated) == set()
    assert meet_partitions(coordinated) == Partition([[1, 2, 3, 4]])
    assert common_knowledge_meet(a, coordinated) == set()
    assert common_knowledge_iterated(a, coordinated) == set()
    assert common_knowledge_meet(coordinated.states, coordinated) == coordinated.states


def test_single_agent_degenerates_to_knows():
    m = EpistemicModel.from_blocks(range(4), {"a": [[0, 1], [2], [3]]})
    p = m.partitions["a"]
    for a in ({0}, {0, 1}, {1, 2}, {2, 3}):
        assert everyone_knows(a, m) == knows(a, p)
        assert common_knowledge_meet(a, m) == knows(a, p)
        assert common_knowledge_iterated(a, m) == knows(a, p)


def test_meet_of_identical_and_discrete():
    blocks = [[0, 1], [2]]
    m = EpistemicModel.from_blocks(range(3), {"a": blocks, "b": blocks})
    assert meet_partitions(m) == Partition(blocks)
    d = EpistemicModel.from_blocks(range(3), {"a": [[0], [1], [2]], "b": [[0], [1], [2]]})
    assert meet_partitions(d) == Partition([[0], [1], [2]])


def test_model_validation():
    with pytest.raises(ValueError):
        EpistemicModel.from_blocks([1, 2, 3], {"a": [[1, 2]]})
    with pytest.raises(ValueError):
        EpistemicModel.from_blocks([1], {})
    m = EpistemicModel.from_blocks([1, 2], {"a": [[1, 2]]})
    with pytest.raises(ValueError):
        m.event([3])


def test_pathology_model():
    m = pathology_model(4, [0, 2])
    meet = meet_partitions(m)
    assert meet.block_of(4) == {0, 2, 4, 5, 6, 7}
    assert meet.block_of(1) == {1}
    assert common_knowledge_meet(range(4), m) == {1, 3}
    with pytest.raises(ValueError):
        pathology_model(2, [5])


def test_model_json_round_trip(coordinated, tmp_path):
    doc = model_to_json(coordinated)
    assert doc["agents"] == ["1", "2"]
    back = load_model(json.loads(json.dumps(doc)))
    assert back == coordinated
    with pytest.raises(ValueError):
        load_model({"states": [1]})
    with pytest.raises(ValueError):
        load_model({"states": [1], "agents": ["x"], "partitions": {"y": [[1]]}})


# -- operator laws ------------------------------------------------------------


@st.composite
def models(draw, max_states=8, max_agents=3):
    states = list(range(draw(st.integers(1, max_states))))
    k = draw(st.integers(1, max_agents))
    parts = {str(i): draw(set_partitions(states)) for i in range(k)}
    return EpistemicModel.from_blocks(states, parts)


@st.composite
def model_and_events(draw):
    m = draw(models())
    states = sorted(m.states)
    a = frozenset(draw(st.sets(st.sampled_from(states))))
    b = frozenset(draw(st.sets(st.sampled_from(states))))
    return m, a, b


@given(model_and_events())
def test_knowledge_axioms(mab):
    m, a, b = mab
    for p in m.partitions.values():
        k = knows(a, p)
        assert k <= a
        assert knows(k, p) == k
        assert knows(a & b, p) <= knows(a | b, p)
        assert k == frozenset().union(*(blk for blk in p.blocks if blk <= a))


@given(model_and_events())
def test_common_knowledge_agrees(mab):
    m, a, _ = mab
    ck = common_knowledge_meet(a, m)
    assert ck == common_knowledge_iterated(a, m)
    assert ck <= everyone_knows(a, m) <= a


@given(models())
def test_meet_is_lattice_meet(m):
    meet = meet_partitions(m)
    for p in m.partitions.values():
        assert p.refines(meet)
    # coarsest: each meet block is connected through agent blocks
    for block in meet.blocks:
        start = next(iter(block))
        reached = {start}
        frontier = [start]
        while frontier:
            w = frontier.pop()
            for p in m.partitions.values():
                for v in p.block_of(w) - reached:
                    reached.add(v)
                    frontier.append(v)
        assert reached == block


# -- saturation demo ----------------------------------------------------------


def test_demo_s_equals_omega0():
    rep = saturation_demo(range(5), [0, 1, 2], [0, 1, 2])
    assert rep.ok
    assert len(rep.checked) == 13


def test_demo_singleton_s():
    rep = saturation_demo(range(4), [0, 1], [1])
    assert rep.ok
    assert all(got == ["1"] for _, got in rep.checked)


def test_demo_reference_instance():
    rep = saturation_demo(range(5), [0, 1, 2], [0, 2], seed=3)
    assert rep.ok
    assert rep.to_json()["ok"] is True


@pytest.mark.parametrize(
    "carrier, omega0, s",
    [
        ([0, 1], [0, 1], [0]),
        ([0, 1, 2], [0, 1], []),
        ([0, 1, 2], [0], [1]),
        ([0, 0, 1], [0], [0]),
    ],
)
def test_demo_rejects_degenerate_inputs(carrier, omega0, s):
    with pytest.raises(ValueError):
        saturation_demo(carrier, omega0, s)


def test_demo_random_instances():
    rng = random.Random(2)
    for _ in range(10):
        n = rng.randint(2, 5)
        omega0 = rng.sample(range(n), rng.randint(1, n - 1))
        s = rng.sample(omega0, rng.randint(1, len(omega0)))
        assert saturation_demo(range(n), omega0, s, seed=rng.randrange(99)).ok
