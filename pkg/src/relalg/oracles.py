"""Independent reference computations on boolean adjacency matrices.

Nothing here goes through :func:`relalg.relations.compose`, so these can
cross-check the set-based kernel.
"""

from __future__ import annotations

import itertools
import random

import numpy as np

from .relations import GroundSpace, Partition, Relation


def to_matrix(r: Relation) -> np.ndarray:
    n = len(r.space)
    m = np.zeros((n, n), dtype=bool)
    idx = r.space.index
    for a, b in r.pairs:
        m[idx(a), idx(b)] = True
    return m


def from_matrix(space: GroundSpace, m: np.ndarray) -> Relation:
    pts = space.points
    rows, cols = np.nonzero(m)
    return Relation(space, ((pts[i], pts[j]) for i, j in zip(rows.tolist(), cols.tolist())))


def warshall_closure(r: Relation) -> Relation:
    """All-pairs reachability by one or more steps."""
    m = to_matrix(r)
    for k in range(m.shape[0]):
        m |= np.outer(m[:, k], m[k, :])
    return from_matrix(r.space, m)


def matrix_compose(first: Relation, then: Relation) -> Relation:
    prod = to_matrix(first).astype(np.int64) @ to_matrix(then).astype(np.int64)
    return from_matrix(first.space, prod > 0)


def random_relation(space: GroundSpace, rng: random.Random, density: float | None = None) -> Relation:
    if density is None:
        density = rng.random() * 0.3
    return Relation(space, (p for p in itertools.product(space.points, repeat=2) if rng.random() < density))


def random_partition(points, rng: random.Random) -> Partition:
    """Uniform-ish random set partition via sequential block assignment."""
    blocks: list = []
    for p in points:
        i = rng.randrange(len(blocks) + 1)
        if i == len(blocks):
            blocks.append([p])
        else:
            blocks[i].append(p)
    return Partition(blocks, points)


def all_partitions(points):
    """Every set partition of ``points`` (as lists of lists)."""
    points = list(points)
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for sub in all_partitions(rest):
        yield [[first]] + sub
        for i in range(len(sub)):
            yield sub[:i] + [[first] + sub[i]] + sub[i + 1:]
