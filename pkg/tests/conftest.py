"""Shared fixtures: parts and evaluators are expensive enough to cache."""

import numpy as np
import pytest

from printopt import fixtures
from printopt.evaluator import Evaluator
from printopt.mesh import build_mesh


@pytest.fixture(scope="session")
def mesh_of():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = fixtures.make(name)
        return cache[name]

    return get


@pytest.fixture(scope="session")
def evaluator_of(mesh_of):
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = Evaluator(mesh_of(name))
        return cache[name]

    return get


@pytest.fixture(scope="session")
def unit_cube():
    """Hand-indexed 1 mm cube with outward winding."""
    v = np.array(
        [
            [0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
            [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1],
        ],
        dtype=float,
    )
    f = np.array(
        [
            [0, 2, 1], [0, 3, 2],  # bottom
            [4, 5, 6], [4, 6, 7],  # top
            [0, 1, 5], [0, 5, 4],  # y = 0
            [1, 2, 6], [1, 6, 5],  # x = 1
            [2, 3, 7], [2, 7, 6],  # y = 1
            [3, 0, 4], [3, 4, 7],  # x = 0
        ]
    )
    return build_mesh(v, f, name="unit_cube")
