"""Shared fixtures: bundled scenario problems and small derived examples."""

import random

import pytest

from grexplain import (GridSpec, bundled_scenario_path, compile_grid,
                       load_scenario)
from grexplain.recognizer import GrProblem, Observation
from grexplain.strips import apply


@pytest.fixture(scope="session")
def nav_problem():
    return load_scenario(bundled_scenario_path("nav_crossroads"))


@pytest.fixture(scope="session")
def sokoban_problem():
    return load_scenario(bundled_scenario_path("sokoban_pairs"))


def walk(domain, initial, names):
    """Build an observation chain from action names."""
    state = initial
    out = []
    for name in names:
        action = domain.action(name)
        state = apply(state, action)
        out.append(Observation(action, state))
    return tuple(out)


@pytest.fixture()
def tiny_grid_problem():
    # 3x3 board, start bottom-left corner (cell 7), goals top-left and
    # top-right; one observed move east.
    domain, initial, goals = compile_grid(GridSpec(3, 3, frozenset(), 7, (1, 3)))
    obs = walk(domain, initial, ["move-right-7-8"])
    return GrProblem(domain, initial, tuple(goals), obs)


def random_grid_spec(rng: random.Random, max_side=8, blocks=0.2):
    width = rng.randint(2, max_side)
    height = rng.randint(2, max_side)
    cells = list(range(1, width * height + 1))
    blocked = {c for c in cells if rng.random() < blocks}
    free = [c for c in cells if c not in blocked]
    if len(free) < 3:
        return random_grid_spec(rng, max_side, blocks)
    start, goal = rng.sample(free, 2)
    return GridSpec(width, height, frozenset(blocked), start, (goal,))


def bfs_grid_distance(spec: GridSpec, src: int, dst: int):
    """Independent shortest-path oracle on the cell graph (no STRIPS)."""
    from collections import deque

    if src == dst:
        return 0
    seen = {src}
    queue = deque([(src, 0)])
    while queue:
        cell, dist = queue.popleft()
        row, col = divmod(cell - 1, spec.width)
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            r, c = row + dr, col + dc
            if not (0 <= r < spec.height and 0 <= c < spec.width):
                continue
            nbr = r * spec.width + c + 1
            if nbr in spec.blocked or nbr in seen:
                continue
            if nbr == dst:
                return dist + 1
            seen.add(nbr)
            queue.append((nbr, dist + 1))
    return None
