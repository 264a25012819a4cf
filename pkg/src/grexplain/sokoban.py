"""Sokoban scenarios compiled into ground STRIPS domains.

The encoding keeps boxes anonymous: facts are ``player-<cell>``,
``box-<cell>`` and ``clear-<cell>`` over non-wall cells, and a goal hypothesis
is the conjunction of ``box-<storage>`` facts for its assigned storages.
Pushes require the player adjacent to the box line and the cell beyond it
clear; with ``multi_push`` a straight line of two boxes can be shoved one cell
in a single action (the variant where the player may push two boxes at once).

All actions cost 1: plain walking counts toward plan length just like pushes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MalformedSpec
from .strips import DomainDefinition, GroundAction, State


@dataclass(frozen=True)
class SokobanSpec:
    width: int
    height: int
    walls: frozenset = frozenset()
    player: int = 1
    boxes: tuple = ()
    storage: tuple = ()
    goal_assignments: tuple = ()  # each entry: tuple of storage cells to fill
    multi_push: bool = False

    def __post_init__(self):
        object.__setattr__(self, "walls", frozenset(self.walls))
        object.__setattr__(self, "boxes", tuple(self.boxes))
        object.__setattr__(self, "storage", tuple(self.storage))
        object.__setattr__(self, "goal_assignments",
                           tuple(tuple(a) for a in self.goal_assignments))
        n = self.width * self.height
        if self.width < 1 or self.height < 1:
            raise MalformedSpec("board dimensions must be positive")
        occupied = [("player", self.player)] + [("box", b) for b in self.boxes]
        seen = set()
        for label, cell in occupied + [("storage", s) for s in self.storage]:
            if not 1 <= cell <= n:
                raise MalformedSpec(f"{label} cell {cell} out of range 1..{n}")
            if cell in self.walls:
                raise MalformedSpec(f"{label} cell {cell} is a wall")
        for label, cell in occupied:
            if cell in seen:
                raise MalformedSpec(f"entities overlap at cell {cell}")
            seen.add(cell)
        if len(set(self.storage)) != len(self.storage):
            raise MalformedSpec("duplicate storage cells")
        for assignment in self.goal_assignments:
            if len(set(assignment)) != len(assignment):
                raise MalformedSpec(f"goal assignment repeats a storage: {assignment}")
            for cell in assignment:
                if cell not in self.storage:
                    raise MalformedSpec(f"goal assignment uses non-storage cell {cell}")
            if len(assignment) > len(self.boxes):
                raise MalformedSpec("goal assignment needs more boxes than exist")


def _offset(cell: int, direction: int, width: int, height: int, steps: int = 1):
    """Cell ``steps`` moves along a direction delta, or None off the board."""
    row, col = divmod(cell - 1, width)
    drow, dcol = direction
    row, col = row + drow * steps, col + dcol * steps
    if 0 <= row < height and 0 <= col < width:
        return row * width + col + 1
    return None


_DELTAS = {"up": (-1, 0), "down": (1, 0), "left": (0, -1), "right": (0, 1)}


def compile_sokoban(spec: SokobanSpec):
    """Compile a Sokoban board into (domain, initial state, goal fact-sets)."""
    n = spec.width * spec.height
    floor = [c for c in range(1, n + 1) if c not in spec.walls]
    facts = ([f"player-{c}" for c in floor]
             + [f"box-{c}" for c in floor]
             + [f"clear-{c}" for c in floor])

    actions = []
    for cell in floor:
        for direction, delta in _DELTAS.items():
            dest = _offset(cell, delta, spec.width, spec.height)
            if dest is None or dest in spec.walls:
                continue
            actions.append(GroundAction(
                name=f"move-{direction}-{cell}-{dest}",
                preconditions=frozenset([f"player-{cell}", f"clear-{dest}"]),
                add_effects=frozenset([f"player-{dest}", f"clear-{cell}"]),
                delete_effects=frozenset([f"player-{cell}", f"clear-{dest}"]),
            ))
            box_to = _offset(cell, delta, spec.width, spec.height, 2)
            if box_to is not None and box_to not in spec.walls:
                actions.append(GroundAction(
                    name=f"push-{direction}-{cell}-{dest}",
                    preconditions=frozenset(
                        [f"player-{cell}", f"box-{dest}", f"clear-{box_to}"]),
                    add_effects=frozenset(
                        [f"player-{dest}", f"box-{box_to}", f"clear-{cell}"]),
                    delete_effects=frozenset(
                        [f"player-{cell}", f"box-{dest}", f"clear-{box_to}"]),
                ))
            if not spec.multi_push:
                continue
            pair_to = _offset(cell, delta, spec.width, spec.height, 3)
            if (box_to is None or box_to in spec.walls
                    or pair_to is None or pair_to in spec.walls):
                continue
            # Two boxes in a row shift by one cell; the rear box lands where
            # the front box was, so only the line's ends change.
            actions.append(GroundAction(
                name=f"push2-{direction}-{cell}-{dest}",
                preconditions=frozenset(
                    [f"player-{cell}", f"box-{dest}", f"box-{box_to}",
                     f"clear-{pair_to}"]),
                add_effects=frozenset(
                    [f"player-{dest}", f"box-{pair_to}", f"clear-{cell}"]),
                delete_effects=frozenset(
                    [f"player-{cell}", f"box-{dest}", f"clear-{pair_to}"]),
            ))

    domain = DomainDefinition(
        facts, actions,
        annotations={"kind": "sokoban", "width": spec.width, "height": spec.height,
                     "walls": sorted(spec.walls), "storage": list(spec.storage),
                     "multi_push": spec.multi_push},
    )

    occupied = {spec.player, *spec.boxes}
    initial = State(
        [f"player-{spec.player}"]
        + [f"box-{b}" for b in spec.boxes]
        + [f"clear-{c}" for c in floor if c not in occupied]
    )
    goals = [frozenset(f"box-{s}" for s in assignment)
             for assignment in spec.goal_assignments]
    return domain, initial, goals
