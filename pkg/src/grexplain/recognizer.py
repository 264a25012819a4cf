"""Online goal recognition by plan mirroring.

Each goal hypothesis is scored after every observation prefix by the ratio

    optimal cost(initial -> goal) / (prefix cost + optimal cost(state -> goal))

so a goal the observations keep optimal scores 1 and goals the agent walks
away from decay toward 0.  Scores are normalized into a posterior over the
goal set; unreachable goals get probability 0.  The ratio is scale-free:
multiplying all action costs by a constant changes nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import AllGoalsUnsolvable, InvalidObservationChain, MalformedSpec
from .planner import DEFAULT_BUDGET, Heuristic, PlanningTask, optimal_cost
from .strips import DomainDefinition, GroundAction, State, applicable, apply

DEFAULT_TIE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Observation:
    """One observed step: the action taken and the fact-state it produced."""

    action: GroundAction
    resulting_state: State


@dataclass(frozen=True)
class GrProblem:
    """A goal-recognition problem: domain, initial state, goal hypotheses,
    and the observed action/state sequence."""

    domain: DomainDefinition
    initial: State
    goals: tuple
    observations: tuple = ()
    goal_names: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "goals", tuple(frozenset(g) for g in self.goals))
        object.__setattr__(self, "observations", tuple(self.observations))
        if not self.goals:
            raise MalformedSpec("a recognition problem needs at least one goal")
        names = tuple(self.goal_names) or tuple(
            f"g{i + 1}" for i in range(len(self.goals)))
        if len(names) != len(self.goals):
            raise MalformedSpec("goal_names must match the number of goals")
        object.__setattr__(self, "goal_names", names)
        validate_observations(self.domain, self.initial, self.observations)

    def state_before(self, index: int) -> State:
        """The fact-state immediately before 1-based observation ``index``."""
        if index < 1 or index > len(self.observations):
            raise IndexError(f"observation index {index} out of range")
        if index == 1:
            return self.initial
        return self.observations[index - 2].resulting_state

    def goal_label(self, goal_index: int) -> str:
        return self.goal_names[goal_index]


def validate_observations(domain: DomainDefinition, initial: State,
                          observations: Sequence[Observation]) -> None:
    """Check an observation chain progresses validly from the initial state."""
    state = initial
    for i, obs in enumerate(observations, start=1):
        if not domain.has_action(obs.action.name):
            raise InvalidObservationChain(i, f"unknown action {obs.action.name}")
        if not applicable(state, obs.action):
            raise InvalidObservationChain(
                i, f"action {obs.action.name} is not applicable")
        state = apply(state, obs.action)
        if state != obs.resulting_state:
            raise InvalidObservationChain(
                i, f"recorded state does not match applying {obs.action.name}")


@dataclass(frozen=True)
class PosteriorTrace:
    """Per-prefix posterior distributions plus the predicted/counterfactual
    goal split taken from the final prefix."""

    prior: tuple
    per_prefix: tuple
    predicted: frozenset
    counterfactual: frozenset

    @property
    def final(self) -> tuple:
        return self.per_prefix[-1] if self.per_prefix else self.prior

    @property
    def goal_count(self) -> int:
        return len(self.prior)

    @property
    def observation_count(self) -> int:
        return len(self.per_prefix)


def _normalize(scores, prefix: int) -> tuple:
    total = sum(scores)
    if total == 0:
        raise AllGoalsUnsolvable(prefix)
    return tuple(s / total for s in scores)


def mirror_posteriors(problem: GrProblem, priors: Optional[Sequence[float]] = None,
                      tie_tolerance: float = DEFAULT_TIE_TOLERANCE,
                      budget: int = DEFAULT_BUDGET) -> PosteriorTrace:
    """Run the mirroring recognizer over the full observation sequence.

    ``priors`` optionally weights goals before normalization (defaults to
    uniform, in which case the weighting step is skipped entirely so exact
    geometric ties stay exact).
    """
    if priors is not None and len(priors) != len(problem.goals):
        raise MalformedSpec("priors must assign one weight per goal")

    base_costs = [
        optimal_cost(PlanningTask(problem.domain, problem.initial, g),
                     Heuristic.ZERO, budget)
        for g in problem.goals
    ]

    def distribution(scores, prefix):
        if priors is not None:
            scores = [p * s for p, s in zip(priors, scores)]
        return _normalize(scores, prefix)

    prior_scores = [0.0 if c is None else 1.0 for c in base_costs]
    prior_dist = distribution(prior_scores, 0)

    per_prefix = []
    for i, obs in enumerate(problem.observations, start=1):
        state = obs.resulting_state
        scores = []
        for goal, base in zip(problem.goals, base_costs):
            if base is None:
                scores.append(0.0)
                continue
            suffix = optimal_cost(PlanningTask(problem.domain, state, goal),
                                  Heuristic.ZERO, budget)
            scores.append(0.0 if suffix is None else base / (i + suffix))
        per_prefix.append(distribution(scores, i))

    final = per_prefix[-1] if per_prefix else prior_dist
    predicted, counterfactual = _split(final, tie_tolerance)
    return PosteriorTrace(
        prior=prior_dist,
        per_prefix=tuple(per_prefix),
        predicted=predicted,
        counterfactual=counterfactual,
    )


def _split(distribution, tie_tolerance):
    top = max(distribution)
    predicted = frozenset(
        i for i, p in enumerate(distribution) if p >= top - tie_tolerance)
    counterfactual = frozenset(range(len(distribution))) - predicted
    return predicted, counterfactual


def split_goal_sets(trace: PosteriorTrace,
                    tie_tolerance: float = DEFAULT_TIE_TOLERANCE):
    """Split goals into (predicted, counterfactual) index sets.

    All goals within ``tie_tolerance`` of the final-prefix maximum are
    co-predicted; exact geometric ties must land in the same set.
    """
    return _split(trace.final, tie_tolerance)
