"""Simultaneous search over a portfolio of concepts, plus the sequential baseline.

The simultaneous loop visits active concepts round-robin, one generation per
visit, while they hold quota. A concept is frozen the first time one of its
members enters the window. When every active concept has spent its quota the
allocator re-categorizes them and a new round starts. The search stops once
``target_l`` concepts are satisficing or the generation budget is spent.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_int
from .allocation import (
    ACTIVE,
    EXHAUSTED,
    SATISFICING,
    AllocationPolicy,
    ConceptState,
    allocate,
    concept_distance,
)
from .benchmarks import Concept, check_portfolio
from .engine import GAParams, advance_generation, prepare, random_population
from .objective_space import WindowOfInterest, contains

logger = logging.getLogger(__name__)

MODES = ("simultaneous", "sequential")
TARGET_REACHED = "target_reached"
BUDGET_EXHAUSTED = "budget_exhausted"
DEFAULT_CAP_PER_CONCEPT = 1000


@dataclass(frozen=True)
class RunConfig:
    portfolio: tuple[Concept, ...]
    woi: WindowOfInterest
    target_l: int = 1
    total_generation_budget: int | None = None
    ga: GAParams = field(default_factory=GAParams)
    policy: AllocationPolicy = field(default_factory=AllocationPolicy)
    mode: str = "simultaneous"
    seed: int | None = None

    def __post_init__(self):
        portfolio = tuple(check_portfolio(self.portfolio))
        object.__setattr__(self, "portfolio", portfolio)
        beta = len(portfolio)
        check_int(self.target_l, "target_l", minimum=1)
        if self.target_l > beta:
            raise ValueError(f"target_l={self.target_l} exceeds the number of concepts ({beta})")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.total_generation_budget is None:
            object.__setattr__(self, "total_generation_budget", beta * DEFAULT_CAP_PER_CONCEPT)
        budget = check_int(self.total_generation_budget, "budget", minimum=1)
        if budget < beta * self.policy.gq0:
            raise ValueError(
                f"budget={budget} is smaller than the initialization cost "
                f"{beta} concepts x gq0={self.policy.gq0}"
            )
        if self.seed is not None:
            check_int(self.seed, "seed")

    @property
    def beta(self) -> int:
        return len(self.portfolio)

    @property
    def effective_seed(self) -> int:
        return self.ga.rng_seed if self.seed is None else self.seed

    def concept_rngs(self) -> list[np.random.Generator]:
        """One independent stream per concept, keyed by its portfolio index."""
        children = np.random.SeedSequence(self.effective_seed).spawn(self.beta)
        return [np.random.default_rng(s) for s in children]


@dataclass
class RunReport:
    mode: str
    seed: int
    woi: list[float]
    target_l: int
    satisficing: list[dict]
    per_concept: dict[str, dict]
    totals: dict[str, int]
    stop_reason: str
    progress: list[list[float]] = field(default_factory=list)

    @property
    def satisficing_ids(self) -> list[str]:
        return [entry["id"] for entry in self.satisficing]

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "seed": self.seed,
            "woi": self.woi,
            "target_l": self.target_l,
            "satisficing": self.satisficing,
            "per_concept": self.per_concept,
            "totals": self.totals,
            "stop_reason": self.stop_reason,
            "progress": self.progress,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        return cls(**data)


def _init_state(concept: Concept, rng: np.random.Generator, config: RunConfig) -> ConceptState:
    pop = random_population(concept, config.ga.N, rng)
    prepare(pop, config.woi, config.ga)
    state = ConceptState(concept, pop, rng=rng)
    concept_distance(state)
    return state


def detect_satisficing(state: ConceptState, woi: WindowOfInterest | None = None) -> bool:
    """True once the concept has a member inside the window; freezes it on first hit.

    Returns True only on the first detection so callers can count it exactly once.
    """
    if state.status == SATISFICING and state.detected_generation is not None:
        return False
    d = state.current_distance
    if d != 0.0:
        return False
    state.status = SATISFICING
    state.detected_generation = state.generation
    state.remaining = 0
    return True


class _Ledger:
    """Running totals and the portfolio-level progress trace."""

    def __init__(self, states: list[ConceptState]):
        self.states = states
        self.generations = 0
        self.progress: list[list[float]] = []
        self.record()

    def record(self) -> None:
        evals = sum(s.population.evaluations for s in self.states)
        best = min(s.current_distance for s in self.states)
        self.progress.append([evals, best])


def _step(state: ConceptState, config: RunConfig) -> None:
    advance_generation(state.population, config.woi, config.ga, state.rng)
    state.remaining -= 1
    concept_distance(state)


def _concept_summary(state: ConceptState, woi: WindowOfInterest) -> dict:
    pop = state.population
    n_eval0 = len(pop)
    trajectory = [[g, n_eval0 * (g + 1), d] for g, d in state.distance_history]
    summary = {
        "generations": pop.generation,
        "evaluations": pop.evaluations,
        "trajectory": trajectory,
        "final_category": state.category,
        "status": state.status,
        "detected_generation": state.detected_generation,
        "witness": None,
    }
    if state.status == SATISFICING:
        best = pop.best_index()
        assert contains(woi, pop.Y[best])
        summary["witness"] = {"x": pop.X[best].tolist(), "y": pop.Y[best].tolist()}
    return summary


def _report(config: RunConfig, states: list[ConceptState], satisficing: list[dict],
            stop_reason: str, progress: list[list[float]], mode: str) -> RunReport:
    per_concept = {s.concept.id: _concept_summary(s, config.woi) for s in states}
    totals = {
        "generations": sum(v["generations"] for v in per_concept.values()),
        "evaluations": sum(v["evaluations"] for v in per_concept.values()),
    }
    return RunReport(
        mode=mode,
        seed=config.effective_seed,
        woi=list(config.woi.limits),
        target_l=config.target_l,
        satisficing=satisficing,
        per_concept=per_concept,
        totals=totals,
        stop_reason=stop_reason,
        progress=progress,
    )


def run_simultaneous(config: RunConfig) -> RunReport:
    """Evolve all concepts together under the category-based allocator."""
    rngs = config.concept_rngs()
    budget = config.total_generation_budget
    states: list[ConceptState] = []
    satisficing: list[dict] = []
    for concept, rng in zip(config.portfolio, rngs):
        state = _init_state(concept, rng, config)
        state.remaining = config.policy.gq0
        states.append(state)
    ledger = _Ledger(states)

    for state in states:
        if len(satisficing) >= config.target_l:
            break
        if detect_satisficing(state):
            satisficing.append({"id": state.concept.id, "generation": state.generation})

    round_no = 0
    while True:
        while (
            len(satisficing) < config.target_l
            and ledger.generations < budget
            and any(s.active and s.remaining > 0 for s in states)
        ):
            for state in states:
                if not (state.active and state.remaining > 0):
                    continue
                if len(satisficing) >= config.target_l or ledger.generations >= budget:
                    break
                _step(state, config)
                ledger.generations += 1
                ledger.record()
                if detect_satisficing(state):
                    satisficing.append({"id": state.concept.id, "generation": state.generation})

        if len(satisficing) >= config.target_l:
            stop_reason = TARGET_REACHED
            break
        if ledger.generations >= budget or not any(s.active for s in states):
            stop_reason = BUDGET_EXHAUSTED
            break
        allocate(states, config.policy)
        round_no += 1
        logger.info(
            "allocation round %d: generations=%d satisficing=%d categories=%s",
            round_no, ledger.generations, len(satisficing),
            {s.concept.id: s.category for s in states if s.active},
        )

    return _report(config, states, satisficing, stop_reason, ledger.progress, "simultaneous")


def run_sequential(config: RunConfig, cap: int | None = None) -> RunReport:
    """Evolve each concept alone, in portfolio order, until it satisfices or hits ``cap``.

    Every concept is processed, so the totals are the worst-case cost of a
    one-at-a-time exploration.
    """
    cap = config.total_generation_budget // config.beta if cap is None else cap
    rngs = config.concept_rngs()
    states: list[ConceptState] = []
    satisficing: list[dict] = []
    progress: list[list[float]] = []
    evals_before = 0
    best_so_far = np.inf
    for concept, rng in zip(config.portfolio, rngs):
        state = _init_state(concept, rng, config)
        states.append(state)
        while True:
            best_so_far = min(best_so_far, state.current_distance)
            progress.append([evals_before + state.population.evaluations, best_so_far])
            if detect_satisficing(state):
                satisficing.append({"id": concept.id, "generation": state.generation})
                break
            if state.generation >= cap:
                state.status = EXHAUSTED
                break
            state.remaining = 1
            _step(state, config)
        evals_before += state.population.evaluations

    stop_reason = TARGET_REACHED if len(satisficing) >= config.target_l else BUDGET_EXHAUSTED
    return _report(config, states, satisficing, stop_reason, progress, "sequential")


def run(config: RunConfig) -> RunReport:
    if config.mode == "sequential":
        return run_sequential(config)
    return run_simultaneous(config)


__all__ = [
    "ACTIVE",
    "BUDGET_EXHAUSTED",
    "RunConfig",
    "RunReport",
    "TARGET_REACHED",
    "detect_satisficing",
    "run",
    "run_sequential",
    "run_simultaneous",
]
