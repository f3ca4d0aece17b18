"""Category-based distribution of generation quotas across concepts.

Concepts whose closest member approaches the window fastest are put in the
first category and receive the largest quota for the next round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_int
from .benchmarks import Concept
from .engine import ConceptPopulation

ACTIVE = "active"
SATISFICING = "satisficing"
EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class AllocationPolicy:
    """Warm-up quota, per-category quotas and category sizes.

    ``category_sizes="proportional"`` splits the active concepts 25/50/25 for
    three categories (evenly otherwise) with the middle absorbing rounding.
    Explicit sizes are used as given when they match the number of active
    concepts and as proportions when they do not.
    """

    gq0: int = 10
    quotas: tuple[int, ...] = (10, 3, 1)
    category_sizes: str | tuple[int, ...] = "proportional"

    def __post_init__(self):
        check_int(self.gq0, "gq0", minimum=1)
        quotas = tuple(check_int(q, "quotas[i]", minimum=1) for q in self.quotas)
        if not quotas:
            raise ValueError("quotas must not be empty")
        if any(a <= b for a, b in zip(quotas, quotas[1:])):
            raise ValueError(f"quotas must be strictly decreasing, got {list(quotas)}")
        object.__setattr__(self, "quotas", quotas)
        if isinstance(self.category_sizes, str):
            if self.category_sizes != "proportional":
                raise ValueError("category_sizes must be 'proportional' or a list of integers")
        else:
            sizes = tuple(check_int(s, "category_sizes[i]", minimum=0) for s in self.category_sizes)
            if len(sizes) != len(quotas):
                raise ValueError("category_sizes and quotas must have the same length")
            if sum(sizes) == 0:
                raise ValueError("category_sizes must not all be zero")
            object.__setattr__(self, "category_sizes", sizes)

    @property
    def n_cat(self) -> int:
        return len(self.quotas)

    def sizes_for(self, n_active: int) -> tuple[int, ...]:
        if n_active == 0:
            return (0,) * self.n_cat
        if isinstance(self.category_sizes, tuple):
            if sum(self.category_sizes) == n_active:
                return self.category_sizes
            weights = np.asarray(self.category_sizes, dtype=float)
            fractions = weights / weights.sum()
        elif self.n_cat == 3:
            fractions = np.array([0.25, 0.5, 0.25])
        else:
            fractions = np.full(self.n_cat, 1.0 / self.n_cat)
        return _split(n_active, fractions)


def _split(n: int, fractions: np.ndarray) -> tuple[int, ...]:
    """Round each share half-up; category 1 always gets at least one concept."""
    sizes = [math.floor(n * f + 0.5) for f in fractions]
    sizes[0] = max(sizes[0], 1)
    middle = len(sizes) // 2 if len(sizes) > 1 else 0
    sizes[middle] = max(sizes[middle] + n - sum(sizes), 0)
    # still too many: trim from the tail, never emptying category 1
    for i in reversed(range(1, len(sizes))):
        excess = sum(sizes) - n
        if excess <= 0:
            break
        sizes[i] -= min(excess, sizes[i])
    sizes[0] -= max(sum(sizes) - n, 0)
    return tuple(sizes)


@dataclass
class ConceptState:
    """Bookkeeping for one concept across allocation rounds."""

    concept: Concept
    population: ConceptPopulation
    rng: np.random.Generator | None = None
    remaining: int = 0
    category: int = 0
    distance_history: list[tuple[int, float]] = field(default_factory=list)
    status: str = ACTIVE
    block_start: int = 0
    detected_generation: int | None = None

    @property
    def generation(self) -> int:
        return self.population.generation

    @property
    def current_distance(self) -> float:
        if self.distance_history:
            return self.distance_history[-1][1]
        return self.population.min_distance

    @property
    def active(self) -> bool:
        return self.status == ACTIVE

    def start_block(self) -> None:
        self.block_start = max(len(self.distance_history) - 1, 0)


def concept_distance(state: ConceptState) -> float:
    """Closest member's window distance; recorded once per generation."""
    d = state.population.min_distance
    g = state.population.generation
    if state.distance_history and state.distance_history[-1][0] == g:
        state.distance_history[-1] = (g, d)
    else:
        state.distance_history.append((g, d))
    if d == 0.0 and state.status == ACTIVE:
        state.status = SATISFICING
    return d


def distance_rate(state: ConceptState) -> float:
    """Average per-generation change of the concept distance over the latest block."""
    block = state.distance_history[state.block_start:]
    if len(block) < 2:
        return 0.0
    (g0, d0), (g1, d1) = block[0], block[-1]
    if g1 == g0:
        return 0.0
    return (d1 - d0) / (g1 - g0)


def categorize(states: list[ConceptState], policy: AllocationPolicy) -> list[tuple[str, int]]:
    """Sort active concepts by rate (ties: current distance, then index) and bin them."""
    active = [(i, s) for i, s in enumerate(states) if s.active]
    keyed = sorted(active, key=lambda item: (distance_rate(item[1]), item[1].current_distance, item[0]))
    sizes = policy.sizes_for(len(keyed))
    out = []
    pos = 0
    for cat, size in enumerate(sizes, start=1):
        for _, state in keyed[pos:pos + size]:
            out.append((state.concept.id, cat))
        pos += size
    return out


def allocate(states: list[ConceptState], policy: AllocationPolicy) -> list[ConceptState]:
    """Hand out the next round of quotas. Every active concept must have used its last one."""
    busy = [s.concept.id for s in states if s.active and s.remaining > 0]
    if busy:
        raise RuntimeError(f"allocation requested while concepts still hold quota: {busy}")
    categories = dict(categorize(states, policy))
    for state in states:
        if state.active:
            state.category = categories[state.concept.id]
            state.remaining = policy.quotas[state.category - 1]
            state.start_block()
        else:
            state.remaining = 0
    return states
