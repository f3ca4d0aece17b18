"""Per-concept evolution driven by distance to the window of interest.

Members are ranked by how far their performance vectors lie from the window
(coarse distance bands rather than Pareto fronts), crowding breaks ties inside
a band, and the next generation is the elite of parents plus offspring.
Populations are stored column-wise as numpy arrays; :class:`Individual` is a
read-only view for callers that prefer records.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_int, check_positive, check_probability
from .benchmarks import Concept
from .objective_space import WindowOfInterest, woi_distance

_SBX_EPS = 1.0e-14


@dataclass(frozen=True)
class GAParams:
    """Operator settings. ``p_m=None`` means ``1 / n_var`` of the concept."""

    N: int = 20
    p_c: float = 0.9
    p_m: float | None = None
    eta_c: float = 20.0
    eta_m: float = 20.0
    n_r: int = 10
    tournament_size: int = 2
    rng_seed: int = 0

    def __post_init__(self):
        check_int(self.N, "N", minimum=2)
        if self.N % 2:
            raise ValueError(f"N must be even, got {self.N}")
        check_probability(self.p_c, "p_c")
        if self.p_m is not None:
            check_probability(self.p_m, "p_m")
        check_positive(self.eta_c, "eta_c")
        check_positive(self.eta_m, "eta_m")
        check_int(self.n_r, "n_r", minimum=1)
        check_int(self.tournament_size, "tournament_size", minimum=1)
        check_int(self.rng_seed, "rng_seed")

    def mutation_probability(self, n_var: int) -> float:
        return 1.0 / n_var if self.p_m is None else self.p_m


@dataclass(frozen=True)
class Individual:
    x: np.ndarray
    y: np.ndarray
    distance: float
    rank: int
    crowding: float


@dataclass
class ConceptPopulation:
    """Population of one concept. Unevaluated rows carry NaN in ``Y``."""

    concept: Concept
    X: np.ndarray
    Y: np.ndarray = None
    distance: np.ndarray = None
    rank: np.ndarray = None
    crowding: np.ndarray = None
    generation: int = 0
    evaluations: int = 0

    def __post_init__(self):
        self.X = np.atleast_2d(np.asarray(self.X, dtype=float))
        size = len(self.X)
        if self.Y is None:
            self.Y = np.full((size, 0), np.nan)
        if self.distance is None:
            self.distance = np.full(size, np.nan)
        if self.rank is None:
            self.rank = np.zeros(size, dtype=int)
        if self.crowding is None:
            self.crowding = np.zeros(size)

    def __len__(self) -> int:
        return len(self.X)

    @property
    def members(self) -> list[Individual]:
        return [
            Individual(self.X[i].copy(), self.Y[i].copy(), float(self.distance[i]),
                       int(self.rank[i]), float(self.crowding[i]))
            for i in range(len(self))
        ]

    @property
    def min_distance(self) -> float:
        return float(np.min(self.distance))

    def best_index(self) -> int:
        return int(np.argmin(self.distance))


def random_population(concept: Concept, size: int, rng: np.random.Generator) -> ConceptPopulation:
    lo, hi = concept.lower, concept.upper
    X = lo + rng.random((size, concept.n_var)) * (hi - lo)
    return ConceptPopulation(concept, X)


def evaluate_and_measure(pop: ConceptPopulation, woi: WindowOfInterest) -> ConceptPopulation:
    """Evaluate rows whose performance vector is still unset, then refresh distances."""
    if pop.Y.shape[1] != woi.n_o:
        pop.Y = np.full((len(pop), woi.n_o), np.nan)
    fresh = np.isnan(pop.Y).any(axis=1)
    if fresh.any():
        pop.Y[fresh] = pop.concept.evaluate(pop.X[fresh])
        pop.evaluations += int(fresh.sum())
    pop.distance = woi_distance(woi, pop.Y)
    return pop


def rank_distances(distance, n_r: int) -> np.ndarray:
    """Band index of each distance: ``floor((d - d_min) / delta + 1)`` clipped to ``[1, n_r]``.

    ``delta = (d_max - d_min) / n_r``; when every distance is equal all ranks are 1.
    """
    d = np.asarray(distance, dtype=float)
    d_min, d_max = d.min(), d.max()
    if d_max == d_min:
        return np.ones(d.shape, dtype=int)
    delta = (d_max - d_min) / n_r
    ranks = np.floor((d - d_min) / delta + 1.0).astype(int)
    return np.clip(ranks, 1, n_r)


def assign_ranks(pop: ConceptPopulation, n_r: int) -> ConceptPopulation:
    pop.rank = rank_distances(pop.distance, n_r)
    return pop


def crowding_distances(Y, ranks) -> np.ndarray:
    """Cuboid crowding distance computed separately inside each rank class."""
    Y = np.asarray(Y, dtype=float)
    ranks = np.asarray(ranks)
    crowd = np.zeros(len(Y))
    for r in np.unique(ranks):
        idx = np.flatnonzero(ranks == r)
        if len(idx) <= 2:
            crowd[idx] = np.inf
            continue
        for k in range(Y.shape[1]):
            vals = Y[idx, k]
            order = np.argsort(vals, kind="stable")
            span = vals[order[-1]] - vals[order[0]]
            if span > 0:
                gaps = (vals[order[2:]] - vals[order[:-2]]) / span
                crowd[idx[order[1:-1]]] += gaps
            crowd[idx[order[0]]] = np.inf
            crowd[idx[order[-1]]] = np.inf
    return crowd


def assign_crowding(pop: ConceptPopulation) -> ConceptPopulation:
    pop.crowding = crowding_distances(pop.Y, pop.rank)
    return pop


def tournament_winner(rank, crowding, a, b, rng) -> np.ndarray:
    """Vectorised lexicographic comparison; returns the winner of each pair."""
    a_wins = (rank[a] < rank[b]) | ((rank[a] == rank[b]) & (crowding[a] > crowding[b]))
    b_wins = (rank[b] < rank[a]) | ((rank[a] == rank[b]) & (crowding[b] > crowding[a]))
    coin = rng.random(len(a)) < 0.5
    return np.where(a_wins, a, np.where(b_wins, b, np.where(coin, a, b)))


def tournament_select(pop: ConceptPopulation, count: int, rng: np.random.Generator,
                      tournament_size: int = 2) -> np.ndarray:
    """Indices of ``count`` parents picked by lexicographic (rank, crowding) tournaments."""
    size = len(pop)
    winners = rng.integers(size, size=count)
    for _ in range(tournament_size - 1):
        challengers = rng.integers(size, size=count)
        winners = tournament_winner(pop.rank, pop.crowding, winners, challengers, rng)
    return winners


def sbx(P1: np.ndarray, P2: np.ndarray, eta: float, lower: np.ndarray,
        upper: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Bounded simulated binary crossover, row by row over two parent matrices.

    Each variable is crossed with probability 0.5 when the parents differ; the
    two children are then assigned to either side at random.
    """
    P1 = np.atleast_2d(np.asarray(P1, dtype=float))
    P2 = np.atleast_2d(np.asarray(P2, dtype=float))
    C1, C2 = P1.copy(), P2.copy()
    cross = rng.random(P1.shape) <= 0.5
    u = rng.random(P1.shape)
    side = rng.random(P1.shape) <= 0.5
    cross &= np.abs(P1 - P2) > _SBX_EPS
    if not cross.any():
        return C1, C2

    lo = np.broadcast_to(lower, P1.shape)[cross]
    hi = np.broadcast_to(upper, P1.shape)[cross]
    y1 = np.minimum(P1, P2)[cross]
    y2 = np.maximum(P1, P2)[cross]
    r = u[cross]
    spread = y2 - y1
    expo = 1.0 / (eta + 1.0)

    def betaq(beta):
        alpha = 2.0 - beta ** -(eta + 1.0)
        return np.where(r <= 1.0 / alpha,
                        (r * alpha) ** expo,
                        (1.0 / (2.0 - r * alpha)) ** expo)

    child_lo = 0.5 * ((y1 + y2) - betaq(1.0 + 2.0 * (y1 - lo) / spread) * spread)
    child_hi = 0.5 * ((y1 + y2) + betaq(1.0 + 2.0 * (hi - y2) / spread) * spread)
    child_lo = np.clip(child_lo, lo, hi)
    child_hi = np.clip(child_hi, lo, hi)
    flip = side[cross]
    C1[cross] = np.where(flip, child_hi, child_lo)
    C2[cross] = np.where(flip, child_lo, child_hi)
    return C1, C2


def polynomial_mutation(X: np.ndarray, p_m: float, eta: float, lower: np.ndarray,
                        upper: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Bounded polynomial mutation applied independently to each variable."""
    X = X.copy()
    mask = rng.random(X.shape) < p_m
    u = rng.random(X.shape)
    if not mask.any():
        return X
    lo = np.broadcast_to(lower, X.shape)
    hi = np.broadcast_to(upper, X.shape)
    span = hi - lo
    y = X[mask]
    yl, yu, width, r = lo[mask], hi[mask], span[mask], u[mask]
    delta1 = (y - yl) / width
    delta2 = (yu - y) / width
    power = 1.0 / (eta + 1.0)
    left = r <= 0.5
    xy = np.where(left, 1.0 - delta1, 1.0 - delta2)
    val = np.where(
        left,
        2.0 * r + (1.0 - 2.0 * r) * xy ** (eta + 1.0),
        2.0 * (1.0 - r) + 2.0 * (r - 0.5) * xy ** (eta + 1.0),
    )
    deltaq = np.where(left, val**power - 1.0, 1.0 - val**power)
    X[mask] = np.clip(y + deltaq * width, yl, yu)
    return X


def reproduce(parents: np.ndarray, params: GAParams, lower, upper,
              rng: np.random.Generator) -> np.ndarray:
    """Offspring design vectors from consecutive parent pairs, clipped to the box."""
    parents = np.asarray(parents, dtype=float)
    if len(parents) % 2:
        raise ValueError("reproduce needs an even number of parents")
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    children = parents.copy()
    pairs = np.flatnonzero(rng.random(len(parents) // 2) < params.p_c) * 2
    if len(pairs):
        children[pairs], children[pairs + 1] = sbx(
            parents[pairs], parents[pairs + 1], params.eta_c, lower, upper, rng
        )
    p_m = params.mutation_probability(parents.shape[1])
    if p_m > 0:
        children = polynomial_mutation(children, p_m, params.eta_m, lower, upper, rng)
    return np.clip(children, lower, upper)


def elite_order(rank, crowding, distance) -> np.ndarray:
    """Indices sorted best-first by rank, crowding (desc), distance, then position.

    The single closest member (first by position on ties) is placed first so
    that truncation can never lose it.
    """
    n = len(rank)
    best = np.zeros(n, dtype=bool)
    best[int(np.argmin(distance))] = True
    position = np.arange(n)
    # np.lexsort sorts by the last key first
    return np.lexsort((position, distance, -crowding, rank, ~best))


def prepare(pop: ConceptPopulation, woi: WindowOfInterest, params: GAParams) -> ConceptPopulation:
    evaluate_and_measure(pop, woi)
    assign_ranks(pop, params.n_r)
    return assign_crowding(pop)


def advance_generation(pop: ConceptPopulation, woi: WindowOfInterest, params: GAParams,
                       rng: np.random.Generator) -> ConceptPopulation:
    """One generation: tournament, variation, union, re-rank and elite truncation."""
    size = len(pop)
    concept = pop.concept
    picked = tournament_select(pop, size, rng, params.tournament_size)
    offspring_X = reproduce(pop.X[picked], params, concept.lower, concept.upper, rng)

    union = ConceptPopulation(
        concept,
        np.vstack([pop.X, offspring_X]),
        Y=np.vstack([pop.Y, np.full((size, woi.n_o), np.nan)]),
        generation=pop.generation,
        evaluations=pop.evaluations,
    )
    prepare(union, woi, params)
    keep = elite_order(union.rank, union.crowding, union.distance)[:size]

    pop.X = union.X[keep]
    pop.Y = union.Y[keep]
    pop.distance = union.distance[keep]
    pop.evaluations = union.evaluations
    pop.generation += 1
    # ranks and crowding are recomputed on the survivors for the next tournament
    assign_ranks(pop, params.n_r)
    assign_crowding(pop)
    return pop
