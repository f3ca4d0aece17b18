import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import band_ranks, cuboid_crowding
from woi_search.benchmarks import make_concept
from woi_search.engine import (
    ConceptPopulation,
    GAParams,
    advance_generation,
    assign_crowding,
    assign_ranks,
    crowding_distances,
    elite_order,
    evaluate_and_measure,
    polynomial_mutation,
    prepare,
    random_population,
    rank_distances,
    reproduce,
    sbx,
    tournament_select,
    tournament_winner,
)
from woi_search.objective_space import WindowOfInterest

ZDT1 = make_concept("ZDT1", "ZDT1")


def one_member(head=0.25):
    x = np.zeros(30)
    x[0] = head
    return ConceptPopulation(ZDT1, x[None, :])


# --- evaluation -----------------------------------------------------------

def test_evaluate_on_window_boundary():
    pop = evaluate_and_measure(one_member(), WindowOfInterest((0.5, 0.5)))
    assert pop.distance[0] == 0.0
    assert pop.evaluations == 1


def test_evaluate_corner_distance():
    pop = evaluate_and_measure(one_member(), WindowOfInterest((0.2, 0.2)))
    assert pop.distance[0] == pytest.approx(math.sqrt(0.05**2 + 0.3**2), abs=1e-12)
    assert pop.distance[0] == pytest.approx(0.30414, abs=1e-5)


def test_evaluate_is_idempotent(counting_concept):
    concept = counting_concept()
    pop = random_population(concept, 6, np.random.default_rng(0))
    woi = WindowOfInterest((0.5, 0.5))
    evaluate_and_measure(pop, woi)
    first = pop.distance.copy()
    evaluate_and_measure(pop, woi)
    np.testing.assert_array_equal(pop.distance, first)
    assert pop.evaluations == 6 == concept.function.calls


def test_members_view():
    pop = prepare(random_population(ZDT1, 4, np.random.default_rng(1)), WindowOfInterest((0.5, 0.5)),
                  GAParams(N=4))
    members = pop.members
    assert len(members) == 4
    for i, m in enumerate(members):
        np.testing.assert_array_equal(m.y, ZDT1.evaluate(m.x))
        assert m.distance == pop.distance[i]
        assert 1 <= m.rank <= 10


# --- ranking --------------------------------------------------------------

@pytest.mark.parametrize("distances, n_r, expected", [
    ([0.0, 0.5, 1.0], 2, [1, 2, 2]),
    ([0.7, 0.7, 0.7], 10, [1, 1, 1]),
    ([0.0, 0.09, 0.11, 0.2], 2, [1, 1, 2, 2]),
])
def test_rank_examples(distances, n_r, expected):
    assert rank_distances(distances, n_r).tolist() == expected
    assert band_ranks(distances, n_r) == expected


def test_assign_ranks_on_population():
    pop = ConceptPopulation(ZDT1, np.zeros((3, 30)), distance=np.array([0.0, 0.5, 1.0]))
    assert assign_ranks(pop, 2).rank.tolist() == [1, 2, 2]


distance_lists = st.lists(st.floats(0, 10, allow_nan=False), min_size=1, max_size=40)


@given(distance_lists, st.integers(1, 20))
def test_rank_matches_oracle_and_bounds(distances, n_r):
    ranks = rank_distances(distances, n_r)
    assert ranks.tolist() == band_ranks(distances, n_r)
    assert ranks.min() >= 1 and ranks.max() <= n_r
    assert ranks[int(np.argmin(distances))] == 1
    order = np.argsort(distances, kind="stable")
    assert np.all(np.diff(ranks[order]) >= 0)


# --- crowding -------------------------------------------------------------

def test_crowding_examples():
    assert crowding_distances([[0.3, 0.3]], [1]).tolist() == [math.inf]
    assert crowding_distances([[0, 1], [1, 0]], [1, 1]).tolist() == [math.inf, math.inf]
    crowd = crowding_distances([[0, 1], [0.5, 0.5], [1, 0]], [1, 1, 1])
    assert crowd.tolist() == [math.inf, 2.0, math.inf]


def test_crowding_is_per_rank_class():
    Y = [[0, 1], [0.5, 0.5], [1, 0], [5, 5]]
    crowd = crowding_distances(Y, [1, 1, 1, 2])
    assert crowd.tolist() == [math.inf, 2.0, math.inf, math.inf]


points = st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=1, max_size=30)


@given(points)
def test_crowding_matches_oracle(pts):
    ours = crowding_distances(pts, np.ones(len(pts), dtype=int))
    ref = cuboid_crowding(pts)
    np.testing.assert_allclose(ours, ref, rtol=1e-12, atol=1e-12)


@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=3, max_size=30, unique=True))
def test_crowding_infinity_only_at_extremes(pts):
    crowd = crowding_distances(pts, np.ones(len(pts), dtype=int))
    n_inf = int(np.isinf(crowd).sum())
    assert 2 <= n_inf <= 4
    Y = np.asarray(pts)
    for k in range(2):
        order = np.argsort(Y[:, k], kind="stable")
        assert np.isinf(crowd[order[0]]) and np.isinf(crowd[order[-1]])


# --- selection ------------------------------------------------------------

def test_lower_rank_always_wins():
    rng = np.random.default_rng(0)
    rank = np.array([1, 3])
    crowd = np.array([0.0, math.inf])
    a = np.zeros(1000, dtype=int)
    b = np.ones(1000, dtype=int)
    assert np.all(tournament_winner(rank, crowd, a, b, rng) == 0)
    assert np.all(tournament_winner(rank, crowd, b, a, rng) == 0)


def test_larger_crowding_wins_on_equal_rank():
    rng = np.random.default_rng(0)
    rank = np.array([2, 2])
    crowd = np.array([math.inf, 0.4])
    a = np.zeros(1000, dtype=int)
    b = np.ones(1000, dtype=int)
    assert np.all(tournament_winner(rank, crowd, b, a, rng) == 0)


def test_full_tie_is_a_fair_coin():
    rng = np.random.default_rng(123)
    rank = np.array([1, 1])
    crowd = np.array([0.5, 0.5])
    a = np.zeros(10_000, dtype=int)
    b = np.ones(10_000, dtype=int)
    freq = np.mean(tournament_winner(rank, crowd, a, b, rng) == 0)
    assert abs(freq - 0.5) <= 0.05


def test_tournament_select_count_and_pressure():
    pop = ConceptPopulation(ZDT1, np.zeros((4, 30)))
    pop.rank = np.array([1, 2, 3, 4])
    pop.crowding = np.zeros(4)
    picked = tournament_select(pop, 4000, np.random.default_rng(0))
    assert len(picked) == 4000
    counts = np.bincount(picked, minlength=4) / 4000
    # binary tournament with replacement: P(win_i) = (2(n - i) - 1) / n^2 for sorted i = 0..n-1
    np.testing.assert_allclose(counts, [7 / 16, 5 / 16, 3 / 16, 1 / 16], atol=0.03)


# --- variation ------------------------------------------------------------

def test_no_variation_copies_parents():
    rng = np.random.default_rng(0)
    parents = rng.random((6, 30))
    kids = reproduce(parents, GAParams(N=6, p_c=0.0, p_m=0.0), np.zeros(30), np.ones(30), rng)
    np.testing.assert_array_equal(kids, parents)


def test_full_mutation_stays_in_box():
    rng = np.random.default_rng(1)
    parents = rng.random((20, 30))
    parents[:2] = 0.0
    parents[2:4] = 1.0
    kids = reproduce(parents, GAParams(N=20, p_m=1.0), np.zeros(30), np.ones(30), rng)
    assert kids.min() >= 0.0 and kids.max() <= 1.0
    assert not np.array_equal(kids, parents)


@given(st.floats(0.5, 100), st.integers(0, 2**31))
def test_sbx_identical_parents(eta, seed):
    rng = np.random.default_rng(seed)
    p = rng.random((3, 10))
    c1, c2 = sbx(p, p.copy(), eta, np.zeros(10), np.ones(10), rng)
    np.testing.assert_array_equal(c1, p)
    np.testing.assert_array_equal(c2, p)


@settings(max_examples=50)
@given(st.integers(0, 2**31))
def test_sbx_preserves_midpoint_inside_box(seed):
    rng = np.random.default_rng(seed)
    # parents far from the bounds so no child needs clipping in practice
    p1 = 0.4 + 0.2 * rng.random((4, 8))
    p2 = 0.4 + 0.2 * rng.random((4, 8))
    c1, c2 = sbx(p1, p2, 20.0, np.full(8, -100.0), np.full(8, 100.0), rng)
    np.testing.assert_allclose(c1 + c2, p1 + p2, atol=1e-12)


def test_sbx_spread_distribution():
    # for unbounded SBX, P(beta <= b) = 0.5 * b**(eta+1) when b <= 1
    rng = np.random.default_rng(7)
    eta = 2.0
    m = 200_000
    p1 = np.full((m, 1), 0.49)
    p2 = np.full((m, 1), 0.51)
    c1, c2 = sbx(p1, p2, eta, np.array([-1e6]), np.array([1e6]), rng)
    crossed = c1[:, 0] != p1[:, 0]
    beta = np.abs(c1 - c2)[crossed, 0] / 0.02
    for b in (0.3, 0.6, 0.9):
        assert np.mean(beta <= b) == pytest.approx(0.5 * b ** (eta + 1), abs=0.01)


def test_polynomial_mutation_bounds_and_rate():
    rng = np.random.default_rng(3)
    X = rng.random((500, 30))
    out = polynomial_mutation(X, 1 / 30, 20.0, np.zeros(30), np.ones(30), rng)
    changed = np.mean(out != X)
    assert changed == pytest.approx(1 / 30, abs=0.005)
    assert out.min() >= 0 and out.max() <= 1


def test_reproduce_rejects_odd_parent_count():
    with pytest.raises(ValueError):
        reproduce(np.zeros((3, 30)), GAParams(N=4), np.zeros(30), np.ones(30), np.random.default_rng())


# --- generation step ------------------------------------------------------

def test_elite_order_keeps_closest_member_first():
    rank = np.array([1, 1, 1, 1, 2])
    crowd = np.array([math.inf, math.inf, 0.1, 0.2, math.inf])
    dist = np.array([0.5, 0.6, 0.05, 0.55, 3.0])
    order = elite_order(rank, crowd, dist)
    assert order[0] == 2
    assert order[:2].tolist() == [2, 0]


def _fresh_pop(seed, N=20, concept=ZDT1, woi=WindowOfInterest((0.5, 0.5))):
    params = GAParams(N=N)
    rng = np.random.default_rng(seed)
    pop = prepare(random_population(concept, N, rng), woi, params)
    return pop, params, rng, woi


def test_advance_generation_contract():
    pop, params, rng, woi = _fresh_pop(0)
    before = pop.min_distance
    advance_generation(pop, woi, params, rng)
    assert len(pop) == params.N
    assert pop.generation == 1
    assert pop.min_distance <= before
    assert pop.evaluations == 2 * params.N
    np.testing.assert_array_equal(pop.Y, ZDT1.evaluate(pop.X))


def test_advance_generation_deterministic():
    results = []
    for _ in range(2):
        pop, params, rng, woi = _fresh_pop(42)
        for _ in range(5):
            advance_generation(pop, woi, params, rng)
        results.append(pop.X.copy())
    assert results[0].tobytes() == results[1].tobytes()


def test_advance_counts_only_offspring(counting_concept):
    concept = counting_concept()
    pop, params, rng, woi = _fresh_pop(3, N=10, concept=concept)
    for _ in range(7):
        advance_generation(pop, woi, params, rng)
    assert pop.evaluations == concept.function.calls == 10 + 7 * 10


@pytest.mark.parametrize("kwargs", [
    {"N": 3}, {"N": 0}, {"p_c": 1.5}, {"p_m": -0.1}, {"n_r": 0}, {"eta_c": 0}, {"tournament_size": 0},
])
def test_gaparams_validation(kwargs):
    with pytest.raises(ValueError):
        GAParams(**kwargs)


def test_default_mutation_rate_is_one_over_n():
    assert GAParams().mutation_probability(30) == pytest.approx(1 / 30)
    assert GAParams(p_m=0.2).mutation_probability(30) == 0.2


def test_assign_crowding_uses_ranks():
    pop = ConceptPopulation(ZDT1, np.zeros((3, 30)), Y=np.array([[0, 1], [0.5, 0.5], [1, 0.0]]))
    pop.rank = np.array([1, 1, 1])
    assert assign_crowding(pop).crowding.tolist() == [math.inf, 2.0, math.inf]
