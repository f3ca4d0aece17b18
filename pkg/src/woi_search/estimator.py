"""Estimator-style front end so the search composes with scikit-learn tooling.

``fit`` takes a portfolio of concepts and runs the search; ``predict`` tells,
for any list of concepts, which of them were found satisficing.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .allocation import AllocationPolicy
from .benchmarks import PORTFOLIOS, check_portfolio
from .engine import GAParams
from .objective_space import WindowOfInterest
from .orchestrator import RunConfig, run


class SatisficingConceptSearch(BaseEstimator):
    """Search a portfolio for concepts with at least one member inside a window.

    Parameters mirror the run-config keys. After ``fit``, ``report_`` holds the
    full :class:`~woi_search.orchestrator.RunReport` and ``satisficing_`` the
    ids found, in detection order.
    """

    def __init__(self, woi=(0.2, 0.5), target_l=1, budget=None, mode="simultaneous",
                 population_size=20, p_c=0.9, p_m=None, eta_c=20.0, eta_m=20.0, n_r=10,
                 gq0=10, quotas=(10, 3, 1), category_sizes="proportional", random_state=0):
        self.woi = woi
        self.target_l = target_l
        self.budget = budget
        self.mode = mode
        self.population_size = population_size
        self.p_c = p_c
        self.p_m = p_m
        self.eta_c = eta_c
        self.eta_m = eta_m
        self.n_r = n_r
        self.gq0 = gq0
        self.quotas = quotas
        self.category_sizes = category_sizes
        self.random_state = random_state

    def _run_config(self, concepts) -> RunConfig:
        sizes = self.category_sizes
        if not isinstance(sizes, str):
            sizes = tuple(sizes)
        return RunConfig(
            portfolio=tuple(concepts),
            woi=WindowOfInterest(tuple(self.woi)),
            target_l=self.target_l,
            total_generation_budget=self.budget,
            ga=GAParams(N=self.population_size, p_c=self.p_c, p_m=self.p_m,
                        eta_c=self.eta_c, eta_m=self.eta_m, n_r=self.n_r),
            policy=AllocationPolicy(self.gq0, tuple(self.quotas), sizes),
            mode=self.mode,
            seed=self.random_state,
        )

    def fit(self, X, y=None):
        """Run the search over ``X``: a list of concepts or a portfolio name."""
        concepts = PORTFOLIOS[X]() if isinstance(X, str) else check_portfolio(X)
        self.report_ = run(self._run_config(concepts))
        self.satisficing_ = self.report_.satisficing_ids
        self.concept_ids_ = [c.id for c in concepts]
        return self

    def predict(self, X) -> np.ndarray:
        """Boolean array: was each concept (or concept id) found satisficing?"""
        if not hasattr(self, "report_"):
            raise NotFittedError("call fit before predict")
        concepts = PORTFOLIOS[X]() if isinstance(X, str) else list(X)
        found = set(self.satisficing_)
        return np.array([getattr(c, "id", c) in found for c in concepts], dtype=bool)

    def fit_predict(self, X, y=None) -> np.ndarray:
        return self.fit(X).predict(X)

    def concept_distances(self) -> dict[str, float]:
        """Closest window distance reached by each concept."""
        if not hasattr(self, "report_"):
            raise NotFittedError("call fit first")
        return {cid: info["trajectory"][-1][2] for cid, info in self.report_.per_concept.items()}
