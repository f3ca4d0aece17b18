"""Window-of-interest evolutionary search for satisficing design concepts."""

from .allocation import AllocationPolicy, ConceptState, allocate, categorize, concept_distance, distance_rate
from .benchmarks import (
    AffineTransform,
    Concept,
    TestFunction,
    evaluate_concept,
    evaluate_raw,
    make_concept,
    portfolio_case1,
    portfolio_case2,
)
from .engine import (
    ConceptPopulation,
    GAParams,
    Individual,
    advance_generation,
    assign_crowding,
    assign_ranks,
    evaluate_and_measure,
    reproduce,
    tournament_select,
)
from .estimator import SatisficingConceptSearch
from .objective_space import WindowOfInterest, contains, woi_distance
from .orchestrator import RunConfig, RunReport, detect_satisficing, run, run_sequential, run_simultaneous

__version__ = "0.1.0"

__all__ = [
    "AffineTransform",
    "AllocationPolicy",
    "Concept",
    "ConceptPopulation",
    "ConceptState",
    "GAParams",
    "Individual",
    "RunConfig",
    "RunReport",
    "SatisficingConceptSearch",
    "TestFunction",
    "WindowOfInterest",
    "advance_generation",
    "allocate",
    "assign_crowding",
    "assign_ranks",
    "categorize",
    "concept_distance",
    "contains",
    "detect_satisficing",
    "distance_rate",
    "evaluate_and_measure",
    "evaluate_concept",
    "evaluate_raw",
    "make_concept",
    "portfolio_case1",
    "portfolio_case2",
    "reproduce",
    "run",
    "run_sequential",
    "run_simultaneous",
    "tournament_select",
    "woi_distance",
]
