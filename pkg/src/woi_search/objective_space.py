"""Window-of-interest geometry in objective space.

The window is an axis-aligned box that is unbounded below: a performance
vector ``y`` is acceptable when ``y[k] <= limits[k]`` for every objective.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_vector


@dataclass(frozen=True)
class WindowOfInterest:
    """Upper limits (minimization sense), one per objective."""

    limits: tuple[float, ...]

    def __post_init__(self):
        limits = check_vector(self.limits, "limits")
        if limits.size == 0:
            raise ValueError("limits must have at least one entry")
        object.__setattr__(self, "limits", tuple(float(v) for v in limits))

    @property
    def n_o(self) -> int:
        return len(self.limits)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.limits, dtype=float)

    def contains(self, y) -> bool | np.ndarray:
        return contains(self, y)

    def distance(self, y) -> float | np.ndarray:
        return woi_distance(self, y)


def _check_points(woi: WindowOfInterest, y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.ndim not in (1, 2) or y.shape[-1] != woi.n_o:
        raise ValueError(
            f"performance vector has shape {y.shape}, expected last dimension {woi.n_o}"
        )
    return y


def contains(woi: WindowOfInterest, y) -> bool | np.ndarray:
    """Closed-box membership. Accepts one vector or a 2-D batch (one row per point)."""
    y = _check_points(woi, y)
    inside = np.all(y <= woi.as_array(), axis=-1)
    return bool(inside) if y.ndim == 1 else inside


def woi_distance(woi: WindowOfInterest, y) -> float | np.ndarray:
    """Euclidean distance from ``y`` to the window; zero exactly when inside.

    The nearest box point is the componentwise ``min(y, limits)``, so only the
    positive excess over each limit contributes.
    """
    y = _check_points(woi, y)
    excess = np.maximum(y - woi.as_array(), 0.0)
    d = np.sqrt(np.sum(excess * excess, axis=-1))
    return float(d) if y.ndim == 1 else d
