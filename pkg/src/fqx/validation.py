"""Input validation helpers.

Small checks used at the public entry points so that bad degrees or
mismatched universes fail early with a clear message instead of deep
inside a numpy expression.
"""

from __future__ import annotations

import numpy as np

from .errors import DegreeRangeError, UniverseMismatchError


def check_degree(value, name="degree", minimum=0.0):
    """Validate a single membership degree; returns it as float."""
    v = float(value)
    if not (minimum <= v <= 1.0) or np.isnan(v):
        raise DegreeRangeError(f"{name} must lie in [{minimum}, 1], got {value!r}")
    return v


def check_degree_matrix(degrees) -> np.ndarray:
    """Copy into a 2-D float64 array with every entry in [0, 1]."""
    arr = np.array(degrees, dtype=np.float64)
    if arr.ndim != 2:
        raise DegreeRangeError(f"degree matrix must be 2-D, got shape {arr.shape}")
    if arr.size and (np.isnan(arr).any() or arr.min() < 0.0 or arr.max() > 1.0):
        raise DegreeRangeError("degree matrix entries must lie in [0, 1]")
    return arr


def check_degree_vector(values, size=None) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise DegreeRangeError(f"degree vector must be 1-D, got shape {arr.shape}")
    if size is not None and arr.shape[0] != size:
        raise DegreeRangeError(f"degree vector must have length {size}, got {arr.shape[0]}")
    if arr.size and (np.isnan(arr).any() or arr.min() < 0.0 or arr.max() > 1.0):
        raise DegreeRangeError("degree vector entries must lie in [0, 1]")
    return arr


def check_unique_labels(labels, what="labels") -> tuple:
    labels = tuple(str(x) for x in labels)
    if len(set(labels)) != len(labels):
        seen, dupes = set(), set()
        for x in labels:
            if x in seen:
                dupes.add(x)
            seen.add(x)
        raise ValueError(f"duplicate {what}: {sorted(dupes)}")
    return labels


def check_same_universe(universe, expected, what="set"):
    if tuple(universe) != tuple(expected):
        raise UniverseMismatchError(
            f"{what} is defined over a different universe than the context "
            f"({len(universe)} vs {len(expected)} elements)"
        )
