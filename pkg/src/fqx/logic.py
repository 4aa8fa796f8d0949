"""Residuated implications and s-norms on the unit interval.

All operators accept scalars or numpy arrays (broadcasting elementwise)
and return values in [0, 1].  Each implication is the residuum of a
left-continuous t-norm, so ``a -> b == 1`` exactly when ``a <= b``; that
property is what makes the derivation operators a Galois connection.
"""

from __future__ import annotations

import numpy as np

GODEL = "godel"
LUKASIEWICZ = "lukasiewicz"
GOGUEN = "goguen"


def godel_implication(a, b):
    """Residuum of min: 1 where a <= b, else b."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.where(a <= b, 1.0, b)


def lukasiewicz_implication(a, b):
    """Residuum of the bounded-difference t-norm: min(1, 1 - a + b)."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.minimum(1.0, 1.0 - a + b)


def goguen_implication(a, b):
    """Residuum of the product t-norm: 1 where a <= b, else b / a."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    # The division branch is only selected where a > b >= 0, hence a > 0.
    safe = np.where(a > 0.0, a, 1.0)
    return np.where(a <= b, 1.0, b / safe)


IMPLICATIONS = {
    GODEL: godel_implication,
    LUKASIEWICZ: lukasiewicz_implication,
    GOGUEN: goguen_implication,
}


def implication(name: str):
    try:
        return IMPLICATIONS[name]
    except KeyError:
        raise ValueError(
            f"unknown implication {name!r}; choose from {sorted(IMPLICATIONS)}"
        ) from None


def snorm_max(values: np.ndarray) -> float:
    return float(np.max(values)) if len(values) else 0.0


def snorm_probabilistic(values: np.ndarray) -> float:
    out = 0.0
    for v in np.asarray(values, dtype=float):
        out = out + v - out * v
    return float(out)


def snorm_bounded(values: np.ndarray) -> float:
    return float(min(1.0, np.sum(values))) if len(values) else 0.0


SNORMS = {
    "max": snorm_max,
    "prob_sum": snorm_probabilistic,
    "bounded_sum": snorm_bounded,
}


def snorm(name: str):
    try:
        return SNORMS[name]
    except KeyError:
        raise ValueError(f"unknown s-norm {name!r}; choose from {sorted(SNORMS)}") from None
