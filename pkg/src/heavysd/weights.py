"""Weight vectors on the open simplex and the majorization order."""
from __future__ import annotations

import numpy as np

SUM_TOL = 1e-12


def as_weights(theta, n: int | None = None) -> np.ndarray:
    """Validate ``theta`` as a point of the open simplex and return it as an array.

    Raises ``ValueError`` if any entry is non-positive, if the entries do not
    sum to one within 1e-12, or if ``n`` is given and the length differs.
    """
    w = np.asarray(theta, dtype=float).ravel()
    if w.size == 0:
        raise ValueError("empty weight vector")
    if n is not None and w.size != n:
        raise ValueError(f"expected {n} weights, got {w.size}")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise ValueError(f"weights must be strictly positive, got {w.tolist()}")
    if abs(w.sum() - 1.0) > SUM_TOL:
        raise ValueError(f"weights must sum to 1 (got {w.sum()!r})")
    return w


def is_majorized_by(gamma, eta, tol: float = 1e-12) -> bool:
    """True when ``gamma`` is majorized by ``eta``: equal sums and every
    partial sum of the ascending order statistics of ``gamma`` at least the
    corresponding partial sum for ``eta``."""
    g = np.sort(np.asarray(gamma, dtype=float))
    e = np.sort(np.asarray(eta, dtype=float))
    if g.shape != e.shape:
        return False
    if abs(g.sum() - e.sum()) > tol:
        return False
    return bool(np.all(np.cumsum(g)[:-1] >= np.cumsum(e)[:-1] - tol))
