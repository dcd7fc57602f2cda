"""Polynomial acyclicity constraint for nonnegative edge-probability masks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class ConstraintValue:
    h: float
    grad: np.ndarray


def h_poly(a) -> ConstraintValue:
    """Constraint value h(A) = tr((I + A/d)^d) - d and its gradient.

    Requires an entrywise-nonnegative input (an edge-probability mask, not a
    raw weight matrix); then h >= 0 with equality iff the support is acyclic.
    The gradient is ((I + A/d)^(d-1))^T.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if np.any(a < 0):
        raise ValueError("h_poly requires nonnegative entries; pass a mask, not raw weights")
    d = a.shape[0]
    m = np.eye(d) + a / d
    p = np.linalg.matrix_power(m, d - 1)
    h = float(np.einsum("ij,ji->", p, m)) - d
    return ConstraintValue(h=h, grad=p.T.copy())


def h_converged(a, tol=1e-8) -> bool:
    """True iff h_poly(a) is below ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return h_poly(a).h < tol
