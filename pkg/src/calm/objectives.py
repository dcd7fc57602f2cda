"""Score functions and their analytic gradients.

All losses accept either a plain d x d covariance matrix or a
``CovarianceInput``; the least-squares loss additionally evaluates directly
on samples, where it coincides with the covariance form built from the
uncentered (1/n) X^T X.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .simulate import CovarianceInput


@dataclass
class ObjectiveValue:
    value: float
    grad_b: np.ndarray
    grad_omega: np.ndarray | None = None


def _as_covariance(inp) -> np.ndarray:
    if isinstance(inp, CovarianceInput):
        return inp.covariance()
    return np.asarray(inp, dtype=float)


def check_sigma(sigma: np.ndarray) -> np.ndarray:
    """Reject covariance matrices that are unusable for structure learning."""
    sigma = np.asarray(sigma, dtype=float)
    if not np.all(np.isfinite(sigma)):
        raise ValueError("covariance contains non-finite entries")
    if np.any(np.diagonal(sigma) <= 0):
        raise ValueError("covariance has a zero-variance column")
    return sigma


def golem_nv_loss(b, sigma) -> ObjectiveValue:
    """Profiled non-equal-variance Gaussian likelihood.

    L(B; Sigma) = 1/2 sum_i log(((I-B)^T Sigma (I-B))_ii) - log|det(I-B)|,
    with gradient -Sigma (I-B) D^-1 + (I-B)^-T where D holds the diagonal
    of (I-B)^T Sigma (I-B).
    """
    b = np.asarray(b, dtype=float)
    sigma = check_sigma(_as_covariance(sigma))
    d = b.shape[0]
    a = np.eye(d) - b
    sign, logabsdet = np.linalg.slogdet(a)
    if sign == 0:
        raise ValueError("I - B is singular")
    sa = sigma @ a
    diag = np.einsum("ij,ij->j", a, sa)
    if np.any(diag <= 0):
        raise ValueError("nonpositive residual variance; covariance is degenerate")
    value = 0.5 * float(np.log(diag).sum()) - logabsdet
    grad = -sa / diag + np.linalg.inv(a).T
    return ObjectiveValue(value=value, grad_b=grad)


def least_squares_loss(b, inp) -> ObjectiveValue:
    """Least-squares score 1/(2n) ||X - XB||_F^2, covariance form
    1/2 tr((I-B)^T Sigma (I-B)); gradient -Sigma (I-B)."""
    b = np.asarray(b, dtype=float)
    d = b.shape[0]
    if isinstance(inp, CovarianceInput) and inp.samples is not None:
        x = inp.samples
        sigma = x.T @ x / x.shape[0]
    else:
        sigma = _as_covariance(inp)
    sigma = check_sigma(sigma)
    sa = sigma @ (np.eye(d) - b)
    value = 0.5 * float(np.einsum("ij,ij->", np.eye(d) - b, sa))
    return ObjectiveValue(value=value, grad_b=-sa)


def colide_nv_loss(b, sigma, omega) -> ObjectiveValue:
    """Non-profiled score with explicit noise scales:

    S(B; Sigma; Omega) = 1/2 tr(Omega^-1/2 (I-B)^T Sigma (I-B))
                       + 1/2 tr(Omega^1/2).

    Returns gradients with respect to both B and omega.
    """
    b = np.asarray(b, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ValueError("omega entries must be positive")
    sigma = check_sigma(_as_covariance(sigma))
    d = b.shape[0]
    a = np.eye(d) - b
    sa = sigma @ a
    diag = np.einsum("ij,ij->j", a, sa)  # ((I-B)^T Sigma (I-B))_ii
    root = np.sqrt(omega)
    value = 0.5 * float((diag / root).sum()) + 0.5 * float(root.sum())
    grad_b = -sa / root
    grad_omega = -0.25 * diag / (root * omega) + 0.25 / root
    return ObjectiveValue(value=value, grad_b=grad_b, grad_omega=grad_omega)
