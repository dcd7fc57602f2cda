"""Differentiable surrogates for the L0 edge-count penalty.

Three relaxations of a binary edge mask: a Gumbel-Softmax mask (logistic
noise on logits), stochastic gates (clipped Gaussians), and a tanh
saturation of edge weights. Diagonals are structurally excluded: every
emitted mask has a zero diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit, ndtr

SQRT_2PI = np.sqrt(2.0 * np.pi)


@dataclass
class GumbelMask:
    """Trainable mask sigma((U + G)/tau) with logistic noise G and edge weights P."""

    logits_u: np.ndarray
    param_p: np.ndarray
    temperature: float = 0.5

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")


def init_gumbel(d, rng: np.random.Generator, temperature=0.5) -> GumbelMask:
    """Unbiased start: zero logits, weights uniform on [-0.001, 0.001]."""
    return GumbelMask(
        logits_u=np.zeros((d, d)),
        param_p=rng.uniform(-0.001, 0.001, size=(d, d)),
        temperature=temperature,
    )


def gumbel_sample(gm: GumbelMask, rng: np.random.Generator) -> np.ndarray:
    """One reparameterized mask draw; gradients w.r.t. U flow through
    m (1 - m) / tau at the returned values."""
    noise = rng.logistic(size=gm.logits_u.shape)
    m = expit((gm.logits_u + noise) / gm.temperature)
    np.fill_diagonal(m, 0.0)
    return m


def gumbel_eval(gm: GumbelMask) -> np.ndarray:
    """Deterministic noiseless mask sigma(U/tau), used for thresholding and
    constraint-convergence checks."""
    m = expit(gm.logits_u / gm.temperature)
    np.fill_diagonal(m, 0.0)
    return m


def l0_penalty_gumbel(mask, moral) -> tuple[float, np.ndarray]:
    """Sum of moral-filtered mask entries (the L1 norm of a nonnegative
    matrix) and its gradient with respect to the mask."""
    mask = np.asarray(mask, dtype=float)
    if np.any(mask < 0):
        raise ValueError("mask entries must be nonnegative")
    filt = np.asarray(moral, dtype=float)
    return float((mask * filt).sum()), filt.copy()


@dataclass
class StgParams:
    """Stochastic gates clip(mu + eps, 0, 1) with eps ~ N(0, gate_sigma^2)."""

    mu: np.ndarray
    gate_sigma: float = 0.5

    def __post_init__(self):
        if self.gate_sigma <= 0:
            raise ValueError("gate_sigma must be positive")


def stg_sample(p: StgParams, rng: np.random.Generator) -> np.ndarray:
    """Clipped Gaussian gates in [0, 1]; the straight-through gradient is 1
    strictly inside the clip and 0 on the boundary."""
    z = np.clip(p.mu + rng.normal(0.0, p.gate_sigma, size=p.mu.shape), 0.0, 1.0)
    np.fill_diagonal(z, 0.0)
    return z


def stg_eval(p: StgParams) -> np.ndarray:
    """Deterministic gate clip(mu, 0, 1), the noiseless analogue of a draw."""
    z = np.clip(p.mu, 0.0, 1.0)
    np.fill_diagonal(z, 0.0)
    return z


def stg_penalty(p: StgParams, moral) -> tuple[float, np.ndarray]:
    """Expected active-gate count over the filter: sum of Phi(mu/sigma) * M,
    gradient phi(mu/sigma)/sigma per entry."""
    filt = np.asarray(moral, dtype=float)
    t = p.mu / p.gate_sigma
    value = float((ndtr(t) * filt).sum())
    grad = np.exp(-0.5 * t * t) / (SQRT_2PI * p.gate_sigma) * filt
    return value, grad


@dataclass
class TanhParams:
    c: float = 15.0

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("c must be positive")


def tanh_penalty(b, p: TanhParams) -> tuple[float, np.ndarray]:
    """Saturating penalty sum tanh(c |B_ij|); subgradient 0 at B_ij = 0."""
    b = np.asarray(b, dtype=float)
    t = np.tanh(p.c * np.abs(b))
    grad = p.c * (1.0 - t * t) * np.sign(b)
    return float(t.sum()), grad


def tanh_mask(b, p: TanhParams) -> np.ndarray:
    """Soft support tanh(c |B|) in [0, 1), used as the constraint/threshold
    mask for the tanh relaxation."""
    return np.tanh(p.c * np.abs(np.asarray(b, dtype=float)))
