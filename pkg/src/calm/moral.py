"""Moral-graph estimation from data: Fisher-Z tests and IAMB blankets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .simulate import CovarianceInput


@dataclass(frozen=True)
class CiConfig:
    """Conditional-independence test settings."""

    alpha: float = 0.05
    max_cond_size: int | None = None

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")


@dataclass(frozen=True)
class MarkovBlanket:
    target: int
    members: frozenset[int]

    def __post_init__(self):
        if self.target in self.members:
            raise ValueError("target cannot be a member of its own blanket")


def partial_correlation(cov, i, j, cond=()) -> float:
    """Partial correlation of variables i and j given ``cond``, from the
    precision matrix of the covariance submatrix."""
    cov = np.asarray(cov, dtype=float)
    idx = [i, j, *cond]
    theta = np.linalg.inv(cov[np.ix_(idx, idx)])
    r = -theta[0, 1] / np.sqrt(theta[0, 0] * theta[1, 1])
    return float(np.clip(r, -1.0, 1.0))


def _fisher_z(cov, n, i, j, cond, alpha) -> tuple[bool, float, float]:
    """Returns (independent, p_value, partial correlation)."""
    k = len(cond)
    if n is None or n <= k + 3:
        raise ValueError(f"need more than {k + 3} samples for a Fisher-Z test, got {n}")
    r = partial_correlation(cov, i, j, cond)
    if abs(r) >= 1.0:
        return False, 0.0, r
    z = 0.5 * np.log((1.0 + r) / (1.0 - r))
    stat = np.sqrt(n - k - 3) * abs(z)
    p_value = 2.0 * (1.0 - ndtr(stat))
    independent = stat <= ndtri(1.0 - alpha / 2.0)
    return bool(independent), float(p_value), r


def fisher_z_test(stat_input: CovarianceInput, i, j, cond=(), cfg=CiConfig()):
    """Fisher-Z conditional-independence test; returns (independent, p_value)."""
    independent, p_value, _ = _fisher_z(
        stat_input.covariance(), stat_input.num_samples(), i, j, tuple(cond), cfg.alpha
    )
    return independent, p_value


def _iamb(cov, n, target, cfg: CiConfig) -> MarkovBlanket:
    d = cov.shape[0]
    blanket: list[int] = []
    cap = cfg.max_cond_size

    # grow: add the strongest dependent candidate until none qualifies
    while cap is None or len(blanket) < cap:
        best, best_assoc = None, 0.0
        for v in range(d):
            if v == target or v in blanket:
                continue
            independent, _, r = _fisher_z(cov, n, target, v, tuple(blanket), cfg.alpha)
            if not independent and abs(r) > best_assoc:
                best, best_assoc = v, abs(r)
        if best is None:
            break
        blanket.append(best)

    # shrink: drop members independent of the target given the rest
    changed = True
    while changed:
        changed = False
        for v in sorted(blanket):
            rest = tuple(u for u in blanket if u != v)
            if cap is not None and len(rest) > cap:
                continue
            independent, _, _ = _fisher_z(cov, n, target, v, rest, cfg.alpha)
            if independent:
                blanket.remove(v)
                changed = True
                break

    return MarkovBlanket(target=target, members=frozenset(blanket))


def iamb(stat_input: CovarianceInput, target, cfg=CiConfig()) -> MarkovBlanket:
    """Incremental-association Markov blanket of ``target``.

    Grow phase adds, among candidates judged dependent given the current
    blanket, the one with the largest |partial correlation| (ties to the
    smallest index); shrink phase removes members judged independent given
    the remaining ones. Deterministic for a fixed input.
    """
    return _iamb(stat_input.covariance(), stat_input.num_samples(), target, cfg)


def estimate_moral(stat_input: CovarianceInput, cfg=CiConfig()) -> np.ndarray:
    """Moral-graph estimate: edge i - j iff either node is in the other's
    estimated Markov blanket (union symmetrization favors recall, since the
    moral graph is used as a hard search-space filter)."""
    cov = stat_input.covariance()
    n = stat_input.num_samples()
    d = cov.shape[0]
    skel = np.zeros((d, d))
    for target in range(d):
        for v in _iamb(cov, n, target, cfg).members:
            skel[target, v] = skel[v, target] = 1.0
    np.fill_diagonal(skel, 0.0)
    return skel
