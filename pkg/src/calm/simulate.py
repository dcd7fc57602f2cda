"""Ground-truth SEM generation, sampling, and covariance construction.

The structural model is X = B^T X + N with independent Gaussian noise
N_i ~ N(0, omega_i); ``b_true[i, j]`` is the weight of edge i -> j.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .graphs import check_adjacency, is_acyclic, topological_order


@dataclass(frozen=True)
class SimConfig:
    """Random-SEM settings: ER graph with ~er_k * d expected edges,
    weights uniform on +-[weight_low, weight_high], noise variances on
    [noise_low, noise_high] with one variable pinned at each extreme."""

    d: int
    er_k: float = 1.0
    weight_low: float = 0.5
    weight_high: float = 2.0
    noise_low: float = 1.0
    noise_high: float = 16.0
    seed: int | None = None

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be at least 2")
        if self.er_k < 1:
            raise ValueError("er_k must be at least 1")


@dataclass
class SemSpec:
    """Ground truth: acyclic weighted adjacency and positive noise variances."""

    b_true: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        self.b_true = check_adjacency(self.b_true)
        self.omega = np.asarray(self.omega, dtype=float)
        if not is_acyclic(self.b_true):
            raise ValueError("b_true must be acyclic")
        if self.omega.shape != (self.b_true.shape[0],):
            raise ValueError("omega length must match the node count")
        if np.any(self.omega <= 0):
            raise ValueError("noise variances must be positive")


@dataclass
class CovarianceInput:
    """Either an n x d sample matrix or an exact population covariance.

    ``n`` is only meaningful in population mode, where it supplies an
    effective sample size for conditional-independence tests.
    """

    samples: np.ndarray | None = None
    population_cov: np.ndarray | None = None
    standardized: bool = False
    n: int | None = None

    def __post_init__(self):
        if (self.samples is None) == (self.population_cov is None):
            raise ValueError("provide exactly one of samples or population_cov")
        if self.samples is not None:
            self.samples = np.asarray(self.samples, dtype=float)
            if self.samples.ndim != 2:
                raise ValueError("samples must be a 2-d matrix")
            n, d = self.samples.shape
            if n < d:
                raise ValueError(f"need at least d={d} samples, got {n}")
        else:
            cov = np.asarray(self.population_cov, dtype=float)
            if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
                raise ValueError("population_cov must be square")
            if not np.allclose(cov, cov.T, atol=1e-10):
                raise ValueError("population_cov must be symmetric")
            try:
                np.linalg.cholesky(cov)
            except np.linalg.LinAlgError:
                raise ValueError("population_cov must be positive definite") from None
            self.population_cov = cov

    @property
    def dim(self) -> int:
        if self.samples is not None:
            return self.samples.shape[1]
        return self.population_cov.shape[0]

    def num_samples(self) -> int | None:
        if self.samples is not None:
            return self.samples.shape[0]
        return self.n

    def covariance(self) -> np.ndarray:
        """Population covariance, or the centered empirical covariance."""
        if self.population_cov is not None:
            return self.population_cov
        return empirical_covariance(self.samples)


def empirical_covariance(x) -> np.ndarray:
    """Centered empirical covariance (1/n) Xc^T Xc."""
    x = np.asarray(x, dtype=float)
    xc = x - x.mean(axis=0)
    return xc.T @ xc / x.shape[0]


def sample_er_dag(cfg: SimConfig, rng: np.random.Generator) -> np.ndarray:
    """Random DAG: under a random node order, each forward pair is an edge
    independently with probability min(1, 2 * er_k / (d - 1))."""
    d = cfg.d
    p = min(1.0, 2.0 * cfg.er_k / (d - 1))
    order = rng.permutation(d)
    upper = np.triu(rng.random((d, d)) < p, 1)
    a = np.zeros((d, d))
    a[np.ix_(order, order)] = upper
    return a


def assign_weights(g, rng: np.random.Generator, low=0.5, high=2.0) -> np.ndarray:
    """Edge weights drawn uniformly from [-high, -low] U [low, high]."""
    g = check_adjacency(g, binary=True)
    w = np.zeros_like(g)
    idx = g != 0
    k = int(idx.sum())
    magnitude = rng.uniform(low, high, size=k)
    sign = np.where(rng.random(k) < 0.5, -1.0, 1.0)
    w[idx] = sign * magnitude
    return w


def assign_noise(d, rng: np.random.Generator, low=1.0, high=16.0) -> np.ndarray:
    """Noise variances: two distinct random variables pinned to ``low`` and
    ``high``, the rest uniform on [low, high]."""
    if d < 2:
        raise ValueError("need at least two variables")
    omega = rng.uniform(low, high, size=d)
    i, j = rng.choice(d, size=2, replace=False)
    omega[i] = low
    omega[j] = high
    return omega


def make_sem(cfg: SimConfig, rng: np.random.Generator) -> SemSpec:
    """Draw a full ground-truth SEM from ``cfg``."""
    g = sample_er_dag(cfg, rng)
    b = assign_weights(g, rng, cfg.weight_low, cfg.weight_high)
    omega = assign_noise(cfg.d, rng, cfg.noise_low, cfg.noise_high)
    return SemSpec(b_true=b, omega=omega)


def population_covariance(sem: SemSpec) -> np.ndarray:
    """Exact covariance (I - B)^-T Omega (I - B)^-1 of the SEM."""
    d = sem.b_true.shape[0]
    a_inv = np.linalg.inv(np.eye(d) - sem.b_true)
    sigma = a_inv.T @ (sem.omega[:, None] * a_inv)
    return 0.5 * (sigma + sigma.T)


def sample_data(sem: SemSpec, n, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. samples by ancestral sampling in topological order."""
    if n < 1:
        raise ValueError("n must be at least 1")
    d = sem.b_true.shape[0]
    noise = rng.standard_normal((n, d)) * np.sqrt(sem.omega)
    x = np.zeros((n, d))
    for j in topological_order(sem.b_true):
        parents = np.flatnonzero(sem.b_true[:, j])
        x[:, j] = noise[:, j]
        if parents.size:
            x[:, j] += x[:, parents] @ sem.b_true[parents, j]
    return x


def standardize(inp: CovarianceInput) -> CovarianceInput:
    """Standardize to unit scales: center/scale columns in sample mode,
    rescale to a correlation matrix in population mode."""
    if inp.samples is not None:
        mu = inp.samples.mean(axis=0)
        sd = inp.samples.std(axis=0)
        if np.any(sd == 0):
            raise ValueError("cannot standardize a zero-variance column")
        return replace(inp, samples=(inp.samples - mu) / sd, standardized=True)
    scale = np.sqrt(np.diagonal(inp.population_cov))
    if np.any(scale == 0):
        raise ValueError("cannot standardize a zero-variance column")
    corr = inp.population_cov / np.outer(scale, scale)
    return replace(inp, population_cov=0.5 * (corr + corr.T), standardized=True)
