"""
Gaussian-process surrogate with an isotropic squared-exponential kernel.

Targets are standardized before fitting; the length scale is picked from a
log-spaced grid by marginal likelihood.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.stats import norm

DEFAULT_NOISE = 1e-6
LENGTH_SCALE_GRID = tuple(np.geomspace(0.05, 2.0, 20))


@dataclass(frozen=True)
class SquaredExp:
    length_scale: float = 0.5

    def __call__(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        d2 = ((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=2)
        return np.exp(-0.5 * d2 / self.length_scale ** 2)


class GaussianProcess:
    """
    Usage:
        gp = GaussianProcess().fit(X, y).optimize_kernel()
        mean, std = gp.posterior(candidates)
    """

    def __init__(self, kernel: SquaredExp = SquaredExp(), noise: float = DEFAULT_NOISE):
        self.kernel = kernel
        self.noise = noise
        self.X = np.zeros((0, 0))
        self.y = np.zeros(0)
        self._y_mean = 0.0
        self._y_std = 1.0

    def fit(self, X: np.ndarray, y: np.ndarray) -> GaussianProcess:
        self.X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        self._y_mean = float(y.mean())
        spread = float(y.std())
        self._y_std = spread if spread > 0 else 1.0
        self.y = (y - self._y_mean) / self._y_std
        self._factor()
        return self

    def _factor(self) -> None:
        K = self.kernel(self.X, self.X) + self.noise * np.eye(len(self.X))
        self._chol = cho_factor(K, lower=True)
        self._alpha = cho_solve(self._chol, self.y)

    def log_marginal_likelihood(self) -> float:
        L = self._chol[0]
        n = len(self.y)
        return float(
            -0.5 * self.y @ self._alpha
            - np.log(np.diag(L)).sum()
            - 0.5 * n * np.log(2 * np.pi)
        )

    def optimize_kernel(self, grid=LENGTH_SCALE_GRID) -> GaussianProcess:
        best_scale, best_ll = self.kernel.length_scale, -np.inf
        for scale in grid:
            self.kernel = SquaredExp(float(scale))
            self._factor()
            ll = self.log_marginal_likelihood()
            if ll > best_ll:
                best_scale, best_ll = float(scale), ll
        self.kernel = SquaredExp(best_scale)
        self._factor()
        return self

    def posterior(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Mean and standard deviation in the original target units."""
        X = np.asarray(X, dtype=float)
        Ks = self.kernel(X, self.X)
        mean = Ks @ self._alpha
        v = cho_solve(self._chol, Ks.T)
        var = np.clip(1.0 - np.sum(Ks * v.T, axis=1), 0.0, None)
        return mean * self._y_std + self._y_mean, np.sqrt(var) * self._y_std


def expected_improvement(mean: np.ndarray, std: np.ndarray, best: float, xi: float = 0.0) -> np.ndarray:
    """EI for minimization; zero where the posterior is certain."""
    improvement = best - mean - xi
    ei = np.zeros_like(mean)
    live = std > 1e-12
    z = improvement[live] / std[live]
    ei[live] = improvement[live] * norm.cdf(z) + std[live] * norm.pdf(z)
    return np.clip(ei, 0.0, None)
