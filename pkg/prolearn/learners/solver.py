"""Regularized logistic ERM shared by every data-driven learner.

Objective over the buffered samples, with theta = (w, b):

    F(theta) = l2/2 * ||theta||^2 + sum_i log(1 + exp(-y_i (w.x_i + b)))

The penalty covers the bias too, so the minimizer is unique for any buffer,
including a buffer holding a single class.
"""

import logging
from typing import Any, Dict, Optional

import numpy as np
from scipy.special import expit

from ..classes.errors import SolverConvergenceError
from ..classes.hypothesis import LinearHypothesis

logger = logging.getLogger(__name__)

SOLVERS = ("newton", "gradient")


def augment(X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return np.hstack([X, np.ones((X.shape[0], 1))])


def logistic_loss(theta: np.ndarray, X1: np.ndarray, y: np.ndarray) -> float:
    """Summed logistic loss on augmented inputs, stable for large margins."""
    margins = y * (X1 @ theta)
    return float(np.logaddexp(0.0, -margins).sum())


def logistic_gradient(theta: np.ndarray, X1: np.ndarray, y: np.ndarray) -> np.ndarray:
    margins = y * (X1 @ theta)
    return -(X1.T @ (y * expit(-margins)))


class LogisticERM:
    """Growing sample buffer plus its warm-started regularized minimizer."""

    def __init__(
        self,
        dim: int,
        l2: float = 1e-4,
        tol: float = 1e-6,
        max_iter: int = 500,
        solver: str = "newton",
    ) -> None:
        if solver not in SOLVERS:
            raise ValueError(f"unknown solver '{solver}', expected one of {SOLVERS}")
        self.dim = dim
        self.l2 = l2
        self.tol = tol
        self.max_iter = max_iter
        self.solver = solver
        self.theta = np.zeros(dim + 1)
        self._X1 = np.empty((64, dim + 1))
        self._y = np.empty(64)
        self._n = 0
        self.last_iterations = 0
        self.last_grad_norm = 0.0

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray, dim: int, **params) -> "LogisticERM":
        erm = cls(dim, **params)
        if len(y):
            erm.add(X, y)
        erm.solve()
        return erm

    @property
    def n_samples(self) -> int:
        return self._n

    @property
    def X1(self) -> np.ndarray:
        return self._X1[: self._n]

    @property
    def y(self) -> np.ndarray:
        return self._y[: self._n]

    @property
    def hypothesis(self) -> LinearHypothesis:
        return LinearHypothesis.from_theta(self.theta)

    def add(self, X: np.ndarray, y: np.ndarray) -> None:
        X1 = augment(X)
        y = np.atleast_1d(np.asarray(y, dtype=float))
        needed = self._n + len(y)
        if needed > len(self._y):
            capacity = max(needed, 2 * len(self._y))
            self._X1 = np.resize(self._X1, (capacity, self.dim + 1))
            self._y = np.resize(self._y, capacity)
        self._X1[self._n:needed] = X1
        self._y[self._n:needed] = y
        self._n = needed

    def objective(self, theta: Optional[np.ndarray] = None) -> float:
        theta = self.theta if theta is None else theta
        return 0.5 * self.l2 * float(theta @ theta) + logistic_loss(theta, self.X1, self.y)

    def gradient(self, theta: np.ndarray) -> np.ndarray:
        return self.l2 * theta + logistic_gradient(theta, self.X1, self.y)

    def hessian(self, theta: np.ndarray) -> np.ndarray:
        X1 = self.X1
        p = expit(X1 @ theta)
        weights = p * (1.0 - p)
        return X1.T @ (weights[:, None] * X1) + self.l2 * np.eye(self.dim + 1)

    def solve(self) -> np.ndarray:
        """Minimize from the current theta; raise SolverConvergenceError at the cap."""
        if self.solver == "newton":
            theta, iterations, grad_norm = self._newton(self.theta.copy())
        else:
            theta, iterations, grad_norm = self._gradient_descent(self.theta.copy())
        self.last_iterations = iterations
        self.last_grad_norm = grad_norm
        if grad_norm > self.tol:
            raise SolverConvergenceError(grad_norm, iterations, self.tol)
        self.theta = theta
        return theta

    def _newton(self, theta: np.ndarray):
        f = self.objective(theta)
        g = self.gradient(theta)
        g_norm = float(np.linalg.norm(g))
        iterations = 0
        while g_norm > self.tol and iterations < self.max_iter:
            iterations += 1
            direction = -np.linalg.solve(self.hessian(theta), g)
            slope = float(g @ direction)
            step = 1.0
            while True:
                candidate = theta + step * direction
                f_new = self.objective(candidate)
                if f_new <= f + 1e-4 * step * slope:
                    break
                # below float resolution of F the full Newton step is judged by the gradient
                if step == 1.0 and -slope <= 1e-12 * max(1.0, abs(f)):
                    g_new = self.gradient(candidate)
                    if np.linalg.norm(g_new) < g_norm:
                        break
                step *= 0.5
                if step < 1e-10:
                    logger.debug(f"Line search stalled at gradient norm {g_norm:.3e}")
                    return theta, iterations, g_norm
            theta, f = candidate, f_new
            g = self.gradient(theta)
            g_norm = float(np.linalg.norm(g))
        return theta, iterations, g_norm

    def _gradient_descent(self, theta: np.ndarray):
        X1 = self.X1
        gram_top = float(np.linalg.eigvalsh(X1.T @ X1)[-1]) if self._n else 0.0
        step = 1.0 / (self.l2 + 0.25 * gram_top)
        g = self.gradient(theta)
        g_norm = float(np.linalg.norm(g))
        iterations = 0
        while g_norm > self.tol and iterations < self.max_iter:
            iterations += 1
            theta = theta - step * g
            g = self.gradient(theta)
            g_norm = float(np.linalg.norm(g))
        return theta, iterations, g_norm

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "l2": self.l2,
            "tol": self.tol,
            "max_iter": self.max_iter,
            "solver": self.solver,
            "theta": self.theta.tolist(),
            "X": self.X1[:, :-1].tolist(),
            "y": self.y.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "LogisticERM":
        erm = cls(data["dim"], l2=data["l2"], tol=data["tol"], max_iter=data["max_iter"], solver=data["solver"])
        if data["y"]:
            erm.add(np.asarray(data["X"], dtype=float), np.asarray(data["y"], dtype=float))
        erm.theta = np.asarray(data["theta"], dtype=float)
        return erm
