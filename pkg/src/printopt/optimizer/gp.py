"""Gaussian-process surrogate over encoded configuration vectors.

Matern 5/2 kernel with one length scale per encoded coordinate, plus a
fitted noise floor. Targets are standardized internally so the signal
variance and noise bounds stay meaningful across parts. Hyperparameters
are optimized by L-BFGS-B on the exact log marginal likelihood with its
analytic gradient; restarts guard against the short-length-scale trap.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular
from scipy.optimize import minimize

from ..errors import SurrogateFitError

SQRT5 = math.sqrt(5.0)

# log-space bounds: length scales, signal variance, noise variance
LS_BOUNDS = (0.03, 30.0)
SF2_BOUNDS = (1e-3, 1e3)
SN2_BOUNDS = (1e-8, 1.0)

_JITTERS = (0.0, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4)


def _scaled_sq_dists(A: np.ndarray, B: np.ndarray, ls: np.ndarray) -> np.ndarray:
    """Pairwise squared distance after dividing each axis by its scale."""
    a = A / ls
    b = B / ls
    d2 = (
        np.sum(a * a, axis=1)[:, None]
        + np.sum(b * b, axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    return np.maximum(d2, 0.0)


def matern52(A: np.ndarray, B: np.ndarray, ls: np.ndarray, sf2: float) -> np.ndarray:
    r = np.sqrt(_scaled_sq_dists(A, B, ls))
    s = SQRT5 * r
    return sf2 * (1.0 + s + s * s / 3.0) * np.exp(-s)


class GaussianProcess:
    """Fit once per optimization step; predict over candidate pools."""

    def __init__(self) -> None:
        self.theta: np.ndarray | None = None  # log([ls..., sf2, sn2])
        self._X: np.ndarray | None = None
        self._y_raw: np.ndarray | None = None
        self._alpha: np.ndarray | None = None
        self._chol = None
        self._y_mean = 0.0
        self._y_std = 1.0
        self.last_lml = float("nan")

    # ---- likelihood ----

    def _neg_lml_and_grad(self, theta: np.ndarray, X: np.ndarray, y: np.ndarray):
        n, d = X.shape
        ls = np.exp(theta[:d])
        sf2 = math.exp(theta[d])
        sn2 = math.exp(theta[d + 1])

        diff = X[:, None, :] - X[None, :, :]
        u = (diff / ls) ** 2  # (n, n, d) per-axis squared scaled distance
        r2 = np.sum(u, axis=2)
        r = np.sqrt(np.maximum(r2, 0.0))
        s = SQRT5 * r
        exp_s = np.exp(-s)
        Kf = sf2 * (1.0 + s + s * s / 3.0) * exp_s
        K = Kf + sn2 * np.eye(n)

        chol = None
        for jit in _JITTERS:
            try:
                chol = cho_factor(K + jit * np.eye(n), lower=True)
                break
            except np.linalg.LinAlgError:
                continue
        if chol is None:
            raise SurrogateFitError("kernel matrix is not positive definite")

        alpha = cho_solve(chol, y)
        L = chol[0]
        log_det = 2.0 * np.sum(np.log(np.diag(L)))
        lml = -0.5 * float(y @ alpha) - 0.5 * log_det - 0.5 * n * math.log(2.0 * math.pi)

        Kinv = cho_solve(chol, np.eye(n))
        W = np.outer(alpha, alpha) - Kinv  # dLML/dK = W/2

        grad = np.empty(d + 2)
        # d k / d log ls_j = sf2 * (5/3) * u_j * (1 + s) * exp(-s)
        base = sf2 * (5.0 / 3.0) * (1.0 + s) * exp_s
        grad[:d] = 0.5 * np.einsum("ij,ijk->k", W * base, u)
        grad[d] = 0.5 * np.sum(W * Kf)
        grad[d + 1] = 0.5 * sn2 * np.trace(W)
        return -lml, -grad

    # ---- fitting ----

    def fit(
        self,
        X: np.ndarray,
        y: np.ndarray,
        rng: np.random.Generator,
        restarts: int = 5,
        warm_only: bool = False,
    ) -> None:
        """Optimize hyperparameters on (X, y).

        ``warm_only`` refines from the previous optimum with a single
        L-BFGS-B start; the full schedule also tries a default start and
        ``restarts`` random draws.
        """
        X = np.asarray(X, dtype=np.float64)
        y_raw = np.asarray(y, dtype=np.float64)
        n, d = X.shape
        self._y_mean = float(np.mean(y_raw))
        self._y_std = float(np.std(y_raw))
        if self._y_std < 1e-12:
            self._y_std = 1.0
        y_s = (y_raw - self._y_mean) / self._y_std

        bounds = (
            [(math.log(LS_BOUNDS[0]), math.log(LS_BOUNDS[1]))] * d
            + [(math.log(SF2_BOUNDS[0]), math.log(SF2_BOUNDS[1]))]
            + [(math.log(SN2_BOUNDS[0]), math.log(SN2_BOUNDS[1]))]
        )

        starts = []
        if self.theta is not None and len(self.theta) == d + 2:
            starts.append(self.theta.copy())
        if not (warm_only and starts):
            default = np.concatenate(
                [np.full(d, math.log(0.5)), [math.log(1.0), math.log(1e-2)]]
            )
            starts.append(default)
            for _ in range(restarts):
                ls = rng.uniform(math.log(0.1), math.log(3.0), size=d)
                sf2 = rng.uniform(math.log(0.1), math.log(10.0))
                sn2 = rng.uniform(math.log(1e-6), math.log(1e-1))
                starts.append(np.concatenate([ls, [sf2, sn2]]))

        best = None
        for theta0 in starts:
            res = minimize(
                self._neg_lml_and_grad,
                theta0,
                args=(X, y_s),
                method="L-BFGS-B",
                jac=True,
                bounds=bounds,
            )
            if best is None or res.fun < best.fun:
                best = res
        if best is None or not np.all(np.isfinite(best.x)):
            raise SurrogateFitError("hyperparameter optimization failed")

        self.theta = best.x
        self.last_lml = -float(best.fun)
        self._X = X
        self._y_raw = y_raw

        ls = np.exp(self.theta[:d])
        sf2 = math.exp(self.theta[d])
        sn2 = math.exp(self.theta[d + 1])
        K = matern52(X, X, ls, sf2) + sn2 * np.eye(n)
        chol = None
        for jit in _JITTERS:
            try:
                chol = cho_factor(K + jit * np.eye(n), lower=True)
                break
            except np.linalg.LinAlgError:
                continue
        if chol is None:
            raise SurrogateFitError("kernel matrix is not positive definite")
        self._chol = chol
        self._alpha = cho_solve(chol, y_s)

    # ---- prediction ----

    def predict(self, Xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Posterior mean and latent standard deviation (no noise term)."""
        if self.theta is None or self._X is None:
            raise SurrogateFitError("predict called before fit")
        Xs = np.atleast_2d(np.asarray(Xs, dtype=np.float64))
        d = self._X.shape[1]
        ls = np.exp(self.theta[:d])
        sf2 = math.exp(self.theta[d])
        Ks = matern52(Xs, self._X, ls, sf2)
        mean_s = Ks @ self._alpha
        v = solve_triangular(self._chol[0], Ks.T, lower=True)
        var_s = sf2 - np.sum(v * v, axis=0)
        var_s = np.maximum(var_s, 0.0)
        mean = self._y_mean + self._y_std * mean_s
        std = self._y_std * np.sqrt(var_s)
        return mean, std
