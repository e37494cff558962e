"""Seeded problem instances of the form ``min_x F(x) + lam R(x)``.

Solvers only rely on the duck-typed surface ``lipschitz``, ``shape``,
``grad_f(x)``, ``objective(x)`` and ``prox(v, gamma)`` (the prox of
``gamma * lam * R``), which :class:`CompositeProblem`,
:class:`LinearInverseInstance` and :class:`PcpInstance` all provide.
"""

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .prox import GroupL12Norm, GroupStructure, L1Norm, LInfNorm, NuclearNorm, ProxOperator, Zero, moreau_env_l1, prox_l1
from .rng import Xoshiro256pp

KINDS = ("sparse", "group", "saturated")

DEFAULT_NOISE = 0.01
# default lambda as a fraction of the dual-norm threshold above which x* = 0
LAMBDA_FACTORS = {"sparse": 0.1, "group": 0.1, "saturated": 1e-4}


def _check_shape(x, shape):
    if np.shape(x) != tuple(shape):
        raise ValueError(f"shape mismatch: expected {tuple(shape)}, got {np.shape(x)}")


@dataclass
class CompositeProblem:
    """Generic ``F + lam R`` with user callables for ``F`` and its gradient."""

    smooth: Callable
    gradient: Callable
    lipschitz: float
    shape: tuple
    regularizer: ProxOperator = field(default_factory=Zero)
    lam: float = 1.0

    def objective(self, x):
        return float(self.smooth(x)) + self.lam * self.regularizer.value(x)

    def grad_f(self, x):
        return self.gradient(x)

    def prox(self, v, gamma):
        return self.regularizer.prox(v, gamma * self.lam)


def quadratic(alpha, n, center=None):
    """``F(x) = alpha/2 ||x - center||^2`` with ``R = 0``."""
    c = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    return CompositeProblem(
        smooth=lambda x: 0.5 * alpha * float(np.dot(x - c, x - c)),
        gradient=lambda x: alpha * (x - c),
        lipschitz=float(alpha),
        shape=(n,),
    )


def lipschitz_power_method(K, tol=1e-9, max_iters=10000, seed=0):
    """Upper estimate of ``||K||_op^2`` by power iteration on ``K^T K``.

    Stops once the Rayleigh quotient changes by less than ``tol`` relatively,
    then inflates the estimate by ``1 + 1e-6``. Warns and returns the best
    estimate if ``max_iters`` is exhausted.
    """
    K = np.asarray(K, dtype=float)
    v = Xoshiro256pp(seed).normal(K.shape[1])
    v /= np.linalg.norm(v)
    mu = 0.0
    for _ in range(max_iters):
        w = K.T @ (K @ v)
        mu_new = float(np.dot(v, w))
        nw = np.linalg.norm(w)
        if nw == 0.0:
            raise ValueError("K is zero or the start vector lies in its kernel")
        v = w / nw
        if abs(mu_new - mu) <= tol * mu_new:
            mu = mu_new
            break
        mu = mu_new
    else:
        warnings.warn(f"power method did not reach rtol {tol} in {max_iters} iterations", RuntimeWarning)
    return mu * (1.0 + 1e-6)


@dataclass
class LinearInverseInstance:
    """Least squares ``1/2 ||f - K x||^2 + lam R(x)`` from a noisy linear observation."""

    K: np.ndarray
    f: np.ndarray
    lam: float
    regularizer: ProxOperator
    lipschitz: float
    x_ob: Optional[np.ndarray] = None
    kind: str = "custom"
    seed: Optional[int] = None
    noise_level: float = 0.0

    @property
    def shape(self):
        return (self.K.shape[1],)

    def residual(self, x):
        return self.K @ x - self.f

    def smooth(self, x):
        _check_shape(x, self.shape)
        r = self.residual(x)
        return 0.5 * float(np.dot(r, r))

    def objective(self, x):
        return self.smooth(x) + self.lam * self.regularizer.value(x)

    def grad_f(self, x):
        _check_shape(x, self.shape)
        return self.K.T @ self.residual(x)

    def prox(self, v, gamma):
        return self.regularizer.prox(v, gamma * self.lam)


def least_squares(K, f, lam, regularizer=None, lipschitz=None):
    K = np.asarray(K, dtype=float)
    reg = L1Norm() if regularizer is None else regularizer
    L = lipschitz_power_method(K) if lipschitz is None else float(lipschitz)
    return LinearInverseInstance(K, np.asarray(f, dtype=float), float(lam), reg, L)


def gen_linear_inverse(kind, m, n, structure, seed, noise_level=DEFAULT_NOISE, block_size=8, lam=None):
    """Generate a linear inverse problem instance.

    Draw order from one xoshiro256++ stream: ``K`` (row-major), then the
    signal (support indices, then values), then the noise.

    Parameters
    ----------
    kind : {"sparse", "group", "saturated"}
        ``sparse``: ``structure`` nonzeros with normal values, ``R = l1``.
        ``group``: ``structure`` active blocks of ``block_size``, ``R = l1,2``.
        ``saturated``: uniform ``[-1, 1]`` entries with ``structure`` of them
        set to ``+-1``, ``R = l_inf``.
    lam : float, optional
        Defaults to ``0.1 ||K^T f||_inf`` (sparse, group) or
        ``1e-4 ||K^T f||_1`` (saturated).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if noise_level < 0:
        raise ValueError("noise_level must be nonnegative")
    rng = Xoshiro256pp(seed)
    K = rng.normal(m * n).reshape(m, n)

    x_ob = np.zeros(n)
    if kind == "sparse":
        if not 0 <= structure <= n:
            raise ValueError(f"sparsity {structure} exceeds n={n}")
        support = rng.choice(n, structure)
        x_ob[support] = rng.normal(structure)
        reg = L1Norm()
    elif kind == "group":
        groups = GroupStructure.contiguous(n, block_size)
        if not 0 <= structure <= len(groups):
            raise ValueError(f"{structure} blocks of size {block_size} exceed n={n}")
        active = rng.choice(len(groups), structure)
        values = rng.normal(structure * block_size).reshape(structure, block_size)
        x_ob.reshape(-1, block_size)[active] = values
        reg = GroupL12Norm(groups)
    else:
        if not 0 <= structure <= n:
            raise ValueError(f"saturated count {structure} exceeds n={n}")
        x_ob = 2.0 * rng.uniform(n) - 1.0
        support = rng.choice(n, structure)
        signs = np.where(rng.uniform(structure) < 0.5, -1.0, 1.0)
        x_ob[support] = signs
        reg = LInfNorm()

    clean = K @ x_ob
    w = rng.normal(m)
    if noise_level > 0 and np.any(clean):
        w *= noise_level * np.linalg.norm(clean) / math.sqrt(m)
    else:
        w[:] = 0.0
    f = clean + w

    if lam is None:
        Ktf = K.T @ f
        dual = np.abs(Ktf).sum() if kind == "saturated" else np.abs(Ktf).max()
        lam = LAMBDA_FACTORS[kind] * float(dual)
    return LinearInverseInstance(
        K=K,
        f=f,
        lam=float(lam),
        regularizer=reg,
        lipschitz=lipschitz_power_method(K),
        x_ob=x_ob,
        kind=kind,
        seed=seed,
        noise_level=noise_level,
    )


@dataclass
class PcpInstance:
    """Principal component pursuit reduced to the low-rank variable.

    The sparse part is minimized out, leaving
    ``env(y - x_l) + lam2 ||x_l||_*`` where ``env`` is the Moreau envelope of
    ``lam1 ||.||_1``; its gradient is 1-Lipschitz.
    """

    y: np.ndarray
    lam1: float
    lam2: float
    low_rank: Optional[np.ndarray] = None
    sparse: Optional[np.ndarray] = None
    seed: Optional[int] = None
    noise_level: float = 0.0
    lipschitz: float = 1.0
    regularizer: ProxOperator = field(default_factory=NuclearNorm)

    @property
    def shape(self):
        return self.y.shape

    @property
    def lam(self):
        return self.lam2

    def smooth(self, x_l):
        _check_shape(x_l, self.shape)
        return moreau_env_l1(self.y - x_l, self.lam1)[0]

    def objective(self, x_l):
        return self.smooth(x_l) + self.lam2 * self.regularizer.value(x_l)

    def grad_f(self, x_l):
        _check_shape(x_l, self.shape)
        return -moreau_env_l1(self.y - x_l, self.lam1)[1]

    def prox(self, v, gamma):
        return self.regularizer.prox(v, gamma * self.lam2)

    def sparse_part(self, x_l):
        return prox_l1(self.y - x_l, self.lam1)

    def full_objective(self, x_l, x_s):
        """Objective of the joint low-rank plus sparse problem."""
        r = self.y - x_l - x_s
        return (
            0.5 * float(np.sum(r * r))
            + self.lam1 * float(np.abs(x_s).sum())
            + self.lam2 * self.regularizer.value(x_l)
        )


def gen_pcp(m, n, rank, sparse_fraction, seed, noise_level=0.0, lam1=None, lam2=1.0):
    """Synthetic low-rank plus sparse matrix.

    Draw order: ``A`` (m x rank), ``B`` (n x rank), support uniforms,
    magnitude uniforms, sign uniforms, noise.
    """
    if not 0 <= rank <= min(m, n):
        raise ValueError(f"rank {rank} exceeds min(m, n) = {min(m, n)}")
    if not 0.0 <= sparse_fraction <= 1.0:
        raise ValueError("sparse_fraction must lie in [0, 1]")
    rng = Xoshiro256pp(seed)
    A = rng.normal(m * rank).reshape(m, rank)
    B = rng.normal(n * rank).reshape(n, rank)
    low = A @ B.T
    mask = rng.uniform(m * n).reshape(m, n) < sparse_fraction
    mag = 1.0 + rng.uniform(m * n).reshape(m, n)
    sign = np.where(rng.uniform(m * n).reshape(m, n) < 0.5, -1.0, 1.0)
    sparse = np.where(mask, sign * mag, 0.0)
    clean = low + sparse
    w = rng.normal(m * n).reshape(m, n)
    if noise_level > 0 and np.any(clean):
        w *= noise_level * np.linalg.norm(clean) / math.sqrt(m * n)
    else:
        w[:] = 0.0
    lam1 = 1.0 / math.sqrt(max(m, n)) if lam1 is None else float(lam1)
    return PcpInstance(
        y=clean + w,
        lam1=lam1,
        lam2=float(lam2),
        low_rank=low,
        sparse=sparse,
        seed=seed,
        noise_level=noise_level,
    )


def objective(instance, x):
    return instance.objective(x)


def grad_f(instance, x):
    return instance.grad_f(x)
