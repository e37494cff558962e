"""Proximity operators ``prox_{tau R}(x) = argmin_z 1/2 ||x - z||^2 + tau R(z)``.

Each regularizer is available both as a plain function and wrapped in a
:class:`ProxOperator` that also evaluates ``R``, which is what the solvers
consume.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailure


def _check_tau(tau):
    if tau < 0:
        raise ValueError(f"prox scale must be nonnegative, got {tau}")


def prox_l1(x, tau):
    """Soft-thresholding."""
    _check_tau(tau)
    return np.sign(x) * np.maximum(np.abs(x) - tau, 0.0)


class GroupStructure:
    """A partition of ``range(n)`` into index blocks.

    Blocks of equal size laid out contiguously take a reshape-based fast path.
    """

    def __init__(self, blocks, n=None):
        self.blocks = [np.asarray(b, dtype=np.int64) for b in blocks]
        flat = np.concatenate(self.blocks) if self.blocks else np.empty(0, np.int64)
        self.n = int(flat.size) if n is None else int(n)
        if flat.size != self.n or not np.array_equal(np.sort(flat), np.arange(self.n)):
            raise ValueError("blocks must partition range(n) without overlap")
        sizes = {b.size for b in self.blocks}
        self._block_size = None
        if len(sizes) == 1 and np.array_equal(flat, np.arange(self.n)):
            self._block_size = sizes.pop()

    @classmethod
    def contiguous(cls, n, block_size):
        if block_size < 1 or n % block_size:
            raise ValueError(f"n={n} is not a multiple of block size {block_size}")
        return cls(np.arange(n).reshape(-1, block_size), n)

    @property
    def block_size(self):
        return self._block_size

    def __len__(self):
        return len(self.blocks)

    def block_norms(self, x):
        if self._block_size is not None:
            return np.linalg.norm(x.reshape(-1, self._block_size), axis=1)
        return np.array([np.linalg.norm(x[b]) for b in self.blocks])


def prox_group_l12(x, groups, tau):
    """Block soft-thresholding ``y_b = max(1 - tau / ||x_b||, 0) x_b``."""
    _check_tau(tau)
    x = np.asarray(x, dtype=float)
    norms = groups.block_norms(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        shrink = np.where(norms > 0, np.maximum(1.0 - tau / norms, 0.0), 0.0)
    if groups.block_size is not None:
        return (x.reshape(-1, groups.block_size) * shrink[:, None]).reshape(x.shape)
    y = np.empty_like(x)
    for b, s in zip(groups.blocks, shrink):
        y[b] = s * x[b]
    return y


def project_l1_ball(x, radius):
    """Euclidean projection onto ``{z : ||z||_1 <= radius}`` by sort-and-threshold."""
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    x = np.asarray(x, dtype=float)
    u = np.abs(x)
    if u.sum() <= radius:
        return x.copy()
    if radius == 0:
        return np.zeros_like(x)
    s = np.sort(u.ravel())[::-1]
    css = np.cumsum(s) - radius
    idx = np.arange(1, s.size + 1)
    rho = np.nonzero(s * idx > css)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.sign(x) * np.maximum(u - theta, 0.0)


def prox_linf(x, tau):
    """Prox of ``tau ||.||_inf`` via Moreau decomposition against the l1 ball."""
    _check_tau(tau)
    x = np.asarray(x, dtype=float)
    return x - project_l1_ball(x, tau)


def prox_nuclear(X, tau):
    """Singular-value soft-thresholding."""
    _check_tau(tau)
    try:
        U, s, Vt = np.linalg.svd(X, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD failed: {exc}") from exc
    s = np.maximum(s - tau, 0.0)
    keep = s > 0
    return (U[:, keep] * s[keep]) @ Vt[keep]


def moreau_env_l1(u, lam):
    """Value and gradient of ``min_z 1/2 ||u - z||^2 + lam ||z||_1``.

    The gradient ``u - prox_l1(u, lam)`` is 1-Lipschitz.
    """
    u = np.asarray(u, dtype=float)
    z = prox_l1(u, lam)
    grad = u - z
    value = 0.5 * float(np.vdot(grad, grad)) + lam * float(np.abs(z).sum())
    return value, grad


class ProxOperator:
    """Regularizer ``R`` with its proximity operator.

    Subclass and override :meth:`value` and :meth:`prox` to plug in a
    custom regularizer.
    """

    name = "custom"

    def value(self, x):
        raise NotImplementedError

    def prox(self, x, tau):
        raise NotImplementedError

    def __call__(self, x):
        return self.value(x)


class Zero(ProxOperator):
    name = "zero"

    def value(self, x):
        return 0.0

    def prox(self, x, tau):
        return np.array(x, dtype=float, copy=True)


class L1Norm(ProxOperator):
    name = "l1"

    def value(self, x):
        return float(np.abs(x).sum())

    def prox(self, x, tau):
        return prox_l1(x, tau)


@dataclass
class GroupL12Norm(ProxOperator):
    groups: GroupStructure
    name = "group"

    def value(self, x):
        return float(self.groups.block_norms(np.asarray(x)).sum())

    def prox(self, x, tau):
        return prox_group_l12(x, self.groups, tau)


class LInfNorm(ProxOperator):
    name = "linf"

    def value(self, x):
        return float(np.abs(x).max()) if np.size(x) else 0.0

    def prox(self, x, tau):
        return prox_linf(x, tau)


class NuclearNorm(ProxOperator):
    name = "nuclear"

    def value(self, X):
        return float(np.linalg.svd(X, compute_uv=False).sum())

    def prox(self, X, tau):
        return prox_nuclear(X, tau)
