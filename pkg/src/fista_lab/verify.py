"""Self-contained check suites behind ``fista-lab verify``.

Each suite returns a list of :class:`Check`. Prox checks compare against
brute-force one-dimensional searches rather than the closed forms.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import momentum, prox
from .rng import Xoshiro256pp

GRID_P = (0.02, 0.1, 0.5, 1.0)
KEY_K_MAX = 10**4
LIMIT_K_MAX = 10**6
LIMIT_SAMPLES = ((1.0, 1.0, 2.0), (1.0, 1.0, 1.0), (1.0, 1.0, 3.5), (0.5, 1.0, 3.0), (0.2, 0.5, 3.9), (0.8, 2.0, 2.5))
PROX_TOL = 1e-6


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}" + (f": {self.detail}" if self.detail else "")


def grid_q(p):
    return tuple(sorted({0.0, p * p, (2.0 - p) ** 2}))


def key_inequality_suite(k_max=KEY_K_MAX):
    checks = []
    for p in GRID_P:
        for q in grid_q(p):
            rep = momentum.check_key_inequality(p, q, k_max)
            checks.append(Check(f"key p={p:g} q={q:g}", rep.holds, f"max gap {rep.max_violation:.3g} at k={rep.k_at_max}"))
    return checks


def little_o_suite(k_max=KEY_K_MAX):
    """Lower bound and chained inequalities on the grid points with ``p < 1``, ``q >= p^2``."""
    checks = []
    for p in GRID_P:
        if p >= 1.0:
            continue
        for q in grid_q(p):
            if q < p * p:
                continue
            rep = momentum.check_little_o_inequalities(p, q, k_max)
            checks.append(Check(f"t_k lower bound p={p:g} q={q:g}", rep.lower_bound, f"max excess {rep.max_violation_lower:.3g}"))
            checks.append(
                Check(
                    f"o(1/k^2) chain p={p:g} q={q:g}",
                    rep.chain_left and rep.chain_right,
                    f"left excess {rep.max_violation_left:.3g}, right excess {rep.max_violation_right:.3g}",
                )
            )
    return checks


def limits_suite(k_max=LIMIT_K_MAX):
    checks = []
    for p, q, r in LIMIT_SAMPLES:
        _, a = momentum.sequence(momentum.MomentumParams.mod(p, q, r), k_max)
        lim = momentum.limit_inertia(p, q, r).a_inf
        err = abs(a[-1] - lim)
        checks.append(Check(f"limit p={p:g} q={q:g} r={r:g}", err <= 1e-6, f"|a_k - a_inf| = {err:.2e}"))
    return checks


def golden_min(fun, lo, hi, tol=1e-14, max_iter=400):
    """Minimizer of a convex scalar function on ``[lo, hi]``."""
    g = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(max_iter):
        if b - a <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def oracle_prox_l1(x, tau):
    return np.array([golden_min(lambda z: 0.5 * (xi - z) ** 2 + tau * abs(z), -abs(xi) - 1, abs(xi) + 1) for xi in x])


def oracle_prox_group(x, groups, tau):
    y = np.zeros_like(x)
    for b in groups.blocks:
        nb = float(np.linalg.norm(x[b]))
        if nb == 0:
            continue
        c = golden_min(lambda c: 0.5 * (nb - c) ** 2 + tau * c, 0.0, nb)
        y[b] = c * x[b] / nb
    return y


def oracle_project_l1_ball(x, radius):
    """Bisection on the threshold ``theta`` solving ``sum max(|x| - theta, 0) = radius``."""
    u = np.abs(x)
    if u.sum() <= radius:
        return x.copy()
    lo, hi = 0.0, float(u.max())
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.maximum(u - mid, 0).sum() > radius:
            lo = mid
        else:
            hi = mid
    return np.sign(x) * np.maximum(u - 0.5 * (lo + hi), 0)


def oracle_prox_linf(x, tau):
    """Search over the clipping level ``mu``; the minimizer is ``clip(x, -mu, mu)``."""

    def cost(mu):
        z = np.clip(x, -mu, mu)
        return 0.5 * float(np.sum((x - z) ** 2)) + tau * mu

    mu = golden_min(cost, 0.0, float(np.abs(x).max()))
    return np.clip(x, -mu, mu)


def prox_suite(trials=20, seed=7):
    rng = Xoshiro256pp(seed)
    errs = {"l1": 0.0, "group": 0.0, "l1-ball": 0.0, "linf": 0.0, "nuclear": 0.0, "moreau-identity": 0.0}
    groups = prox.GroupStructure([[0, 1], [2, 3, 4]])
    for _ in range(trials):
        x = 2.0 * rng.normal(5)
        tau = 0.05 + 1.5 * float(rng.uniform(1)[0])
        errs["l1"] = max(errs["l1"], np.abs(prox.prox_l1(x, tau) - oracle_prox_l1(x, tau)).max())
        errs["group"] = max(errs["group"], np.abs(prox.prox_group_l12(x, groups, tau) - oracle_prox_group(x, groups, tau)).max())
        errs["l1-ball"] = max(errs["l1-ball"], np.abs(prox.project_l1_ball(x, tau) - oracle_project_l1_ball(x, tau)).max())
        errs["linf"] = max(errs["linf"], np.abs(prox.prox_linf(x, tau) - oracle_prox_linf(x, tau)).max())
        gap = np.abs(prox.prox_linf(x, tau) + prox.project_l1_ball(x, tau) - x).max()
        errs["moreau-identity"] = max(errs["moreau-identity"], gap / (np.finfo(float).eps * np.abs(x).max()))
        X = rng.normal(12).reshape(4, 3)
        s_out = np.linalg.svd(prox.prox_nuclear(X, tau), compute_uv=False)
        s_ref = np.maximum(np.linalg.svd(X, compute_uv=False) - tau, 0)
        errs["nuclear"] = max(errs["nuclear"], np.abs(s_out - s_ref).max())
    checks = [Check(f"prox {k} vs oracle", v <= PROX_TOL, f"max error {v:.2e}") for k, v in errs.items() if k != "moreau-identity"]
    # equal up to one rounding of the subtraction
    checks.append(Check("moreau identity", errs["moreau-identity"] <= 1.0, f"max error {errs['moreau-identity']:.2f} ulp"))
    return checks


SUITES = {
    "key-inequality": key_inequality_suite,
    "little-o": little_o_suite,
    "limits": limits_suite,
    "prox": prox_suite,
}
