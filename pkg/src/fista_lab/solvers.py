"""Forward-backward iterations: plain FBS, the inertial FISTA loop, Ada-FISTA.

All loops start from ``x_{-1} = x_0`` and stop once
``||x_k - x_{k-1}|| <= tol`` or ``max_iters`` is reached.
"""

import math
import time
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import NumericalFailure
from .momentum import MomentumParams, MomentumState, next_t, step
from .trace import Trace, TraceRecord

DEFAULT_KAPPA = 30


@dataclass
class SolverConfig:
    """Shared solver settings.

    ``gamma=None`` means ``1 / L``. FISTA variants warn when handed another
    step unless ``allow_custom_step`` is set. ``tol=0`` stops only on an
    exact fixed point; ``tol=None`` runs exactly ``max_iters`` iterations.
    """

    gamma: Optional[float] = None
    max_iters: int = 10000
    tol: Optional[float] = 1e-9
    record_objective: bool = False
    schedule: Optional[MomentumParams] = None
    x0: Optional[np.ndarray] = None
    allow_custom_step: bool = False

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.tol is not None and not self.tol >= 0:
            raise ValueError(f"tol must be nonnegative, got {self.tol}")


@dataclass
class SolverResult:
    x: np.ndarray
    iterations: int
    reason: str
    trace: Trace


def secant_alpha(window, prev_alpha, floor=0.0, ceiling=math.inf):
    """Clamped secant curvature ``<g_a - g_b, x_a - x_b> / ||x_a - x_b||^2``.

    ``window`` is a sequence of ``(x, grad F(x))`` pairs; the two most recent
    entries are used. Returns ``prev_alpha`` when they nearly coincide.
    """
    if len(window) < 2:
        return prev_alpha
    (xb, gb), (xa, ga) = window[-2], window[-1]
    dx = xa - xb
    nrm2 = float(np.vdot(dx, dx))
    if math.sqrt(nrm2) < 1e-14:
        return prev_alpha
    alpha = float(np.vdot(ga - gb, dx)) / nrm2
    return min(max(alpha, floor), ceiling)


# descriptive alias
estimate_strong_convexity = secant_alpha


@dataclass
class AdaConfig:
    """Ada-FISTA settings.

    ``estimator(window, prev_alpha) -> alpha`` replaces the default clamped
    secant quotient when given; its output is used unclamped.
    ``alpha_ceiling=None`` means ``1 / gamma``.
    """

    kappa: int = DEFAULT_KAPPA
    estimator: Optional[Callable] = None
    alpha_floor: float = 1e-12
    alpha_ceiling: Optional[float] = None

    def __post_init__(self):
        if self.kappa < 1:
            raise ValueError("kappa must be at least 1")
        if not self.alpha_floor > 0:
            raise ValueError("alpha_floor must be positive")


def optimal_inertia(alpha, gamma):
    """Best constant inertia for an ``alpha``-strongly convex problem at step ``gamma``.

    Evaluates ``(1 - sqrt(ga))^2 / (1 - ga)`` in the equivalent form
    ``(1 - sqrt(ga)) / (1 + sqrt(ga))``, which is finite at ``ga = 1``.
    """
    ga = alpha * gamma
    if 1.0 < ga <= 1.0 + 1e-12:  # alpha = 1/gamma after rounding
        ga = 1.0
    if ga < 0 or ga > 1:
        raise ValueError(f"gamma * alpha must lie in [0, 1], got {ga}")
    s = math.sqrt(ga)
    return (1.0 - s) / (1.0 + s)


def f_of_alpha(alpha, gamma):
    """The ``r`` parameter matching :func:`optimal_inertia`: ``4 a*``."""
    return 4.0 * optimal_inertia(alpha, gamma)


def _resolve_gamma(problem, config, inertial):
    L = float(problem.lipschitz)
    if config.gamma is None:
        return 1.0 / L
    gamma = float(config.gamma)
    if not 0.0 < gamma < 2.0 / L:
        raise ValueError(f"step {gamma} outside ]0, 2/L[ with L={L}")
    if inertial and gamma != 1.0 / L and not config.allow_custom_step:
        warnings.warn(f"FISTA step {gamma} differs from 1/L={1.0 / L}", UserWarning)
    return gamma


def _start(problem, config):
    if config.x0 is None:
        return np.zeros(problem.shape)
    x0 = np.array(config.x0, dtype=float)
    if x0.shape != tuple(problem.shape):
        raise ValueError(f"x0 has shape {x0.shape}, expected {tuple(problem.shape)}")
    return x0


def _run(problem, config, gamma, momentum, inertial):
    """Core loop; ``momentum(k, window) -> (t, a, alpha, r)`` or None for FBS."""
    x = _start(problem, config)
    x_prev = x
    trace = Trace()
    window = []
    start = time.perf_counter()
    reason = "max_iters"
    k = 0
    for k in range(1, config.max_iters + 1):
        t = a = alpha = r = None
        if momentum is not None:
            t, a, alpha, r = momentum(k, window)
            y = x + a * (x - x_prev) if a != 0.0 else x
        else:
            y = x
        g = problem.grad_f(y)
        if inertial:
            window = window[-1:] + [(y, g)]
        x_new = problem.prox(y - gamma * g, gamma)
        diff = x_new - x
        norm_dx = float(np.sqrt(np.vdot(diff, diff).real))
        if not math.isfinite(norm_dx):
            raise NumericalFailure(f"non-finite iterate at iteration {k}", iteration=k)
        obj = problem.objective(x_new) if config.record_objective else None
        trace.append(TraceRecord(k, norm_dx, obj, a, t, alpha, r, time.perf_counter() - start))
        x_prev, x = x, x_new
        if config.tol is not None and norm_dx <= config.tol:
            reason = "tol"
            break
    return SolverResult(x, k, reason, trace)


def solve_fbs(problem, config=None):
    """Forward-backward splitting ``x+ = prox_{gR}(x - g grad F(x))``."""
    config = SolverConfig() if config is None else config
    gamma = _resolve_gamma(problem, config, inertial=False)
    return _run(problem, config, gamma, None, inertial=False)


def solve_fista(problem, config=None):
    """Inertial forward-backward with the momentum schedule of ``config.schedule``.

    ``schedule=None`` defaults to the Beck-Teboulle sequence.
    """
    config = SolverConfig() if config is None else config
    gamma = _resolve_gamma(problem, config, inertial=True)
    params = config.schedule if config.schedule is not None else MomentumParams.bt()
    state = MomentumState()

    def momentum(k, window):
        nonlocal state
        t, a, state = step(params, state)
        return t, a, None, None

    return _run(problem, config, gamma, momentum, inertial=True)


def solve_ada_fista(problem, config=None, ada=None):
    """FISTA with ``(p, q) = (1, 1)`` and ``r`` re-estimated every ``kappa`` steps.

    ``r`` starts at 4 and is replaced by ``f_of_alpha(alpha_k)`` at iterations
    ``kappa + 1, 2 kappa + 1, ...``; ``t_k`` carries over across refreshes.
    """
    config = SolverConfig() if config is None else config
    ada = AdaConfig() if ada is None else ada
    gamma = _resolve_gamma(problem, config, inertial=True)
    ceiling = 1.0 / gamma if ada.alpha_ceiling is None else ada.alpha_ceiling
    if not ada.alpha_floor <= ceiling <= 1.0 / gamma:
        raise ValueError("need alpha_floor <= alpha_ceiling <= 1/gamma")
    if ada.estimator is None:
        def estimator(window, prev):
            return secant_alpha(window, prev, ada.alpha_floor, ceiling)
    else:
        estimator = ada.estimator

    p = q = 1.0
    r = 4.0
    alpha = 0.0
    t_prev = 1.0

    def momentum(k, window):
        nonlocal r, alpha, t_prev
        if k > 1 and (k - 1) % ada.kappa == 0:
            alpha = float(estimator(window, alpha))
            r = f_of_alpha(alpha, gamma)
        t = next_t(p, q, r, t_prev)
        a = (t_prev - 1.0) / t
        t_prev = t
        return t, a, alpha, r

    return _run(problem, config, gamma, momentum, inertial=True)
