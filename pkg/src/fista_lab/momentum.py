"""Inertial parameter sequences ``(t_k, a_k)`` for the FISTA family.

Every scheme shares ``a_k = (t_{k-1} - 1) / t_k`` with ``t_0 = 1``; they
differ only in the update of ``t_k``:

* ``bt``  : ``t_k = (1 + sqrt(1 + 4 t_{k-1}^2)) / 2``
* ``cd``  : ``t_k = (k + d) / d``
* ``mod`` : ``t_k = (p + sqrt(q + r t_{k-1}^2)) / 2``

``bt`` is evaluated through the ``mod`` formula with ``(p, q, r) = (1, 1, 4)``
so the two streams agree bit for bit.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

SCHEMES = ("bt", "cd", "mod")

# relative slack for the exact-in-reals inequalities
INEQUALITY_SLACK = 1e-9


def next_t(p, q, r, t_prev):
    """One step of the ``(p, q, r)`` recurrence."""
    return (p + math.sqrt(q + r * t_prev * t_prev)) / 2.0


@dataclass(frozen=True)
class MomentumParams:
    scheme: str = "bt"
    p: float = 1.0
    q: float = 1.0
    r: float = 4.0
    d: float = 2.0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.scheme == "mod":
            if not 0.0 < self.p <= 1.0:
                raise ValueError(f"p must lie in ]0, 1], got {self.p}")
            if not self.q >= 0.0:
                raise ValueError(f"q must be nonnegative, got {self.q}")
            if not 0.0 < self.r <= 4.0:
                raise ValueError(f"r must lie in ]0, 4], got {self.r}")
        elif self.scheme == "cd":
            if not self.d > 0.0:
                raise ValueError(f"d must be positive, got {self.d}")
        elif (self.p, self.q, self.r) != (1.0, 1.0, 4.0):
            raise ValueError("bt has fixed (p, q, r) = (1, 1, 4)")

    @classmethod
    def bt(cls):
        return cls("bt")

    @classmethod
    def cd(cls, d):
        return cls("cd", d=float(d))

    @classmethod
    def mod(cls, p, q, r=4.0):
        return cls("mod", p=float(p), q=float(q), r=float(r))

    @classmethod
    def lazy(cls):
        """Lazy-start preset ``(p, q, r) = (1/50, 1/10, 4)``."""
        return cls.mod(1 / 50, 1 / 10, 4.0)

    @property
    def outside_theory(self):
        """True for CD with ``d <= 2``, where sequence convergence is not covered."""
        return self.scheme == "cd" and self.d <= 2.0

    def label(self):
        if self.scheme == "bt":
            return "bt"
        if self.scheme == "cd":
            return f"cd(d={self.d:g})"
        return f"mod(p={self.p:g},q={self.q:g},r={self.r:g})"


@dataclass(frozen=True)
class MomentumState:
    k: int = 1
    t_prev: float = 1.0


def step(params, state):
    """Advance the schedule once.

    Returns
    -------
    t_k, a_k, next_state
    """
    if params.scheme == "cd":
        t = (state.k + params.d) / params.d
    else:
        t = next_t(params.p, params.q, params.r, state.t_prev)
    a = (state.t_prev - 1.0) / t
    return t, a, MomentumState(state.k + 1, t)


def sequence(params, k_max):
    """Arrays ``t[0..k_max]`` (with ``t[0] = 1``) and ``a[1..k_max]`` (``a[0]`` unused, NaN)."""
    if params.scheme == "cd":
        t = (np.arange(k_max + 1) + params.d) / params.d
    else:
        t = _t_sequence(params.p, params.q, params.r, k_max)
    a = np.empty(k_max + 1)
    a[0] = np.nan
    a[1:] = (t[:-1] - 1.0) / t[1:]
    return t, a


def _t_sequence(p, q, r, k_max):
    t = np.empty(k_max + 1)
    t[0] = 1.0
    tk = 1.0
    for k in range(1, k_max + 1):
        tk = next_t(p, q, r, tk)
        t[k] = tk
    return t


class InertiaLimit(NamedTuple):
    a_inf: float
    t_inf: float

    @property
    def divergent_t(self):
        return math.isinf(self.t_inf)


def limit_inertia(p, q, r):
    """Closed-form limits of ``(a_k, t_k)`` for the ``(p, q, r)`` recurrence.

    For ``r < 4`` the sequence ``t_k`` settles at ``(2p + D) / (4 - r)`` with
    ``D = sqrt(r p^2 + (4 - r) q)``; at ``r = 4`` it diverges and ``a_k -> 1``.
    """
    if not 0.0 < r <= 4.0:
        raise ValueError(f"r must lie in ]0, 4], got {r}")
    if p <= 0.0 or q < 0.0:
        raise ValueError("need p > 0 and q >= 0")
    if r == 4.0:
        return InertiaLimit(1.0, math.inf)
    delta = math.sqrt(r * p * p + (4.0 - r) * q)
    return InertiaLimit(1.0 - (4.0 - r) / (2.0 * p + delta), (2.0 * p + delta) / (4.0 - r))


@dataclass
class KeyInequalityReport:
    holds: bool
    max_violation: float
    k_at_max: int


def check_key_inequality(p, q, k_max):
    """Check ``t_k^2 - t_k <= t_{k-1}^2`` for the ``r = 4`` recurrence, ``k <= k_max``.

    ``max_violation`` is the largest raw value of ``t_k^2 - t_k - t_{k-1}^2``;
    the inequality holds when every term stays below ``1e-9 * t_k^2``.
    """
    t = _t_sequence(p, q, 4.0, k_max)
    cur, prev = t[1:], t[:-1]
    gap = cur * cur - cur - prev * prev
    i = int(np.argmax(gap))
    holds = bool(np.all(gap <= INEQUALITY_SLACK * cur * cur))
    return KeyInequalityReport(holds, float(gap[i]), i + 1)


@dataclass
class LittleOReport:
    """Outcome of the three checks behind the ``o(1/k^2)`` rate.

    ``lower_bound``  : ``t_k >= (k+1) p / 2``
    ``chain_left``   : ``p (1-p) (k+1) / 2 <= (1-p) t_k``
    ``chain_right``  : ``(1-p) t_k <= t_{k-1}^2 - (t_k^2 - t_k)``

    Violations are raw (positive means violated) maxima over ``k``.
    """

    p: float
    q: float
    lower_bound: bool
    chain_left: bool
    chain_right: bool
    max_violation_lower: float
    max_violation_left: float
    max_violation_right: float

    @property
    def holds(self):
        return self.lower_bound and self.chain_left and self.chain_right

    @property
    def in_theory(self):
        return 0.0 < self.p < 1.0 and self.q >= self.p * self.p


def check_little_o_inequalities(p, q, k_max):
    if not 0.0 < p <= 1.0 or q < 0.0:
        raise ValueError("need p in ]0, 1] and q >= 0")
    t = _t_sequence(p, q, 4.0, k_max)
    k = np.arange(1, k_max + 1, dtype=float)
    cur, prev = t[1:], t[:-1]
    scale = INEQUALITY_SLACK * np.maximum(cur * cur, 1.0)

    lower = (k + 1) * p / 2.0 - cur
    left = p * (1 - p) * (k + 1) / 2.0 - (1 - p) * cur
    right = (1 - p) * cur - (prev * prev - (cur * cur - cur))
    return LittleOReport(
        p=p,
        q=q,
        lower_bound=bool(np.all(lower <= scale)),
        chain_left=bool(np.all(left <= scale)),
        chain_right=bool(np.all(right <= scale)),
        max_violation_lower=float(lower.max()),
        max_violation_left=float(left.max()),
        max_violation_right=float(right.max()),
    )
