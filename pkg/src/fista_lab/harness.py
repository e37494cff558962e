"""Experiment runner: instance specs, named schemes, reference solutions, comparisons."""

import logging
import os
import re
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import List, Optional

import numpy as np

from .errors import NumericalFailure
from .momentum import MomentumParams
from .problems import DEFAULT_NOISE, gen_linear_inverse, gen_pcp
from .solvers import DEFAULT_KAPPA, AdaConfig, SolverConfig, solve_ada_fista, solve_fbs, solve_fista

log = logging.getLogger(__name__)

THREADS_ENV = "FISTA_LAB_THREADS"
COMPARISON_TOL = 1e-9
DEFAULT_SCHEMES = ("bt", "cd2", "cd50", "cd75", "lazy", "ada")

# Ada-FISTA estimation period per instance kind
ADA_KAPPA = {"sparse": DEFAULT_KAPPA, "group": DEFAULT_KAPPA, "saturated": 300, "pcp": DEFAULT_KAPPA}


@dataclass
class InstanceSpec:
    """Everything needed to regenerate an instance; matrices are never stored.

    Serialized as ``key=value`` lines. ``structure`` is the sparsity
    (``sparse``), the active block count (``group``), the saturated entry
    count (``saturated``) or the rank (``pcp``).
    """

    kind: str
    m: int
    n: int
    structure: int
    seed: int = 0
    noise_level: float = DEFAULT_NOISE
    lam: Optional[float] = None
    block_size: int = 8
    sparse_fraction: float = 0.05
    lam2: float = 1.0

    _KEYS = {"lambda": "lam", "lambda1": "lam", "lambda2": "lam2"}

    def to_text(self):
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            key = {"lam": "lambda", "lam2": "lambda2"}.get(f.name, f.name)
            lines.append(f"{key}={value!r}" if isinstance(value, float) else f"{key}={value}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        types = {f.name: f.type for f in fields(cls)}
        values = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            name = cls._KEYS.get(key, key)
            if name not in types:
                raise ValueError(f"line {lineno}: unknown key {key!r}")
            if name == "kind":
                values[name] = value
            elif name in ("m", "n", "structure", "seed", "block_size"):
                values[name] = int(value)
            else:
                values[name] = float(value)
        missing = {"kind", "m", "n", "structure"} - values.keys()
        if missing:
            raise ValueError(f"instance spec lacks {sorted(missing)}")
        return cls(**values)

    @classmethod
    def read(cls, path):
        return cls.from_text(Path(path).read_text())

    def write(self, path):
        Path(path).write_text(self.to_text())

    def scaled(self, factor=4):
        """Shrink dimensions and structure counts by ``factor`` (the ``--small`` mode)."""
        return replace(
            self,
            m=max(1, self.m // factor),
            n=max(self.block_size if self.kind == "group" else 1, self.n // factor),
            structure=max(1, self.structure // factor) if self.kind != "pcp" else self.structure,
        )

    def build(self, seed=None):
        seed = self.seed if seed is None else seed
        if self.kind == "pcp":
            return gen_pcp(self.m, self.n, self.structure, self.sparse_fraction, seed, self.noise_level, self.lam, self.lam2)
        return gen_linear_inverse(self.kind, self.m, self.n, self.structure, seed, self.noise_level, self.block_size, self.lam)


PRESETS = {
    "l1": InstanceSpec("sparse", 768, 2048, 128),
    "l12": InstanceSpec("group", 512, 2048, 16),
    "linf": InstanceSpec("saturated", 1020, 1024, 10),
    "pcp": InstanceSpec("pcp", 64, 64, 2, noise_level=0.0),
}


@dataclass(frozen=True)
class Scheme:
    """A named solver configuration: ``fbs``, a FISTA schedule, or ``ada``."""

    name: str
    kind: str
    params: Optional[MomentumParams] = None
    kappa: Optional[int] = None

    def run(self, problem, tol=COMPARISON_TOL, max_iters=10000, record_objective=False, instance_kind=None, x0=None):
        config = SolverConfig(max_iters=max_iters, tol=tol, record_objective=record_objective, schedule=self.params, x0=x0)
        if self.kind == "fbs":
            return solve_fbs(problem, config)
        if self.kind == "fista":
            return solve_fista(problem, config)
        kappa = self.kappa if self.kappa is not None else ADA_KAPPA.get(instance_kind, DEFAULT_KAPPA)
        return solve_ada_fista(problem, config, AdaConfig(kappa=kappa))


_SHORT = {
    "bt": lambda: MomentumParams.bt(),
    "lazy": lambda: MomentumParams.lazy(),
}


def parse_scheme(text):
    """Parse ``bt``, ``lazy``, ``fbs``, ``cd<d>``, ``cd:d=..``, ``mod:p=..,q=..[,r=..]``, ``ada[:kappa=..]``."""
    text = text.strip()
    head, _, rest = text.partition(":")
    opts = {}
    if rest:
        for item in rest.split(","):
            key, sep, value = item.partition("=")
            if not sep:
                raise ValueError(f"bad scheme option {item!r} in {text!r}")
            opts[key.strip()] = float(value)
    if head in _SHORT and not opts:
        return Scheme(text, "fista", _SHORT[head]())
    if head == "fbs":
        return Scheme(text, "fbs")
    m = re.fullmatch(r"cd(\d+(?:\.\d+)?)?", head)
    if m:
        d = float(m.group(1)) if m.group(1) else opts.pop("d", None)
        if d is None:
            raise ValueError("cd scheme needs a value for d")
        return Scheme(text, "fista", MomentumParams.cd(d))
    if head == "mod":
        return Scheme(text, "fista", MomentumParams.mod(opts.get("p", 1.0), opts.get("q", 1.0), opts.get("r", 4.0)))
    if head == "ada":
        kappa = opts.get("kappa")
        return Scheme(text, "ada", kappa=None if kappa is None else int(kappa))
    raise ValueError(f"unknown scheme {text!r}")


@dataclass
class ReferenceSolution:
    x_star: np.ndarray
    phi_star: float
    converged: bool
    iterations: int


def reference_solution(problem, precision=1e-13, max_iters=10**6):
    """High-accuracy minimizer from lazy-start FISTA-Mod run to ``||dx|| <= precision``."""
    if not precision > 0:
        raise ValueError("precision must be positive")
    res = solve_fista(problem, SolverConfig(max_iters=max_iters, tol=precision, schedule=MomentumParams.lazy()))
    if res.reason != "tol":
        log.warning("reference run stopped at max_iters=%d with ||dx||=%.3g", max_iters, res.trace[-1].norm_dx)
    return ReferenceSolution(res.x, problem.objective(res.x), res.reason == "tol", res.iterations)


@dataclass
class RunOutcome:
    scheme: str
    seed: int
    iterations: Optional[int]
    reached: bool
    wall_s: float
    error: Optional[str] = None
    trace_path: Optional[str] = None


@dataclass
class ComparisonReport:
    schemes: List[str]
    seeds: List[int]
    tol: float
    max_iters: int
    runs: List[RunOutcome] = field(default_factory=list)

    def _runs(self, scheme):
        return [r for r in self.runs if r.scheme == scheme and r.error is None]

    def median_iterations(self, scheme):
        """Median over seeds; runs that missed ``tol`` count as ``max_iters`` (a lower bound)."""
        its = [r.iterations if r.reached else self.max_iters for r in self._runs(scheme)]
        return statistics.median(its) if its else None

    def reached_all(self, scheme):
        runs = self._runs(scheme)
        return bool(runs) and all(r.reached for r in runs) and len(runs) == len(self.seeds)

    def speedup(self, a, b):
        """``iters(b) / iters(a)``: how many times faster ``a`` is than ``b``."""
        ia, ib = self.median_iterations(a), self.median_iterations(b)
        if ia is None or ib is None:
            return None
        return ib / ia

    def iterations_table(self):
        return {s: [r.iterations for r in sorted(self._runs(s), key=lambda r: r.seed)] for s in self.schemes}

    def to_text(self, baseline="bt"):
        lines = [f"tol={self.tol:g} max_iters={self.max_iters} seeds={self.seeds}"]
        lines.append(f"{'scheme':<22}{'median iters':>14}{'speedup vs ' + baseline:>18}")
        for s in self.schemes:
            med = self.median_iterations(s)
            cell = "failed" if med is None else (f"{med:g}" if self.reached_all(s) else f">= {self.max_iters}")
            sp = self.speedup(s, baseline) if baseline in self.schemes else None
            lines.append(f"{s:<22}{cell:>14}{'' if sp is None else f'{sp:.2f}x':>18}")
        for r in self.runs:
            if r.error:
                lines.append(f"error: {r.scheme} seed={r.seed}: {r.error}")
        return "\n".join(lines)


def _thread_cap(threads):
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get(THREADS_ENV)
    return max(1, int(env)) if env else (os.cpu_count() or 1)


def _safe(name):
    return re.sub(r"[^A-Za-z0-9_.=-]+", "_", name)


def run_comparison(spec, schemes=DEFAULT_SCHEMES, tol=COMPARISON_TOL, max_iters=100000, seeds=(0,), out_dir=None, threads=None):
    """Run every scheme on every seeded instance from ``x0 = 0``.

    One trace CSV per (scheme, seed) is written under ``out_dir`` when given.
    Numerical failures are recorded per run and do not stop the others.
    """
    parsed = [s if isinstance(s, Scheme) else parse_scheme(s) for s in schemes]
    report = ComparisonReport([s.name for s in parsed], list(seeds), tol, max_iters)
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)

    def one(scheme, seed, problem):
        start = time.perf_counter()
        try:
            res = scheme.run(problem, tol=tol, max_iters=max_iters, instance_kind=spec.kind)
        except NumericalFailure as exc:
            return RunOutcome(scheme.name, seed, exc.iteration, False, time.perf_counter() - start, str(exc))
        path = None
        if out is not None:
            path = out / f"{spec.kind}_seed{seed}_{_safe(scheme.name)}.csv"
            with open(path, "w") as fh:
                res.trace.to_csv(fh)
        log.info("%s seed=%d: %d iterations (%s)", scheme.name, seed, res.iterations, res.reason)
        return RunOutcome(scheme.name, seed, res.iterations, res.reason == "tol", time.perf_counter() - start, None, None if path is None else str(path))

    with ThreadPoolExecutor(max_workers=_thread_cap(threads)) as pool:
        futures = []
        for seed in seeds:
            problem = spec.build(seed)
            futures.extend(pool.submit(one, s, seed, problem) for s in parsed)
        report.runs = [f.result() for f in futures]
    return report
