"""Greedy driver: adaptive sampling with |Q|^-1 as indicator.

The loop starts from a single sample, refits the barycentric surrogate at
every iteration, evaluates the configured termination rule and, while the
rule fails, samples the transfer function at the grid point maximizing the
indicator. Termination rules:

  max_count          stop at a fixed sample budget, no error estimate
  density            stop when the next point gets too close (in log10 f)
                     to an existing sample
  lookahead          1-point error check at the next greedy point; the
                     test sample is reused as the next training sample on
                     failure, so only the terminal sample is "wasted"
  lookahead_memory   lookahead that must succeed N_memory times in a row
  batch              error check at the N largest interior local maxima of
                     the indicator; only the argmax point joins training
  randomized         error check at N frozen log-uniform random points,
                     sampled once up front and never added to training

All rules additionally respect the max_samples safety cap.
"""
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import GridExhaustedError, ResonanceError
from .fitters import fit
from .system_model import DescriptorSystem, FrequencySample

TERMINATION_KINDS = (
    "max_count",
    "density",
    "lookahead",
    "lookahead_memory",
    "batch",
    "randomized",
)


@dataclass(frozen=True)
class TerminationRule:
    kind: str = "lookahead"
    n_memory: int = 1
    n_batch: int = 1
    n_random: int = 1
    min_gap: float = 1e-3

    def __post_init__(self):
        if self.kind not in TERMINATION_KINDS:
            raise ValueError(
                f"unknown termination kind {self.kind!r}; "
                f"expected one of {', '.join(TERMINATION_KINDS)}"
            )
        if self.kind == "lookahead_memory" and self.n_memory < 1:
            raise ValueError("n_memory must be >= 1")
        if self.kind == "batch" and self.n_batch < 1:
            raise ValueError("n_batch must be >= 1")
        if self.kind == "randomized" and self.n_random < 1:
            raise ValueError("n_random must be >= 1")
        if self.kind == "density" and self.min_gap <= 0:
            raise ValueError("min_gap must be positive")


@dataclass(frozen=True)
class GreedyConfig:
    f_min: float
    f_max: float
    grid_size: int = 10_000
    tol: float = 1e-3
    delta: float = 1e-8
    fitter: str = "loewner"
    termination: TerminationRule = field(default_factory=TerminationRule)
    max_samples: int = 200
    seed: int = 0

    def __post_init__(self):
        if not (0 < self.f_min < self.f_max):
            raise ValueError("need 0 < f_min < f_max")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        if self.grid_size < 2:
            raise ValueError("grid_size must be >= 2")
        if self.fitter not in ("loewner", "mri"):
            raise ValueError(f"unknown fitter {self.fitter!r}")


@dataclass
class IterationRecord:
    iteration: int
    n_samples: int
    chosen: complex
    anchor: complex
    estimator: float
    flag: bool
    n_memory: int
    test_calls: int
    oracle_calls: int
    elapsed: float


@dataclass
class GreedyTrace:
    records: list = field(default_factory=list)
    surrogates: list = field(default_factory=list)
    samples: list = field(default_factory=list)
    termination_reason: str = ""
    oracle_calls: int = 0
    resonances: list = field(default_factory=list)

    @property
    def surrogate(self):
        return self.surrogates[-1] if self.surrogates else None

    @property
    def n_iterations(self):
        return len(self.records)

    @property
    def sampled_frequencies(self):
        return [s.z for s in self.samples]

    @property
    def hit_safety_cap(self):
        return self.termination_reason == "max_samples"


def build_test_grid(cfg):
    """grid_size geometrically spaced points i*f on [f_min, f_max]."""
    return 1j * np.geomspace(cfg.f_min, cfg.f_max, cfg.grid_size)


def adjusted_relative_error(exact, approx, delta):
    """||approx - exact||_F / (||exact||_F + delta)."""
    exact = np.asarray(exact)
    approx = np.asarray(approx)
    return float(np.linalg.norm(approx - exact) / (np.linalg.norm(exact) + delta))


def _indicator_masked(sur, grid, excluded):
    ind = sur.indicator_grid(grid)
    if excluded:
        mask = np.isin(grid, np.fromiter(excluded, dtype=np.complex128))
        ind = ind.copy()
        ind[mask] = -1.0
    return ind


def next_point(sur, grid, sampled):
    """Grid point maximizing the indicator, skipping sampled points.

    Ties break to the lowest grid index. The indicator vanishes at support
    nodes, so only non-node sampled points (e.g. the Loewner test
    partition) need the explicit exclusion.
    """
    grid = np.asarray(grid)
    if grid.size == 0:
        raise GridExhaustedError("empty test grid")
    ind = _indicator_masked(sur, grid, sampled)
    k = int(np.argmax(ind))
    if ind[k] < 0:
        raise GridExhaustedError("all grid points already sampled")
    return complex(grid[k])


def batch_test_points(sur, grid, sampled, n):
    """Top-n interior local maxima of the indicator, by value, descending.

    Falls back to the global argmax when no interior local maximum
    survives the exclusion of already-sampled points.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    grid = np.asarray(grid)
    ind = _indicator_masked(sur, grid, sampled)
    interior = np.arange(1, grid.size - 1)
    is_max = (ind[interior] > ind[interior - 1]) & (ind[interior] > ind[interior + 1])
    cand = interior[is_max & (ind[interior] >= 0)]
    if cand.size == 0:
        return [next_point(sur, grid, sampled)]
    order = cand[np.argsort(-ind[cand], kind="stable")]
    return [complex(grid[k]) for k in order[:n]]


def random_test_points(cfg):
    """n_random frozen points i*f with log(f) uniform on [log f_min, log f_max]."""
    rng = np.random.default_rng(cfg.seed)
    logf = rng.uniform(math.log(cfg.f_min), math.log(cfg.f_max), cfg.termination.n_random)
    return [1j * math.exp(x) for x in logf]


def _as_oracle(oracle):
    if isinstance(oracle, DescriptorSystem):
        return oracle.eval_transfer
    return oracle


def run_greedy(oracle, cfg):
    """Adaptive sampling loop; returns the full iteration trace.

    ``oracle`` is a DescriptorSystem or any callable z -> p-by-m array.
    Sampling failures at resonant frequencies are recorded and the
    offending grid point is excluded rather than aborting the run.
    """
    rule = cfg.termination
    grid = build_test_grid(cfg)
    eval_oracle = _as_oracle(oracle)
    trace = GreedyTrace()

    calls = 0

    def call(z):
        nonlocal calls
        val = eval_oracle(z)
        calls += 1
        return val

    sampled = set()
    banned = set()

    def take(z, value=None):
        value = call(z) if value is None else value
        trace.samples.append(FrequencySample(z, value))
        sampled.add(complex(z))
        return value

    def pick(sur):
        """Next greedy point, skipping resonant grid points."""
        while True:
            z = next_point(sur, grid, sampled | banned)
            try:
                return z, call(z)
            except ResonanceError:
                trace.resonances.append(z)
                banned.add(z)

    # First sample: the grid point nearest the geometric midpoint of the
    # range, walking outward on resonance failures.
    f_mid = math.sqrt(cfg.f_min * cfg.f_max)
    for k in np.argsort(np.abs(grid.imag - f_mid)):
        z1 = complex(grid[k])
        try:
            take(z1)
            break
        except ResonanceError:
            trace.resonances.append(z1)
            banned.add(z1)
    else:
        raise GridExhaustedError("no non-resonant grid point for the first sample")

    if rule.kind == "randomized":
        random_pts, random_vals = [], []
        for z in random_test_points(cfg):
            try:
                random_vals.append(call(z))
                random_pts.append(z)
            except ResonanceError:
                trace.resonances.append(z)

    n_memory = 0
    iteration = 0
    while True:
        t0 = time.perf_counter()
        iteration += 1
        n_samples = len(trace.samples)
        sur = fit(trace.samples, cfg.fitter)
        trace.surrogates.append(sur)

        estimator = math.nan
        anchor = complex(math.nan, math.nan)
        chosen = complex(math.nan, math.nan)
        flag = False
        test_calls = 0
        reason = ""
        pending = None  # (z, value) to append on continuation

        if rule.kind == "max_count":
            flag = n_samples >= cfg.max_samples
            if flag:
                reason = "max_count"
            else:
                chosen, value = pick(sur)
                pending = (chosen, value)
        elif rule.kind == "density":
            chosen, value = pick(sur)
            logf = np.log10(np.array([s.z.imag for s in trace.samples]))
            gap = float(np.min(np.abs(np.log10(chosen.imag) - logf)))
            flag = gap < rule.min_gap
            if flag:
                reason = "density"
                test_calls = 1  # the probe sample is discarded
            else:
                pending = (chosen, value)
        elif rule.kind in ("lookahead", "lookahead_memory"):
            depth = rule.n_memory if rule.kind == "lookahead_memory" else 1
            chosen, value = pick(sur)
            anchor = chosen
            estimator = adjusted_relative_error(value, sur.eval(chosen), cfg.delta)
            flag = estimator < cfg.tol
            if flag:
                n_memory += 1
                if n_memory >= depth:
                    reason = rule.kind
                    test_calls = 1  # the only wasted sample of the whole run
                else:
                    pending = (chosen, value)
            else:
                n_memory = 0
                pending = (chosen, value)
        elif rule.kind == "batch":
            pts = batch_test_points(sur, grid, sampled | banned, rule.n_batch)
            errs = []
            for z in pts:
                try:
                    errs.append(adjusted_relative_error(call(z), sur.eval(z), cfg.delta))
                    test_calls += 1
                except ResonanceError:
                    trace.resonances.append(z)
                    banned.add(z)
            if errs:
                j = int(np.argmax(errs))
                estimator = errs[j]
                anchor = pts[j]
                flag = estimator < cfg.tol
            if flag:
                reason = "batch"
            else:
                chosen, value = pick(sur)
                pending = (chosen, value)
        elif rule.kind == "randomized":
            errs = [
                adjusted_relative_error(v, sur.eval(z), cfg.delta)
                for z, v in zip(random_pts, random_vals)
            ]
            j = int(np.argmax(errs))
            estimator = errs[j]
            anchor = random_pts[j]
            flag = estimator < cfg.tol
            if flag:
                reason = "randomized"
            else:
                chosen, value = pick(sur)
                pending = (chosen, value)

        if not reason and rule.kind != "max_count" and n_samples >= cfg.max_samples:
            reason = "max_samples"
            if pending is not None:
                test_calls += 1  # the pending probe sample is discarded
                pending = None

        trace.records.append(
            IterationRecord(
                iteration=iteration,
                n_samples=n_samples,
                chosen=chosen,
                anchor=anchor,
                estimator=estimator,
                flag=flag,
                n_memory=n_memory,
                test_calls=test_calls,
                oracle_calls=calls,
                elapsed=time.perf_counter() - t0,
            )
        )
        if reason:
            trace.termination_reason = reason
            trace.oracle_calls = calls
            return trace
        if pending is not None:
            take(*pending)


def estimator_curve(sur, estimate, anchor, grid):
    """Rescaled indicator eta(z) = estimate * |Q(anchor)| / |Q(z)|.

    Interpolates the supplied error estimate at the anchor frequency and
    inherits the indicator's shape everywhere else.
    """
    q_anchor = abs(sur.eval_denominator(anchor))
    ind = sur.indicator_grid(np.asarray(grid))
    return estimate * q_anchor * ind
