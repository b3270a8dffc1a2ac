"""Experiment configuration, batch runs, artifact output and side-by-side comparison."""

import dataclasses
import json
import logging
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import io as amg_io
from ._validation import check_scalar
from .benchmarks import get_benchmark
from .direction import ActiveSetConfig
from .exceptions import InputError
from .metrics import grid_pareto_oracle, hypervolume, nondominated_filter, reference_point_from_front
from .preferences import RestorationConfig, explicit_preferences, simplex_grid_preferences, trig_preferences
from .solver import SolveConfig, solve_front
from .stepsize import StepConfig

__all__ = [
    "ExperimentConfig",
    "RunResult",
    "solve_config_from_dict",
    "solve_config_to_dict",
    "oracle_front",
    "default_reference_point",
    "run_experiment",
    "write_artifacts",
    "run",
    "compare",
]

logger = logging.getLogger(__name__)

ALGORITHMS = ("amg", "amg_pref")
PREFERENCE_MODES = ("trig2d", "simplex_grid", "explicit")

_STEP_KEYS = {"sigma", "kappa", "alpha0"}
_RESTORE_KEYS = {"eta": "eta", "restoration_max_iters": "max_iters",
                 "restoration_all_constraints": "all_constraints", "restoration_tol": "tol"}
_ACTIVE_KEYS = {"epsilon": "epsilon", "epsilon_relative": "relative"}
_TOP_KEYS = {"theta_tol", "qp_tol", "max_iters", "reject_on_fail", "seed"}


def solve_config_from_dict(d):
    """Build a :class:`SolveConfig` from the flat ``"solve"`` section of a config file."""
    d = dict(d or {})
    unknown = set(d) - _STEP_KEYS - set(_RESTORE_KEYS) - set(_ACTIVE_KEYS) - _TOP_KEYS
    if unknown:
        raise InputError(f"unknown solve option(s): {sorted(unknown)}")
    step = StepConfig(**{k: d[k] for k in _STEP_KEYS if k in d})
    restoration = RestorationConfig(**{v: d[k] for k, v in _RESTORE_KEYS.items() if k in d})
    active = ActiveSetConfig(**{v: d[k] for k, v in _ACTIVE_KEYS.items() if k in d})
    return SolveConfig(step=step, restoration=restoration, active_set=active,
                       **{k: d[k] for k in _TOP_KEYS if k in d})


def solve_config_to_dict(cfg):
    out = {k: getattr(cfg.step, k) for k in sorted(_STEP_KEYS)}
    out.update({k: getattr(cfg.restoration, v) for k, v in _RESTORE_KEYS.items()})
    out.update({k: getattr(cfg.active_set, v) for k, v in _ACTIVE_KEYS.items()})
    out.update({k: getattr(cfg, k) for k in sorted(_TOP_KEYS)})
    return out


@dataclass
class ExperimentConfig:
    benchmark: str
    algorithm: str = "amg_pref"
    K: Optional[int] = 10
    preference_mode: str = "trig2d"
    delta: Optional[float] = None
    preferences: Optional[list] = None
    starts: Optional[int] = None
    benchmark_params: dict = field(default_factory=dict)
    solve: SolveConfig = field(default_factory=SolveConfig)
    output_dir: Optional[str] = None
    emit_svg: bool = True
    n_jobs: Optional[int] = None

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise InputError(f"unknown config key(s): {sorted(unknown)}")
        if "benchmark" not in d:
            raise InputError("config needs a 'benchmark' entry")
        d["solve"] = solve_config_from_dict(d.get("solve"))
        cfg = cls(**d)
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path):
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read config {path}: {exc}") from exc
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InputError(f"{path} is not valid JSON: {exc}") from exc

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["solve"] = solve_config_to_dict(self.solve)
        return d

    def with_overrides(self, seed=None, output_dir=None):
        cfg = self
        if seed is not None:
            cfg = dataclasses.replace(cfg, solve=dataclasses.replace(cfg.solve, seed=seed))
        if output_dir is not None:
            cfg = dataclasses.replace(cfg, output_dir=str(output_dir))
        cfg.validate()
        return cfg

    def make_problem(self):
        try:
            return get_benchmark(self.benchmark).make(**self.benchmark_params)
        except TypeError as exc:
            raise InputError(f"bad benchmark_params for {self.benchmark}: {exc}") from exc

    def make_preferences(self, m):
        if self.preference_mode == "trig2d":
            if m != 2:
                raise InputError(f"trig2d preferences need 2 objectives, {self.benchmark} has {m}")
            return trig_preferences(self.K)
        if self.preference_mode == "simplex_grid":
            return simplex_grid_preferences(m, self.delta)
        return explicit_preferences(self.preferences)

    def validate(self):
        get_benchmark(self.benchmark)
        if self.algorithm not in ALGORITHMS:
            raise InputError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.preference_mode not in PREFERENCE_MODES:
            raise InputError(f"preference_mode must be one of {PREFERENCE_MODES}, got {self.preference_mode!r}")
        if self.preference_mode == "trig2d" or self.algorithm == "amg":
            if self.K is None:
                raise InputError("K is required")
            check_scalar(self.K, "K", low=1, integer=True)
        if self.algorithm == "amg_pref":
            if self.preference_mode == "simplex_grid":
                if self.delta is None:
                    raise InputError("simplex_grid preferences need 'delta'")
                steps = 1.0 / check_scalar(self.delta, "delta", low=0.0, high=1.0, include_low=False)
                if abs(steps - round(steps)) > 1e-9:
                    raise InputError(f"1/delta must be an integer, got {steps}")
            if self.preference_mode == "explicit" and not self.preferences:
                raise InputError("explicit preference mode needs a 'preferences' list")
        if self.starts is not None:
            check_scalar(self.starts, "starts", low=1, integer=True)
        if not isinstance(self.benchmark_params, dict):
            raise InputError("benchmark_params must be a JSON object")


@dataclass
class RunResult:
    config: ExperimentConfig
    problem: object
    preferences: object
    starts: np.ndarray
    front: object
    wall_time: float

    def summary(self, ref=None):
        objs = self.front.objectives
        if ref is None:
            ref = default_reference_point(self.config, self.problem, objs)
        hv = _front_hypervolume(objs, ref)
        traces = self.front.traces
        return {
            "benchmark": self.config.benchmark,
            "algorithm": self.config.algorithm,
            "n_subproblems": len(self.preferences) if self.preferences is not None else None,
            "n_starts": int(len(self.starts)),
            "seed": self.config.solve.seed,
            "hypervolume": hv,
            "reference_point": None if ref is None else [float(r) for r in ref],
            "n_points": int(len(objs)),
            "n_nondominated": int(len(self.front.nondominated())),
            "wall_time_s": self.wall_time,
            "iterations": [t.n_steps for t in traces],
            "terminations": [t.termination for t in traces],
            "failures": [{"subproblem": t.subproblem, "termination": t.termination, "message": t.message}
                         for t in traces if not t.succeeded],
        }


def _front_hypervolume(objs, ref):
    if len(objs) == 0 or ref is None:
        warnings.warn("empty front: hypervolume reported as 0", RuntimeWarning, stacklevel=3)
        return 0.0
    if objs.shape[1] not in (2, 3):
        return None
    return hypervolume(objs, ref)


def oracle_front(benchmark, problem, resolution=200):
    """Dense reference front for a benchmark, or ``None`` when no oracle exists.

    The quadratic and fractional examples use a decision-space grid; the
    Gaussian-bowl examples use their analytic Pareto set, the segment
    ``{c 1 : |c| <= 1/d}``.
    """
    if benchmark == "ex1_convex_quadratic":
        return grid_pareto_oracle(problem, 0.0, 4.5, resolution)
    if benchmark == "ex2_pseudoconvex_fractional":
        return grid_pareto_oracle(problem, 0.0, 2.0, resolution)
    if benchmark in ("ex3_lin_toy_2obj", "ex4_lin_toy_3obj"):
        d = problem.n
        cs = np.linspace(-1.0 / d, 1.0 / d, 1001)
        return nondominated_filter(np.array([problem.evaluate(np.full(d, c)) for c in cs]))
    return None


_REF_CACHE = {}


def default_reference_point(config, problem, fallback_front=None):
    """Oracle worst point plus 10% of its range; the run's own front if no oracle exists."""
    key = (config.benchmark, json.dumps(config.benchmark_params, sort_keys=True))
    if key not in _REF_CACHE:
        oracle = oracle_front(config.benchmark, problem)
        _REF_CACHE[key] = None if oracle is None else reference_point_from_front(oracle)
    ref = _REF_CACHE[key]
    if ref is None and fallback_front is not None and len(fallback_front):
        ref = reference_point_from_front(fallback_front)
    return None if ref is None else np.array(ref)


def run_experiment(config):
    """Solve every subproblem of ``config`` in memory."""
    config.validate()
    problem = config.make_problem()
    prefs = config.make_preferences(problem.m) if config.algorithm == "amg_pref" else None
    base = len(prefs) if prefs is not None else config.K
    n_starts = config.starts if config.starts is not None else base
    if prefs is not None and n_starts % len(prefs):
        raise InputError(f"starts={n_starts} must be a multiple of the {len(prefs)} subproblems")
    rng = np.random.default_rng(config.solve.seed)
    starts = get_benchmark(config.benchmark).sample_starts(problem, n_starts, rng)
    t0 = time.perf_counter()
    front = solve_front(problem, prefs, starts, config.solve, n_jobs=config.n_jobs)
    return RunResult(config, problem, prefs, starts, front, time.perf_counter() - t0)


def write_artifacts(result, out_dir, ref=None):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    problem = result.problem
    amg_io.write_front_csv(out / "front.csv", result.front, problem.n, problem.m)
    amg_io.write_traces_jsonl(out / "traces.jsonl", result.front.traces)
    amg_io.write_trace_summary_csv(out / "trace_summary.csv", result.front.traces, problem.m)
    summary = result.summary(ref)
    summary["config"] = result.config.to_dict()
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    if result.config.emit_svg:
        svg = amg_io.front_svg(result.front.objectives, title=f"{result.config.benchmark} ({result.config.algorithm})")
        (out / "front.svg").write_text(svg, encoding="utf-8")
    return summary


def run(config, out_dir=None):
    """Run ``config`` and write front.csv, traces.jsonl, summary.json (and front.svg)."""
    out_dir = out_dir or config.output_dir
    if out_dir is None:
        raise InputError("no output directory given")
    result = run_experiment(config)
    return write_artifacts(result, out_dir)


def compare(config_a, config_b, labels=("a", "b")):
    """Hypervolume, iteration count and wall time of two configs on one benchmark."""
    if (config_a.benchmark, config_a.benchmark_params) != (config_b.benchmark, config_b.benchmark_params):
        raise InputError(f"cannot compare different benchmarks: {config_a.benchmark} vs {config_b.benchmark}")
    results = [run_experiment(config_a), run_experiment(config_b)]
    union = [r.front.objectives for r in results if len(r.front.objectives)]
    fallback = np.vstack(union) if union else None
    ref = default_reference_point(config_a, results[0].problem, fallback)
    rows = []
    for label, res in zip(labels, results):
        summary = res.summary(ref)
        rows.append({
            "label": label,
            "algorithm": res.config.algorithm,
            "hypervolume": summary["hypervolume"],
            "iterations": int(sum(summary["iterations"])),
            "wall_time_s": summary["wall_time_s"],
            "n_points": summary["n_points"],
            "failures": len(summary["failures"]),
        })
    return {"benchmark": config_a.benchmark,
            "reference_point": None if ref is None else [float(r) for r in ref],
            "rows": rows}
