"""Experiment drivers: single runs, block-size and tolerance sweeps, comparisons.

Every driver writes plain CSV/JSON files into an existing output directory.
Floats are written with 17 significant digits so the files round-trip.
"""
from __future__ import annotations

import configparser
import csv
import dataclasses
import importlib
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .approximant import eval_cur, eval_truncated, error_grid, l2_gap
from .cur import ALGORITHMS, STOP_REASONS, cur_fixed, estimate_orders
from .errors import CapacityError, ExperimentIOError, InvalidArgumentError
from .oracle import CoeffOracle
from .quadrature import QuadKind, make_rule
from .testfns import get_function

__all__ = [
    "ExperimentConfig", "RunSummary", "load_config", "resolve_function",
    "run_approx", "sweep_blocks", "sweep_tau", "compare",
    "DEFAULT_PAIRS", "DEFAULT_TAUS", "METHOD_LABELS", "ERRORS_HEADER",
]

DEFAULT_PAIRS = [(b, b) for b in range(2, 21, 2)]
DEFAULT_TAUS = [10.0**-p for p in range(1, 11)]
ERRORS_HEADER = ["x1", "x2", "f", "approx_real", "approx_imag", "err"]
METHOD_LABELS = {
    "truncated": "Truncated Fourier",
    "alg1": "Algorithm 1",
    "alg2": "Algorithm 2",
    "algc1": "Algorithm C.1",
}
ALGORITHM_CHOICES = ("alg1", "alg2", "algc1", "truncated", "fixed")


def fmt(x):
    """17 significant digits for floats, plain text otherwise."""
    if isinstance(x, (float, np.floating)):
        return "%.17g" % x
    if x is None:
        return ""
    return str(x)


@dataclass
class ExperimentConfig:
    function: str = "f2"
    quad: str = "NC"
    M1: int = 501
    M2: int = 501
    I1: int = None
    I2: int = None
    alpha: int = 2
    eps: float = 1e-4
    C_const: float = 1.0
    seminorm: float = 1.0
    b1: int = 6
    b2: int = 6
    tau: float = 1e-5
    K: int = 10
    grid_n: int = 60
    repeats: int = 1
    algorithm: str = "alg2"
    output_dir: str = "."
    # cap on (2I1+1)(2I2+1) for runs that need every coefficient
    budget: int = 10**6
    # compute the full matrix as a reference when it fits in the budget
    reference: bool = True
    compensated: bool = False
    fixed_mode: str = "cross"
    quads: str = "CC,GL,NC"
    functions: str = "f1,f2,f3"

    def orders(self):
        if self.I1 is not None or self.I2 is not None:
            I1 = self.I1 if self.I1 is not None else self.I2
            I2 = self.I2 if self.I2 is not None else self.I1
            return int(I1), int(I2)
        est = estimate_orders(self.alpha, self.eps, self.C_const, self.seminorm)
        return est.I1, est.I2

    def validate(self):
        QuadKind.parse(self.quad)
        for q in self.quad_list():
            QuadKind.parse(q)
        if self.algorithm not in ALGORITHM_CHOICES:
            raise InvalidArgumentError(
                f"algorithm must be one of {', '.join(ALGORITHM_CHOICES)}, got {self.algorithm!r}"
            )
        for name in ("M1", "M2", "b1", "b2", "K", "grid_n", "repeats", "budget"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise InvalidArgumentError(f"{name} must be a positive integer, got {v!r}")
        if self.grid_n < 2:
            raise InvalidArgumentError("grid_n must be at least 2")
        if not 0 < self.tau < 1:
            raise InvalidArgumentError(f"tau must lie in (0, 1), got {self.tau!r}")
        I1, I2 = self.orders()
        if I1 < 0 or I2 < 0:
            raise InvalidArgumentError("truncation orders must be nonnegative")
        return self

    def quad_list(self):
        return [q.strip().upper() for q in str(self.quads).split(",") if q.strip()]

    def function_list(self):
        return [f.strip() for f in str(self.functions).split(",") if f.strip()]

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}


def _coerce(name, value):
    if value is None:
        return None
    kind = _FIELD_TYPES[name]
    if isinstance(value, str):
        text = value.strip()
        if text.lower() in ("", "none", "null"):
            return None
    else:
        text = value
    try:
        if kind == "int":
            f = float(text)
            if f != int(f):
                raise ValueError
            return int(f)
        if kind == "float":
            return float(text)
        if kind == "bool":
            if isinstance(text, bool):
                return text
            low = str(text).lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"invalid value {value!r} for {name}") from None
    return str(text)


def load_config(path=None, overrides=None) -> ExperimentConfig:
    """Read flat ``key = value`` lines (``#`` comments) and apply overrides."""
    values = {}
    if path is not None:
        p = Path(path)
        try:
            text = p.read_text()
        except OSError as exc:
            raise ExperimentIOError(f"cannot read config {p}: {exc}", path=str(p)) from exc
        parser = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
        parser.optionxform = str
        try:
            parser.read_string("[experiment]\n" + text)
        except configparser.Error as exc:
            raise InvalidArgumentError(f"malformed config {p}: {exc}") from exc
        for key, val in parser["experiment"].items():
            if key not in _FIELD_TYPES:
                raise InvalidArgumentError(f"unknown config key {key!r} in {p}")
            values[key] = val
    for key, val in (overrides or {}).items():
        if val is None:
            continue
        if key not in _FIELD_TYPES:
            raise InvalidArgumentError(f"unknown config key {key!r}")
        values[key] = val
    cfg = ExperimentConfig(**{k: _coerce(k, v) for k, v in values.items()})
    return cfg.validate()


def resolve_function(spec):
    """Registered name, ``expr:<numpy expression in x1, x2>`` or ``module:attr``."""
    if callable(spec):
        return spec
    spec = str(spec)
    if spec.startswith("expr:"):
        expr = spec[5:]
        try:
            code = compile(expr, "<function>", "eval")
        except SyntaxError as exc:
            raise InvalidArgumentError(f"bad function expression {expr!r}: {exc}") from exc

        def func(x1, x2):
            return eval(code, {"np": np, "pi": np.pi, "__builtins__": {}}, {"x1": x1, "x2": x2})

        func.__name__ = expr
        return func
    if ":" in spec:
        mod_name, _, attr = spec.partition(":")
        try:
            return getattr(importlib.import_module(mod_name), attr)
        except (ImportError, AttributeError) as exc:
            raise InvalidArgumentError(f"cannot import function {spec!r}: {exc}") from exc
    return get_function(spec)


@dataclass
class RunSummary:
    function: str
    algorithm: str
    quad: str
    I1: int
    I2: int
    M1: int
    M2: int
    b1: int
    b2: int
    tau: float
    K: int
    max_err: float
    l2_gap: float
    max_err_vs_truncated: float
    S1: int
    S2: int
    iterations: int
    n_integrals: int
    elapsed_seconds: float
    stop_reason: str
    max_imag_residue: float
    backend: str = field(default_factory=lambda: kernels.BACKEND)

    def to_json(self):
        d = dataclasses.asdict(self)
        for k, v in d.items():
            if isinstance(v, float) and not math.isfinite(v):
                d[k] = None
        return d


def _require_dir(path) -> Path:
    p = Path(path)
    if not p.is_dir():
        raise ExperimentIOError(f"output directory does not exist: {p}", path=str(p))
    return p


def _write(path: Path, writer_fn):
    try:
        with path.open("w", newline="") as fh:
            writer_fn(fh)
    except OSError as exc:
        raise ExperimentIOError(f"cannot write {path}: {exc}", path=str(path)) from exc


def write_errors_csv(path, report):
    def go(fh):
        w = csv.writer(fh)
        w.writerow(ERRORS_HEADER)
        for row in report.rows():
            w.writerow([fmt(float(v)) for v in row])
    _write(Path(path), go)


def write_table(path, header, rows):
    def go(fh):
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    _write(Path(path), go)


def _check_budget(cfg, I1, I2, what):
    n = (2 * I1 + 1) * (2 * I2 + 1)
    if n > cfg.budget:
        raise CapacityError(f"{what} needs {n} double integrals, above budget {cfg.budget}")


def _single_run(cfg: ExperimentConfig, f, quad):
    """One oracle construction plus model build; returns (oracle, model-or-A, seconds)."""
    I1, I2 = cfg.orders()
    t0 = time.perf_counter()
    o = CoeffOracle(f, I1, I2, make_rule(quad, cfg.M1), make_rule(quad, cfg.M2),
                    compensated=cfg.compensated)
    if cfg.algorithm == "truncated":
        result = o.full_matrix()
    elif cfg.algorithm == "fixed":
        T1 = np.arange(-min(cfg.b1, I1), min(cfg.b1, I1) + 1)
        T2 = np.arange(-min(cfg.b2, I2), min(cfg.b2, I2) + 1)
        result = cur_fixed(o, T1, T2, cfg.fixed_mode, budget=cfg.budget)
    else:
        result = ALGORITHMS[cfg.algorithm](o, cfg.b1, cfg.b2, cfg.tau, cfg.K)
    return o, result, time.perf_counter() - t0


def evaluate(cfg: ExperimentConfig, quad=None, function=None):
    """Run ``cfg`` once per repeat and build the summary and error report."""
    cfg.validate()
    quad = QuadKind.parse(quad or cfg.quad).value
    fname = function or cfg.function
    f = resolve_function(fname)
    I1, I2 = cfg.orders()
    if cfg.algorithm in ("truncated", "fixed"):
        _check_budget(cfg, I1, I2, f"algorithm {cfg.algorithm!r}")
    times = []
    for _ in range(cfg.repeats):
        o, result, dt = _single_run(cfg, f, quad)
        times.append(dt)
    n_int = o.n_integrals
    if cfg.algorithm == "truncated":
        A = result

        def g_eval(grid):
            return eval_truncated(A, I1, I2, grid)

        S1, S2, iters, stop = 2 * I1 + 1, 2 * I2 + 1, 0, "index_bounds"
    else:
        m = result
        A = None

        def g_eval(grid):
            return eval_cur(m, grid)

        S1, S2, iters, stop = m.S1, m.S2, m.stats.iterations, m.stats.stop_reason
        n_int = m.stats.n_integrals
    report = error_grid(f, g_eval, cfg.grid_n)

    gap = None
    vs_trunc = None
    if cfg.algorithm == "truncated":
        gap = 0.0
        vs_trunc = 0.0
    elif cfg.reference and (2 * I1 + 1) * (2 * I2 + 1) <= cfg.budget:
        # sampling the rest of A does not touch the recorded run statistics
        A = o.full_matrix()
        gap = l2_gap(A, m)
        vs_trunc = float(np.abs(eval_truncated(A, I1, I2, report.grid)
                                - eval_cur(m, report.grid)).max())
    report.l2_gap = gap
    report.n_integrals = n_int
    summary = RunSummary(
        function=str(fname), algorithm=cfg.algorithm, quad=quad, I1=I1, I2=I2,
        M1=cfg.M1, M2=cfg.M2, b1=cfg.b1, b2=cfg.b2, tau=cfg.tau, K=cfg.K,
        max_err=report.max_err, l2_gap=gap, max_err_vs_truncated=vs_trunc,
        S1=S1, S2=S2, iterations=iters, n_integrals=n_int,
        elapsed_seconds=float(np.mean(times)), stop_reason=stop,
        max_imag_residue=report.max_imag_residue,
    )
    if summary.stop_reason not in STOP_REASONS:
        raise InvalidArgumentError(f"unexpected stop reason {summary.stop_reason!r}")
    return summary, report


def run_approx(cfg: ExperimentConfig):
    """Single approximation; writes ``errors.csv`` and ``summary.json``."""
    out = _require_dir(cfg.output_dir)
    summary, report = evaluate(cfg)
    write_errors_csv(out / "errors.csv", report)

    def go(fh):
        json.dump(summary.to_json(), fh, indent=2, allow_nan=False)
        fh.write("\n")
    _write(out / "summary.json", go)
    return summary


SWEEP_HEADER = ["b1", "b2", "tau", "elapsed", "max_err", "max_err_vs_truncated",
                "S1", "S2", "iterations", "n_integrals", "stop_reason"]


def _sweep_row(s: RunSummary):
    return [s.b1, s.b2, s.tau, s.elapsed_seconds, s.max_err, s.max_err_vs_truncated,
            s.S1, s.S2, s.iterations, s.n_integrals, s.stop_reason]


def sweep_blocks(cfg: ExperimentConfig, pairs=None, filename="table.csv"):
    """One row per block-size pair; writes ``table.csv`` and per-pair error grids."""
    pairs = DEFAULT_PAIRS if pairs is None else list(pairs)
    if not pairs:
        raise InvalidArgumentError("need at least one (b1, b2) pair")
    out = _require_dir(cfg.output_dir)
    rows, summaries = [], []
    for b1, b2 in pairs:
        s, report = evaluate(cfg.replace(b1=int(b1), b2=int(b2)))
        write_errors_csv(out / f"errors_b{b1}_{b2}.csv", report)
        rows.append(_sweep_row(s))
        summaries.append(s)
    write_table(out / filename, SWEEP_HEADER, rows)
    return summaries


def sweep_tau(cfg: ExperimentConfig, taus=None, filename="table.csv"):
    """One row per tolerance; defaults to 1e-1 ... 1e-10."""
    taus = DEFAULT_TAUS if taus is None else list(taus)
    if not taus:
        raise InvalidArgumentError("need at least one tau")
    out = _require_dir(cfg.output_dir)
    rows, summaries = [], []
    for i, tau in enumerate(taus):
        s, report = evaluate(cfg.replace(tau=float(tau)))
        write_errors_csv(out / f"errors_tau{i + 1}.csv", report)
        rows.append(_sweep_row(s))
        summaries.append(s)
    write_table(out / filename, SWEEP_HEADER, rows)
    return summaries


def compare(cfg: ExperimentConfig, methods=("truncated", "alg1", "alg2", "algc1"),
            filename="table.csv"):
    """Method x quadrature grid with per-function time, error and cost columns."""
    out = _require_dir(cfg.output_dir)
    functions = cfg.function_list()
    quads = cfg.quad_list()
    if not functions or not quads:
        raise InvalidArgumentError("compare needs at least one function and one quadrature")
    I1, I2 = cfg.orders()
    _check_budget(cfg, I1, I2, "compare (truncated reference)")
    header = ["quad", "method"]
    for fn in functions:
        header += [f"{fn}_elapsed", f"{fn}_max_err", f"{fn}_n_integrals"]
    rows, summaries = [], []
    for quad in quads:
        for method in methods:
            row = [quad, METHOD_LABELS[method]]
            for fn in functions:
                s, report = evaluate(cfg.replace(algorithm=method), quad=quad, function=fn)
                write_errors_csv(out / f"errors_{quad}_{method}_{fn}.csv", report)
                row += [s.elapsed_seconds, s.max_err, s.n_integrals]
                summaries.append(s)
            rows.append(row)
    write_table(out / filename, header, rows)
    return summaries
