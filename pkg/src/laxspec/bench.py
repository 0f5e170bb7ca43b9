"""Convergence and cost sweeps for the exact scheme and the RK4 comparator.

A run is described by a flat ``key = value`` config file, e.g.::

    equation  = BO
    problem   = traveling-wave
    c         = 15/(4*pi)
    K         = 8, 16, 32, 64
    t         = 1
    solvers   = exact-scheme, rk4
    reference = analytic

Lists are comma separated; ``t`` also accepts ``logspace(lo, hi, n)``.
"""

from __future__ import annotations

import ast
import csv
import io
import math
import operator
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .problems import (
    RandomDataSpec,
    TravelingWave,
    hardy_random_data,
    random_initial_data,
)
from .rk4 import Rk4Config, rk4_evolve
from .scheme import Equation, evolve_exact
from .spectral import SpectralCoeffs, project_truncate, sobolev_error

SOLVERS = ("exact-scheme", "rk4")
AXES = ("K", "t", "error", "wall_seconds")
CSV_HEADER = ["equation", "solver", "K", "t", "r", "error", "wall_seconds", "reference"]


# --------------------------------------------------------------------------
# report
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Row:
    equation: str
    solver: str
    K: int
    t: float
    r: float
    error: float
    wall_seconds: float
    reference: str

    def sort_key(self):
        return (self.solver, self.K, self.t, self.r)


@dataclass
class ConvergenceReport:
    rows: list[Row] = field(default_factory=list)

    def __post_init__(self):
        self.rows = sorted(self.rows, key=Row.sort_key)

    def __len__(self):
        return len(self.rows)

    def solvers(self) -> list[str]:
        return sorted({row.solver for row in self.rows})

    def column(self, name: str, solver: str | None = None) -> np.ndarray:
        return np.array([getattr(row, name) for row in self.rows
                         if solver is None or row.solver == solver])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in self.rows:
            w.writerow([row.equation, row.solver, row.K, format(row.t, ".17g"),
                        format(row.r, ".17g"), format(row.error, ".17g"),
                        format(row.wall_seconds, ".17g"), row.reference])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ConvergenceReport":
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames != CSV_HEADER:
            raise ConfigError(f"unexpected report header {reader.fieldnames}")
        rows = [Row(d["equation"], d["solver"], int(d["K"]), float(d["t"]),
                    float(d["r"]), float(d["error"]), float(d["wall_seconds"]),
                    d["reference"]) for d in reader]
        return cls(rows)

    def write(self, path) -> None:
        Path(path).write_text(self.to_csv())

    @classmethod
    def read(cls, path) -> "ConvergenceReport":
        return cls.from_csv(Path(path).read_text())


# --------------------------------------------------------------------------
# config
# --------------------------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}


def _number(text: str) -> float:
    """Evaluate a plain arithmetic expression (``pi`` allowed)."""
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        raise ValueError
    try:
        return float(ev(ast.parse(text.strip(), mode="eval")))
    except (ValueError, SyntaxError, ZeroDivisionError, TypeError):
        raise ConfigError(f"not a number: {text!r}") from None


def _int(text: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigError(f"not an integer: {text!r}") from None


def _numbers(text: str) -> list[float]:
    text = text.strip()
    if text.startswith("logspace(") and text.endswith(")"):
        parts = text[len("logspace("):-1].split(",")
        if len(parts) != 3:
            raise ConfigError(f"logspace needs (lo, hi, n): {text!r}")
        lo, hi = _number(parts[0]), _number(parts[1])
        return [float(x) for x in np.logspace(lo, hi, _int(parts[2]))]
    return [_number(p) for p in text.split(",") if p.strip()]


def _bool(text: str) -> bool:
    v = text.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class RunConfig:
    equation: Equation = Equation.BO
    problem: str = "traveling-wave"
    c: float = 15.0 / (4.0 * math.pi)
    seed: int = 0
    s: float = 2.0
    theta: float = 0.6
    K_ref: int = 1024
    amplitude: float = 1.0
    K: tuple = (8, 16, 32, 64)
    t: tuple = (1.0,)
    r: tuple = (0.0,)
    solvers: tuple = ("exact-scheme",)
    reference: str = "analytic"
    out: str | None = None
    svg: str | None = None
    cfl: float = 0.25
    dealias: bool = True
    repeats: int = 3
    plot_x: str | None = None
    plot_y: str = "error"

    def validate(self) -> "RunConfig":
        if self.problem not in ("traveling-wave", "random"):
            raise ConfigError(f"unknown problem {self.problem!r}")
        if self.reference not in ("analytic", "self"):
            raise ConfigError(f"unknown reference {self.reference!r}")
        for name in self.solvers:
            if name not in SOLVERS:
                raise ConfigError(f"unknown solver {name!r}; choose from {SOLVERS}")
        if self.problem == "traveling-wave":
            if self.equation is not Equation.BO:
                raise ConfigError("the traveling wave is a Benjamin-Ono solution")
            if not self.c > 1:
                raise ConfigError(f"traveling wave needs c > 1, got {self.c}")
        if self.reference == "analytic" and self.problem != "traveling-wave":
            raise ConfigError("analytic reference is only available for the traveling wave")
        if self.problem == "random" and not self.theta > 0.5:
            raise ConfigError(f"theta must exceed 1/2, got {self.theta}")
        for K in self.K:
            if K < 2:
                raise ConfigError(f"K must be >= 2, got {K}")
            if self.reference == "self" and K > self.K_ref:
                raise ConfigError(f"K={K} exceeds K_ref={self.K_ref}")
        for t in self.t:
            if not (t >= 0 and math.isfinite(t)):
                raise ConfigError(f"times must be finite and non-negative, got {t}")
        for r in self.r:
            if not r >= 0:
                raise ConfigError(f"Sobolev index must be non-negative, got {r}")
        if not self.cfl > 0:
            raise ConfigError("cfl must be positive")
        if self.repeats < 1:
            raise ConfigError("repeats must be >= 1")
        for axis in (self.plot_x, self.plot_y):
            if axis is not None and axis not in AXES:
                raise ConfigError(f"unknown axis {axis!r}; choose from {AXES}")
        return self

    @property
    def reference_id(self) -> str:
        if self.reference == "analytic":
            return f"analytic:traveling-wave(c={self.c:.17g})"
        return f"self:K_ref={self.K_ref}"

    def initial_data(self) -> SpectralCoeffs:
        if self.problem == "traveling-wave":
            K = max(max(self.K), TravelingWave(self.c).modes_needed())
            return TravelingWave(self.c).coeffs(0.0, K)
        spec = RandomDataSpec(seed=self.seed, s=self.s, K_ref=self.K_ref, theta=self.theta)
        if self.equation is Equation.BO:
            u0 = random_initial_data(spec)
        else:
            u0 = hardy_random_data(spec)
        return u0.scaled(self.amplitude) if self.amplitude != 1.0 else u0


_LIST_KEYS = {"K", "t", "r", "solvers"}


def parse_config(text: str, **overrides) -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        values[key] = val.strip()
    kw = {}
    for key, val in values.items():
        if key == "equation":
            try:
                kw[key] = Equation.parse(val)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        elif key in ("problem", "reference", "out", "svg", "plot_x", "plot_y"):
            kw[key] = val
        elif key in ("c", "s", "theta", "amplitude", "cfl"):
            kw[key] = _number(val)
        elif key in ("seed", "K_ref", "repeats"):
            kw[key] = _int(val)
        elif key == "dealias":
            kw[key] = _bool(val)
        elif key == "K":
            kw[key] = tuple(_int(p) for p in val.split(",") if p.strip())
        elif key in ("t", "r"):
            kw[key] = tuple(_numbers(val))
        elif key == "solvers":
            kw[key] = tuple(p.strip() for p in val.split(",") if p.strip())
        else:
            raise ConfigError(f"unknown config key {key!r}")
    kw.update({k: v for k, v in overrides.items() if v is not None})
    if "seed" in kw and not 0 <= kw["seed"] < 2 ** 64:
        raise ConfigError("seed must fit in an unsigned 64-bit integer")
    return RunConfig(**kw).validate()


def load_config(path, **overrides) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, **overrides)


# --------------------------------------------------------------------------
# runs
# --------------------------------------------------------------------------

def _solve(cfg: RunConfig, solver: str, u0: SpectralCoeffs, K: int, t: float) -> SpectralCoeffs:
    if solver == "exact-scheme":
        return evolve_exact(cfg.equation, u0, K, t)
    return rk4_evolve(cfg.equation, project_truncate(u0, K),
                      Rk4Config(K=K, T=t, cfl_C=cfg.cfl, dealias=cfg.dealias))


def _reference(cfg: RunConfig, u0: SpectralCoeffs, t: float) -> SpectralCoeffs:
    if cfg.reference == "analytic":
        return TravelingWave(cfg.c).coeffs(t, u0.K)
    return evolve_exact(cfg.equation, u0, cfg.K_ref, t)


def _timed(cfg, solver, u0, K, t, repeats):
    samples = []
    out = None
    for _ in range(repeats):
        start = time.perf_counter()
        u = _solve(cfg, solver, u0, K, t)
        samples.append(time.perf_counter() - start)
        if out is None:
            out = u
    return out, max(statistics.median(samples), 1e-9)


def _warm(cfg, solver, u0, K):
    # JIT compilation and first-call overheads stay out of the timings
    _solve(cfg, solver, u0, K, 1e-3)


def _error_job(args):
    cfg, solver, u0, K, t, ref = args
    u = _solve(cfg, solver, u0, K, t)
    return [sobolev_error(u, ref, r) for r in cfg.r]


def _sweep(cfg: RunConfig, points, jobs: int = 1) -> ConvergenceReport:
    if not points:
        return ConvergenceReport([])
    u0 = cfg.initial_data()
    refs = {t: _reference(cfg, u0, t) for t in sorted({t for _, _, t in points})}
    errors = {}
    if jobs > 1:
        tasks = [(cfg, solver, u0, K, t, refs[t]) for solver, K, t in points]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for point, errs in zip(points, pool.map(_error_job, tasks)):
                errors[point] = errs
    warmed = set()
    rows = []
    for point in points:
        solver, K, t = point
        if (solver, K) not in warmed:
            _warm(cfg, solver, u0, K)
            warmed.add((solver, K))
        u, wall = _timed(cfg, solver, u0, K, t, cfg.repeats)
        errs = errors.get(point)
        if errs is None:
            errs = [sobolev_error(u, refs[t], r) for r in cfg.r]
        for r, err in zip(cfg.r, errs):
            rows.append(Row(cfg.equation.value, solver, K, t, r, err, wall, cfg.reference_id))
    return ConvergenceReport(rows)


def run_convergence(cfg: RunConfig, jobs: int = 1) -> ConvergenceReport:
    """Error and wall time for every (solver, K, t) in the config."""
    cfg.validate()
    points = [(s, K, t) for s in cfg.solvers for K in cfg.K for t in cfg.t]
    report = _sweep(cfg, points, jobs)
    if cfg.out:
        report.write(cfg.out)
    return report


def run_error_vs_time(cfg: RunConfig, jobs: int = 1) -> ConvergenceReport:
    """Fixed ``K``, sweep over the configured times."""
    cfg.validate()
    if len(cfg.K) != 1:
        raise ConfigError(f"error-vs-time needs exactly one K, got {list(cfg.K)}")
    K = cfg.K[0]
    points = [(s, K, t) for s in cfg.solvers for t in cfg.t]
    report = _sweep(cfg, points, jobs)
    if cfg.out:
        report.write(cfg.out)
    return report


# --------------------------------------------------------------------------
# SVG charts
# --------------------------------------------------------------------------

_COLORS = {"exact-scheme": "#c0392b", "rk4": "#2c6fbb"}
_FALLBACK_COLORS = ["#27ae60", "#8e44ad", "#d35400", "#16a085"]


def loglog_slope(x, y) -> float:
    """Least-squares slope of ``log10 y`` against ``log10 x``."""
    lx = np.log10(np.asarray(x, dtype=float))
    ly = np.log10(np.asarray(y, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])


def _ticks(lo, hi, log):
    if log:
        a, b = math.floor(lo), math.ceil(hi)
        if a == b:
            b = a + 1
        step = max(1, (b - a) // 8 + (1 if (b - a) % 8 else 0))
        return [float(v) for v in range(a, b + 1, step)], (a, b)
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    return list(np.linspace(lo, hi, 5)), (lo, hi)


def _label(v, log):
    if log:
        return f"1e{int(round(v))}"
    return f"{v:.3g}"


def emit_svg(report: ConvergenceReport, x: str, y: str, logx: bool = True,
             logy: bool = True, path=None, title: str | None = None) -> str:
    """Render one polyline per solver; returns the SVG text and writes ``path`` if given."""
    for axis in (x, y):
        if axis not in AXES:
            raise ConfigError(f"unknown axis {axis!r}; choose from {AXES}")
    if len(report) == 0:
        raise ConfigError("cannot plot an empty report")

    series = {}
    for solver in report.solvers():
        xs = report.column(x, solver).astype(float)
        ys = report.column(y, solver).astype(float)
        keep = np.ones(xs.shape, dtype=bool)
        if logx:
            keep &= xs > 0
        if logy:
            keep &= ys > 0
        xs, ys = xs[keep], ys[keep]
        order = np.argsort(xs, kind="stable")
        series[solver] = (xs[order], ys[order])

    def tx(v):
        return np.log10(v) if logx else v

    def ty(v):
        return np.log10(v) if logy else v

    allx = np.concatenate([tx(s[0]) for s in series.values()] or [np.zeros(0)])
    ally = np.concatenate([ty(s[1]) for s in series.values()] or [np.zeros(0)])
    if allx.size == 0:
        raise ConfigError("no plottable points (log axes need positive values)")
    xticks, (x0, x1) = _ticks(allx.min(), allx.max(), logx)
    yticks, (y0, y1) = _ticks(ally.min(), ally.max(), logy)

    W, H = 640, 420
    left, right, top, bottom = 70, 150, 30, 50
    pw, ph = W - left - right, H - top - bottom

    def px(v):
        return left + (v - x0) / (x1 - x0) * pw

    def py(v):
        return top + ph - (v - y0) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
           f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">',
           f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>']
    if title:
        out.append(f'<text x="{left + pw / 2}" y="18" text-anchor="middle">{title}</text>')
    for v in xticks:
        X = px(v)
        out.append(f'<line x1="{X:.2f}" y1="{top + ph}" x2="{X:.2f}" y2="{top + ph + 5}" stroke="#333"/>')
        out.append(f'<text class="xtick" x="{X:.2f}" y="{top + ph + 18}" '
                   f'text-anchor="middle">{_label(v, logx)}</text>')
    for v in yticks:
        Y = py(v)
        out.append(f'<line x1="{left - 5}" y1="{Y:.2f}" x2="{left}" y2="{Y:.2f}" stroke="#333"/>')
        out.append(f'<text class="ytick" x="{left - 8}" y="{Y + 4:.2f}" '
                   f'text-anchor="end">{_label(v, logy)}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{H - 8}" text-anchor="middle">{x}</text>')
    out.append(f'<text x="14" y="{top + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 14 {top + ph / 2})">{y}</text>')

    for i, (solver, (xs, ys)) in enumerate(series.items()):
        color = _COLORS.get(solver, _FALLBACK_COLORS[i % len(_FALLBACK_COLORS)])
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(tx(xs), ty(ys)))
        out.append(f'<polyline class="series" data-solver="{solver}" fill="none" '
                   f'stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = top + 16 + 34 * i
        out.append(f'<text x="{left + pw + 10}" y="{ly}" fill="{color}">{solver}</text>')
        if logx and logy and len(xs) >= 2 and np.ptp(xs) > 0:
            slope = loglog_slope(xs, ys)
            out.append(f'<text class="slope" data-solver="{solver}" data-slope="{slope:.6g}" '
                       f'x="{left + pw + 10}" y="{ly + 14}" fill="{color}">'
                       f'slope {slope:.3f}</text>')
    out.append("</svg>")
    svg = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(svg)
    return svg


def default_axes(kind: str, cfg: RunConfig | None = None) -> tuple[str, str]:
    if cfg is not None and cfg.plot_x:
        return cfg.plot_x, cfg.plot_y
    if kind == "error-vs-time":
        return "t", "error"
    return "wall_seconds", "error"


def with_overrides(cfg: RunConfig, **kw) -> RunConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None}).validate()
