"""Run configuration, CSV output, experiment presets and parameter sweeps."""

from __future__ import annotations

import csv
import dataclasses
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import (ENERGY_CONSERVING, MOMENTUM_CONSERVING, ContractError, ConvergenceError,
                   InstabilityError, SchemeKind, SolverError)
from .diagnostics import angular_momentum, bounds_report, energy, relative_fluctuation, state_norms
from .grid import GridSpec
from .model import (KState, ModelParams, SpectralState, StatePair, initial_modal,
                    initial_perturbed_planar, make_grid)
from .schemes_k import gamma_k, spectral_from_grid, spectral_gamma, spectral_modal
from .simulate import StepInfo, run

NUMERICAL_ERRORS = (SolverError, ConvergenceError, InstabilityError)
TABLE_STEPS = (1, 2, 3, 4, 5, 100)
TIME_SERIES_COLUMNS = ("n", "t", "eta1_mid", "eta2_mid", "xi_mid", "H", "T", "V", "A", "G",
                       "cond_estimate")
INIT_KINDS = ("modal", "perturbed_planar")


class ConfigError(ContractError):
    """Invalid configuration entry; carries the key and, when known, the line."""

    def __init__(self, key: str, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{key}: {message}")
        self.key = key
        self.message = message
        self.line = line


class OutputError(OSError):
    def __init__(self, path: Path | str, cause: Exception):
        super().__init__(f"cannot write {path}: {cause}")
        self.path = str(path)


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one run.

    ``intervals = 0`` sizes the grid from the stability limit and
    ``lambda_fraction``; a positive value fixes the number of intervals
    (for the modal scheme it sets the output grid, default ``2 * modes``).
    """

    scheme: SchemeKind = SchemeKind.S_D
    alpha: float = 2e-4
    h_t: float = 1.0 / 20.0
    lambda_fraction: float = 1.0
    gamma1: float = 0.02
    gamma2: float = 2e-5
    sigma_xi: float = 0.0
    sigma_eta: float = 0.0
    tau: float = 0.0
    nu: float = 0.0
    steps: int = 100
    seed: int = 0
    init: str = "modal"
    modes: int = 32
    intervals: int = 0
    out_path: str = "run.csv"
    sample_every: int = 1
    estimate_condition: bool = False

    def __post_init__(self):
        object.__setattr__(self, "scheme", _parse_scheme(self.scheme))
        validate(self)

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    def model(self) -> ModelParams:
        return ModelParams(self.alpha, self.sigma_xi, self.sigma_eta, self.tau, self.nu)


FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(RunConfig)}
SWEEPABLE = tuple(k for k, t in FIELD_TYPES.items() if t in ("float", "int") and k != "seed") + ("seed",)


def _parse_scheme(value) -> SchemeKind:
    try:
        return SchemeKind.parse(value)
    except ValueError as exc:
        raise ConfigError("scheme", str(exc)) from None


def _check(ok: bool, key: str, message: str) -> None:
    if not ok:
        raise ConfigError(key, message)


def validate(cfg: RunConfig) -> None:
    for key in ("alpha", "h_t", "lambda_fraction", "gamma1", "gamma2",
                "sigma_xi", "sigma_eta", "tau", "nu"):
        _check(math.isfinite(getattr(cfg, key)), key, "must be finite")
    _check(0 < cfg.alpha <= 1, "alpha", f"must lie in (0, 1], got {cfg.alpha}")
    _check(cfg.h_t > 0, "h_t", f"must be positive, got {cfg.h_t}")
    _check(0 < cfg.lambda_fraction <= 1, "lambda_fraction",
           f"must lie in (0, 1], got {cfg.lambda_fraction}")
    for key in ("sigma_xi", "sigma_eta", "tau", "nu"):
        _check(getattr(cfg, key) >= 0, key, "must be nonnegative")
    _check(cfg.steps >= 1, "steps", f"must be at least 1, got {cfg.steps}")
    _check(cfg.seed >= 0, "seed", "must be nonnegative")
    _check(cfg.init in INIT_KINDS, "init", f"must be one of {', '.join(INIT_KINDS)}")
    _check(cfg.modes >= 1, "modes", "must be at least 1")
    _check(cfg.intervals == 0 or cfg.intervals >= 2, "intervals", "must be 0 (automatic) or at least 2")
    _check(cfg.sample_every >= 1, "sample_every", "must be at least 1")
    _check(bool(cfg.out_path), "out_path", "must not be empty")
    if not cfg.scheme.is_full:
        _check(cfg.tau == 0 and cfg.nu == 0, "tau", "implicitness weights apply to s-schemes only")
        _check(cfg.sigma_xi == 0, "sigma_xi", "the transverse-only model has no longitudinal motion")


def _convert(key: str, raw: str):
    kind = FIELD_TYPES[key]
    raw = raw.strip()
    try:
        if kind == "float":
            return float(Fraction(raw))
        if kind == "int":
            return int(raw)
        if kind == "bool":
            lowered = raw.lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(key, f"cannot parse {raw!r} as {kind}") from None
    if key == "scheme":
        return _parse_scheme(raw)
    return raw


def parse_config(text: str, overrides: dict | None = None) -> RunConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment, blank lines are ignored.

    ``overrides`` (e.g. from command-line flags) win over file values.
    Errors name the key and, for file entries, the line number.
    """
    values: dict = {}
    lines: dict[str, int] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(line, "expected 'key = value'", number)
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in FIELD_TYPES:
            raise ConfigError(key, "unknown key", number)
        if key in values:
            raise ConfigError(key, "given twice", number)
        try:
            values[key] = _convert(key, raw)
        except ConfigError as exc:
            raise ConfigError(key, exc.message, number) from None
        lines[key] = number
    for key, value in (overrides or {}).items():
        if key not in FIELD_TYPES:
            raise ConfigError(key, "unknown key")
        if value is not None:
            values[key] = _convert(key, value) if isinstance(value, str) else value
            lines.pop(key, None)
    try:
        return RunConfig(**values)
    except ConfigError as exc:
        raise ConfigError(exc.key, exc.message, lines.get(exc.key)) from None
    except ContractError as exc:
        raise ConfigError("config", str(exc)) from None


def format_config(cfg: RunConfig) -> str:
    """Inverse of ``parse_config`` (all keys written)."""
    out = []
    for key in FIELD_TYPES:
        value = getattr(cfg, key)
        if isinstance(value, SchemeKind):
            value = value.value
        elif isinstance(value, float):
            value = _num(value)
        elif isinstance(value, bool):
            value = str(value).lower()
        out.append(f"{key} = {value}")
    return "\n".join(out) + "\n"


def _num(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{float(x):.17g}"


def build_grid(cfg: RunConfig) -> GridSpec:
    if cfg.scheme.is_modal:
        N = cfg.intervals or 2 * cfg.modes
        return GridSpec.from_intervals(N, cfg.h_t)
    if cfg.intervals:
        return GridSpec.from_intervals(cfg.intervals, cfg.h_t)
    return make_grid(cfg.h_t, cfg.scheme, cfg.model(), cfg.lambda_fraction)


def build_initial(cfg: RunConfig, grid: GridSpec):
    if cfg.scheme.is_modal and cfg.init == "modal":
        return spectral_modal(cfg.gamma1, cfg.gamma2, cfg.modes, cfg.h_t)
    if cfg.init == "modal":
        state = initial_modal(cfg.gamma1, cfg.gamma2, grid)
    else:
        state = initial_perturbed_planar(cfg.gamma1, cfg.gamma2, cfg.seed, grid)
    if cfg.scheme.is_modal:
        return spectral_from_grid(state, cfg.modes)
    return state if cfg.scheme.is_full else KState.from_pair(state)


@dataclass
class Recorder:
    """Collects time-series rows and the conserved quantities of a run."""

    scheme: SchemeKind
    m: ModelParams
    grid: GridSpec
    sample_every: int = 1
    modes: int = 32
    rows: list = field(default_factory=list)
    energies: list = field(default_factory=list)
    momenta: list = field(default_factory=list)
    steps_seen: list = field(default_factory=list)
    min_energy: float = math.inf
    bounds_violated: bool = False
    _initial: tuple | None = None
    last: object = None

    def __post_init__(self):
        self.has_energy = self.scheme in ENERGY_CONSERVING
        self.has_momentum = self.scheme in MOMENTUM_CONSERVING
        if self.scheme.is_modal:
            k = np.arange(1, self.modes + 1)
            self._mid_weights = np.sin(np.pi * k * self.grid.mid / self.grid.N)

    def _mid(self, state):
        i = self.grid.mid
        if isinstance(state, SpectralState):
            eta = self._mid_weights @ state.coeffs_curr
            return float(eta[0]), float(eta[1]), None
        xi = float(state.u_curr[i]) if isinstance(state, StatePair) else None
        return float(state.v_curr[i, 0]), float(state.v_curr[i, 1]), xi

    def _gamma(self, state):
        if self.scheme.is_modal:
            return spectral_gamma(state, self.m, self.grid.h_t)
        if self.scheme.is_full:
            return None
        return gamma_k(self.scheme, state, self.m, self.grid)

    def __call__(self, state, info: StepInfo) -> None:
        self.last = state
        n = state.step
        e = energy(self.scheme, state, self.m, self.grid) if self.has_energy else None
        a = angular_momentum(self.scheme, state, self.grid, self.m) if self.has_momentum else None
        if e is not None:
            self.min_energy = min(self.min_energy, e.total)
            self.energies.append(e.total)
            xi_n, eta_n = state_norms(state, self.grid)
            if self._initial is None:
                self._initial = (e.total, xi_n, eta_n)
            H0, xi0, eta0 = self._initial
            rep = bounds_report(self.scheme, self.m, H0, xi0, eta0, self.grid, n - 1,
                                xi_n if self.scheme.is_full else None, eta_n, self.modes)
            self.bounds_violated |= rep.violated
        if a is not None:
            self.momenta.append(a)
        self.steps_seen.append(n)
        if (n - 1) % self.sample_every == 0 or n in TABLE_STEPS:
            eta1, eta2, xi = self._mid(state)
            self.rows.append((n, n * self.grid.h_t, eta1, eta2, xi,
                              e.total if e else None, e.kinetic if e else None,
                              e.potential if e else None, a, self._gamma(state),
                              info.condition_estimate))

    def table_values(self, steps: Sequence[int] = TABLE_STEPS) -> dict[int, tuple]:
        out = {}
        for n, *rest in self.rows:
            if n in steps:
                out[n] = (rest[4], rest[7])   # H, A
        return out


@dataclass
class RunResult:
    config: RunConfig
    grid: GridSpec
    recorder: Recorder
    steps_done: int
    error: Exception | None = None
    total_iterations: int = 0
    max_residual: float = 0.0

    @property
    def status(self) -> str:
        return "ok" if self.error is None else f"{type(self.error).__name__}: {self.error}"


def execute(cfg: RunConfig) -> RunResult:
    """Run a configuration; a numerical failure is kept in the result, not raised."""
    grid = build_grid(cfg)
    m = cfg.model()
    initial = build_initial(cfg, grid)
    rec = Recorder(cfg.scheme, m, grid, cfg.sample_every, cfg.modes)
    try:
        summary = run(cfg.scheme, m, initial, grid, cfg.steps, [rec],
                      estimate_condition=cfg.estimate_condition)
    except NUMERICAL_ERRORS as exc:
        done = rec.steps_seen[-1] - 1 if rec.steps_seen else 0
        return RunResult(cfg, grid, rec, done, exc)
    return RunResult(cfg, grid, rec, cfg.steps, None, summary.total_iterations, summary.max_residual)


def _grid_line(grid: GridSpec) -> str:
    return (f"# grid: N = {grid.N}, lambda = {_num(grid.lam)}, h_x = {_num(grid.h_x)}, "
            f"h_t = {_num(grid.h_t)}")


def _open(path: Path):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        return path.open("w", newline="", encoding="utf-8")
    except OSError as exc:
        raise OutputError(path, exc) from None


def write_csv(path: Path | str, header: Sequence[str], rows: Iterable[Sequence], preamble: Sequence[str] = ()) -> Path:
    path = Path(path)
    with _open(path) as fh:
        try:
            for line in preamble:
                fh.write(line + "\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_num(v) if not isinstance(v, str) else v for v in row])
        except OSError as exc:
            raise OutputError(path, exc) from None
    return path


def companion_paths(out_path: Path | str) -> tuple[Path, Path, Path]:
    """Time-series, conserved-quantity and metadata paths for one run."""
    out = Path(out_path)
    stem = out.with_suffix("") if out.suffix == ".csv" else out
    return (stem.with_suffix(".csv"), stem.parent / (stem.name + "_conserved.csv"),
            stem.parent / (stem.name + ".meta"))


def write_run(result: RunResult, out_path: Path | str | None = None) -> tuple[Path, Path, Path]:
    """Write the time series, the conserved-quantity table and the metadata file."""
    series, conserved, meta = companion_paths(out_path or result.config.out_path)
    pre = [_grid_line(result.grid)]
    write_csv(series, TIME_SERIES_COLUMNS, result.recorder.rows, pre)
    table = result.recorder.table_values()
    write_csv(conserved, ("n", "H", "A"), [(n, *table[n]) for n in TABLE_STEPS if n in table], pre)
    write_metadata(meta, result)
    return series, conserved, meta


def run_metadata(result: RunResult) -> dict:
    rec = result.recorder
    dH = relative_fluctuation(rec.energies) if len(rec.energies) > 1 else math.nan
    dA = relative_fluctuation(rec.momenta) if len(rec.momenta) > 1 else math.nan
    info = {"N": result.grid.N, "lambda": result.grid.lam, "h_x": result.grid.h_x,
            "steps_done": result.steps_done, "status": result.status,
            "energy_fluctuation": dH, "momentum_fluctuation": dA,
            "min_energy": rec.min_energy if rec.energies else math.nan,
            "bounds_violated": str(rec.bounds_violated).lower(),
            "total_iterations": result.total_iterations, "max_residual": result.max_residual}
    return {k: (_num(v) if not isinstance(v, str) else v) for k, v in info.items()}


def write_metadata(path: Path | str, result: RunResult) -> Path:
    path = Path(path)
    text = format_config(result.config) + "".join(
        f"{k} = {v}\n" for k, v in run_metadata(result).items())
    with _open(path) as fh:
        try:
            fh.write(text)
        except OSError as exc:
            raise OutputError(path, exc) from None
    return path


def _final_norms(result: RunResult) -> tuple[float, float]:
    last = result.recorder.last
    return state_norms(last, result.grid) if last is not None else (math.nan, math.nan)


def _centered_eta(state) -> np.ndarray:
    return 0.5 * (state.v_curr + state.v_prev)


def _reference_error(coarse: RunResult, reference: RunResult) -> float:
    """Max-norm transverse error on the coarse nodes at the common final time."""
    a, b = coarse.recorder.last, reference.recorder.last
    if a is None or b is None or coarse.error or reference.error:
        return math.nan
    ratio = reference.grid.N // coarse.grid.N
    if ratio * coarse.grid.N != reference.grid.N:
        return math.nan
    return float(np.max(np.abs(_centered_eta(a) - _centered_eta(b)[::ratio])))


SWEEP_COLUMNS = ("index", "axis", "value", "status", "N", "lambda", "steps_done",
                 "xi_norm", "eta_norm", "energy", "momentum", "energy_fluctuation",
                 "momentum_fluctuation", "min_energy", "bounds_violated", "error_vs_reference")


def _step_axis_config(base: RunConfig, h_t: float) -> RunConfig:
    # final time held at base.steps * base.h_t; a fixed grid keeps its Courant number
    cfg = base.replace(h_t=h_t, steps=max(1, round(base.steps * base.h_t / h_t)))
    if base.intervals:
        cfg = cfg.replace(intervals=round(base.intervals * base.h_t / h_t))
    return cfg


def _sweep_point(keys: Sequence[str], raw) -> dict:
    parts = raw.split(":") if isinstance(raw, str) else (raw if isinstance(raw, (tuple, list)) else [raw])
    if len(parts) != len(keys):
        raise ConfigError(",".join(keys), f"value {raw!r} needs {len(keys)} ':'-separated parts")
    return {k: _convert(k, v) if isinstance(v, str) else v for k, v in zip(keys, parts)}


def sweep(base: RunConfig, axis: str, values: Sequence) -> list[tuple]:
    """One summary row per value, in input order; row failures are recorded in-row.

    ``axis`` may name several keys separated by commas, in which case each
    value supplies one ``:``-separated part per key (``gamma1,gamma2`` with
    ``0.01:0.0001``).  Sweeping ``h_t`` keeps the final time fixed and adds
    the transverse error against a reference run four times finer than the
    finest value.
    """
    keys = [k.strip() for k in axis.split(",")]
    for key in keys:
        if key not in SWEEPABLE:
            raise ConfigError(key, f"not sweepable; choose from {', '.join(SWEEPABLE)}")
    points: list[dict | ConfigError] = []
    for raw in values:
        try:
            points.append(_sweep_point(keys, raw))
        except ConfigError as exc:
            points.append(exc)
    reference = None
    if "h_t" in keys:
        steps = [p["h_t"] for p in points if isinstance(p, dict) and p["h_t"] > 0]
        if steps:
            ref_cfg = _step_axis_config(base, min(steps) / 4.0)
            reference = execute(ref_cfg.replace(sample_every=ref_cfg.steps))
    rows = []
    for index, (raw, point) in enumerate(zip(values, points)):
        label = raw if isinstance(raw, str) else ":".join(_num(v) for v in _sweep_point(keys, raw).values())
        try:
            if isinstance(point, ConfigError):
                raise point
            cfg = base.replace(**point)
            if "h_t" in point:
                cfg = _step_axis_config(cfg.replace(h_t=base.h_t), point["h_t"])
            result = execute(cfg.replace(sample_every=cfg.steps))
        except ContractError as exc:
            rows.append((index, axis, label, f"ConfigError: {exc}") + ("",) * (len(SWEEP_COLUMNS) - 4))
            continue
        rec = result.recorder
        meta = run_metadata(result)
        xi_n, eta_n = _final_norms(result)
        err = _reference_error(result, reference) if reference is not None else math.nan
        rows.append((index, axis, label, result.status, result.grid.N, result.grid.lam,
                     result.steps_done, xi_n, eta_n,
                     rec.energies[0] if rec.energies else math.nan,
                     rec.momenta[0] if rec.momenta else math.nan,
                     meta["energy_fluctuation"], meta["momentum_fluctuation"],
                     meta["min_energy"], meta["bounds_violated"], err))
    return rows


def write_sweep(path: Path | str, rows: Sequence[tuple]) -> Path:
    return write_csv(path, SWEEP_COLUMNS, rows)


# presets

AMPLITUDE_PAIRS = ((0.001, 0.00001), (0.01, 0.0001), (0.02, 0.0002), (0.04, 0.0004))
WHIRL = dict(gamma1=0.05, gamma2=1e-10, h_t=0.1, intervals=10, init="perturbed_planar",
             steps=100_000, sample_every=10, seed=1)
BLOWUP = dict(gamma1=0.1, gamma2=0.0, h_t=1.0 / 20.0, intervals=20, steps=100_000, sample_every=10)
PRESETS = ("fig1", "fig2_sweep", "whirl_s", "whirl_k", "sb_blowup", "damped", "taunu",
           "spectral", "tables")


def _runs_for(name: str) -> list[tuple[str, RunConfig]]:
    baseline = RunConfig(intervals=20)
    if name == "fig1":
        return [("fig1_s_a", baseline.replace(scheme=SchemeKind.S_A, steps=2000))]
    if name == "fig2_sweep":
        return [(f"fig2_g{i + 1}", baseline.replace(gamma1=g1, gamma2=g2, steps=2000))
                for i, (g1, g2) in enumerate(AMPLITUDE_PAIRS)]
    if name == "whirl_s":
        runs = [(f"whirl_{s}", RunConfig(scheme=SchemeKind(s), **WHIRL))
                for s in ("s_a", "s_b", "s_c", "s_d")]
        return runs + [("whirl_s_d_planar", RunConfig(scheme=SchemeKind.S_D, **{**WHIRL, "gamma2": 0.0}))]
    if name == "whirl_k":
        return [(f"whirl_{s}", RunConfig(scheme=SchemeKind(s), **WHIRL)) for s in ("k_a", "k_b")]
    if name == "sb_blowup":
        return [(f"blowup_{s}", RunConfig(scheme=SchemeKind(s), **BLOWUP)) for s in ("s_b", "s_c", "s_d")]
    if name == "damped":
        damped = baseline.replace(sigma_eta=0.01, steps=2000)
        return ([(f"damped_{s}", damped.replace(scheme=SchemeKind(s), sigma_xi=0.01))
                 for s in ("s_a", "s_c", "s_d", "s_e")]
                + [(f"damped_{s}", damped.replace(scheme=SchemeKind(s))) for s in ("k_a", "k_b")])
    if name == "taunu":
        return [("taunu_s_d", baseline.replace(tau=1.0, nu=1.0, h_t=0.5, intervals=20, steps=10_000,
                                            sample_every=10))]
    if name == "spectral":
        return [("spectral_k", RunConfig(scheme=SchemeKind.K_SPECTRAL, steps=10_000, sample_every=10))]
    if name == "tables":
        runs = [(f"tables_{s}", baseline.replace(scheme=SchemeKind(s)))
                for s in ("s_a", "s_b", "s_c", "s_d", "s_e", "k_a", "k_b")]
        return runs + [(f"tables_s_d_g{i + 1}", baseline.replace(gamma1=g1, gamma2=g2))
                       for i, (g1, g2) in enumerate(AMPLITUDE_PAIRS)]
    raise ConfigError("preset", f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")


def preset_configs(name: str) -> list[tuple[str, RunConfig]]:
    return _runs_for(name)


def _side_by_side(path: Path, results: Sequence[tuple[str, RunResult]], column: int) -> Path:
    tables = [(label, res.recorder.table_values()) for label, res in results]
    rows = [[n] + [t.get(n, (None, None))[column] for _, t in tables] for n in TABLE_STEPS]
    return write_csv(path, ["n"] + [label for label, _ in tables], rows)


def run_preset(name: str, out_dir: Path | str) -> list[Path]:
    """Run every configuration of a preset into ``out_dir``; returns written files.

    Numerical failures are part of some presets (the ``s_b`` energy anomaly)
    and are reported in the metadata rather than raised.
    """
    out_dir = Path(out_dir)
    written: list[Path] = []
    results: list[tuple[str, RunResult]] = []
    for label, cfg in _runs_for(name):
        cfg = cfg.replace(out_path=str(out_dir / f"{label}.csv"))
        result = execute(cfg)
        written.extend(write_run(result))
        results.append((label, result))
    if name == "tables":
        by = dict(results)
        per_scheme = [(s, by[f"tables_{s}"]) for s in ("s_a", "s_b", "s_c", "s_d", "s_e", "k_a", "k_b")]
        momentum = [(f"A_{s}", r) for s, r in per_scheme if r.recorder.has_momentum]
        energies = [(f"H_{s}", r) for s, r in per_scheme if r.recorder.has_energy]
        amps = [(f"g1={g1} g2={g2}", by[f"tables_s_d_g{i + 1}"]) for i, (g1, g2) in enumerate(AMPLITUDE_PAIRS)]
        written.append(_side_by_side(out_dir / "table_momentum.csv", momentum, 1))
        written.append(_side_by_side(out_dir / "table_energy.csv", energies, 0))
        written.append(_side_by_side(out_dir / "table_momentum_amplitudes.csv", amps, 1))
        written.append(_side_by_side(out_dir / "table_energy_amplitudes.csv", amps, 0))
    if name == "fig2_sweep":
        rows = []
        for i, (label, res) in enumerate(results):
            meta = run_metadata(res)
            xi_n, eta_n = _final_norms(res)
            rec = res.recorder
            rows.append((i, "gamma1,gamma2", f"{_num(res.config.gamma1)}:{_num(res.config.gamma2)}",
                         res.status, res.grid.N, res.grid.lam, res.steps_done, xi_n, eta_n,
                         rec.energies[0], rec.momenta[0], meta["energy_fluctuation"],
                         meta["momentum_fluctuation"], meta["min_energy"], meta["bounds_violated"], ""))
        written.append(write_sweep(out_dir / "fig2_summary.csv", rows))
    return written
