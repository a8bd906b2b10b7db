"""Sweep configuration and the row producers behind each CLI subcommand.

Every producer returns ``(columns, rows, extra_metadata)``; rows are lists of
floats/ints/None in a fixed, sorted grid order, independent of how many
worker processes evaluated them.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from . import potential as pot
from .errors import InvalidArgumentError, OutOfRegimeError, ResonanceError
from .periodic import PeriodicSpec, t_periodic
from .spm import (hartman_deviation_rect, hartman_limit_rect, is_saturated, tunneling_time_periodic,
                  tunneling_time_rect_analytic, tunneling_time_single)
from .transfer import transmit, unwrap_phase, wavevector

UNITS_NOTE = "2m = hbar = c = 1: E = k^2, lengths in inverse-wavevector units, times in 1/energy units"

COLUMNS = {
    "transmit": ["E", "k", "log10_T", "delta_unwrapped"],
    "ttime": ["E", "tau", "phase_derivative", "geometric_term"],
    "periodic": ["E", "N", "L", "chi", "phi_N", "log10_T_N", "tau_N", "resonance_flag"],
    "hartman": ["b", "tau", "tau_limit", "abs_err"],
    "ghe": ["N", "L", "tau_N", "tau_0", "abs_diff", "spread"],
}
SUBCOMMANDS = ("transmit", "ttime", "periodic", "hartman", "ghe", "fractal")


class ConfigError(InvalidArgumentError):
    pass


@dataclass(frozen=True)
class EnergyGrid:
    min: float
    max: float
    points: int

    def values(self) -> list[float]:
        return [float(x) for x in np.linspace(self.min, self.max, self.points)]


@dataclass
class SweepConfig:
    potential: dict
    energy: Optional[EnergyGrid] = None
    energies: Optional[list[float]] = None  # explicit list; wins over `energy`
    N: list[int] = field(default_factory=lambda: [1])
    L: list[float] = field(default_factory=lambda: [0.0])
    thickness: Optional[list[float]] = None
    derivative_step: Optional[float] = None
    format: str = "csv"
    tolerance: float = 1e-6
    method: str = "auto"  # hartman: "auto" uses the rectangular closed form when it applies
    fractal_mode: str = "ttime"

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        if not isinstance(data, dict):
            raise ConfigError("config: expected a JSON object")
        known = {"potential", "energy", "periodic", "thickness", "derivative_step", "format",
                 "tolerance", "method", "fractal"}
        for key in data:
            if key not in known:
                raise ConfigError(f"{key}: unknown config field")
        if "potential" not in data:
            raise ConfigError("potential: missing field")
        cfg = cls(potential=data["potential"])
        energy = data.get("energy")
        if isinstance(energy, dict):
            try:
                cfg.energy = EnergyGrid(float(energy["min"]), float(energy["max"]), int(energy["points"]))
            except KeyError as exc:
                raise ConfigError(f"energy.{exc.args[0]}: missing field") from None
            except (TypeError, ValueError):
                raise ConfigError("energy: min/max must be numbers and points an integer") from None
        elif isinstance(energy, (int, float)) and not isinstance(energy, bool):
            cfg.energies = [float(energy)]
        elif isinstance(energy, list):
            cfg.energies = _floats(energy, "energy")
        elif energy is not None:
            raise ConfigError("energy: expected a number, a list, or {min, max, points}")
        periodic = data.get("periodic")
        if periodic is not None:
            if not isinstance(periodic, dict):
                raise ConfigError("periodic: expected {N: [...], L: [...]}")
            if "N" in periodic:
                cfg.N = _ints(_listify(periodic["N"]), "periodic.N")
            if "L" in periodic:
                cfg.L = _floats(_listify(periodic["L"]), "periodic.L")
        if data.get("thickness") is not None:
            cfg.thickness = _floats(_listify(data["thickness"]), "thickness")
        if data.get("derivative_step") is not None:
            cfg.derivative_step = _number(data["derivative_step"], "derivative_step")
        cfg.format = data.get("format", "csv")
        tol = data.get("tolerance", 1e-6)
        if isinstance(tol, dict):
            tol = tol.get("saturation", 1e-6)
        cfg.tolerance = _number(tol, "tolerance")
        cfg.method = data.get("method", "auto")
        fractal = data.get("fractal")
        if fractal is not None:
            if not isinstance(fractal, dict):
                raise ConfigError("fractal: expected {mode: ...}")
            cfg.fractal_mode = fractal.get("mode", "ttime")
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"potential": self.potential}
        if self.energies is not None:
            out["energy"] = list(self.energies)
        elif self.energy is not None:
            out["energy"] = asdict(self.energy)
        out["periodic"] = {"N": list(self.N), "L": list(self.L)}
        if self.thickness is not None:
            out["thickness"] = list(self.thickness)
        out["derivative_step"] = self.derivative_step
        out["format"] = self.format
        out["tolerance"] = {"saturation": self.tolerance}
        out["method"] = self.method
        out["fractal"] = {"mode": self.fractal_mode}
        return out

    def validate(self):
        pot.from_config(self.potential)
        if self.energy is not None:
            if not (math.isfinite(self.energy.min) and self.energy.min > 0):
                raise ConfigError("energy.min: must be > 0")
            if not self.energy.max >= self.energy.min:
                raise ConfigError("energy.max: must be >= energy.min")
            if self.energy.points < 2:
                raise ConfigError("energy.points: must be >= 2")
        if self.energies is not None:
            if not self.energies:
                raise ConfigError("energy: empty list")
            if any(not (math.isfinite(e) and e > 0) for e in self.energies):
                raise ConfigError("energy: energies must be > 0")
        if not self.N or any(n < 1 for n in self.N):
            raise ConfigError("periodic.N: need a non-empty list of integers >= 1")
        if not self.L or any(not (math.isfinite(x) and x >= 0) for x in self.L):
            raise ConfigError("periodic.L: need a non-empty list of gaps >= 0")
        if self.thickness is not None and (not self.thickness or any(not b > 0 for b in self.thickness)):
            raise ConfigError("thickness: need a non-empty list of positive thicknesses")
        if self.derivative_step is not None and not self.derivative_step > 0:
            raise ConfigError("derivative_step: must be > 0")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format: expected 'csv' or 'json', got {self.format!r}")
        if not self.tolerance > 0:
            raise ConfigError("tolerance: must be > 0")
        if self.method not in ("auto", "numeric"):
            raise ConfigError(f"method: expected 'auto' or 'numeric', got {self.method!r}")
        if self.fractal_mode not in ("ttime", "hartman"):
            raise ConfigError(f"fractal.mode: expected 'ttime' or 'hartman', got {self.fractal_mode!r}")

    def cell(self) -> pot.PiecewiseConstantPotential:
        return pot.from_config(self.potential)

    def energy_values(self) -> list[float]:
        if self.energies is not None:
            return sorted(self.energies)
        if self.energy is not None:
            return self.energy.values()
        raise ConfigError("energy: missing field")

    def single_energy(self) -> float:
        values = self.energy_values()
        if len(values) != 1:
            raise ConfigError("energy: this subcommand needs a single energy")
        return values[0]


def _listify(value):
    return value if isinstance(value, list) else [value]


def _number(value, name) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name}: expected a number, got {value!r}")
    return float(value)


def _floats(values, name) -> list[float]:
    return [_number(v, name) for v in values]


def _ints(values, name) -> list[int]:
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v:
            raise ConfigError(f"{name}: expected integers, got {v!r}")
        out.append(int(v))
    return out


def parallel_map(fn: Callable, tasks: list, workers: int = 1) -> list:
    """Order-preserving map, optionally over worker processes."""
    if workers <= 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def _log10_T(log_magnitude: float) -> float:
    return 2.0 * log_magnitude / math.log(10.0)


# --- per-point workers (module level so they pickle) ---

def _transmit_point(task):
    cell, E = task
    return transmit(cell, E)


def _ttime_point(task):
    cell, E, h = task
    return tunneling_time_single(cell, E, h)


def _periodic_point(task):
    cell, N, L, E, h = task
    spec = PeriodicSpec.for_cell(cell, N, L)
    pt = t_periodic(transmit(cell, E), spec, wavevector(E))
    tau = None
    flagged = pt.resonance
    if not flagged:
        try:
            tau = tunneling_time_periodic(cell, spec, E, h).tau
        except ResonanceError:
            flagged = True
    return [E, N, L, pt.chi, pt.phi_N, _log10_T(pt.log_magnitude), tau, int(flagged)]


def _hartman_point(task):
    cell, b, E, h, analytic = task
    if analytic:
        V = cell.segments[0][1]
        return tunneling_time_rect_analytic(V, b, E).tau, abs(hartman_deviation_rect(V, b, E))
    try:
        return tunneling_time_single(cell.scaled(b / cell.b), E, h).tau, None
    except ResonanceError:
        return None, None


def _ghe_point(task):
    cell, N, L, E, h = task
    try:
        return tunneling_time_periodic(cell, PeriodicSpec.for_cell(cell, N, L), E, h).tau
    except ResonanceError:
        return None


# --- subcommands ---

def run_transmit(cfg: SweepConfig, workers: int = 1):
    cell = cfg.cell()
    energies = cfg.energy_values()
    res = parallel_map(_transmit_point, [(cell, E) for E in energies], workers)
    phases = unwrap_phase([r.phase for r in res])
    rows = [[E, math.sqrt(E), _log10_T(r.log_magnitude), d] for E, r, d in zip(energies, res, phases)]
    return COLUMNS["transmit"], rows, {}


def _ttime_rows(cell, energies, h, workers):
    res = parallel_map(_ttime_point, [(cell, E, h) for E in energies], workers)
    return [[E, r.tau, r.phase_derivative, r.geometric_term] for E, r in zip(energies, res)]


def run_ttime(cfg: SweepConfig, workers: int = 1):
    return COLUMNS["ttime"], _ttime_rows(cfg.cell(), cfg.energy_values(), cfg.derivative_step, workers), {}


def run_periodic(cfg: SweepConfig, workers: int = 1):
    cell = cfg.cell()
    tasks = [(cell, N, L, E, cfg.derivative_step)
             for E in cfg.energy_values() for N in sorted(cfg.N) for L in sorted(cfg.L)]
    rows = parallel_map(_periodic_point, tasks, workers)
    return COLUMNS["periodic"], rows, {}


def _hartman_rows(cfg: SweepConfig, cell, workers):
    if cfg.thickness is None:
        raise ConfigError("thickness: missing field")
    E = cfg.single_energy()
    b_grid = sorted(cfg.thickness)
    rect = len(cell.segments) == 1
    limit = None
    if rect:
        try:
            limit = hartman_limit_rect(cell.segments[0][1], E)
        except OutOfRegimeError:
            limit = None
    analytic = rect and limit is not None and cfg.method == "auto"
    res = parallel_map(_hartman_point, [(cell, b, E, cfg.derivative_step, analytic) for b in b_grid], workers)
    rows = []
    for b, (tau, dev) in zip(b_grid, res):
        if limit is None or tau is None:
            rows.append([b, tau, limit, None])
        else:
            rows.append([b, tau, limit, dev if dev is not None else abs(tau - limit)])
    taus = [r[1] for r in rows if r[1] is not None]
    extra = {
        "energy": E,
        "tau_method": "rect-analytic" if analytic else "numeric-spm",
        "converged": is_saturated(taus, cfg.tolerance),
        "tau_0_estimate": taus[-1] if taus else None,
        "excluded_b": [r[0] for r in rows if r[1] is None],
    }
    return COLUMNS["hartman"], rows, extra


def run_hartman(cfg: SweepConfig, workers: int = 1):
    return _hartman_rows(cfg, cfg.cell(), workers)


def run_ghe(cfg: SweepConfig, workers: int = 1):
    cell = cfg.cell()
    E = cfg.single_energy()
    tau_0 = tunneling_time_single(cell, E, cfg.derivative_step).tau
    grid = [(N, L) for N in sorted(cfg.N) for L in sorted(cfg.L)]
    taus = parallel_map(_ghe_point, [(cell, N, L, E, cfg.derivative_step) for N, L in grid], workers)
    valid = [t for t in taus if t is not None]
    spread = max(valid) - min(valid) if valid else None
    rows = [[N, L, t, tau_0, None if t is None else abs(t - tau_0), spread] for (N, L), t in zip(grid, taus)]
    return COLUMNS["ghe"], rows, {"energy": E, "b": cell.b}


def run_fractal(cfg: SweepConfig, workers: int = 1):
    if cfg.potential.get("type") != "cantor":
        raise ConfigError("potential.type: fractal needs a 'cantor' potential")
    cell = cfg.cell()
    extra = {"segments": [list(s) for s in cell.segments]}
    if cfg.fractal_mode == "ttime":
        return COLUMNS["ttime"], _ttime_rows(cell, cfg.energy_values(), cfg.derivative_step, workers), extra
    cols, rows, more = _hartman_rows(cfg, cell, workers)
    extra.update(more)
    return cols, rows, extra


RUNNERS = {
    "transmit": run_transmit,
    "ttime": run_ttime,
    "periodic": run_periodic,
    "hartman": run_hartman,
    "ghe": run_ghe,
    "fractal": run_fractal,
}
