"""Stationary-phase tunneling times.

tau = d(delta)/dE + b/(2k) for a single cell, and
tau_N = d(phi_N)/dE - s/(2k) + b/(2k) for N cells with period s = b + L.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import InvalidArgumentError, OutOfRegimeError, ResonanceError
from .periodic import PeriodicSpec, t_periodic
from .potential import PiecewiseConstantPotential
from .transfer import transmit, unwrap_phase, wavevector

STEP_FACTOR = sys.float_info.epsilon ** (1.0 / 3.0)

NUMERIC_SPM = "numeric-spm"
RECT_ANALYTIC = "rect-analytic"
PERIODIC_SPM = "periodic-spm"


@dataclass(frozen=True)
class TunnelingTimeResult:
    tau: float
    phase_derivative: float
    geometric_term: float
    method: str
    energy: float


def _reduced(phase: float) -> float:
    # exact in floating point; keeps stencil phases O(pi) so rounding stays ~1e-16
    return math.remainder(phase, 2.0 * math.pi)


def default_step(E: float) -> float:
    return min(max(abs(E), 1.0) * STEP_FACTOR, E / 4.0)


def phase_derivative(phase_fn: Callable[[float], float], E: float, h: Optional[float] = None) -> float:
    """d(phase)/dE by a 5-point (Richardson) central difference.

    The stencil is laid out uniformly in k = sqrt(E) with energy step ~h, so
    that sqrt(E_i) recovers the stencil wavevectors exactly and every phase
    is evaluated at its nominal point. The five phases are unwrapped before
    differencing, so wrapped phase functions are fine as long as the stencil
    is fine enough.
    """
    if not E > 0:
        raise InvalidArgumentError(f"E: must be positive, got {E!r}")
    if h is None:
        h = default_step(E)
    if not h > 0:
        raise InvalidArgumentError(f"h: must be positive, got {h!r}")
    if E - 2.0 * h <= 0:
        raise InvalidArgumentError(f"stencil E - 2h = {E - 2.0 * h!r} is not positive")
    k0 = math.sqrt(E)
    hk = h / (2.0 * k0)
    ks = [k0 + i * hk for i in (-2, -1, 0, 1, 2)]
    try:
        p = unwrap_phase([phase_fn(k * k) for k in ks])
    except ResonanceError as exc:
        raise ResonanceError(f"flagged resonance inside derivative stencil at E={E!r}: {exc}") from None
    # divide by the spacings actually realised in floating point, not by 2h and 4h
    inner = (p[3] - p[1]) / (ks[3] - ks[1])
    outer = (p[4] - p[0]) / (ks[4] - ks[0])
    return (4.0 * inner - outer) / (3.0 * 2.0 * k0)


def tunneling_time_single(potential: PiecewiseConstantPotential, E: float,
                          h: Optional[float] = None) -> TunnelingTimeResult:
    k = wavevector(E)
    barriers = [w for w, v in potential.segments if v != 0.0]

    # delta carries -k*w for every non-free segment; adding the same float
    # products back leaves a slowly varying phase to difference
    def smooth_phase(x):
        kx = wavevector(x)
        return transmit(potential, x).phase + math.fsum(_reduced(kx * w) for w in barriers)

    d = phase_derivative(smooth_phase, E, h) - math.fsum(barriers) / (2.0 * k)
    geo = potential.b / (2.0 * k)
    return TunnelingTimeResult(d + geo, d, geo, NUMERIC_SPM, E)


def _rect_parts(V: float, b: float, E: float):
    if not E > 0:
        raise InvalidArgumentError(f"E: must be positive, got {E!r}")
    if not b > 0:
        raise InvalidArgumentError(f"b: must be positive, got {b!r}")
    if not E < V:
        raise OutOfRegimeError(f"rectangular closed form needs 0 < E < V, got E={E!r}, V={V!r}")
    k = math.sqrt(E)
    q = math.sqrt(V - E)
    a = (k * k - q * q) / (2 * k * q)
    da = (k * k + q * q) ** 2 / (4 * k ** 3 * q ** 3)
    x = q * b
    decay = math.exp(-2 * x)
    th = -math.expm1(-2 * x) / (1 + decay)
    one_minus_th = 2 * decay / (1 + decay)
    sech2 = 4 * decay / (1 + decay) ** 2
    return k, q, a, da, th, one_minus_th, sech2


def tunneling_time_rect_analytic(V: float, b: float, E: float) -> TunnelingTimeResult:
    """Closed-form d/dE arctan(((k^2 - q^2)/(2kq)) tanh(qb)) for 0 < E < V.

    With f = a tanh(qb), a = (k^2 - q^2)/(2kq):
    a' = (k^2 + q^2)^2 / (4 k^3 q^3), d tanh(qb)/dE = -b sech^2(qb) / (2q),
    tau = f' / (1 + f^2).
    """
    k, q, a, da, th, _, sech2 = _rect_parts(V, b, E)
    df = da * th - a * b * sech2 / (2 * q)
    tau = df / (1 + (a * th) ** 2)
    geo = b / (2 * k)
    return TunnelingTimeResult(tau, tau - geo, geo, RECT_ANALYTIC, E)


def hartman_limit_rect(V: float, E: float) -> float:
    """Thick-barrier limit 1/(qk) of the rectangular-barrier time."""
    if not E > 0:
        raise InvalidArgumentError(f"E: must be positive, got {E!r}")
    if not E < V:
        raise OutOfRegimeError(f"Hartman limit needs 0 < E < V, got E={E!r}, V={V!r}")
    return 1.0 / (math.sqrt(V - E) * math.sqrt(E))


def hartman_deviation_rect(V: float, b: float, E: float) -> float:
    """tau(b) - 1/(qk) for the rectangular barrier, without cancellation.

    Factoring (1 - tanh qb) out of the difference keeps full relative
    precision even when the deviation is far below machine epsilon.
    """
    k, q, a, da, th, omt, _ = _rect_parts(V, b, E)
    num = da * (a * a * th - 1) - (1 + a * a) * a * b * (1 + th) / (2 * q)
    return omt * num / ((1 + (a * th) ** 2) * (1 + a * a))


def periodic_phase(cell: PiecewiseConstantPotential, spec: PeriodicSpec, E: float) -> float:
    """phi_N at energy E; raises ResonanceError at flagged points."""
    pt = t_periodic(transmit(cell, E), spec, wavevector(E))
    if pt.resonance:
        raise ResonanceError(f"near-singular periodic denominator at E={E!r}")
    return pt.phi_N


def tunneling_time_periodic(cell: PiecewiseConstantPotential, spec: PeriodicSpec, E: float,
                            h: Optional[float] = None) -> TunnelingTimeResult:
    k = wavevector(E)
    total = phase_derivative(lambda x: periodic_phase(cell, spec, x) - _reduced(wavevector(x) * spec.L), E, h)
    geo = -spec.L / (2.0 * k)
    d = total - geo
    return TunnelingTimeResult(d + geo, d, geo, PERIODIC_SPM, E)


@dataclass
class SaturationScan:
    b_values: list[float]
    taus: list[Optional[float]]  # None where the point was excluded
    tau_0: Optional[float]
    converged: bool
    excluded: list[float] = field(default_factory=list)


def is_saturated(values: Sequence[float], tol: float = 1e-6) -> bool:
    """True when the last three values differ successively by < tol, non-increasingly.

    A final difference under tol * 1e-2 counts as settled even if it exceeds
    the previous one: past saturation both are finite-difference noise.
    """
    if len(values) < 3:
        return False
    d1 = abs(values[-2] - values[-3])
    d2 = abs(values[-1] - values[-2])
    return d1 < tol and d2 < tol and (d2 <= d1 or d2 < tol * 1e-2)


def saturation_scan(cell_family: Callable[[float], PiecewiseConstantPotential], E: float,
                    b_grid: Sequence[float], tol: float = 1e-6,
                    h: Optional[float] = None) -> SaturationScan:
    """tau over increasing thicknesses, with an estimate of the saturated value."""
    b_grid = [float(b) for b in b_grid]
    if len(b_grid) < 4:
        raise InvalidArgumentError("b_grid: need at least 4 thicknesses")
    if any(b1 <= b0 for b0, b1 in zip(b_grid, b_grid[1:])):
        raise InvalidArgumentError("b_grid: must be strictly increasing")
    taus: list[Optional[float]] = []
    excluded = []
    for b in b_grid:
        try:
            taus.append(tunneling_time_single(cell_family(b), E, h).tau)
        except ResonanceError:
            taus.append(None)
            excluded.append(b)
    valid = [t for t in taus if t is not None]
    return SaturationScan(b_grid, taus, valid[-1] if valid else None, is_saturated(valid, tol), excluded)
