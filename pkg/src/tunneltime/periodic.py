"""Transmission through N copies of a cell separated by gaps of length L.

The N-cell amplitude follows from the single-cell one through Chebyshev
polynomials of the Bloch parameter chi = sqrt(v) cos(delta + k s):

    t_N = exp(-ikNs) / (M1 exp(-iks) U_{N-1}(chi) - U_{N-2}(chi))
        = exp(-ikNs) / (T_N(chi) - i sqrt(v) sin(delta + ks) U_{N-1}(chi))

For |chi| > 1 the polynomials grow like (2 chi)^N, so they are carried as
ratios (a continued fraction) plus a log magnitude. Inside the band
(|chi| <= 1) they are bounded and the plain recurrence is used.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import InvalidArgumentError
from .potential import PiecewiseConstantPotential
from .transfer import TransmissionCoefficient

SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class PeriodicSpec:
    N: int
    L: float
    b: float

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 1:
            raise InvalidArgumentError(f"N: must be an integer >= 1, got {self.N!r}")
        if not (math.isfinite(self.L) and self.L >= 0):
            raise InvalidArgumentError(f"L: must be >= 0, got {self.L!r}")
        if not (math.isfinite(self.b) and self.b > 0):
            raise InvalidArgumentError(f"b: must be positive, got {self.b!r}")

    @classmethod
    def for_cell(cls, cell: PiecewiseConstantPotential, N: int, L: float) -> "PeriodicSpec":
        return cls(int(N), float(L), cell.b)

    @property
    def s(self) -> float:
        return self.b + self.L

    @property
    def total_width(self) -> float:
        return (self.N - 1) * self.s + self.b


@dataclass(frozen=True)
class PeriodicTransmission:
    chi: float
    phi_N: float  # wrapped to (-pi, pi]
    big_phase: float  # phi_N - k N s, arg of t_N up to 2*pi
    log_magnitude: float  # ln|t_N|
    energy: float
    resonance: bool = False

    @property
    def t(self) -> complex:
        return math.exp(self.log_magnitude) * complex(math.cos(self.big_phase), math.sin(self.big_phase))


class ChebyshevRatios(NamedTuple):
    sigma: float  # U_{N-2}/U_{N-1}
    rho: float  # U_{N-1}/T_N
    log_abs_u: float  # ln|U_{N-1}|
    sign_u: float
    near_singular: bool


def chebyshev_ratios(chi: float, N: int) -> ChebyshevRatios:
    """Continued-fraction evaluation of U_{N-2}/U_{N-1} and U_{N-1}/T_N.

    sigma_1 = 0, sigma_{j+1} = 1 / (2 chi - sigma_j); T_N = U_{N-1} (chi - sigma_N).
    Intermediates stay O(max(1, |chi|)) unless a denominator nearly vanishes,
    in which case ``near_singular`` is set.
    """
    if isinstance(N, bool) or int(N) != N or N < 1:
        raise InvalidArgumentError(f"N: must be an integer >= 1, got {N!r}")
    tol = SINGULAR_TOL * max(1.0, abs(chi))
    sigma = 0.0
    log_u, sign_u = 0.0, 1.0
    near = False
    for _ in range(1, N):
        den = 2.0 * chi - sigma
        if abs(den) <= tol:
            near = True
        if den == 0.0:
            return ChebyshevRatios(math.inf, math.nan, math.nan, math.nan, True)
        sigma = 1.0 / den
        # U_j / U_{j-1} = den
        log_u += math.log(abs(den))
        sign_u *= math.copysign(1.0, den)
    den = chi - sigma
    if abs(den) <= tol:
        near = True
    rho = math.copysign(math.inf, den) if den == 0.0 else 1.0 / den
    return ChebyshevRatios(sigma, rho, log_u, sign_u, near)


def chebyshev_values(chi: float, N: int) -> tuple[float, float, float]:
    """(T_N, U_{N-1}, U_{N-2}) by the three-term recurrence; meant for |chi| <= 1."""
    u_prev, u = 0.0, 1.0  # U_{-1}, U_0
    for _ in range(1, N):
        u_prev, u = u, 2.0 * chi * u - u_prev
    return chi * u - u_prev, u, u_prev


def _bloch_angle(phase: float, k: float, b: float, L: float) -> float:
    # delta + k(b + L), reducing k*b and k*L separately so they cancel exactly
    # against the same products elsewhere (time derivatives)
    return phase + math.remainder(k * b, 2.0 * math.pi) + math.remainder(k * L, 2.0 * math.pi)


def chi(trans: TransmissionCoefficient, k: float, s: float, L: float = 0.0) -> float:
    """Bloch parameter sqrt(v) cos(delta + k s); +-inf if sqrt(v) overflows.

    ``L`` optionally splits the period as s = (s - L) + L for the phase sum.
    """
    c = math.cos(_bloch_angle(trans.phase, k, s - L, L))
    try:
        return math.exp(-trans.log_magnitude) * c
    except OverflowError:
        return math.copysign(math.inf, c) if c != 0 else 0.0


def t_periodic(trans: TransmissionCoefficient, spec: PeriodicSpec, k: float) -> PeriodicTransmission:
    N, s = spec.N, spec.s
    theta = _bloch_angle(trans.phase, k, spec.b, spec.L)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    log_sqrt_v = -trans.log_magnitude
    x = chi(trans, k, s, spec.L)
    flagged = False

    if abs(x) <= 1.0:
        T, U, _ = chebyshev_values(x, N)
        # denominator divided by sqrt(v): re - i*im
        re = T * math.exp(-log_sqrt_v)
        im = sin_t * U
        log_den = log_sqrt_v + math.log(math.hypot(re, im))
        flagged = abs(re) < SINGULAR_TOL and abs(im) < SINGULAR_TOL
    else:
        ratios = chebyshev_ratios(x, N)
        flagged = ratios.near_singular
        inv_sqrt_v = math.exp(-log_sqrt_v)
        # T_N / (sqrt(v) U_{N-1}) = cos(theta) - sigma_N / sqrt(v)
        re = (cos_t - ratios.sigma * inv_sqrt_v) * ratios.sign_u
        im = sin_t * ratios.sign_u
        log_den = ratios.log_abs_u + log_sqrt_v + math.log(math.hypot(re, im))

    phi = math.atan2(im, re)
    return PeriodicTransmission(
        chi=x,
        phi_N=phi,
        big_phase=phi - k * N * s,
        log_magnitude=-log_den,
        energy=trans.energy,
        resonance=flagged,
    )


def direct_array(cell: PiecewiseConstantPotential, spec: PeriodicSpec) -> PiecewiseConstantPotential:
    """Explicit segment list cell, gap, cell, ..., cell (N cells, N - 1 gaps)."""
    segs: list[tuple[float, float]] = []
    for j in range(spec.N):
        if j > 0 and spec.L > 0:
            segs.append((spec.L, 0.0))
        segs.extend(cell.segments)
    return PiecewiseConstantPotential(tuple(segs))
