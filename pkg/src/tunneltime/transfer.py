"""Transfer matrices of piecewise-constant cells with a separate log scale.

Convention: on either side of a region the wavefunction is
``A exp(ikx) + B exp(-ikx)`` with x the global coordinate, and a matrix maps
the right-hand coefficients to the left-hand ones,
``(A_L, B_L) = M (A_R, B_R)``. Zero-height segments are then the identity,
t = 1/M11 and r = M21/M11.

Entries are stored O(1) and the true matrix is ``exp(scale) * entries``, so an
opaque barrier with qb in the thousands stays representable.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMatrixError, InvalidArgumentError
from .potential import PiecewiseConstantPotential

# |height - E| below this (times max(1, |height|)) uses the series branch
SERIES_THRESHOLD = 1e-8


@dataclass(frozen=True)
class ScaledMatrix2:
    m11: complex
    m12: complex
    m21: complex
    m22: complex
    scale: float = 0.0

    @classmethod
    def identity(cls) -> "ScaledMatrix2":
        return cls(1 + 0j, 0j, 0j, 1 + 0j, 0.0)

    def normalized(self) -> "ScaledMatrix2":
        peak = max(abs(self.m11), abs(self.m12), abs(self.m21), abs(self.m22))
        if peak == 0.0 or not math.isfinite(peak):
            raise DegenerateMatrixError(f"cannot normalize matrix with peak entry {peak!r}")
        inv = 1.0 / peak
        return ScaledMatrix2(self.m11 * inv, self.m12 * inv, self.m21 * inv, self.m22 * inv,
                             self.scale + math.log(peak))

    def __matmul__(self, other: "ScaledMatrix2") -> "ScaledMatrix2":
        a, b = self, other
        return ScaledMatrix2(
            a.m11 * b.m11 + a.m12 * b.m21,
            a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21,
            a.m21 * b.m12 + a.m22 * b.m22,
            a.scale + b.scale,
        ).normalized()

    def entries(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def true(self) -> np.ndarray:
        """Unscaled matrix; overflows for very opaque cells."""
        return math.exp(self.scale) * self.entries()

    def det(self) -> complex:
        return cmath.exp(2 * self.scale) * (self.m11 * self.m22 - self.m12 * self.m21)


@dataclass(frozen=True)
class TransmissionCoefficient:
    log_magnitude: float  # ln|t|
    phase: float  # arg t, wrapped to (-pi, pi]
    energy: float

    @property
    def v(self) -> float:
        """1/|t|^2; may overflow to inf for very opaque cells."""
        return math.exp(-2.0 * self.log_magnitude)

    @property
    def sqrt_v(self) -> float:
        return math.exp(-self.log_magnitude)

    @property
    def probability(self) -> float:
        return math.exp(2.0 * self.log_magnitude)

    @property
    def t(self) -> complex:
        return cmath.rect(math.exp(self.log_magnitude), self.phase)


def wavevector(E: float) -> float:
    if not E > 0:
        raise InvalidArgumentError(f"E: must be positive, got {E!r}")
    return math.sqrt(E)


def _cos_and_sinc(E: float, height: float, width: float) -> tuple[float, float, float, float]:
    """Return (c, S, kappa2, log_scale) with the true cos(kappa w) = c*e^scale and
    sin(kappa w)/kappa = S*e^scale, kappa2 = E - height."""
    kappa2 = E - height
    if abs(kappa2) < SERIES_THRESHOLD * max(1.0, abs(height)):
        x = kappa2 * width * width
        c = 1.0 - x / 2.0 + x * x / 24.0
        S = width * (1.0 - x / 6.0 + x * x / 120.0)
        return c, S, kappa2, 0.0
    if kappa2 < 0:
        q = math.sqrt(-kappa2)
        qw = q * width
        decay = math.exp(-2.0 * qw)
        return (1.0 + decay) / 2.0, -math.expm1(-2.0 * qw) / (2.0 * q), kappa2, qw
    kap = math.sqrt(kappa2)
    return math.cos(kap * width), math.sin(kap * width) / kap, kappa2, 0.0


def segment_matrix(E: float, height: float, width: float, x0: float = 0.0) -> ScaledMatrix2:
    """Transfer matrix of a constant segment on [x0, x0 + width]."""
    k = wavevector(E)
    if not width > 0:
        raise InvalidArgumentError(f"width: must be positive, got {width!r}")
    if height == 0.0:
        return ScaledMatrix2.identity()
    c, S, kappa2, scale = _cos_and_sinc(E, height, width)
    x1 = x0 + width
    plus = 0.5 * (k + kappa2 / k) * S
    minus = 0.5 * (k - kappa2 / k) * S
    fwd = cmath.exp(1j * k * width)
    shift = cmath.exp(1j * k * (x0 + x1))
    return ScaledMatrix2(
        fwd * complex(c, -plus),
        1j * minus / shift,
        -1j * minus * shift,
        complex(c, plus) / fwd,
        scale,
    ).normalized()


def cell_matrix(E: float, potential: PiecewiseConstantPotential, x0: float = 0.0) -> ScaledMatrix2:
    """Ordered product of segment matrices; the cell starts at global position x0."""
    wavevector(E)
    m = ScaledMatrix2.identity()
    x = x0
    for width, height in potential.segments:
        m = m @ segment_matrix(E, height, width, x)
        x += width
    return m


def transmission(m: ScaledMatrix2, E: float) -> TransmissionCoefficient:
    if m.m11 == 0:
        raise DegenerateMatrixError("m11 vanishes; transmission undefined")
    return TransmissionCoefficient(
        log_magnitude=-(m.scale + math.log(abs(m.m11))),
        phase=-cmath.phase(m.m11) if m.m11.imag != 0 else (0.0 if m.m11.real > 0 else math.pi),
        energy=E,
    )


def reflection(m: ScaledMatrix2) -> complex:
    if m.m11 == 0:
        raise DegenerateMatrixError("m11 vanishes; reflection undefined")
    return m.m21 / m.m11


def transmit(potential: PiecewiseConstantPotential, E: float) -> TransmissionCoefficient:
    """Shorthand for ``transmission(cell_matrix(E, potential), E)``."""
    return transmission(cell_matrix(E, potential), E)


def unwrap_phase(series) -> list[float]:
    """Shift each phase by a multiple of 2*pi so consecutive steps lie in (-pi, pi]."""
    out: list[float] = []
    for value in series:
        value = float(value)
        if not out:
            out.append(value)
            continue
        n = math.floor((out[-1] - value + math.pi) / (2.0 * math.pi))
        out.append(value + 2.0 * math.pi * n)
    return out
