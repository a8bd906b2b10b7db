"""Transmission and stationary-phase tunneling times for piecewise-constant potentials
and their N-fold periodic repetitions."""

from .errors import DegenerateMatrixError, InvalidArgumentError, OutOfRegimeError, ResonanceError
from .periodic import (PeriodicSpec, PeriodicTransmission, chebyshev_ratios, chi, direct_array,
                       t_periodic)
from .potential import PiecewiseConstantPotential, make_cantor, make_rectangular, make_segments
from .spm import (SaturationScan, TunnelingTimeResult, hartman_deviation_rect, hartman_limit_rect,
                  phase_derivative, saturation_scan, tunneling_time_periodic, tunneling_time_rect_analytic,
                  tunneling_time_single)
from .transfer import (ScaledMatrix2, TransmissionCoefficient, cell_matrix, reflection, segment_matrix,
                       transmission, transmit, unwrap_phase)

__version__ = "0.1.0"
