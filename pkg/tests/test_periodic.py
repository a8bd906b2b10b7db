import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_chebyt, eval_chebyu

from conftest import angle_diff, random_energy, random_segments
from tunneltime.errors import InvalidArgumentError
from tunneltime.periodic import (PeriodicSpec, chebyshev_ratios, chebyshev_values, chi, direct_array,
                                 t_periodic)
from tunneltime.potential import make_rectangular, make_segments
from tunneltime.transfer import TransmissionCoefficient, transmit


def exact_rho(x: Fraction, N: int) -> Fraction:
    u_prev, u = Fraction(0), Fraction(1)
    for _ in range(1, N):
        u_prev, u = u, 2 * x * u - u_prev
    return u / (x * u - u_prev)


def periodic_vs_array(cell, N, L, E):
    spec = PeriodicSpec.for_cell(cell, N, L)
    pt = t_periodic(transmit(cell, E), spec, math.sqrt(E))
    ref = transmit(direct_array(cell, spec), E)
    return pt, ref


def test_spec_validation():
    with pytest.raises(InvalidArgumentError):
        PeriodicSpec(0, 1.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        PeriodicSpec(2, -0.1, 1.0)
    spec = PeriodicSpec(3, 0.5, 1.0)
    assert spec.s == 1.5 and spec.total_width == 4.0


def test_chi_examples():
    assert chi(TransmissionCoefficient(0.0, 0.0, 1.0), 1.0, math.pi) == pytest.approx(-1, abs=1e-15)
    cell = transmit(make_rectangular(2, 1), 1.0)
    assert chi(cell, 1.0, 2.0) == pytest.approx(math.cosh(1) * math.cos(1), rel=1e-12)
    assert chi(cell, 1.0, 2.0) == pytest.approx(0.83373, abs=1e-5)
    opaque = transmit(make_rectangular(2, 30), 1.0)
    x = chi(opaque, 1.0, 30.0 + 1.0)  # cos(delta + ks) = cos(1)
    assert x == pytest.approx(math.cosh(30) * math.cos(1), rel=1e-10)


def test_chi_overflow_is_signed_infinity():
    t = TransmissionCoefficient(-5000.0, 0.3, 1.0)
    assert chi(t, 1.0, 0.1) == math.inf


def test_ratio_examples():
    r = chebyshev_ratios(2.0, 2)
    assert r.sigma == 0.25 and r.rho == pytest.approx(4 / 7, rel=1e-15)
    assert chebyshev_ratios(0.5, 2).rho == pytest.approx(-2, rel=1e-15)
    assert chebyshev_ratios(1e8, 5).rho == pytest.approx(1e-8, rel=1e-6)
    assert chebyshev_ratios(3.0, 1) == (0.0, pytest.approx(1 / 3), 0.0, 1.0, False)


def test_ratio_against_scipy():
    for N in range(1, 12):
        for x in np.linspace(-3, 3, 61):
            r = chebyshev_ratios(float(x), N)
            T, U = eval_chebyt(N, x), eval_chebyu(N - 1, x)
            if abs(T) > 1e-6 and abs(U) > 1e-6 and not r.near_singular:
                assert r.rho == pytest.approx(U / T, rel=1e-9, abs=1e-12)
                assert r.log_abs_u == pytest.approx(math.log(abs(U)), abs=1e-9)
                assert r.sign_u == math.copysign(1, U)


def test_ratio_flags_singularity():
    # U_1(0) = 0, so the N=3 recurrence divides by 2*chi - sigma_2 = 0 - ... at chi=0: den = 0 - 0
    r = chebyshev_ratios(0.0, 3)
    assert r.near_singular
    assert not math.isfinite(r.sigma) or not math.isfinite(r.rho)
    # T_2 vanishes at chi = 1/sqrt(2)
    assert chebyshev_ratios(1 / math.sqrt(2), 2).near_singular


def test_ratio_large_chi_stays_finite():
    r = chebyshev_ratios(1e150, 400)
    assert math.isfinite(r.rho) and math.isfinite(r.log_abs_u)
    assert r.log_abs_u == pytest.approx(399 * math.log(2e150), rel=1e-12)


def test_chebyshev_identity():
    for N in range(1, 11):
        for x in np.linspace(-3, 3, 121):
            T, U, U2 = chebyshev_values(float(x), N)
            assert T == pytest.approx(eval_chebyt(N, x), abs=1e-12 * max(1, abs(T)))
            assert U == pytest.approx(eval_chebyu(N - 1, x), abs=1e-12 * max(1, abs(U)))
            assert abs(eval_chebyt(N, x) - (x * eval_chebyu(N - 1, x) - (eval_chebyu(N - 2, x) if N >= 2 else 0))) \
                < 1e-12 * max(1, abs(eval_chebyt(N, x)))


def test_ratio_asymptote():
    # relative error |rho*chi - 1| ~ c/chi^2
    errs = {x: abs(chebyshev_ratios(x, 5).rho * x - 1) for x in (1e2, 1e3, 1e4)}
    assert errs[1e2] / errs[1e3] == pytest.approx(100, rel=1e-3)
    assert errs[1e3] / errs[1e4] == pytest.approx(100, rel=1e-2)
    exact = {x: abs(exact_rho(Fraction(x), 5) * x - 1) for x in (10 ** 4, 10 ** 6, 10 ** 8)}
    assert float(exact[10 ** 4] / exact[10 ** 6]) == pytest.approx(1e4, rel=1e-6)
    assert float(exact[10 ** 6] / exact[10 ** 8]) == pytest.approx(1e4, rel=1e-6)
    for x in (10 ** 4, 10 ** 6, 10 ** 8):
        assert chebyshev_ratios(float(x), 5).rho == pytest.approx(float(exact_rho(Fraction(x), 5)), rel=1e-14)


def test_n1_reduction():
    cell = make_segments([(1.0, 2.0), (0.4, 0.5)])
    for E in (0.3, 1.0, 2.7, 5.0):
        tr = transmit(cell, E)
        for L in (0.0, 1.3, 7.0):
            spec = PeriodicSpec.for_cell(cell, 1, L)
            pt = t_periodic(tr, spec, math.sqrt(E))
            assert angle_diff(pt.phi_N, tr.phase + math.sqrt(E) * spec.s) < 1e-12
            assert pt.t == pytest.approx(tr.t, rel=1e-10)


def test_two_cell_example():
    pt, ref = periodic_vs_array(make_rectangular(2, 1), 2, 1.0, 1.0)
    assert abs(pt.log_magnitude - ref.log_magnitude) < 1e-10
    assert angle_diff(pt.big_phase, ref.phase) < 1e-10


def test_opaque_phase_limit():
    cell = make_rectangular(2, 30)
    tr = transmit(cell, 1.0)
    spec = PeriodicSpec.for_cell(cell, 3, 5.0)
    pt = t_periodic(tr, spec, 1.0)
    assert angle_diff(pt.phi_N, tr.phase + spec.s) < 1e-9


def test_direct_array_examples():
    rect = make_rectangular(2, 1)
    assert direct_array(rect, PeriodicSpec.for_cell(rect, 2, 1.0)).segments == ((1.0, 2.0), (1.0, 0.0), (1.0, 2.0))
    cell = make_segments([(1, 2), (2, 0.5)])
    assert direct_array(cell, PeriodicSpec.for_cell(cell, 1, 7.0)) == cell
    assert direct_array(rect, PeriodicSpec.for_cell(rect, 3, 0.5)).b == 4.0


def test_fused_cells():
    cell = make_rectangular(2, 0.8)
    for E in (0.5, 1.0, 3.0):
        spec = PeriodicSpec.for_cell(cell, 4, 0.0)
        pt = t_periodic(transmit(cell, E), spec, math.sqrt(E))
        one = transmit(make_rectangular(2, 3.2), E)
        assert abs(pt.log_magnitude - one.log_magnitude) < 1e-10
        assert angle_diff(pt.big_phase, one.phase) < 1e-10


def test_closed_form_matches_array(rng):
    for _ in range(200):
        segs = random_segments(rng)
        E = random_energy(rng, segs)
        N = int(rng.integers(1, 7))
        L = float(rng.uniform(0, 4))
        pt, ref = periodic_vs_array(make_segments(segs), N, L, E)
        assert abs(pt.log_magnitude - ref.log_magnitude) < 1e-9
        assert angle_diff(pt.big_phase, ref.phase) < 1e-9
        assert pt.log_magnitude <= 1e-10


@settings(max_examples=150, deadline=None)
@given(st.lists(st.tuples(st.floats(0.1, 2.0), st.floats(0.0, 5.0)), min_size=1, max_size=3),
       st.floats(0.05, 6.0), st.integers(1, 8), st.floats(0.0, 4.0))
def test_sub_unitarity(segs, E, N, L):
    cell = make_segments(segs)
    pt = t_periodic(transmit(cell, E), PeriodicSpec.for_cell(cell, N, L), math.sqrt(E))
    assert math.exp(pt.log_magnitude) <= 1 + 1e-10


def test_very_opaque_cells_many_repetitions():
    cell = make_rectangular(3, 400)
    E = 1.0
    pt, ref = periodic_vs_array(cell, 20, 1.5, E)
    assert pt.log_magnitude == pytest.approx(ref.log_magnitude, rel=1e-12)
    assert angle_diff(pt.big_phase, ref.phase) < 1e-8


def test_opaque_phase_limit_all_geometries():
    cell = make_rectangular(2, 25)
    tr = transmit(cell, 1.0)
    for N in (2, 3, 5):
        for L in (0.5, 2, 10):
            spec = PeriodicSpec.for_cell(cell, N, L)
            pt = t_periodic(tr, spec, 1.0)
            sign_u = chebyshev_ratios(pt.chi, N).sign_u
            branch = math.pi if sign_u < 0 else 0.0
            assert angle_diff(pt.phi_N, tr.phase + spec.s + branch) < 1e-9
            assert (sign_u < 0) == (N % 2 == 0 and pt.chi < 0)
