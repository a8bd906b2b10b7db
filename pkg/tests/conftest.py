import cmath
import math

import numpy as np
import pytest
from hypothesis import strategies as st

from tunneltime.potential import make_segments


def wrap(x):
    """Map an angle to (-pi, pi]."""
    y = math.remainder(x, 2 * math.pi)
    return math.pi if y == -math.pi else y


def angle_diff(a, b):
    return abs(wrap(a - b))


def dense_transfer(E, segments):
    """Independent transfer matrix: (psi, psi') propagation with complex kappa and
    explicit plane-wave bases, inverted with numpy. No log scaling, so only for
    moderately opaque cells."""
    k = math.sqrt(E)

    def basis(x):
        e, ei = cmath.exp(1j * k * x), cmath.exp(-1j * k * x)
        return np.array([[e, ei], [1j * k * e, -1j * k * ei]])

    m = np.eye(2, dtype=complex)
    x = 0.0
    for w, V in segments:
        kap = cmath.sqrt(E - V)
        c = cmath.cos(kap * w)
        S = cmath.sin(kap * w) / kap if kap != 0 else w
        p_inv = np.array([[c, -S], [kap * kap * S, c]])
        m = m @ np.linalg.inv(basis(x)) @ p_inv @ basis(x + w)
        x += w
    return m


def random_segments(rng, n_max=4, w=(0.2, 3.0), h=(0.0, 5.0)):
    n = int(rng.integers(1, n_max + 1))
    return [(float(rng.uniform(*w)), float(rng.uniform(*h))) for _ in range(n)]


def random_energy(rng, segments, lo=0.0, hi=6.0, gap=1e-3):
    """Energy in (lo, hi) kept away from every segment height."""
    while True:
        E = float(rng.uniform(lo, hi))
        if E > 1e-3 and all(abs(E - V) > gap for _, V in segments):
            return E


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


segment_st = st.tuples(st.floats(0.1, 2.0), st.floats(-2.0, 5.0))
cell_st = st.lists(segment_st, min_size=1, max_size=4).map(make_segments)
energy_st = st.floats(0.05, 6.0)
