"""Fifth-order WENO reconstruction: accuracy, symmetry and ENO behaviour."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eulerbench.state import GasModel, to_conserved
from eulerbench.weno import (
    WenoConfig, equilibrium_slope, roe_average, smoothness_indicators,
    weno5_face_states, weno5_face_states_characteristic, weno5_interface,
    weno_weights,
)

GAS = GasModel.from_gamma(1.4)
VARIANTS = ["js", "z", "z+"]


def cell_averages(func_antideriv, x_faces):
    """Exact cell averages from an antiderivative on a uniform mesh."""
    return np.diff(func_antideriv(x_faces)) / np.diff(x_faces)


def sine_setup(n):
    dx = 2.0 * np.pi / n
    xf = np.linspace(0.0, 2.0 * np.pi, n + 1)
    avg = cell_averages(lambda x: -np.cos(x) + 2.0 * x, xf)  # f = sin + 2
    return dx, xf, avg


@pytest.mark.parametrize("variant", VARIANTS)
def test_face_values_fifth_order(variant):
    errs = []
    for n in (40, 80):
        dx, xf, avg = sine_setup(n)
        cfg = WenoConfig(variant=variant).with_mesh(dx)
        wl, wr, _, _ = weno5_face_states(avg[:, None], cfg, dx)
        exact = np.sin(xf[3 : n - 2]) + 2.0
        errs.append(np.max(np.abs(wl[:, 0] - exact)))
    order = np.log2(errs[0] / errs[1])
    assert order > 4.6


@pytest.mark.parametrize("variant", VARIANTS)
def test_face_slopes_second_order(variant):
    errs = []
    for n in (40, 80):
        dx, xf, avg = sine_setup(n)
        cfg = WenoConfig(variant=variant).with_mesh(dx)
        _, _, dwl, dwr = weno5_face_states(avg[:, None], cfg, dx)
        exact = np.cos(xf[3 : n - 2])
        errs.append(np.max(np.abs(dwl[:, 0] - exact)))
    # the face slope comes from the blended candidate polynomials and is
    # second-order accurate; it only enters the flux at O(dx)
    order = np.log2(errs[0] / errs[1])
    assert order > 1.8


def test_left_and_right_states_agree_on_smooth_data():
    n = 80
    dx, xf, avg = sine_setup(n)
    cfg = WenoConfig(variant="z+").with_mesh(dx)
    wl, wr, _, _ = weno5_face_states(avg[:, None], cfg, dx)
    assert np.max(np.abs(wl - wr)) < 1e-5


@pytest.mark.parametrize("variant", VARIANTS)
def test_reversal_symmetry_bitwise(variant):
    rng = np.random.default_rng(3)
    data = rng.uniform(0.5, 2.0, size=(20, 1))
    dx = 0.1
    cfg = WenoConfig(variant=variant).with_mesh(dx)
    wl, wr, dwl, dwr = weno5_face_states(data, cfg, dx)
    rl, rr, drl, drr = weno5_face_states(data[::-1], cfg, dx)
    # mirroring the data swaps the roles of the two sides of each interface
    assert np.array_equal(wl, rr[::-1])
    assert np.array_equal(wr, rl[::-1])
    assert np.array_equal(dwl, -drr[::-1])
    assert np.array_equal(dwr, -drl[::-1])


@pytest.mark.parametrize("variant", VARIANTS)
def test_no_overshoot_at_step(variant):
    # ENO property: reconstructed face values stay inside the data range
    data = np.where(np.arange(30) < 15, 1.0, 0.125)[:, None]
    cfg = WenoConfig(variant=variant).with_mesh(0.1)
    wl, wr, _, _ = weno5_face_states(data, cfg, 0.1)
    pad = 1e-10
    assert wl.min() >= 0.125 - pad and wl.max() <= 1.0 + pad
    assert wr.min() >= 0.125 - pad and wr.max() <= 1.0 + pad


@given(st.lists(st.floats(0.1, 10.0), min_size=5, max_size=5))
@settings(max_examples=200)
def test_weights_form_partition_of_unity(vals):
    wm2, wm1, w0, wp1, wp2 = (np.array([v]) for v in vals)
    beta = smoothness_indicators(wm2, wm1, w0, wp1, wp2)
    for variant in VARIANTS:
        cfg = WenoConfig(variant=variant).with_mesh(0.05)
        w = weno_weights(beta, cfg)
        assert abs(sum(float(x[0]) for x in w) - 1.0) < 1e-12
        assert all(float(x[0]) >= 0.0 for x in w)


def test_constant_data_reproduced_exactly():
    data = np.full((12, 1), 0.7)
    cfg = WenoConfig(variant="z+").with_mesh(0.1)
    wl, wr, dwl, dwr = weno5_face_states(data, cfg, 0.1)
    assert np.allclose(wl, 0.7, rtol=0.0, atol=1e-15)
    assert np.allclose(wr, 0.7, rtol=0.0, atol=1e-15)
    assert np.array_equal(dwl, np.zeros_like(dwl))
    assert np.array_equal(dwr, np.zeros_like(dwr))


def test_interface_wrapper_matches_vector_form():
    rng = np.random.default_rng(11)
    data = rng.uniform(0.5, 2.0, size=9)
    cfg = WenoConfig(variant="js").with_mesh(0.1)
    lv, rv = weno5_interface(data[2], data[3], data[4], data[5], data[6], cfg)
    wl, wr, _, _ = weno5_face_states(data[:, None], cfg, 0.1)
    # right face of the center cell = left state of the interface after it
    assert rv == pytest.approx(wl[2, 0], rel=1e-14)


def test_equilibrium_slope_exact_for_cubics():
    # cell averages of x^3 on a uniform mesh; interface slope must be exact
    dx = 0.1
    xf = np.arange(7) * dx
    avg = np.diff(xf**4 / 4.0) / dx
    s = equilibrium_slope(avg[1], avg[2], avg[3], avg[4], dx)
    x_if = xf[3]
    assert s == pytest.approx(3.0 * x_if**2, rel=1e-12, abs=1e-12)


def test_roe_average_consistency():
    q = np.array([1.2, 0.3, -0.1, 1.7])
    u, v, h, c = roe_average(q, q, GAS)
    rho, uu, vv, p = q
    h_exact = (0.5 * rho * (uu**2 + vv**2) + p / (GAS.gamma - 1.0) + p) / rho
    assert u == pytest.approx(uu)
    assert v == pytest.approx(vv)
    assert h == pytest.approx(h_exact)
    assert c == pytest.approx(np.sqrt(GAS.gamma * p / rho))


def test_characteristic_reconstruction_matches_componentwise_on_smooth_data():
    n = 80
    dx = 2.0 * np.pi / n
    xf = np.linspace(0.0, 2.0 * np.pi, n + 1)
    rho = cell_averages(lambda x: 2.0 * x - 0.1 * np.cos(x), xf)
    w = to_conserved(
        np.stack([rho, np.full(n, 0.4), np.full(n, -0.2), np.full(n, 1.0)]), GAS
    )[:, :, None].swapaxes(0, 1)  # (N, 4, 1)
    cfg = WenoConfig(variant="z+").with_mesh(dx)
    wl_c, wr_c, _, _ = weno5_face_states_characteristic(w, cfg, dx, GAS)
    wl_s, wr_s, _, _ = weno5_face_states(w, cfg, dx)
    assert np.max(np.abs(wl_c - wl_s)) < 1e-6
    assert np.max(np.abs(wr_c - wr_s)) < 1e-6


def test_config_validation():
    with pytest.raises(ValueError):
        WenoConfig(variant="weno9")
    with pytest.raises(ValueError):
        WenoConfig(epsilon=0.0)
