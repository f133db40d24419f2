import numpy as np
import pytest

from sphtrans.errors import CapabilityError, DomainError
from sphtrans.groups import haar_log_derivative, preset
from sphtrans.profiles import gaussian_profile
from sphtrans.spherical import (
    RadialProfile,
    phi,
    phi_d1,
    phi_d2,
    phi_integral_oracle,
    sigma,
    xi,
)

PRESETS = ("SL2R", "H3", "H4", "CH2")


def test_phi_normalization_random_strip():
    # phi_lam(0) = 1 exactly to 1e-13 for 200 random lam with |Im lam| <= rho
    rng = np.random.default_rng(2024)
    for name in ("SL2R", "CH2"):
        G = preset(name)
        for _ in range(100):
            lam = complex(rng.uniform(-10, 10), rng.uniform(-G.rho, G.rho))
            assert abs(phi(G, lam, 0.0) - 1.0) <= 1e-13


def test_weyl_functional_equation_grid():
    for name in PRESETS:
        G = preset(name)
        lams = np.linspace(0.25, 9.75, 20)
        ts = np.linspace(0.05, 6.0, 20)
        worst = 0.0
        for lam in lams:
            worst = max(worst, float(np.max(np.abs(phi(G, lam, ts) - phi(G, -lam, ts)))))
        assert worst <= 1e-11


def test_phi_bounded_by_one_for_real_lam():
    for name in PRESETS:
        G = preset(name)
        for lam in (0.0, 0.7, 3.0, 11.0):
            vals = np.abs(phi(G, lam, np.linspace(0.0, 12.0, 121)))
            assert np.all(vals <= 1.0 + 1e-12)


def test_phi_real_for_real_lam():
    G = preset("H4")
    vals = phi(G, 2.3, np.linspace(0.0, 9.0, 91))
    assert np.max(np.abs(vals.imag)) < 1e-13


def test_radial_ode_residual():
    # phi'' + (Delta'/Delta) phi' + (lam^2+rho^2) phi = 0 by central differences
    h = 1e-4
    for name in PRESETS:
        G = preset(name)
        for lam in (0.0, 0.5, 2.0, 8.0):
            ts = np.linspace(0.3, 5.0, 12)
            d2 = (phi(G, lam, ts + h) - 2.0 * phi(G, lam, ts) + phi(G, lam, ts - h)) / h**2
            d1 = (phi(G, lam, ts + h) - phi(G, lam, ts - h)) / (2 * h)
            resid = d2 + haar_log_derivative(G, ts) * d1 + (lam**2 + G.rho**2) * phi(G, lam, ts)
            assert np.max(np.abs(resid)) <= 1e-5 * (1.0 + lam * lam)


def test_phi_before_after_switch_consistent():
    # both evaluation regimes agree where their domains overlap
    for name in PRESETS:
        G = preset(name)
        for lam in (0.3, 2.0, 5.0):
            near = phi(G, lam, np.array([1.19, 1.2, 1.21]))
            assert np.all(np.isfinite(near))
            fd = (near[2] - near[0]) / 0.02
            an = phi_d1(G, lam, 1.2)
            assert abs(fd - an) < 1e-3  # derivative-level continuity across the switch


def test_analytic_derivatives_match_differences():
    G = preset("CH2")
    for lam in (0.4, 3.0):
        for t in (0.3, 0.9, 2.5, 6.0):
            h = 1e-5
            fd1 = (phi(G, lam, t + h) - phi(G, lam, t - h)) / (2 * h)
            assert abs(fd1 - phi_d1(G, lam, t)) < 5e-9
            fd2 = (phi(G, lam, t + h) - 2 * phi(G, lam, t) + phi(G, lam, t - h)) / h**2
            assert abs(fd2 - phi_d2(G, lam, t)) < 5e-5


def test_integral_oracle_matches_phi():
    for name in ("SL2R", "H3", "H4"):
        G = preset(name)
        for lam, t in ((0.0, 1.0), (1.0, 0.7), (2.0, 1.3), (5.0, 2.1)):
            a = phi(G, lam, t)
            b = phi_integral_oracle(G, lam, t)
            assert abs(a - b) <= 1e-9


def test_integral_oracle_trivialities():
    G = preset("SL2R")
    assert phi_integral_oracle(G, 1.3, 0.0) == 1.0
    # Weyl flip inside the oracle itself
    v1 = phi_integral_oracle(G, 1.0, 0.9)
    v2 = phi_integral_oracle(G, -1.0, 0.9)
    assert abs(v1 - v2) <= 1e-12


def test_integral_oracle_capability_error():
    with pytest.raises(CapabilityError):
        phi_integral_oracle(preset("CH2"), 1.0, 1.0)


def test_phi_domain_error():
    with pytest.raises(DomainError):
        phi(preset("SL2R"), 1.0, -0.2)


def test_xi_basics_and_monotonicity():
    for name in PRESETS:
        G = preset(name)
        assert xi(G, 0.0) == pytest.approx(1.0, abs=1e-14)
        v1, v2, v5 = xi(G, 1.0), xi(G, 2.0), xi(G, 5.0)
        assert 1.0 > v1 > v2 > v5 > 0.0


def test_xi_asymptotic_ratio_bounded():
    # e^{rho t} Xi(t) / (1+t) stays within a factor 10 band on [5, 30]
    for name in PRESETS:
        G = preset(name)
        ts = np.linspace(5.0, 30.0, 26)
        ratio = np.exp(G.rho * ts) * xi(G, ts) / (1.0 + ts)
        assert ratio.max() / ratio.min() < 10.0


def test_sigma_is_absolute_value():
    assert sigma(0.0) == 0.0
    assert sigma(3.0) == 3.0
    assert sigma(-2.0) == 2.0
    np.testing.assert_array_equal(sigma(np.array([-1.0, 0.5])), [1.0, 0.5])


def test_small_lambda_matches_degenerate_path():
    # values vary continuously through the degenerate-parameter guard
    G = preset("SL2R")
    ts = np.linspace(0.5, 20.0, 40)
    near = phi(G, 2e-4, ts)   # exponential-series route
    deg = phi(G, 5e-5, ts)    # ODE route
    at0 = phi(G, 0.0, ts)
    assert np.max(np.abs(near - at0)) < 5e-7
    assert np.max(np.abs(deg - at0)) < 5e-8


def test_radial_profile_evenness_and_decay_check():
    G = preset("SL2R")
    f = gaussian_profile(G)
    assert f(-1.3) == f(1.3)
    ts = np.geomspace(0.1, 8.0, 40)
    assert f.check_decay(ts) <= 1.0 + 1e-12


def test_radial_profile_fd_fallback():
    G = preset("SL2R")
    f = gaussian_profile(G)
    bare = RadialProfile(eval=f.eval, decay=f.decay, label="no-derivs")
    for t in (0.4, 1.1):
        assert abs(bare.deriv(t, 1) - f.d1(np.asarray(t))) < 1e-7
        assert abs(bare.deriv(t, 2) - f.d2(np.asarray(t))) < 1e-6
    with pytest.raises(DomainError):
        bare.deriv(1.0, 3)
