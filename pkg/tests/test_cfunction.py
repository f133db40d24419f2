import numpy as np
import pytest

from sphtrans.cfunction import (
    PlancherelDensity,
    aggregate_density,
    asymptotic_c_oracle,
    c_function,
    plancherel_density,
)
from sphtrans.errors import ConditioningError, DomainError, PoleError
from sphtrans.groups import preset

PRESETS = ("SL2R", "H3", "H4", "CH2")
_WINDOW = {"SL2R": 25.0, "SL2C": 12.0, "H3": 12.0, "H4": 10.0, "CH2": 8.0}


def test_c_modulus_symmetry():
    for name in PRESETS:
        G = preset(name)
        for lam in (0.5, 1.7, 4.0):
            assert abs(abs(c_function(G, lam)) - abs(c_function(G, -lam))) <= 1e-12


def test_c_pole_at_origin():
    with pytest.raises(PoleError):
        c_function(preset("SL2R"), 0.0)


def test_mutual_validation_with_asymptotic_oracle():
    # the Gamma quotient and the ODE-propagated fit must agree to 1e-4
    for name in PRESETS:
        G = preset(name)
        T = _WINDOW[name]
        for lam in (0.5, 1.0, 2.0, 4.0):
            fit = asymptotic_c_oracle(G, lam, T)
            ref = c_function(G, lam)
            assert abs(fit.c_plus - ref) / abs(ref) <= 1e-4
            assert fit.residual < 1e-6


def test_oracle_window_independence():
    G = preset("SL2R")
    a = asymptotic_c_oracle(G, 2.0, 25.0).c_plus
    b = asymptotic_c_oracle(G, 2.0, 30.0).c_plus
    assert abs(a - b) / abs(a) <= 1e-5


def test_oracle_minus_branch():
    G = preset("H3")
    fit = asymptotic_c_oracle(G, 1.5, 12.0)
    swapped = asymptotic_c_oracle(G, -1.5, 12.0)
    assert abs(fit.c_minus - swapped.c_plus) / abs(fit.c_minus) <= 1e-5


def test_oracle_preconditions():
    G = preset("SL2R")
    with pytest.raises(DomainError):
        asymptotic_c_oracle(G, 0.0, 25.0)
    with pytest.raises(ConditioningError):
        asymptotic_c_oracle(G, 0.01, 25.0)
    with pytest.raises(DomainError):
        asymptotic_c_oracle(G, 1.0, 5.0)  # exp(-2 rho T) not small enough


def test_c_flatness_at_large_lambda():
    # |c|^2 lam^m_alpha stays bounded on [10, 100]
    for name in PRESETS:
        G = preset(name)
        lams = np.linspace(10.0, 100.0, 46)
        vals = np.array([abs(c_function(G, l)) ** 2 * l**G.m_alpha for l in lams])
        assert vals.max() < 1e3 * max(vals.min(), 1e-300)
        assert np.all(np.isfinite(vals))


def test_density_zero_at_origin_by_limit():
    for name in PRESETS:
        G = preset(name)
        assert plancherel_density(G, 0.0) == 0.0
        samples = [plancherel_density(G, x) for x in (1e-2, 1e-3, 1e-4)]
        assert samples[0] > samples[1] > samples[2] > 0.0


def test_density_evenness_and_nonnegativity():
    for name in PRESETS:
        G = preset(name)
        assert abs(plancherel_density(G, 1.7) - plancherel_density(G, -1.7)) <= 1e-12
        grid = np.linspace(-20.0, 20.0, 1000)
        assert np.all(plancherel_density(G, grid) >= 0.0)


def test_sl2r_density_shape():
    # density(lam) / (lam tanh(pi lam)) is constant (the constant itself is
    # preset-calibrated and never asserted)
    G = preset("SL2R")
    lams = np.array([0.5, 1.0, 2.0, 4.0])
    ratios = plancherel_density(G, lams) / (lams * np.tanh(np.pi * lams))
    assert np.max(np.abs(ratios / ratios[0] - 1.0)) <= 1e-6


def test_density_polynomial_growth_bound():
    for name in PRESETS:
        G = preset(name)
        lams = np.linspace(0.1, 100.0, 500)
        weighted = plancherel_density(G, lams) / (1.0 + lams) ** (G.m_alpha + G.m_2alpha + 1)
        assert np.all(np.isfinite(weighted))
        assert weighted.max() < 1e3


def test_density_continuity_near_origin():
    for name in ("SL2R", "CH2"):
        G = preset(name)
        grid = np.arange(-0.05, 0.0501, 1e-3)
        vals = plancherel_density(G, grid)
        diffs = np.abs(np.diff(vals)) / 1e-3
        assert np.all(np.isfinite(diffs))
        assert diffs.max() < 1e2


def test_plancherel_density_type_contract():
    G = preset("H3")
    dens = PlancherelDensity(G)
    assert dens.parity == "even"
    assert dens(2.0) == plancherel_density(G, 2.0)


def test_aggregate_density_is_scaled_split_term():
    for name in PRESETS:
        G = preset(name)
        for nu in (0.3, 1.0, 3.0):
            expected = G.plancherel_constant * plancherel_density(G, nu)
            assert aggregate_density(G, nu) == pytest.approx(expected, rel=1e-14)
    # evenness and nonnegativity inherited
    G = preset("SL2R")
    grid = np.linspace(-10, 10, 1001)
    vals = aggregate_density(G, grid)
    assert np.all(vals >= 0)
    assert abs(aggregate_density(G, 1.7) - aggregate_density(G, -1.7)) <= 1e-12
