"""Harish-Chandra c-function, Plancherel density, and an asymptotic-fit oracle.

The c-function is the Gamma quotient fixed by the large-t behaviour of
the spherical functions in this package's normalization (see
:mod:`sphtrans.spherical` for the conventions):

    phi_lam(t) * e^{rho t}  ->  c(lam) e^{i lam t} + c(-lam) e^{-i lam t}.

Everything is computed in log space and exponentiated once, so Gamma
ratios never overflow on the spectral windows used here.  The oracle
recovers c(lam) directly from that asymptotic relation by propagating
the radial differential equation out of the small-t region and fitting
the two exponentials, which keeps it independent of the Gamma quotient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, ConditioningError, DomainError, PoleError
from .groups import GroupDatum
from .spherical import _ode_solution, c_log, c_value

__all__ = [
    "PlancherelDensity",
    "CFit",
    "c_function",
    "plancherel_density",
    "asymptotic_c_oracle",
    "aggregate_density",
]


def c_function(G: GroupDatum, lam) -> complex:
    """c(lam) as a Gamma quotient; PoleError at lam in i*Z (pole of Gamma(i lam))."""
    lam = complex(lam)
    il = 1j * lam
    if il.imag == 0.0 and il.real <= 0.0 and il.real == math.floor(il.real):
        raise PoleError(
            f"c-function pole at lam = {lam} (Gamma(i*lam) pole)", pole=int(il.real)
        )
    return c_value(G, lam)


def plancherel_density(G: GroupDatum, lam):
    """|c(lam)|^(-2) for real lam; even, nonnegative, and 0 at lam = 0.

    Accepts scalars or arrays.
    """
    lam_arr = np.asarray(lam, dtype=float)
    flat = np.atleast_1d(lam_arr).ravel()
    out = np.empty(flat.shape, dtype=float)
    for i, x in enumerate(flat):
        if x == 0.0:
            out[i] = 0.0
        else:
            out[i] = math.exp(-2.0 * c_log(G, complex(x)).real)
    out = out.reshape(np.atleast_1d(lam_arr).shape)
    if lam_arr.ndim == 0:
        return float(out[0])
    return out


@dataclass(frozen=True)
class PlancherelDensity:
    """The density lam -> |c(lam)|^(-2) packaged with its parity contract."""

    group: GroupDatum
    parity: str = "even"

    def __call__(self, lam):
        return plancherel_density(self.group, lam)


@dataclass(frozen=True)
class CFit:
    """Result of the asymptotic two-exponential fit.

    c_plus is the oracle value of c(lam); c_minus approximates c(-lam).
    """

    c_plus: complex
    c_minus: complex
    residual: float
    window: tuple[float, float]

    def __complex__(self):
        return self.c_plus


def asymptotic_c_oracle(G: GroupDatum, lam: float, T: float, n_samples: int = 161) -> CFit:
    """Independent determination of c(lam) from the large-t wave field.

    Propagates w(t) = e^{rho t} phi_lam(t) with the radial ODE from the
    small-t region (where the hypergeometric series is unconditionally
    accurate) into [T, T+10], then least-squares fits

        w(t) ~ c_plus e^{i lam t} + c_minus e^{-i lam t}.

    Never touches the Gamma-quotient route, so agreement between the two
    is a genuine cross-validation.
    """
    lam = float(lam)
    if lam == 0.0:
        raise DomainError("asymptotic oracle requires lam != 0")
    if abs(lam) < 0.02:
        raise ConditioningError(
            f"two-exponential fit ill-conditioned for |lam| = {abs(lam)} < 0.02"
        )
    if math.exp(-2.0 * G.rho * T) >= 1e-10:
        raise DomainError(
            f"window start T = {T} too small: need exp(-2 rho T) < 1e-10"
        )
    t_hi = T + 10.0
    sol = _ode_solution(G, complex(lam), t_hi)
    ts = np.linspace(T, t_hi, n_samples)
    y = sol.sol(ts)
    w = y[0] + 1j * y[1]
    design = np.column_stack([np.exp(1j * lam * ts), np.exp(-1j * lam * ts)])
    coeffs, _, _, sv = np.linalg.lstsq(design, w, rcond=None)
    cond = sv[0] / sv[-1] if sv[-1] > 0 else math.inf
    if cond > 1e8:
        raise ConditioningError(f"fit condition number {cond:.2e} too large")
    resid = float(np.linalg.norm(design @ coeffs - w) / max(np.linalg.norm(w), 1e-300))
    if resid >= 1e-6:
        raise AccuracyError(
            f"asymptotic fit residual {resid:.3e} exceeds 1e-6", err_est=resid
        )
    return CFit(
        c_plus=complex(coeffs[0]),
        c_minus=complex(coeffs[1]),
        residual=resid,
        window=(T, t_hi),
    )


def aggregate_density(G: GroupDatum, nu):
    """Spectral-side aggregate density in the spherical reduction.

    The continuous (split-Cartan) class contributes the calibrated
    multiple of the Plancherel density; the compact-Cartan class
    contributes 0 on spherical functions, so the sum collapses.
    """
    split = G.plancherel_constant * plancherel_density(G, nu)
    compact = 0.0
    return split + compact
