"""Elementary spherical functions on the rank-one presets.

Conventions (fixed once, used by every module):

* radial coordinate t >= 0 from the Cartan decomposition, with Haar
  weight Delta(t) = (2 sinh t)^m_alpha (2 sinh 2t)^m_2alpha;
* spherical function in the hypergeometric normalization

      phi_lam(t) = 2F1((rho + i*lam)/2, (rho - i*lam)/2;
                       jacobi_alpha + 1; -sinh^2 t),

  i.e. both convention scalings are 1 (no rescaling of lam or t).  This
  pairs with Delta above: phi_lam is the unique smooth even solution of

      phi'' + (Delta'/Delta) phi' + (lam^2 + rho^2) phi = 0,  phi(0) = 1.

Evaluation strategy.  The defining 2F1 is summed through the Pfaff map
u = tanh^2 t for small t, where it converges quickly.  For larger t the
same function is evaluated through its exponential-series representation

    phi_lam = c(lam) Phi_lam + c(-lam) Phi_{-lam},
    Phi_lam(t) = e^{(i*lam - rho) t} * sum_k  a_k(lam) e^{-2kt},

with recursively computed coefficients and the Gamma-quotient c(lam)
(see :mod:`sphtrans.cfunction`).  The switch point shrinks with |lam| to
keep the Pfaff series free of cancellation.  Near the degenerate
parameters lam = i*k (integer k), where the two-term representation
breaks down, the values are propagated from the small-t region by
integrating the differential equation above.

All evaluators are pure; the per-parameter caches only memoize repeated
work, so concurrent grid scans stay deterministic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from . import specfun
from .errors import CapabilityError, DomainError
from .groups import GroupDatum, haar_log_derivative
from .specfun import DEFAULT_QUAD, ExpDecay, QuadratureSpec, integrate_interval, log_gamma

__all__ = [
    "RadialProfile",
    "phi",
    "phi_d1",
    "phi_d2",
    "phi_integral_oracle",
    "xi",
    "sigma",
]

# degenerate-parameter guard: distance from i*Z below which the
# two-term large-t representation suffers catastrophic cancellation
_DEGENERACY_TOL = 1e-4
# finite-difference step used whenever a profile has no analytic derivative
FD_STEP = 1e-4

_MAX_HC_TERMS = 500


# ---------------------------------------------------------------------------
# radial profiles (K-biinvariant functions as functions of t)
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class RadialProfile:
    """A radial (even) function of t >= 0 with decay metadata.

    ``eval`` must accept float ndarrays.  Evaluation at negative t is
    reflected to |t|, which realizes the evenness of K-biinvariant
    functions.  ``decay`` is an actual envelope bound, spot-checkable
    via :meth:`check_decay`.  ``smoothness`` is the highest derivative
    order the evaluator supports (>= 2 for everything shipped).
    """

    eval: Callable
    decay: ExpDecay
    smoothness: int = 2
    d1: Optional[Callable] = None
    d2: Optional[Callable] = None
    label: str = ""

    def __call__(self, t):
        t_arr = np.abs(np.asarray(t, dtype=float))
        out = self.eval(t_arr)
        if np.isscalar(t) or np.ndim(t) == 0:
            return complex(np.asarray(out).reshape(()))
        return np.asarray(out)

    def deriv(self, t, k: int):
        """k-th derivative at t (k <= 2); central differences as fallback."""
        if k == 0:
            return self(t)
        if k > self.smoothness:
            raise DomainError(f"profile {self.label!r} supports order <= {self.smoothness}")
        if k == 1:
            if self.d1 is not None:
                return self._signed(self.d1, t)
            return (self(np.asarray(t) + FD_STEP) - self(np.asarray(t) - FD_STEP)) / (2 * FD_STEP)
        if k == 2:
            if self.d2 is not None:
                out = self.d2(np.abs(np.asarray(t, dtype=float)))
                return out if np.ndim(t) else complex(np.asarray(out).reshape(()))
            t_arr = np.asarray(t, dtype=float)
            return (self(t_arr + FD_STEP) - 2 * self(t_arr) + self(t_arr - FD_STEP)) / FD_STEP**2
        raise DomainError("only derivative orders 0, 1, 2 are supported")

    def _signed(self, fn, t):
        # odd continuation of the first derivative of an even function
        t_arr = np.asarray(t, dtype=float)
        out = np.sign(t_arr) * np.asarray(fn(np.abs(t_arr)))
        return out if np.ndim(t) else complex(np.asarray(out).reshape(()))

    def check_decay(self, ts) -> float:
        """Max ratio |f(t)| / envelope(t) over the given grid (should be <= 1)."""
        ts = np.asarray(ts, dtype=float)
        vals = np.abs(self(ts))
        env = self.decay.bound(ts)
        return float(np.max(vals / env))


# ---------------------------------------------------------------------------
# small-t branch: Pfaff-transformed hypergeometric series
# ---------------------------------------------------------------------------

def _jacobi_params(G: GroupDatum, lam: complex):
    a = 0.5 * (G.rho + 1j * lam)
    c = G.jacobi_alpha + 1.0
    q = 0.5 * (G.jacobi_alpha - G.jacobi_beta + 1.0 + 1j * lam)
    return a, q, c


def _u_series(G: GroupDatum, lam: complex, t: np.ndarray, want_d1: bool):
    """phi (and optionally phi') by the Pfaff series; valid for small t."""
    a, qpar, c = _jacobi_params(G, lam)
    th = np.tanh(t)
    u = th * th
    # F and F' summed together with one term recurrence
    F = np.ones_like(u, dtype=complex)
    dF = np.zeros_like(u, dtype=complex)
    upow = np.ones_like(u)  # u^(n-1) below
    u_max = float(u.max()) if u.size else 0.0
    tail = 1.0 + (u_max / (1.0 - u_max) if u_max < 1 else math.inf)
    coef = 1.0 + 0.0j
    n = 0
    below = 0
    while True:
        ratio = (a + n) * (qpar + n) / ((c + n) * (n + 1.0))
        coef = coef * ratio
        n += 1
        F += coef * (upow * u)
        if want_d1:
            dF += n * coef * upow
        upow = upow * u
        t_max = abs(coef) * u_max**n
        if t_max * tail < 1e-17 * max(1.0, float(np.abs(F).max())):
            below += 1
            if below >= 2 and n >= 6:
                break
        else:
            below = 0
        if n >= 100_000:
            raise specfun.AccuracyError("spherical series failed to converge")
    pref = np.exp(-(G.rho + 1j * lam) * np.log(np.cosh(t)))
    val = pref * F
    if not want_d1:
        return val, None
    sech2 = 1.0 - th * th
    dval = pref * (-(G.rho + 1j * lam) * th * F + dF * 2.0 * th * sech2)
    return val, dval


# ---------------------------------------------------------------------------
# Gamma-quotient c(lam) shared with the cfunction module
# ---------------------------------------------------------------------------

def c_log(G: GroupDatum, lam: complex) -> complex:
    """log of the rank-one c-function in this normalization.

    c(lam) = 2^(rho - i lam) Gamma(alpha+1) Gamma(i lam)
             / [Gamma((rho + i lam)/2) Gamma((alpha - beta + 1 + i lam)/2)]

    Raises PoleError at the poles of the numerator (lam in i*Z>=0);
    zeros of c (denominator poles) bubble up the same way and are mapped
    to c = 0 by :func:`c_value`.
    """
    lam = complex(lam)
    il = 1j * lam
    num = (G.rho - il) * math.log(2.0) + log_gamma(G.jacobi_alpha + 1.0) + log_gamma(il)
    den = log_gamma(0.5 * (G.rho + il)) + log_gamma(
        0.5 * (G.jacobi_alpha - G.jacobi_beta + 1.0 + il)
    )
    return num - den


def c_value(G: GroupDatum, lam: complex) -> complex:
    """c(lam) with denominator poles folded to the value 0."""
    lam = complex(lam)
    il = 1j * lam
    for arg in (0.5 * (G.rho + il), 0.5 * (G.jacobi_alpha - G.jacobi_beta + 1.0 + il)):
        if arg.imag == 0.0 and arg.real <= 0.0 and arg.real == math.floor(arg.real):
            return 0.0 + 0.0j
    return cmath.exp(c_log(G, lam))


# ---------------------------------------------------------------------------
# large-t branch: exponential series with recursive coefficients
# ---------------------------------------------------------------------------

def _hc_coefficients(G: GroupDatum, lam: complex, t_min: float) -> np.ndarray:
    """Coefficients a_k of Phi_lam(t) = e^{(i lam - rho)t} sum a_k e^{-2kt}.

    Recursion (from the radial differential equation, mu = i*lam - rho):

        4 k (k - i lam) a_k = - sum_{j=1}^{k} b_j a_{k-j} (mu - 2(k-j)),
        b_j = 2 m_alpha + 4 m_2alpha [j even],   a_0 = 1.
    """
    mu = 1j * lam - G.rho
    il = 1j * lam
    coeffs = [1.0 + 0.0j]
    x = math.exp(-2.0 * t_min)
    scale = 1.0
    k = 0
    while True:
        k += 1
        if k > _MAX_HC_TERMS:
            raise specfun.AccuracyError(
                f"exponential series for phi did not settle within {_MAX_HC_TERMS} terms"
            )
        acc = 0.0 + 0.0j
        for j in range(1, k + 1):
            b_j = 2.0 * G.m_alpha + (4.0 * G.m_2alpha if j % 2 == 0 else 0.0)
            if b_j:
                acc += b_j * coeffs[k - j] * (mu - 2.0 * (k - j))
        denom = 4.0 * k * (k - il)
        if abs(denom) < 1e-12:
            raise DomainError(
                f"exponential-series representation degenerate at lam = {lam}"
            )
        coeffs.append(-acc / denom)
        scale = max(scale, abs(coeffs[-1]))
        if k >= 6 and abs(coeffs[-1]) * x**k < 1e-19 * scale and abs(coeffs[-2]) * x ** (k - 1) < 1e-19 * scale:
            break
    return np.asarray(coeffs)


def _hc_one_sided(G: GroupDatum, lam: complex, t: np.ndarray, coeffs: np.ndarray, want_d1: bool):
    mu = 1j * lam - G.rho
    x = np.exp(-2.0 * t)
    poly = np.polynomial.polynomial.polyval(x, coeffs)
    front = np.exp(mu * t)
    val = front * poly
    if not want_d1:
        return val, None
    ks = np.arange(len(coeffs))
    dcoeffs = coeffs * (mu - 2.0 * ks)
    dval = front * np.polynomial.polynomial.polyval(x, dcoeffs)
    return val, dval


def _hc_phi(G: GroupDatum, lam: complex, t: np.ndarray, want_d1: bool):
    t_min = float(t.min())
    cp = c_value(G, lam)
    cm = c_value(G, -lam)
    vp = vm = 0.0
    dp = dm = 0.0
    if cp != 0.0:
        coeff_p = _hc_coefficients(G, lam, t_min)
        vp, dp = _hc_one_sided(G, lam, t, coeff_p, want_d1)
    if cm != 0.0:
        coeff_m = _hc_coefficients(G, -lam, t_min)
        vm, dm = _hc_one_sided(G, -lam, t, coeff_m, want_d1)
    val = cp * vp + cm * vm
    if not want_d1:
        return val, None
    return val, cp * dp + cm * dm


# ---------------------------------------------------------------------------
# degenerate-parameter branch: propagate the radial ODE
# ---------------------------------------------------------------------------

_ODE_T0 = 1.2
_ODE_CACHE: dict[tuple, tuple[float, object]] = {}


def _is_degenerate(lam: complex) -> bool:
    k = round(lam.imag)
    return abs(lam - 1j * k) < _DEGENERACY_TOL


def _g_remainder(G: GroupDatum, t):
    """Delta'/Delta - 2 rho, exponentially small for large t."""
    em = np.expm1(-2.0 * t)
    g = G.m_alpha * (-2.0 * np.exp(-2.0 * t) / em)
    if G.m_2alpha:
        em2 = np.expm1(-4.0 * t)
        g = g + 2.0 * G.m_2alpha * (-2.0 * np.exp(-4.0 * t) / em2)
    return g


def _ode_solution(G: GroupDatum, lam: complex, t_max: float):
    key = (G.name, round(lam.real, 12), round(lam.imag, 12))
    cached = _ODE_CACHE.get(key)
    if cached is not None and cached[0] >= t_max:
        return cached[1]
    horizon = max(t_max + 1.0, 8.0)
    lam2 = lam * lam
    rho = G.rho

    def rhs(s, y):
        wr, wi, vr, vi = y
        g = float(_g_remainder(G, s))
        w = complex(wr, wi)
        v = complex(vr, vi)
        acc = -g * v - (lam2 - rho * g) * w
        return [vr, vi, acc.real, acc.imag]

    v0, d0 = _u_series(G, lam, np.asarray([_ODE_T0]), want_d1=True)
    w0 = cmath.exp(rho * _ODE_T0) * complex(v0[0])
    w0p = cmath.exp(rho * _ODE_T0) * (complex(d0[0]) + rho * complex(v0[0]))
    sol = solve_ivp(
        rhs,
        (_ODE_T0, horizon),
        [w0.real, w0.imag, w0p.real, w0p.imag],
        method="DOP853",
        rtol=1e-12,
        atol=1e-14,
        dense_output=True,
    )
    if not sol.success:
        raise specfun.AccuracyError(f"radial ODE propagation failed: {sol.message}")
    _ODE_CACHE[key] = (horizon, sol)
    return sol


def _ode_eval(G: GroupDatum, lam: complex, t: np.ndarray, want_d1: bool):
    sol = _ode_solution(G, lam, float(t.max()))
    y = sol.sol(t)
    w = y[0] + 1j * y[1]
    wp = y[2] + 1j * y[3]
    damp = np.exp(-G.rho * t)
    val = damp * w
    if not want_d1:
        return val, None
    return val, damp * (wp - G.rho * w)


# ---------------------------------------------------------------------------
# public evaluators
# ---------------------------------------------------------------------------

def _switch_point(lam: complex) -> float:
    mod = abs(lam)
    if mod <= 8.0:
        return 1.2
    return max(0.19, 9.6 / mod)


def _phi_impl(G: GroupDatum, lam: complex, t: np.ndarray, want_d1: bool):
    val = np.zeros(t.shape, dtype=complex)
    der = np.zeros(t.shape, dtype=complex) if want_d1 else None
    if _is_degenerate(lam):
        ts = _ODE_T0
        small = t <= ts
        large = ~small
        if np.any(small):
            v, d = _u_series(G, lam, t[small], want_d1)
            val[small] = v
            if want_d1:
                der[small] = d
        if np.any(large):
            v, d = _ode_eval(G, lam, t[large], want_d1)
            val[large] = v
            if want_d1:
                der[large] = d
        return val, der
    ts = _switch_point(lam)
    small = t <= ts
    large = ~small
    if np.any(small):
        v, d = _u_series(G, lam, t[small], want_d1)
        val[small] = v
        if want_d1:
            der[small] = d
    if np.any(large):
        v, d = _hc_phi(G, lam, t[large], want_d1)
        val[large] = v
        if want_d1:
            der[large] = d
    return val, der


def _as_t_array(t) -> np.ndarray:
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("phi requires t >= 0")
    return t_arr


def phi(G: GroupDatum, lam, t):
    """Spherical function phi_lam(t); scalar or vectorized over t."""
    lam = complex(lam)
    t_arr = _as_t_array(t)
    val, _ = _phi_impl(G, lam, np.atleast_1d(t_arr), want_d1=False)
    if t_arr.ndim == 0:
        return complex(val[0])
    return val


def phi_d1(G: GroupDatum, lam, t):
    """d/dt of phi_lam at t >= 0 (odd in t, so phi_d1(0) = 0)."""
    lam = complex(lam)
    t_arr = _as_t_array(t)
    _, der = _phi_impl(G, lam, np.atleast_1d(t_arr), want_d1=True)
    if t_arr.ndim == 0:
        return complex(der[0])
    return der


def phi_d2(G: GroupDatum, lam, t):
    """Second radial derivative of phi_lam.

    For t above a small threshold this uses the differential equation
    phi'' = -(Delta'/Delta) phi' - (lam^2 + rho^2) phi; below it, the
    exact limit phi''(0) = -(lam^2 + rho^2)/(2 (alpha + 1)).
    """
    lam = complex(lam)
    t_arr = np.atleast_1d(_as_t_array(t))
    val, der = _phi_impl(G, lam, t_arr, want_d1=True)
    ev = lam * lam + G.rho * G.rho
    out = np.empty_like(val)
    near = t_arr <= 1e-3
    if np.any(~near):
        tt = t_arr[~near]
        out[~near] = -haar_log_derivative(G, tt) * der[~near] - ev * val[~near]
    if np.any(near):
        out[near] = -ev / (2.0 * (G.jacobi_alpha + 1.0))
    if np.ndim(t) == 0:
        return complex(out[0])
    return out


def xi(G: GroupDatum, t):
    """Reference spherical function Xi(t) = phi_0(t); real, in (0, 1]."""
    out = phi(G, 0.0, t)
    if np.ndim(t) == 0:
        return float(out.real)
    return out.real


def sigma(t):
    """Radial distance |t|."""
    t_arr = np.asarray(t, dtype=float)
    out = np.abs(t_arr)
    if np.ndim(t) == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# independent integral-representation oracle (m_2alpha = 0 presets)
# ---------------------------------------------------------------------------

def phi_integral_oracle(G: GroupDatum, lam, t, q: QuadratureSpec = DEFAULT_QUAD) -> complex:
    """phi_lam(t) via the classical sphere average

        phi_lam(t) = c_n * int_0^pi (cosh t - sinh t cos(th))^(-(i lam + rho))
                                     sin(th)^(n-2) dth,   n = m_alpha + 1,

    valid for the presets without a double root.  Entirely independent of
    the series machinery in :func:`phi`.
    """
    if G.m_2alpha != 0:
        raise CapabilityError(
            f"integral representation unavailable for preset {G.name} (m_2alpha != 0)"
        )
    lam = complex(lam)
    t = float(t)
    if t < 0:
        raise DomainError("oracle requires t >= 0")
    if t == 0.0:
        return 1.0 + 0.0j
    n = G.m_alpha + 1
    log_cn = log_gamma(0.5 * n) - 0.5 * math.log(math.pi) - log_gamma(0.5 * (n - 1))
    cn = cmath.exp(log_cn).real
    ch, sh = math.cosh(t), math.sinh(t)
    expo = -(1j * lam + G.rho)

    def integrand(theta):
        base = ch - sh * np.cos(theta)
        vals = np.exp(expo * np.log(base))
        if n > 2:
            vals = vals * np.sin(theta) ** (n - 2)
        return vals

    value, _ = integrate_interval(integrand, 0.0, math.pi, q)
    return cn * value
