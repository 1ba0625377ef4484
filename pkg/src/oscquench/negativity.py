"""Partial-transpose spectrum, negativity, separability boundary and T_c.

At constant frequencies the partial transpose of the two-mode thermal state
factorises and its geometric ratios zeta1, zeta2 are elementary; a negative
ratio signals entanglement.  For the sudden quench the spectrum does not
factorise, but tr sigma^2 and tr sigma^3 are rational in the exponent
coefficients and determine (zeta1, zeta2) of the geometric-ladder ansatz; that route reproduces the constant-frequency ratios exactly and is
validated against quadrature spectra in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import QuenchSpec, mode_thermo, normal_modes
from .errors import DomainError, NumericalFailureError
from .kernels import QuadraticKernel, partial_transpose, thermal_rho_coupled

# u^2 - 4v rounds slightly negative for degenerate ratios (identical modes);
# the moment inversion amplifies machine noise to ~1e-10 there, so the clamp
# is relative to the moment scale.  Anything more negative is a real failure.
DISCRIMINANT_CLAMP = 1e-9


@dataclass(frozen=True)
class ConstFreqPT:
    """Constant-frequency partial-transpose data at one inverse temperature."""

    beta: float
    mu_plus: float
    mu_minus: float
    nu_plus: float
    nu_minus: float
    eps1: float
    eps2: float
    zeta1: float
    zeta2: float

    def eigenvalue(self, m: int, n: int) -> float:
        return (1 - self.zeta1) * (1 - self.zeta2) * self.zeta1**m * self.zeta2**n


@dataclass(frozen=True)
class PTMoments:
    """Trace moments of a partial transpose and the ratios they determine."""

    beta1: float
    beta2: float
    x1: float
    x2: float
    u: float
    v: float
    zeta1: float
    zeta2: float


def pt_spectrum_const(omega1: float, omega2: float, beta: float) -> ConstFreqPT:
    """Exact partial-transpose data for constant frequencies."""
    if omega1 <= 0 or omega2 <= 0 or beta <= 0:
        raise DomainError("omega1, omega2 and beta must be positive")
    t1, c1 = math.tanh(omega1 * beta / 2), 1 / math.tanh(omega1 * beta / 2)
    t2, c2 = math.tanh(omega2 * beta / 2), 1 / math.tanh(omega2 * beta / 2)
    mu_p = (omega1 * c1 + omega2 * t2) / 4
    mu_m = (omega1 * t1 + omega2 * c2) / 4
    nu_p = (omega1 * c1 - omega2 * t2) / 4
    nu_m = -(omega1 * t1 - omega2 * c2) / 4
    eps1 = 2 * math.sqrt(mu_m**2 - nu_m**2)
    eps2 = 2 * math.sqrt(mu_p**2 - nu_p**2)
    s1t, s2c = math.sqrt(omega1 * t1), math.sqrt(omega2 * c2)
    s1c, s2t = math.sqrt(omega1 * c1), math.sqrt(omega2 * t2)
    zeta1 = -(s1t - s2c) / (s1t + s2c)
    zeta2 = (s1c - s2t) / (s1c + s2t)
    return ConstFreqPT(beta=beta, mu_plus=mu_p, mu_minus=mu_m, nu_plus=nu_p,
                       nu_minus=nu_m, eps1=eps1, eps2=eps2, zeta1=zeta1, zeta2=zeta2)


def negativity(zeta1: float, zeta2: float) -> float:
    """Sum of |eigenvalues| minus one of the geometric PT ladder.

    Zero exactly when both ratios are non-negative (separable); returns
    ``inf`` when a negative ratio reaches -1 (zero-temperature divergence).
    """
    n = 1.0
    for z in (zeta1, zeta2):
        if abs(z) > 1 + 1e-12:
            raise DomainError(f"|zeta| must not exceed 1, got {z}")
        if z < 0:
            az = min(abs(z), 1.0)
            if 1 - az < 1e-300:
                return math.inf
            n *= (1 + az) / (1 - az)
    return n - 1.0


def pt_moments(sigma: QuadraticKernel) -> PTMoments:
    """Ratios (zeta1, zeta2) of a partial transpose from its trace moments.

    beta1 = tr sigma^2 and beta2 = tr sigma^3 are rational in the exponent
    coefficients of the un-transposed kernel; inverting the two geometric
    moment equations gives u = zeta1 + zeta2 and v = zeta1 zeta2 (positive
    inner square-root branch, which the constant-frequency limit fixes).
    """
    al = partial_transpose(sigma).alphas()
    x1 = (al.a1 + al.a2 - 2 * al.a5) ** 2 - (al.a3 + al.a4 + 2 * al.a6) ** 2
    x2 = (al.a1 + al.a2 + 2 * al.a5) ** 2 - (al.a3 + al.a4 - 2 * al.a6) ** 2
    if x1 <= 0 or x2 <= 0:
        raise DomainError(f"moment combinations must be positive, got X1={x1}, X2={x2}")
    beta1 = math.sqrt(x1 / x2)
    beta2 = 4 * x1 / (x1 + 3 * x2 - 12 * (al.a5**2 - al.a3 * al.a4))
    if abs(beta1 - 1) < 1e-10 and abs(beta2 - 1) < 1e-10:
        # pure product state (zero-temperature limit): spectrum is {1}; both
        # moments at 1 force both ratios to zero (a pure entangled state
        # would keep tr sigma^3 visibly below 1)
        return PTMoments(beta1=beta1, beta2=beta2, x1=x1, x2=x2,
                         u=0.0, v=0.0, zeta1=0.0, zeta2=0.0)
    den = 2 * (4 * beta1**2 - beta1**2 * beta2 - 3 * beta2)
    if den == 0:
        raise NumericalFailureError("degenerate moment system (denominator vanished)")
    root_arg = 3 * beta2 * (16 * beta1**2 - beta2 * (3 - beta1) ** 2)
    if root_arg < 0:
        raise NumericalFailureError(f"negative square-root argument {root_arg} in moment inversion")
    s = -3 * beta2 * (1 + beta1) + math.sqrt(root_arg)
    u = (1 - beta1) / den * s
    v = -1 + (1 + beta1) / den * s
    disc = u * u - 4 * v
    if disc < 0:
        if disc < -DISCRIMINANT_CLAMP * max(1.0, u * u, 4 * abs(v)):
            raise NumericalFailureError(f"moment discriminant {disc} below clamp tolerance")
        disc = 0.0
    root = math.sqrt(disc)
    return PTMoments(beta1=beta1, beta2=beta2, x1=x1, x2=x2, u=u, v=v,
                     zeta1=(u + root) / 2, zeta2=(u - root) / 2)


def sigma_for_quench(spec: QuenchSpec, beta: float) -> QuadraticKernel:
    """Partial transpose of the thermal state of a quench at inverse temperature beta."""
    m1, m2 = normal_modes(spec)
    rho = thermal_rho_coupled(mode_thermo(m1, beta), mode_thermo(m2, beta))
    return partial_transpose(rho)


def negativity_for_quench(spec: QuenchSpec, beta: float) -> float:
    mom = pt_moments(sigma_for_quench(spec, beta))
    return negativity(mom.zeta1, mom.zeta2)


def check_separable(omega1: float, omega2: float, beta: float) -> bool:
    """Separability of the constant-frequency thermal state.

    Equivalent to zeta1 >= 0 and zeta2 >= 0: with x = omega1 beta / 2 and
    y = omega2 beta / 2, both x tanh x <= y coth y and x coth x >= y tanh y.
    """
    x, y = omega1 * beta / 2, omega2 * beta / 2
    first = x * math.tanh(x) - y / math.tanh(y) <= 0
    second = x / math.tanh(x) - y * math.tanh(y) >= 0
    return first and second


def _upper_boundary_y(x: float, tol: float) -> float:
    """Solve Y tanh Y = x coth x (upper separability boundary) by bisection."""
    target = x / math.tanh(x)
    f = lambda y: y * math.tanh(y) - target
    lo, hi = 0.0, max(2.0 * x, 2.0)
    while f(hi) < 0:
        hi *= 2.0
        if hi > 1e9:
            raise NumericalFailureError(f"failed to bracket boundary above x = {x}")
    for _ in range(200):
        mid = (lo + hi) / 2
        if f(mid) <= 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol * max(1.0, hi):
            break
    return (lo + hi) / 2


def boundary_g(z: float, tol: float = 1e-10) -> float:
    """Boundary slope function g with y_c = x_c g(x_c) on the upper branch."""
    if z <= 0:
        raise DomainError(f"boundary argument must be positive, got {z}")
    return _upper_boundary_y(z, tol) / z


def g_inverse(ratio: float, tol: float = 1e-10) -> float:
    """Solve g(x) = ratio for x > 0 (ratio > 1); g decreases from inf to 1."""
    if ratio <= 1:
        raise DomainError(f"g takes values > 1 only, got ratio = {ratio}")
    f = lambda x: x / math.tanh(x) - ratio * x * math.tanh(ratio * x)
    lo, hi = 1e-12, 1.0
    while f(hi) > 0:
        hi *= 2.0
        if hi > 1e9:
            raise NumericalFailureError(f"failed to bracket g_inverse({ratio}) in (0, 1e9)")
    for _ in range(200):
        mid = (lo + hi) / 2
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol * max(1.0, hi):
            break
    return (lo + hi) / 2


@dataclass(frozen=True)
class CriticalTemp:
    """Exact and approximate entanglement-vanishing temperatures."""

    tc_exact: float
    tc_approx: float
    boundary_samples: np.ndarray | None = None


def critical_temperature(omega1: float, omega2: float, method: str = "both",
                         tol: float = 1e-10, n_samples: int = 0) -> CriticalTemp:
    """Critical temperature of the constant-frequency thermal state.

    Exact: T_c = omega_min / (2 g^{-1}(omega_max / omega_min)).  Approximate
    (g ~ coth): T_c = omega_min / ln((omega_max + omega_min) / (omega_max -
    omega_min)).  Equal frequencies are never entangled, so T_c = 0.
    """
    if method not in ("both", "exact", "approx"):
        raise DomainError(f"unknown method {method!r}")
    if omega1 <= 0 or omega2 <= 0:
        raise DomainError("frequencies must be positive")
    if omega1 == omega2:
        return CriticalTemp(tc_exact=0.0, tc_approx=0.0)
    w_min, w_max = min(omega1, omega2), max(omega1, omega2)
    tc_approx = w_min / math.log((w_max + w_min) / (w_max - w_min))
    tc_exact = math.nan
    if method != "approx":
        tc_exact = w_min / (2 * g_inverse(w_max / w_min, tol))
    samples = None
    if n_samples > 0:
        xs = np.geomspace(0.05, 10.0, n_samples)
        samples = np.column_stack([xs, [boundary_g(x, tol) for x in xs]])
    return CriticalTemp(tc_exact=tc_exact, tc_approx=tc_approx, boundary_samples=samples)


def critical_temperature_sqm(spec: QuenchSpec, tol_t: float = 1e-6,
                             t_floor: float = 1e-4, t_ceil: float = 1e4) -> float:
    """Temperature where the quench's negativity vanishes (trace-moment route).

    Located by bisection on the sign of min(zeta1, zeta2); returns 0.0 if the
    state is separable all the way down to ``t_floor``.
    """
    def min_zeta(t: float) -> float:
        mom = pt_moments(sigma_for_quench(spec, 1.0 / t))
        return min(mom.zeta1, mom.zeta2)

    t_hi = 1.0
    while min_zeta(t_hi) < 0:
        t_hi *= 4.0
        if t_hi > t_ceil:
            raise NumericalFailureError(f"state still entangled at T = {t_hi}")
    t_lo = t_hi / 4.0
    while t_lo >= t_floor and min_zeta(t_lo) >= 0:
        t_lo /= 4.0
    if t_lo < t_floor:
        return 0.0
    while t_hi - t_lo > tol_t:
        mid = (t_lo + t_hi) / 2
        if min_zeta(mid) < 0:
            t_lo = mid
        else:
            t_hi = mid
    return (t_lo + t_hi) / 2
