"""Drive programs for the n-photon pumping schemes.

A :class:`DriveProgram` is a base amplitude profile (smooth sin^2 ramp /
hold / sin^2 ramp, peak ``omega_max``, nominal duration ``total_time``)
together with two tuning knobs taken from the pulse-optimisation procedure:

* ``lam`` -- time compression; the program evaluated at ``t`` equals the
  unit program at ``lam * t``, so ``lam > 1`` finishes the pulse early and
  leaves a tail of the window for the residual emission,
* ``theta`` -- weight of the counter-adiabatic term when a model is built.

The instantaneous steady amplitude of the pumped mode and the closed-form
counter-adiabatic coefficients are functions of the physical rates
(:class:`PhysicalParams`): in terms of z = Omega gamma / (2 g^2),

* ``alpha(t) = exp(i 3 pi / (2n)) z^{1/n}``,
* n = 2:  ``Omega_ca = (1/4) (dOmega/Omega) tanh(z)``,
* n = 4:  ``Omega_ca = (1/4) (dOmega/Omega) (1/(2x)) (sinh x - sin x)/(cosh x + cos x)``
  with ``x = z^{1/2} = |alpha|^2``,
* pair (joint two-mode order 4):
  ``Omega_ca = (1/4) (dOmega/Omega) (I0(y) - J0(y))/(I0(y) + J0(y))`` at
  ``y = 2 |alpha|^2``.

All three coefficients are evaluated in a form with the Omega -> 0 limit
taken analytically, so the composite drive is finite over the whole window.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.special import iv, jv

__all__ = [
    "PhysicalParams",
    "DriveProgram",
    "base_drive",
    "base_drive_slope",
    "drive_amplitude",
    "steady_amplitude",
    "ca_coefficient",
    "ca_coefficient_pair",
]


@dataclass(frozen=True)
class PhysicalParams:
    """Rates of the source: photon order n, coupling g, buffer decay gamma,
    linear decay Gamma. All rates in the same inverse-time unit."""

    n: int
    g: float
    gamma: float
    Gamma: float

    def __post_init__(self):
        if self.n not in (2, 4):
            raise ValueError("photon order n must be 2 or 4")
        for name in ("g", "gamma", "Gamma"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def kappa_n(self) -> float:
        """Engineered n-photon rate 4 g^2 / gamma."""
        return 4.0 * self.g**2 / self.gamma


@dataclass(frozen=True)
class DriveProgram:
    omega_max: float
    total_time: float
    ramp_fraction: float = 0.5
    lam: float = 1.0
    theta: float = 1.0

    def __post_init__(self):
        if self.omega_max < 0 or self.total_time <= 0:
            raise ValueError("omega_max >= 0 and total_time > 0 required")
        if not 0 < self.ramp_fraction <= 0.5:
            raise ValueError("ramp_fraction must lie in (0, 0.5]")
        if self.lam <= 0 or self.theta < 0:
            raise ValueError("lam > 0 and theta >= 0 required")

    def with_knobs(self, lam=None, theta=None) -> "DriveProgram":
        return replace(self, lam=self.lam if lam is None else lam,
                       theta=self.theta if theta is None else theta)


def base_drive(t, program: DriveProgram):
    """Base profile at uncompressed time t in [0, total_time]."""
    t_arr = np.asarray(t, dtype=float)
    T, r, peak = program.total_time, program.ramp_fraction, program.omega_max
    if np.any(t_arr < -1e-12) or np.any(t_arr > T * (1 + 1e-12)):
        raise ValueError(f"base_drive time outside [0, {T}]")
    up = np.sin(0.5 * np.pi * np.clip(t_arr / (r * T), 0.0, 1.0)) ** 2
    dn = np.sin(0.5 * np.pi * np.clip((T - t_arr) / (r * T), 0.0, 1.0)) ** 2
    out = peak * np.minimum(up, dn)
    return out if out.ndim else float(out)


def base_drive_slope(t, program: DriveProgram):
    """Analytic derivative of the base profile."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    T, r, peak = program.total_time, program.ramp_fraction, program.omega_max
    out = np.zeros_like(t_arr)
    w = np.pi / (2 * r * T)
    rising = (t_arr > 0) & (t_arr < r * T) & (t_arr <= T - t_arr)
    falling = (t_arr > (1 - r) * T) & (t_arr < T) & (T - t_arr < t_arr)
    out[rising] = peak * w * np.sin(2 * w * t_arr[rising])
    out[falling] = -peak * w * np.sin(2 * w * (T - t_arr[falling]))
    return out if np.ndim(t) else float(out[0])


def _compressed(t, program: DriveProgram):
    """Map window time to base-profile time; zero outside the pulse support."""
    s = program.lam * np.asarray(t, dtype=float)
    inside = (s >= 0.0) & (s <= program.total_time)
    return s, inside


def drive_amplitude(t, program: DriveProgram):
    """Compressed drive Omega_d(t) = base(lam * t), zero after the pulse ends."""
    s, inside = _compressed(t, program)
    out = np.where(inside, base_drive(np.clip(s, 0, program.total_time), program), 0.0)
    return out if np.ndim(t) else float(out)


def drive_slope(t, program: DriveProgram):
    s, inside = _compressed(t, program)
    out = np.where(inside, base_drive_slope(np.clip(s, 0, program.total_time), program), 0.0)
    return out if np.ndim(t) else float(out)


def steady_amplitude(omega, params: PhysicalParams):
    """Instantaneous eigenvalue root alpha with the n-th principal phase."""
    if np.any(np.asarray(omega) < 0):
        raise ValueError("omega must be >= 0")
    z = np.asarray(omega, dtype=float) * params.gamma / (2.0 * params.g**2)
    out = np.exp(1.5j * np.pi / params.n) * z ** (1.0 / params.n)
    return out if np.ndim(omega) else complex(out)


def _tanh_over_z(z):
    z = np.asarray(z, dtype=float)
    small = z < 1e-6
    safe = np.where(small, 1.0, z)
    return np.where(small, 1.0 - z * z / 3.0, np.tanh(safe) / safe)


def _ratio4_over_2x3(x):
    """(sinh x - sin x)/((cosh x + cos x) 2 x^3), finite limit 1/12 at x=0."""
    x = np.asarray(x, dtype=float)
    small = x < 1e-2
    safe = np.where(small, 1.0, x)
    full = (np.sinh(safe) - np.sin(safe)) / ((np.cosh(safe) + np.cos(safe)) * 2 * safe**3)
    return np.where(small, 1.0 / 12.0, full)


def _bessel_ratio_over_x2(x):
    """(I0 - J0)/((I0 + J0) x^2) at y = 2x, finite limit 1 at x=0."""
    x = np.asarray(x, dtype=float)
    small = x < 1e-2
    safe = np.where(small, 1.0, x)
    y = 2.0 * safe
    i0 = iv(0, y)
    j0 = jv(0, y)
    return np.where(small, 1.0, (i0 - j0) / ((i0 + j0) * safe**2))


def ca_coefficient(t, program: DriveProgram, params: PhysicalParams):
    """Counter-adiabatic coefficient of (a^n + a^dag n) at window time t.

    Equal to (1/4)(dOmega/Omega) C_n(t) with C_2 = tanh(z) and the
    sinh/sin/cosh/cos ratio for n = 4; evaluated through the analytic
    Omega -> 0 limit. The caller scales by the program's theta.
    """
    s, inside = _compressed(t, program)
    s = np.clip(s, 0, program.total_time)
    om = base_drive(s, program)
    dom = base_drive_slope(s, program)
    pref = params.gamma / (2.0 * params.g**2)
    z = np.asarray(om) * pref
    if params.n == 2:
        val = 0.25 * np.asarray(dom) * pref * _tanh_over_z(z)
    else:
        x = np.sqrt(z)
        val = 0.25 * np.asarray(dom) * pref * _ratio4_over_2x3(x)
    out = np.where(inside, val, 0.0)
    return out if np.ndim(t) else float(out)


def ca_coefficient_pair(t, program: DriveProgram, params: PhysicalParams):
    """Counter-adiabatic coefficient of (a1^2 a2^2 + h.c.) for the pair scheme:
    (1/4)(dOmega/Omega) N_-^2/N_+^2 evaluated at y = 2 |alpha(t)|^2."""
    s, inside = _compressed(t, program)
    s = np.clip(s, 0, program.total_time)
    om = base_drive(s, program)
    dom = base_drive_slope(s, program)
    pref = params.gamma / (2.0 * params.g**2)
    x = np.sqrt(np.asarray(om) * pref)  # |alpha|^2
    val = 0.25 * np.asarray(dom) * pref * _bessel_ratio_over_x2(x)
    out = np.where(inside, val, 0.0)
    return out if np.ndim(t) else float(out)


def composite_drive(t, program: DriveProgram, params: PhysicalParams, pair: bool = False):
    """Omega_d + theta * Omega_ca, the total coefficient of the pump term."""
    ca = ca_coefficient_pair if pair else ca_coefficient
    return drive_amplitude(t, program) + program.theta * ca(t, program, params)
