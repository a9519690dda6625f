"""Closed-form k-space Green function of the density wave equation.

For each wave number ``k`` the spatial Fourier transform of the Green function
solves the damped oscillator

    G'' + a0 k^gamma G' + (c0^2 k^2 + b0 k^(gamma+1/2)) G = delta(t) / (2 pi)^(3/2)

whose solution is ``exp(-mu t) sin(theta t) / theta / (2 pi)^(3/2)`` for t > 0,
with ``mu = a0 k^gamma / 2`` and ``theta^2 = c0^2 k^2 + b0 k^(gamma+1/2) - mu^2``.
When ``theta^2 < 0`` the sine turns into a hyperbolic sine (overdamped modes).

All functions broadcast over ``k`` and ``t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import WaveModel

__all__ = [
    "NORM",
    "DispersionSample",
    "GreenSpectrum",
    "GammaNotEvenInteger",
    "StepTooLarge",
    "mu",
    "theta",
    "theta_sq",
    "stiffness",
    "dispersion_sample",
    "green_spectrum",
    "green_spectrum_dt",
    "green_spectrum_complex",
    "green_spectrum_complex_logabs",
    "helmholtz_residual",
    "sample_spectrum",
]

NORM = (2.0 * math.pi) ** -1.5
_LOG_NORM = -1.5 * math.log(2.0 * math.pi)

# |theta t| below this switches sin(theta t)/theta to its Taylor series
_SERIES_CUTOFF = 1e-4


class GammaNotEvenInteger(ValueError):
    pass


class StepTooLarge(ValueError):
    pass


def _kpow(k, p):
    k = np.asarray(k, dtype=float)
    with np.errstate(divide="ignore"):
        return np.power(k, p)


def mu(k, model: WaveModel):
    """Damping rate ``a0 k^gamma / 2``."""
    return 0.5 * model.a0 * _kpow(k, model.gamma)


def stiffness(k, model: WaveModel):
    """Restoring coefficient ``c0^2 k^2 + b0 k^(gamma+1/2)`` of the oscillator."""
    k = np.asarray(k, dtype=float)
    out = model.c0**2 * k**2
    if model.b0 != 0.0:
        out = out + model.b0 * _kpow(k, model.gamma + 0.5)
    return out


def theta_sq(k, model: WaveModel):
    """Squared oscillation rate; negative on overdamped wave numbers."""
    out = stiffness(k, model)
    if model.a0 != 0.0:
        out = out - 0.25 * model.a0**2 * _kpow(k, 2.0 * model.gamma)
    return out


def theta(k, model: WaveModel):
    """Oscillation rate as the principal square root of `theta_sq` (real or imaginary)."""
    return np.sqrt(np.asarray(theta_sq(k, model), dtype=complex))


@dataclass(frozen=True)
class DispersionSample:
    k: float
    mu: float
    theta_sq: float
    lambda1: complex
    lambda2: complex


def dispersion_sample(k: float, model: WaveModel) -> DispersionSample:
    """Roots of ``lambda^2 - a0 k^gamma lambda + stiffness = 0`` at a single ``k``.

    Real root pairs are computed with the cancellation-free form
    ``lambda_small = stiffness / lambda_big``.
    """
    m = float(mu(k, model))
    w2 = float(theta_sq(k, model))
    if w2 >= 0.0:
        w = math.sqrt(w2)
        lam1, lam2 = complex(m, w), complex(m, -w)
    else:
        q = math.sqrt(-w2)
        big = m + q if m >= 0 else m - q
        small = float(stiffness(k, model)) / big if big != 0.0 else 0.0
        lam1, lam2 = complex(big), complex(small)
    return DispersionSample(k=float(k), mu=m, theta_sq=w2, lambda1=lam1, lambda2=lam2)


def _sinc_factor(w2, t):
    """sin(theta t)/theta and cos(theta t) for real ``theta^2`` of either sign.

    Returns (s, c, grow) with the hyperbolic branch scaled by ``exp(-grow)`` so
    the caller can fold the growth into the damping exponent.
    """
    w2, t = np.broadcast_arrays(np.asarray(w2, dtype=float), np.asarray(t, dtype=float))
    s = np.empty(w2.shape)
    c = np.empty(w2.shape)
    grow = np.zeros(w2.shape)

    x = w2 * t * t
    small = np.abs(x) < _SERIES_CUTOFF**2
    osc = (w2 > 0) & ~small
    hyp = (w2 < 0) & ~small

    xs = x[small]
    s[small] = t[small] * (1.0 - xs / 6.0 + xs * xs / 120.0)
    c[small] = 1.0 - xs / 2.0 + xs * xs / 24.0

    w = np.sqrt(w2[osc])
    s[osc] = np.sin(w * t[osc]) / w
    c[osc] = np.cos(w * t[osc])

    q = np.sqrt(-w2[hyp])
    qt = q * t[hyp]
    tail = np.exp(-2.0 * qt)
    grow[hyp] = qt
    s[hyp] = 0.5 * (1.0 - tail) / q
    c[hyp] = 0.5 * (1.0 + tail)
    return s, c, grow


def green_spectrum(k, t, model: WaveModel):
    """``G_hat(k, t)``; zero for ``t <= 0``."""
    k, t = np.broadcast_arrays(np.asarray(k, dtype=float), np.asarray(t, dtype=float))
    s, _, grow = _sinc_factor(theta_sq(k, model), t)
    m = mu(k, model)
    with np.errstate(invalid="ignore"):
        out = NORM * np.exp(grow - m * t) * s
    out = np.where(t > 0, out, 0.0)
    return out[()] if out.ndim == 0 else out


def green_spectrum_dt(k, t, model: WaveModel):
    """``dG_hat/dt(k, t)`` in closed form; the ``t = 0`` value is the ``0+`` limit."""
    k, t = np.broadcast_arrays(np.asarray(k, dtype=float), np.asarray(t, dtype=float))
    s, c, grow = _sinc_factor(theta_sq(k, model), t)
    m = mu(k, model)
    with np.errstate(invalid="ignore"):
        out = NORM * np.exp(grow - m * t) * (c - m * s)
    out = np.where(t >= 0, out, 0.0)
    return out[()] if out.ndim == 0 else out


def _even_gamma(model: WaveModel) -> int:
    g = model.gamma
    n = int(round(g))
    if abs(g - n) > 1e-12 or n <= 0 or n % 2:
        raise GammaNotEvenInteger(f"complex continuation needs an even integer gamma, got {g}")
    return n


def _continued_symbols(z1, model: WaveModel):
    n = _even_gamma(model)
    z1 = np.asarray(z1, dtype=complex)
    ksq = z1 * z1
    kg = ksq ** (n // 2)
    stiff = model.c0**2 * ksq
    if model.b0 != 0.0:
        stiff = stiff + model.b0 * np.power(ksq, 0.5 * (n + 0.5))
    m = 0.5 * model.a0 * kg
    w2 = stiff - m * m
    return m, w2


def green_spectrum_complex(z1, t: float, model: WaveModel):
    """``G_hat`` continued to the complex wave vector ``(z1, 0, 0)``.

    ``|k|^gamma`` is taken as ``(z1^2)^(gamma/2)``, which is a polynomial for
    even integer gamma. May overflow for large ``|z1|``; see
    `green_spectrum_complex_logabs`.
    """
    m, w2 = _continued_symbols(z1, model)
    th = np.sqrt(w2)
    x = th * t
    small = np.abs(x) < _SERIES_CUTOFF
    safe = np.where(small, 1.0, th)
    with np.errstate(over="ignore", invalid="ignore"):
        s = np.where(small, t * (1.0 - x * x / 6.0), np.sin(x) / safe)
        out = NORM * np.exp(-m * t) * s
    return out[()] if out.ndim == 0 else out


def _log_abs_sin(x):
    """log|sin(x)| for complex x without overflow."""
    a = np.real(x)
    y = np.abs(np.imag(x))
    e = np.exp(-2.0 * y)
    with np.errstate(divide="ignore"):
        return y - math.log(2.0) + 0.5 * np.log((1.0 - e) ** 2 + 4.0 * e * np.sin(a) ** 2)


def green_spectrum_complex_logabs(z1, t: float, model: WaveModel):
    """``log|G_hat(z1, 0, 0, t)|`` evaluated in log space."""
    m, w2 = _continued_symbols(z1, model)
    th = np.sqrt(w2)
    x = th * t
    small = np.abs(x) < _SERIES_CUTOFF
    with np.errstate(divide="ignore", invalid="ignore"):
        log_s = np.where(
            small,
            math.log(t) + np.log(np.abs(1.0 - x * x / 6.0)),
            _log_abs_sin(x) - np.log(np.abs(th)),
        )
    out = _LOG_NORM - np.real(m) * t + log_s
    return out[()] if out.ndim == 0 else out


def helmholtz_residual(k: float, t: float, model: WaveModel, h: float = 1e-4) -> float:
    """Normalized residual of the oscillator equation by centered differences.

    Returns ``|G'' + a0 k^gamma G' + stiffness G| / max(|G|, (2 pi)^(-3/2))``.
    """
    if not (h > 0 and t > 2 * h):
        raise StepTooLarge(f"need t > 2h > 0, got t={t}, h={h}")
    gm, g0, gp = (float(green_spectrum(k, s, model)) for s in (t - h, t, t + h))
    d2 = (gp - 2.0 * g0 + gm) / (h * h)
    d1 = (gp - gm) / (2.0 * h)
    res = d2 + model.a0 * float(_kpow(k, model.gamma)) * d1 + float(stiffness(k, model)) * g0
    return abs(res) / max(abs(g0), NORM)


@dataclass(frozen=True)
class GreenSpectrum:
    """``G_hat`` and its time derivative sampled on a radial k-grid at fixed t."""

    t: float
    k: np.ndarray
    G_hat: np.ndarray
    dG_hat_dt: np.ndarray
    model: WaveModel
    mu: np.ndarray = field(repr=False, default=None)
    theta_sq: np.ndarray = field(repr=False, default=None)


def sample_spectrum(k, t: float, model: WaveModel) -> GreenSpectrum:
    k = np.asarray(k, dtype=float)
    if np.any(k < 0):
        raise ValueError("wave numbers must be >= 0")
    if not t >= 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return GreenSpectrum(
        t=float(t),
        k=k,
        G_hat=np.asarray(green_spectrum(k, t, model)),
        dG_hat_dt=np.asarray(green_spectrum_dt(k, t, model)),
        model=model,
        mu=np.asarray(mu(k, model)),
        theta_sq=np.asarray(theta_sq(k, model)),
    )
