"""Numerical probes for unbounded support and non-smooth spectra.

* `front_speed_sweep` measures how much of ``|G| r^2`` lies beyond ``c_F t``
  for a list of candidate front speeds, next to the same statistic for the
  lossless model run through identical numerics.
* `nonsmoothness_probe` estimates the growth of n-th order centered
  differences at ``k = 0``.
* `pw_growth_probe` follows ``G_hat`` along the complex ray ``i^(2/gamma) k1``
  and fits the super-exponential growth of its magnitude.
"""

from __future__ import annotations

import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import curve_fit
from scipy.special import comb

from . import dispersion
from .dispersion import GammaNotEvenInteger
from .fracop import RadialField, multiplier
from .model import Family, WaveModel, validate_model
from .synth import GridConfig, green_spatial, pressure_spatial

__all__ = [
    "ZeroMass",
    "OrderTooLow",
    "FrontSpeedEntry",
    "FrontSpeedReport",
    "NonsmoothReport",
    "PWProbeReport",
    "tail_fraction",
    "front_speed_sweep",
    "centered_difference",
    "nonsmoothness_probe",
    "green_target",
    "pw_growth_probe",
    "model_id",
    "SCHEMA_FRONT_SPEED",
    "SCHEMA_NONSMOOTH",
    "SCHEMA_PW_PROBE",
]

SCHEMA_FRONT_SPEED = "fracwave.front_speed/1"
SCHEMA_NONSMOOTH = "fracwave.nonsmooth/1"
SCHEMA_PW_PROBE = "fracwave.pw_probe/1"

_LOG_CAP = 700.0


class ZeroMass(ValueError):
    pass


class OrderTooLow(ValueError):
    pass


def model_id(model: WaveModel) -> str:
    if model.family is Family.LOSSLESS:
        return f"Lossless(c0={model.c0:g})"
    return f"{model.family.value}(gamma={model.gamma:g},a0={model.a0:g},b0={model.b0:.6g},c0={model.c0:g})"


def tail_fraction(fld: RadialField, r0: float) -> tuple[float, float]:
    """Fraction of ``int |g| r^2 dr`` lying at ``r >= r0``, with its error bar.

    Both integrals use the trapezoid rule on the sample grid. The error bar is
    the same tail integral of the per-sample truncation error, normalised by
    the total mass (zero when the field carries no error estimate).
    """
    r = fld.r
    if not (r[0] <= r0 <= r[-1]):
        raise ValueError(f"r0={r0} outside the field's grid [{r[0]}, {r[-1]}]")
    w = r * r
    dens = np.abs(fld.values) * w
    total = float(np.trapezoid(dens, r))
    if not total > 1e-300:
        raise ZeroMass("field has no mass")
    # snap to the grid so r0 = c_F t lands on its node despite rounding
    i0 = int(np.searchsorted(r, r0 - 1e-9 * max(fld.dr, 1e-300)))
    sel = slice(i0, None)
    if r.size - i0 < 2:
        return 0.0, 0.0
    tail = float(np.trapezoid(dens[sel], r[sel]))
    err = 0.0
    if fld.error is not None:
        err = float(np.trapezoid((fld.error * w)[sel], r[sel])) / total
    return min(tail / total, 1.0), err


@dataclass(frozen=True)
class FrontSpeedEntry:
    c_F: float
    tau: float
    trunc_err: float
    control_tau: float
    control_trunc_err: float

    @property
    def ratio(self) -> float:
        if self.control_tau == 0.0:
            return math.inf if self.tau > 0 else math.nan
        return self.tau / self.control_tau


@dataclass
class FrontSpeedReport:
    model: str
    t: float
    quantity: str
    taper: bool
    entries: list[FrontSpeedEntry]
    grid: dict = field(default_factory=dict)
    model_params: dict = field(default_factory=dict)

    @property
    def control_tau(self) -> list[float]:
        return [e.control_tau for e in self.entries]

    def min_ratio(self) -> float:
        return min(e.ratio for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_FRONT_SPEED,
            "model": self.model,
            "model_params": self.model_params,
            "quantity": self.quantity,
            "t": self.t,
            "taper": self.taper,
            "grid": self.grid,
            "entries": [dict(asdict(e), ratio=_finite_or_none(e.ratio)) for e in self.entries],
        }


def _finite_or_none(x: float):
    return x if math.isfinite(x) else None


def front_speed_sweep(
    model: WaveModel,
    t: float,
    cF_list: Sequence[float],
    grid_cfg: GridConfig = GridConfig(),
    quantity: str = "green",
    fields: tuple[RadialField, RadialField] | None = None,
) -> FrontSpeedReport:
    """Tail fractions beyond ``r = c_F t`` for the model and the lossless control.

    The field is synthesized once, on a grid reaching at least ``2 max(c_F) t``
    so that the largest candidate still has a tail to measure. ``quantity``
    selects the Green function or the pressure wave.
    """
    cF = [float(c) for c in cF_list]
    if not cF or any(c <= 0 for c in cF) or any(b < a for a, b in zip(cF, cF[1:])):
        raise ValueError("cF_list must be positive and sorted")
    if quantity not in ("green", "pressure"):
        raise ValueError(f"quantity must be 'green' or 'pressure', got {quantity!r}")
    if fields is None:
        r_max = max(grid_cfg.r_max_factor * model.c0 * t, 2.0 * max(cF) * t)
        synth = green_spatial if quantity == "green" else pressure_spatial
        control_model = validate_model(model.c0, 0.0, 0.0, model.gamma, Family.LOSSLESS)
        fld = synth(model, t, grid_cfg, r_max=r_max)
        ctl = synth(control_model, t, grid_cfg, r_max=r_max)
    else:
        fld, ctl = fields
    if not np.array_equal(fld.r, ctl.r):
        raise ValueError("model and control must share the same grid")
    entries = []
    for c in cF:
        tau, err = tail_fraction(fld, c * t)
        ctau, cerr = tail_fraction(ctl, c * t)
        entries.append(FrontSpeedEntry(c, tau, err, ctau, cerr))
    grid = {k: fld.meta[k] for k in ("dr", "r_max", "k_max", "rule", "taper", "taper_fraction") if k in fld.meta}
    return FrontSpeedReport(
        model=model_id(model),
        t=float(t),
        quantity=quantity,
        taper=fld.meta.get("taper") != "none",
        entries=entries,
        grid=grid,
        model_params=model.to_dict(),
    )


def centered_difference(f: Callable, order: int, h: float, x0: float = 0.0) -> tuple[float, float]:
    """n-th order centered difference of ``f`` at ``x0`` with binomial weights.

    Returns the estimate and its rounding-error bound.
    """
    j = np.arange(order + 1)
    coef = (-1.0) ** j * comb(order, j)
    vals = np.asarray(f(x0 + (0.5 * order - j) * h), dtype=float)
    est = float(np.dot(coef, vals)) / h**order
    noise = 8.0 * sys.float_info.epsilon * float(np.dot(np.abs(coef), np.abs(vals))) / h**order
    return est, noise


@dataclass
class NonsmoothReport:
    target: str
    order: int
    h: list[float]
    estimates: list[float]
    slope: float
    converged: bool
    d: float | None = None
    expected_slope: float | None = None

    def to_dict(self) -> dict:
        return dict(asdict(self), schema=SCHEMA_NONSMOOTH)


def green_target(model: WaveModel, t: float) -> Callable:
    """``k1 -> G_hat(|k1|, t)`` along one axis through the origin."""
    return lambda k: dispersion.green_spectrum(np.abs(k), t, model)


def nonsmoothness_probe(
    gamma: float | None,
    order_n: int,
    h_list: Sequence[float] = (1e-1, 1e-2, 1e-3, 1e-4),
    target: Callable | None = None,
    label: str | None = None,
) -> NonsmoothReport:
    """Log-log slope of ``|D_n(h)|`` against ``h`` at ``k = 0``.

    With no ``target`` the probe acts on the symbol ``|k1|^d``, ``d = 2 gamma``,
    where the slope is exactly ``d - n`` unless ``d`` is an even integer
    (then the differences vanish and the probe reports convergence).
    Estimates below their rounding-error bound are treated as zero.
    """
    h = [float(x) for x in h_list]
    if len(h) < 2 or any(x <= 0 for x in h):
        raise ValueError("need at least two positive step sizes")
    d = None
    if target is None:
        if gamma is None or not gamma > 0:
            raise ValueError("gamma must be > 0 for the symbol probe")
        d = 2.0 * gamma
        if order_n <= d:
            raise OrderTooLow(f"order {order_n} must exceed d = {d}")
        target = lambda k: multiplier(k, gamma)
        label = label or f"|k|^{d:g}"
    estimates = []
    for step in h:
        est, noise = centered_difference(target, order_n, step)
        estimates.append(0.0 if abs(est) <= noise else est)
    nz = [(x, abs(e)) for x, e in zip(h, estimates) if e != 0.0]
    if len(nz) >= 2:
        lx = np.log([x for x, _ in nz])
        ly = np.log([e for _, e in nz])
        slope = float(np.polyfit(lx, ly, 1)[0])
    else:
        slope = 0.0
    converged = slope >= 0.0
    expected = None
    if d is not None:
        even = abs(d - round(d)) < 1e-12 and round(d) % 2 == 0
        expected = 0.0 if even else d - order_n
    return NonsmoothReport(
        target=label or "custom",
        order=order_n,
        h=h,
        estimates=estimates,
        slope=slope,
        converged=converged,
        d=d,
        expected_slope=expected,
    )


@dataclass
class PWProbeReport:
    """Growth of ``log|G_hat|`` along the complex ray, fitted as ``C k1^p + A + B log k1``."""

    gamma: float
    t: float
    k1: list[float]
    log_abs: list[float]
    exponent: float
    coefficient: float
    offset: float
    log_coefficient: float
    r_squared: float
    model: str = ""

    def to_dict(self) -> dict:
        return dict(asdict(self), schema=SCHEMA_PW_PROBE)


def growth_model(k, C, p, A, B):
    return C * k**p + A + B * np.log(k)


def default_ray(model: WaveModel, t: float, n: int = 64) -> np.ndarray:
    """Top decade of k1 below the point where ``log|G_hat|`` reaches ~690."""
    if not model.a0 > 0:
        raise ValueError("the ray probe needs a0 > 0")
    k_hi = (690.0 / (model.a0 * t)) ** (1.0 / model.gamma)
    # the leading term a0 t k1^gamma overshoots the true log-magnitude; back off
    while float(dispersion.green_spectrum_complex_logabs(_ray(k_hi, model.gamma), t, model)) >= _LOG_CAP:
        k_hi *= 0.98
    return np.geomspace(k_hi / 10.0, k_hi, n)


def _ray(k1, gamma: float):
    return (1j) ** (2.0 / gamma) * np.asarray(k1, dtype=float)


def pw_growth_probe(model: WaveModel, t: float, k1_list: Sequence[float] | None = None) -> PWProbeReport:
    """Evaluate ``log|G_hat(i^(2/gamma) k1, 0, 0, t)|`` and fit its growth law."""
    n = int(round(model.gamma))
    if abs(model.gamma - n) > 1e-12 or n <= 0 or n % 2:
        raise GammaNotEvenInteger(f"ray probe needs an even integer gamma, got {model.gamma}")
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    k1 = default_ray(model, t) if k1_list is None else np.asarray(k1_list, dtype=float)
    if np.any(k1 <= 0):
        raise ValueError("k1 must be positive")
    y = np.asarray(dispersion.green_spectrum_complex_logabs(_ray(k1, model.gamma), t, model), dtype=float)
    if not np.all(np.isfinite(y)) or np.max(y) >= _LOG_CAP:
        raise ValueError("log-magnitude reaches the overflow cap; shorten k1_list")
    lead = np.polyfit(np.log(k1), np.log(np.maximum(np.abs(y), 1e-300)), 1)
    p0 = (math.exp(lead[1]), lead[0], 0.0, 0.0)
    popt, _ = curve_fit(growth_model, k1, y, p0=p0, maxfev=20000)
    C, p, A, B = (float(v) for v in popt)
    resid = y - growth_model(k1, *popt)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return PWProbeReport(
        gamma=model.gamma,
        t=float(t),
        k1=k1.tolist(),
        log_abs=y.tolist(),
        exponent=p,
        coefficient=C,
        offset=A,
        log_coefficient=B,
        r_squared=r2,
        model=model_id(model),
    )
