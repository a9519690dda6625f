"""Parameter records for the fractional-Laplacian dissipative wave model.

A model is described by the sound speed ``c0``, the dissipation coefficient
``a0``, the dispersion coefficient ``b0`` and the fractional order ``gamma``.
The Treeby-Cox family ties ``b0`` to the other constants through
``b0 = -a0 * c0 * tan(pi * gamma)``.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass

__all__ = [
    "Family",
    "ModelError",
    "NonPositiveSpeed",
    "NegativeDissipation",
    "NonPositiveGamma",
    "FamilyMismatch",
    "SingularCoupling",
    "TanPole",
    "WaveModel",
    "derive_b0",
    "validate_model",
]

_COUPLING_RTOL = 1e-12
_POLE_TOL = 1e-12


class ModelError(ValueError):
    """Base class for invalid model parameters."""


class NonPositiveSpeed(ModelError):
    pass


class NegativeDissipation(ModelError):
    pass


class NonPositiveGamma(ModelError):
    pass


class FamilyMismatch(ModelError):
    pass


class TanPole(ModelError):
    pass


class SingularCoupling(TanPole):
    """Treeby-Cox coupling requested at a pole of tan(pi*gamma)."""


class Family(str, enum.Enum):
    LOSSLESS = "Lossless"
    CHEN_HOLM = "ChenHolm"
    TREEBY_COX = "TreebyCox"
    CUSTOM = "Custom"

    @classmethod
    def parse(cls, value: "Family | str") -> "Family":
        if isinstance(value, cls):
            return value
        key = str(value).strip().replace("_", "").replace("-", "").lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        raise ValueError(f"unknown model family {value!r}")


@dataclass(frozen=True)
class WaveModel:
    c0: float
    a0: float
    b0: float
    gamma: float
    family: Family = Family.CUSTOM

    @property
    def is_lossless(self) -> bool:
        return self.a0 == 0.0 and self.b0 == 0.0

    def to_dict(self) -> dict:
        return {
            "c0": self.c0,
            "a0": self.a0,
            "b0": self.b0,
            "gamma": self.gamma,
            "family": self.family.value,
        }

    @classmethod
    def lossless(cls, c0: float = 1.0, gamma: float = 1.0) -> "WaveModel":
        return validate_model(c0, 0.0, 0.0, gamma, Family.LOSSLESS)

    @classmethod
    def chen_holm(cls, a0: float, gamma: float, c0: float = 1.0) -> "WaveModel":
        return validate_model(c0, a0, 0.0, gamma, Family.CHEN_HOLM)

    @classmethod
    def treeby_cox(cls, a0: float, gamma: float, c0: float = 1.0) -> "WaveModel":
        return validate_model(c0, a0, derive_b0(a0, c0, gamma), gamma, Family.TREEBY_COX)


def derive_b0(a0: float, c0: float, gamma: float) -> float:
    """Return the Treeby-Cox dispersion coefficient ``-a0 * c0 * tan(pi * gamma)``.

    Raises
    ------
    TanPole
        If ``gamma`` sits on a pole of the tangent, i.e. an odd multiple of 1/2.
    """
    if not a0 > 0:
        raise NegativeDissipation(f"a0 must be > 0 for the coupling, got {a0}")
    if not c0 > 0:
        raise NonPositiveSpeed(f"c0 must be > 0, got {c0}")
    if not gamma > 0:
        raise NonPositiveGamma(f"gamma must be > 0, got {gamma}")
    angle = math.pi * gamma
    if abs(math.cos(angle)) < _POLE_TOL:
        raise TanPole(f"tan(pi*gamma) has a pole at gamma={gamma}")
    return -a0 * c0 * math.tan(angle)


def validate_model(c0, a0, b0, gamma, family="Custom") -> WaveModel:
    """Check the coefficients against the declared family and build a `WaveModel`.

    ``b0`` may be the string ``"auto"``, in which case it is derived with
    `derive_b0` (Treeby-Cox), or set to zero for the other families.
    """
    family = Family.parse(family)
    if isinstance(b0, str):
        if b0.strip().lower() != "auto":
            raise ValueError(f"b0 must be a number or 'auto', got {b0!r}")
        b0 = None

    c0 = float(c0)
    a0 = float(a0)
    gamma = float(gamma)
    for name, value in (("c0", c0), ("a0", a0), ("gamma", gamma)):
        if not math.isfinite(value):
            raise ModelError(f"{name} must be finite, got {value}")
    if c0 <= 0:
        raise NonPositiveSpeed(f"c0 must be > 0, got {c0}")
    if a0 < 0:
        raise NegativeDissipation(f"a0 must be >= 0, got {a0}")
    if gamma <= 0:
        raise NonPositiveGamma(f"gamma must be > 0, got {gamma}")

    if b0 is None:
        if family is Family.TREEBY_COX:
            try:
                b0 = derive_b0(a0, c0, gamma)
            except TanPole as exc:
                raise SingularCoupling(str(exc)) from None
        else:
            b0 = 0.0
    b0 = float(b0)
    if not math.isfinite(b0):
        raise ModelError(f"b0 must be finite, got {b0}")

    if family is Family.LOSSLESS and (a0 != 0.0 or b0 != 0.0):
        raise FamilyMismatch(f"Lossless model needs a0 = b0 = 0, got a0={a0}, b0={b0}")
    if family is Family.CHEN_HOLM and (b0 != 0.0 or a0 <= 0.0):
        raise FamilyMismatch(f"ChenHolm model needs b0 = 0 and a0 > 0, got a0={a0}, b0={b0}")
    if family is Family.TREEBY_COX:
        if a0 <= 0.0:
            raise FamilyMismatch(f"TreebyCox model needs a0 > 0, got {a0}")
        try:
            expected = derive_b0(a0, c0, gamma)
        except TanPole as exc:
            raise SingularCoupling(str(exc)) from None
        # absolute slack covers the rounding of tan near its zeros (integer gamma)
        slack = 4.0 * sys.float_info.epsilon * math.pi * gamma * a0 * c0
        tol = _COUPLING_RTOL * max(abs(expected), abs(b0)) + slack
        if abs(b0 - expected) > tol:
            raise FamilyMismatch(f"TreebyCox coupling requires b0={expected!r}, got {b0!r}")
    return WaveModel(c0=c0, a0=a0, b0=b0, gamma=gamma, family=family)
