"""Unsharp (fuzzy) smearing of dichotomic observables and mean values.

A sharp yes/no measurement is blurred by mixing its outcome rule with the
complementary one: the yes-effect becomes ((1+lam)/2) E_yes +
((1-lam)/2) E_no.  At lam = 1 the observable is unchanged; as lam
decreases the two outcomes become less distinguishable.  Mean values scale
linearly: the smeared observable's mean is exactly lam times the sharp
mean, for every state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ValidationError
from .operators import DensityMatrix, DichotomicObservable, Effect

SCALING_TOL = 1e-12


@dataclass(frozen=True)
class UnsharpParam:
    """Unsharpness parameter on the half-open interval (0, 1].

    lam = 0 is rejected: it erases all information about the input and has
    no meaningful optimal-unsharpness semantics.
    """

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not (0.0 < v <= 1.0):
            raise ValidationError("lambda-in-(0,1]", detail=f"got {self.value!r}")
        object.__setattr__(self, "value", v)

    @classmethod
    def coerce(cls, lam) -> "UnsharpParam":
        return lam if isinstance(lam, UnsharpParam) else cls(float(lam))

    def __float__(self) -> float:
        return self.value


def smear(obs: DichotomicObservable, lam) -> DichotomicObservable:
    """Mix each effect of obs with its complement at weight (1 - lam)/2.

    The output is a valid dichotomic observable for every lam in (0, 1]:
    each eigenvalue a of the yes-effect maps to (1 - lam)/2 + lam * a,
    which stays inside [0, 1].  The complement relation yes + no = I is
    preserved exactly as constructed.
    """
    lam = float(UnsharpParam.coerce(lam))
    wp, wm = (1.0 + lam) / 2.0, (1.0 - lam) / 2.0
    yes = Effect(wp * obs.yes_effect.matrix + wm * obs.no_effect.matrix)
    no = Effect(wm * obs.yes_effect.matrix + wp * obs.no_effect.matrix)
    return DichotomicObservable(yes, no)


def mean_value(obs: DichotomicObservable, state: DensityMatrix) -> float:
    """p_yes - p_no = Tr[state (E_yes - E_no)]; always in [-1, 1]."""
    if obs.dim != state.dim:
        raise DimensionMismatch(obs.dim, state.dim)
    return float(np.trace(state.matrix @ obs.difference()).real)


@dataclass(frozen=True)
class SmearedMeanReport:
    """Both sides of the smeared-mean identity, computed independently.

    value      -- mean of the smeared observable on the state
    scaled_mean -- lam times the sharp mean
    The two must agree to 1e-12; the constructor enforces this, so every
    call doubles as a self-test of the smearing map.
    """

    value: float
    scaled_mean: float

    def __post_init__(self):
        res = abs(self.value - self.scaled_mean)
        if res > SCALING_TOL:
            raise ValidationError("smeared-mean-scaling", res)

    @property
    def residual(self) -> float:
        return abs(self.value - self.scaled_mean)

    def __float__(self) -> float:
        return self.value


def smeared_mean(obs: DichotomicObservable, lam, state: DensityMatrix) -> SmearedMeanReport:
    """Mean of the smeared observable, with its scaling identity checked."""
    lam = float(UnsharpParam.coerce(lam))
    return SmearedMeanReport(
        value=mean_value(smear(obs, lam), state),
        scaled_mean=lam * mean_value(obs, state),
    )
