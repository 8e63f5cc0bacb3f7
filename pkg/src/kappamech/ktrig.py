"""Curvature-dependent trigonometric kernel.

``ck``/``sk``/``tk`` interpolate between circular (kappa > 0), parabolic
(kappa = 0) and hyperbolic (kappa < 0) trig as functions of the curvature:

    ck(k, x) = cos(sqrt(k) x)            k > 0
             = 1                         k = 0
             = cosh(sqrt(-k) x)          k < 0

    sk(k, x) = sin(sqrt(k) x)/sqrt(k)    k > 0
             = x                         k = 0
             = sinh(sqrt(-k) x)/sqrt(-k) k < 0

    tk = sk / ck

satisfying ck**2 + k*sk**2 = 1, d(ck) = -k*sk, d(sk) = ck, d(tk) = 1/ck**2.

All functions accept plain floats or ``Dual`` arguments in ``x`` and are
total apart from the tk pole where ck vanishes.  Near kappa = 0 a truncated
defining power series is used instead of the closed forms, which keeps
curvature sweeps smooth through zero and avoids cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dual import Dual, value
from .errors import PoleError


@dataclass(frozen=True)
class Curvature:
    """The real deformation parameter with its derived space classification."""

    kappa: float

    @property
    def classification(self) -> str:
        if self.kappa > 0.0:
            return "sphere"
        if self.kappa < 0.0:
            return "hyperbolic"
        return "euclidean"

    @property
    def radius(self) -> float:
        """R with kappa = +1/R^2 (sphere) or -1/R^2 (hyperbolic); undefined at 0."""
        if self.kappa == 0.0:
            raise ValueError("the flat plane has no finite radius")
        return 1.0 / math.sqrt(abs(self.kappa))

# series branch: |kappa * x^2| below this uses the truncated defining series
SERIES_THRESHOLD = 1e-4
_SERIES_TERMS = 10

# tk / dtk raise when |ck| falls below this
POLE_TOLERANCE = 1e-12

# 1/(2l)! and 1/(2l+1)! for the series branch
_CK_COEF = [1.0 / math.factorial(2 * l) for l in range(_SERIES_TERMS)]
_SK_COEF = [1.0 / math.factorial(2 * l + 1) for l in range(_SERIES_TERMS)]


def _use_series(kappa: float, x) -> bool:
    xv = value(x)
    return abs(kappa) * xv * xv < SERIES_THRESHOLD


def _series(coef, kappa, x):
    # Horner in z = kappa*x^2: sum_l (-z)^l * coef[l]
    z = kappa * x * x
    acc = coef[-1]
    for c in reversed(coef[:-1]):
        acc = c - z * acc
    return acc


def ck(kappa: float, x):
    """Curvature cosine; even in x, equals 1 at kappa = 0."""
    if _use_series(kappa, x):
        return _series(_CK_COEF, kappa, x)
    if kappa > 0.0:
        r = math.sqrt(kappa)
        return _cos(r * x)
    r = math.sqrt(-kappa)
    return _cosh(r * x)


def sk(kappa: float, x):
    """Curvature sine; odd in x, equals x at kappa = 0."""
    if _use_series(kappa, x):
        return x * _series(_SK_COEF, kappa, x)
    if kappa > 0.0:
        r = math.sqrt(kappa)
        return _sin(r * x) / r
    r = math.sqrt(-kappa)
    return _sinh(r * x) / r


def tk(kappa: float, x):
    """Curvature tangent sk/ck; raises PoleError where ck vanishes."""
    c = ck(kappa, x)
    if abs(value(c)) < POLE_TOLERANCE:
        raise PoleError(f"tk pole: ck({kappa}, {value(x)}) = {value(c):.3e}")
    return sk(kappa, x) / c


def dck(kappa: float, x):
    """d/dx ck = -kappa * sk."""
    return -kappa * sk(kappa, x)


def dsk(kappa: float, x):
    """d/dx sk = ck."""
    return ck(kappa, x)


def dtk(kappa: float, x):
    """d/dx tk = 1/ck**2; raises PoleError where ck vanishes."""
    c = ck(kappa, x)
    if abs(value(c)) < POLE_TOLERANCE:
        raise PoleError(f"dtk pole: ck({kappa}, {value(x)}) = {value(c):.3e}")
    return 1.0 / (c * c)


def _cos(v):
    return v.cos() if isinstance(v, Dual) else math.cos(v)


def _sin(v):
    return v.sin() if isinstance(v, Dual) else math.sin(v)


def _cosh(v):
    return v.cosh() if isinstance(v, Dual) else math.cosh(v)


def _sinh(v):
    return v.sinh() if isinstance(v, Dual) else math.sinh(v)
