"""Forward-mode dual numbers.

A ``Dual`` carries a value and one directional derivative (``val + eps*d``
with d**2 = 0).  Arithmetic propagates the derivative exactly, so Poisson
brackets and phase-space gradients built on top of it have no truncation
error beyond round-off.  Components may be real or complex: the complex
ladder/shift integrals are differentiated with the same machinery.

The module-level ``cos``, ``sin``, ... helpers dispatch between ``math``,
``cmath`` and ``Dual`` so that numeric kernels can be written once and
evaluated with either plain numbers or duals.
"""

from __future__ import annotations

import cmath
import math

_SCALARS = (int, float, complex)


class Dual:
    __slots__ = ("val", "eps")

    def __init__(self, val, eps=0.0):
        self.val = val
        self.eps = eps

    def __repr__(self):
        return f"Dual({self.val!r}, {self.eps!r})"

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.eps + other.eps)
        if isinstance(other, _SCALARS):
            return Dual(self.val + other, self.eps)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.eps - other.eps)
        if isinstance(other, _SCALARS):
            return Dual(self.val - other, self.eps)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _SCALARS):
            return Dual(other - self.val, -self.eps)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.val * other.val, self.val * other.eps + self.eps * other.val)
        if isinstance(other, _SCALARS):
            return Dual(self.val * other, self.eps * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            inv = 1.0 / other.val
            return Dual(self.val * inv, (self.eps - self.val * inv * other.eps) * inv)
        if isinstance(other, _SCALARS):
            inv = 1.0 / other
            return Dual(self.val * inv, self.eps * inv)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _SCALARS):
            inv = 1.0 / self.val
            return Dual(other * inv, -other * inv * inv * self.eps)
        return NotImplemented

    def __pow__(self, n):
        # integer powers only; catalog formulas never need fractional ones
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return Dual(1.0, 0.0 * self.eps)
        if n < 0:
            return 1.0 / self.__pow__(-n)
        v = self.val ** (n - 1)
        return Dual(v * self.val, n * v * self.eps)

    def __neg__(self):
        return Dual(-self.val, -self.eps)

    def __pos__(self):
        return self

    def __abs__(self):
        s = -1.0 if self.val < 0 else 1.0
        return Dual(abs(self.val), s * self.eps)

    # -- comparisons look at the value only ------------------------------

    def __lt__(self, other):
        return self.val < _value(other)

    def __le__(self, other):
        return self.val <= _value(other)

    def __gt__(self, other):
        return self.val > _value(other)

    def __ge__(self, other):
        return self.val >= _value(other)

    # -- elementary functions --------------------------------------------

    def sqrt(self):
        r = math.sqrt(self.val)
        return Dual(r, self.eps / (2.0 * r))

    def cos(self):
        return Dual(math.cos(self.val), -math.sin(self.val) * self.eps)

    def sin(self):
        return Dual(math.sin(self.val), math.cos(self.val) * self.eps)

    def cosh(self):
        return Dual(math.cosh(self.val), math.sinh(self.val) * self.eps)

    def sinh(self):
        return Dual(math.sinh(self.val), math.cosh(self.val) * self.eps)

    def asin(self):
        return Dual(math.asin(self.val), self.eps / math.sqrt(1.0 - self.val * self.val))

    def acos(self):
        return Dual(math.acos(self.val), -self.eps / math.sqrt(1.0 - self.val * self.val))

    def asinh(self):
        return Dual(math.asinh(self.val), self.eps / math.sqrt(1.0 + self.val * self.val))

    def acosh(self):
        return Dual(math.acosh(self.val), self.eps / math.sqrt(self.val * self.val - 1.0))

    def atanh(self):
        return Dual(math.atanh(self.val), self.eps / (1.0 - self.val * self.val))


def _value(x):
    return x.val if isinstance(x, Dual) else x


def value(x):
    """Strip the derivative part: the plain value of a number or a Dual."""
    return x.val if isinstance(x, Dual) else x


def derivative(x):
    """The derivative part of ``x`` (0.0 for plain numbers)."""
    return x.eps if isinstance(x, Dual) else 0.0


def sqrt(x):
    if isinstance(x, Dual):
        return x.sqrt()
    if isinstance(x, complex):
        return cmath.sqrt(x)
    return math.sqrt(x)


def cos(x):
    return x.cos() if isinstance(x, Dual) else math.cos(x)


def sin(x):
    return x.sin() if isinstance(x, Dual) else math.sin(x)


def cosh(x):
    return x.cosh() if isinstance(x, Dual) else math.cosh(x)


def sinh(x):
    return x.sinh() if isinstance(x, Dual) else math.sinh(x)


def asin(x):
    return x.asin() if isinstance(x, Dual) else math.asin(x)


def acos(x):
    return x.acos() if isinstance(x, Dual) else math.acos(x)


def asinh(x):
    return x.asinh() if isinstance(x, Dual) else math.asinh(x)


def acosh(x):
    return x.acosh() if isinstance(x, Dual) else math.acosh(x)


def atanh(x):
    return x.atanh() if isinstance(x, Dual) else math.atanh(x)


def atan2(y, x):
    if not isinstance(y, Dual) and not isinstance(x, Dual):
        return math.atan2(y, x)
    yv, xv = _value(y), _value(x)
    ye, xe = derivative(y), derivative(x)
    r2 = xv * xv + yv * yv
    return Dual(math.atan2(yv, xv), (xv * ye - yv * xe) / r2)


def creal(x):
    """Real part, preserving the derivative structure of a Dual."""
    if isinstance(x, Dual):
        return Dual(_creal(x.val), _creal(x.eps))
    return _creal(x)


def cimag(x):
    """Imaginary part, preserving the derivative structure of a Dual."""
    if isinstance(x, Dual):
        return Dual(_cimag(x.val), _cimag(x.eps))
    return _cimag(x)


def _creal(v):
    return v.real if isinstance(v, complex) else v


def _cimag(v):
    return v.imag if isinstance(v, complex) else 0.0


def is_plain(*values) -> bool:
    """True when none of the arguments carries a derivative part."""
    return not any(isinstance(v, Dual) for v in values)
