"""Truncated Taylor arithmetic: univariate jets for curve data, bivariate jets
for surface data.

A :class:`Jet` stores raw derivatives ``(f, f', ..., f^(K))`` at a base point,
not Taylor coefficients, so formulas written in partial derivatives transcribe
one-to-one. A :class:`BiJet` stores the triangle of partials
``d^{i+j} f / du^i dv^j`` for ``i + j <= degree`` with mixed partials stored
once. Bivariate data for products ``f(u) g(v)`` is assembled exactly from the
two univariate jets, so no accuracy is lost to grid differencing anywhere.

Values are immutable after construction and safe to share across threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDivision, DomainError, OriginAtan2

DIV_EPS = 1e-12

_NMAX = 24
_BINOM = np.zeros((_NMAX + 1, _NMAX + 1))
for _n in range(_NMAX + 1):
    for _k in range(_n + 1):
        _BINOM[_n, _k] = math.comb(_n, _k)
_FACT = np.array([math.factorial(k) for k in range(_NMAX + 1)], dtype=float)


def _leibniz(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Derivatives of a product from derivatives of the factors.

    Accumulated with fsum so the result is correctly rounded, which makes
    multiplication bitwise commutative.
    """
    out = np.empty(n + 1)
    for k in range(n + 1):
        out[k] = math.fsum(_BINOM[k, i] * a[i] * b[k - i] for i in range(k + 1))
    return out


# ---------------------------------------------------------------------------
# univariate jets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Jet:
    """Derivatives of a scalar function of one variable at a base point.

    ``d[k]`` is the k-th derivative. Arithmetic truncates to the smaller
    operand order. Derivative shifts (:meth:`differentiate`) may produce
    orders below the public minimum of 2; the public constructors enforce it.
    """

    t0: float
    d: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.d, dtype=float)
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "d", arr)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def variable(t0: float, order: int = 6) -> "Jet":
        if order < 2:
            raise ValueError("jet order must be >= 2")
        d = np.zeros(order + 1)
        d[0], d[1] = t0, 1.0
        return Jet(t0, d)

    @staticmethod
    def constant(value: float, t0: float = 0.0, order: int = 6) -> "Jet":
        if order < 2:
            raise ValueError("jet order must be >= 2")
        d = np.zeros(order + 1)
        d[0] = value
        return Jet(t0, d)

    # -- accessors -----------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.d) - 1

    @property
    def value(self) -> float:
        return float(self.d[0])

    def deriv(self, k: int) -> float:
        return float(self.d[k])

    # -- helpers -------------------------------------------------------------

    def _align(self, other) -> tuple[np.ndarray, np.ndarray]:
        if isinstance(other, Jet):
            if other.t0 != self.t0:
                raise ValueError("jet base points differ")
            n = min(self.order, other.order)
            return self.d[: n + 1], other.d[: n + 1]
        other = float(other)
        c = np.zeros(self.order + 1)
        c[0] = other
        return self.d, c

    def truncate(self, order: int) -> "Jet":
        return Jet(self.t0, self.d[: order + 1])

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        a, b = self._align(other)
        return Jet(self.t0, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._align(other)
        return Jet(self.t0, a - b)

    def __rsub__(self, other):
        a, b = self._align(other)
        return Jet(self.t0, b - a)

    def __neg__(self):
        return Jet(self.t0, -self.d)

    def __mul__(self, other):
        a, b = self._align(other)
        if not isinstance(other, Jet):
            return Jet(self.t0, a * b[0])
        n = len(a) - 1
        return Jet(self.t0, _leibniz(a, b, n))

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._align(other)
        if not isinstance(other, Jet):
            if abs(b[0]) <= DIV_EPS:
                raise DegenerateDivision("division by near-zero constant")
            return Jet(self.t0, a / b[0])
        if abs(b[0]) <= DIV_EPS:
            raise DegenerateDivision("division by jet with near-zero value")
        n = len(a) - 1
        r = np.empty(n + 1)
        for k in range(n + 1):
            acc = a[k]
            for i in range(k):
                acc -= _BINOM[k, i] * r[i] * b[k - i]
            r[k] = acc / b[0]
        return Jet(self.t0, r)

    def __rtruediv__(self, other):
        return Jet.constant(float(other), self.t0, self.order) / self

    def __pow__(self, exponent):
        return _power(self, exponent)

    # -- calculus ------------------------------------------------------------

    def differentiate(self) -> "Jet":
        """Jet of the derivative function; order drops by one."""
        return Jet(self.t0, self.d[1:])

    def antiderivative(self, value: float) -> "Jet":
        """Jet of an antiderivative with prescribed value; order rises by one."""
        return Jet(self.t0, np.concatenate(([value], self.d)))

    def compose_outer(self, outer_derivs: np.ndarray) -> "Jet":
        """Jet of F(self) given derivatives of F at ``self.value``."""
        n = self.order
        f = np.asarray(outer_derivs, dtype=float)[: n + 1]
        if len(f) < n + 1:
            raise ValueError("need outer derivatives up to the jet order")
        p = self.d / _FACT[: n + 1]
        p = p.copy()
        p[0] = 0.0
        ft = f / _FACT[: n + 1]
        # Horner in the nilpotent part of the inner series.
        acc = np.zeros(n + 1)
        acc[0] = ft[n]
        for k in range(n - 1, -1, -1):
            acc = _series_mul(acc, p, n)
            acc[0] += ft[k]
        return Jet(self.t0, acc * _FACT[: n + 1])


def _series_mul(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(n + 1)
    for i in range(n + 1):
        if a[i] == 0.0:
            continue
        out[i:] += a[i] * b[: n + 1 - i]
    return out


# ---------------------------------------------------------------------------
# bivariate jets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BiJet:
    """Partial derivatives of a scalar function of (u, v) at a base point.

    ``c[i, j]`` holds the partial of order i in u and j in v; entries with
    ``i + j > degree`` are kept at zero.
    """

    u0: float
    v0: float
    c: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.c, dtype=float).copy()
        n = arr.shape[0]
        for i in range(n):
            for j in range(n):
                if i + j >= n:
                    arr[i, j] = 0.0
        arr.setflags(write=False)
        object.__setattr__(self, "c", arr)

    # -- constructors --------------------------------------------------------

    @staticmethod
    def variable_u(u0: float, v0: float, degree: int = 3) -> "BiJet":
        c = np.zeros((degree + 1, degree + 1))
        c[0, 0], c[1, 0] = u0, 1.0
        return BiJet(u0, v0, c)

    @staticmethod
    def variable_v(u0: float, v0: float, degree: int = 3) -> "BiJet":
        c = np.zeros((degree + 1, degree + 1))
        c[0, 0], c[0, 1] = v0, 1.0
        return BiJet(u0, v0, c)

    @staticmethod
    def constant(value: float, u0: float = 0.0, v0: float = 0.0,
                 degree: int = 3) -> "BiJet":
        c = np.zeros((degree + 1, degree + 1))
        c[0, 0] = value
        return BiJet(u0, v0, c)

    @staticmethod
    def from_u_jet(jet: Jet, v0: float, degree: int = 3) -> "BiJet":
        """Embed a function of u alone; exact up to ``degree``."""
        if jet.order < degree:
            raise ValueError("univariate jet order too low for requested degree")
        c = np.zeros((degree + 1, degree + 1))
        c[: degree + 1, 0] = jet.d[: degree + 1]
        return BiJet(jet.t0, v0, c)

    @staticmethod
    def from_v_jet(jet: Jet, u0: float, degree: int = 3) -> "BiJet":
        if jet.order < degree:
            raise ValueError("univariate jet order too low for requested degree")
        c = np.zeros((degree + 1, degree + 1))
        c[0, : degree + 1] = jet.d[: degree + 1]
        return BiJet(u0, jet.t0, c)

    # -- accessors -----------------------------------------------------------

    @property
    def degree(self) -> int:
        return self.c.shape[0] - 1

    @property
    def value(self) -> float:
        return float(self.c[0, 0])

    def part(self, i: int, j: int) -> float:
        return float(self.c[i, j])

    @property
    def grad(self) -> tuple[float, float]:
        return float(self.c[1, 0]), float(self.c[0, 1])

    @property
    def hessian(self) -> np.ndarray:
        return np.array([[self.c[2, 0], self.c[1, 1]],
                         [self.c[1, 1], self.c[0, 2]]])

    # -- helpers -------------------------------------------------------------

    def _align(self, other) -> tuple[np.ndarray, np.ndarray]:
        if isinstance(other, BiJet):
            if other.u0 != self.u0 or other.v0 != self.v0:
                raise ValueError("bijet base points differ")
            n = min(self.degree, other.degree)
            return self.c[: n + 1, : n + 1], other.c[: n + 1, : n + 1]
        other = float(other)
        c = np.zeros_like(self.c)
        c[0, 0] = other
        return self.c, c

    def truncate(self, degree: int) -> "BiJet":
        return BiJet(self.u0, self.v0, self.c[: degree + 1, : degree + 1])

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        a, b = self._align(other)
        return BiJet(self.u0, self.v0, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._align(other)
        return BiJet(self.u0, self.v0, a - b)

    def __rsub__(self, other):
        a, b = self._align(other)
        return BiJet(self.u0, self.v0, b - a)

    def __neg__(self):
        return BiJet(self.u0, self.v0, -self.c)

    def __mul__(self, other):
        a, b = self._align(other)
        if not isinstance(other, BiJet):
            return BiJet(self.u0, self.v0, a * b[0, 0])
        n = a.shape[0] - 1
        out = np.zeros((n + 1, n + 1))
        for i in range(n + 1):
            for j in range(n + 1 - i):
                out[i, j] = math.fsum(
                    _BINOM[i, p] * _BINOM[j, q] * a[p, q] * b[i - p, j - q]
                    for p in range(i + 1) for q in range(j + 1))
        return BiJet(self.u0, self.v0, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._align(other)
        if not isinstance(other, BiJet):
            if abs(b[0, 0]) <= DIV_EPS:
                raise DegenerateDivision("division by near-zero constant")
            return BiJet(self.u0, self.v0, a / b[0, 0])
        if abs(b[0, 0]) <= DIV_EPS:
            raise DegenerateDivision("division by bijet with near-zero value")
        n = a.shape[0] - 1
        r = np.zeros((n + 1, n + 1))
        for s in range(n + 1):          # solve in graded order
            for i in range(s, -1, -1):
                j = s - i
                acc = a[i, j]
                for p in range(i + 1):
                    for q in range(j + 1):
                        if p == i and q == j:
                            continue
                        rpq = r[p, q]
                        if rpq == 0.0:
                            continue
                        acc -= (_BINOM[i, p] * _BINOM[j, q]
                                * rpq * b[i - p, j - q])
                r[i, j] = acc / b[0, 0]
        return BiJet(self.u0, self.v0, r)

    def __rtruediv__(self, other):
        return BiJet.constant(float(other), self.u0, self.v0, self.degree) / self

    def __pow__(self, exponent):
        return _power(self, exponent)

    # -- calculus ------------------------------------------------------------

    def du(self) -> "BiJet":
        """Bijet of the u-partial; degree drops by one."""
        n = self.degree
        return BiJet(self.u0, self.v0, self.c[1: n + 1, : n])

    def dv(self) -> "BiJet":
        n = self.degree
        return BiJet(self.u0, self.v0, self.c[: n, 1: n + 1])

    def compose_outer(self, outer_derivs: np.ndarray) -> "BiJet":
        """BiJet of F(self) given derivatives of F at ``self.value``."""
        n = self.degree
        f = np.asarray(outer_derivs, dtype=float)[: n + 1]
        if len(f) < n + 1:
            raise ValueError("need outer derivatives up to the bijet degree")
        fact2 = np.outer(_FACT[: n + 1], _FACT[: n + 1])
        p = self.c / fact2
        p = p.copy()
        p[0, 0] = 0.0
        ft = f / _FACT[: n + 1]
        acc = np.zeros((n + 1, n + 1))
        acc[0, 0] = ft[n]
        for k in range(n - 1, -1, -1):
            acc = _poly2_mul(acc, p, n)
            acc[0, 0] += ft[k]
        return BiJet(self.u0, self.v0, acc * fact2)


def _poly2_mul(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros((n + 1, n + 1))
    for i in range(n + 1):
        for j in range(n + 1 - i):
            aij = a[i, j]
            if aij == 0.0:
                continue
            for p in range(n + 1 - i):
                for q in range(n + 1 - i - j - p):
                    out[i + p, j + q] += aij * b[p, q]
    return out


# ---------------------------------------------------------------------------
# elementary functions
# ---------------------------------------------------------------------------

def _order_of(x) -> int:
    return x.order if isinstance(x, Jet) else x.degree


def _sin_derivs(a: float, n: int) -> np.ndarray:
    s, c = math.sin(a), math.cos(a)
    cycle = (s, c, -s, -c)
    return np.array([cycle[k % 4] for k in range(n + 1)])


def _cos_derivs(a: float, n: int) -> np.ndarray:
    s, c = math.sin(a), math.cos(a)
    cycle = (c, -s, -c, s)
    return np.array([cycle[k % 4] for k in range(n + 1)])


def _exp_derivs(a: float, n: int) -> np.ndarray:
    return np.full(n + 1, math.exp(a))


def _pow_derivs(a: float, e: float, n: int) -> np.ndarray:
    out = np.empty(n + 1)
    out[0] = a ** e
    coef = 1.0
    for k in range(1, n + 1):
        coef *= e - (k - 1)
        out[k] = coef * a ** (e - k)
    return out


def sin(x):
    return x.compose_outer(_sin_derivs(x.value, _order_of(x)))


def cos(x):
    return x.compose_outer(_cos_derivs(x.value, _order_of(x)))


def exp(x):
    return x.compose_outer(_exp_derivs(x.value, _order_of(x)))


def tan(x):
    return sin(x) / cos(x)


def sqrt(x):
    if x.value <= 0.0:
        raise DomainError("sqrt of nonpositive value")
    return x.compose_outer(_pow_derivs(x.value, 0.5, _order_of(x)))


def _power(x, exponent):
    if isinstance(exponent, (Jet, BiJet)):
        raise TypeError("jet-valued exponents are not supported")
    e = float(exponent)
    if e == int(e):
        k = int(e)
        if k < 0:
            return 1.0 / _power(x, -k)
        one = (Jet.constant(1.0, x.t0, x.order) if isinstance(x, Jet)
               else BiJet.constant(1.0, x.u0, x.v0, x.degree))
        out = one
        for _ in range(k):
            out = out * x
        return out
    if x.value <= 0.0:
        raise DomainError("real power of nonpositive value")
    return x.compose_outer(_pow_derivs(x.value, e, _order_of(x)))


def atan(x):
    if isinstance(x, Jet):
        # g = atan(f) has g' = f' / (1 + f^2); integrate the derivative jet.
        w = x.differentiate() / (1.0 + (x * x).truncate(x.order - 1))
        return w.antiderivative(math.atan(x.value))
    outer = atan(Jet.variable(x.value, max(2, x.degree))).d
    return x.compose_outer(outer)


def atan2(y, x):
    y0, x0 = y.value, x.value
    if x0 == 0.0 and y0 == 0.0:
        raise OriginAtan2("atan2 at the origin")
    base = math.atan2(y0, x0)
    if isinstance(y, Jet):
        n = min(y.order, x.order)
        yj, xj = y.truncate(n), x.truncate(n)
        num = xj * yj.differentiate() - yj * xj.differentiate()
        den = (xj * xj + yj * yj).truncate(n - 1)
        return (num / den).antiderivative(base)
    # Bivariate: compose atan on whichever ratio is well conditioned; the
    # branch constant only shifts the value, so pin it to atan2 exactly.
    if abs(x0) >= abs(y0):
        th = atan(y / x)
    else:
        th = -atan(x / y)
    c = th.c.copy()
    c[0, 0] = base
    return BiJet(th.u0, th.v0, c)


# ---------------------------------------------------------------------------
# 3-vector helpers over jets
# ---------------------------------------------------------------------------

def dot3(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross3(a, b):
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def norm3(a):
    return sqrt(dot3(a, a))


def det3(a, b, c):
    return dot3(a, cross3(b, c))
