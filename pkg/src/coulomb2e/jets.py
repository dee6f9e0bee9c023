"""Truncated multivariate Taylor ("jet") arithmetic for exact high-order derivatives.

A Jet stores the Taylor coefficients of a smooth function around an expansion
point, truncated to a fixed per-axis order.  Arithmetic on jets propagates all
mixed partial derivatives exactly (to machine precision), which is what the
closed-form generating functions need: their matrix elements are mixed partials
of total order up to ~7 and finite differences are hopeless at that depth.

Multiplication is truncated polynomial multiplication, done as an FFT
convolution on the padded coefficient grid.  For the small grids used here
(a few hundred coefficients) this is both faster and just as accurate
(~1e-14 relative) as direct slice accumulation.
"""

from math import factorial

import numpy as np


class Jet:
    """Taylor coefficients c[i1,...,in] of f around a point, per-axis truncated."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=float)

    @classmethod
    def variable(cls, value, axis, shape):
        """The coordinate function x_axis, expanded at `value`."""
        c = np.zeros(shape)
        idx = [0] * len(shape)
        c[tuple(idx)] = value
        if shape[axis] > 1:
            idx[axis] = 1
            c[tuple(idx)] = 1.0
        return cls(c)

    @classmethod
    def const(cls, value, shape):
        c = np.zeros(shape)
        c[(0,) * len(shape)] = value
        return cls(c)

    @property
    def val(self):
        return float(self.c[(0,) * self.c.ndim])

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.c + other.c)
        out = self.c.copy()
        out[(0,) * out.ndim] += other
        return Jet(out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Jet):
            return Jet(self.c - other.c)
        out = self.c.copy()
        out[(0,) * out.ndim] -= other
        return Jet(out)

    def __rsub__(self, other):
        out = -self.c
        out[(0,) * out.ndim] += other
        return Jet(out)

    def __neg__(self):
        return Jet(-self.c)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c * other)
        sh = self.c.shape
        full = tuple(2 * s - 1 for s in sh)
        ax = tuple(range(len(sh)))
        fa = np.fft.rfftn(self.c, full, axes=ax)
        fb = np.fft.rfftn(other.c, full, axes=ax)
        out = np.fft.irfftn(fa * fb, full, axes=ax)
        return Jet(np.ascontiguousarray(out[tuple(slice(0, s) for s in sh)]))

    __rmul__ = __mul__

    def recip(self):
        """1/self by Newton iteration r <- r(2 - self*r); needs val != 0."""
        a0 = self.val
        if a0 == 0.0:
            raise ZeroDivisionError("jet reciprocal at zero value")
        sh = self.c.shape
        r = Jet.const(1.0 / a0, sh)
        # each Newton step doubles the correct order
        steps = max(1, int(np.ceil(np.log2(sum(s - 1 for s in sh) + 1))) + 1)
        for _ in range(steps):
            r = r * (2.0 - self * r)
        return r

    def log(self):
        """log(self) via the series in u = self/val - 1; needs val > 0."""
        a0 = self.val
        if a0 <= 0.0:
            raise ValueError("jet log of non-positive value")
        sh = self.c.shape
        u = self * (1.0 / a0) - 1.0
        nmax = sum(s - 1 for s in sh)
        acc = Jet.const(0.0, sh)
        term = Jet.const(1.0, sh)
        for k in range(1, nmax + 1):
            term = term * u
            acc = acc + term * ((-1.0) ** (k + 1) / k)
        return acc + np.log(a0)

    def deriv(self, idx):
        """Mixed partial derivative of the given multi-index order."""
        return float(self.c[tuple(idx)]) * float(
            np.prod([factorial(i) for i in idx])
        )
