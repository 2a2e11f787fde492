"""Truncated univariate power series and an order-by-order invariance solver.

The solver substitutes a polynomial graph into the invariance equation of
a manifold, evaluates the residual as a truncated series in the graph's
independent variable, and fixes the unknown coefficients one degree at a
time.  It never uses the closed-form coefficients, so it serves as an
independent check on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Real

import numpy as np

from .dynamics import DomainError, Params, PeriodicPair
from .spectral import PreconditionError, f0g0, fg, spectrum_T, spectrum_T2

DEFAULT_CAP = 8


class TruncatedSeries:
    """sum_k c[k] x^k for k = 0..cap; every product discards degrees above cap."""

    __slots__ = ("_c",)
    # numpy scalars must defer to the reflected operators below
    __array_ufunc__ = None

    def __init__(self, coefficients, cap: int | None = None):
        c = np.asarray(coefficients, dtype=float).ravel()
        if cap is None:
            cap = len(c) - 1
        if cap < 0:
            raise ValueError("degree cap must be >= 0")
        out = np.zeros(cap + 1)
        n = min(len(c), cap + 1)
        out[:n] = c[:n]
        out.flags.writeable = False
        self._c = out

    @classmethod
    def constant(cls, value: float, cap: int = DEFAULT_CAP) -> "TruncatedSeries":
        return cls([value], cap)

    @classmethod
    def variable(cls, cap: int = DEFAULT_CAP) -> "TruncatedSeries":
        return cls([0.0, 1.0], cap)

    @property
    def cap(self) -> int:
        return len(self._c) - 1

    @property
    def coefficients(self) -> np.ndarray:
        return self._c

    def __getitem__(self, k):
        return self._c[k]

    def __len__(self):
        return len(self._c)

    def __repr__(self):
        return f"TruncatedSeries({self._c.tolist()}, cap={self.cap})"

    def __call__(self, x: float) -> float:
        return float(np.polynomial.polynomial.polyval(x, self._c))

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other.cap != self.cap:
                raise ValueError(f"degree caps differ: {self.cap} vs {other.cap}")
            return other
        if isinstance(other, Real):
            return TruncatedSeries.constant(float(other), self.cap)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self._c)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_add(other, -self)

    def __mul__(self, other):
        if isinstance(other, Real):
            return TruncatedSeries(self._c * float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Real):
            return TruncatedSeries(self._c / float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_div(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_div(other, self)


def _check_caps(a: TruncatedSeries, b: TruncatedSeries) -> int:
    if a.cap != b.cap:
        raise ValueError(f"degree caps differ: {a.cap} vs {b.cap}")
    return a.cap


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _check_caps(a, b)
    return TruncatedSeries(a.coefficients + b.coefficients)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    cap = _check_caps(a, b)
    return TruncatedSeries(np.convolve(a.coefficients, b.coefficients)[: cap + 1], cap)


def series_div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Return c with b*c = a through degree cap."""
    cap = _check_caps(a, b)
    bc = b.coefficients
    if abs(bc[0]) <= 1e-14:
        raise DomainError("series division needs a nonzero constant term in the divisor")
    ac = a.coefficients
    c = np.zeros(cap + 1)
    for k in range(cap + 1):
        c[k] = (ac[k] - np.dot(bc[1 : k + 1], c[k - 1 :: -1][:k])) / bc[0]
    return TruncatedSeries(c, cap)


def series_compose(outer: TruncatedSeries, inner: TruncatedSeries, atol: float = 1e-12) -> TruncatedSeries:
    """Return outer(inner(x)), truncated.  inner must vanish at the origin.

    Constant terms of ``inner`` below ``atol`` are rounding noise from
    rational expressions that cancel exactly and are dropped.
    """
    cap = _check_caps(outer, inner)
    ic = inner.coefficients
    if abs(ic[0]) > atol:
        raise DomainError(f"inner series has nonzero constant term {ic[0]:.3e}")
    inner = TruncatedSeries(np.concatenate(([0.0], ic[1:])), cap)
    oc = outer.coefficients
    result = TruncatedSeries.constant(oc[cap], cap)
    for k in range(cap - 1, -1, -1):
        result = series_mul(result, inner) + oc[k]
    return result


# -- invariance equations ---------------------------------------------------

KINDS = ("unstable", "stable", "center")


def _residual_fn(kind: str, model_input, cap: int):
    x = TruncatedSeries.variable(cap)
    if kind == "unstable":
        sp = _saddle_spectrum(model_input)

        def residual(graph):
            f, g = fg(sp, x, graph)
            return series_compose(graph, sp.lambda1 * x + f) - sp.lambda2 * graph - g

    elif kind == "stable":
        sp = _saddle_spectrum(model_input)

        def residual(graph):
            f, g = fg(sp, graph, x)
            return series_compose(graph, sp.lambda2 * x + g) - sp.lambda1 * graph - f

    elif kind == "center":
        if not isinstance(model_input, PeriodicPair):
            raise PreconditionError("center invariance needs a PeriodicPair")
        sp0 = spectrum_T2(model_input)

        def residual(graph):
            f0, g0 = f0g0(model_input, x, graph)
            return series_compose(graph, sp0.lambda01 * x + f0) - graph - g0

    else:
        raise ValueError(f"unknown manifold kind {kind!r}; expected one of {KINDS}")
    return residual


def _saddle_spectrum(p):
    if not isinstance(p, Params):
        raise PreconditionError("saddle manifolds need Params")
    sp = spectrum_T(p)
    if not sp.saddle:
        raise PreconditionError(
            f"fixed point is not a saddle at alpha={p.alpha}, beta={p.beta} "
            f"(lambda1={sp.lambda1:.6g}, lambda2={sp.lambda2:.6g})"
        )
    return sp


@dataclass(frozen=True)
class InvarianceSolution:
    kind: str
    coefficients: tuple[float, ...]  # graph coefficients of x^2 .. x^degree
    slopes: tuple[float, ...]  # d(residual_k)/d(c_k) at each order k
    residual: TruncatedSeries  # residual series after solving


def invariance_residual(kind: str, model_input, graph_coefficients, cap: int = DEFAULT_CAP) -> TruncatedSeries:
    """Residual series of the invariance equation for graph sum_k c_k x^k, k >= 2."""
    c = np.zeros(cap + 1)
    coeffs = list(graph_coefficients)
    c[2 : 2 + len(coeffs)] = coeffs[: cap - 1]
    return _residual_fn(kind, model_input, cap)(TruncatedSeries(c, cap))


def solve_invariance_detailed(kind: str, model_input, degree: int = 3, cap: int = DEFAULT_CAP) -> InvarianceSolution:
    if degree < 2:
        raise ValueError("degree must be >= 2")
    cap = max(cap, degree)
    residual = _residual_fn(kind, model_input, cap)
    c = np.zeros(cap + 1)
    slopes = []
    for k in range(2, degree + 1):
        # The order-k residual is affine in c_k once lower orders are fixed.
        c[k] = 0.0
        r0 = residual(TruncatedSeries(c, cap))[k]
        c[k] = 1.0
        r1 = residual(TruncatedSeries(c, cap))[k]
        slope = r1 - r0
        if abs(slope) < 1e-12:
            raise DomainError(f"resonance at order {k}: affine slope {slope:.3e}", field="degree")
        c[k] = -r0 / slope
        slopes.append(slope)
    return InvarianceSolution(kind, tuple(c[2 : degree + 1]), tuple(slopes), residual(TruncatedSeries(c, cap)))


def solve_invariance(kind: str, model_input, degree: int = 3, cap: int = DEFAULT_CAP) -> list[float]:
    """Graph coefficients for degrees 2..degree, found from the residual alone."""
    return list(solve_invariance_detailed(kind, model_input, degree, cap).coefficients)
