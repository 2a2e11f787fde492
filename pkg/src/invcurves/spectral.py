"""Linearisations and normal forms.

Two linearisations are handled here: T at its saddle (xb, xb), and T^2 at a
period-two point (phi, psi) of the alpha = 1 equation.  In both cases the
translated map F is conjugated by the eigenvector matrix P into a diagonal
linear part plus nonlinearities (f, g):

    P^{-1} F(P w) = diag(l1, l2) w + (f(w), g(w))

The nonlinearities are coded from their closed rational forms with plain
arithmetic operators, so the same functions accept floats or truncated
power series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics import DomainError, Params, PeriodicPair, fixed_point

SINGULAR_DET = 1e-14

Matrix = tuple[tuple[float, float], tuple[float, float]]
Vec = tuple[float, float]


class PreconditionError(DomainError):
    """Raised when a construction needs a spectrum it was not given."""


@dataclass(frozen=True)
class SpectrumT:
    params: Params
    x_bar: float
    theta: float
    lambda1: float
    lambda2: float
    v1: Vec
    v2: Vec
    basis: Matrix
    saddle: bool

    @property
    def jacobian(self) -> Matrix:
        return jacobian_T(self.params)


@dataclass(frozen=True)
class SpectrumT2:
    pair: PeriodicPair
    lambda01: float
    lambda02: float
    v01: Vec
    v02: Vec
    basis0: Matrix

    @property
    def jacobian(self) -> Matrix:
        return jacobian_T2(self.pair)

    @property
    def stable(self) -> bool:
        return 0.0 < self.lambda01 < 1.0


def jacobian_T(p: Params) -> Matrix:
    xb = fixed_point(p)
    return ((0.0, 1.0), (p.beta + 1.0 / xb, -1.0 / xb))


def jacobian_T2(pair: PeriodicPair) -> Matrix:
    # Unreduced form, before eliminating beta with 1/phi + 1/psi = 1 - beta.
    ph, ps, b = pair.phi, pair.psi, pair.beta
    return (
        (b + 1.0 / ps, -ph / ps**2),
        (-(b * ps + 1.0) / ph**2, b + 1.0 / ph + 1.0 / (ps * ph)),
    )


def spectrum_T(p: Params) -> SpectrumT:
    xb = fixed_point(p)
    theta = math.sqrt(1.0 + 4.0 * xb + 4.0 * p.beta * xb * xb)
    l1 = (-1.0 - theta) / (2.0 * xb)
    l2 = (-1.0 + theta) / (2.0 * xb)
    v1 = (-2.0 * xb / (1.0 + theta), 1.0)
    v2 = (-2.0 * xb / (1.0 - theta), 1.0)
    basis = ((v1[0], v2[0]), (v1[1], v2[1]))
    # At alpha = 1 the expanding eigenvalue is exactly -1; keep rounding out of the flag.
    saddle = abs(l1) > 1.0 + 1e-12 and abs(l2) < 1.0
    return SpectrumT(p, xb, theta, l1, l2, v1, v2, basis, saddle)


def spectrum_T2(pair: PeriodicPair) -> SpectrumT2:
    ph, ps = pair.phi, pair.psi
    l01 = (1.0 - 1.0 / ph) * (1.0 - 1.0 / ps)
    v01 = (ph**2 / ((ph - 1.0) * ps), 1.0)
    v02 = (-(ph**2) / ps**2, 1.0)
    basis0 = ((v01[0], v02[0]), (v01[1], v02[1]))
    return SpectrumT2(pair, l01, 1.0, v01, v02, basis0)


def det2(m: Matrix) -> float:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def inverse2(m: Matrix) -> Matrix:
    d = det2(m)
    if abs(d) < SINGULAR_DET:
        raise DomainError(f"singular 2x2 matrix (det = {d:.3e})", field="basis")
    return ((m[1][1] / d, -m[0][1] / d), (-m[1][0] / d, m[0][0] / d))


def matvec(m: Matrix, w) -> Vec:
    return (m[0][0] * w[0] + m[0][1] * w[1], m[1][0] * w[0] + m[1][1] * w[1])


def change_basis(basis: Matrix, w, direction: str = "to-normal") -> Vec:
    """Map between original offsets (u, v) and eigen-coordinates (xi, eta).

    ``from-normal`` returns ``basis @ w``; ``to-normal`` applies the inverse.
    """
    if direction == "from-normal":
        if abs(det2(basis)) < SINGULAR_DET:
            raise DomainError("singular basis", field="basis")
        return matvec(basis, w)
    if direction == "to-normal":
        return matvec(inverse2(basis), w)
    raise ValueError(f"unknown direction {direction!r}")


# -- T: translated map and normal form -------------------------------------


def translated_map(p: Params, u: float, v: float) -> Vec:
    """T with the saddle moved to the origin: u = y - xb, v = z - xb."""
    xb = fixed_point(p)
    return (v, p.beta * u + (u - v) / (v + xb))


def fg(sp: SpectrumT, xi, eta):
    beta, xb, th = sp.params.beta, sp.x_bar, sp.theta
    s = xi + eta
    q = ((1.0 + 2.0 * beta * xb) * s * s + th * (xi * xi - eta * eta)) / (s + xb)
    return q * (1.0 / (th * (th - 1.0))), q * (1.0 / (th * (th + 1.0)))


def normal_nonlinearity(p: Params, xi: float, eta: float, sp: SpectrumT | None = None) -> Vec:
    sp = sp or spectrum_T(p)
    if abs(xi + eta + sp.x_bar) < SINGULAR_DET:
        raise DomainError("xi + eta + x_bar vanishes; nonlinearity undefined")
    return fg(sp, xi, eta)


def normal_map(p: Params, xi: float, eta: float, sp: SpectrumT | None = None) -> Vec:
    sp = sp or spectrum_T(p)
    f, g = normal_nonlinearity(p, xi, eta, sp)
    return (sp.lambda1 * xi + f, sp.lambda2 * eta + g)


# -- T^2 at a period-two point ----------------------------------------------


def translated_map2(pair: PeriodicPair, u: float, v: float) -> Vec:
    """T^2 (alpha = 1) with (phi, psi) moved to the origin."""
    ph, ps, b = pair.phi, pair.psi, pair.beta
    first = b * u + (u + ph) / (v + ps) - ph / ps
    second = b * v + (v + ps) ** 2 / (v + ps + (u + ph) * (1.0 + b * v + b * ps)) - ps / ph
    return (first, second)


def zeta(pair: PeriodicPair, xi, eta):
    ph, ps, b = pair.phi, pair.psi, pair.beta
    sp_ = xi + eta + ps
    y_shift = xi * (ph**2 / ((ph - 1.0) * ps)) - eta * (ph**2 / ps**2) + ph
    return sp_ * sp_ / (sp_ + y_shift * (b * xi + b * eta + (1.0 + b * ps))) - ps / ph


def f0g0(pair: PeriodicPair, xi, eta):
    ph, ps = pair.phi, pair.psi
    s = xi + eta
    sp_ = s + ps
    z = zeta(pair, xi, eta)
    f0 = (z - xi * (1.0 / (ph * ps)) - eta * (ph + ps) / (sp_ * ph)
          + s * xi / (sp_ * (ph * (1.0 - ph))))
    g0 = (z - eta * ((ph + ps) / (ph * ps)) - xi / (sp_ * ph)
          + s * eta * ((1.0 - ph) * (ph + ps)) / (sp_ * (ph * ps * ps)))
    return f0 * ((ph - 1.0) / (ps + ph - 1.0)), g0 * (ps / (ps + ph - 1.0))


def normal_nonlinearity2(pair: PeriodicPair, xi: float, eta: float) -> Vec:
    ph, ps, b = pair.phi, pair.psi, pair.beta
    sp_ = xi + eta + ps
    y_shift = ph**2 * xi / ((ph - 1.0) * ps) - ph**2 * eta / ps**2 + ph
    if abs(sp_) < SINGULAR_DET or abs(sp_ + y_shift * (1.0 + b * (xi + eta + ps))) < SINGULAR_DET:
        raise DomainError("vanishing denominator in the T^2 normal form")
    return f0g0(pair, xi, eta)


def normal_map2(pair: PeriodicPair, xi: float, eta: float, sp: SpectrumT2 | None = None) -> Vec:
    sp = sp or spectrum_T2(pair)
    f0, g0 = normal_nonlinearity2(pair, xi, eta)
    return (sp.lambda01 * xi + f0, sp.lambda02 * eta + g0)
