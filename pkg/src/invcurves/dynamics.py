"""The map family x[n+1] = alpha + beta*x[n-1] + x[n-1]/x[n].

States are pairs ``(y, z) = (x[n-1], x[n])`` so the recurrence becomes the
planar map ``T(y, z) = (z, alpha + beta*y + y/z)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

REL_TOL = 1e-12


class DomainError(ValueError):
    """Raised when an input lies outside the domain of an operation."""

    def __init__(self, message: str, field: str | None = None, index: int | None = None):
        super().__init__(message)
        self.field = field
        self.index = index


@dataclass(frozen=True)
class Params:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha >= 0.0):
            raise DomainError(f"alpha must be >= 0, got {self.alpha}", field="alpha")
        if not (math.isfinite(self.beta) and 0.0 <= self.beta < 1.0):
            raise DomainError(f"beta must lie in [0, 1), got {self.beta}", field="beta")


@dataclass(frozen=True)
class State:
    y: float
    z: float

    def __post_init__(self):
        for name in ("y", "z"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"state coordinate {name} must be finite and > 0, got {v}", field=name)

    def as_tuple(self) -> tuple[float, float]:
        return (self.y, self.z)


@dataclass(frozen=True)
class PeriodicPair:
    """A period-two solution {phi, psi, phi, ...} of the alpha = 1 equation."""

    phi: float
    psi: float
    beta: float

    def __post_init__(self):
        if not 0.0 <= self.beta < 1.0:
            raise DomainError(f"beta must lie in [0, 1), got {self.beta}", field="beta")
        lower = 1.0 / (1.0 - self.beta)
        if not (self.phi > lower and self.psi > lower):
            raise DomainError(
                f"both members of a period-two pair must exceed 1/(1-beta) = {lower}", field="phi"
            )
        expected = self.phi / ((1.0 - self.beta) * self.phi - 1.0)
        if abs(self.psi - expected) > 1e-12 * abs(expected):
            raise DomainError(f"psi={self.psi} is not the partner of phi={self.phi}", field="psi")

    @property
    def params(self) -> Params:
        return Params(1.0, self.beta)

    def swapped(self) -> "PeriodicPair":
        return PeriodicPair(self.psi, self.phi, self.beta)


def validate_params(alpha: float, beta: float) -> Params:
    return Params(float(alpha), float(beta))


def fixed_point(p: Params) -> float:
    return (1.0 + p.alpha) / (1.0 - p.beta)


def periodic_partner(phi: float, beta: float) -> PeriodicPair:
    """Return the pair (phi, psi) with psi = phi / ((1-beta)*phi - 1).

    Only defined for ``phi > 1/(1-beta)``; below that no positive partner exists.
    """
    if not 0.0 <= beta < 1.0:
        raise DomainError(f"beta must lie in [0, 1), got {beta}", field="beta")
    if not phi > 1.0 / (1.0 - beta):
        raise DomainError(
            f"phi must exceed 1/(1-beta) = {1.0 / (1.0 - beta)}, got {phi}", field="phi"
        )
    psi = phi / ((1.0 - beta) * phi - 1.0)
    return PeriodicPair(float(phi), psi, float(beta))


def _as_state(s) -> State:
    return s if isinstance(s, State) else State(*s)


def step_T(p: Params, s) -> State:
    s = _as_state(s)
    return State(s.z, p.alpha + p.beta * s.y + s.y / s.z)


def step_T2(p: Params, s) -> State:
    """Two steps of the map, written out as one explicit composition."""
    s = _as_state(s)
    y, z = s.y, s.z
    first = p.alpha + p.beta * y + y / z
    return State(first, p.alpha + p.beta * z + z / first)


def iterate_trajectory(p: Params, s0, n: int) -> list[State]:
    """Return ``[s0, T(s0), ..., T^n(s0)]``.

    Raises DomainError carrying the failing index as soon as an iterate
    leaves the open positive quadrant or overflows.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}", field="n")
    out = [_as_state(s0)]
    cur = out[0]
    for k in range(1, n + 1):
        try:
            cur = step_T(p, cur)
        except (DomainError, ZeroDivisionError, OverflowError) as exc:
            raise DomainError(f"iterate {k} left the positive quadrant: {exc}", index=k) from exc
        out.append(cur)
    return out
