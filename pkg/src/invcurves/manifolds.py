"""Closed-form local manifolds and their traced zero sets.

Each model is a cubic implicit polynomial in the original (x[n-1], x[n])
plane:

    F(x, y) = A*dx + B*dy + q*(C*dx + E*dy)**2 + c*(C*dx + E*dy)**3

with (dx, dy) measured from the base point.  The four linear weights come
from inverting the eigenvector basis; q and c are the graph coefficients,
carrying the signs with which they appear in the printed polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import Params, PeriodicPair
from .spectral import PreconditionError, SpectrumT, SpectrumT2, spectrum_T, spectrum_T2

NEWTON_TOL = 1e-12
NEWTON_MAXITER = 50


@dataclass(frozen=True)
class ManifoldModel:
    kind: str  # "unstable" | "stable" | "center"
    base: tuple[float, float]
    linear_constants: tuple[float, float, float]  # gamma1..3 or delta1..3
    coeff2: float  # a2 | b2 | c2
    coeff3: float  # a3 | b3 | c3
    tangent_slope: float
    spectrum: SpectrumT | SpectrumT2 = field(repr=False, compare=False)

    @property
    def weights(self) -> tuple[float, float, float, float]:
        """(A, B, C, E): linear part A*dx + B*dy and bracket C*dx + E*dy."""
        k1, k2, k3 = self.linear_constants
        if self.kind == "stable":
            return (k1, k3, k1, -k2)
        return (k1, -k2, k1, k3)

    @property
    def quadratic(self) -> float:
        """Coefficient multiplying the squared bracket (note -b2 for stable)."""
        return -self.coeff2 if self.kind == "stable" else self.coeff2

    @property
    def cubic(self) -> float:
        return self.coeff3


def _require_saddle(p: Params) -> SpectrumT:
    sp = spectrum_T(p)
    if not sp.saddle:
        raise PreconditionError(
            f"(alpha={p.alpha}, beta={p.beta}) does not give a saddle: "
            f"|lambda1|={abs(sp.lambda1):.6g}, |lambda2|={abs(sp.lambda2):.6g}"
        )
    return sp


def _gammas(sp: SpectrumT) -> tuple[float, float, float]:
    th, xb, b = sp.theta, sp.x_bar, sp.params.beta
    return (-(1.0 + b * xb) / th, (th - 1.0) / (2.0 * th), (th + 1.0) / (2.0 * th))


def unstable_model(p: Params) -> ManifoldModel:
    sp = _require_saddle(p)
    th, xb, b = sp.theta, sp.x_bar, p.beta
    l1, l2 = sp.lambda1, sp.lambda2
    k = 1.0 + 2.0 * b * xb
    a2 = (1.0 + th + 2.0 * b * xb) / (th * (th + 1.0) * (l1**2 - l2) * xb)
    a3 = a2 / ((l1**3 - l2) * xb) * (
        l2 - l1**2 - k / (th * xb) * (1.0 / l1 + l1 / l2) - l1 / (l2 * xb)
    )
    slope = -(1.0 + th) / (2.0 * xb)
    return ManifoldModel("unstable", (xb, xb), _gammas(sp), a2, a3, slope, sp)


def stable_model(p: Params) -> ManifoldModel:
    sp = _require_saddle(p)
    th, xb, b = sp.theta, sp.x_bar, p.beta
    l1, l2 = sp.lambda1, sp.lambda2
    k = 1.0 + 2.0 * b * xb
    b2 = (1.0 - th + 2.0 * b * xb) / (th * (th - 1.0) * (l2**2 - l1) * xb)
    # the cubed eigenvalue in the prefactor is the contracting one, l2
    b3 = b2 / ((l2**3 - l1) * xb) * (
        l1 - l2**2 + k / (th * xb) * (1.0 / l2 + l2 / l1) - l2 / (l1 * xb)
    )
    slope = 2.0 * xb / (th - 1.0)
    return ManifoldModel("stable", (xb, xb), _gammas(sp), b2, b3, slope, sp)


def center_model(pair: PeriodicPair) -> ManifoldModel:
    """Invariant curve through (phi, psi); call with ``pair.swapped()`` for the companion."""
    if not isinstance(pair, PeriodicPair):
        raise PreconditionError("center_model needs a PeriodicPair")
    sp = spectrum_T2(pair)
    ph, ps = pair.phi, pair.psi
    s = ph + ps - 1.0
    deltas = (ps**2 * (ph - 1.0) / (ph**2 * s), ps / s, (ph - 1.0) / s)

    k1 = 3 * ps**2 - 4 * ps + 1
    k2 = 3 * ps**3 - 12 * ps**2 + 9 * ps - 1
    k3 = 5 * ps**3 - 14 * ps**2 + 6 * ps + 1
    k4 = 2 * ps**3 - 4 * ps**2 + ps + 1
    k5 = ph**2 * (3 * ps**2 - 3 * ps + 1) - ph * (3 * ps**2 - 5 * ps + 2) + (ps - 1) ** 2

    c2 = ph / ((1.0 - ph) * s * (2.0 * ph * ps - ph - ps + 1.0))
    c3 = (ph**4 * k1 + ph**3 * k2 - ph**2 * k3 + k4 * ph) / (ps * s * (1.0 - ph) * k5) * c2
    slope = ps * (ph - 1.0) / ph**2
    return ManifoldModel("center", (ph, ps), deltas, c2, c3, slope, sp)


def eval_manifold(m: ManifoldModel, x, y):
    """Value of the implicit cubic; its zero set is the local manifold."""
    A, B, C, E = m.weights
    dx, dy = x - m.base[0], y - m.base[1]
    w = C * dx + E * dy
    return A * dx + B * dy + m.quadratic * w**2 + m.cubic * w**3


def eval_manifold_grad(m: ManifoldModel, x, y):
    A, B, C, E = m.weights
    w = C * (x - m.base[0]) + E * (y - m.base[1])
    dw = 2.0 * m.quadratic * w + 3.0 * m.cubic * w**2
    return A + dw * C, B + dw * E


def tangent_slope(m: ManifoldModel) -> float:
    """Slope of the graph at the base: dy/dx, except dx/dy for the stable curve x(y)."""
    return m.tangent_slope


def printed_form(m: ManifoldModel) -> dict:
    """Expanded coefficients in the layout of the hand-written polynomials.

    ``lin_x*x + lin_const + lin_y*y + quad*(br_x*x + br_const + br_y*y)**2
    + cubic*(...)**3``
    """
    A, B, C, E = m.weights
    x0, y0 = m.base
    return {
        "lin_x": A,
        "lin_const": -(A * x0 + B * y0),
        "lin_y": B,
        "quad": m.quadratic,
        "br_x": C,
        "br_const": -(C * x0 + E * y0),
        "br_y": E,
        "cubic": m.cubic,
    }


def _term(v: float, digits: int) -> str:
    return f"{'-' if v < 0 else '+'} {abs(v):.{digits}g}"


def format_polynomial(m: ManifoldModel, digits: int = 10) -> str:
    pf = printed_form(m)
    lin = f"{pf['lin_x']:.{digits}g}*x {_term(pf['lin_const'], digits)} {_term(pf['lin_y'], digits)}*y"
    br = f"({pf['br_x']:.{digits}g}*x {_term(pf['br_const'], digits)} {_term(pf['br_y'], digits)}*y)"
    return f"{lin} {_term(pf['quad'], digits)}*{br}^2 {_term(pf['cubic'], digits)}*{br}^3"


# -- tracing ----------------------------------------------------------------


@dataclass(frozen=True)
class CurveTrace:
    points: tuple[tuple[float, float], ...]
    max_residual: float
    model: ManifoldModel = field(repr=False)
    gaps: tuple[float, ...] = ()

    @property
    def xs(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    @property
    def ys(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])

    @property
    def complete(self) -> bool:
        return not self.gaps


def solve_y(m: ManifoldModel, x: float, y0: float,
            tol: float = NEWTON_TOL, maxiter: int = NEWTON_MAXITER) -> tuple[float, float, bool]:
    """Newton solve of eval_manifold(m, x, y) = 0 in y, halving steps that raise |F|.

    Returns (y, |residual|, converged).
    """
    y = y0
    r = eval_manifold(m, x, y)
    for _ in range(maxiter):
        if abs(r) <= tol:
            return y, abs(r), True
        d = eval_manifold_grad(m, x, y)[1]
        if d == 0.0 or not math.isfinite(d):
            break
        step = r / d
        for _ in range(30):
            y_new = y - step
            r_new = eval_manifold(m, x, y_new)
            if math.isfinite(r_new) and abs(r_new) < abs(r):
                break
            step *= 0.5
        else:
            break
        y, r = y_new, r_new
    return y, abs(r), abs(r) <= tol


def trace_curve(m: ManifoldModel, x_lo: float, x_hi: float, n: int) -> CurveTrace:
    """Zero set of the model sampled at n evenly spaced x in [x_lo, x_hi].

    Marches outward from the sample nearest the base point, starting on the
    tangent line there and predicting each next y from the previous solution.
    Samples where Newton fails are reported as gaps rather than raised.
    """
    if not x_lo < x_hi:
        raise ValueError("x_lo must be < x_hi")
    if n < 2:
        raise ValueError("need at least 2 samples")
    xs = np.linspace(x_lo, x_hi, n)
    x0, y0 = m.base
    start = int(np.argmin(np.abs(xs - x0)))

    ys = np.full(n, np.nan)
    res = np.full(n, np.inf)
    ok = np.zeros(n, dtype=bool)
    slope0 = 1.0 / m.tangent_slope if m.kind == "stable" else m.tangent_slope

    def march(indices):
        prev_x, prev_y, slope = x0, y0, slope0
        for i in indices:
            guess = prev_y + slope * (xs[i] - prev_x)
            y, r, conv = solve_y(m, xs[i], guess)
            ys[i], res[i], ok[i] = y, r, conv
            if conv:
                dx, dy = eval_manifold_grad(m, xs[i], y)
                if dy != 0.0:
                    slope = -dx / dy
                prev_x, prev_y = xs[i], y

    march(range(start, n))
    march(range(start - 1, -1, -1))

    points = tuple((float(xs[i]), float(ys[i])) for i in range(n) if ok[i])
    gaps = tuple(float(xs[i]) for i in range(n) if not ok[i])
    max_res = float(res[ok].max()) if ok.any() else math.inf
    return CurveTrace(points, max_res, m, gaps)


def default_window(m: ManifoldModel, radius: float = 0.5) -> tuple[float, float]:
    return (m.base[0] - radius, m.base[0] + radius)


def curve_y_at(trace: CurveTrace, x: float) -> tuple[float, bool]:
    """y on the traced curve at x, refined by Newton from the interpolated trace."""
    xs, ys = trace.xs, trace.ys
    if len(xs) == 0 or x < xs[0] or x > xs[-1]:
        return math.nan, False
    y, _, conv = solve_y(trace.model, x, float(np.interp(x, xs, ys)))
    return y, conv
