"""Traveling-front construction for u_t + f(u)_x = mu*(u**m)_xx.

In the moving frame xi = x - s*t the profile solves the scalar ODE

    U'(xi) = h(U) = U**(1-m) * g(U) / (mu*m),        U(-inf) = u_-, U(+inf) = 0,

with g the chord defect. Rather than marching the ODE we invert the
separated form xi(U) = integral du/h(u) from the midpoint value
u* = (u_+ + u_-)/2 (normalized to xi = xi_star): U-nodes are log-spaced
toward both end states, the increments are Gauss-Kronrod integrals of 1/h,
and the resulting strictly monotone (xi, U) table is interpolated by a
shape-preserving cubic. Outside the table the front is extended by its
asymptotics, value-matched at the table ends:

    right: U ~ A * (xi - xi_star)**q          (algebraic, q < 0)
    left:  U ~ u_- - B * exp(lam * (xi - xi_star))

with q and lam supplied by the classification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from ._quadrature import QuadratureFailureError, segment_integrals
from .flux import FluxModel, ShockClassification, classify, g_eval

__all__ = [
    "ShockProfile", "DecayFit", "WindowTooNarrowError", "QuadratureFailureError",
    "h_eval", "build_profile", "eval_profile", "profile_slope", "verify_decay",
]


class WindowTooNarrowError(ValueError):
    """A decay-fit window contains fewer than 16 table nodes."""


def h_eval(model: FluxModel, s: float, u):
    """Profile slope field h(u) = u**(1-m) * g(u) / (mu*m)."""
    u = np.asarray(u, dtype=float)
    out = np.power(u, 1.0 - model.m) * g_eval(model, s, u) / (model.mu * model.m)
    return float(out) if out.ndim == 0 else out


@dataclass
class ShockProfile:
    """Tabulated front with matched asymptotic tails. Immutable after build."""

    model: FluxModel
    classification: ShockClassification
    u_star: float
    xi_star: float
    xi: np.ndarray
    u: np.ndarray
    right_tail: tuple[float, float]      # (A, q): U = A*(xi - xi_star)**q
    left_tail: tuple[float, float]       # (B, lam): U = u_- - B*exp(lam*(xi - xi_star))
    _interp: PchipInterpolator = field(repr=False)

    @property
    def xi_left(self) -> float:
        return float(self.xi[0])

    @property
    def xi_right(self) -> float:
        return float(self.xi[-1])

    def eval(self, xi):
        """U(xi) on all of R: table interpolant inside, matched tails outside."""
        xi_arr = np.asarray(xi, dtype=float)
        scalar = xi_arr.ndim == 0
        xi_arr = np.atleast_1d(xi_arr)
        out = np.empty_like(xi_arr)
        lo = xi_arr < self.xi[0]
        hi = xi_arr > self.xi[-1]
        mid = ~(lo | hi)
        if mid.any():
            out[mid] = self._interp(xi_arr[mid])
        if hi.any():
            a, q = self.right_tail
            out[hi] = a * np.power(xi_arr[hi] - self.xi_star, q)
        if lo.any():
            b, lam = self.left_tail
            out[lo] = self.model.u_minus - b * np.exp(lam * (xi_arr[lo] - self.xi_star))
        return float(out[0]) if scalar else out

    def slope(self, xi):
        """U'(xi) = h(U(xi)), exact wherever eval is."""
        return h_eval(self.model, self.classification.speed, self.eval(xi))

    def integral_right(self, a: float) -> float | None:
        """integral of U over [a, +inf), or None when the tail diverges (q >= -1)."""
        amp, q = self.right_tail
        if q >= -1.0:
            return None
        tail_from = max(a, self.xi_right)
        tail = -amp * (tail_from - self.xi_star) ** (q + 1.0) / (q + 1.0)
        if a >= self.xi_right:
            return tail
        anti = self._interp.antiderivative()
        lo = max(a, self.xi_left)
        table = float(anti(self.xi_right) - anti(lo))
        left = 0.0
        if a < self.xi_left:
            # below the table U is within B*e^{lam*xi} of u_minus
            b, lam = self.left_tail
            left = (self.model.u_minus * (self.xi_left - a)
                    - (b / lam) * (math.exp(lam * (self.xi_left - self.xi_star))
                                   - math.exp(lam * (a - self.xi_star))))
        return left + table + tail

    def integral_left_deficit(self, b: float) -> float:
        """integral of (u_minus - U) over (-inf, b]; always convergent."""
        amp, lam = self.left_tail
        tail_to = min(b, self.xi_left)
        tail = (amp / lam) * math.exp(lam * (tail_to - self.xi_star))
        if b <= self.xi_left:
            return tail
        anti = self._interp.antiderivative()
        hi = min(b, self.xi_right)
        table = self.model.u_minus * (hi - self.xi_left) - float(anti(hi) - anti(self.xi_left))
        right = 0.0
        if b > self.xi_right:
            a_r, q = self.right_tail
            right = self.model.u_minus * (b - self.xi_right)
            right -= (a_r / (q + 1.0)) * ((b - self.xi_star) ** (q + 1.0)
                                          - (self.xi_right - self.xi_star) ** (q + 1.0))
        return tail + table + right


def build_profile(model: FluxModel, classification: ShockClassification | None = None, *,
                  u_tail_lo: float | None = None, u_tail_hi: float | None = None,
                  n_nodes: int = 4096, quad_tol: float = 1e-10,
                  xi_star: float = 0.0) -> ShockProfile:
    """Construct the front by quadrature of 1/h between log-spaced U-nodes.

    u_tail_lo / u_tail_hi set where the table hands over to the matched
    tails: the last right node is U = u_tail_lo, the last left node is
    U = u_minus - u_tail_hi (both default to 1e-4*u_minus).
    """
    if classification is None:
        classification = classify(model)
    s = classification.speed
    um = model.u_minus
    if u_tail_lo is None:
        u_tail_lo = 1e-4 * um
    if u_tail_hi is None:
        u_tail_hi = 1e-4 * um
    span = um - model.u_plus
    for name, v in (("u_tail_lo", u_tail_lo), ("u_tail_hi", u_tail_hi)):
        if not 0.0 < v <= 0.25 * span:
            raise ValueError(f"{name} must lie in (0, {0.25 * span:g}], got {v:g}")
    if n_nodes < 16:
        raise ValueError("n_nodes must be at least 16")

    u_star = 0.5 * (model.u_plus + um)

    def inv_h(tau):
        return 1.0 / h_eval(model, s, tau)

    # Right branch: U from u_star down to u_tail_lo; 1/h < 0 and U decreasing,
    # so the xi-increments come out positive.
    edges_r = np.geomspace(u_star, u_tail_lo, n_nodes + 1)
    inc_r = segment_integrals(inv_h, edges_r, tol=quad_tol)
    xi_r = xi_star + np.concatenate(([0.0], np.cumsum(inc_r)))

    # Left branch: distance to u_minus from (u_minus - u_star) down to u_tail_hi.
    edges_l = model.u_minus - np.geomspace(um - u_star, u_tail_hi, n_nodes + 1)
    inc_l = segment_integrals(inv_h, edges_l, tol=quad_tol)
    xi_l = xi_star + np.concatenate(([0.0], np.cumsum(inc_l)))

    xi = np.concatenate([xi_l[:0:-1], [xi_star], xi_r[1:]])
    u = np.concatenate([edges_l[:0:-1], [u_star], edges_r[1:]])
    if not np.all(np.diff(xi) > 0.0):
        raise QuadratureFailureError("xi table is not strictly increasing; "
                                     "h is too close to 0 inside the state interval")

    q = classification.right_tail_exponent
    amp_r = float(u[-1] / (xi[-1] - xi_star) ** q)
    lam = classification.lambda_minus
    amp_l = float((um - u[0]) * math.exp(-lam * (xi[0] - xi_star)))

    interp = PchipInterpolator(xi, u, extrapolate=False)
    return ShockProfile(model=model, classification=classification,
                        u_star=u_star, xi_star=xi_star, xi=xi, u=u,
                        right_tail=(amp_r, q), left_tail=(amp_l, lam),
                        _interp=interp)


def eval_profile(profile: ShockProfile, xi):
    return profile.eval(xi)


def profile_slope(profile: ShockProfile, xi):
    return profile.slope(xi)


@dataclass(frozen=True)
class DecayFit:
    """Least-squares tail rates from table nodes, against the predicted ones."""

    q_fit: float
    q_theory: float
    rel_err_q: float
    lambda_fit: float
    lambda_theory: float
    rel_err_lambda: float
    n_right: int
    n_left: int


def verify_decay(profile: ShockProfile,
                 right_window: tuple[float, float] | None = None,
                 left_window: tuple[float, float] | None = None) -> DecayFit:
    """Fit both tail rates from the table (never from the tail formulas).

    Right: slope of log U vs log(xi - xi_star) -> q_fit. Left: slope of
    log(u_minus - U) vs xi -> lambda_fit (positive). Default windows take the
    last decade of approach to each end state. Windows with fewer than 16
    table nodes raise WindowTooNarrowError.
    """
    xi, u = profile.xi, profile.u
    rel = xi - profile.xi_star
    um = profile.model.u_minus

    if right_window is None:
        mask_r = (u <= 10.0 * u[-1]) & (rel > 0.0)
    else:
        a, b = right_window
        if not (a < b and a >= profile.xi_left and b <= profile.xi_right):
            raise ValueError("right_window must lie inside the tabulated range")
        mask_r = (xi >= a) & (xi <= b) & (rel > 0.0)
    if int(mask_r.sum()) < 16:
        raise WindowTooNarrowError(f"right fit window has {int(mask_r.sum())} nodes (< 16)")

    deficit = um - u
    if left_window is None:
        mask_l = (deficit <= 10.0 * deficit[0]) & (deficit > 0.0)
    else:
        a, b = left_window
        if not (a < b and a >= profile.xi_left and b <= profile.xi_right):
            raise ValueError("left_window must lie inside the tabulated range")
        mask_l = (xi >= a) & (xi <= b) & (deficit > 0.0)
    if int(mask_l.sum()) < 16:
        raise WindowTooNarrowError(f"left fit window has {int(mask_l.sum())} nodes (< 16)")

    q_fit = float(np.polyfit(np.log(rel[mask_r]), np.log(u[mask_r]), 1)[0])
    lambda_fit = float(np.polyfit(xi[mask_l], np.log(deficit[mask_l]), 1)[0])

    q_theory = profile.classification.right_tail_exponent
    lambda_theory = profile.classification.lambda_minus
    return DecayFit(
        q_fit=q_fit, q_theory=q_theory,
        rel_err_q=abs(q_fit - q_theory) / abs(q_theory),
        lambda_fit=lambda_fit, lambda_theory=lambda_theory,
        rel_err_lambda=abs(lambda_fit - lambda_theory) / abs(lambda_theory),
        n_right=int(mask_r.sum()), n_left=int(mask_l.sum()),
    )
