"""Weighted-norm diagnostics for front stability runs.

The front is unique only up to translation, so a run is compared against the
member of the family with matching excess mass: the zero-mass shift x0
solves integral(u0(x) - U(x + x0)) dx = 0 and is frozen at t = 0. The
antiderivative of the perturbation,

    phi(xi, t) = integral_{-inf}^{xi} (u(x, t) - U(x - s*t + x0)) dx,

is the quantity the energy estimates control, through either of two
equivalent shapes: a singular form N built from phi_xx/U, phi_x/U and
phi/U**m (non-degenerate; the degenerate variant replaces the last term by
the norm with weight w(U) = U*(U - u_-)/g(U)), and a bracket form with
polynomial weights <xi>_+**alpha whose exponents are calibrated to the tail
rates. Grid sums are trapezoid rules; integrals outside the grid are
continued analytically with the tail descriptions carried by the profile and
the initial data.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._quadrature import integrate_interval
from .flux import ShockClassification, ShockKind, g_eval
from .initial_data import ExpTail, ProfileData
from .profile import ShockProfile
from .solver import Grid1D, SolverState

__all__ = [
    "NonFiniteWeightError", "WeightKind", "WeightSpec", "weight_exponents",
    "zero_mass_shift", "phi_field", "weighted_norm", "compute_N",
    "sup_error", "max_slope", "NRecord", "DiagnosticsRecord", "DiagnosticsSeries",
]

log = logging.getLogger(__name__)


class NonFiniteWeightError(ValueError):
    """A weight evaluation produced non-finite (or non-positive) values."""


class WeightKind(str, Enum):
    BRACKET_PLUS = "bracket_plus"    # <xi>_+**alpha: 1 for xi <= 0, (1+xi^2)^(alpha/2) else
    PROFILE_W = "profile_w"          # w(U) = U*(U - u_minus)/g(U)
    INVERSE_U = "inverse_u"          # U(xi)**(-power)


@dataclass(frozen=True)
class WeightSpec:
    kind: WeightKind
    alpha: float = 0.0
    power: float = 1.0

    def __post_init__(self):
        if self.kind == WeightKind.BRACKET_PLUS and self.alpha < 0.0:
            raise ValueError("bracket weight needs alpha >= 0")
        if self.kind == WeightKind.INVERSE_U and not self.power > 0.0:
            raise ValueError("inverse-U weight needs power > 0")

    def evaluate(self, xi: np.ndarray, profile: ShockProfile | None = None) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if self.kind == WeightKind.BRACKET_PLUS:
            return np.where(xi > 0.0, np.power(1.0 + xi * xi, 0.5 * self.alpha), 1.0)
        if profile is None:
            raise ValueError(f"{self.kind.value} weight needs a profile")
        u = profile.eval(xi)
        with np.errstate(over="ignore"):  # overflow is caught and reported below
            if self.kind == WeightKind.PROFILE_W:
                w = profile_weight(profile, u)
            else:
                w = np.power(u, -self.power)
        if not np.all(np.isfinite(w)):
            raise NonFiniteWeightError(f"{self.kind.value} weight overflowed on this window")
        return w


def profile_weight(profile: ShockProfile, u) -> np.ndarray:
    """w(U) = U*(U - u_minus)/g(U): positive on (0, u_minus) since g < 0 there."""
    model = profile.model
    s = profile.classification.speed
    u = np.asarray(u, dtype=float)
    w = u * (u - model.u_minus) / g_eval(model, s, u)
    return float(w) if w.ndim == 0 else w


def weight_exponents(classification: ShockClassification, m: float) -> dict[str, float]:
    """Tail-calibrated polynomial weight exponents for the bracket norms."""
    if classification.kind == ShockKind.NON_DEGENERATE:
        om = 1.0 - m
        return {"alpha1": 2.0 / om, "alpha2": 2.0 * m / om,
                "alpha3": (3.0 - m) / om, "alpha4": (1.0 + m) / om}
    k = classification.k_eff
    den = k + 1.0 - m
    return {"beta1": 2.0 / den, "beta2": k / den, "beta3": (3.0 - m) / den}


def _left_difference_integral(left_tail: ExpTail | None, profile: ShockProfile,
                              hi: float, xi_hi: float | None = None) -> float:
    """integral of (u_data - U_shifted) over (-inf, hi] via the exp tails."""
    if xi_hi is None:
        xi_hi = hi
    data_part = left_tail.deficit_integral(hi) if left_tail is not None else 0.0
    return profile.integral_left_deficit(xi_hi) - data_part


def _right_difference_integral(data, profile: ShockProfile, lo: float) -> float | None:
    """integral of (u_data - U) over [lo, +inf) at t = 0, or None if divergent."""
    if isinstance(data, ProfileData) and data.profile is profile:
        a = data.shift
        if a == 0.0:
            return 0.0
        amp, q = profile.right_tail
        delta = profile.xi_star
        cut = profile.xi_right + max(a, 0.0) + 1.0

        def closed(x):
            # integral over [x, inf) of A*((y-a-delta)^q - (y-delta)^q) dy;
            # the antiderivative difference vanishes at infinity for q < 0
            return -(amp / (q + 1.0)) * ((x - a - delta) ** (q + 1.0)
                                         - (x - delta) ** (q + 1.0))

        if lo >= cut:
            return closed(lo)
        numeric = integrate_interval(lambda y: data(y) - profile.eval(y), lo, cut,
                                     tol=1e-12, panels=64, geometric=lo > 0.0)
        return numeric + closed(cut)

    pt = getattr(data, "right_power_tail", None)
    i_data = pt.integral(lo) if pt is not None else None
    i_prof = profile.integral_right(lo)
    if i_data is None or i_prof is None:
        return None
    return i_data - i_prof


def zero_mass_shift(state0: SolverState, profile: ShockProfile, data) -> float:
    """x0 with integral(u0 - U(. + x0)) = 0, from grid trapezoid + tail integrals.

    When a tail difference is non-integrable (builtin data whose right tail
    decays like x**(-r) with r <= 1) the correction is dropped and its probed
    partial integral is logged; the grid part still dominates.
    """
    x = state0.grid.centers()
    dx = state0.grid.dx
    w = state0.u - profile.eval(x)
    core = float(np.trapezoid(w, dx=dx))
    total = core + _left_difference_integral(getattr(data, "left_exp_tail", None),
                                             profile, float(x[0]))
    right = _right_difference_integral(data, profile, float(x[-1]))
    if right is None:
        lo = float(x[-1])
        probe = integrate_interval(lambda y: data(y) - profile.eval(y),
                                   lo, 10.0 * max(lo, 1.0), tol=1e-9,
                                   panels=64, geometric=lo > 0.0)
        log.warning("zero_mass_shift: right tail difference is non-integrable; "
                    "dropping the correction (partial integral to 10*x_right: %.3e)",
                    probe)
    else:
        total += right
    return total / (profile.model.u_plus - profile.model.u_minus)


def _shifted_fields(state: SolverState, profile: ShockProfile, s: float, x0: float):
    x = state.grid.centers()
    xi = x - s * state.t + x0
    u_sh = profile.eval(xi)
    return x, xi, u_sh, state.u - u_sh


def phi_field(state: SolverState, profile: ShockProfile, s: float, x0: float,
              left_tail: ExpTail | None = None) -> np.ndarray:
    """phi at cell centers: left tail integral plus cumulative trapezoid.

    ``left_tail`` describes the data outside the left boundary (ghosts are
    frozen, so the initial tail persists there); None treats u as exactly
    u_minus beyond the boundary.
    """
    x, xi, u_sh, w = _shifted_fields(state, profile, s, x0)
    dx = state.grid.dx
    phi0 = _left_difference_integral(left_tail, profile, float(x[0]), xi_hi=float(xi[0]))
    phi = np.empty_like(w)
    phi[0] = phi0
    phi[1:] = phi0 + np.cumsum(0.5 * (w[1:] + w[:-1]) * dx)
    return phi


@dataclass(frozen=True)
class NRecord:
    """One evaluation of the singular-form functional and its bracket twin."""

    kind: str                    # "N1" (non-degenerate) or "N2" (degenerate)
    value: float
    term_phixx: float
    term_phix: float
    term_phi: float
    bracket_value: float
    bracket_ratio: float


def compute_N(state: SolverState, profile: ShockProfile, s: float, x0: float,
              classification: ShockClassification | None = None,
              left_tail: ExpTail | None = None) -> NRecord:
    """Singular-form N and the tail-calibrated bracket form, in one pass.

    N1 = ||phi_xx/U||^2 + ||phi_x/U||^2 + ||phi/U**m||^2 (non-degenerate);
    N2 swaps the last term for ||phi||^2 with weight w(U). The bracket form
    uses <xi>_+**a with a = alpha1/alpha1/alpha2 (or beta1/beta1/beta2).
    phi_xx is one centered difference of the field u - U_shifted, not two
    discrete derivatives of phi.
    """
    if classification is None:
        classification = profile.classification
    x, xi, u_sh, w = _shifted_fields(state, profile, s, x0)
    dx = state.grid.dx
    phi = phi_field(state, profile, s, x0, left_tail)
    phi_x = w
    phi_xx = np.empty_like(w)
    phi_xx[1:-1] = (w[2:] - w[:-2]) / (2.0 * dx)
    phi_xx[0] = (w[1] - w[0]) / dx
    phi_xx[-1] = (w[-1] - w[-2]) / dx

    m = profile.model.m
    t_xx = float(np.sum((phi_xx / u_sh) ** 2) * dx)
    t_x = float(np.sum((phi_x / u_sh) ** 2) * dx)
    if classification.kind == ShockKind.NON_DEGENERATE:
        kind = "N1"
        t_phi = float(np.sum((phi / np.power(u_sh, m)) ** 2) * dx)
    else:
        kind = "N2"
        t_phi = float(np.sum(profile_weight(profile, u_sh) * phi * phi) * dx)
    value = t_xx + t_x + t_phi

    exps = weight_exponents(classification, m)
    a_high = exps.get("alpha1", exps.get("beta1"))
    a_low = exps.get("alpha2", exps.get("beta2"))
    w_high = WeightSpec(WeightKind.BRACKET_PLUS, alpha=a_high).evaluate(xi)
    w_low = WeightSpec(WeightKind.BRACKET_PLUS, alpha=a_low).evaluate(xi)
    bracket = float(np.sum(w_high * (phi_xx ** 2 + phi_x ** 2)) * dx
                    + np.sum(w_low * phi ** 2) * dx)
    if value > 0.0:
        ratio = bracket / value
    else:
        ratio = 0.0 if bracket == 0.0 else math.inf
    return NRecord(kind=kind, value=value, term_phixx=t_xx, term_phix=t_x,
                   term_phi=t_phi, bracket_value=bracket, bracket_ratio=ratio)


def weighted_norm(values: np.ndarray, weight: WeightSpec, grid: Grid1D, *,
                  profile: ShockProfile | None = None, s: float = 0.0,
                  t: float = 0.0, x0: float = 0.0) -> float:
    """sqrt( sum_j weight(xi_j) * values_j^2 * dx ), xi_j = x_j - s*t + x0."""
    values = np.asarray(values, dtype=float)
    xi = grid.centers() - s * t + x0
    wv = weight.evaluate(xi, profile)
    with np.errstate(over="ignore"):  # overflow is caught and reported below
        total = float(np.sum(wv * values * values) * grid.dx)
    if not math.isfinite(total):
        raise NonFiniteWeightError("weighted norm overflowed")
    return math.sqrt(total)


def sup_error(state: SolverState, profile: ShockProfile, s: float, x0: float) -> float:
    """max_j |u_j - U(x_j - s*t + x0)|."""
    _, _, u_sh, w = _shifted_fields(state, profile, s, x0)
    return float(np.max(np.abs(w)))


def max_slope(state: SolverState) -> float:
    """max_j |u_{j+1} - u_j| / dx (front steepness on the grid)."""
    return float(np.max(np.abs(np.diff(state.u)))) / state.grid.dx


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    sup_error: float
    n_kind: str
    n_value: float
    n_term_phixx: float
    n_term_phix: float
    n_term_phi: float
    n_bracket: float
    bracket_ratio: float
    mass: float
    max_slope: float
    x0: float


@dataclass
class DiagnosticsSeries:
    """Time-ordered diagnostics records with a fixed CSV column layout."""

    x0: float
    records: list[DiagnosticsRecord] = field(default_factory=list)

    COLUMNS = ("t", "sup_error", "n_kind", "n_value", "n_term_phixx",
               "n_term_phix", "n_term_phi", "n_bracket", "bracket_ratio",
               "mass", "max_slope", "x0")

    def append(self, rec: DiagnosticsRecord) -> None:
        if self.records and not rec.t > self.records[-1].t:
            raise ValueError(f"record times must increase: {rec.t} after {self.records[-1].t}")
        self.records.append(rec)

    def column(self, name: str) -> list:
        return [getattr(r, name) for r in self.records]

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(self.COLUMNS) + "\n")
            for r in self.records:
                cells = []
                for name in self.COLUMNS:
                    v = getattr(r, name)
                    cells.append(v if isinstance(v, str) else repr(float(v)))
                fh.write(",".join(cells) + "\n")
