"""Initial data for the Cauchy runs.

Two families: closed-form piecewise data for the four builtin example fluxes
(an algebraic tail for x >= 0 glued at u(0) = u_-/2 to an exponential
approach of u_- for x < 0, each decaying at the rates of the corresponding
front but with halved amplitude, so the perturbation is front-shaped and
mass-biased), and profile-sampled data U(x - a) for tracking runs. Every
data object carries analytic descriptions of its tails so mass integrals can
be continued outside a finite grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profile import ShockProfile

__all__ = ["PowerTail", "ExpTail", "PiecewiseFrontData", "ProfileData", "example_data"]


@dataclass(frozen=True)
class PowerTail:
    """C * (a*x + b)**(-r), valid wherever a*x + b > 0."""

    coef: float
    slope: float
    offset: float
    exponent: float

    def __call__(self, x):
        return self.coef * np.power(self.slope * np.asarray(x, dtype=float) + self.offset,
                                    -self.exponent)

    def integral(self, lo: float) -> float | None:
        """integral over [lo, +inf); None when the tail is non-integrable (r <= 1)."""
        if self.exponent <= 1.0:
            return None
        return (self.coef * (self.slope * lo + self.offset) ** (1.0 - self.exponent)
                / (self.slope * (self.exponent - 1.0)))


@dataclass(frozen=True)
class ExpTail:
    """u_ref - C * exp(k*x) for x <= 0 (k > 0)."""

    u_ref: float
    coef: float
    rate: float

    def __call__(self, x):
        return self.u_ref - self.coef * np.exp(self.rate * np.asarray(x, dtype=float))

    def deficit_integral(self, hi: float) -> float:
        """integral of (u_ref - value) over (-inf, hi]."""
        return (self.coef / self.rate) * math.exp(self.rate * hi)


@dataclass(frozen=True)
class PiecewiseFrontData:
    """right(x) for x >= 0, left(x) for x < 0; continuous at 0 by construction."""

    right: PowerTail
    left: ExpTail

    def __post_init__(self):
        r0 = float(self.right(0.0))
        l0 = self.left.u_ref - self.left.coef
        if abs(r0 - l0) > 1e-12 * max(1.0, abs(l0)):
            raise ValueError(f"data branches disagree at x=0: {r0!r} vs {l0!r}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.empty_like(x)
        pos = x >= 0.0
        if pos.any():
            out[pos] = self.right(x[pos])
        if (~pos).any():
            out[~pos] = self.left(x[~pos])
        return float(out[0]) if scalar else out

    @property
    def right_power_tail(self) -> PowerTail:
        return self.right

    @property
    def left_exp_tail(self) -> ExpTail:
        return self.left


def example_data(example_id: int, m: float) -> PiecewiseFrontData:
    """Closed-form initial data matched to builtin example flux #example_id.

    All four assume mu = 1 and u_minus = 1; the m-range validity is the
    harness's job.
    """
    if example_id == 1:
        right = PowerTail(0.5, (1.0 - m) / m, 1.0, 1.0 / (1.0 - m))
        left = ExpTail(1.0, 0.5, 1.0 / m)
    elif example_id == 2:
        right = PowerTail(0.5, (4.0 + 2.0 * m) * (1.0 - m) / m, 1.0, 1.0 / (1.0 - m))
        left = ExpTail(1.0, 0.5, (4.0 + 2.0 * m) / m)
    elif example_id == 3:
        right = PowerTail(0.5, (4.0 - 2.0 * m) / m, 1.0, 1.0 / (2.0 - m))
        left = ExpTail(1.0, 0.5, 2.0 / m)
    elif example_id == 4:
        right = PowerTail(0.5, 3.0, 1.0, 2.0 / 3.0)
        left = ExpTail(1.0, 0.5, 2.0)
    else:
        raise ValueError(f"unknown builtin example id {example_id}")
    return PiecewiseFrontData(right=right, left=left)


@dataclass(frozen=True)
class ProfileData:
    """u0(x) = U(x - shift): exact front samples for tracking runs."""

    profile: ShockProfile
    shift: float = 0.0

    def __call__(self, x):
        return self.profile.eval(np.asarray(x, dtype=float) - self.shift)

    @property
    def left_exp_tail(self) -> ExpTail:
        b, lam = self.profile.left_tail
        # u0 = u_minus - B*exp(lam*(x - shift - xi_star))
        return ExpTail(self.profile.model.u_minus,
                       b * math.exp(-lam * (self.shift + self.profile.xi_star)), lam)

    @property
    def right_power_tail(self) -> PowerTail:
        a, q = self.profile.right_tail
        # A*(x - shift - xi_star)**q as a PowerTail (offset may be negative,
        # but the tail is only used for x beyond the table end, where it is not)
        return PowerTail(a, 1.0, -(self.shift + self.profile.xi_star), -q)
