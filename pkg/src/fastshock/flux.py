"""Power-sum flux models and shock classification for

    u_t + f(u)_x = mu * (u**m)_xx,      0 < m < 1,

connecting a left state u_- > 0 to the singular right state u_+ = 0, where
the diffusivity m*u**(m-1) blows up. A monotone front U(x - s*t) exists iff
s is the chord (Rankine-Hugoniot) speed and the chord defect

    g(u) = f(u) - f(u_+) - s*(u - u_+)

is strictly negative between the end states. Classification reads the end
slopes: f'(u_+) < s < f'(u_-) is the non-degenerate case with algebraic
right tail |xi|**(-1/(1-m)); s = f'(u_+) is the degenerate-plus case, whose
tail exponent -1/(k+1-m) is set by the vanishing order k+1 of g at u = 0+.
Fluxes are power sums f(u) = sum_i c_i * u**p_i (real p_i >= 0), which keeps
f', f'' and the convexity diagnostic K(u) = g(u)/u**(2m) analytic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

__all__ = [
    "FluxModel", "ShockKind", "ShockClassification",
    "EntropyReport", "ConvexityReport",
    "InvalidShockError", "DegenerateMinusError",
    "shock_speed", "g_eval", "check_entropy", "classify",
    "k_second_derivative", "check_K_convexity",
]

# |s - f'(0)| below this (relative to max(1, |f'(u_-)|)) counts as degenerate.
DEGENERACY_RTOL = 1e-9
# "holds" tolerance for sampled sign conditions, relative to the sample scale,
# so exactly-zero boundary cases (K'' of f=u**2 at m=1/2) pass.
HOLDS_RTOL = 1e-12
# eps/u_minus values for the log2-ratio fit of the vanishing order of g at 0+.
_K_EFF_FRACTIONS = (1e-4, 1e-5, 1e-6)


class InvalidShockError(ValueError):
    """The entropy condition fails: no monotone front joins the end states."""


class DegenerateMinusError(InvalidShockError):
    """s = f'(u_minus): left-state degeneracy is outside the supported class."""


class ShockKind(str, Enum):
    NON_DEGENERATE = "non-degenerate"
    DEGENERATE_PLUS = "degenerate-plus"


@dataclass(frozen=True)
class FluxModel:
    """f(u) = sum c_i * u**p_i together with the diffusion parameters.

    terms   -- sequence of (coefficient, exponent), exponents real >= 0
    m       -- diffusion exponent, 0 < m < 1
    mu      -- diffusion strength, > 0
    u_minus -- left state, > 0 (right state u_plus is pinned at 0)
    """

    terms: tuple[tuple[float, float], ...]
    m: float
    mu: float = 1.0
    u_minus: float = 1.0
    u_plus: float = 0.0

    def __post_init__(self):
        clean = []
        for item in self.terms:
            c, p = float(item[0]), float(item[1])
            if not (math.isfinite(c) and math.isfinite(p)):
                raise ValueError(f"non-finite flux term ({c}, {p})")
            if p < 0:
                raise ValueError(f"negative flux exponent {p}")
            if c != 0.0:
                clean.append((c, p))
        object.__setattr__(self, "terms", tuple(clean))
        if not self.terms:
            raise ValueError("flux needs at least one term with a nonzero coefficient")
        if not 0.0 < self.m < 1.0:
            raise ValueError(f"m must lie in (0, 1), got {self.m}")
        if not self.mu > 0.0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if not self.u_minus > 0.0:
            raise ValueError(f"u_minus must be positive, got {self.u_minus}")
        if self.u_plus != 0.0:
            raise ValueError("u_plus is pinned at the singular state 0")

    # f and its derivatives. Array arguments are assumed positive (the solver
    # keeps every cell above its floor); the scalar u=0 limits are handled
    # explicitly so classify can look at f'(0+) for fluxes like u**(2m).

    def f(self, u):
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        for c, p in self.terms:
            if p == 0.0:
                out += c
            elif p == 1.0:
                out += c * u
            else:
                out += c * np.power(u, p)
        return float(out) if out.ndim == 0 else out

    def f_prime(self, u):
        if np.ndim(u) == 0 and float(u) == 0.0:
            return self._f_prime_at_zero()
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        for c, p in self.terms:
            if p == 0.0:
                continue
            if p == 1.0:
                out += c
            else:
                out += c * p * np.power(u, p - 1.0)
        return float(out) if out.ndim == 0 else out

    def f_second(self, u):
        if np.ndim(u) == 0 and float(u) == 0.0:
            return self._limit_at_zero(order=2)
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        for c, p in self.terms:
            coef = c * p * (p - 1.0)
            if coef != 0.0:
                out += coef * np.power(u, p - 2.0)
        return float(out) if out.ndim == 0 else out

    def _f_prime_at_zero(self) -> float:
        return self._limit_at_zero(order=1)

    def _limit_at_zero(self, order: int) -> float:
        """lim_{u->0+} of f' (order=1) or f'' (order=2), possibly +-inf."""
        finite = 0.0
        singular = []  # (exponent of u, coefficient)
        for c, p in self.terms:
            if order == 1:
                coef, q = c * p, p - 1.0
            else:
                coef, q = c * p * (p - 1.0), p - 2.0
            if coef == 0.0:
                continue
            if q > 0.0:
                continue
            if q == 0.0:
                finite += coef
            else:
                singular.append((q, coef))
        if singular:
            qmin = min(q for q, _ in singular)
            coef = sum(c for q, c in singular if abs(q - qmin) <= 1e-12 * max(1.0, abs(qmin)))
            if coef != 0.0:
                return math.inf if coef > 0 else -math.inf
        return finite

    def to_dict(self) -> dict:
        return {
            "terms": [[c, p] for c, p in self.terms],
            "m": self.m, "mu": self.mu,
            "u_minus": self.u_minus, "u_plus": self.u_plus,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FluxModel":
        return cls(terms=tuple((float(c), float(p)) for c, p in d["terms"]),
                   m=float(d["m"]), mu=float(d.get("mu", 1.0)),
                   u_minus=float(d.get("u_minus", 1.0)),
                   u_plus=float(d.get("u_plus", 0.0)))


@dataclass(frozen=True)
class ShockClassification:
    """Wave speed, degeneracy type, and the tail rates they imply.

    right_tail_exponent is the algebraic decay power q in U ~ A*xi**q as
    xi -> +inf; lambda_minus is the exponential rate in u_minus - U ~ B*e**(lam*xi)
    as xi -> -inf. k_eff is the fitted vanishing order of g at 0+ minus one
    (present only in the degenerate-plus case).
    """

    speed: float
    kind: ShockKind
    k_eff: float | None
    lambda_minus: float
    right_tail_exponent: float


@dataclass(frozen=True)
class EntropyReport:
    holds: bool
    worst_u: float
    worst_g: float
    tol: float


@dataclass(frozen=True)
class ConvexityReport:
    holds: bool
    min_value: float
    argmin: float
    tol: float
    singular_sign_violation: bool


def shock_speed(model: FluxModel) -> float:
    """Chord speed s = (f(u_plus) - f(u_minus)) / (u_plus - u_minus)."""
    return (model.f(model.u_plus) - model.f(model.u_minus)) / (model.u_plus - model.u_minus)


def g_eval(model: FluxModel, s: float, u):
    """Chord defect g(u) = -s*(u - u_plus) + f(u) - f(u_plus)."""
    return -s * (np.asarray(u, dtype=float) - model.u_plus) + model.f(u) - model.f(model.u_plus)


def _interior_samples(u_minus: float, n_uniform: int, floor_frac: float) -> np.ndarray:
    """Uniform interior grid plus geometric refinement toward both endpoints."""
    base = np.linspace(0.0, u_minus, n_uniform + 2)[1:-1]
    ladder = u_minus * np.geomspace(floor_frac, 0.1, 64)
    pts = np.concatenate([base, ladder, u_minus - ladder])
    pts = pts[(pts > 0.0) & (pts < u_minus)]
    return np.unique(pts)


def check_entropy(model: FluxModel, s: float, n_samples: int = 2000) -> EntropyReport:
    """Sampled check that g < 0 strictly between u_plus and u_minus."""
    if n_samples < 100:
        raise ValueError("n_samples must be at least 100")
    u = _interior_samples(model.u_minus, n_samples, 1e-12)
    gv = g_eval(model, s, u)
    i = int(np.argmax(gv))
    scale = float(np.max(np.abs(gv)))
    tol = HOLDS_RTOL * scale
    # scale == 0 means g vanishes identically (linear flux): a contact, not a front.
    holds = scale > 0.0 and float(gv[i]) <= tol
    return EntropyReport(holds=holds, worst_u=float(u[i]), worst_g=float(gv[i]), tol=tol)


def _fit_vanishing_order(model: FluxModel, s: float) -> float:
    """Effective order p with |g(u)| ~ u**p as u -> 0+, by log2 ratios."""
    ratios = []
    for frac in _K_EFF_FRACTIONS:
        eps = frac * model.u_minus
        g1 = abs(float(g_eval(model, s, eps)))
        g2 = abs(float(g_eval(model, s, 2.0 * eps)))
        if g1 == 0.0 or g2 == 0.0 or not (math.isfinite(g1) and math.isfinite(g2)):
            raise InvalidShockError(
                f"cannot fit the vanishing order of g near 0 (g({eps:g}) = {g1:g})")
        ratios.append(math.log2(g2 / g1))
    return float(np.mean(ratios))


def classify(model: FluxModel, n_samples: int = 2000) -> ShockClassification:
    """Classify the front: speed, degeneracy kind, and both tail rates."""
    s = shock_speed(model)
    entropy = check_entropy(model, s, n_samples)
    if not entropy.holds:
        raise InvalidShockError(
            f"entropy condition fails: g({entropy.worst_u:.6g}) = {entropy.worst_g:.3e} >= 0")
    fp_plus = model.f_prime(model.u_plus)
    fp_minus = model.f_prime(model.u_minus)
    tol = DEGENERACY_RTOL * max(1.0, abs(fp_minus))
    if abs(s - fp_minus) <= tol:
        raise DegenerateMinusError(
            f"s = f'(u_minus) = {s:.6g}: left-degenerate fronts are unsupported")
    m = model.m
    if math.isfinite(fp_plus) and abs(s - fp_plus) <= tol:
        k_eff = _fit_vanishing_order(model, s) - 1.0
        if not k_eff > 0.0:
            raise InvalidShockError(
                f"degenerate front needs g to vanish superlinearly at 0 (k_eff = {k_eff:.3g})")
        kind = ShockKind.DEGENERATE_PLUS
        q = -1.0 / (k_eff + 1.0 - m)
    else:
        # entropy already forces f'(0) <= s <= f'(u_minus); outside the
        # degeneracy tolerance this is the strict Lax inequality.
        kind = ShockKind.NON_DEGENERATE
        k_eff = None
        q = -1.0 / (1.0 - m)
    lam = model.u_minus ** (1.0 - m) * (fp_minus - s) / (model.mu * m)
    return ShockClassification(speed=s, kind=kind, k_eff=k_eff,
                               lambda_minus=lam, right_tail_exponent=q)


def _k_terms(model: FluxModel, s: float) -> list[tuple[float, float]]:
    """Power-sum terms of K(u) = g(u)/u**(2m), merged by exponent."""
    tm = 2.0 * model.m
    acc: dict[float, float] = {}
    def add(c, q):
        acc[q] = acc.get(q, 0.0) + c
    for c, p in model.terms:
        add(c, p - tm)
    add(-s, 1.0 - tm)
    f0 = model.f(0.0)
    if f0 != 0.0:
        add(-f0, -tm)
    return [(c, q) for q, c in acc.items() if c != 0.0]


def k_second_derivative(model: FluxModel, s: float, u):
    """Analytic K''(u) from the term list (exponents 0 and 1 drop exactly)."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    for c, q in _k_terms(model, s):
        coef = c * q * (q - 1.0)
        if coef != 0.0:
            out += coef * np.power(u, q - 2.0)
    return float(out) if out.ndim == 0 else out


def check_K_convexity(model: FluxModel, s: float, n_samples: int = 2000) -> ConvexityReport:
    """Sampled check that K'' >= 0 on (0, u_minus).

    Samples stop at 1e-8*u_minus; below that the sign of the leading singular
    term of K'' is read symbolically from the term list, so a K'' that dives
    to -inf is caught even though no sample sees it.
    """
    if n_samples < 100:
        raise ValueError("n_samples must be at least 100")
    u = _interior_samples(model.u_minus, n_samples, 1e-8)
    vals = k_second_derivative(model, s, u)
    i = int(np.argmin(vals))
    scale = float(np.max(np.abs(vals)))
    tol = HOLDS_RTOL * scale
    singular = [(q, c * q * (q - 1.0)) for c, q in _k_terms(model, s)
                if c * q * (q - 1.0) != 0.0 and q - 2.0 < 0.0]
    violation = False
    if singular:
        qmin = min(q for q, _ in singular)
        lead = sum(cc for q, cc in singular if abs(q - qmin) <= 1e-12 * max(1.0, abs(qmin)))
        violation = lead < 0.0
    holds = (float(vals[i]) >= -tol) and not violation
    return ConvexityReport(holds=holds, min_value=float(vals[i]), argmin=float(u[i]),
                           tol=tol, singular_sign_violation=violation)
