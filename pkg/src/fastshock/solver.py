"""Positivity-preserving explicit finite-volume scheme for

    u_t + f(u)_x = mu * (u**m)_xx

on a uniform cell-centered grid. Advection uses the local Lax-Friedrichs
flux F = (f(u_j) + f(u_j+1))/2 - a*(u_j+1 - u_j)/2 with a the larger local
|f'|; diffusion is the centered second difference of v = u**m; time stepping
is forward Euler under the combined CFL bound

    dt <= SAFETY * min( dx / max|f'(u)| ,  dx^2 / (2*mu*m*max u**(m-1)) ).

Boundary ghost cells are frozen at the initial data's values. The singular
diffusivity makes u = 0 unreachable in exact arithmetic but roundoff is not
trusted: cells are clipped from below at a fixed floor and every clip is
charged to the step's mass ledger.

Millions of steps per run make numpy dispatch the real cost, so the step is
written against preallocated workspace buffers and fractional powers are kept
to one log and one exp pass: u**m = exp(m*log u), and flux exponents are
decomposed as p = a + b*m with integer a, b wherever possible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .flux import FluxModel

__all__ = [
    "Grid1D", "SolverState", "StepReport",
    "NonPositiveDataError", "CFLViolationError", "BlowUpError",
    "init_state", "stable_dt", "step", "advance_to",
]

SAFETY = 0.4


class NonPositiveDataError(ValueError):
    """Initial data must be strictly positive on the grid."""


class CFLViolationError(ValueError):
    """Requested dt exceeds the stable bound for the current state."""


class BlowUpError(FloatingPointError):
    """A step produced non-finite cell values."""


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centered grid on [x_left, x_right] with n_cells cells."""

    x_left: float
    x_right: float
    n_cells: int

    def __post_init__(self):
        if not self.x_left < self.x_right:
            raise ValueError(f"empty interval [{self.x_left}, {self.x_right}]")
        if self.n_cells < 16:
            raise ValueError(f"n_cells must be at least 16, got {self.n_cells}")

    @property
    def dx(self) -> float:
        return (self.x_right - self.x_left) / self.n_cells

    def centers(self) -> np.ndarray:
        return self.x_left + (np.arange(self.n_cells) + 0.5) * self.dx


class _Workspace:
    """Reused step buffers; padded arrays have the two ghost cells attached."""

    def __init__(self, n: int):
        pad = n + 2
        self.u_pad = np.empty(pad)
        self.logu = np.empty(pad)
        self.um = np.empty(pad)
        self.f = np.empty(pad)
        self.fp = np.empty(pad)
        self.tmp = np.empty(pad)
        self.iface = np.empty(pad - 1)
        self.itmp = np.empty(pad - 1)
        self.u_new = np.empty(n)
        self.pows: dict = {}


class _FluxKernel:
    """Vectorized f and |f'| sharing the single log/exp pass of each step."""

    def __init__(self, model: FluxModel):
        self.m = model.m
        self.mu = model.mu
        self.f_int: list[tuple[float, int, int]] = []
        self.f_frac: list[tuple[float, float]] = []
        self.fp_int: list[tuple[float, int, int]] = []
        self.fp_frac: list[tuple[float, float]] = []
        for c, p in model.terms:
            ab = self._decompose(p)
            if ab is None:
                self.f_frac.append((c, p))
            else:
                self.f_int.append((c, ab[0], ab[1]))
            if p == 0.0:
                continue
            ab = self._decompose(p - 1.0)
            if ab is None:
                self.fp_frac.append((c * p, p - 1.0))
            else:
                self.fp_int.append((c * p, ab[0], ab[1]))

    def _decompose(self, p: float):
        for b in range(0, 5):
            a = p - b * self.m
            r = round(a)
            if abs(a - r) <= 1e-12 * max(1.0, abs(p)) and -4 <= r <= 12:
                return int(r), b
        return None

    def _ipow(self, ws: _Workspace, tag: str, base: np.ndarray, k: int):
        """u**k (or um**k) into a reused buffer; None stands for all-ones."""
        if k == 0:
            return None
        if k == 1:
            return base
        if k < 0:
            pos = self._ipow(ws, tag, base, -k)
            buf = ws.pows.setdefault((tag, k), np.empty_like(base))
            np.divide(1.0, pos, out=buf)
            return buf
        lower = self._ipow(ws, tag, base, k - 1)
        buf = ws.pows.setdefault((tag, k), np.empty_like(base))
        np.multiply(lower if lower is not None else 1.0, base, out=buf)
        return buf

    def _eval_into(self, parts_int, parts_frac, ws: _Workspace, out: np.ndarray):
        started = False
        for c, a, b in parts_int:
            pa = self._ipow(ws, "u", ws.u_pad, a)
            pb = self._ipow(ws, "m", ws.um, b)
            if pa is None and pb is None:
                term = None
            elif pa is None:
                term = pb
            elif pb is None:
                term = pa
            else:
                np.multiply(pa, pb, out=ws.tmp)
                term = ws.tmp
            started = self._accumulate(out, term, c, ws, started)
        for c, p in parts_frac:
            np.multiply(ws.logu, p, out=ws.tmp)
            np.exp(ws.tmp, out=ws.tmp)
            started = self._accumulate(out, ws.tmp, c, ws, started)
        if not started:
            out.fill(0.0)

    @staticmethod
    def _accumulate(out, term, c, ws, started):
        if term is None:                 # constant contribution c
            if started:
                out += c
            else:
                out.fill(c)
            return True
        if not started:
            np.multiply(term, c, out=out)
            return True
        if c == 1.0:
            out += term
        elif c == -1.0:
            out -= term
        else:
            np.multiply(term, c, out=ws.tmp)
            out += ws.tmp
        return True

    def fields(self, ws: _Workspace) -> None:
        """From ws.u_pad (positive), fill ws.logu, ws.um, ws.f, ws.fp = |f'|."""
        np.log(ws.u_pad, out=ws.logu)
        np.multiply(ws.logu, self.m, out=ws.um)
        np.exp(ws.um, out=ws.um)
        self._eval_into(self.f_int, self.f_frac, ws, ws.f)
        self._eval_into(self.fp_int, self.fp_frac, ws, ws.fp)
        np.abs(ws.fp, out=ws.fp)


@dataclass
class SolverState:
    """Cell values plus everything a step needs; mutated in place by step.

    The cell array is double-buffered: after a step, state.u is a different
    array object and the previous one becomes scratch. Hold copies, not
    references, across steps.
    """

    grid: Grid1D
    model: FluxModel
    u: np.ndarray
    t: float
    bc: tuple[float, float]          # frozen ghost values (left, right)
    floor: float
    clip_total: float = 0.0          # cumulative mass added by floor clips
    boundary_flux_total: float = 0.0
    steps_taken: int = 0
    _kernel: _FluxKernel | None = field(default=None, repr=False)
    _ws: _Workspace | None = field(default=None, repr=False)

    def __post_init__(self):
        self.u = np.ascontiguousarray(self.u, dtype=float)
        if self._kernel is None:
            self._kernel = _FluxKernel(self.model)
        if self._ws is None:
            self._ws = _Workspace(self.u.size)

    def mass(self) -> float:
        return float(self.u.sum()) * self.grid.dx


@dataclass(frozen=True)
class StepReport:
    dt_used: float
    cfl_adv: float
    cfl_diff: float
    mass_change: float
    boundary_flux_integral: float
    clip_correction: float


def init_state(grid: Grid1D, data: Callable, model: FluxModel,
               floor: float | None = None) -> SolverState:
    """Sample the data at cell centers; freeze ghosts at the ghost centers.

    The default floor is half the data value at the right edge, the smallest
    value the scheme should meet up to transients.
    """
    x = grid.centers()
    u0 = np.asarray(data(x), dtype=float).copy()
    if u0.shape != x.shape:
        raise NonPositiveDataError("data must return one value per cell center")
    if not np.all(np.isfinite(u0)) or not np.all(u0 > 0.0):
        raise NonPositiveDataError("initial data must be finite and strictly positive")
    bc = (float(data(grid.x_left - 0.5 * grid.dx)),
          float(data(grid.x_right + 0.5 * grid.dx)))
    if not (bc[0] > 0.0 and bc[1] > 0.0):
        raise NonPositiveDataError("ghost values must be strictly positive")
    if floor is None:
        floor = 0.5 * float(data(grid.x_right))
    if not floor > 0.0:
        raise NonPositiveDataError(f"floor must be positive, got {floor}")
    return SolverState(grid=grid, model=model, u=u0, t=0.0, bc=bc, floor=floor)


def _prepare(state: SolverState) -> tuple[float, float, float]:
    """Fill the workspace from the current state; return (stable_dt, amax, dcoef)."""
    ws = state._ws
    ws.u_pad[0], ws.u_pad[-1] = state.bc
    ws.u_pad[1:-1] = state.u
    state._kernel.fields(ws)
    dx = state.grid.dx
    amax = float(ws.fp.max())
    # u**(m-1) is decreasing in u: its max sits at the smallest (floored) value
    umin = float(ws.u_pad.min())
    dcoef = state.model.mu * state.model.m * umin ** (state.model.m - 1.0)
    dt_adv = dx / amax if amax > 0.0 else math.inf
    dt_diff = dx * dx / (2.0 * dcoef) if dcoef > 0.0 else math.inf
    return SAFETY * min(dt_adv, dt_diff), amax, dcoef


def _finish(state: SolverState, dt: float, amax: float, dcoef: float) -> StepReport:
    """Apply one update of size dt from the prepared workspace."""
    ws = state._ws
    dx = state.grid.dx
    # combined interface flux G = (f_l+f_r)/2 - a*(u_r-u_l)/2 - mu*(v_r-v_l)/dx
    np.maximum(ws.fp[:-1], ws.fp[1:], out=ws.itmp)
    np.subtract(ws.u_pad[1:], ws.u_pad[:-1], out=ws.iface)
    ws.iface *= ws.itmp
    ws.iface *= -0.5
    np.add(ws.f[:-1], ws.f[1:], out=ws.itmp)
    ws.itmp *= 0.5
    ws.iface += ws.itmp
    np.subtract(ws.um[1:], ws.um[:-1], out=ws.itmp)
    ws.itmp *= state.model.mu / dx
    ws.iface -= ws.itmp
    np.subtract(ws.iface[1:], ws.iface[:-1], out=ws.u_new)
    ws.u_new *= -(dt / dx)
    ws.u_new += state.u

    s_old = float(state.u.sum())
    s_pre = float(ws.u_new.sum())
    np.maximum(ws.u_new, state.floor, out=ws.u_new)
    s_post = float(ws.u_new.sum())
    if not (math.isfinite(s_pre) and math.isfinite(s_post)):
        raise BlowUpError(f"non-finite cell values at t = {state.t:.6g}")
    clip_corr = (s_post - s_pre) * dx
    bf = dt * float(ws.iface[0] - ws.iface[-1])

    state.u, ws.u_new = ws.u_new, state.u   # double buffer swap
    state.t += dt
    state.clip_total += clip_corr
    state.boundary_flux_total += bf
    state.steps_taken += 1
    return StepReport(dt_used=dt, cfl_adv=amax * dt / dx,
                      cfl_diff=2.0 * dcoef * dt / (dx * dx),
                      mass_change=(s_post - s_old) * dx,
                      boundary_flux_integral=bf, clip_correction=clip_corr)


def stable_dt(state: SolverState) -> float:
    """Largest dt the explicit step accepts from this state."""
    return _prepare(state)[0]


def step(state: SolverState, dt: float) -> StepReport:
    """Advance one forward-Euler step of size dt (checked against stable_dt)."""
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    dt_max, amax, dcoef = _prepare(state)
    if dt > dt_max * (1.0 + 1e-9):
        raise CFLViolationError(f"dt = {dt:.3e} exceeds stable_dt = {dt_max:.3e}")
    return _finish(state, dt, amax, dcoef)


def advance_to(state: SolverState, t_end: float,
               observer: Callable[[SolverState], None] | None = None,
               cadence: float | None = None) -> list[float]:
    """March to t_end with dt = min(stable_dt, gap to the next observation).

    Observations happen at start + k*cadence (k = 1, 2, ...) and at t_end;
    the state's clock is snapped exactly onto each observation time. Returns
    the observation times.
    """
    if t_end < state.t:
        raise ValueError(f"t_end = {t_end} is before current t = {state.t}")
    if cadence is not None and not cadence > 0.0:
        raise ValueError("cadence must be positive")
    t0 = state.t
    times: list[float] = []
    if cadence is not None:
        n = int(math.floor((t_end - t0) / cadence + 1e-9))
        times = [t0 + k * cadence for k in range(1, n + 1)]
    if not times or times[-1] < t_end - 1e-9 * max(1.0, abs(t_end)):
        times.append(t_end)
    else:
        times[-1] = t_end
    snap = 1e-12 * max(1.0, abs(t_end))
    for t_obs in times:
        while state.t < t_obs - snap:
            dt_max, amax, dcoef = _prepare(state)
            _finish(state, min(dt_max, t_obs - state.t), amax, dcoef)
        state.t = t_obs
        if observer is not None:
            observer(state)
    return times
