"""Relaxation system and schemes for 1-D scalar viscous conservation laws.

The scalar law u_t + f(u)_x = (mu*phi(u)*u_x)_x is replaced by the hyperbolic
pair U = (u, v):

    u_t + v_x = 0
    v_t + (mu*phi(u)/eps + a^2) u_x = (f(u) - v)/eps

written in conservation form with flux F(U) = (v, (mu/eps)*b(u) + a^2*u),
b' = phi.  Three schemes are provided: a first-order upwind step, the same
with piecewise-linear central-slope reconstruction, and a second-order
IMEX-GRP step (explicit convection, closed-form linear implicit source).
All steps are vectorized over the grid.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

import numpy as np

from .boundary import BoundarySpec, fill_ghosts_scalar, scalar_dirichlet_flux
from .core import Grid1D, RelaxParams, minmod3
from .errors import NonFiniteState, StateOutOfRange, ZeroWaveSpeed

__all__ = [
    "ScalarLaw",
    "burgers_law",
    "ScalarRelaxState",
    "flux_scalar",
    "source_scalar",
    "subchar_check",
    "riemann_upwind_scalar",
    "upwind_step",
    "upwind2_step",
    "imex_grp_step_scalar",
    "wave_speed_scalar",
]


@dataclass(frozen=True)
class ScalarLaw:
    """Pluggable (f, f', b) triple with b' = phi >= 0 and admissible range."""

    f: Callable
    fprime: Callable
    b: Callable
    phi: Callable
    u_range: Tuple[float, float] = (-10.0, 10.0)


def burgers_law(u_range=(-10.0, 10.0)) -> ScalarLaw:
    """Burgers flux f(u) = u^2/2 with unit viscosity profile (phi = 1, b = u)."""
    return ScalarLaw(
        f=lambda u: 0.5 * u * u,
        fprime=lambda u: u,
        b=lambda u: u,
        phi=lambda u: np.ones_like(np.asarray(u, dtype=float)) if np.ndim(u) else 1.0,
        u_range=u_range,
    )


@dataclass
class ScalarRelaxState:
    """Cell data (u, v) plus slopes, with a two-cell ghost margin."""

    grid: Grid1D
    u: np.ndarray
    v: np.ndarray
    ux: np.ndarray
    vx: np.ndarray
    nghost: int = 2

    @property
    def interior(self):
        return np.s_[self.nghost:self.nghost + self.grid.n_cells]

    def copy(self) -> "ScalarRelaxState":
        return ScalarRelaxState(self.grid, self.u.copy(), self.v.copy(),
                                self.ux.copy(), self.vx.copy(), self.nghost)

    @staticmethod
    def from_initial(grid: Grid1D, law: ScalarLaw, p: RelaxParams,
                     u0: Callable, u0prime: Optional[Callable] = None,
                     bc: Optional[Tuple[BoundarySpec, BoundarySpec]] = None,
                     cell_average: bool = False) -> "ScalarRelaxState":
        """Initialize u, the equilibrium v = f(u) - mu*phi(u)*u', and slopes.

        With cell_average=True, u is initialized to 5-point Gauss-Legendre
        cell averages of u0; otherwise to point values at cell centers.
        The slopes are central differences of the initialized cell data.
        """
        g = 2
        n = grid.n_cells
        xs = grid.centers()
        state = ScalarRelaxState(
            grid=grid,
            u=np.zeros(n + 2 * g), v=np.zeros(n + 2 * g),
            ux=np.zeros(n + 2 * g), vx=np.zeros(n + 2 * g), nghost=g)
        if cell_average:
            nodes, weights = np.polynomial.legendre.leggauss(5)
            vals = np.zeros(n)
            for xi, wi in zip(nodes, weights):
                vals += 0.5 * wi * np.asarray(u0(xs + 0.5 * grid.dx * xi), dtype=float)
            state.u[state.interior] = vals
        else:
            state.u[state.interior] = u0(xs)
        if u0prime is not None:
            du = np.asarray(u0prime(xs), dtype=float)
        else:
            up = np.asarray(u0(xs), dtype=float)
            du = np.zeros(n)
            du[1:-1] = (up[2:] - up[:-2]) / (2.0 * grid.dx)
            du[0] = (up[1] - up[0]) / grid.dx
            du[-1] = (up[-1] - up[-2]) / grid.dx
        ui = state.u[state.interior]
        state.v[state.interior] = law.f(ui) - p.mu * law.phi(ui) * du
        if bc is not None:
            fill_ghosts_scalar(state, bc, t=0.0)
            state.ux[state.interior] = (
                state.u[g + 1:g + n + 1] - state.u[g - 1:g + n - 1]) / (2.0 * grid.dx)
            state.vx[state.interior] = (
                state.v[g + 1:g + n + 1] - state.v[g - 1:g + n - 1]) / (2.0 * grid.dx)
            fill_ghosts_scalar(state, bc, t=0.0)
        return state


# ---------------------------------------------------------------------------
# Pointwise operations
# ---------------------------------------------------------------------------

def flux_scalar(U, p: RelaxParams, law: ScalarLaw):
    """F(U) = (v, (mu/eps)*b(u) + a^2*u)."""
    u, v = U
    return v, (p.mu / p.epsilon) * law.b(u) + p.a**2 * u


def source_scalar(U, p: RelaxParams, law: ScalarLaw):
    """H(U) = (0, (f(u) - v)/eps)."""
    u, v = U
    z = np.zeros_like(np.asarray(u, dtype=float)) if np.ndim(u) else 0.0
    return z, (law.f(u) - v) / p.epsilon


def wave_speed_scalar(p: RelaxParams) -> float:
    """Constant signal speed sqrt(mu/eps + a^2) of the frozen 2x2 Jacobian."""
    s2 = p.mu / p.epsilon + p.a**2
    if not s2 > 0:
        raise ZeroWaveSpeed("mu/eps + a^2 vanishes")
    return float(np.sqrt(s2))


def subchar_check(p: RelaxParams, law: ScalarLaw, u_lo: float, u_hi: float,
                  n_samples: int = 2001):
    """Dissipativity margin of f'(u)^2 <= mu*phi(u)/eps + a^2 on [u_lo, u_hi].

    Returns (ok, margin) with margin = min over a dense sample of
    mu*phi/eps + a^2 - f'^2; ok is margin >= 0.
    """
    if u_hi < u_lo:
        raise ValueError("u_lo must not exceed u_hi")
    us = np.linspace(u_lo, u_hi, n_samples)
    margin = float(np.min(p.mu * np.asarray(law.phi(us)) / p.epsilon + p.a**2
                          - np.asarray(law.fprime(us)) ** 2))
    return margin >= 0.0, margin


def riemann_upwind_scalar(Ul, Ur, p: RelaxParams):
    """Interface state of the linear Riemann problem at x/t = 0.

    U* = (Ul+Ur)/2 - M (Ur-Ul) / (2 sqrt(mu/eps+a^2)) with the constant
    Jacobian M = [[0, 1], [mu/eps + a^2, 0]].
    """
    s = wave_speed_scalar(p)
    ul, vl = Ul
    ur, vr = Ur
    u_star = 0.5 * (ul + ur) - 0.5 * (vr - vl) / s
    v_star = 0.5 * (vl + vr) - 0.5 * s * (ur - ul)
    return u_star, v_star


# ---------------------------------------------------------------------------
# Shared update pieces
# ---------------------------------------------------------------------------

def _check_state(u: np.ndarray, v: np.ndarray, law: ScalarLaw):
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise NonFiniteState("non-finite scalar state after update")
    lo, hi = law.u_range
    if np.any(u < lo) or np.any(u > hi):
        j = int(np.argmax((u < lo) | (u > hi)))
        raise StateOutOfRange(f"u left admissible range at cell {j}")


def _implicit_v(v_explicit, f_new, dt_over_eps):
    """Solve v*(1 + dt/eps) = v_explicit + (dt/eps)*f_new in closed form."""
    return (v_explicit + dt_over_eps * f_new) / (1.0 + dt_over_eps)


def _upwind_flux_faces(state: ScalarRelaxState, p, law, with_slopes: bool,
                       bc, t: float, dx: float):
    """Riemann states and fluxes F(U*) at the n+1 faces of the grid."""
    g = state.nghost
    n = state.grid.n_cells
    L = np.s_[g - 1:g + n]
    R = np.s_[g:g + n + 1]
    if with_slopes:
        ul = state.u[L] + 0.5 * dx * state.ux[L]
        vl = state.v[L] + 0.5 * dx * state.vx[L]
        ur = state.u[R] - 0.5 * dx * state.ux[R]
        vr = state.v[R] - 0.5 * dx * state.vx[R]
    else:
        ul, vl = state.u[L], state.v[L]
        ur, vr = state.u[R], state.v[R]
    u_star, v_star = riemann_upwind_scalar((ul, vl), (ur, vr), p)

    left, right = bc
    if left.kind == "dirichlet_scalar":
        ub = left.u_b(t)
        u_star[0], v_star[0] = scalar_dirichlet_flux(state.u[g], ub, p, law, dx)
    elif left.kind == "neumann_scalar":
        u_star[0], v_star[0] = state.u[g], law.f(state.u[g])
    if right.kind == "dirichlet_scalar":
        ub = right.u_b(t)
        u_star[-1], v_star[-1] = scalar_dirichlet_flux(state.u[g + n - 1], ub, p, law, dx, side="right")
    elif right.kind == "neumann_scalar":
        u_star[-1], v_star[-1] = state.u[g + n - 1], law.f(state.u[g + n - 1])

    Fu, Fv = flux_scalar((u_star, v_star), p, law)
    return Fu, Fv


def _central_slopes(state: ScalarRelaxState):
    """(U_{j+1} - U_{j-1}) / (2 dx) for every cell that has both neighbors."""
    dx = state.grid.dx
    state.ux[1:-1] = (state.u[2:] - state.u[:-2]) / (2.0 * dx)
    state.vx[1:-1] = (state.v[2:] - state.v[:-2]) / (2.0 * dx)


# ---------------------------------------------------------------------------
# Scheme steps
# ---------------------------------------------------------------------------

def upwind_step(state: ScalarRelaxState, p: RelaxParams, law: ScalarLaw,
                dt: float, dx: float, bc, t: float = 0.0) -> ScalarRelaxState:
    """First-order step: piecewise-constant data, upwind interface flux,
    backward-Euler source (closed-form linear solve for v)."""
    new = state.copy()
    fill_ghosts_scalar(new, bc, t)
    Fu, Fv = _upwind_flux_faces(new, p, law, with_slopes=False, bc=bc, t=t, dx=dx)
    I = new.interior
    u_new = new.u[I] - (dt / dx) * (Fu[1:] - Fu[:-1])
    v_exp = new.v[I] - (dt / dx) * (Fv[1:] - Fv[:-1])
    v_new = _implicit_v(v_exp, law.f(u_new), dt / p.epsilon)
    _check_state(u_new, v_new, law)
    new.u[I] = u_new
    new.v[I] = v_new
    return new


def upwind2_step(state: ScalarRelaxState, p: RelaxParams, law: ScalarLaw,
                 dt: float, dx: float, bc, t: float = 0.0) -> ScalarRelaxState:
    """Second-order-in-space step: central-slope reconstruction feeding the
    upwind flux, backward-Euler source as in the first-order step."""
    new = state.copy()
    fill_ghosts_scalar(new, bc, t)
    _central_slopes(new)
    fill_ghosts_scalar(new, bc, t)
    Fu, Fv = _upwind_flux_faces(new, p, law, with_slopes=True, bc=bc, t=t, dx=dx)
    I = new.interior
    u_new = new.u[I] - (dt / dx) * (Fu[1:] - Fu[:-1])
    v_exp = new.v[I] - (dt / dx) * (Fv[1:] - Fv[:-1])
    v_new = _implicit_v(v_exp, law.f(u_new), dt / p.epsilon)
    _check_state(u_new, v_new, law)
    new.u[I] = u_new
    new.v[I] = v_new
    return new


def imex_grp_step_scalar(state: ScalarRelaxState, p: RelaxParams,
                         law: ScalarLaw, dt: float, dx: float, bc,
                         t: float = 0.0,
                         limiter_alpha: Optional[float] = None
                         ) -> ScalarRelaxState:
    """Second-order LW-type step with stored slopes.

    Interface Riemann states from reconstructed limits; interface time
    derivatives from the acoustic split of the frozen Jacobian plus the
    implicit-linear source; Crank-Nicolson source in the cell update; slopes
    advanced from the evolved interface values, optionally minmod-limited.
    """
    g = state.nghost
    n = state.grid.n_cells
    s = wave_speed_scalar(p)
    new = state.copy()
    fill_ghosts_scalar(new, bc, t)

    L = np.s_[g - 1:g + n]
    R = np.s_[g:g + n + 1]
    ul = new.u[L] + 0.5 * dx * new.ux[L]
    vl = new.v[L] + 0.5 * dx * new.vx[L]
    ur = new.u[R] - 0.5 * dx * new.ux[R]
    vr = new.v[R] - 0.5 * dx * new.vx[R]
    u_star, v_star = riemann_upwind_scalar((ul, vl), (ur, vr), p)

    # Acoustic split: -R L+ Rinv (U_x)_j - R L- Rinv (U_x)_{j+1} with cell slopes.
    uxL, vxL = new.ux[L], new.vx[L]
    uxR, vxR = new.ux[R], new.vx[R]
    conv_u = -0.5 * (s * (uxL - uxR) + (vxL + vxR))
    conv_v = -0.5 * (s * s * (uxL + uxR) + s * (vxL - vxR))

    # One-sided wall treatment: pin u to the prescribed value, keep only the
    # outgoing characteristic of the interior side, and carry the incoming
    # strength needed to hold u_t = u_b'(t) into the v equation.
    left, right = bc
    wall_left = left.kind in ("dirichlet_scalar", "neumann_scalar")
    wall_right = right.kind in ("dirichlet_scalar", "neumann_scalar")
    if wall_left:
        co_u = -0.5 * (-s * new.ux[g] + new.vx[g])
        co_v = -0.5 * (s * s * new.ux[g] - s * new.vx[g])
        if left.kind == "dirichlet_scalar":
            ub_n, ub_new = left.u_b(t), left.u_b(t + dt)
            ubp = (ub_new - ub_n) / dt
            u_star[0], v_star[0] = scalar_dirichlet_flux(new.u[g], ub_n, p, law, dx)
            conv_u[0] = ubp
            conv_v[0] = co_v + s * (ubp - co_u)
        else:
            u_star[0], v_star[0] = new.u[g], law.f(new.u[g])
            conv_u[0] = co_u
            conv_v[0] = co_v
    if wall_right:
        co_u = -0.5 * (s * new.ux[g + n - 1] + new.vx[g + n - 1])
        co_v = -0.5 * (s * s * new.ux[g + n - 1] + s * new.vx[g + n - 1])
        if right.kind == "dirichlet_scalar":
            ub_n, ub_new = right.u_b(t), right.u_b(t + dt)
            ubp = (ub_new - ub_n) / dt
            u_star[-1], v_star[-1] = scalar_dirichlet_flux(new.u[g + n - 1], ub_n, p, law, dx, side="right")
            conv_u[-1] = ubp
            conv_v[-1] = co_v - s * (ubp - co_u)
        else:
            u_star[-1], v_star[-1] = new.u[g + n - 1], law.f(new.u[g + n - 1])
            conv_u[-1] = co_u
            conv_v[-1] = co_v

    # Mid-point interface values (implicit but linear in v).
    u_mid = u_star + 0.5 * dt * conv_u
    v_mid = _implicit_v(v_star + 0.5 * dt * conv_v, law.f(u_mid),
                        0.5 * dt / p.epsilon)
    if wall_left and left.kind == "dirichlet_scalar":
        u_mid[0] = left.u_b(t + 0.5 * dt)
    if wall_right and right.kind == "dirichlet_scalar":
        u_mid[-1] = right.u_b(t + 0.5 * dt)
    Fu, Fv = flux_scalar((u_mid, v_mid), p, law)

    # Cell update, Crank-Nicolson source.
    I = new.interior
    u_n, v_n = new.u[I], new.v[I]
    u_new = u_n - (dt / dx) * (Fu[1:] - Fu[:-1])
    half = 0.5 * dt / p.epsilon
    v_exp = v_n - (dt / dx) * (Fv[1:] - Fv[:-1]) + half * (law.f(u_n) - v_n)
    v_new = _implicit_v(v_exp, law.f(u_new), half)
    _check_state(u_new, v_new, law)

    # Slope update from the time-advanced interface values.
    u_minus = u_star + dt * conv_u
    v_minus = _implicit_v(v_star + dt * conv_v, law.f(u_minus), dt / p.epsilon)
    if wall_left and left.kind == "dirichlet_scalar":
        u_minus[0] = left.u_b(t + dt)
    if wall_right and right.kind == "dirichlet_scalar":
        u_minus[-1] = right.u_b(t + dt)
    ux_new = (u_minus[1:] - u_minus[:-1]) / dx
    vx_new = (v_minus[1:] - v_minus[:-1]) / dx

    new.u[I] = u_new
    new.v[I] = v_new
    new.ux[I] = ux_new
    new.vx[I] = vx_new

    if limiter_alpha is not None:
        fill_ghosts_scalar(new, bc, t + dt)
        a = limiter_alpha
        for val, slope in ((new.u, new.ux), (new.v, new.vx)):
            fwd = a * (val[g + 1:g + n + 1] - val[g:g + n]) / dx
            bwd = a * (val[g:g + n] - val[g - 1:g + n - 1]) / dx
            slope[I] = minmod3(fwd, slope[I], bwd)
    return new
