"""Exact and benchmark solutions, independent oracles, and error norms.

Everything here is deliberately discretization-independent from the main
solvers (different stencils and time integrators), so agreement between a
solver and an oracle is evidence rather than tautology.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .core import Grid1D, Grid2D, RelaxParams
from .errors import (
    BlowUp,
    GridMismatch,
    MissingResource,
    NonPhysicalState,
    SchemaError,
    ShootingNoConvergence,
    VacuumFormation,
)

__all__ = [
    "ErrorReport",
    "BenchmarkCurve",
    "burgers_exact",
    "burgers_initial",
    "mms_fields",
    "mms_forcing",
    "euler_exact_riemann",
    "blasius_profile",
    "fd_oracle_burgers",
    "fd_oracle_ns1",
    "error_norms",
    "observed_order",
    "load_ghia_reference",
    "ghia_data_path",
]


# ---------------------------------------------------------------------------
# Report types
# ---------------------------------------------------------------------------

@dataclass
class ErrorReport:
    """L1/Linf error norms of one run at one resolution."""

    l1: float
    linf: float
    n_cells: int
    observed_order_l1: Optional[float] = None
    observed_order_linf: Optional[float] = None


@dataclass
class BenchmarkCurve:
    """A labelled 1-D profile with strictly monotone abscissa."""

    x: np.ndarray
    y: np.ndarray
    label: str = ""

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.y = np.asarray(self.y, dtype=float)
        if self.x.shape != self.y.shape or self.x.ndim != 1:
            raise ValueError("curve arrays must be 1-D and matching")
        if not np.all(np.diff(self.x) > 0):
            raise ValueError("abscissa must be strictly monotone increasing")

    def sample(self, xq):
        return np.interp(xq, self.x, self.y)


# ---------------------------------------------------------------------------
# Viscous Burgers wall-bounded smooth solution
# ---------------------------------------------------------------------------

def burgers_exact(x, t, mu):
    """u(x,t) = 2 mu pi sin(pi x) e^{-pi^2 mu t} / (2 + e^{-pi^2 mu t} cos(pi x))."""
    decay = np.exp(-np.pi**2 * mu * t)
    return 2.0 * mu * np.pi * np.sin(np.pi * x) * decay / (2.0 + decay * np.cos(np.pi * x))


def burgers_initial(x, mu):
    """The t=0 profile 2 mu pi sin(pi x) / (2 + cos(pi x)) and its x-derivative."""
    s, c = np.sin(np.pi * x), np.cos(np.pi * x)
    u0 = 2.0 * mu * np.pi * s / (2.0 + c)
    du0 = 2.0 * mu * np.pi**2 * (2.0 * c + 1.0) / (2.0 + c) ** 2
    return u0, du0


# ---------------------------------------------------------------------------
# Manufactured 2-D Navier-Stokes solution
# ---------------------------------------------------------------------------

def mms_fields(x, y, t):
    """Primitive fields (rho, uX, uY, p) of the manufactured solution.

    rho = 1 + 0.2 sin(pi (x + y - 2t)), unit velocities, unit pressure.
    Continuity, momentum, and the viscous stress residuals vanish identically;
    only heat conduction acting on T = 1/rho leaves a residual.
    """
    phase = np.pi * (np.asarray(x, dtype=float) + y - 2.0 * t)
    rho = 1.0 + 0.2 * np.sin(phase)
    one = np.ones_like(rho)
    return rho, one, one.copy(), one.copy()


def mms_forcing(x, y, t, p: RelaxParams):
    """Analytic residual of the manufactured fields: energy component only.

    s_E = -div(kappa grad T) with T = 1/rho; returns (4,)-leading axis arrays
    (zero rows for mass and momentum).
    """
    phase = np.pi * (np.asarray(x, dtype=float) + y - 2.0 * t)
    rho = 1.0 + 0.2 * np.sin(phase)
    rho_x = 0.2 * np.pi * np.cos(phase)         # same for the y-derivative
    rho_xx = -0.2 * np.pi**2 * np.sin(phase)
    lap_T = 2.0 * (-rho_xx / rho**2 + 2.0 * rho_x**2 / rho**3)
    s_E = -p.kappa * lap_T
    z = np.zeros_like(s_E)
    return np.stack([z, z, z, s_E])


# ---------------------------------------------------------------------------
# Exact Riemann solution of the Euler equations
# ---------------------------------------------------------------------------

def _pressure_fn(pstar, rho, pk, a, gamma):
    """Toro's f_K(p) and its derivative for one side of the Riemann problem."""
    if pstar > pk:  # shock
        A = 2.0 / ((gamma + 1.0) * rho)
        B = (gamma - 1.0) / (gamma + 1.0) * pk
        root = np.sqrt(A / (pstar + B))
        f = (pstar - pk) * root
        df = root * (1.0 - 0.5 * (pstar - pk) / (pstar + B))
    else:  # rarefaction
        f = 2.0 * a / (gamma - 1.0) * ((pstar / pk) ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)
        df = (pstar / pk) ** (-(gamma + 1.0) / (2.0 * gamma)) / (rho * a)
    return f, df


def _star_state(priml, primr, gamma):
    rhol, ul, pl = priml
    rhor, ur, pr = primr
    if min(rhol, rhor, pl, pr) <= 0:
        raise NonPhysicalState("Riemann input states must have rho, p > 0")
    al = np.sqrt(gamma * pl / rhol)
    ar = np.sqrt(gamma * pr / rhor)
    if 2.0 * (al + ar) / (gamma - 1.0) <= ur - ul:
        raise VacuumFormation("pressure function has no positive root")
    # Primitive-variable guess, clipped away from zero.
    p0 = 0.5 * (pl + pr) - 0.125 * (ur - ul) * (rhol + rhor) * (al + ar)
    p0 = max(p0, 1e-8 * min(pl, pr))
    pstar = p0
    for _ in range(80):
        fl, dfl = _pressure_fn(pstar, rhol, pl, al, gamma)
        fr, dfr = _pressure_fn(pstar, rhor, pr, ar, gamma)
        delta = (fl + fr + (ur - ul)) / (dfl + dfr)
        pnew = pstar - delta
        if pnew <= 0:
            pnew = 0.5 * pstar
        if abs(pnew - pstar) <= 1e-12 * max(pnew, 1e-300):
            pstar = pnew
            break
        pstar = pnew
    fl, _ = _pressure_fn(pstar, rhol, pl, al, gamma)
    fr, _ = _pressure_fn(pstar, rhor, pr, ar, gamma)
    ustar = 0.5 * (ul + ur) + 0.5 * (fr - fl)
    return pstar, ustar, al, ar


def euler_exact_riemann(priml, primr, gamma, xi):
    """Exact Euler Riemann solution (rho, u, p) sampled at xi = x/t.

    priml/primr are (rho, u, p).  Accepts scalar or array xi.
    """
    rhol, ul, pl = priml
    rhor, ur, pr = primr
    pstar, ustar, al, ar = _star_state(priml, primr, gamma)
    xi = np.asarray(xi, dtype=float)
    scalar_in = xi.ndim == 0
    xi = np.atleast_1d(xi)
    rho = np.empty_like(xi)
    u = np.empty_like(xi)
    p = np.empty_like(xi)

    gm1, gp1 = gamma - 1.0, gamma + 1.0
    left = xi <= ustar
    # --- left side of the contact ---
    if pstar > pl:  # left shock
        sl = ul - al * np.sqrt(gp1 / (2 * gamma) * pstar / pl + gm1 / (2 * gamma))
        rho_sl = rhol * ((pstar / pl + gm1 / gp1) / (gm1 / gp1 * pstar / pl + 1.0))
        m = left & (xi < sl)
        rho[m], u[m], p[m] = rhol, ul, pl
        m = left & (xi >= sl)
        rho[m], u[m], p[m] = rho_sl, ustar, pstar
    else:  # left rarefaction
        astar = al * (pstar / pl) ** (gm1 / (2 * gamma))
        head, tail = ul - al, ustar - astar
        m = left & (xi < head)
        rho[m], u[m], p[m] = rhol, ul, pl
        m = left & (xi >= head) & (xi <= tail)
        if np.any(m):
            afan = (2.0 / gp1) * (al + 0.5 * gm1 * (ul - xi[m]))
            u[m] = (2.0 / gp1) * (al + 0.5 * gm1 * ul + xi[m])
            rho[m] = rhol * (afan / al) ** (2.0 / gm1)
            p[m] = pl * (afan / al) ** (2 * gamma / gm1)
        m = left & (xi > tail)
        rho[m] = rhol * (pstar / pl) ** (1.0 / gamma)
        u[m], p[m] = ustar, pstar
    # --- right side of the contact ---
    rightm = ~left
    if pstar > pr:  # right shock
        sr = ur + ar * np.sqrt(gp1 / (2 * gamma) * pstar / pr + gm1 / (2 * gamma))
        rho_sr = rhor * ((pstar / pr + gm1 / gp1) / (gm1 / gp1 * pstar / pr + 1.0))
        m = rightm & (xi > sr)
        rho[m], u[m], p[m] = rhor, ur, pr
        m = rightm & (xi <= sr)
        rho[m], u[m], p[m] = rho_sr, ustar, pstar
    else:  # right rarefaction
        astar = ar * (pstar / pr) ** (gm1 / (2 * gamma))
        head, tail = ur + ar, ustar + astar
        m = rightm & (xi > head)
        rho[m], u[m], p[m] = rhor, ur, pr
        m = rightm & (xi >= tail) & (xi <= head)
        if np.any(m):
            afan = (2.0 / gp1) * (ar - 0.5 * gm1 * (ur - xi[m]))
            u[m] = (2.0 / gp1) * (-ar + 0.5 * gm1 * ur + xi[m])
            rho[m] = rhor * (afan / ar) ** (2.0 / gm1)
            p[m] = pr * (afan / ar) ** (2 * gamma / gm1)
        m = rightm & (xi < tail)
        rho[m] = rhor * (pstar / pr) ** (1.0 / gamma)
        u[m], p[m] = ustar, pstar

    if scalar_in:
        return float(rho[0]), float(u[0]), float(p[0])
    return rho, u, p


# ---------------------------------------------------------------------------
# Blasius similarity profile
# ---------------------------------------------------------------------------

def _blasius_integrate(fpp0: float, eta_max: float, n_steps: int, order: int = 4):
    """Integrate f''' = -f f''/2 with f(0)=f'(0)=0, f''(0)=fpp0.

    Returns arrays (eta, f, fp) using classic RK4 (order=4) or midpoint RK2
    (order=2, used as the independent verification integrator).
    """
    h = eta_max / n_steps
    y = np.array([0.0, 0.0, fpp0])

    def rhs(yv):
        return np.array([yv[1], yv[2], -0.5 * yv[0] * yv[2]])

    etas = np.linspace(0.0, eta_max, n_steps + 1)
    out = np.empty((n_steps + 1, 3))
    out[0] = y
    for i in range(n_steps):
        if order == 4:
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * h * k1)
            k3 = rhs(y + 0.5 * h * k2)
            k4 = rhs(y + h * k3)
            y = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        else:
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * h * k1)
            y = y + h * k2
        out[i + 1] = y
    return etas, out[:, 0], out[:, 1]


def blasius_profile(eta_max: float = 10.0, n_points: int = 2001,
                    order: int = 4):
    """Blasius curves f'(eta) and (eta f' - f)/2 by shooting on f''(0).

    The wall-normal velocity law is V sqrt(Re_x) / U_inf = (eta f' - f)/2.
    Raises ShootingNoConvergence if the bisection bracket fails.
    """
    if eta_max < 8.0:
        raise ValueError("eta_max must be at least 8 for a converged far field")
    n_steps = max(n_points - 1, 800)

    def residual(k):
        _, _, fp = _blasius_integrate(k, eta_max, n_steps, order=order)
        return fp[-1] - 1.0

    lo, hi = 0.1, 0.7
    rlo, rhi = residual(lo), residual(hi)
    if rlo * rhi > 0:
        raise ShootingNoConvergence("no sign change in the shooting bracket")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        rm = residual(mid)
        if rlo * rm <= 0:
            hi, rhi = mid, rm
        else:
            lo, rlo = mid, rm
        if hi - lo < 1e-13:
            break
    else:
        raise ShootingNoConvergence("bisection failed to converge")
    k = 0.5 * (lo + hi)
    etas, f, fp = _blasius_integrate(k, eta_max, n_steps, order=order)
    idx = np.linspace(0, n_steps, n_points).astype(int)
    u_curve = BenchmarkCurve(etas[idx], fp[idx], label="U/U_inf vs eta")
    v_curve = BenchmarkCurve(etas[idx], 0.5 * (etas[idx] * fp[idx] - f[idx]),
                             label="V sqrt(Re_x)/U_inf vs eta")
    return u_curve, v_curve


# ---------------------------------------------------------------------------
# Finite-difference oracles (different discretization family on purpose)
# ---------------------------------------------------------------------------

def fd_oracle_burgers(u0: np.ndarray, mu: float, dx: float, t_end: float,
                      bc: str = "dirichlet0", f=None, fprime=None):
    """FTCS oracle for u_t + f(u)_x = mu u_xx on a node grid.

    u0 holds node values with spacing dx (boundary nodes included for the
    Dirichlet case).  Second-order central differences in space, forward
    Euler in time with the parabolic step 0.25*min(dx^2/mu, dx/max|u|).
    """
    if f is None:
        f = lambda u: 0.5 * u * u          # noqa: E731
    u = np.array(u0, dtype=float)
    guard = 10.0 * max(np.max(np.abs(u)), 1e-30)
    t = 0.0
    while t < t_end - 1e-14:
        umax = max(np.max(np.abs(u)), 1e-12)
        dt = 0.25 * min(dx * dx / mu, dx / umax)
        dt = min(dt, t_end - t)
        fu = f(u)
        if bc == "periodic":
            dfdx = (np.roll(fu, -1) - np.roll(fu, 1)) / (2 * dx)
            d2u = (np.roll(u, -1) - 2 * u + np.roll(u, 1)) / (dx * dx)
            u = u + dt * (-dfdx + mu * d2u)
        elif bc == "dirichlet0":
            un = u.copy()
            dfdx = (fu[2:] - fu[:-2]) / (2 * dx)
            d2u = (un[2:] - 2 * un[1:-1] + un[:-2]) / (dx * dx)
            u[1:-1] = un[1:-1] + dt * (-dfdx + mu * d2u)
            u[0] = 0.0
            u[-1] = 0.0
        else:
            raise ValueError(f"unknown oracle bc {bc!r}")
        t += dt
        if np.max(np.abs(u)) > guard:
            raise BlowUp("oracle exceeded 10x the initial range")
    return u


def _ns1_prim(w, gamma):
    rho = w[:, 0]
    u = w[:, 1] / rho
    E = w[:, 2] / rho
    p = (gamma - 1.0) * rho * (E - 0.5 * u * u)
    T = p / rho
    if np.min(rho) <= 0 or np.min(p) <= 0:
        raise NonPhysicalState("oracle produced rho <= 0 or p <= 0")
    return rho, u, p, T


def fd_oracle_ns1(w0: np.ndarray, p: RelaxParams, dx: float, t_end: float,
                  bc: str = "periodic"):
    """FTCS oracle for the 1-D Navier-Stokes system on cell/node values.

    Discretizes the viscous system directly (no relaxation variables):
    central differences for convective and viscous terms, forward Euler with
    a parabolic step restriction.  Smooth data only.
    """
    if bc != "periodic":
        raise ValueError("the NS oracle supports periodic data only")
    gamma, kappa, mu = p.gamma, p.kappa, p.mu
    w = np.array(w0, dtype=float)
    guard = 10.0 * max(np.max(np.abs(w)), 1e-30)
    t = 0.0

    def roll(a, k):
        return np.roll(a, k, axis=0)

    while t < t_end - 1e-14:
        rho, u, pres, T = _ns1_prim(w, gamma)
        c = np.sqrt(gamma * pres / rho)
        lam = np.max(np.abs(u) + c)
        nu = max(np.max(4.0 * mu / (3.0 * rho)),
                 np.max(kappa * (gamma - 1.0) / rho))
        dt = 0.2 * min(dx * dx / max(nu, 1e-30), dx / lam, nu / lam**2 * 2.0)
        dt = min(dt, t_end - t)

        f = np.stack([w[:, 1],
                      w[:, 1] * u + pres,
                      u * (w[:, 2] + pres)], axis=1)
        dfdx = (roll(f, -1) - roll(f, 1)) / (2 * dx)

        # Viscous fluxes at midpoints: (4/3) mu u_x and (4/3) mu u u_x + kappa T_x.
        u_mid_x = (roll(u, -1) - u) / dx
        T_mid_x = (roll(T, -1) - T) / dx
        u_mid = 0.5 * (u + roll(u, -1))
        tau = (4.0 / 3.0) * mu * u_mid_x
        qvis = tau * u_mid + kappa * T_mid_x
        visc = np.stack([np.zeros_like(tau), tau, qvis], axis=1)
        dvisc = (visc - roll(visc, 1)) / dx

        w = w + dt * (-dfdx + dvisc)
        t += dt
        if np.max(np.abs(w)) > guard:
            raise BlowUp("oracle exceeded 10x the initial range")
    return w


# ---------------------------------------------------------------------------
# Error norms and observed orders
# ---------------------------------------------------------------------------

def error_norms(numeric: np.ndarray, exact, grid) -> ErrorReport:
    """L1 (cell-measure weighted) and Linf error norms on a grid.

    ``exact`` is either an array matching ``numeric`` or a callable sampled at
    cell centers.  Works for Grid1D (1-D arrays) and Grid2D (2-D arrays).
    """
    numeric = np.asarray(numeric, dtype=float)
    if isinstance(grid, Grid1D):
        measure = grid.dx
        n_cells = grid.n_cells
        ex = exact(grid.centers()) if callable(exact) else np.asarray(exact, dtype=float)
    elif isinstance(grid, Grid2D):
        measure = grid.dx * grid.dy
        n_cells = grid.nx
        if callable(exact):
            X, Y = np.meshgrid(grid.x_centers(), grid.y_centers(), indexing="ij")
            ex = exact(X, Y)
        else:
            ex = np.asarray(exact, dtype=float)
    else:
        raise TypeError("grid must be Grid1D or Grid2D")
    if ex.shape != numeric.shape:
        raise GridMismatch("numeric and exact fields differ in shape")
    err = np.abs(numeric - ex)
    return ErrorReport(l1=float(np.sum(err) * measure),
                       linf=float(np.max(err)),
                       n_cells=n_cells)


def observed_order(coarse: ErrorReport, fine: ErrorReport):
    """log2 error ratios between a 2:1 grid refinement pair."""
    if fine.n_cells != 2 * coarse.n_cells:
        raise GridMismatch(
            f"need a 2:1 refinement, got {coarse.n_cells} -> {fine.n_cells}")
    order_l1 = float(np.log2(coarse.l1 / fine.l1))
    order_linf = float(np.log2(coarse.linf / fine.linf))
    fine.observed_order_l1 = order_l1
    fine.observed_order_linf = order_linf
    return order_l1, order_linf


# ---------------------------------------------------------------------------
# Ghia et al. (1982) cavity benchmark data
# ---------------------------------------------------------------------------

def ghia_data_path() -> str:
    """Resolve the shipped benchmark file, honouring RELAXFLUX_DATA_DIR."""
    override = os.environ.get("RELAXFLUX_DATA_DIR")
    if override:
        return os.path.join(override, "ghia1982.txt")
    return os.path.join(os.path.dirname(__file__), "data", "ghia1982.txt")


def load_ghia_reference(path: Optional[str] = None
                        ) -> Dict[int, Tuple[BenchmarkCurve, BenchmarkCurve]]:
    """Parse the shipped cavity centerline tables.

    Returns {Re: (U-centerline curve, V-centerline curve)}.  Raises
    MissingResource when absent, SchemaError naming the offending line.
    """
    path = path or ghia_data_path()
    if not os.path.exists(path):
        raise MissingResource(f"benchmark file not found: {path}")
    blocks: Dict[Tuple[int, str], list] = {}
    current = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if body.startswith("block"):
                    parts = body.split()
                    try:
                        re_val = int(parts[1].split("=")[1])
                        comp = parts[2]
                    except (IndexError, ValueError) as exc:
                        raise SchemaError(f"line {lineno}: bad block header") from exc
                    if comp not in ("U", "V"):
                        raise SchemaError(f"line {lineno}: component must be U or V")
                    current = (re_val, comp)
                    blocks[current] = []
                continue
            if current is None:
                raise SchemaError(f"line {lineno}: data before any block header")
            parts = line.split()
            if len(parts) != 2:
                raise SchemaError(f"line {lineno}: expected 2 columns, got {len(parts)}")
            try:
                coord, vel = float(parts[0]), float(parts[1])
            except ValueError as exc:
                raise SchemaError(f"line {lineno}: non-numeric row") from exc
            blocks[current].append((coord, vel))

    out: Dict[int, Tuple[BenchmarkCurve, BenchmarkCurve]] = {}
    res = sorted({re_val for re_val, _ in blocks})
    for re_val in res:
        try:
            urows = blocks[(re_val, "U")]
            vrows = blocks[(re_val, "V")]
        except KeyError as exc:
            raise SchemaError(f"Re={re_val}: missing U or V block") from exc
        ua = np.array(urows)
        va = np.array(vrows)
        out[re_val] = (
            BenchmarkCurve(ua[:, 0], ua[:, 1], label=f"Re={re_val} U(y) at x=0.5"),
            BenchmarkCurve(va[:, 0], va[:, 1], label=f"Re={re_val} V(x) at y=0.5"),
        )
    return out
