"""Boundary specifications, ghost-cell filling, and one-sided wall fluxes.

Ghost-backed kinds (periodic, symmetric, extrapolation, inflow) populate the
ghost margin so interior interface formulas apply unchanged.  Wall-type kinds
(scalar Dirichlet/Neumann, gas no-slip walls) construct a boundary interface
state directly and the steppers evolve it one-sidedly: outgoing
characteristics come from interior data, incoming ones are pinned to the
prescribed boundary state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError

__all__ = [
    "BoundarySpec",
    "fill_ghosts_scalar",
    "scalar_dirichlet_flux",
    "scalar_neumann_flux",
]

_GHOST_KINDS = ("periodic", "symmetric", "extrapolation", "inflow")
_SCALAR_WALL_KINDS = ("dirichlet_scalar", "neumann_scalar")
_GAS_WALL_KINDS = ("wall",)


@dataclass(frozen=True)
class BoundarySpec:
    """One boundary face's treatment.

    kind: periodic | symmetric | extrapolation | inflow | dirichlet_scalar |
          neumann_scalar | wall | composite
    """

    kind: str
    u_b: Optional[Callable[[float], float]] = None   # dirichlet_scalar
    state: Optional[np.ndarray] = None               # inflow: pinned full state
    wall_velocity: Tuple[float, float] = (0.0, 0.0)  # wall: (tangential, normal)
    T_b: Optional[float] = None                      # wall: isothermal temperature
    segments: Optional[Sequence] = None              # composite: [(lo, hi, spec)]

    # -- constructors named after the physical conditions -------------------

    @staticmethod
    def periodic() -> "BoundarySpec":
        return BoundarySpec(kind="periodic")

    @staticmethod
    def symmetric() -> "BoundarySpec":
        return BoundarySpec(kind="symmetric")

    @staticmethod
    def extrapolation() -> "BoundarySpec":
        return BoundarySpec(kind="extrapolation")

    @staticmethod
    def inflow(state: np.ndarray) -> "BoundarySpec":
        return BoundarySpec(kind="inflow", state=np.asarray(state, dtype=float))

    @staticmethod
    def dirichlet_scalar(u_b) -> "BoundarySpec":
        fn = u_b if callable(u_b) else (lambda t, _v=float(u_b): _v)
        return BoundarySpec(kind="dirichlet_scalar", u_b=fn)

    @staticmethod
    def neumann_scalar() -> "BoundarySpec":
        return BoundarySpec(kind="neumann_scalar")

    @staticmethod
    def wall_noslip_adiabatic() -> "BoundarySpec":
        return BoundarySpec(kind="wall")

    @staticmethod
    def wall_noslip_isothermal(T_b: float) -> "BoundarySpec":
        return BoundarySpec(kind="wall", T_b=float(T_b))

    @staticmethod
    def moving_wall(U_b: float, T_b: float) -> "BoundarySpec":
        return BoundarySpec(kind="wall", wall_velocity=(float(U_b), 0.0),
                            T_b=float(T_b))

    @staticmethod
    def composite(segments) -> "BoundarySpec":
        return BoundarySpec(kind="composite", segments=tuple(segments))

    # -----------------------------------------------------------------------

    @property
    def is_ghost_kind(self) -> bool:
        return self.kind in _GHOST_KINDS

    @property
    def is_wall_kind(self) -> bool:
        return self.kind in _SCALAR_WALL_KINDS or self.kind in _GAS_WALL_KINDS

    def segment_for(self, coord: float) -> "BoundarySpec":
        """Resolve a composite spec at a given boundary coordinate."""
        if self.kind != "composite":
            return self
        for lo, hi, spec in self.segments:
            if lo <= coord < hi:
                return spec
        return self.segments[-1][2]


def _check_pair(left: BoundarySpec, right: BoundarySpec):
    if (left.kind == "periodic") != (right.kind == "periodic"):
        raise ConfigError("periodic boundaries must come in pairs")


# ---------------------------------------------------------------------------
# Scalar (u, v) ghost filling and wall states
# ---------------------------------------------------------------------------

def fill_ghosts_scalar(state, bc: Tuple[BoundarySpec, BoundarySpec],
                       t: float = 0.0):
    """Populate the ghost margin of a scalar relaxation state in place.

    Periodic wraps values and slopes.  Extrapolation copies the nearest
    interior cell with zeroed slopes.  Dirichlet mirrors u oddly through the
    boundary value and v evenly (ghosts feed only slope construction and
    limiting; wall fluxes are one-sided).  Neumann mirrors both evenly.
    """
    left, right = bc
    _check_pair(left, right)
    g = state.nghost
    n = state.grid.n_cells
    for arr in (state.u, state.v, state.ux, state.vx):
        if left.kind == "periodic":
            arr[:g] = arr[n:n + g]
            arr[n + g:] = arr[g:2 * g]
    if left.kind == "periodic":
        return

    def fill_side(spec, side):
        if side == "left":
            ghost = lambda k: g - 1 - k       # noqa: E731
            mirror = lambda k: g + k          # noqa: E731
            nearest = g
        else:
            ghost = lambda k: n + g + k       # noqa: E731
            mirror = lambda k: n + g - 1 - k  # noqa: E731
            nearest = n + g - 1
        if spec.kind == "extrapolation":
            for k in range(g):
                state.u[ghost(k)] = state.u[nearest]
                state.v[ghost(k)] = state.v[nearest]
                state.ux[ghost(k)] = 0.0
                state.vx[ghost(k)] = 0.0
        elif spec.kind == "dirichlet_scalar":
            ub = spec.u_b(t)
            for k in range(g):
                state.u[ghost(k)] = 2.0 * ub - state.u[mirror(k)]
                state.v[ghost(k)] = state.v[mirror(k)]
                state.ux[ghost(k)] = state.ux[mirror(k)]
                state.vx[ghost(k)] = -state.vx[mirror(k)]
        elif spec.kind in ("neumann_scalar", "symmetric"):
            for k in range(g):
                state.u[ghost(k)] = state.u[mirror(k)]
                state.v[ghost(k)] = state.v[mirror(k)]
                state.ux[ghost(k)] = -state.ux[mirror(k)]
                state.vx[ghost(k)] = -state.vx[mirror(k)]
        else:
            raise ConfigError(f"unsupported scalar boundary kind {spec.kind!r}")

    fill_side(left, "left")
    fill_side(right, "right")


def scalar_dirichlet_flux(u_interior: float, u_b: float, p, law, dx: float,
                          side: str = "left"):
    """Boundary (u, v) pair for a prescribed scalar wall value.

    The wall gradient uses the mirror value 2*u_b - u_interior; at the left
    face of the domain this is +2*(u_interior - u_b)/dx, at the right face
    the sign flips.
    """
    grad = 2.0 * (u_interior - u_b) / dx
    if side == "right":
        grad = -grad
    v = law.f(u_b) - p.mu * law.phi(u_b) * grad
    return u_b, v


def scalar_neumann_flux(u_interior: float, p, law):
    """Boundary (u, v) pair for a zero-gradient scalar wall."""
    return u_interior, law.f(u_interior)
