"""Grids, parameter records, limiters, small dense eigen-decompositions,
time-step control, and field containers shared by all solvers.

The relaxation systems solved in this package have frozen Jacobians of the
block form M = [[0, I], [K, 0]].  Two decomposition paths are provided:

* explicit eigen-decomposition (``eig_real_3x3`` + ``assemble_block_decomposition``)
  producing a :class:`WaveDecomposition`, used by the API-level Riemann
  operations and as an independent cross-check;
* batched lower-triangular closed forms (``lower_sqrt`` / ``lower_inv`` /
  ``lower_matvec``) used in the solver hot loops, exploiting that every block
  K arising here is lower triangular with positive diagonal, so that
  R Λ± R⁻¹ products reduce to the principal square root S = sqrt(K).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    DefectiveMatrix,
    NonPositiveBlock,
    NonRealSpectrum,
    ZeroWaveSpeed,
)

__all__ = [
    "Grid1D",
    "Grid2D",
    "RelaxParams",
    "TimeControl",
    "WaveDecomposition",
    "FieldStore",
    "minmod3",
    "eig_real_3x3",
    "assemble_block_decomposition",
    "compute_dt",
    "lower_sqrt",
    "lower_inv",
    "lower_matvec",
    "dense_matvec",
]


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid1D:
    """Uniform 1-D cell-centered grid on [x_min, x_max] with n_cells cells."""

    x_min: float
    x_max: float
    n_cells: int

    def __post_init__(self):
        if self.n_cells <= 0:
            raise ValueError("n_cells must be positive")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    def centers(self) -> np.ndarray:
        j = np.arange(self.n_cells)
        return self.x_min + (j + 0.5) * self.dx

    def interfaces(self) -> np.ndarray:
        """All n_cells+1 interface coordinates, walls included."""
        return self.x_min + np.arange(self.n_cells + 1) * self.dx


@dataclass(frozen=True)
class Grid2D:
    """Uniform-per-axis rectangular grid of nx-by-ny cells."""

    x_min: float
    x_max: float
    nx: int
    y_min: float
    y_max: float
    ny: int

    def __post_init__(self):
        if self.nx <= 0 or self.ny <= 0:
            raise ValueError("cell counts must be positive")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("empty domain")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / self.ny

    def x_centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.nx) + 0.5) * self.dx

    def y_centers(self) -> np.ndarray:
        return self.y_min + (np.arange(self.ny) + 0.5) * self.dy

    def x_interfaces(self) -> np.ndarray:
        return self.x_min + np.arange(self.nx + 1) * self.dx

    def y_interfaces(self) -> np.ndarray:
        return self.y_min + np.arange(self.ny + 1) * self.dy


@dataclass(frozen=True)
class RelaxParams:
    """Relaxation time, freezing speed, viscosity, and gas constants.

    For gas problems the heat conductivity follows from the Prandtl number,
    kappa = gamma*mu / ((gamma-1)*Pr).
    """

    epsilon: float
    a: float
    mu: float
    gamma: Optional[float] = None
    Pr: Optional[float] = None

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.mu < 0 or self.a < 0:
            raise ValueError("mu and a must be non-negative")
        if not self.mu / self.epsilon + self.a**2 > 0:
            raise ValueError("mu/epsilon + a^2 must be positive")
        if (self.gamma is None) != (self.Pr is None):
            raise ValueError("gamma and Pr must be set together")
        if self.gamma is not None and not self.gamma > 1:
            raise ValueError("gamma must exceed 1")
        if self.Pr is not None and not self.Pr > 0:
            raise ValueError("Pr must be positive")

    @property
    def kappa(self) -> float:
        if self.gamma is None or self.Pr is None:
            raise ValueError("kappa requires gas constants gamma and Pr")
        return self.gamma * self.mu / ((self.gamma - 1.0) * self.Pr)

    def with_epsilon(self, epsilon: float) -> "RelaxParams":
        return RelaxParams(epsilon=epsilon, a=self.a, mu=self.mu,
                           gamma=self.gamma, Pr=self.Pr)


@dataclass(frozen=True)
class TimeControl:
    """CFL number, final time and a safety cap on the step count."""

    cfl: float
    t_end: float
    max_steps: int = 10_000_000

    def __post_init__(self):
        if not 0.0 < self.cfl < 1.0:
            raise ValueError("cfl must lie in (0,1)")
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")


@dataclass
class WaveDecomposition:
    """Eigen-decomposition bundle of a frozen relaxation Jacobian."""

    R: np.ndarray
    Rinv: np.ndarray
    lam: np.ndarray

    @property
    def LambdaPlus(self) -> np.ndarray:
        return np.diag(np.maximum(self.lam, 0.0))

    @property
    def LambdaMinus(self) -> np.ndarray:
        return np.diag(np.minimum(self.lam, 0.0))

    @property
    def Iplus(self) -> np.ndarray:
        return np.diag(0.5 * (1.0 + np.sign(self.lam)))

    @property
    def Iminus(self) -> np.ndarray:
        return np.diag(0.5 * (1.0 - np.sign(self.lam)))

    def matrix(self) -> np.ndarray:
        """Reassemble R diag(lam) Rinv."""
        return (self.R * self.lam) @ self.Rinv

    def project_plus(self) -> np.ndarray:
        return (self.R * np.maximum(self.lam, 0.0)) @ self.Rinv

    def project_minus(self) -> np.ndarray:
        return (self.R * np.minimum(self.lam, 0.0)) @ self.Rinv

    def sign_matrix(self) -> np.ndarray:
        return (self.R * np.sign(self.lam)) @ self.Rinv


@dataclass
class FieldStore:
    """Per-cell state vectors plus slope storage with a ghost-cell margin.

    ``data`` has shape (nx+2g, ncomp) in 1-D or (nx+2g, ny+2g, ncomp) in 2-D.
    Slope arrays match the reconstruction of the active scheme; a solver that
    stores no y-slopes leaves ``slopes_y`` as None.
    """

    data: np.ndarray
    slopes_x: np.ndarray
    slopes_y: Optional[np.ndarray] = None
    nghost: int = 2

    def __post_init__(self):
        if self.nghost < 1:
            raise ValueError("ghost width must be >= 1")

    @property
    def interior(self):
        g = self.nghost
        if self.data.ndim == 2:
            return np.s_[g:-g]
        return np.s_[g:-g, g:-g]


# ---------------------------------------------------------------------------
# Limiter
# ---------------------------------------------------------------------------

def minmod3(left_slope, center_slope, right_slope):
    """Minimum-magnitude slope if all three arguments share a sign, else 0.

    Odd and symmetric in its outer arguments; a zero argument forces zero.
    Accepts scalars or arrays (broadcast).
    """
    l = np.asarray(left_slope, dtype=float)
    c = np.asarray(center_slope, dtype=float)
    r = np.asarray(right_slope, dtype=float)
    s = np.sign(l)
    same = (s != 0) & (np.sign(c) == s) & (np.sign(r) == s)
    mag = np.minimum(np.abs(l), np.minimum(np.abs(c), np.abs(r)))
    out = np.where(same, s * mag, 0.0)
    if out.ndim == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# Small dense eigen-decomposition (explicit path)
# ---------------------------------------------------------------------------

def _null_space_3x3(A: np.ndarray, scale: float, want: int) -> np.ndarray:
    """Null-space basis of a (near-singular) 3x3 matrix by pivoted elimination.

    Returns an array of shape (3, k) with k >= want columns, or raises
    DefectiveMatrix when the null space is smaller than requested.
    """
    tol = 1e-8 * max(scale, 1e-300)
    U = A.copy().astype(float)
    n = 3
    piv_cols = []
    row = 0
    for col in range(n):
        p = np.argmax(np.abs(U[row:, col])) + row
        if np.abs(U[p, col]) <= tol:
            continue
        U[[row, p]] = U[[p, row]]
        U[row] = U[row] / U[row, col]
        for r in range(n):
            if r != row:
                U[r] -= U[r, col] * U[row]
        piv_cols.append(col)
        row += 1
        if row == n:
            break
    free_cols = [c for c in range(n) if c not in piv_cols]
    if len(free_cols) < want:
        raise DefectiveMatrix(
            f"null space of dimension {len(free_cols)} < multiplicity {want}")
    basis = []
    for fc in free_cols:
        v = np.zeros(n)
        v[fc] = 1.0
        for i, pc in enumerate(piv_cols):
            v[pc] = -U[i, fc]
        basis.append(v / np.linalg.norm(v))
    return np.stack(basis, axis=1)


def eig_real_3x3(K: np.ndarray):
    """Eigenvalues (ascending) and unit right eigenvectors of a real-spectrum 3x3.

    Roots come from the closed-form cubic (trigonometric branch) followed by
    one Newton polish per root; eigenvectors from the null space of K - lam I.
    Raises NonRealSpectrum when the cubic discriminant indicates complex roots
    beyond tolerance, DefectiveMatrix when an eigenvector solve fails.
    """
    K = np.asarray(K, dtype=float)
    if K.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    normK = np.linalg.norm(K)
    tr = K[0, 0] + K[1, 1] + K[2, 2]
    # Sum of principal 2x2 minors and determinant.
    m = (K[0, 0] * K[1, 1] - K[0, 1] * K[1, 0]
         + K[0, 0] * K[2, 2] - K[0, 2] * K[2, 0]
         + K[1, 1] * K[2, 2] - K[1, 2] * K[2, 1])
    det = (K[0, 0] * (K[1, 1] * K[2, 2] - K[1, 2] * K[2, 1])
           - K[0, 1] * (K[1, 0] * K[2, 2] - K[1, 2] * K[2, 0])
           + K[0, 2] * (K[1, 0] * K[2, 1] - K[1, 1] * K[2, 0]))
    # lam^3 + a2 lam^2 + a1 lam + a0, depressed with lam = y - a2/3.
    a2, a1, a0 = -tr, m, -det
    p = a1 - a2 * a2 / 3.0
    q = 2.0 * a2**3 / 27.0 - a2 * a1 / 3.0 + a0
    disc = -4.0 * p**3 - 27.0 * q * q
    disc_scale = max(abs(p) ** 3, q * q, 1e-300)
    if disc < -1e-9 * disc_scale:
        raise NonRealSpectrum(
            f"cubic discriminant {disc:.3e} < 0 (scale {disc_scale:.3e})")
    if abs(p) ** 1.5 <= 1e-14 * max(abs(q), 1e-300) or (p >= 0):
        # Near-triple root (p ~ 0); the real branch gives y = cbrt(-q).
        y0 = float(np.cbrt(-q))
        ys = np.array([y0, y0, y0])
    else:
        rad = 2.0 * np.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * rad)
        arg = min(1.0, max(-1.0, arg))
        theta = np.arccos(arg)
        ks = np.array([0.0, 1.0, 2.0])
        ys = rad * np.cos(theta / 3.0 - 2.0 * np.pi * ks / 3.0)
    lam = ys - a2 / 3.0
    # One Newton polish per root on the original cubic.
    for _ in range(1):
        f = lam**3 + a2 * lam**2 + a1 * lam + a0
        fp = 3.0 * lam**2 + 2.0 * a2 * lam + a1
        safe = np.abs(fp) > 1e-14 * max(normK**2, 1e-300)
        lam = np.where(safe, lam - f / np.where(safe, fp, 1.0), lam)
    order = np.argsort(lam, kind="stable")
    lam = lam[order]

    # Group (near-)equal eigenvalues and extract eigenvectors per group.
    group_tol = 1e-8 * max(normK, 1e-300)
    R = np.zeros((3, 3))
    i = 0
    while i < 3:
        j = i
        while j + 1 < 3 and lam[j + 1] - lam[i] <= group_tol:
            j += 1
        mult = j - i + 1
        lam_rep = float(np.mean(lam[i:j + 1]))
        basis = _null_space_3x3(K - lam_rep * np.eye(3), normK, mult)
        R[:, i:j + 1] = basis[:, :mult]
        i = j + 1

    resid = np.linalg.norm(K @ R - R * lam, axis=0)
    if np.any(resid > 1e-10 * max(normK, 1e-300)):
        raise DefectiveMatrix(
            f"eigenpair residual {resid.max():.3e} exceeds 1e-10*|K|")
    return lam, R


def assemble_block_decomposition(K_eigs, K_vecs) -> WaveDecomposition:
    """Decomposition of M = [[0, I],[K, 0]] from the decomposition of K.

    For an eigenpair (sigma^2, r) of K, M has eigenpairs (±sigma, (r, ±sigma r)).
    Eigenvalues are returned sorted ascending.  Raises NonPositiveBlock when
    any sigma^2 <= 0.
    """
    sig2 = np.atleast_1d(np.asarray(K_eigs, dtype=float))
    RK = np.atleast_2d(np.asarray(K_vecs, dtype=float))
    n = sig2.shape[0]
    if RK.shape != (n, n):
        raise ValueError("eigenvector matrix shape mismatch")
    if np.any(sig2 <= 0):
        raise NonPositiveBlock(f"non-positive block eigenvalue {sig2.min():.3e}")
    sig = np.sqrt(sig2)
    RKinv = np.linalg.inv(RK)

    lam = np.concatenate([sig, -sig])
    R = np.zeros((2 * n, 2 * n))
    Rinv = np.zeros((2 * n, 2 * n))
    for k in range(n):
        R[:n, k] = RK[:, k]
        R[n:, k] = sig[k] * RK[:, k]
        R[:n, n + k] = RK[:, k]
        R[n:, n + k] = -sig[k] * RK[:, k]
        Rinv[k, :n] = 0.5 * RKinv[k, :]
        Rinv[k, n:] = 0.5 * RKinv[k, :] / sig[k]
        Rinv[n + k, :n] = 0.5 * RKinv[k, :]
        Rinv[n + k, n:] = -0.5 * RKinv[k, :] / sig[k]
    order = np.argsort(lam, kind="stable")
    return WaveDecomposition(R=R[:, order], Rinv=Rinv[order, :], lam=lam[order])


# ---------------------------------------------------------------------------
# Time-step control
# ---------------------------------------------------------------------------

def compute_dt(lambda_max_x: float, dx: float,
               lambda_max_y: Optional[float] = None,
               dy: Optional[float] = None,
               *, tc: TimeControl, t_now: float = 0.0) -> float:
    """CFL time step, clipped so the run does not overshoot tc.t_end."""
    if not lambda_max_x > 0:
        raise ZeroWaveSpeed("lambda_max_x must be positive")
    dt = tc.cfl * dx / lambda_max_x
    if lambda_max_y is not None:
        if not lambda_max_y > 0:
            raise ZeroWaveSpeed("lambda_max_y must be positive")
        if dy is None:
            raise ValueError("dy required when lambda_max_y is given")
        dt = min(dt, tc.cfl * dy / lambda_max_y)
    remaining = tc.t_end - t_now
    if dt > remaining:
        dt = max(remaining, 0.0)
    return dt


# ---------------------------------------------------------------------------
# Batched lower-triangular closed forms (solver hot path)
# ---------------------------------------------------------------------------
#
# A batched lower-triangular matrix is a ragged list L with L[i][j] (j <= i)
# an ndarray or python float, broadcastable across the batch.  Structural
# zeros may be plain 0.0.

def lower_sqrt(L: Sequence[Sequence]) -> list:
    """Principal square root of a batched lower-triangular matrix.

    Requires a strictly positive diagonal (real positive spectrum); raises
    NonRealSpectrum otherwise.
    """
    n = len(L)
    S: list = [[None] * (i + 1) for i in range(n)]
    for i in range(n):
        d = L[i][i]
        if np.min(d) <= 0.0:
            raise NonRealSpectrum(
                "non-positive diagonal in triangular block; entropy/"
                "subcharacteristic condition violated")
        S[i][i] = np.sqrt(d)
    for off in range(1, n):
        for i in range(off, n):
            j = i - off
            acc = L[i][j]
            for k in range(j + 1, i):
                acc = acc - S[i][k] * S[k][j]
            S[i][j] = acc / (S[i][i] + S[j][j])
    return S


def lower_inv(S: Sequence[Sequence]) -> list:
    """Inverse of a batched lower-triangular matrix with nonzero diagonal."""
    n = len(S)
    T: list = [[None] * (i + 1) for i in range(n)]
    for i in range(n):
        T[i][i] = 1.0 / S[i][i]
    for i in range(n):
        for j in range(i - 1, -1, -1):
            acc = S[i][j] * T[j][j]
            for k in range(j + 1, i):
                acc = acc + S[i][k] * T[k][j]
            T[i][j] = -acc / S[i][i]
    return T


def lower_matvec(S: Sequence[Sequence], x: Sequence) -> list:
    """y = S x for batched lower-triangular S and component-list x."""
    n = len(S)
    y = []
    for i in range(n):
        acc = S[i][0] * x[0]
        for j in range(1, i + 1):
            acc = acc + S[i][j] * x[j]
        y.append(acc)
    return y


def dense_matvec(M: Sequence[Sequence], x: Sequence) -> list:
    """y = M x for a batched dense matrix given as nested lists.

    Entries may be ndarrays, floats, or None (treated as structural zero).
    """
    n = len(M)
    y = []
    for i in range(n):
        acc = None
        for j in range(len(M[i])):
            e = M[i][j]
            if e is None:
                continue
            term = e * x[j]
            acc = term if acc is None else acc + term
        y.append(acc if acc is not None else 0.0)
    return y
