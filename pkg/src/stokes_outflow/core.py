"""Shared domain types: model parameters, Laplace-Fourier modes, boundary data.

All types are immutable values and safe to share between threads.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import BranchCut, CPViolation


class BoundaryCondition(enum.Enum):
    """Which boundary rows the per-mode resolvent assembles."""

    TDO = "TDO"            # dynamic tangential rows, prescribed normal trace
    NDO = "NDO"            # prescribed tangential trace, dynamic normal row
    FDO = "FDO"            # dynamic rows in all components
    DIRICHLET = "Dirichlet"
    NAVIER = "Navier"      # slip wall (friction coefficient 0 here)
    NEUMANN = "Neumann"    # homogeneous stress rows


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the outflow model.

    kappa = alpha*v_out + 1/reynolds and sigma = alpha*v_out + 2/reynolds are
    the coefficients of the normal-derivative terms in the tangential and
    normal dynamic boundary rows.  Validity requires kappa > 0; then
    sigma = kappa + 1/reynolds > kappa automatically.
    """

    alpha: float
    reynolds: float
    v_out: float
    epsilon: float
    kappa: float
    sigma: float

    @property
    def sqrt_re(self) -> float:
        return self.reynolds ** 0.5


def make_params(alpha, reynolds, v_out, epsilon=0.0) -> ModelParams:
    """Validate and derive the parameter set.

    Raises CPViolation when alpha*v_out + 1/reynolds <= 0, and ValueError for
    nonpositive alpha/reynolds or negative epsilon.
    """
    alpha = float(alpha)
    reynolds = float(reynolds)
    v_out = float(v_out)
    epsilon = float(epsilon)
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if reynolds <= 0.0:
        raise ValueError(f"reynolds must be positive, got {reynolds}")
    if epsilon < 0.0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    kappa = alpha * v_out + 1.0 / reynolds
    if kappa <= 0.0:
        raise CPViolation(
            f"alpha*v_out + 1/reynolds = {kappa} must be positive"
        )
    sigma = alpha * v_out + 2.0 / reynolds
    return ModelParams(alpha, reynolds, v_out, epsilon, kappa, sigma)


@dataclass(frozen=True, eq=False)
class Mode:
    """One Laplace-Fourier mode.

    lam is the Laplace co-variable, xi the tangential Fourier co-variable
    (length n-1).  zeta = xi/sqrt(Re) and omega = sqrt(lambda_eps + |zeta|^2)
    on the principal branch, so Re(omega) > 0 away from the branch cut.
    """

    lam: complex
    lambda_eps: complex
    xi: np.ndarray
    zeta: np.ndarray
    zeta_abs: float
    omega: complex

    @property
    def n(self) -> int:
        """Space dimension (tangential dimension + 1)."""
        return self.xi.size + 1


def make_mode(params: ModelParams, lam, xi) -> Mode:
    """Build a mode from the Laplace variable and tangential wave vector.

    Raises BranchCut when epsilon + lam + |zeta|^2 lies on the closed
    negative real axis, where the principal square root loses Re(omega) > 0.
    """
    lam = complex(lam)
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if xi.ndim != 1:
        raise ValueError("xi must be a vector")
    lambda_eps = params.epsilon + lam
    zeta = xi / params.sqrt_re
    zeta_abs = float(np.linalg.norm(zeta))
    radicand = lambda_eps + zeta_abs ** 2
    if radicand.imag == 0.0 and radicand.real <= 0.0:
        raise BranchCut(
            f"epsilon + lambda + |zeta|^2 = {radicand} lies on the branch cut"
        )
    omega = cmath.sqrt(radicand)
    mode = Mode(lam, lambda_eps, xi, zeta, zeta_abs, omega)
    xi.setflags(write=False)
    zeta.setflags(write=False)
    return mode


@dataclass(frozen=True, eq=False)
class ModeData:
    """Boundary datum of one mode, split into tangential and normal parts."""

    h_v: np.ndarray
    h_w: complex

    def __post_init__(self):
        h_v = np.atleast_1d(np.asarray(self.h_v, dtype=complex))
        object.__setattr__(self, "h_v", h_v)
        object.__setattr__(self, "h_w", complex(self.h_w))
        if not (np.all(np.isfinite(h_v.view(float))) and cmath.isfinite(self.h_w)):
            raise ValueError("boundary datum must be finite")
        h_v.setflags(write=False)

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.h_v) ** 2) + abs(self.h_w) ** 2))


@dataclass(frozen=True, eq=False)
class GridField:
    """Sampled physical-space fields on a rectangular grid.

    axes are the 1-D coordinate arrays; velocity has the component axis
    first, shape (ncomp, *grid_shape); pressure and the optional body force
    live on the same grid.
    """

    axes: tuple
    velocity: np.ndarray
    pressure: np.ndarray
    body_force: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def grid_shape(self) -> tuple:
        return tuple(len(a) for a in self.axes)

    def __post_init__(self):
        shape = self.grid_shape
        if self.velocity.shape[1:] != shape:
            raise ValueError("velocity shape does not match axes")
        if self.pressure.shape != shape:
            raise ValueError("pressure shape does not match axes")
        if self.body_force is not None and self.body_force.shape[1:] != shape:
            raise ValueError("body_force shape does not match axes")
