"""Exact per-mode half-space resolvent solves and Fourier synthesis.

Each admissible mode has a closed-form solution built from two decaying
exponentials exp(-sqrt(Re)*omega*y) and exp(-sqrt(Re)*|zeta|*y) carrying the
amplitude pair tau = (tau_v, tau_w).  The boundary condition selects an
n x n complex linear system for tau; everything else (interior momentum and
divergence equations) is satisfied identically by the representation.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import BoundaryCondition, GridField, Mode, ModeData, ModelParams, make_mode
from .errors import SingularBoundarySystem, ZeroModeIncompatible, ZeroTangentialMode

COND_LIMIT = 1e14
ZERO_MODE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ModeProfile:
    """Amplitudes of the two-exponential representation of one mode."""

    tau_v: np.ndarray
    tau_w: complex
    mode: Mode
    params: ModelParams


@dataclass(frozen=True)
class ModeResidual:
    momentum_res: float
    div_res: float
    bc_res: float


class ProfileValues(NamedTuple):
    v_hat: np.ndarray
    w_hat: np.ndarray | complex
    p_hat: np.ndarray | complex
    dy_v_hat: np.ndarray
    dy_w_hat: np.ndarray | complex
    dy_p_hat: np.ndarray | complex


def _traces(params: ModelParams, mode: Mode):
    """Boundary traces of the representation as matrices acting on tau.

    Rows are laid out for tau = (tau_v, tau_w).  All first-derivative traces
    are exact; they follow from differentiating the two exponentials.
    """
    n1 = mode.xi.size
    sre = params.sqrt_re
    om, za = mode.omega, mode.zeta_abs
    iz = 1j * mode.zeta
    eye = np.eye(n1)
    col = iz.reshape(-1, 1)
    t = {
        "v": np.hstack([om * eye, -col]),
        "dv": np.hstack([-sre * om ** 2 * eye, sre * za * col]),
        "w": np.concatenate([iz, [za]]).reshape(1, -1),
        "dw": np.concatenate([-sre * om * iz, [-sre * za ** 2]]).reshape(1, -1),
        "p": np.concatenate([np.zeros(n1), [mode.lambda_eps / sre]]).reshape(1, -1),
    }
    t["grad_w"] = (1j * mode.xi).reshape(-1, 1) @ t["w"]
    return t


def boundary_matrix(params: ModelParams, mode: Mode, bc: BoundaryCondition):
    """Assemble the n x n boundary system acting on (tau_v, tau_w)."""
    t = _traces(params, mode)
    a, re = params.alpha, params.reynolds
    lame = mode.lambda_eps
    dyn_tan = a * lame * t["v"] - params.kappa * t["dv"] - (1.0 / re) * t["grad_w"]
    dyn_nor = a * lame * t["w"] - params.sigma * t["dw"] + t["p"]
    slip_tan = -(1.0 / re) * t["dv"] - (1.0 / re) * t["grad_w"]
    if bc is BoundaryCondition.TDO:
        rows = (dyn_tan, t["w"])
    elif bc is BoundaryCondition.NDO:
        rows = (t["v"], dyn_nor)
    elif bc is BoundaryCondition.FDO:
        rows = (dyn_tan, dyn_nor)
    elif bc is BoundaryCondition.DIRICHLET:
        rows = (t["v"], t["w"])
    elif bc is BoundaryCondition.NAVIER:
        rows = (slip_tan, t["w"])
    elif bc is BoundaryCondition.NEUMANN:
        rows = (slip_tan, -(2.0 / re) * t["dw"] + t["p"])
    else:
        raise ValueError(f"unsupported boundary condition {bc}")
    return np.vstack(rows)


def solve_mode(params: ModelParams, mode: Mode, bc: BoundaryCondition,
               data: ModeData) -> ModeProfile:
    """Solve the boundary system of one mode for the amplitude pair.

    Requires |zeta| > 0; the zero tangential mode degenerates (the slow
    exponential becomes constant) and is handled separately by solve_field.
    """
    if mode.zeta_abs == 0.0:
        raise ZeroTangentialMode("per-mode solve requires |zeta| > 0")
    if data.h_v.size != mode.xi.size:
        raise ValueError("tangential datum length must match the mode")
    system = boundary_matrix(params, mode, bc)
    cond = np.linalg.cond(system)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularBoundarySystem(f"condition estimate {cond:.3e}")
    rhs = np.concatenate([data.h_v, [data.h_w]])
    tau = np.linalg.solve(system, rhs)
    tau_v = tau[:-1]
    tau_v.setflags(write=False)
    return ModeProfile(tau_v, complex(tau[-1]), mode, params)


def eval_profile(profile: ModeProfile, y) -> ProfileValues:
    """Evaluate the representation and its exact y-derivatives.

    Accepts scalar or array y >= 0; array input appends the y axis to each
    returned field.
    """
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr < 0):
        raise ValueError("y must be nonnegative")
    mode, params = profile.mode, profile.params
    sre = params.sqrt_re
    om, za = mode.omega, mode.zeta_abs
    iz = 1j * mode.zeta
    e_fast = np.exp(-sre * om * y_arr)
    e_slow = np.exp(-sre * za * y_arr)
    a_fast = profile.tau_v
    v = np.multiply.outer(om * a_fast, e_fast) - np.multiply.outer(iz * profile.tau_w, e_slow)
    dv = (np.multiply.outer(-sre * om ** 2 * a_fast, e_fast)
          + np.multiply.outer(sre * za * iz * profile.tau_w, e_slow))
    w = (iz @ a_fast) * e_fast + za * profile.tau_w * e_slow
    dw = -sre * om * (iz @ a_fast) * e_fast - sre * za ** 2 * profile.tau_w * e_slow
    p = (mode.lambda_eps / sre) * profile.tau_w * e_slow
    dp = -za * mode.lambda_eps * profile.tau_w * e_slow
    if y_arr.ndim == 0:
        return ProfileValues(v, complex(w), complex(p), dv, complex(dw), complex(dp))
    return ProfileValues(v, w, p, dv, dw, dp)


def _second_derivatives(profile: ModeProfile, y_arr):
    mode, params = profile.mode, profile.params
    sre = params.sqrt_re
    om, za = mode.omega, mode.zeta_abs
    iz = 1j * mode.zeta
    e_fast = np.exp(-sre * om * y_arr)
    e_slow = np.exp(-sre * za * y_arr)
    rf, rs = (sre * om) ** 2, (sre * za) ** 2
    ddv = (np.multiply.outer(rf * om * profile.tau_v, e_fast)
           - np.multiply.outer(rs * iz * profile.tau_w, e_slow))
    ddw = rf * (iz @ profile.tau_v) * e_fast + rs * za * profile.tau_w * e_slow
    return ddv, ddw


def default_y_samples(mode: Mode) -> np.ndarray:
    """Sample heights resolving both exponential scales of the mode."""
    base = np.array([0.0, 0.1, 0.5, 1.0, 2.0, 5.0])
    return base / max(1.0, abs(mode.omega))


def residual_mode(profile: ModeProfile, bc: BoundaryCondition, data: ModeData,
                  y_samples=None) -> ModeResidual:
    """Plug the profile into the momentum, divergence, and boundary rows.

    All derivatives are analytic, so the residuals measure only algebraic
    consistency (and roundoff) rather than discretization error.
    """
    mode, params = profile.mode, profile.params
    if y_samples is None:
        y_samples = default_y_samples(mode)
    y_arr = np.asarray(y_samples, dtype=float)
    if y_arr.size == 0 or np.any(y_arr < 0):
        raise ValueError("y_samples must be nonempty and nonnegative")
    vals = eval_profile(profile, y_arr)
    ddv, ddw = _second_derivatives(profile, y_arr)
    om2 = mode.omega ** 2
    re = params.reynolds
    ixi = (1j * mode.xi).reshape(-1, 1)
    mom_v = om2 * vals.v_hat - ddv / re + ixi * vals.p_hat
    mom_w = om2 * vals.w_hat - ddw / re + vals.dy_p_hat
    momentum = max(float(np.abs(mom_v).max()), float(np.abs(mom_w).max()))
    div = float(np.abs((1j * mode.xi) @ vals.v_hat + vals.dy_w_hat).max())
    system = boundary_matrix(params, mode, bc)
    tau = np.concatenate([profile.tau_v, [profile.tau_w]])
    rhs = np.concatenate([data.h_v, [data.h_w]])
    bc_res = float(np.abs(system @ tau - rhs).max())
    return ModeResidual(momentum, div, bc_res)


# ---------------------------------------------------------------------------
# Fourier synthesis over a periodic tangential grid
# ---------------------------------------------------------------------------

def thread_cap(requested=None) -> int:
    cap = os.environ.get("STOKES_OUTFLOW_THREADS")
    cap = int(cap) if cap else 1
    if requested is None:
        return max(1, cap)
    return max(1, min(int(requested), cap))


def _zero_mode_amplitude(params: ModelParams, lam, bc, hv0):
    """Tangential amplitude of the xi = 0 mode, one scalar problem per
    component: the normal velocity and pressure of this mode vanish."""
    lame = params.epsilon + lam
    omega0 = np.sqrt(complex(lame))
    sre = params.sqrt_re
    if bc in (BoundaryCondition.TDO, BoundaryCondition.FDO):
        den = params.alpha * lame + params.kappa * sre * omega0
        return hv0 / den, omega0
    if bc in (BoundaryCondition.NAVIER, BoundaryCondition.NEUMANN):
        return hv0 * params.reynolds / (sre * omega0), omega0
    return hv0, omega0   # Dirichlet-type tangential rows


def solve_field(params: ModelParams, bc: BoundaryCondition, boundary_normal,
                lam, lengths, y, boundary_tangential=None, threads=None) -> GridField:
    """Resolvent solve for sampled boundary data on a periodic tangential grid.

    boundary_normal holds the normal datum on a rank-1 or rank-2 periodic
    grid (shape (N,) or (Nx, Ny)); boundary_tangential, if given, has the
    component axis first with one component per tangential direction.
    lengths are the tangential periods and y the evaluation heights.
    Returns a GridField whose velocity carries the tangential components
    first and the normal component last.
    """
    h_w = np.asarray(boundary_normal)
    shape = h_w.shape
    rank = h_w.ndim
    if rank not in (1, 2):
        raise ValueError("tangential grid must have rank 1 or 2")
    lengths = tuple(float(L) for L in np.atleast_1d(lengths))
    if len(lengths) != rank:
        raise ValueError("one period per tangential axis required")
    if boundary_tangential is None:
        h_v = np.zeros((rank,) + shape)
    else:
        h_v = np.asarray(boundary_tangential)
        if h_v.shape != (rank,) + shape:
            raise ValueError("tangential datum must be (ncomp,) + grid shape")
    real_output = not (np.iscomplexobj(h_w) or np.iscomplexobj(h_v))
    y_arr = np.asarray(y, dtype=float)
    ny = y_arr.size

    axes = tuple(range(rank))
    hw_hat = np.fft.fftn(h_w.astype(complex), axes=axes)
    hv_hat = np.fft.fftn(h_v.astype(complex), axes=tuple(a + 1 for a in axes))
    mean_abs = abs(hw_hat[(0,) * rank]) / h_w.size
    rms = np.linalg.norm(hw_hat) / h_w.size
    if mean_abs > ZERO_MODE_TOL * max(rms, 1e-30):
        raise ZeroModeIncompatible(
            "mean of the prescribed normal trace must vanish"
        )

    freqs = [2.0 * np.pi * np.fft.fftfreq(n, d=L / n)
             for n, L in zip(shape, lengths)]
    v_spec = np.zeros((rank,) + shape + (ny,), dtype=complex)
    w_spec = np.zeros(shape + (ny,), dtype=complex)
    p_spec = np.zeros(shape + (ny,), dtype=complex)

    lam = complex(lam)

    def mode_values(idx):
        xi = np.array([freqs[a][idx[a]] for a in range(rank)])
        hv_k = hv_hat[(slice(None),) + idx]
        hw_k = hw_hat[idx]
        if np.all(xi == 0.0):
            amp, omega0 = _zero_mode_amplitude(params, lam, bc, hv_k)
            decay = np.exp(-params.sqrt_re * omega0 * y_arr)
            zero = np.zeros(ny, dtype=complex)
            return idx, (np.multiply.outer(amp, decay), zero, zero)
        mode = make_mode(params, lam, xi)
        profile = solve_mode(params, mode, bc, ModeData(hv_k, hw_k))
        vals = eval_profile(profile, y_arr)
        return idx, (vals.v_hat, vals.w_hat, vals.p_hat)

    indices = list(np.ndindex(shape))
    cap = thread_cap(threads)
    if cap > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=cap) as pool:
            results = list(pool.map(mode_values, indices))
    else:
        results = [mode_values(idx) for idx in indices]
    for idx, (v_k, w_k, p_k) in results:
        v_spec[(slice(None),) + idx + (slice(None),)] = v_k
        w_spec[idx + (slice(None),)] = w_k
        p_spec[idx + (slice(None),)] = p_k

    inv_axes = tuple(a + 1 for a in axes)
    v_field = np.fft.ifftn(v_spec, axes=inv_axes)
    w_field = np.fft.ifftn(w_spec, axes=axes)
    p_field = np.fft.ifftn(p_spec, axes=axes)
    if real_output:
        v_field, w_field, p_field = v_field.real, w_field.real, p_field.real
    velocity = np.concatenate([v_field, w_field[np.newaxis]], axis=0)
    grid_axes = tuple(np.linspace(0.0, L, n, endpoint=False)
                      for n, L in zip(shape, lengths)) + (y_arr,)
    meta = {"lambda": lam, "bc": bc.value,
            "alpha": params.alpha, "reynolds": params.reynolds,
            "v_out": params.v_out, "epsilon": params.epsilon}
    return GridField(grid_axes, velocity, p_field, meta=meta)


def write_field_csv(field: GridField, path):
    """Row-major CSV dump: coordinates, tangential components, w, p."""
    axes = field.axes
    ncomp = field.velocity.shape[0]
    coord_names = ["x", "y", "z"][:len(axes)]
    comp_names = [f"u_{i + 1}" for i in range(ncomp - 1)] + ["w"]
    meta = field.meta
    with open(path, "w", encoding="utf-8") as f:
        if meta:
            lam = meta.get("lambda", 0j)
            f.write(f"# bc={meta.get('bc')} alpha={meta.get('alpha')!r} "
                    f"reynolds={meta.get('reynolds')!r} v_out={meta.get('v_out')!r} "
                    f"epsilon={meta.get('epsilon')!r} "
                    f"lambda_re={lam.real!r} lambda_im={lam.imag!r}\n")
        f.write(",".join(coord_names + comp_names + ["p"]) + "\n")
        mesh = np.meshgrid(*axes, indexing="ij")
        flat_coords = [m.ravel() for m in mesh]
        flat_fields = [field.velocity[i].ravel() for i in range(ncomp)]
        flat_fields.append(field.pressure.ravel())
        for row in zip(*flat_coords, *flat_fields):
            f.write(",".join(repr(float(v)) for v in row) + "\n")
