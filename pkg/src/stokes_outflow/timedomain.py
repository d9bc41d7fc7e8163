"""Independent numerical oracles: finite differences and Laplace inversion.

Nothing in this module reuses the closed-form boundary symbols or the
two-exponential representation.  The mode systems are discretized directly
from the transformed momentum, divergence, and boundary equations, so that
agreement with the analytic solvers is a genuine cross-check.

Discretization: velocities live on the nodes of a uniform y-grid, the
pressure on cell midpoints (a staggered arrangement; the collocated variant
loses an order to spurious pressure modes).  Interior stencils are centered
second order, boundary rows use one-sided second-order differences, and the
boundary pressure is extrapolated from the first two midpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csc_matrix
from scipy.sparse.linalg import splu

from .core import BoundaryCondition, Mode, ModelParams
from .errors import SingularDiscreteSystem


@dataclass(frozen=True)
class YGrid:
    n_points: int
    y_max: float

    def __post_init__(self):
        if self.n_points < 16:
            raise ValueError("n_points must be at least 16")
        if self.y_max <= 0:
            raise ValueError("y_max must be positive")

    @property
    def spacing(self) -> float:
        return self.y_max / (self.n_points - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.y_max, self.n_points)

    @property
    def midpoints(self) -> np.ndarray:
        nodes = self.nodes
        return 0.5 * (nodes[1:] + nodes[:-1])

    @classmethod
    def for_mode(cls, params: ModelParams, mode: Mode, n_points, tail=20.0):
        """Grid whose far edge truncates both exponential tails below
        exp(-tail)."""
        sre = params.sqrt_re
        rates = [sre * mode.omega.real]
        if mode.zeta_abs > 0:
            rates.append(sre * mode.zeta_abs)
        slowest = min(r for r in rates if r > 0)
        return cls(int(n_points), tail / slowest)


@dataclass(frozen=True)
class TimeGrid:
    dt: float
    n_steps: int

    def __post_init__(self):
        if self.dt <= 0 or self.n_steps < 1:
            raise ValueError("need dt > 0 and n_steps >= 1")

    @property
    def horizon(self) -> float:
        return self.dt * self.n_steps

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n_steps + 1)


@dataclass(frozen=True, eq=False)
class DiscreteProfile:
    y: np.ndarray
    y_mid: np.ndarray
    v: np.ndarray          # (N, n-1)
    w: np.ndarray          # (N,)
    p_mid: np.ndarray      # (N-1,)

    @property
    def p_nodes(self) -> np.ndarray:
        """Pressure interpolated to the nodes (second order)."""
        p = np.empty(self.w.shape, dtype=complex)
        p[1:-1] = 0.5 * (self.p_mid[1:] + self.p_mid[:-1])
        p[0] = 1.5 * self.p_mid[0] - 0.5 * self.p_mid[1]
        p[-1] = 1.5 * self.p_mid[-1] - 0.5 * self.p_mid[-2]
        return p


class _ModeSystem:
    """Banded discrete operator of one tangential mode.

    Unknown layout per node j: v_j (n-1 slots), w_j, then the midpoint
    pressure p_{j+1/2} (absent at the last node).  Row assignment mirrors
    the unknown layout: boundary rows occupy node 0's velocity slots,
    momentum rows the interior velocity slots, divergence rows the pressure
    slots, far-field rows the last node's velocity slots.
    """

    def __init__(self, params: ModelParams, lam_like, xi, bc: BoundaryCondition,
                 ygrid: YGrid):
        self.params = params
        self.bc = bc
        self.ygrid = ygrid
        self.xi = np.atleast_1d(np.asarray(xi, dtype=float))
        self.n1 = self.xi.size
        self.stride = self.n1 + 2
        self.N = ygrid.n_points
        self.size = self.stride * self.N - 1
        self.lam_like = complex(lam_like)
        self.lame = params.epsilon + self.lam_like
        zeta2 = float(self.xi @ self.xi) / params.reynolds
        self.om2 = self.lame + zeta2
        self._build()

    def cv(self, j, i):
        return self.stride * j + i

    def cw(self, j):
        return self.stride * j + self.n1

    def cp(self, j):
        return self.stride * j + self.n1 + 1

    def _build(self):
        p = self.params
        h = self.ygrid.spacing
        re = p.reynolds
        ixi = 1j * self.xi
        rows, cols, vals = [], [], []

        def add(r, c, v):
            rows.append(r)
            cols.append(c)
            vals.append(v)

        def add_dy0(r, cfun, coef):
            add(r, cfun(0), -3.0 * coef / (2 * h))
            add(r, cfun(1), 4.0 * coef / (2 * h))
            add(r, cfun(2), -coef / (2 * h))

        def add_p0(r, coef):
            add(r, self.cp(0), 1.5 * coef)
            add(r, self.cp(1), -0.5 * coef)

        bc = self.bc
        dyn_tan = bc in (BoundaryCondition.TDO, BoundaryCondition.FDO)
        dyn_nor = bc in (BoundaryCondition.NDO, BoundaryCondition.FDO)
        slip_tan = bc in (BoundaryCondition.NAVIER, BoundaryCondition.NEUMANN)
        # boundary rows at node 0
        for i in range(self.n1):
            r = self.cv(0, i)
            if dyn_tan:
                add(r, self.cv(0, i), p.alpha * self.lame)
                add_dy0(r, lambda j, i=i: self.cv(j, i), -p.kappa)
                add(r, self.cw(0), -ixi[i] / re)
            elif slip_tan:
                add_dy0(r, lambda j, i=i: self.cv(j, i), -1.0 / re)
                add(r, self.cw(0), -ixi[i] / re)
            else:
                add(r, self.cv(0, i), 1.0)
        r = self.cw(0)
        if dyn_nor:
            add(r, self.cw(0), p.alpha * self.lame)
            add_dy0(r, self.cw, -p.sigma)
            add_p0(r, 1.0)
        elif bc is BoundaryCondition.NEUMANN:
            add_dy0(r, self.cw, -2.0 / re)
            add_p0(r, 1.0)
        else:
            add(r, self.cw(0), 1.0)
        # interior momentum rows
        for j in range(1, self.N - 1):
            for i in range(self.n1):
                r = self.cv(j, i)
                add(r, self.cv(j, i), self.om2 + 2.0 / (re * h * h))
                add(r, self.cv(j - 1, i), -1.0 / (re * h * h))
                add(r, self.cv(j + 1, i), -1.0 / (re * h * h))
                add(r, self.cp(j), 0.5 * ixi[i])
                add(r, self.cp(j - 1), 0.5 * ixi[i])
            r = self.cw(j)
            add(r, self.cw(j), self.om2 + 2.0 / (re * h * h))
            add(r, self.cw(j - 1), -1.0 / (re * h * h))
            add(r, self.cw(j + 1), -1.0 / (re * h * h))
            add(r, self.cp(j), 1.0 / h)
            add(r, self.cp(j - 1), -1.0 / h)
        # divergence rows at every midpoint
        for j in range(self.N - 1):
            r = self.cp(j)
            for i in range(self.n1):
                add(r, self.cv(j, i), 0.5 * ixi[i])
                add(r, self.cv(j + 1, i), 0.5 * ixi[i])
            add(r, self.cw(j + 1), 1.0 / h)
            add(r, self.cw(j), -1.0 / h)
        # far field
        for i in range(self.n1):
            r = self.cv(self.N - 1, i)
            add(r, self.cv(self.N - 1, i), 1.0)
        add(self.cw(self.N - 1), self.cw(self.N - 1), 1.0)

        matrix = csc_matrix(
            (np.asarray(vals, dtype=complex), (rows, cols)),
            shape=(self.size, self.size),
        )
        try:
            self.lu = splu(matrix, permc_spec="NATURAL")
        except RuntimeError as exc:
            raise SingularDiscreteSystem(str(exc)) from exc

    def boundary_rhs(self, h_v, h_w):
        rhs = np.zeros(self.size, dtype=complex)
        h_v = np.atleast_1d(np.asarray(h_v, dtype=complex))
        for i in range(self.n1):
            rhs[self.cv(0, i)] = h_v[i]
        rhs[self.cw(0)] = h_w
        return rhs

    def unpack(self, sol):
        v = np.empty((self.N, self.n1), dtype=complex)
        w = np.empty(self.N, dtype=complex)
        p = np.empty(self.N - 1, dtype=complex)
        for j in range(self.N):
            for i in range(self.n1):
                v[j, i] = sol[self.cv(j, i)]
            w[j] = sol[self.cw(j)]
            if j < self.N - 1:
                p[j] = sol[self.cp(j)]
        return v, w, p

    def solve(self, rhs):
        return self.lu.solve(rhs)


def fd_mode_bvp(params: ModelParams, mode: Mode, bc: BoundaryCondition,
                data, ygrid: YGrid) -> DiscreteProfile:
    """Finite-difference solve of one mode's boundary value problem."""
    if mode.zeta_abs == 0.0:
        raise ValueError("fd_mode_bvp requires a nonzero tangential mode")
    system = _ModeSystem(params, mode.lam, mode.xi, bc, ygrid)
    sol = system.solve(system.boundary_rhs(data.h_v, data.h_w))
    v, w, p = system.unpack(sol)
    return DiscreteProfile(ygrid.nodes, ygrid.midpoints, v, w, p)


def step_ibvp(params: ModelParams, xi, bc: BoundaryCondition, h_of_t,
              ygrid: YGrid, timegrid: TimeGrid):
    """Implicit Euler time stepping of one mode with zero initial data.

    The pressure is carried as an unknown and the discrete divergence row is
    enforced at every time level, so the constraint coupling stays exact.
    h_of_t maps a time to the boundary datum pair (h_v, h_w).
    Returns (times, v, w, p_mid) with a leading time axis.
    """
    dt = timegrid.dt
    system = _ModeSystem(params, 1.0 / dt, xi, bc, ygrid)
    n1, N = system.n1, system.N
    K = timegrid.n_steps
    v = np.zeros((K + 1, N, n1), dtype=complex)
    w = np.zeros((K + 1, N), dtype=complex)
    p = np.zeros((K + 1, N - 1), dtype=complex)
    dyn_tan = bc in (BoundaryCondition.TDO, BoundaryCondition.FDO)
    dyn_nor = bc in (BoundaryCondition.NDO, BoundaryCondition.FDO)
    alpha = params.alpha
    for k in range(K):
        t_next = (k + 1) * dt
        h_v, h_w = h_of_t(t_next)
        rhs = system.boundary_rhs(h_v, h_w)
        if dyn_tan:
            for i in range(n1):
                rhs[system.cv(0, i)] += alpha / dt * v[k, 0, i]
        if dyn_nor:
            rhs[system.cw(0)] += alpha / dt * w[k, 0]
        for j in range(1, N - 1):
            for i in range(n1):
                rhs[system.cv(j, i)] += v[k, j, i] / dt
            rhs[system.cw(j)] += w[k, j] / dt
        sol = system.solve(rhs)
        v[k + 1], w[k + 1], p[k + 1] = system.unpack(sol)
    return timegrid.times, v, w, p


def talbot_invert(symbol_fn, t, n_nodes) -> complex:
    """Numerical inverse Laplace transform on the fixed Talbot contour.

    The contour is s(theta) = r*theta*(cot(theta) + i) with r = 2*M/(5*t)
    and M = n_nodes; the trapezoid rule over theta in (-pi, pi) gives

        f(t) ~ r/(2M) * sum_k exp(t*s_k) * F(s_k) * (1 + i*sigma_k),

    summed over k = -(M-1)..(M-1).  The full two-sided sum is kept so that
    transforms without conjugate symmetry invert correctly.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    M = int(n_nodes)
    if M < 2:
        raise ValueError("n_nodes must be at least 2")
    r = 2.0 * M / (5.0 * t)
    total = 0.0 + 0.0j
    for k in range(-(M - 1), M):
        theta = k * np.pi / M
        if k == 0:
            s = complex(r)
            sigma = 0.0
        else:
            cot = np.cos(theta) / np.sin(theta)
            s = r * theta * (cot + 1j)
            sigma = theta + (theta * cot - 1.0) * cot
        total += np.exp(t * s) * symbol_fn(s) * (1.0 + 1j * sigma)
    return total * r / (2.0 * M)


def write_timeseries_csv(path, times, y, fields):
    """Long-format dump: one row per (t, y, field) with re/im columns."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("t,y,field_name,re,im\n")
        for name, arr in fields.items():
            for k, t in enumerate(times):
                for j, yj in enumerate(y):
                    val = complex(arr[k, j])
                    f.write(f"{float(t)!r},{float(yj)!r},{name},"
                            f"{val.real!r},{val.imag!r}\n")
