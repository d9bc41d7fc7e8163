"""Closed-form per-mode solvers for the scalar building blocks.

The vector solves decompose into scalar one-exponential problems: a
diffusion mode with a dynamic boundary row, a diffusion mode with a
Dirichlet trace, and harmonic modes carrying the pressure.  Each returns an
amplitude and a decay rate; the profile is amplitude * exp(-decay_rate * y).
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass

from .errors import SingularSymbol, ZeroTangentialMode

_TINY = 1e-300


class KernelKind(enum.Enum):
    HEAT = "Heat"
    LAPLACE = "Laplace"


@dataclass(frozen=True)
class ScalarModeProfile:
    amplitude: complex
    decay_rate: complex
    kind: KernelKind

    def value(self, y):
        return self.amplitude * cmath.exp(-self.decay_rate * y)

    def derivative(self, y):
        return -self.decay_rate * self.value(y)


def heat_dbc_mode(alpha_b, beta_b, mu_diff, epsilon, lam, xi, h_hat) -> ScalarModeProfile:
    """Diffusion mode under alpha_b*(d/dt + eps)[u] - beta_b*[du/dy] = h.

    The decaying solution is tau * exp(-(omega/sqrt(mu)) y) with
    tau = sqrt(mu)*h / (alpha_b*sqrt(mu)*lambda_eps + beta_b*omega).
    """
    if alpha_b <= 0 or beta_b <= 0 or mu_diff <= 0:
        raise ValueError("alpha_b, beta_b, mu_diff must be positive")
    xi_abs = abs(xi)
    lame = complex(epsilon + lam)
    omega = cmath.sqrt(lame + mu_diff * xi_abs ** 2)
    smu = mu_diff ** 0.5
    den = alpha_b * smu * lame + beta_b * omega
    if abs(den) < _TINY:
        raise SingularSymbol(f"dynamic-row denominator {den} vanishes")
    return ScalarModeProfile(smu * h_hat / den, omega / smu, KernelKind.HEAT)


def heat_dirichlet_mode(mu_diff, epsilon, lam, xi, g_hat) -> ScalarModeProfile:
    """Diffusion mode with prescribed trace g at y = 0."""
    if mu_diff <= 0:
        raise ValueError("mu_diff must be positive")
    xi_abs = abs(xi)
    lame = complex(epsilon + lam)
    omega = cmath.sqrt(lame + mu_diff * xi_abs ** 2)
    return ScalarModeProfile(complex(g_hat), omega / mu_diff ** 0.5, KernelKind.HEAT)


def laplace_dirichlet_mode(xi, p_trace_hat) -> ScalarModeProfile:
    """Harmonic mode with prescribed boundary value: trace * exp(-|xi| y)."""
    xi_abs = abs(xi)
    if xi_abs == 0.0:
        raise ZeroTangentialMode("harmonic mode requires |xi| > 0")
    return ScalarModeProfile(complex(p_trace_hat), complex(xi_abs), KernelKind.LAPLACE)


def laplace_neumann_mode(xi, neumann_hat) -> ScalarModeProfile:
    """Harmonic mode with prescribed negative normal derivative at y = 0.

    Returns (g/|xi|) * exp(-|xi| y), so -d/dy at 0 recovers g.
    """
    xi_abs = abs(xi)
    if xi_abs == 0.0:
        raise ZeroTangentialMode("harmonic mode requires |xi| > 0")
    return ScalarModeProfile(complex(neumann_hat) / xi_abs, complex(xi_abs),
                             KernelKind.LAPLACE)
