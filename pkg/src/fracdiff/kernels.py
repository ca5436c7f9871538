"""Radial interaction kernels of the particle schemes.

All kernels are built from the squared-exponential mollifier

    eta(r) = exp(-r^2)/sqrt(pi)

and the parabolic-cylinder combinations S^nu, T^nu:

    kappa^beta(r) = 2^{(beta-3)/2}/(sqrt(pi) sin(beta pi/2)) S^beta(r)
    F(r)          = 2^{(beta-2)/2}/(sqrt(pi) sin(beta pi/2)) T^alpha(r)
    G^d(r)        = -2^{(alpha-2)/2}/(sqrt(pi) cos(alpha pi/2)) S^{alpha+1}(r)
    K(r)          = -(1/r) d(kappa^beta)/dr = -F(r)/r
    E(r)          = L0_alpha(r)

kappa is the |r|^-beta convolution of eta (the smoothed Riemann-Liouville
potential of a unit particle); F is its derivative (the flux kernel) and G^d
its second derivative (the Riesz derivative of the mollifier).  Scaled
variants follow the mollifier pattern k_eps(r) = (1/eps) k(r/eps).

Every kernel accepts scalar or ndarray arguments.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError
from .greens import FractionalOrder, reduced_green
from .specfun import gamma_rec, s_combo, t_combo

__all__ = [
    "KernelKind",
    "KernelSpec",
    "CBeta",
    "c_beta",
    "eta",
    "eta1",
    "phi",
    "kernel_gd",
    "kernel_kappa",
    "kernel_f",
    "kernel_k",
    "kernel_e",
    "scaled",
]

_SQRT_PI = math.sqrt(math.pi)

# below this |r| the exchange kernel K is evaluated by its analytic r -> 0 limit
_K_LIMIT_RADIUS = 1e-6


class KernelKind(enum.Enum):
    ETA = "eta"
    ETA1 = "eta1"
    PHI = "phi"
    GD = "gd"
    KAPPA_BETA = "kappa"
    F = "f"
    K = "k"
    E = "e"


@dataclass(frozen=True)
class CBeta:
    """The flux constant c_beta = 1/(2 Gamma(1-beta) sin(beta pi/2))."""

    beta: float
    value: float

    @classmethod
    def of(cls, beta: float) -> "CBeta":
        return cls(beta=beta, value=c_beta(beta))


def c_beta(beta: float) -> float:
    if not (0.0 < beta < 1.0):
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    return 1.0 / (2.0 * math.gamma(1.0 - beta) * math.sin(beta * math.pi / 2.0))


def _maybe_scalar(x, out):
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


def eta(r):
    """Unit-mass squared-exponential mollifier."""
    r = np.asarray(r, dtype=float)
    return _maybe_scalar(r, np.exp(-r * r) / _SQRT_PI)


def eta1(r):
    """First-derivative (divergence) kernel, odd: eta1(r) = -2r exp(-r^2)/sqrt(pi)."""
    ra = np.asarray(r, dtype=float)
    return _maybe_scalar(r, -2.0 * ra * np.exp(-ra * ra) / _SQRT_PI)


def phi(r):
    """Laplacian PSE kernel Phi(r) = -(1/r) d(eta)/dr = 2 exp(-r^2)/sqrt(pi)."""
    ra = np.asarray(r, dtype=float)
    return _maybe_scalar(r, 2.0 * np.exp(-ra * ra) / _SQRT_PI)


def kernel_gd(alpha, r):
    """Direct-differentiation kernel G^d_alpha(r) (even)."""
    order = alpha if isinstance(alpha, FractionalOrder) else FractionalOrder(float(alpha))
    a = order.alpha
    pref = -(2.0 ** ((a - 2.0) / 2.0)) / (_SQRT_PI * math.cos(math.pi * a / 2.0))
    return pref * s_combo(a + 1.0, r)


def kernel_kappa(beta: float, r):
    """Smoothed Riemann-Liouville kernel kappa^beta(r) (even, ~ c_beta r^-beta)."""
    if not (0.0 < beta < 1.0):
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    pref = 2.0 ** ((beta - 3.0) / 2.0) / (_SQRT_PI * math.sin(beta * math.pi / 2.0))
    return pref * s_combo(beta, r)


def kernel_f(alpha, r):
    """Flux kernel F(r) = d(kappa^beta)/dr (odd, negative for r > 0)."""
    order = alpha if isinstance(alpha, FractionalOrder) else FractionalOrder(float(alpha))
    b = order.beta
    pref = 2.0 ** ((b - 2.0) / 2.0) / (_SQRT_PI * math.sin(b * math.pi / 2.0))
    return pref * t_combo(order.alpha, r)


def _k_at_origin(order: FractionalOrder) -> float:
    # K(0) = -F'(0) = -2^alpha / (sin(beta pi/2) Gamma((1-alpha)/2))
    a = order.alpha
    return -(2.0 ** a) * gamma_rec((1.0 - a) / 2.0) / math.sin(order.beta * math.pi / 2.0)


def kernel_k(alpha, r):
    """Strength-exchange kernel K(r) = -F(r)/r (even, positive).

    The removable singularity at r = 0 is replaced by the analytic limit
    -F'(0) for |r| < 1e-6.
    """
    order = alpha if isinstance(alpha, FractionalOrder) else FractionalOrder(float(alpha))
    ra = np.asarray(r, dtype=float)
    out = np.empty_like(ra)
    tiny = np.abs(ra) < _K_LIMIT_RADIUS
    if tiny.any():
        out[tiny] = _k_at_origin(order)
    if (~tiny).any():
        rr = ra[~tiny]
        out[~tiny] = -np.asarray(kernel_f(order, rr)) / rr
    return _maybe_scalar(r, out)


def kernel_e(alpha, r):
    """Green's-function kernel E(r) = L0_alpha(r) (even, positive, decaying)."""
    return reduced_green(alpha, r)


@dataclass(frozen=True)
class KernelSpec:
    """One radial kernel together with its order and smoothing length."""

    kind: KernelKind
    order: FractionalOrder
    epsilon: float

    def __post_init__(self):
        if not (self.epsilon > 0.0 and math.isfinite(self.epsilon)):
            raise DomainError(f"epsilon must be positive, got {self.epsilon}")


_DISPATCH = {
    KernelKind.ETA: lambda order, r: eta(r),
    KernelKind.ETA1: lambda order, r: eta1(r),
    KernelKind.PHI: lambda order, r: phi(r),
    KernelKind.GD: kernel_gd,
    KernelKind.KAPPA_BETA: lambda order, r: kernel_kappa(order.beta, r),
    KernelKind.F: kernel_f,
    KernelKind.K: kernel_k,
    KernelKind.E: kernel_e,
}


def unscaled(kind: KernelKind, order: FractionalOrder, r):
    """Evaluate the unscaled kernel of the given kind."""
    return _DISPATCH[kind](order, r)


def scaled(spec: KernelSpec, r):
    """Mollifier scaling: k_eps(r) = (1/eps) k(r/eps)."""
    ra = np.asarray(r, dtype=float)
    out = np.asarray(unscaled(spec.kind, spec.order, ra / spec.epsilon)) / spec.epsilon
    return _maybe_scalar(r, out)
