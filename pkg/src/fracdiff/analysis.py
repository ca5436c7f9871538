"""Error metrics and convergence-order estimation.

The accuracy measure is the relative L1 error over a centered subinterval
|x| <= d_eps, with the particle-sum numerator and the exact-solution integral
in the denominator:

    err = sum_{|x_i|<=d_eps} V_i |u_i - G0(x_i, t)|  /  int_{-d_eps}^{d_eps} |G0(x, t)| dx.

Self-convergence orders come from triples of runs whose control parameter
halves between levels:

    p = log2( sum_I |u^(l) - u^(l+1)| / sum_I |u^(l+1) - u^(l+2)| )

restricted to the particles shared by all three levels (on nested grids
N -> 2N-1 the coarse nodes are every second, resp. fourth, fine node).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .errors import DomainError
from .field import ParticleField, total_strength
from .greens import green_function

__all__ = [
    "ErrorReport",
    "ConvergenceLevel",
    "rel_l1_error",
    "self_convergence_order",
    "conservation_drift",
    "nested_levels",
]


@dataclass(frozen=True)
class ErrorReport:
    rel_l1: float
    d_eps: float
    mass_drift: float
    meta: dict = dc_field(default_factory=dict)


def exact_mass(field_order, t: float, d_eps: float) -> float:
    """int_{-d_eps}^{d_eps} |G0| dx by adaptive quadrature (G0 > 0)."""
    val, _ = quad(lambda x: green_function(field_order, x, t), 0.0, d_eps,
                  epsabs=1e-12, epsrel=1e-10, limit=200)
    return 2.0 * val


def rel_l1_error(field: ParticleField, t: float, d_eps: float) -> float:
    """Relative L1 error of the field against the fundamental solution at t."""
    mask = np.abs(field.positions) <= d_eps
    if not mask.any():
        raise DomainError(f"no particles inside |x| <= {d_eps}")
    exact = green_function(field.order, field.positions[mask], t)
    num = math.fsum(field.volumes[mask] * np.abs(field.strengths[mask] - exact))
    den = exact_mass(field.order, t, d_eps)
    return num / den


@dataclass(frozen=True)
class ConvergenceLevel:
    """One refinement level: halving parameter and common-set strengths."""

    level: int
    parameter: float
    strengths: np.ndarray


def nested_levels(fields: Sequence[ParticleField], parameters: Sequence[float]) -> list[ConvergenceLevel]:
    """Build levels from nested uniform grids (N, 2N-1, 4N-3, ...).

    Strengths are restricted to the coarsest grid's nodes, which are every
    2^k-th node of level k; positions are checked to actually coincide.
    """
    if len(fields) != len(parameters):
        raise DomainError("one parameter per field is required")
    coarse = fields[0]
    out = []
    for lvl, (f, p) in enumerate(zip(fields, parameters)):
        stride = (len(f) - 1) // (len(coarse) - 1) if len(coarse) > 1 else 1
        if stride * (len(coarse) - 1) != len(f) - 1:
            raise DomainError(f"level {lvl} grid is not a refinement of level 0")
        pos = f.positions[::stride]
        if not np.allclose(pos, coarse.positions, rtol=0.0,
                           atol=1e-9 * max(1.0, abs(coarse.positions[-1]))):
            raise DomainError(f"level {lvl} nodes do not contain the coarse nodes")
        out.append(ConvergenceLevel(level=lvl, parameter=float(p),
                                    strengths=f.strengths[::stride].copy()))
    return out


def self_convergence_order(levels: Sequence[ConvergenceLevel]) -> float:
    """Observed order p from three levels with halved parameter."""
    if len(levels) != 3:
        raise DomainError("self-convergence needs exactly three levels")
    l0, l1, l2 = levels
    for a, b in ((l0, l1), (l1, l2)):
        ratio = a.parameter / b.parameter
        if abs(ratio - 2.0) > 1e-9:
            raise DomainError(f"parameters must halve between levels, got ratio {ratio}")
    if not (len(l0.strengths) == len(l1.strengths) == len(l2.strengths)):
        raise DomainError("levels must share a common particle index set")
    num = math.fsum(np.abs(l0.strengths - l1.strengths))
    den = math.fsum(np.abs(l1.strengths - l2.strengths))
    if den == 0.0:
        raise DomainError("degenerate level difference (zero denominator)")
    return math.log2(num / den)


def conservation_drift(history: Sequence[ParticleField]) -> float:
    """max_n |S_n - S_0| / |S_0| over a sequence of snapshots."""
    if len(history) < 2:
        raise DomainError("conservation drift needs at least two snapshots")
    s0 = total_strength(history[0])
    scale = abs(s0) if s0 != 0.0 else 1.0
    return max(abs(total_strength(f) - s0) for f in history[1:]) / scale
