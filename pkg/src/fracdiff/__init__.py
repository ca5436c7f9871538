"""Smooth-particle solvers for the 1D space-fractional diffusion equation

    du/dt = D^alpha u,   1 < alpha < 2,

on an unbounded domain, with four schemes for the fractional diffusion term
(direct differentiation, flux PSE, regularized-Riesz PSE, Green's-function
PSE), explicit RK time integration, spectral stability analysis, and the
error/convergence harness to study them.
"""

__version__ = "0.1.0"

from .errors import (AccuracyError, ConfigError, DomainError, FracdiffError,
                     InstabilityError)
from .greens import (FractionalOrder, ReducedGreenEval, characteristic_width,
                     green_function, reduced_green)
from .specfun import (DEFAULT_SWITCH_RADIUS, EvalRegime, PcfOrder, Regime,
                      pcf_d, pcf_u, pcf_v, s_combo, t_combo)
from .kernels import (CBeta, KernelKind, KernelSpec, c_beta, eta, eta1,
                      kernel_e, kernel_f, kernel_gd, kernel_k, kernel_kappa,
                      phi, scaled)
from .field import (DomainSpec, ParticleField, eval_flux, eval_u, eval_utilde,
                    init_uniform, total_strength)
from .schemes import (SchemeKind, assemble_matrix, make_gpse_stepper,
                      make_rate_operator, rhs_dd, rhs_fpse, rhs_kpse,
                      rhs_rlpse, step_gpse)
from .timeint import (IntegratorSpec, RKOrder, StabilityReport, integrate,
                      power_iteration_min_eig, stability_limit_check)
from .analysis import (ConvergenceLevel, ErrorReport, conservation_drift,
                       nested_levels, rel_l1_error, self_convergence_order)
from .experiments import ExperimentConfig, StudyKind, parse_config, run
