import math

import numpy as np
import pytest

from fracdiff.errors import ConfigError, DomainError
from fracdiff.field import (DomainSpec, ParticleField, eval_flux, eval_u,
                            eval_utilde, init_uniform, total_strength)
from fracdiff.greens import FractionalOrder, green_function
from fracdiff.kernels import KernelKind, KernelSpec, scaled

from oracles import central_first, utilde_quad

ORDER = FractionalOrder.from_beta(0.5)


def small_field(n=41, D=4.0, overlap=2.0, init=None):
    dom = DomainSpec(half_width_D=D, n_particles=n)
    return init_uniform(dom, ORDER, overlap, init or (lambda x: np.exp(-x * x)))


def test_reference_grid_geometry():
    dom = DomainSpec(half_width_D=357.5, n_particles=32001)
    f = init_uniform(dom, ORDER, 2.0, lambda x: np.zeros_like(x))
    h = f.uniform_spacing()
    assert h == pytest.approx(2.234e-2, rel=1e-3)
    assert f.epsilon == pytest.approx(2 * h, rel=1e-12)
    assert f.positions[len(f) // 2] == 0.0
    assert f.positions[0] == pytest.approx(-357.5, rel=1e-12)
    assert f.positions[-1] == pytest.approx(357.5, rel=1e-12)


def test_three_particle_grid():
    dom = DomainSpec(half_width_D=1.0, n_particles=3)
    f = init_uniform(dom, ORDER, 2.0, lambda x: np.ones_like(x))
    assert np.allclose(f.positions, [-1.0, 0.0, 1.0], atol=0)
    assert np.all(f.volumes == 1.0)


def test_width_rule():
    dom = DomainSpec.from_width_rule(C=160.0, t_f=1.5, order=ORDER, n_particles=32001)
    assert dom.half_width_D == pytest.approx(357.5, abs=0.5)
    assert dom.width_rule_C == 160.0


def test_even_count_rejected():
    with pytest.raises(ConfigError):
        DomainSpec(half_width_D=1.0, n_particles=4)


def test_overlap_below_one_rejected():
    dom = DomainSpec(half_width_D=1.0, n_particles=5)
    with pytest.raises(ConfigError):
        init_uniform(dom, ORDER, 0.5, lambda x: np.zeros_like(x))


def test_field_validation():
    with pytest.raises(DomainError):
        ParticleField(np.array([0.0, 0.0]), np.array([1.0, 1.0]),
                      np.array([0.0, 0.0]), 1.0, ORDER)
    with pytest.raises(DomainError):
        ParticleField(np.array([0.0, 1.0]), np.array([1.0, -1.0]),
                      np.array([0.0, 0.0]), 1.0, ORDER)


def test_eval_u_single_particle():
    f = ParticleField(np.array([0.0]), np.array([1.0]), np.array([1.0]), 0.7, ORDER)
    spec = KernelSpec(KernelKind.ETA, ORDER, 0.7)
    for x in (0.0, 0.3, -1.1):
        assert eval_u(f, x) == pytest.approx(scaled(spec, x), rel=1e-14)


def test_eval_u_zero_field():
    f = small_field(init=lambda x: np.zeros_like(x))
    assert eval_u(f, 0.37) == 0.0


def test_eval_u_reference_peak():
    dom = DomainSpec(half_width_D=22.4, n_particles=2001)
    f = init_uniform(dom, ORDER, 2.0, lambda x: green_function(ORDER, x, 0.5))
    assert eval_u(f, 0.0) == pytest.approx(green_function(ORDER, 0.0, 0.5), rel=1e-3)


def test_eval_u_collocation_second_order():
    # |eval_u(x_i) - u_i| = O(h^2): halving h cuts the defect ~4x at a fixed
    # physical location
    defects = []
    for n in (41, 81):
        f = small_field(n=n)
        h = f.uniform_spacing()
        i = len(f) // 2 + int(round(0.6 / h))
        defects.append(abs(eval_u(f, f.positions[i]) - f.strengths[i]))
    assert defects[0] / defects[1] == pytest.approx(4.0, rel=0.25)


def test_eval_utilde_even_and_single_particle():
    f = small_field()
    assert eval_utilde(f, 1.3) == pytest.approx(eval_utilde(f, -1.3), rel=1e-12)
    g = ParticleField(np.array([0.0]), np.array([1.0]), np.array([1.0]), 0.9, ORDER)
    spec = KernelSpec(KernelKind.KAPPA_BETA, ORDER, 0.9)
    x = 0.55
    expected = 0.9 ** (1.0 - ORDER.beta) * scaled(spec, x)
    assert eval_utilde(g, x) == pytest.approx(expected, rel=1e-13)


def test_eval_utilde_quadrature_oracle():
    f = small_field(n=21, D=2.0)
    x0 = 0.4
    ref = utilde_quad(lambda xi: eval_u(f, xi), x0, ORDER.beta)
    assert eval_utilde(f, x0) == pytest.approx(ref, rel=1e-6)


def test_eval_flux_symmetry():
    f = small_field()
    assert eval_flux(f, 0.0) == pytest.approx(0.0, abs=1e-14)
    assert eval_flux(f, 0.8) == pytest.approx(-eval_flux(f, -0.8), rel=1e-12)


def test_eval_flux_single_particle_oracle():
    # Q(x) = -c_beta d/dx int eta_eps(xi) |x-xi|^-beta dxi for a unit particle
    eps = 0.8
    g = ParticleField(np.array([0.0]), np.array([1.0]), np.array([1.0]), eps, ORDER)
    spec = KernelSpec(KernelKind.ETA, ORDER, eps)
    x0 = 0.9
    ref = -central_first(lambda x: utilde_quad(lambda s: scaled(spec, s), x, ORDER.beta),
                         x0, 1e-4)
    assert eval_flux(g, x0) == pytest.approx(ref, rel=1e-6)


def test_eval_flux_decays_at_domain_edge():
    dom = DomainSpec(half_width_D=22.4, n_particles=1001)
    f = init_uniform(dom, ORDER, 2.0, lambda x: green_function(ORDER, x, 0.5))
    inner = abs(eval_flux(f, 2.0))
    outer = abs(eval_flux(f, 21.5))
    assert outer < 0.05 * inner


def test_total_strength():
    f = small_field(init=lambda x: np.zeros_like(x))
    assert total_strength(f) == 0.0
    dom = DomainSpec(half_width_D=357.5, n_particles=8001)  # reference-width domain
    g = init_uniform(dom, ORDER, 2.0, lambda x: green_function(ORDER, x, 0.5))
    assert total_strength(g) == pytest.approx(1.0, abs=1e-3)
    # exact summation: any ordering of the addends gives the same float
    terms = g.volumes * g.strengths
    rng = np.random.default_rng(0)
    for _ in range(3):
        perm = rng.permutation(len(terms))
        assert math.fsum(terms[perm]) == total_strength(g)
