"""Step densities, quartiles, fitting, arc alignment, and pushforwards."""

import math

import numpy as np
import pytest

from corona_lab.disc_geometry import OrthogonalArc, orthogonal_circle
from corona_lab.errors import (ConfigError, DomainError, InfeasibleError,
                               QuadratureError)
from corona_lab.functions import FunctionSpec, constant_function, identity_function
from corona_lab.measures import (CASE_LEFT, CASE_RIGHT, CASE_STRADDLE,
                                 SimpleDensity, TargetFunctional, align_arcs,
                                 fit_simple_density, poisson_integral,
                                 poisson_kernel, pushforward_density, quartiles)
from corona_lab.quadrature import integrate_piecewise

RNG = np.random.default_rng(771005)


def random_density(rng, max_pieces=4):
    # disjoint random supports with positive levels, then normalize
    cuts = np.sort(rng.uniform(-math.pi, math.pi, 2 * max_pieces))
    pieces = []
    for k in range(max_pieces):
        a, b = cuts[2 * k], cuts[2 * k + 1]
        if b - a > 1e-3:
            pieces.append((float(a), float(b), float(rng.uniform(0.2, 2.0))))
    if not pieces:
        return SimpleDensity.uniform()
    return SimpleDensity.normalized(tuple(pieces))


def test_density_validation():
    with pytest.raises(DomainError):
        SimpleDensity(((0.0, 1.0, 1.0),))                    # mass != 1
    with pytest.raises(DomainError):
        SimpleDensity.normalized(((0.5, 0.2, 1.0),))         # reversed arc
    with pytest.raises(DomainError):
        SimpleDensity.normalized(((-4.0, 0.0, 1.0),))        # outside [-pi, pi]
    with pytest.raises(DomainError):
        SimpleDensity.normalized(((0.0, 1.0, -1.0),))        # negative level
    with pytest.raises(DomainError):
        SimpleDensity.normalized(((0.0, 1.0, 1.0), (0.5, 2.0, 1.0)))  # overlap


def test_density_evaluation_half_open():
    s = SimpleDensity.uniform(-0.2, 0.2)
    level = s.pieces[0][2]
    assert s(-0.2) == level
    assert s(0.2) == 0.0
    assert s(0.0) == level
    assert s(3.0) == 0.0
    vals = s(np.array([-0.2, 0.0, 0.2]))
    assert vals.tolist() == [level, level, 0.0]
    # periodic wrap: 2pi shift hits the same piece
    assert s(2 * math.pi) == level


def test_cdf_tail_complementarity():
    for _ in range(10):
        s = random_density(RNG)
        for theta in np.concatenate([RNG.uniform(-math.pi, math.pi, 8),
                                     np.array(s.breakpoints())]):
            assert abs(s.cdf(theta) + s.tail(theta) - 1) < 1e-12
    s = SimpleDensity.uniform(-1.0, 1.0)
    assert s.cdf(-1.0) == 0.0
    assert abs(s.cdf(0.0) - 0.5) < 1e-15
    assert s.tail(1.0) == 0.0


def test_split_preserves_mass_and_canonical_merges():
    s = SimpleDensity.uniform(-1.0, 1.0)
    parts = s.split_at((-0.5, 0.25))
    assert len(parts) == 3
    total = sum((b - a) * c for a, b, c in parts) / (2 * math.pi)
    assert abs(total - 1) < 1e-12
    merged = SimpleDensity(tuple(parts)).canonical()
    assert merged.pieces == s.pieces


def test_density_dict_roundtrip_and_strictness():
    s = random_density(RNG)
    t = SimpleDensity.from_dict(s.to_dict())
    assert t.pieces == s.pieces
    with pytest.raises(ConfigError):
        SimpleDensity.from_dict({"pieces": [[0, 1, 1]], "extra": 1})


def test_poisson_kernel_values():
    assert poisson_kernel(0, 1.23) == 1.0
    assert abs(poisson_kernel(0.5, 0.0) - 3.0) < 1e-15
    # kernel has unit average
    theta = np.linspace(-math.pi, math.pi, 4096, endpoint=False)
    assert abs(np.mean(poisson_kernel(0.3 - 0.4j, theta)) - 1) < 1e-10


def test_poisson_integral_reproduces_interior_values():
    specs = [
        FunctionSpec.polynomial([1, 2j, -0.5]),
        FunctionSpec.finite_blaschke((0.3, -0.4j), 0.2),
        FunctionSpec.rational([1, 1], [-2, 0, 1]),
    ]
    for f in specs:
        for _ in range(5):
            z = complex(0.7 * RNG.uniform(0, 1)
                        * np.exp(1j * RNG.uniform(-math.pi, math.pi)))
            assert abs(poisson_integral(f, z) - f(z)) < 1e-10
    assert abs(poisson_integral(constant_function(1), 0.5) - 1) < 1e-14


def test_poisson_integral_tolerance_enforced():
    f = FunctionSpec.finite_blaschke((0.95,))
    with pytest.raises(QuadratureError) as exc:
        poisson_integral(f, 0.9, nodes=8, tol=1e-12)
    assert exc.value.estimate > 1e-12


def test_target_functional_screens_unreachable_values():
    with pytest.raises(InfeasibleError):
        TargetFunctional(((identity_function(), 5.0),))
    tf = TargetFunctional(((identity_function(), 0.5),))
    assert len(tf) == 1


def test_fit_empty_targets_gives_uniform():
    partition = [(-0.25 + 0.0625 * k, -0.25 + 0.0625 * (k + 1)) for k in range(8)]
    fit = fit_simple_density((), partition, eps=1e-3)
    levels = {c for _, _, c in fit.density.pieces}
    assert len(levels) == 1
    assert abs(fit.density.mass() - 1) < 1e-12
    assert fit.mass_error == 0.0


def test_fit_matches_moment_targets():
    # unit mass plus a first-moment target concentrated near angle zero
    partition = [(-0.25 + 0.5 * k / 64, -0.25 + 0.5 * (k + 1) / 64)
                 for k in range(64)]
    targets = ((constant_function(1), 1.0), (identity_function(), 0.99))
    fit = fit_simple_density(targets, partition, eps=1e-3)
    assert max(fit.residuals) < 1e-3
    assert fit.mass_error == 0.0
    assert all(c >= 0 for _, _, c in fit.density.pieces)
    assert abs(fit.density.mass() - 1) < 1e-12


def test_fit_infeasible_target_raises_with_residuals():
    partition = [(-0.25 + 0.5 * k / 16, -0.25 + 0.5 * (k + 1) / 16)
                 for k in range(16)]
    # support near angle 0 cannot average e^{i theta} anywhere close to -1
    with pytest.raises(InfeasibleError) as exc:
        fit_simple_density(((identity_function(), -1.0),), partition, eps=1e-3)
    assert exc.value.residuals and max(exc.value.residuals) > 1.5


def test_fit_partition_validation():
    with pytest.raises(DomainError):
        fit_simple_density((), [(0.2, 0.1)], eps=1e-3)
    with pytest.raises(DomainError):
        fit_simple_density((), [(0.0, 0.2), (0.1, 0.3)], eps=1e-3)
    with pytest.raises(DomainError):
        fit_simple_density((), [(-0.5, 0.5)], eps=1e-3, window=0.25)
    with pytest.raises(DomainError):
        fit_simple_density((), [], eps=1e-3)


def test_quartiles_uniform_and_tags():
    qp = quartiles(SimpleDensity.uniform(-2.0, 2.0))
    assert abs(qp.alpha + 1.0) < 1e-14
    assert abs(qp.beta - 1.0) < 1e-14
    assert qp.case_tag == CASE_STRADDLE
    assert quartiles(SimpleDensity.uniform(-2.0, -0.1)).case_tag == CASE_LEFT
    assert quartiles(SimpleDensity.uniform(0.1, 2.0)).case_tag == CASE_RIGHT


def test_quartiles_symmetric_exact_mirror():
    for _ in range(10):
        a = float(RNG.uniform(0.3, 3.0))
        b = float(RNG.uniform(0.05, a - 0.2)) if a > 0.3 else 0.1
        lo, hi = min(a, b), max(a, b)
        inner = float(RNG.uniform(0.2, 2.0))
        outer = float(RNG.uniform(0.2, 2.0))
        s = SimpleDensity.normalized((
            (-hi, -lo, outer), (-lo / 2, lo / 2, inner), (lo, hi, outer)))
        qp = quartiles(s)
        assert qp.beta == -qp.alpha   # exact float mirror, not approximate


def test_quartiles_window_changes_tag():
    s = SimpleDensity.uniform(0.1, 2.0)
    assert quartiles(s).case_tag == CASE_RIGHT
    assert quartiles(s, window=0.5).case_tag == CASE_LEFT


def test_align_case_a_hits_endpoints():
    s = SimpleDensity.uniform(-2.0, 2.0)
    target = OrthogonalArc(-0.6, 0.4)
    aligned = align_arcs(s, target, "a")
    qp = quartiles(aligned)
    assert abs(qp.alpha + 0.6) < 1e-10
    assert abs(qp.beta - 0.4) < 1e-10
    center, radius = orthogonal_circle(qp.alpha, qp.beta)
    assert abs(abs(target.midpoint - center) - radius) < 1e-8


def test_align_identity_returns_same_density():
    s = SimpleDensity.uniform(-2.0, 2.0)
    aligned = align_arcs(s, OrthogonalArc(-1.0, 1.0), "a")
    assert aligned.pieces == s.pieces


def test_align_cases_b_and_c_pass_through_midpoint():
    sb = SimpleDensity.uniform(0.1, 2.9)
    tb = OrthogonalArc(0.9, 2.0)
    ab = align_arcs(sb, tb, "b")
    qb = quartiles(ab)
    center, radius = orthogonal_circle(qb.alpha, qb.beta)
    assert abs(abs(tb.midpoint - center) - radius) < 1e-8

    sc = SimpleDensity.uniform(-2.9, -0.1)
    tc = OrthogonalArc(-2.0, -0.9)
    ac = align_arcs(sc, tc, "c")
    qc = quartiles(ac)
    center, radius = orthogonal_circle(qc.alpha, qc.beta)
    assert abs(abs(tc.midpoint - center) - radius) < 1e-8


def test_align_case_preconditions():
    s = SimpleDensity.uniform(-2.0, 2.0)
    with pytest.raises(DomainError):
        align_arcs(s, OrthogonalArc(-1.5, 0.4), "a")    # alpha below alpha#
    with pytest.raises(DomainError):
        align_arcs(s, OrthogonalArc(0.2, 0.4), "b")     # alpha# negative
    with pytest.raises(DomainError):
        align_arcs(s, OrthogonalArc(-0.6, 0.4), "z")


def test_align_infeasible_gap_support():
    s = SimpleDensity.normalized(((-2.0, -1.0, 1.0), (1.0, 2.0, 1.0)))
    with pytest.raises(InfeasibleError):
        align_arcs(s, OrthogonalArc(-0.5, 0.5), "a")


def test_pushforward_identity_center():
    s = random_density(RNG)
    u = pushforward_density(s, 0)
    for theta in RNG.uniform(-math.pi, math.pi, 16):
        assert abs(u(theta) - s(theta)) < 1e-14


def test_pushforward_mass_and_breakpoints():
    s = SimpleDensity.normalized(((-1.0, -0.2, 0.7), (0.3, 1.4, 1.1)))
    c = 0.37 - 0.21j
    u = pushforward_density(s, c)
    assert abs(u.mass() - 1) < 1e-10
    # breakpoints map forward onto the base discontinuities
    images = sorted(float(np.angle(u.automorphism.apply(np.exp(1j * t))))
                    for t in u.breakpoints)
    assert np.allclose(sorted(images), sorted(s.breakpoints()), atol=1e-12)
    assert np.all(u.jacobian(np.linspace(-3, 3, 7)) > 0)


def test_pushforward_change_of_variables():
    s = SimpleDensity.normalized(((-1.2, 0.4, 0.9), (0.8, 2.0, 0.6)))
    c = -0.3 + 0.45j
    u = pushforward_density(s, c)
    f = FunctionSpec.polynomial([0.2, 1.0, -0.7j])

    def lhs_integrand(theta):
        # f evaluated after the inverse boundary map, against the base density
        return np.asarray(f(u.automorphism.inverse(np.exp(1j * theta))),
                          dtype=complex)

    lhs = integrate_piecewise(
        lambda th: lhs_integrand(th) * s(th), s.breakpoints(), 4096)
    rhs = u.integrate(lambda th: f(np.exp(1j * th)), 4096)
    assert abs(lhs - rhs) < 1e-10
