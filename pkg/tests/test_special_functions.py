"""Tests for Bessel evaluation, archimedean factors, the line-integral
engine, and the analytic kernels."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbert_moments.fields import make_field
from hilbert_moments.special_functions import (
    BudgetError,
    Const,
    GammaAtom,
    InvS,
    MellinIntegrandSpec,
    PoleError,
    Power,
    SpecError,
    ZetaAtom,
    arch_l_atoms,
    arch_l_factor,
    bessel_j,
    bessel_j_mellin,
    bessel_j_vec,
    digamma_vec,
    hurwitz_zeta_vec,
    kernel_F,
    kernel_F_batch,
    kernel_F_closed_form,
    kernel_F_derivative,
    kernel_F_derivative_batch,
    kernel_G,
    kernel_G_batch,
    kernel_G_derivative,
    kernel_G_derivative_batch,
    loggamma_vec,
    mellin_line_integral,
)

Q = make_field("Q")
Q5 = make_field("Qsqrt5")


# ---------------------------------------------------------------------------
# low-level vectorized special functions
# ---------------------------------------------------------------------------


@given(st.floats(0.3, 20), st.floats(-60, 60))
@settings(max_examples=60, deadline=None)
def test_loggamma_vec_matches_reference(x, t):
    z = complex(x, t)
    mine = complex(loggamma_vec(np.array([z]))[0])
    ref = complex(mpmath.loggamma(z))
    assert abs(mine - ref) < 1e-11 * (1 + abs(ref))


@given(st.floats(0.5, 20), st.floats(-60, 60))
@settings(max_examples=60, deadline=None)
def test_digamma_vec_matches_reference(x, t):
    z = complex(x, t)
    mine = complex(digamma_vec(np.array([z]))[0])
    ref = complex(mpmath.digamma(z))
    assert abs(mine - ref) < 1e-10 * (1 + abs(ref))


@given(st.floats(1.5, 6), st.floats(-40, 40), st.floats(0.05, 1.0))
@settings(max_examples=40, deadline=None)
def test_hurwitz_zeta_vec_matches_reference(sig, t, a):
    w = complex(sig, t)
    mine = complex(hurwitz_zeta_vec(np.array([w]), a)[0])
    ref = complex(mpmath.zeta(w, a))
    assert abs(mine - ref) < 1e-10 * (1 + abs(ref))


# ---------------------------------------------------------------------------
# Bessel J
# ---------------------------------------------------------------------------


def test_bessel_first_order_at_one():
    assert abs(bessel_j(1, 1.0) - 0.4400505857449335) < 1e-12


def test_bessel_at_zero_and_validation():
    assert bessel_j(3, 0.0) == 0.0
    with pytest.raises(SpecError):
        bessel_j(0, 1.0)
    with pytest.raises(SpecError):
        bessel_j(1, -1.0)


@given(st.integers(1, 13), st.floats(0.0, 120.0))
@settings(max_examples=120, deadline=None)
def test_bessel_matches_reference_both_regimes(nu, x):
    mine = bessel_j(nu, x)
    ref = float(mpmath.besselj(nu, x))
    assert abs(mine - ref) < 2e-9


@given(st.integers(1, 11))
@settings(max_examples=10, deadline=None)
def test_bessel_vec_matches_scalar(nu):
    xs = np.array([0.0, 0.03, 0.7, 2.0, nu + 9.9, nu + 10.1, 40.0, 300.0])
    vec = bessel_j_vec(nu, xs)
    for x, v in zip(xs, vec):
        assert abs(v - bessel_j(nu, x)) < 2e-10


def test_bessel_series_and_line_integral_agree():
    # the two independent evaluation routes on a fixed grid
    for nu in (1, 3, 11):
        for x in (0.1, 1.0, 5.0):
            line = bessel_j_mellin(nu, x)
            direct = bessel_j(nu, x)
            assert abs(line.value.real - direct) <= 1e-8
            assert abs(line.value.imag) < 1e-12


# ---------------------------------------------------------------------------
# archimedean L-factor
# ---------------------------------------------------------------------------


def test_arch_factor_weight_two_center():
    assert abs(arch_l_factor(2, 0.5) - 1 / (2 * math.pi)) < 1e-14


def test_arch_factor_two_components_squares():
    one = arch_l_factor(2, 0.5)
    two = arch_l_factor((2, 2), 0.5)
    assert abs(two - one * one) < 1e-16


def test_arch_factor_weight_twelve():
    expect = 120.0 / (2 * math.pi) ** 6
    assert abs(arch_l_factor(12, 0.5) - expect) < 1e-15


def test_arch_factor_flags_poles():
    with pytest.raises(PoleError):
        arch_l_factor(2, -0.5)          # gamma argument 0
    with pytest.raises(PoleError):
        arch_l_factor(2, -1.5)          # gamma argument -1


def test_arch_factor_rejects_odd_or_small_weights():
    with pytest.raises(SpecError):
        arch_l_factor(3, 0.5)
    with pytest.raises(SpecError):
        arch_l_factor(0, 0.5)


# ---------------------------------------------------------------------------
# the line-integral engine
# ---------------------------------------------------------------------------


def test_exponential_recovery():
    # Gamma(s) y^{-s} on a right line sums the exponential exactly
    spec = MellinIntegrandSpec(2.0, (GammaAtom(0.0, 1.0, 1), Power(1.0)))
    res = mellin_line_integral(spec)
    assert abs(res.value.real - math.exp(-1)) < 1e-10
    assert abs(res.value.imag) < 1e-12


def test_exponential_recovery_other_arguments():
    for y in (0.25, 1.7, 4.0):
        spec = MellinIntegrandSpec(2.0, (GammaAtom(0.0, 1.0, 1), Power(y)))
        res = mellin_line_integral(spec)
        assert abs(res.value.real - math.exp(-y)) < 1e-10


def test_step_function_truncation():
    spec = MellinIntegrandSpec(2.0, (Power(0.5), InvS()), T=1e4)
    res = mellin_line_integral(spec)
    assert abs(res.value.real - 1.0) <= 1e-6
    spec = MellinIntegrandSpec(2.0, (Power(2.0), InvS()), T=1e4)
    res = mellin_line_integral(spec)
    assert abs(res.value.real) <= 1e-6


def test_error_report_covers_truncation():
    spec = MellinIntegrandSpec(2.0, (Power(0.5), InvS()), T=1e4)
    res = mellin_line_integral(spec)
    assert abs(res.value.real - 1.0) <= res.error
    assert res.error < 1e-5


def test_scalar_multiple_is_linear():
    base = MellinIntegrandSpec(2.0, (GammaAtom(0.0, 1.0, 1), Power(1.0)))
    scaled = MellinIntegrandSpec(
        2.0, (Const(3.75), GammaAtom(0.0, 1.0, 1), Power(1.0))
    )
    a = mellin_line_integral(base).value.real
    b = mellin_line_integral(scaled).value.real
    assert abs(b - 3.75 * a) < 1e-12


def test_rejects_non_integrable_spec():
    with pytest.raises(SpecError):
        mellin_line_integral(MellinIntegrandSpec(2.0, (Power(1.0), InvS())))
    with pytest.raises(SpecError):
        mellin_line_integral(MellinIntegrandSpec(2.0, (Power(0.5),)))


def test_rejects_zeta_outside_convergence():
    with pytest.raises(SpecError):
        mellin_line_integral(
            MellinIntegrandSpec(0.01, (ZetaAtom(Q), Power(0.5), InvS(power=2)))
        )


def test_rejects_abscissa_on_pole():
    with pytest.raises(PoleError):
        mellin_line_integral(
            MellinIntegrandSpec(0.0, (GammaAtom(0.0, 1.0, 1), Power(0.5)))
        )


def test_budget_exhaustion_is_loud():
    spec = MellinIntegrandSpec(2.0, (Power(0.5), InvS()), T=1e4)
    with pytest.raises(BudgetError):
        mellin_line_integral(spec, budget=1000)


def test_diagnostics_present():
    res = mellin_line_integral(
        MellinIntegrandSpec(2.0, (GammaAtom(0.0, 1.0, 1), Power(1.0)))
    )
    for key in ("nodes", "T", "tail", "discretization", "rounding"):
        assert key in res.diagnostics


# ---------------------------------------------------------------------------
# kernel F
# ---------------------------------------------------------------------------


def test_first_kernel_against_closed_form_grid():
    # 20 log-spaced points, high-precision route vs incomplete-gamma oracle
    ys = np.logspace(math.log10(0.01), math.log10(10.0), 20)
    for y in ys:
        got = kernel_F(float(y), 2, precision="high").value
        ref = float(kernel_F_closed_form(float(y), 2, dps=40))
        assert abs(got - ref) <= 1e-8 * abs(ref)


def test_first_kernel_double_route_moderate_arguments():
    for y in (0.001, 0.05, 0.3, 1.0, 2.0):
        got = kernel_F(y, 2).value
        ref = float(kernel_F_closed_form(y, 2))
        assert abs(got - ref) <= 1e-10 * abs(ref) + 1e-16


def test_first_kernel_value_at_half():
    got = kernel_F(0.5, 2).value
    assert abs(got - math.exp(-math.pi) / (2 * math.pi)) < 1e-12
    assert abs(got - 0.0068739) < 5e-6


def test_first_kernel_small_argument_limit():
    assert abs(kernel_F(1e-8, 2).value - 1 / (2 * math.pi)) < 1e-6


def test_first_kernel_bounded_below_one():
    ys = np.logspace(-3, 0, 12)
    vals = kernel_F_batch(ys, 2)
    assert np.all(vals > 0)
    assert np.all(vals <= 1 / (2 * math.pi) + 1e-12)


def test_first_kernel_monotone_decreasing():
    ys = np.logspace(-3, 0.4, 20)
    vals = kernel_F_batch(ys, 2)
    assert np.all(np.diff(vals) < 0)


def test_first_kernel_far_decay():
    assert abs(kernel_F(10.0, 2, precision="high").value) < 1e-20
    for y in (10.0, 20.0, 50.0):
        assert abs(kernel_F(y, 2, precision="high").value) <= y ** -5


def test_first_kernel_two_components():
    # product archimedean factor: still positive, bounded, decreasing
    vals = kernel_F_batch(np.array([0.01, 0.1, 1.0, 3.0]), (2, 2))
    assert np.all(vals > 0)
    assert np.all(np.diff(vals) < 0)
    limit = float(arch_l_factor((2, 2), 0.5))
    assert abs(kernel_F(1e-9, (2, 2)).value - limit) < 1e-7


def test_first_kernel_higher_weight():
    got = kernel_F(0.25, 12).value
    ref = float(kernel_F_closed_form(0.25, 12))
    assert abs(got - ref) <= 1e-10 * abs(ref)


def test_kernel_rejects_bad_arguments():
    with pytest.raises(SpecError):
        kernel_F(-1.0, 2)
    with pytest.raises(SpecError):
        kernel_F(0.5, 5)
    with pytest.raises(BudgetError):
        kernel_F(0.5, 2, budget=10)


@given(st.floats(1e-3, 2.0))
@settings(max_examples=30, deadline=None)
def test_first_kernel_tracks_closed_form(y):
    got = kernel_F(y, 2)
    ref = float(kernel_F_closed_form(y, 2))
    assert abs(got.value - ref) <= 1e-8 * abs(ref) + 1e-15


# ---------------------------------------------------------------------------
# kernel G and the local-factor removal
# ---------------------------------------------------------------------------


def test_second_kernel_positive_and_monotone():
    ys = np.array([0.001, 0.01, 0.1, 0.5, 1.0, 2.0, 4.0])
    vals = kernel_G_batch(ys, 2, Q)
    assert np.all(vals > 0)
    assert np.all(np.diff(vals) < 0)


def test_second_kernel_logarithmic_blowup():
    # near 0 the kernel grows like (residue/2) * L(center)^2 * log(1/y);
    # over the rationals that slope is 1/(8 pi^2)
    a = kernel_G(1e-8, 2, Q).value
    b = kernel_G(1e-10, 2, Q).value
    slope = (b - a) / math.log(100)
    assert abs(slope - 1 / (8 * math.pi ** 2)) < 1e-5


def test_second_kernel_local_factor_identity():
    # removing the local factor at norm N shifts the argument: exact relation
    N = 9
    for y in (1e-4, 3e-3):
        got = kernel_G(y, 2, Q, exclude_norm=N).value
        oracle = kernel_G(y, 2, Q).value - kernel_G(y * N * N, 2, Q).value / N
        assert abs(got - oracle) <= 1e-12 * abs(oracle)


def test_second_kernel_local_factor_small_effect():
    plain = kernel_G(1.0, 2, Q).value
    removed = kernel_G(1.0, 2, Q, exclude_norm=1009).value
    assert abs(removed - plain) / plain < 1009.0 ** -2


def test_second_kernel_superpolynomial_decay():
    for y in (1.0, 16.0, 64.0):
        v = kernel_G(y, 2, Q, precision="high").value
        assert 0 < v <= math.exp(-10 * math.sqrt(y))


def test_second_kernel_real_quadratic_field():
    v = kernel_G(0.5, (2, 2), Q5)
    assert v.value > 0
    assert v.error < 1e-15


# ---------------------------------------------------------------------------
# derivative kernels
# ---------------------------------------------------------------------------


def _shifted_center_value(y, eps):
    atoms = [Power(y)] + arch_l_atoms((2,), 0.5 + eps) + [InvS()]
    spec = MellinIntegrandSpec(1.5, tuple(atoms))
    return mellin_line_integral(spec).value.real


def test_derivative_kernel_matches_difference_quotient():
    h = 1e-5
    for y in (0.1, 0.7, 1.5):
        got = kernel_F_derivative(y, 2).value
        quotient = (_shifted_center_value(y, h) - _shifted_center_value(y, -h)) / (2 * h)
        oracle = -math.log(y) * kernel_F(y, 2).value + quotient
        assert abs(got - oracle) <= 1e-6 * (1 + abs(oracle))


def test_derivative_kernel_positive_small_arguments():
    ys = np.array([1e-6, 1e-4, 1e-2])
    vals = kernel_F_derivative_batch(ys, 2)
    assert np.all(vals > 0)


def test_derivative_kernel_batch_matches_scalar():
    ys = np.array([0.001, 0.05, 0.4, 1.3])
    batch = kernel_F_derivative_batch(ys, 2)
    for y, b in zip(ys, batch):
        s = kernel_F_derivative(float(y), 2).value
        assert abs(b - s) < 1e-12 * (1 + abs(s))


def test_squared_derivative_kernel_batch_matches_scalar():
    ys = np.array([0.001, 0.05, 0.4])
    batch = kernel_G_derivative_batch(ys, 2, Q, exclude_norm=11)
    for y, b in zip(ys, batch):
        s = kernel_G_derivative(float(y), 2, Q, exclude_norm=11).value
        assert abs(b - s) < 1e-12 * (1 + abs(s))


def test_squared_derivative_kernel_positive_small_arguments():
    ys = np.array([1e-8, 1e-5, 1e-3])
    vals = kernel_G_derivative_batch(ys, 2, Q)
    assert np.all(vals > 0)
    assert np.all(np.diff(vals) < 0)


def test_batch_kernels_match_scalar_routes():
    ys = np.array([0.001, 0.03, 0.2, 1.0, 3.0])
    bF = kernel_F_batch(ys, 2)
    bG = kernel_G_batch(ys, 2, Q, exclude_norm=11)
    for i, y in enumerate(ys):
        assert abs(bF[i] - kernel_F(float(y), 2).value) < 1e-13
        assert abs(bG[i] - kernel_G(float(y), 2, Q, exclude_norm=11).value) < 1e-13
