"""Test-function construction, transforms and sheet amplitudes."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgfield import oracles, testfn
from kgfield.errors import UnsupportedQueryError
from kgfield.params import ModelParams

PARAMS = ModelParams(mass=1.0, dim=1)

TWO_PI = 2.0 * math.pi


def unit_gaussian():
    return testfn.gaussian(1.0, (0.0, 0.0), (1.0, 1.0), (0.0, 0.0))


def moving_gaussian():
    return testfn.gaussian(0.8 - 0.3j, (0.4, -1.1), (1.3, 0.7), (-1.2, 2.0))


def random_kvecs(seed, n=20, span=4.0):
    rng = np.random.default_rng(seed)
    return rng.uniform(-span, span, n)


# small hypothesis strategy: well-conditioned single Gaussians in d=1
coeffs = st.complex_numbers(min_magnitude=0.05, max_magnitude=3.0,
                            allow_infinity=False, allow_nan=False)
coords = st.floats(min_value=-3.0, max_value=3.0)
widths = st.floats(min_value=0.4, max_value=2.5)
waves = st.floats(min_value=-2.5, max_value=2.5)


@st.composite
def gaussians(draw):
    return testfn.gaussian(
        draw(coeffs),
        (draw(coords), draw(coords)),
        (draw(widths), draw(widths)),
        (draw(waves), draw(waves)),
    )


# ---------------------------------------------------------------------------
# constructors

def test_zero_coefficient_gives_zero_function():
    f = testfn.gaussian(0.0, (0.0, 0.0), (1.0, 1.0), (0.0, 0.0))
    assert f.is_zero()
    assert testfn.evaluate(f, (0.3, -0.2)) == 0


def test_unit_gaussian_at_center_is_one():
    assert testfn.evaluate(unit_gaussian(), (0.0, 0.0)) == pytest.approx(1.0)


def test_gaussian_rejects_bad_arguments():
    with pytest.raises(ValueError):
        testfn.gaussian(1.0, (0.0, 0.0), (1.0, -1.0), (0.0, 0.0))
    with pytest.raises(ValueError):
        testfn.gaussian(1.0, (0.0, 0.0, 0.0), (1.0, 1.0), (0.0, 0.0))


def test_bump_rejects_nonpositive_radius():
    with pytest.raises(ValueError):
        testfn.bump(1.0, (0.0, 0.0), (1.0, 0.0))


def test_bump_vanishes_outside_support():
    f = testfn.bump(1.0, (0.0, 0.0), (1.0, 1.0))
    for pt in [(1.0, 0.0), (0.0, -1.0), (2.0, 3.0), (-1.5, 0.2)]:
        assert testfn.evaluate(f, pt) == 0

    # interior sample stays continuous with the profile
    rng = np.random.default_rng(7)
    pts = rng.uniform(-0.99, 0.99, (30, 2))
    vals = testfn.evaluate(f, pts)
    assert np.all(np.abs(vals) > 0)


def test_bump_center_value_is_profile_squared():
    f = testfn.bump(1.0, (0.0, 0.0), (1.0, 1.0))
    # e^{-1} per axis factor at u = 0
    assert testfn.evaluate(f, (0.0, 0.0)) == pytest.approx(math.exp(-2.0), rel=1e-12)


# ---------------------------------------------------------------------------
# Fourier data: closed form vs quadrature oracles

def test_gaussian_ft_at_zero_matches_normalization_constant():
    # d = 1, unit widths: integral of exp(-(t^2+x^2)/2) equals (2*pi)^(2/2)
    f = unit_gaussian()
    val = testfn.offshell_ft(f, (0.0, 0.0))
    assert val == pytest.approx(TWO_PI, rel=1e-12)

    oracle = oracles.offshell_ft_trapezoid_oracle(f, [(0.0, 0.0)])[0]
    assert abs(val - oracle) / abs(oracle) < 1e-8


def test_gaussian_ft_matches_trapezoid_oracle_on_random_instances():
    rng = np.random.default_rng(101)
    for _ in range(4):
        f = testfn.gaussian(
            complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
            tuple(rng.uniform(-2, 2, 2)),
            tuple(rng.uniform(0.6, 1.8, 2)),
            tuple(rng.uniform(-1.5, 1.5, 2)),
        )
        kpts = rng.uniform(-2.0, 2.0, (5, 2))
        got = testfn.offshell_ft(f, kpts)
        want = oracles.offshell_ft_trapezoid_oracle(f, kpts)
        scale = np.max(np.abs(want))
        assert np.max(np.abs(got - want)) / scale < 1e-7


def test_bump_positive_sheet_amplitude_matches_tensor_oracle():
    # frozen from the 2-D tensor Gauss-Legendre oracle at doubled node count
    f = testfn.bump(1.0, (0.0, 0.0), (1.0, 1.0))
    got = testfn.sheet_amplitude(f, "pos", np.array([0.0]), PARAMS)[0]
    want = oracles.bump_ft_tensor_oracle(1.0, (0.0, 0.0), (1.0, 1.0),
                                         [(1.0, 0.0)], n=320)[0]
    assert abs(got - want) / abs(want) < 1e-7
    # and the frozen value itself, so a regression cannot hide in the oracle
    assert got == pytest.approx(0.18197492028132, rel=1e-9)


def test_sheet_amplitude_tail_is_negligible():
    f = moving_gaussian()
    peak = np.max(np.abs(testfn.sheet_amplitude(
        f, "pos", np.linspace(-6, 6, 101), PARAMS)))
    far = np.max(np.abs(testfn.sheet_amplitude(
        f, "pos", np.array([15.0, -15.0]), PARAMS)))
    assert far < 1e-12 * peak


def test_sheet_amplitude_rejects_unknown_branch():
    with pytest.raises(ValueError):
        testfn.sheet_amplitude(unit_gaussian(), "up", np.array([0.0]), PARAMS)


# ---------------------------------------------------------------------------
# linear structure

def test_add_zero_is_identity():
    f = moving_gaussian()
    g = testfn.add(f, testfn.zero(1))
    K = random_kvecs(3)
    for branch in ("pos", "neg"):
        a = testfn.sheet_amplitude(f, branch, K, PARAMS)
        b = testfn.sheet_amplitude(g, branch, K, PARAMS)
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-15)


def test_scale_one_is_identity():
    f = moving_gaussian()
    g = testfn.scale(1.0, f)
    K = random_kvecs(4)
    a = testfn.sheet_amplitude(f, "pos", K, PARAMS)
    b = testfn.sheet_amplitude(g, "pos", K, PARAMS)
    np.testing.assert_allclose(a, b, rtol=0, atol=0)


@settings(max_examples=25, deadline=None)
@given(gaussians(), gaussians(), coeffs)
def test_amplitudes_are_pointwise_linear(f, g, c):
    K = random_kvecs(11, n=20)
    for branch in ("pos", "neg"):
        af = testfn.sheet_amplitude(f, branch, K, PARAMS)
        ag = testfn.sheet_amplitude(g, branch, K, PARAMS)
        asum = testfn.sheet_amplitude(testfn.add(f, g), branch, K, PARAMS)
        ascaled = testfn.sheet_amplitude(testfn.scale(c, f), branch, K, PARAMS)
        scale = max(np.max(np.abs(af)) + np.max(np.abs(ag)), 1e-30)
        assert np.max(np.abs(asum - (af + ag))) / scale < 1e-12
        assert np.max(np.abs(ascaled - c * af)) / max(scale * abs(c), 1e-30) < 1e-12


def test_add_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        testfn.add(unit_gaussian(), testfn.zero(2))


# ---------------------------------------------------------------------------
# conjugation

def test_conjugate_is_involution():
    f = moving_gaussian()
    g = testfn.conjugate(testfn.conjugate(f))
    K = random_kvecs(5)
    for branch in ("pos", "neg"):
        a = testfn.sheet_amplitude(f, branch, K, PARAMS)
        b = testfn.sheet_amplitude(g, branch, K, PARAMS)
        assert np.max(np.abs(a - b)) < 1e-12 * max(1.0, np.max(np.abs(a)))


def test_conjugate_fixes_real_functions():
    f = testfn.gaussian(0.75, (0.2, -0.4), (1.0, 1.5), (0.0, 0.0))
    g = testfn.conjugate(f)
    K = random_kvecs(6)
    for branch in ("pos", "neg"):
        a = testfn.sheet_amplitude(f, branch, K, PARAMS)
        b = testfn.sheet_amplitude(g, branch, K, PARAMS)
        assert np.max(np.abs(a - b)) < 1e-12 * max(1.0, np.max(np.abs(a)))


def test_conjugate_matches_pointwise_conjugation():
    f = moving_gaussian()
    rng = np.random.default_rng(8)
    pts = rng.uniform(-2, 2, (10, 2))
    a = testfn.evaluate(testfn.conjugate(f), pts)
    b = np.conj(testfn.evaluate(f, pts))
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-14)


def test_conjugate_swaps_sheets_with_momentum_flip():
    # p'(k) = conj(n(-k)) and n'(k) = conj(p(-k))
    f = moving_gaussian()
    K = random_kvecs(9)
    fc = testfn.conjugate(f)
    p_c = testfn.sheet_amplitude(fc, "pos", K, PARAMS)
    n_c = testfn.sheet_amplitude(fc, "neg", K, PARAMS)
    p = testfn.sheet_amplitude(f, "pos", -K, PARAMS)
    n = testfn.sheet_amplitude(f, "neg", -K, PARAMS)
    scale = max(np.max(np.abs(p)), np.max(np.abs(n)), 1e-30)
    assert np.max(np.abs(p_c - np.conj(n))) / scale < 1e-12
    assert np.max(np.abs(n_c - np.conj(p))) / scale < 1e-12


@settings(max_examples=25, deadline=None)
@given(gaussians(), coeffs)
def test_conjugate_is_antilinear(f, c):
    K = random_kvecs(12, n=10)
    a = testfn.sheet_amplitude(testfn.conjugate(testfn.scale(c, f)), "pos", K, PARAMS)
    b = testfn.sheet_amplitude(testfn.scale(np.conj(c), testfn.conjugate(f)),
                               "pos", K, PARAMS)
    scale = max(np.max(np.abs(a)), 1e-30)
    assert np.max(np.abs(a - b)) / scale < 1e-12


# ---------------------------------------------------------------------------
# bullet transform

def test_bullet_fixes_positive_frequency_functions():
    # strong positive-frequency concentration: negative sheet far below
    # every verification tolerance, so bullet acts as the identity there
    f = testfn.gaussian(1.0, (0.0, 0.0), (3.0, 1.0), (-5.0, 4.9))
    g = testfn.bullet(f)
    K = random_kvecs(13)
    for branch in ("pos", "neg"):
        a = testfn.sheet_amplitude(f, branch, K, PARAMS)
        b = testfn.sheet_amplitude(g, branch, K, PARAMS)
        assert np.max(np.abs(a - b)) < 1e-12


def test_bullet_is_involution():
    f = moving_gaussian()
    g = testfn.bullet(testfn.bullet(f))
    K = random_kvecs(14)
    for branch in ("pos", "neg"):
        a = testfn.sheet_amplitude(f, branch, K, PARAMS)
        b = testfn.sheet_amplitude(g, branch, K, PARAMS)
        assert np.max(np.abs(a - b)) < 1e-12 * max(1.0, np.max(np.abs(a)))


def test_bullet_conjugates_negative_sheet_only():
    f = unit_gaussian()
    K = np.array([0.7])
    b = testfn.bullet(f)
    n_f = testfn.sheet_amplitude(f, "neg", K, PARAMS)[0]
    n_b = testfn.sheet_amplitude(b, "neg", K, PARAMS)[0]
    p_f = testfn.sheet_amplitude(f, "pos", K, PARAMS)[0]
    p_b = testfn.sheet_amplitude(b, "pos", K, PARAMS)[0]
    assert n_b == pytest.approx(np.conj(n_f), rel=1e-12)
    assert p_b == pytest.approx(p_f, rel=1e-12)

    # the reference amplitude from the independent quadrature oracle
    omega = math.sqrt(0.7 ** 2 + 1.0)
    want = oracles.offshell_ft_trapezoid_oracle(f, [(-omega, 0.7)])[0]
    assert n_b == pytest.approx(np.conj(want), rel=1e-7)

    # rest Gaussian amplitudes are real, so repeat with a genuinely complex one
    fm = moving_gaussian()
    n_m = testfn.sheet_amplitude(fm, "neg", K, PARAMS)[0]
    n_mb = testfn.sheet_amplitude(testfn.bullet(fm), "neg", K, PARAMS)[0]
    assert abs(n_m.imag) > 1e-8 * abs(n_m)
    assert n_mb == pytest.approx(np.conj(n_m), rel=1e-12)


def test_bullet_commutes_with_real_scaling_not_imaginary():
    f = moving_gaussian()  # nonzero negative-sheet amplitude
    K = random_kvecs(15)

    a = testfn.sheet_amplitude(testfn.bullet(testfn.scale(2.5, f)), "neg", K, PARAMS)
    b = testfn.sheet_amplitude(testfn.scale(2.5, testfn.bullet(f)), "neg", K, PARAMS)
    assert np.max(np.abs(a - b)) < 1e-12 * np.max(np.abs(a))

    a = testfn.sheet_amplitude(testfn.bullet(testfn.multiply_by_i(f)), "neg", K, PARAMS)
    b = testfn.sheet_amplitude(testfn.multiply_by_i(testfn.bullet(f)), "neg", K, PARAMS)
    assert np.max(np.abs(a - b)) > 1e-3 * np.max(np.abs(a))


def test_bullet_image_has_no_position_space_values():
    f = testfn.bullet(moving_gaussian())
    with pytest.raises(UnsupportedQueryError):
        testfn.evaluate(f, (0.0, 0.0))
    with pytest.raises(UnsupportedQueryError):
        testfn.offshell_ft(f, (0.0, 0.0))


# ---------------------------------------------------------------------------
# multiply_by_i

def test_multiply_by_i_four_times_is_identity():
    f = moving_gaussian()
    g = f
    for _ in range(4):
        g = testfn.multiply_by_i(g)
    K = random_kvecs(16)
    a = testfn.sheet_amplitude(f, "pos", K, PARAMS)
    b = testfn.sheet_amplitude(g, "pos", K, PARAMS)
    assert np.max(np.abs(a - b)) < 1e-14 * max(1.0, np.max(np.abs(a)))


def test_multiply_by_i_anticommutes_with_conjugation():
    f = moving_gaussian()
    lhs = testfn.conjugate(testfn.multiply_by_i(f))
    rhs = testfn.scale(-1j, testfn.conjugate(f))
    K = random_kvecs(17)
    a = testfn.sheet_amplitude(lhs, "neg", K, PARAMS)
    b = testfn.sheet_amplitude(rhs, "neg", K, PARAMS)
    assert np.max(np.abs(a - b)) < 1e-13 * max(1.0, np.max(np.abs(a)))


def test_multiply_by_i_scales_amplitudes():
    f = moving_gaussian()
    K = random_kvecs(18)
    a = testfn.sheet_amplitude(testfn.multiply_by_i(f), "pos", K, PARAMS)
    b = 1j * testfn.sheet_amplitude(f, "pos", K, PARAMS)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-15)


# ---------------------------------------------------------------------------
# support queries

def test_identical_centers_are_not_spacelike():
    f = testfn.bump(1.0, (0.0, 0.0), (1.0, 1.0))
    assert not testfn.spacelike_separated(f, f)


def test_spatial_separation_is_spacelike():
    f = testfn.bump(1.0, (0.0, 0.0), (1.0, 1.0))
    g = testfn.bump(1.0, (0.0, 10.0), (1.0, 1.0))
    assert testfn.spacelike_separated(f, g)


def test_time_separation_is_not_spacelike():
    f = testfn.bump(1.0, (0.0, 0.0), (1.0, 1.0))
    g = testfn.bump(1.0, (10.0, 0.0), (1.0, 1.0))
    assert not testfn.spacelike_separated(f, g)


def test_zero_function_has_no_support_query():
    f = testfn.bump(1.0, (0.0, 0.0), (1.0, 1.0))
    with pytest.raises(UnsupportedQueryError):
        testfn.spacelike_separated(f, testfn.zero(1))


def test_gaussian_support_uses_n_sigma_box():
    f = testfn.gaussian(1.0, (0.0, 0.0), (1.0, 1.0), (0.0, 0.0))
    lo, hi = testfn.support_box(f, n_sigma=8.0)
    np.testing.assert_allclose(lo, [-8.0, -8.0])
    np.testing.assert_allclose(hi, [8.0, 8.0])


def test_translate_moves_support_and_phases_amplitudes():
    f = testfn.bump(1.0, (0.0, 0.0), (1.0, 1.0))
    g = testfn.translate(f, (0.5, -2.0))
    lo, hi = testfn.support_box(g)
    np.testing.assert_allclose(lo, [-0.5, -3.0])
    np.testing.assert_allclose(hi, [1.5, -1.0])

    # translation multiplies the sheet amplitude by a pure phase
    K = np.array([0.3, -1.1])
    a = testfn.sheet_amplitude(f, "pos", K, PARAMS)
    b = testfn.sheet_amplitude(g, "pos", K, PARAMS)
    np.testing.assert_allclose(np.abs(a), np.abs(b), rtol=1e-12)
