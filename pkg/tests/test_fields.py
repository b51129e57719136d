"""Field builders: self-adjointness, recovery identities, commutator forms."""

import numpy as np
import pytest

from kgfield import fields, shell, testfn, wick
from kgfield.params import ModelParams

PARAMS = ModelParams(mass=1.0, dim=1)


@pytest.fixture(scope="module")
def models():
    return (wick.random_field_model(PARAMS),
            wick.split_field_model(PARAMS),
            wick.quantum_field_model(PARAMS))


def _pair(seed):
    rng = np.random.default_rng(seed)

    def draw():
        return testfn.gaussian(
            complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
            tuple(rng.uniform(-1.5, 1.5, 2)),
            tuple(rng.uniform(0.7, 1.6, 2)),
            tuple(rng.uniform(-1.5, 1.5, 2)),
        )

    return draw(), draw()


# ---------------------------------------------------------------------------
# random model

def test_phi_of_real_function_is_self_adjoint(models):
    mr, _, _ = models
    f = testfn.gaussian(1.5, (0.2, -0.3), (1.0, 1.2), (0.0, 0.0))
    p = fields.phi(mr, f)
    assert wick.adjoint(p).coefficient_distance(p) == 0


def test_phi_of_complex_real_part_sum_is_self_adjoint_as_operator(models):
    # h + h* is real pointwise but not a structural fixed point of
    # conjugation, so the check runs at the GNS norm level
    mr, _, _ = models
    h, _ = _pair(500)
    f = testfn.add(h, testfn.conjugate(h))
    p = fields.phi(mr, f)
    d = wick.adjoint(p) - p
    norm = wick.gns_inner(p, p).real
    assert abs(wick.gns_inner(d, d)) < 1e-9 * max(norm, 1.0)


def test_phi_of_zero_vanishes(models):
    mr, _, _ = models
    assert fields.phi(mr, testfn.zero(1)).is_zero()
    assert fields.psi(models[2], testfn.zero(1)).is_zero()


def test_phi_commutator_is_tiny_scalar(models):
    mr, _, _ = models
    f, g = _pair(501)
    comm = wick.commutator(fields.phi(mr, f), fields.phi(mr, g))
    assert comm.nonscalar_mass() == 0
    norm = np.sqrt(shell.ip_full(f, f, PARAMS).value.real
                   * shell.ip_full(g, g, PARAMS).value.real)
    assert abs(comm.scalar_part()) < 1e-9 * max(norm, 1e-30)


def test_random_observable_is_self_adjoint(models):
    mr, _, _ = models
    f, _ = _pair(502)
    r = fields.random_observable(mr, f)
    assert wick.adjoint(r).coefficient_distance(r) == 0


def test_phi_recovery_from_observables(models):
    mr, _, _ = models
    f, _ = _pair(503)
    lhs = (fields.random_observable(mr, f)
           - 1j * fields.random_observable(mr, testfn.multiply_by_i(f)))
    assert lhs.coefficient_distance(fields.phi(mr, f)) < 1e-12


def test_random_observables_commute(models):
    mr, _, _ = models
    f, g = _pair(504)
    comm = wick.commutator(fields.random_observable(mr, f),
                           fields.random_observable(mr, g))
    assert comm.nonscalar_mass() == 0
    norm = np.sqrt(abs(shell.ip_full(f, f, PARAMS).value)
                   * abs(shell.ip_full(g, g, PARAMS).value))
    assert abs(comm.scalar_part()) < 1e-9 * max(norm, 1e-30)


# ---------------------------------------------------------------------------
# quantum model

def test_psi_commutator_vanishes_identically(models):
    _, _, mq = models
    f, g = _pair(505)
    assert wick.commutator(fields.psi(mq, f), fields.psi(mq, g)).is_zero()


def test_psi_mixed_commutator_kernel(models):
    _, _, mq = models
    f, g = _pair(506)
    comm = wick.commutator(fields.psi(mq, f), wick.adjoint(fields.psi(mq, g)))
    assert comm.nonscalar_mass() == 0
    want = (shell.ip_pos(testfn.conjugate(f), testfn.conjugate(g), PARAMS).value
            - shell.ip_pos(g, f, PARAMS).value)
    scale = max(abs(want), 1.0)
    assert abs(comm.scalar_part() - want) < 1e-9 * scale


def test_quantum_observable_is_self_adjoint(models):
    _, _, mq = models
    f, _ = _pair(507)
    o = fields.quantum_observable(mq, f)
    assert wick.adjoint(o).coefficient_distance(o) == 0


def test_psi_recovery_from_observables(models):
    _, _, mq = models
    f, _ = _pair(508)
    lhs = 0.5 * (fields.quantum_observable(mq, f)
                 - 1j * fields.quantum_observable(mq, testfn.multiply_by_i(f)))
    assert lhs.coefficient_distance(fields.psi(mq, f)) < 1e-12


def test_observable_commutator_rearranged_forms(models):
    _, _, mq = models
    f, g = _pair(509)
    engine = wick.commutator(fields.quantum_observable(mq, f),
                             fields.quantum_observable(mq, g)).scalar_part()
    k_fg_p = shell.ip_pos(f, g, PARAMS).value
    k_gf_n = shell.ip_neg(g, f, PARAMS).value
    k_gf_p = shell.ip_pos(g, f, PARAMS).value
    k_fg_n = shell.ip_neg(f, g, PARAMS).value
    form_direct = (k_fg_p + k_gf_n) - (k_gf_p + k_fg_n)
    form_imag = 2j * (k_fg_p.imag - k_fg_n.imag)
    form_bullet = 2j * shell.ip_bullet(f, g, PARAMS).value.imag
    vals = [engine, form_direct, form_imag, form_bullet]
    scale = max(1.0, max(abs(v) for v in vals))
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            assert abs(vals[i] - vals[j]) < 1e-10 * scale


def test_observable_commutator_spacelike_bumps(models):
    _, _, mq = models
    f = testfn.bump(1.0, (0.0, 0.0), (1.0, 1.0))
    g = testfn.bump(1.0, (0.0, 6.0), (1.0, 1.0))
    assert testfn.spacelike_separated(f, g)
    comm = wick.commutator(fields.quantum_observable(mq, f),
                           fields.quantum_observable(mq, g))
    norm = np.sqrt(abs(shell.ip_full(f, f, PARAMS).value)
                   * abs(shell.ip_full(g, g, PARAMS).value))
    assert abs(comm.scalar_part()) < 1e-6 * max(norm, 1e-30)


# ---------------------------------------------------------------------------
# combined annihilator

def test_combined_annihilator_builds_observable(models):
    _, _, mq = models
    f, _ = _pair(510)
    th = fields.combined_annihilator(mq, f)
    rebuilt = th + wick.adjoint(th)
    assert rebuilt.coefficient_distance(fields.quantum_observable(mq, f)) == 0


def test_combined_annihilator_mixed_commutator(models):
    _, _, mq = models
    f, g = _pair(511)
    th_f = fields.combined_annihilator(mq, f)
    th_g = fields.combined_annihilator(mq, g)
    comm = wick.commutator(th_f, wick.adjoint(th_g))
    assert comm.nonscalar_mass() == 0
    want = (shell.ip_pos(f, g, PARAMS).value
            + shell.ip_pos(testfn.conjugate(f), testfn.conjugate(g),
                           PARAMS).value)
    scale = max(abs(want), 1.0)
    assert abs(comm.scalar_part() - want) < 1e-9 * scale
    bullet = shell.ip_bullet(f, g, PARAMS).value
    assert abs(comm.scalar_part() - bullet) < 1e-8 * max(abs(bullet), 1.0)


def test_combined_annihilators_commute_exactly(models):
    _, _, mq = models
    f, g = _pair(512)
    comm = wick.commutator(fields.combined_annihilator(mq, f),
                           fields.combined_annihilator(mq, g))
    assert comm.is_zero()


# ---------------------------------------------------------------------------
# cross-model reconstructions

def test_quantum_observable_image_matches_for_positive_frequency(models):
    from kgfield.verify import negative_sheet_leakage, positive_frequency_labels

    mr, _, mq = models
    labels = positive_frequency_labels(PARAMS, 513)
    assert max(negative_sheet_leakage(fl, PARAMS) for fl in labels) < 1e-12
    for fl in labels[:2]:
        lhs = wick.vacuum_expectation(fields.product(
            [fields.quantum_observable_in_random(mr, fl)] * 2))
        rhs = wick.vacuum_expectation(fields.product(
            [fields.quantum_observable(mq, fl)] * 2))
        assert abs(lhs - rhs) < 1e-8 * max(abs(rhs), 1e-30)


def test_random_observable_image_two_point(models):
    mr, _, mq = models
    f, _ = _pair(514)
    lhs = wick.vacuum_expectation(fields.product(
        [fields.random_observable_in_quantum(mq, f)] * 2))
    rhs = wick.vacuum_expectation(fields.product(
        [fields.random_observable(mr, f)] * 2))
    assert abs(lhs - rhs) < 1e-8 * max(abs(rhs), 1e-30)


def test_split_presentation_moments(models):
    mr, ms, _ = models
    f, g = _pair(515)
    lhs = wick.vacuum_expectation(
        wick.mul(fields.split_phi(ms, f), fields.split_phi(ms, g)))
    rhs = wick.vacuum_expectation(
        wick.mul(fields.phi(mr, f), fields.phi(mr, g)))
    assert abs(lhs - rhs) < 1e-9 * max(abs(rhs), 1e-30)


def test_split_observable_is_self_adjoint(models):
    _, ms, _ = models
    f, _ = _pair(516)
    s = fields.split_observable(ms, f)
    assert wick.adjoint(s).coefficient_distance(s) == 0


# ---------------------------------------------------------------------------
# model guards

def test_builders_reject_wrong_model(models):
    mr, ms, mq = models
    f, _ = _pair(517)
    with pytest.raises(ValueError):
        fields.phi(mq, f)
    with pytest.raises(ValueError):
        fields.psi(mr, f)
    with pytest.raises(ValueError):
        fields.split_phi(mr, f)
    with pytest.raises(ValueError):
        fields.random_observable_in_quantum(ms, f)
