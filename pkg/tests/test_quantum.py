import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellsim.errors import InputError
from bellsim.quantum import (
    JointDistribution,
    TwoQubitState,
    UnitVector3,
    X_AXIS,
    Y_AXIS,
    Z_AXIS,
    correlator,
    joint_distribution,
    product_up_up,
    sample_outcomes,
    singlet,
    singlet_correlator_closed_form,
    spin_observable,
)

INV_SQRT2 = math.sqrt(0.5)


def unit(x, y, z):
    return UnitVector3.normalized(x, y, z)


@st.composite
def unit_vectors(draw):
    x = draw(st.floats(-1, 1))
    y = draw(st.floats(-1, 1))
    z = draw(st.floats(-1, 1))
    norm_sq = x * x + y * y + z * z
    if not 0.1 < norm_sq <= 3.0:
        x, y, z = 1.0, 0.0, 0.0
    return UnitVector3.normalized(x, y, z)


def random_direction(rng):
    v = rng.normal(size=3)
    return UnitVector3.normalized(*v)


def random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


# ---------------------------------------------------------------------------
# UnitVector3 / TwoQubitState construction contracts
# ---------------------------------------------------------------------------


def test_unit_vector_accepts_unit_input():
    v = UnitVector3(0.0, 0.6, 0.8)
    assert v.dot(v) == pytest.approx(1.0, abs=1e-12)


def test_unit_vector_rejects_non_unit_input():
    with pytest.raises(InputError):
        UnitVector3(1.0, 1.0, 0.0)
    with pytest.raises(InputError):
        UnitVector3(0.0, 0.0, 0.999999)


def test_unit_vector_normalized_rescales():
    v = UnitVector3.normalized(3.0, 4.0, 0.0)
    assert (v.x, v.y, v.z) == pytest.approx((0.6, 0.8, 0.0))


def test_unit_vector_normalized_rejects_zero():
    with pytest.raises(InputError):
        UnitVector3.normalized(0.0, 0.0, 0.0)


def test_from_spherical_matches_components():
    v = UnitVector3.from_spherical(math.pi / 3, math.pi / 7)
    assert v.x == pytest.approx(math.sin(math.pi / 3) * math.cos(math.pi / 7))
    assert v.y == pytest.approx(math.sin(math.pi / 3) * math.sin(math.pi / 7))
    assert v.z == pytest.approx(math.cos(math.pi / 3))


def test_state_rejects_unnormalized_amplitudes():
    with pytest.raises(InputError):
        TwoQubitState((1.0, 1.0, 0.0, 0.0))


def test_state_normalized_constructor():
    state = TwoQubitState.normalized((1.0, 1.0, 0.0, 0.0))
    assert abs(state.amplitudes[0]) == pytest.approx(INV_SQRT2)


# ---------------------------------------------------------------------------
# Singlet and observables
# ---------------------------------------------------------------------------


def test_singlet_amplitudes():
    amps = singlet().amplitudes
    assert amps[0] == 0.0
    assert amps[3] == 0.0
    assert amps[1].real == pytest.approx(0.7071067811865476, abs=1e-12)
    assert amps[2].real == pytest.approx(-0.7071067811865476, abs=1e-12)


def test_singlet_is_normalized():
    assert sum(abs(a) ** 2 for a in singlet().amplitudes) == pytest.approx(1.0, abs=1e-12)


def test_spin_observable_z_is_diagonal():
    m = spin_observable(Z_AXIS).matrix
    assert np.allclose(m, np.diag([1.0, -1.0]), atol=1e-15)


def test_spin_observable_x_is_offdiagonal():
    m = spin_observable(X_AXIS).matrix
    assert np.allclose(m, np.array([[0.0, 1.0], [1.0, 0.0]]), atol=1e-15)


def test_spin_observable_minus_z_flips_sign():
    m = spin_observable(-Z_AXIS).matrix
    assert np.allclose(m, np.diag([-1.0, 1.0]), atol=1e-15)


def test_spin_observable_squares_to_identity():
    rng = np.random.default_rng(7)
    for _ in range(100):
        m = spin_observable(random_direction(rng)).matrix
        assert np.allclose(m @ m, np.eye(2), atol=1e-12)


# ---------------------------------------------------------------------------
# Correlators
# ---------------------------------------------------------------------------


def test_correlator_parallel_settings_is_minus_one():
    assert correlator(singlet(), Z_AXIS, Z_AXIS) == pytest.approx(-1.0, abs=1e-12)


def test_correlator_orthogonal_settings_is_zero():
    assert correlator(singlet(), Z_AXIS, X_AXIS) == pytest.approx(0.0, abs=1e-12)


def test_correlator_sixty_degrees():
    b = UnitVector3(math.sin(math.pi / 3), 0.0, math.cos(math.pi / 3))
    assert correlator(singlet(), Z_AXIS, b) == pytest.approx(-0.5, abs=1e-12)


def test_closed_form_examples():
    assert singlet_correlator_closed_form(Z_AXIS, Z_AXIS) == pytest.approx(-1.0, abs=1e-12)
    assert singlet_correlator_closed_form(Z_AXIS, -Z_AXIS) == pytest.approx(1.0, abs=1e-12)
    b = UnitVector3(math.sin(math.pi / 4), 0.0, math.cos(math.pi / 4))
    assert singlet_correlator_closed_form(Z_AXIS, b) == pytest.approx(
        -0.7071067811865476, abs=1e-12
    )


@settings(max_examples=200)
@given(unit_vectors(), unit_vectors())
def test_born_rule_agrees_with_closed_form(a, b):
    assert correlator(singlet(), a, b) == pytest.approx(-a.dot(b), abs=1e-12)


@settings(max_examples=100)
@given(unit_vectors(), unit_vectors())
def test_correlator_magnitude_bounded(a, b):
    state = TwoQubitState.normalized((0.3 + 0.1j, -0.4, 0.2j, 0.7))
    assert abs(correlator(state, a, b)) <= 1.0 + 1e-12


def test_correlator_rotational_invariance():
    rng = np.random.default_rng(11)
    psi = singlet()
    for _ in range(50):
        a = random_direction(rng)
        b = random_direction(rng)
        rot = random_rotation(rng)
        ra = UnitVector3.normalized(*(rot @ a.as_array()))
        rb = UnitVector3.normalized(*(rot @ b.as_array()))
        assert correlator(psi, ra, rb) == pytest.approx(
            correlator(psi, a, b), abs=1e-10
        )


# ---------------------------------------------------------------------------
# Joint distributions and sampling
# ---------------------------------------------------------------------------


def test_joint_distribution_parallel_settings_anticorrelated():
    dist = joint_distribution(singlet(), Z_AXIS, Z_AXIS)
    assert dist.pm == pytest.approx(0.5, abs=1e-12)
    assert dist.mp == pytest.approx(0.5, abs=1e-12)
    assert dist.pp == pytest.approx(0.0, abs=1e-12)
    assert dist.mm == pytest.approx(0.0, abs=1e-12)


def test_joint_distribution_orthogonal_settings_uniform():
    dist = joint_distribution(singlet(), Z_AXIS, X_AXIS)
    for p in dist.as_tuple():
        assert p == pytest.approx(0.25, abs=1e-12)


def test_joint_distribution_consistent_with_correlator():
    rng = np.random.default_rng(3)
    state = TwoQubitState.normalized((0.2, 0.5j, -0.6, 0.1 + 0.4j))
    for _ in range(50):
        a, b = random_direction(rng), random_direction(rng)
        dist = joint_distribution(state, a, b)
        assert dist.product_expectation() == pytest.approx(
            correlator(state, a, b), abs=1e-12
        )


def test_singlet_marginals_are_unbiased():
    rng = np.random.default_rng(5)
    for _ in range(50):
        dist = joint_distribution(singlet(), random_direction(rng), random_direction(rng))
        assert dist.marginal_first_plus() == pytest.approx(0.5, abs=1e-12)
        assert dist.marginal_second_plus() == pytest.approx(0.5, abs=1e-12)


def test_joint_distribution_rejects_bad_probabilities():
    with pytest.raises(InputError):
        JointDistribution(0.5, 0.5, 0.5, -0.5)
    with pytest.raises(InputError):
        JointDistribution(0.3, 0.3, 0.3, 0.3)


def test_sampling_degenerate_distribution():
    dist = JointDistribution(0.0, 1.0, 0.0, 0.0)
    rng = np.random.default_rng(0)
    assert all(sample_outcomes(dist, rng) == (1, -1) for _ in range(100))


def test_sampling_equal_settings_always_anticorrelated():
    dist = joint_distribution(singlet(), Z_AXIS, Z_AXIS)
    rng = np.random.default_rng(42)
    for _ in range(10_000):
        oa, ob = sample_outcomes(dist, rng)
        assert oa * ob == -1


def test_sampling_mean_converges_to_correlator():
    n = 100_000
    b = UnitVector3.from_spherical(1.0, 0.3)
    dist = joint_distribution(singlet(), Z_AXIS, b)
    rng = np.random.default_rng(123)
    total = sum(oa * ob for oa, ob in (sample_outcomes(dist, rng) for _ in range(n)))
    assert abs(total / n - correlator(singlet(), Z_AXIS, b)) <= 4.0 / math.sqrt(n)


def test_sampling_is_reproducible():
    dist = joint_distribution(singlet(), Z_AXIS, X_AXIS)
    runs = [
        [sample_outcomes(dist, rng) for _ in range(50)]
        for rng in (np.random.default_rng(9), np.random.default_rng(9))
    ]
    assert runs[0] == runs[1]


def test_product_state_has_definite_z_outcomes():
    dist = joint_distribution(product_up_up(), Z_AXIS, Z_AXIS)
    assert dist.pp == pytest.approx(1.0, abs=1e-12)
