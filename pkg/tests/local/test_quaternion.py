"""Quaternion helper tests."""
import numpy as np
import pytest
from lmap.services import quaternion


@pytest.fixture
def random_quaternions():
    rng = np.random.default_rng(3)
    return quaternion.normalize(rng.standard_normal((50, 4)))


def test_multiply_identity(random_quaternions):
    """Test that the identity is neutral on both sides."""
    q = random_quaternions
    np.testing.assert_allclose(quaternion.multiply(quaternion.IDENTITY, q), q, atol=1e-15)
    np.testing.assert_allclose(quaternion.multiply(q, quaternion.IDENTITY), q, atol=1e-15)


def test_conjugate_is_inverse(random_quaternions):
    q = random_quaternions
    product = quaternion.multiply(quaternion.conjugate(q), q)
    np.testing.assert_allclose(product, np.tile(quaternion.IDENTITY, (len(q), 1)), atol=1e-12)


def test_canonical_nonnegative_w(random_quaternions):
    c = quaternion.canonical(random_quaternions)
    assert np.all(c[:, 0] >= 0)
    np.testing.assert_allclose(np.abs(c), np.abs(random_quaternions))


def test_sq_angle_sign_invariant(random_quaternions):
    """Test that q and -q describe the same rotation."""
    qa, qb = random_quaternions[:25], random_quaternions[25:]
    base = quaternion.quaternion_sq_angle(qa, qb)
    assert np.array_equal(base, quaternion.quaternion_sq_angle(-qa, qb))
    assert np.array_equal(base, quaternion.quaternion_sq_angle(qa, -qb))
    assert np.array_equal(base, quaternion.quaternion_sq_angle(qb, qa))


def test_sq_angle_known_rotation():
    """Test a 90 degree rotation about z."""
    q = quaternion.from_axis_angle([0, 0, 1], np.pi / 2)
    assert quaternion.quaternion_sq_angle(quaternion.IDENTITY, q) == pytest.approx((np.pi / 2) ** 2)


def test_sq_angle_zero_only_for_equal_rotations(random_quaternions):
    q = random_quaternions
    assert np.all(quaternion.quaternion_sq_angle(q, q) < 1e-14)
    off = quaternion.quaternion_sq_angle(q[:-1], q[1:])
    assert np.all(off > 0)


def test_pairwise_sq_angle_symmetric(random_quaternions):
    D = quaternion.pairwise_sq_angle(random_quaternions)
    assert np.array_equal(D, D.T)
    assert np.all(np.diag(D) == 0.0)
    np.testing.assert_allclose(D[3, 7], quaternion.quaternion_sq_angle(random_quaternions[3], random_quaternions[7]),
                               atol=1e-12)


def test_relative_to_goal_is_identity_at_goal(random_quaternions):
    rel = quaternion.relative_to(random_quaternions, random_quaternions)
    np.testing.assert_allclose(rel, np.tile(quaternion.IDENTITY, (len(rel), 1)), atol=1e-12)


def test_normalize_zero_norm():
    with pytest.raises(ValueError, match='zero-norm'):
        quaternion.normalize([0.0, 0.0, 0.0, 0.0])


def test_normalize_keeps_unit_rows():
    q = np.array([[1.0, 0.0, 0.0, 0.0], [2.0, 0.0, 0.0, 0.0]])
    out = quaternion.normalize(q, atol=1e-12)
    assert np.array_equal(out, [[1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]])


if __name__ == '__main__':
    __import__('pytest').main([__file__])
