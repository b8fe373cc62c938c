"""Quaternion helpers, (w, x, y, z) convention.

All functions accept a single quaternion of shape (4,) or a batch (..., 4).
"""

import numpy as np

IDENTITY = np.array([1.0, 0.0, 0.0, 0.0])


def normalize(q, atol: float = 0.0) -> np.ndarray:
    """Scale to unit norm; rows already within `atol` of unit norm are returned unchanged."""
    q = np.array(q, dtype=np.float64)
    norm = np.linalg.norm(q, axis=-1, keepdims=True)
    if np.any(norm == 0.0):
        raise ValueError('zero-norm quaternion')
    off = np.abs(norm - 1.0) > atol
    return np.where(off, q / norm, q)


def conjugate(q) -> np.ndarray:
    q = np.array(q, dtype=np.float64)
    q[..., 1:] *= -1
    return q


def multiply(q0, q1) -> np.ndarray:
    """Hamilton product q0 ⊗ q1."""
    q0 = np.asarray(q0, dtype=np.float64)
    q1 = np.asarray(q1, dtype=np.float64)
    w0, x0, y0, z0 = np.moveaxis(q0, -1, 0)
    w1, x1, y1, z1 = np.moveaxis(q1, -1, 0)
    return np.stack([
        w0 * w1 - x0 * x1 - y0 * y1 - z0 * z1,
        w0 * x1 + x0 * w1 + y0 * z1 - z0 * y1,
        w0 * y1 + y0 * w1 + z0 * x1 - x0 * z1,
        w0 * z1 + z0 * w1 + x0 * y1 - y0 * x1,
    ], axis=-1)


def canonical(q) -> np.ndarray:
    """Resolve the double cover by flipping sign so that w >= 0."""
    q = np.array(q, dtype=np.float64)
    flip = q[..., 0] < 0
    q[flip] *= -1
    return q


def from_axis_angle(axis, angle) -> np.ndarray:
    axis = np.asarray(axis, dtype=np.float64)
    axis = axis / np.linalg.norm(axis)
    angle = np.asarray(angle, dtype=np.float64)[..., np.newaxis]
    return np.concatenate([np.cos(angle / 2), np.sin(angle / 2) * axis], axis=-1)


def relative_to(goal, q) -> np.ndarray:
    """Orientation of `q` expressed relative to `goal`: conj(goal) ⊗ q, w >= 0."""
    goal = np.broadcast_to(np.asarray(goal, dtype=np.float64), np.shape(q))
    return canonical(multiply(conjugate(goal), q))


def quaternion_sq_angle(qa, qb) -> np.ndarray | float:
    """Squared geodesic rotation angle (radians²) between two unit quaternions.

    Invariant to the sign of either argument.

    >>> float(quaternion_sq_angle(IDENTITY, -IDENTITY))
    0.0
    >>> round(float(quaternion_sq_angle(IDENTITY, [np.cos(np.pi / 4), 0, 0, np.sin(np.pi / 4)])), 5)
    2.4674
    """
    qa = np.asarray(qa, dtype=np.float64)
    qb = np.asarray(qb, dtype=np.float64)
    dot = np.minimum(1.0, np.abs(np.sum(qa * qb, axis=-1)))
    angle = 2.0 * np.arccos(dot)
    return angle * angle


def pairwise_sq_angle(Q) -> np.ndarray:
    """Matrix of squared geodesic angles between all rows of an (N, 4) array."""
    Q = np.asarray(Q, dtype=np.float64)
    dot = np.abs(Q @ Q.T)
    dot = np.minimum(1.0, 0.5 * (dot + dot.T))
    np.fill_diagonal(dot, 1.0)
    angle = 2.0 * np.arccos(dot)
    return angle * angle


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
