import logging
from dataclasses import dataclass

import numpy as np
from lmap.config import get_settings
from lmap.services import quaternion
from lmap.services.trajectory import Trajectory
from scipy.spatial.distance import cdist

logger = logging.getLogger(__name__)

__all__ = [
    'AlignmentError',
    'DtwResult',
    'AlignedPair',
    'rescale_time',
    'trajectory_inputs',
    'dtw',
    'align_pair',
]


class AlignmentError(ValueError):
    """A demonstration/reproduction pair cannot be brought onto one time grid."""


@dataclass(frozen=True, eq=False)
class DtwResult:
    distance: float
    path: np.ndarray  # (L, 2) pairs (index into first series, index into second)
    cost: np.ndarray


@dataclass(frozen=True, eq=False)
class AlignedPair:
    """Demonstration and reproduction sampled on the demonstration's N-point grid.

    Input matrices are N×8: rescaled time, relative x/y/z, relative quaternion w/x/y/z.
    """
    demo_inputs: np.ndarray
    demo_wrench: np.ndarray
    rep_inputs: np.ndarray
    rep_wrench: np.ndarray
    dtw_distance: float = 0.0

    @property
    def n(self) -> int:
        return self.demo_inputs.shape[0]


def rescale_time(t) -> np.ndarray:
    """Map timestamps affinely onto [0, 1]."""
    t = np.asarray(t, dtype=np.float64)
    t = (t - t[0]) / (t[-1] - t[0])
    t[-1] = 1.0
    return t


def trajectory_inputs(traj: Trajectory) -> np.ndarray:
    """GP input matrix D = [t, X, Q] of a goal-relative trajectory, time rescaled to [0, 1]."""
    return np.column_stack([rescale_time(traj.timestamps), traj.positions, traj.orientations])


def dtw(x, y) -> DtwResult:
    """Classic full-window dynamic time warping with Euclidean local cost.

    Steps are diagonal, vertical and horizontal with unit weight; the
    traceback prefers the diagonal on ties.

    >>> r = dtw([[0.0], [1.0], [2.0]], [[0.0], [1.0], [1.0], [2.0]])
    >>> r.distance, r.path.tolist()
    (0.0, [[0, 0], [1, 1], [1, 2], [2, 3]])
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, np.newaxis]
    if y.ndim == 1:
        y = y[:, np.newaxis]
    if len(x) == 0 or len(y) == 0:
        raise AlignmentError('empty trajectory')

    cost = cdist(x, y)
    r, c = cost.shape
    acc = np.full((r + 1, c + 1), np.inf)
    acc[0, 0] = 0.0
    local = cost.tolist()
    for i in range(r):
        prev, cur = acc[i], acc[i + 1]
        row = local[i]
        for j in range(c):
            cur[j + 1] = row[j] + min(prev[j], prev[j + 1], cur[j])

    return DtwResult(distance=float(acc[r, c]), path=_traceback(acc), cost=cost)


def _traceback(acc: np.ndarray) -> np.ndarray:
    i, j = acc.shape[0] - 2, acc.shape[1] - 2
    path = [(i, j)]
    while i > 0 or j > 0:
        step = np.argmin((acc[i, j], acc[i, j + 1], acc[i + 1, j]))
        if step == 0:
            i -= 1
            j -= 1
        elif step == 1:
            i -= 1
        else:
            j -= 1
        path.append((i, j))
    return np.array(path[::-1], dtype=np.intp)


def _resample(values: np.ndarray, path: np.ndarray, n: int) -> np.ndarray:
    """Average the rows of `values` mapped onto each of the n target indices."""
    total = np.zeros((n, values.shape[1]))
    counts = np.zeros(n)
    np.add.at(total, path[:, 0], values[path[:, 1]])
    np.add.at(counts, path[:, 0], 1.0)
    return total / counts[:, np.newaxis]


def align_pair(demo: Trajectory, rep: Trajectory, use_dtw: bool = True) -> AlignedPair:
    """Bring a goal-relative reproduction onto the demonstration's time grid.

    DTW runs on the relative position signal only; reproduction samples mapped
    to the same demonstration index are averaged. Both sides share the demo
    timestamps rescaled to [0, 1].
    """
    if not (demo.goal_pose.is_identity() and rep.goal_pose.is_identity()):
        raise AlignmentError('both trajectories must be relativized to their goal pose before alignment')

    n = demo.n
    if use_dtw:
        result = dtw(demo.positions, rep.positions)
        path, distance = result.path, result.distance
    else:
        if rep.n != n:
            raise AlignmentError(f'DTW disabled but {demo.id} has {n} samples and {rep.id} has {rep.n}')
        path = np.column_stack([np.arange(n), np.arange(n)])
        distance = float(np.linalg.norm(demo.positions - rep.positions, axis=1).sum())

    positions = _resample(rep.positions, path, n)
    orientations = quaternion.normalize(_resample(quaternion.canonical(rep.orientations), path, n), atol=1e-12)
    wrench = _resample(rep.wrenches, path, n)

    demo_inputs = trajectory_inputs(demo)
    rep_inputs = np.column_stack([demo_inputs[:, 0], positions, orientations])

    tolerance = get_settings().goal_tolerance
    for traj, final in ((demo, demo.positions[-1]), (rep, positions[-1])):
        if np.linalg.norm(final) > tolerance:
            logger.warning(f'{traj.id}: final sample is {np.linalg.norm(final):.4g} m from the goal')

    logger.debug(f'Aligned {rep.id} ({rep.n} samples) onto {demo.id} ({n} samples), DTW distance {distance:.4g}')
    return AlignedPair(
        demo_inputs=demo_inputs,
        demo_wrench=np.array(demo.wrenches),
        rep_inputs=rep_inputs,
        rep_wrench=wrench,
        dtw_distance=distance,
    )


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
