"""DTW and alignment tests."""
import numpy as np
import pytest
from lmap.services import quaternion
from lmap.services.alignment import AlignmentError, align_pair, dtw, rescale_time, trajectory_inputs
from lmap.services.trajectory import Pose, Trajectory, relativize_to_goal


def relative_trajectory(n, traj_id='t', z0=0.1, wrench_scale=1.0):
    t = np.linspace(0.0, 2.0, n)
    s = t / t[-1]
    positions = np.column_stack([np.zeros(n), np.zeros(n), z0 * (1.0 - s)])
    wrenches = np.zeros((n, 6))
    wrenches[:, 2] = wrench_scale * np.sin(np.pi * s)
    return Trajectory(traj_id, t, positions, np.tile(quaternion.IDENTITY, (n, 1)), wrenches, Pose.identity())


def test_dtw_known_example():
    """Test the path and distance of a repeated-sample example."""
    result = dtw([0.0, 1.0, 2.0], [0.0, 1.0, 1.0, 2.0])

    assert result.distance == 0.0
    assert result.path.tolist() == [[0, 0], [1, 1], [1, 2], [2, 3]]


def test_dtw_identical_series_diagonal():
    x = np.random.default_rng(0).standard_normal((20, 3))
    result = dtw(x, x)

    assert result.distance == 0.0
    assert result.path.tolist() == [[i, i] for i in range(20)]


def test_dtw_path_is_monotone_and_complete():
    rng = np.random.default_rng(1)
    result = dtw(rng.standard_normal((15, 2)), rng.standard_normal((23, 2)))
    path = result.path

    assert path[0].tolist() == [0, 0]
    assert path[-1].tolist() == [14, 22]
    steps = np.diff(path, axis=0)
    assert np.all((steps >= 0) & (steps <= 1))
    assert np.all(steps.sum(axis=1) >= 1)
    assert result.distance == pytest.approx(result.cost[path[:, 0], path[:, 1]].sum())


def test_dtw_distance_symmetric():
    rng = np.random.default_rng(2)
    for n, m in [(1, 4), (9, 9), (17, 26)]:
        a, b = rng.standard_normal((n, 3)), rng.standard_normal((m, 3))
        assert dtw(a, b).distance == pytest.approx(dtw(b, a).distance, rel=1e-12)


def test_dtw_empty():
    with pytest.raises(AlignmentError):
        dtw(np.zeros((0, 3)), np.zeros((4, 3)))


def test_rescale_time():
    np.testing.assert_allclose(rescale_time([2.0, 3.0, 6.0]), [0.0, 0.25, 1.0])


def test_trajectory_inputs_layout():
    traj = relative_trajectory(7)
    inputs = trajectory_inputs(traj)

    assert inputs.shape == (7, 8)
    assert inputs[0, 0] == 0.0 and inputs[-1, 0] == 1.0
    np.testing.assert_array_equal(inputs[:, 1:4], traj.positions)
    np.testing.assert_array_equal(inputs[:, 4:], traj.orientations)


def test_align_pair_equalizes_lengths():
    """Test that a 10-sample reproduction is brought onto a 5-sample demonstration grid."""
    demo, rep = relative_trajectory(5, 'demo'), relative_trajectory(10, 'rep')
    pair = align_pair(demo, rep)

    assert pair.n == 5
    assert pair.rep_inputs.shape == (5, 8)
    assert pair.rep_wrench.shape == (5, 6)
    np.testing.assert_array_equal(pair.rep_inputs[:, 0], pair.demo_inputs[:, 0])


def test_align_pair_identical_trajectories():
    demo = relative_trajectory(12, 'demo')
    pair = align_pair(demo, demo)

    np.testing.assert_allclose(pair.rep_inputs, pair.demo_inputs, atol=1e-12)
    np.testing.assert_array_equal(pair.rep_wrench, pair.demo_wrench)
    assert pair.dtw_distance == 0.0


def test_align_pair_duplicated_samples_collapse_onto_demo():
    """Test that a reproduction repeating every demonstration sample twice resamples back to the demonstration."""
    demo = relative_trajectory(11, 'demo')
    demo = demo.replace(wrenches=np.random.default_rng(4).standard_normal((11, 6)))
    rep = Trajectory('doubled', np.linspace(0.0, 3.0, 22), np.repeat(demo.positions, 2, axis=0),
                     np.repeat(demo.orientations, 2, axis=0), np.repeat(demo.wrenches, 2, axis=0), Pose.identity())
    pair = align_pair(demo, rep)

    assert pair.dtw_distance == 0.0
    np.testing.assert_allclose(pair.rep_inputs, pair.demo_inputs, atol=1e-12, rtol=0)
    np.testing.assert_allclose(pair.rep_wrench, demo.wrenches, atol=1e-12, rtol=0)


def test_align_pair_requires_relative_inputs():
    demo = relative_trajectory(5)
    absolute = demo.replace(goal_pose=Pose([0.1, 0.0, 0.0], quaternion.IDENTITY))
    with pytest.raises(AlignmentError, match='relativized'):
        align_pair(demo, absolute)


def test_align_pair_without_dtw_needs_equal_lengths():
    demo, rep = relative_trajectory(5), relative_trajectory(6)
    with pytest.raises(AlignmentError, match='DTW disabled'):
        align_pair(demo, rep, use_dtw=False)


def test_align_pair_without_dtw_pairs_by_index():
    demo, rep = relative_trajectory(8, 'demo'), relative_trajectory(8, 'rep', wrench_scale=2.0)
    pair = align_pair(demo, rep, use_dtw=False)

    np.testing.assert_array_equal(pair.rep_wrench, rep.wrenches)


def test_align_pair_short_goal_warns(caplog):
    demo = relative_trajectory(6)
    stopped = demo.replace(positions=demo.positions + [0.0, 0.0, 0.01])
    align_pair(demo, relativize_to_goal(stopped))

    assert 'from the goal' in caplog.text


if __name__ == '__main__':
    __import__('pytest').main([__file__])
