"""Synthetic snap-fit and screwing datasets with known outcomes.

Every trajectory approaches its goal from a randomly offset start, then goes
through a task-specific contact phase whose wrench profile depends on the
outcome. The start offset decays to zero before contact, so the pre-contact
part of a movement carries no wrench information. Each trajectory draws from
its own random stream seeded by (seed, index), which keeps the noise of a
trajectory unchanged when only the start jitter is varied.
"""

import logging

import numpy as np
from lmap.schemas.bench import FailureMode, Manifest, ManifestEntry, ScenarioSpec, Task
from lmap.schemas.trajectory import Outcome
from lmap.services import quaternion
from lmap.services.dataset import Dataset
from lmap.services.trajectory import Pose, Trajectory

logger = logging.getLogger(__name__)

__all__ = [
    'generate',
    'generate_snapfit',
    'generate_round_snapfit',
    'generate_screwing',
]

DT = 0.05
CONTACT_START = 0.4
APPROACH_HEIGHT = 0.10
INSERT_DEPTH = 0.01
PROFILE_JITTER = 0.05   # relative std of per-trajectory contact amplitude
PHASE_JITTER = 0.01     # std of per-trajectory contact onset

SNAP_PEAK = 20.0
SNAP_RESIDUAL = 5.0
SNAP_AT = 0.6
JAM_FORCE = 30.0
RELEASE_WIDTH = 0.02

ROUND_SNAP_PEAK = 12.0
ROUND_SNAP_RESIDUAL = 3.0
ROUND_SNAPS_AT = (0.3, 0.6, 0.9)
ROUND_JAM_FORCE = 25.0

SCREW_PRESS = 5.0
SCREW_RAMP = (0.2, 0.6)       # torque-z = a + b·u
SCREW_RATCHET = 0.15
SCREW_REVOLUTIONS = 3
SCREW_SPIKE = 1.5             # times the ramp end
SCREW_SPIKE_FROM = 0.9
SCREW_MISS_TORQUE = 0.02
SCREW_JAM_AT = 0.5

FAILURE_MODES = (FailureMode.JAM, FailureMode.MISS, FailureMode.LOOSE)


def _snaps(u: np.ndarray, snaps_at, peak: float, residual: float) -> np.ndarray:
    """Spring ramps up to `peak` at each snap, each followed by a fast release to `residual`."""
    f = np.zeros_like(u)
    prev, base = 0.0, 0.0
    for k, at in enumerate(snaps_at):
        seg = (u >= prev) & (u < at)
        f[seg] = base + (peak - base) * (u[seg] - prev) / (at - prev)
        if k:
            f[seg] += (peak - residual) * np.exp(-(u[seg] - prev) / RELEASE_WIDTH)
        prev, base = at, residual
    tail = u >= prev
    f[tail] = residual + (peak - residual) * np.exp(-(u[tail] - prev) / RELEASE_WIDTH)
    return f


def _snapfit_wrench(u: np.ndarray, mode: FailureMode | None) -> np.ndarray:
    if mode is None:
        fz = _snaps(u, (SNAP_AT,), SNAP_PEAK, SNAP_RESIDUAL)
    elif mode is FailureMode.JAM:
        fz = JAM_FORCE * (1.0 - np.exp(-u / 0.25))
    elif mode is FailureMode.MISS:
        fz = np.zeros_like(u)
    else:
        fz = 0.5 * _snaps(u, (SNAP_AT,), SNAP_PEAK, SNAP_RESIDUAL)
    return _press_wrench(fz)


def _round_snapfit_wrench(u: np.ndarray, mode: FailureMode | None) -> np.ndarray:
    if mode is None:
        fz = _snaps(u, ROUND_SNAPS_AT, ROUND_SNAP_PEAK, ROUND_SNAP_RESIDUAL)
    elif mode is FailureMode.JAM:
        # only the first snap engages, then the part blocks
        first = ROUND_SNAPS_AT[0]
        fz = _snaps(u, (first,), ROUND_SNAP_PEAK, ROUND_SNAP_RESIDUAL)
        after = u >= first
        du = u[after] - first
        fz[after] += (ROUND_JAM_FORCE - ROUND_SNAP_RESIDUAL) * (1.0 - np.exp(-du / 0.15))
    elif mode is FailureMode.MISS:
        fz = np.zeros_like(u)
    else:
        fz = 0.5 * _snaps(u, ROUND_SNAPS_AT, ROUND_SNAP_PEAK, ROUND_SNAP_RESIDUAL)
    return _press_wrench(fz)


def _press_wrench(fz: np.ndarray) -> np.ndarray:
    w = np.zeros((fz.shape[0], 6))
    w[:, 2] = fz
    return w


def _screwing_wrench(u: np.ndarray, mode: FailureMode | None) -> np.ndarray:
    a, b = SCREW_RAMP
    ramp = a + b * u
    ratchet = SCREW_RATCHET * np.mod(SCREW_REVOLUTIONS * u, 1.0)
    tight = SCREW_SPIKE * (a + b)
    if mode is None:
        w = np.clip((u - SCREW_SPIKE_FROM) / (1.0 - SCREW_SPIKE_FROM), 0.0, 1.0)
        tz = (1.0 - w) * (ramp + ratchet) + w * tight
    elif mode is FailureMode.JAM:
        tz = tight * np.minimum(1.0, u / SCREW_JAM_AT)
    elif mode is FailureMode.MISS:
        tz = SCREW_MISS_TORQUE * np.sin(2 * np.pi * SCREW_REVOLUTIONS * u)
    else:
        tz = ramp + ratchet
    w = np.zeros((u.shape[0], 6))
    w[:, 2] = SCREW_PRESS
    w[:, 5] = tz
    return w


def _screwing_turns(u: np.ndarray, mode: FailureMode | None) -> np.ndarray:
    """Relative yaw about z; reaches zero at the goal unless the screw jams."""
    progress = np.minimum(u, SCREW_JAM_AT) if mode is FailureMode.JAM else u
    return -2 * np.pi * SCREW_REVOLUTIONS * (1.0 - progress)


CONTACT_WRENCH = {
    Task.SNAPFIT: _snapfit_wrench,
    Task.ROUND_SNAPFIT: _round_snapfit_wrench,
    Task.SCREWING: _screwing_wrench,
}


def _goal_pose(seed: int) -> Pose:
    rng = np.random.default_rng([seed])
    position = np.array([0.55, -0.10, 0.15]) + rng.uniform(-0.05, 0.05, 3)
    yaw = rng.uniform(-np.pi, np.pi)
    # tool pointing down, random yaw
    orientation = quaternion.multiply(quaternion.from_axis_angle([0, 0, 1], yaw),
                                      quaternion.from_axis_angle([1, 0, 0], np.pi))
    return Pose(position, orientation)


def _trajectory(spec: ScenarioSpec, index: int, traj_id: str, goal: Pose,
                mode: FailureMode | None, label: Outcome | None, amplitude: float) -> Trajectory:
    rng = np.random.default_rng([spec.seed, index])
    offset = spec.start_jitter * rng.standard_normal(3)
    amplitude *= 1.0 + PROFILE_JITTER * rng.standard_normal()
    onset = np.clip(CONTACT_START + spec.phase_shift + PHASE_JITTER * rng.standard_normal(), 0.1, 0.9)
    noise = rng.standard_normal((spec.samples, 6))

    n = spec.samples
    s = np.linspace(0.0, 1.0, n)
    approach = s < onset
    u = np.clip((s - onset) / (1.0 - onset), 0.0, 1.0)

    rel = np.zeros((n, 3))
    a = s[approach] / onset
    rel[approach, 2] = APPROACH_HEIGHT * (1.0 - a) + INSERT_DEPTH
    rel[approach] += offset * ((1.0 - a) ** 2)[:, np.newaxis]
    rel[~approach, 2] = INSERT_DEPTH * (1.0 - u[~approach])

    if spec.task is Task.SCREWING:
        yaw = _screwing_turns(u, mode)
        rel_q = quaternion.from_axis_angle([0, 0, 1], yaw)
    else:
        rel_q = np.tile(quaternion.IDENTITY, (n, 1))

    wrench = amplitude * CONTACT_WRENCH[spec.task](u, mode)
    wrench[approach] = 0.0
    wrench += noise * np.repeat([spec.force_noise, spec.torque_noise], 3)

    return Trajectory(
        id=traj_id,
        timestamps=DT * np.arange(n),
        positions=goal.position + rel,
        orientations=quaternion.canonical(quaternion.multiply(goal.orientation, rel_q)),
        wrenches=wrench,
        goal_pose=goal,
        label=label,
    )


def _plan(spec: ScenarioSpec) -> list[ManifestEntry]:
    n_success = spec.n_reps - spec.failures
    entries = [ManifestEntry(id=f'rep_{i:03d}', label=Outcome.SUCCESS) for i in range(n_success)]
    for k in range(spec.failures):
        mode = spec.failure_mode or FAILURE_MODES[k % len(FAILURE_MODES)]
        entries.append(ManifestEntry(id=f'rep_{n_success + k:03d}', label=Outcome.FAILURE, failure_mode=mode))
    return entries


def _parameters(task: Task) -> dict[str, float]:
    common = {
        'dt': DT,
        'contact_start': CONTACT_START,
        'approach_height': APPROACH_HEIGHT,
        'insert_depth': INSERT_DEPTH,
        'profile_jitter': PROFILE_JITTER,
        'phase_jitter': PHASE_JITTER,
    }
    if task is Task.SNAPFIT:
        common.update(snap_peak=SNAP_PEAK, snap_residual=SNAP_RESIDUAL, snap_at=SNAP_AT, jam_force=JAM_FORCE)
    elif task is Task.ROUND_SNAPFIT:
        common.update(snap_peak=ROUND_SNAP_PEAK, snap_residual=ROUND_SNAP_RESIDUAL, jam_force=ROUND_JAM_FORCE,
                      **{f'snap_at_{i}': at for i, at in enumerate(ROUND_SNAPS_AT)})
    else:
        common.update(press_force=SCREW_PRESS, ramp_start=SCREW_RAMP[0], ramp_slope=SCREW_RAMP[1],
                      ratchet=SCREW_RATCHET, revolutions=SCREW_REVOLUTIONS, spike=SCREW_SPIKE,
                      spike_from=SCREW_SPIKE_FROM, miss_torque=SCREW_MISS_TORQUE, jam_at=SCREW_JAM_AT)
    return common


def generate(spec: ScenarioSpec) -> Dataset:
    """Build the demonstration and labeled reproductions described by `spec`.

    The demonstration is a success at unit amplitude; reproductions are scaled
    by `amplitude_bias`. Equal specs give bit-identical datasets.
    """
    goal = _goal_pose(spec.seed)
    plan = _plan(spec)
    demo = _trajectory(spec, 0, 'demo', goal, None, None, 1.0)
    reps = [
        _trajectory(spec, i + 1, entry.id, goal, entry.failure_mode, entry.label, spec.amplitude_bias)
        for i, entry in enumerate(plan)
    ]
    manifest = Manifest(spec=spec, n_samples=spec.samples, parameters=_parameters(spec.task), reps=plan)
    logger.info(f'Generated {spec.task.value} dataset: seed {spec.seed}, {spec.samples} samples, '
                f'{spec.n_reps - spec.failures} successes, {spec.failures} failures')
    return Dataset(demo=demo, reps=reps, manifest=manifest, name=f'{spec.task.value}-{spec.seed}')


def _generate_task(task: Task, spec: ScenarioSpec) -> Dataset:
    if spec.task is not task:
        raise ValueError(f'expected a {task.value} scenario, got {spec.task.value}')
    return generate(spec)


def generate_snapfit(spec: ScenarioSpec) -> Dataset:
    return _generate_task(Task.SNAPFIT, spec)


def generate_round_snapfit(spec: ScenarioSpec) -> Dataset:
    return _generate_task(Task.ROUND_SNAPFIT, spec)


def generate_screwing(spec: ScenarioSpec) -> Dataset:
    return _generate_task(Task.SCREWING, spec)
