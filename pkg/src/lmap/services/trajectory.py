import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
from lmap.schemas.trajectory import CSV_COLUMNS, Outcome, PoseRecord
from lmap.schemas.trajectory import SidecarRecord, TrajectoryRecord
from lmap.services import quaternion

logger = logging.getLogger(__name__)

__all__ = [
    'IngestError',
    'Pose',
    'WrenchSample',
    'Trajectory',
    'load_trajectory',
    'save_trajectory',
    'relativize_to_goal',
]

QUATERNION_TOLERANCE = 1e-6


class IngestError(ValueError):
    """Trajectory data violates the file schema or the trajectory invariants."""


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


def _unit_rows(q: np.ndarray) -> np.ndarray:
    """Normalize quaternion rows, leaving rows that are already unit untouched."""
    norm = np.linalg.norm(q, axis=-1)
    bad = np.flatnonzero(~np.isfinite(norm) | (norm == 0.0))
    if bad.size:
        raise IngestError(f'zero-norm quaternion at row {bad[0] + 1}')
    off = np.abs(norm - 1.0) > 1e-12
    q = q.copy()
    q[off] /= norm[off, np.newaxis]
    return q


@dataclass(frozen=True, eq=False)
class Pose:
    """End-effector pose: position (m) and unit quaternion (w, x, y, z)."""
    position: np.ndarray
    orientation: np.ndarray

    def __post_init__(self):
        position = np.asarray(self.position, dtype=np.float64).reshape(3)
        orientation = _unit_rows(np.asarray(self.orientation, dtype=np.float64).reshape(1, 4))[0]
        object.__setattr__(self, 'position', _readonly(position))
        object.__setattr__(self, 'orientation', _readonly(orientation))

    @classmethod
    def identity(cls) -> 'Pose':
        return cls(np.zeros(3), quaternion.IDENTITY)

    @classmethod
    def from_record(cls, record: PoseRecord) -> 'Pose':
        return cls(record.position, record.orientation)

    def to_record(self) -> PoseRecord:
        return PoseRecord(position=self.position.tolist(), orientation=self.orientation.tolist())

    def is_identity(self) -> bool:
        return bool(np.all(self.position == 0.0) and np.array_equal(self.orientation, quaternion.IDENTITY))


@dataclass(frozen=True, eq=False)
class WrenchSample:
    """Force (N) and torque (N·m) measured at the end-effector."""
    force: np.ndarray
    torque: np.ndarray

    def __post_init__(self):
        force = np.asarray(self.force, dtype=np.float64).reshape(3)
        torque = np.asarray(self.torque, dtype=np.float64).reshape(3)
        if not (np.all(np.isfinite(force)) and np.all(np.isfinite(torque))):
            raise ValueError('wrench components must be finite')
        object.__setattr__(self, 'force', _readonly(force))
        object.__setattr__(self, 'torque', _readonly(torque))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-stamped end-effector poses and wrenches of one movement.

    Arrays are stored column-wise: timestamps (N,), positions (N, 3),
    orientations (N, 4) and wrenches (N, 6) ordered fx, fy, fz, tx, ty, tz.
    """
    id: str
    timestamps: np.ndarray
    positions: np.ndarray
    orientations: np.ndarray
    wrenches: np.ndarray
    goal_pose: Pose
    label: Outcome | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.timestamps, dtype=np.float64).reshape(-1)
        n = t.shape[0]
        positions = np.asarray(self.positions, dtype=np.float64)
        orientations = np.asarray(self.orientations, dtype=np.float64)
        wrenches = np.asarray(self.wrenches, dtype=np.float64)
        if positions.shape != (n, 3) or orientations.shape != (n, 4) or wrenches.shape != (n, 6):
            raise IngestError(f'length mismatch: {n} timestamps, positions {positions.shape}, '
                              f'orientations {orientations.shape}, wrenches {wrenches.shape}')
        if n < 2:
            raise IngestError(f'trajectory needs at least 2 samples, got {n}')
        for name, values in (('timestamps', t[:, np.newaxis]), ('positions', positions), ('wrenches', wrenches)):
            bad = np.flatnonzero(~np.all(np.isfinite(values), axis=1))
            if bad.size:
                raise IngestError(f'non-finite {name} at row {bad[0] + 1}')
        step = np.flatnonzero(np.diff(t) <= 0)
        if step.size:
            raise IngestError(f'non-monotone timestamps at row {step[0] + 2}')
        object.__setattr__(self, 'timestamps', _readonly(t))
        object.__setattr__(self, 'positions', _readonly(positions))
        object.__setattr__(self, 'orientations', _readonly(_unit_rows(orientations)))
        object.__setattr__(self, 'wrenches', _readonly(wrenches))
        if self.label is not None:
            object.__setattr__(self, 'label', Outcome(self.label))

    @property
    def n(self) -> int:
        return self.timestamps.shape[0]

    @property
    def poses(self) -> list[Pose]:
        return [Pose(p, q) for p, q in zip(self.positions, self.orientations)]

    @property
    def wrench_samples(self) -> list[WrenchSample]:
        return [WrenchSample(w[:3], w[3:]) for w in self.wrenches]

    def replace(self, **changes) -> 'Trajectory':
        values = {
            'id': self.id,
            'timestamps': self.timestamps,
            'positions': self.positions,
            'orientations': self.orientations,
            'wrenches': self.wrenches,
            'goal_pose': self.goal_pose,
            'label': self.label,
            'metadata': self.metadata,
        }
        values.update(changes)
        return Trajectory(**values)

    def to_frame(self) -> pd.DataFrame:
        data = np.column_stack([self.timestamps, self.positions, self.orientations, self.wrenches])
        return pd.DataFrame(data, columns=list(CSV_COLUMNS))

    def sidecar(self) -> SidecarRecord:
        return SidecarRecord(id=self.id, goal_pose=self.goal_pose.to_record(), label=self.label)


def _frame_to_arrays(frame: pd.DataFrame, source: str) -> np.ndarray:
    missing = [c for c in CSV_COLUMNS if c not in frame.columns]
    if missing:
        raise IngestError(f'{source}: missing columns {missing}')
    numeric = frame[list(CSV_COLUMNS)].apply(pd.to_numeric, errors='coerce')
    bad = np.flatnonzero(numeric.isna().any(axis=1).to_numpy())
    if bad.size:
        raise IngestError(f'{source}: malformed row {bad[0] + 1}')
    return numeric.to_numpy(dtype=np.float64)


def _build(data: np.ndarray, sidecar: SidecarRecord, source: str) -> Trajectory:
    positions = data[:, 1:4]
    orientations = data[:, 4:8]
    if sidecar.goal_pose is None:
        logger.warning(f'{source}: no goal_pose given, falling back to the final pose')
        goal = Pose(positions[-1], orientations[-1])
    else:
        goal = Pose.from_record(sidecar.goal_pose)
    try:
        return Trajectory(
            id=sidecar.id,
            timestamps=data[:, 0],
            positions=positions,
            orientations=orientations,
            wrenches=data[:, 8:14],
            goal_pose=goal,
            label=sidecar.label,
        )
    except IngestError as e:
        raise IngestError(f'{source}: {e}') from e


def _read_sidecar(path: Path) -> SidecarRecord:
    sidecar_path = path.with_suffix('.json')
    if not sidecar_path.exists():
        logger.warning(f'{path}: no sidecar found, using file stem as id')
        return SidecarRecord(id=path.stem)
    try:
        return SidecarRecord.model_validate_json(sidecar_path.read_text(encoding='utf-8'))
    except ValueError as e:
        raise IngestError(f'{sidecar_path}: invalid sidecar: {e}') from e


def load_trajectory(path: str | Path, format: str | None = None) -> Trajectory:
    """Load and validate one trajectory.

    Args:
        path: CSV file (with optional sidecar JSON of the same stem) or a
            self-contained JSON trajectory
        format: 'csv' or 'json'; inferred from the suffix when omitted
    Returns:
        Validated Trajectory with normalized quaternions
    Raises:
        IngestError naming the offending row or field
    """
    path = Path(path)
    format = (format or path.suffix.lstrip('.')).lower()
    if not path.exists():
        raise IngestError(f'{path}: no such file')

    if format == 'csv':
        try:
            frame = pd.read_csv(path, encoding='utf-8', float_precision='round_trip')
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
            raise IngestError(f'{path}: {e}') from e
        return _build(_frame_to_arrays(frame, str(path)), _read_sidecar(path), str(path))

    if format == 'json':
        try:
            record = TrajectoryRecord.model_validate_json(path.read_text(encoding='utf-8'))
        except ValueError as e:
            raise IngestError(f'{path}: invalid trajectory document: {e}') from e
        try:
            frame = pd.DataFrame(record.samples)
        except ValueError as e:
            raise IngestError(f'{path}: length mismatch between sample columns') from e
        return _build(_frame_to_arrays(frame, str(path)), record, str(path))

    raise IngestError(f'{path}: unsupported format {format!r}')


def save_trajectory(traj: Trajectory, path: str | Path, format: str | None = None) -> Path:
    """Write a trajectory as CSV plus sidecar JSON, or as one JSON document."""
    path = Path(path)
    format = (format or path.suffix.lstrip('.') or 'csv').lower()
    path.parent.mkdir(parents=True, exist_ok=True)
    if format == 'json':
        frame = traj.to_frame()
        record = TrajectoryRecord(**traj.sidecar().model_dump(),
                                  samples={c: frame[c].tolist() for c in CSV_COLUMNS})
        path.write_text(record.model_dump_json(indent=2), encoding='utf-8')
        return path
    traj.to_frame().to_csv(path, index=False, float_format='%.17g', lineterminator='\n')
    path.with_suffix('.json').write_text(traj.sidecar().model_dump_json(indent=2) + '\n', encoding='utf-8')
    return path


def relativize_to_goal(traj: Trajectory) -> Trajectory:
    """Express every pose relative to the trajectory's goal pose.

    Positions become position - goal position and orientations become
    conj(goal) ⊗ q with w >= 0. The returned trajectory has the identity as
    its goal pose, so applying the function again is a no-op.
    """
    goal = traj.goal_pose
    return traj.replace(
        positions=traj.positions - goal.position,
        orientations=quaternion.relative_to(goal.orientation, traj.orientations),
        goal_pose=Pose.identity(),
    )
