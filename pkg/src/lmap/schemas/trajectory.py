from enum import Enum

from pydantic import BaseModel, Field, field_validator


class Outcome(str, Enum):
    """Execution outcome label of a reproduction."""
    SUCCESS = 'success'
    FAILURE = 'failure'


class PoseRecord(BaseModel):
    """Serialized pose.

    Attributes
        position: Cartesian position in meters
        orientation: Quaternion (w, x, y, z)
    """
    position: list[float] = Field(..., min_length=3, max_length=3, description='Position [x, y, z] in meters')
    orientation: list[float] = Field(..., min_length=4, max_length=4, description='Quaternion [w, x, y, z]')


class SidecarRecord(BaseModel):
    """Sidecar JSON stored next to every trajectory CSV.

    Attributes
        id: Trajectory identifier
        goal_pose: Final desired pose of the movement, may be absent
        label: Outcome label, null for unlabeled trajectories
    """
    id: str = Field(..., description='Opaque trajectory identifier')
    goal_pose: PoseRecord | None = Field(None, description='Commanded goal pose')
    label: Outcome | None = Field(None, description='success, failure or null')

    @field_validator('label', mode='before')
    @classmethod
    def _lower_label(cls, v):
        return v.lower() if isinstance(v, str) else v


class TrajectoryRecord(SidecarRecord):
    """Self-contained JSON trajectory: sidecar fields plus one list per CSV column.

    Attributes
        samples: Mapping of column name (see CSV_COLUMNS) to per-sample values
    """
    samples: dict[str, list[float]] = Field(..., description='Column name to sample values')


CSV_COLUMNS = ('t', 'x', 'y', 'z', 'qw', 'qx', 'qy', 'qz', 'fx', 'fy', 'fz', 'tx', 'ty', 'tz')
WRENCH_COMPONENTS = ('fx', 'fy', 'fz', 'tx', 'ty', 'tz')
