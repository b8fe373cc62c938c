from enum import Enum

from lmap.schemas.trajectory import Outcome
from pydantic import BaseModel, Field, model_validator


class Task(str, Enum):
    SNAPFIT = 'snapfit'
    ROUND_SNAPFIT = 'round-snapfit'
    SCREWING = 'screwing'


class FailureMode(str, Enum):
    """How a failed reproduction goes wrong.

    jam: the part or screw blocks and the force keeps rising
    miss: no contact is made, only sensor noise is measured
    loose: contact at reduced amplitude, without tightening
    """
    JAM = 'jam'
    MISS = 'miss'
    LOOSE = 'loose'


DEFAULT_SAMPLES = {
    Task.SNAPFIT: 97,
    Task.ROUND_SNAPFIT: 143,
    Task.SCREWING: 204,
}


class ScenarioSpec(BaseModel):
    """Parameters of one synthetic dataset.

    Attributes
        task: Task family to emulate
        n_samples: Samples per trajectory, task default when omitted
        seed: Seed of every random draw in the dataset
        start_jitter: Std (m) of the random start offset of every trajectory
        failure_mode: Force all failures to one mode; cycle through modes when None
        n_reps: Number of reproductions
        n_failures: Number of failed reproductions, half of n_reps when omitted
        phase_shift: Shift of the contact onset in normalized time
        amplitude_bias: Scale of the reproductions' contact wrench relative to the demonstration
        force_noise: Std (N) of force sensor noise
        torque_noise: Std (N·m) of torque sensor noise
    """
    task: Task = Task.SNAPFIT
    n_samples: int | None = Field(None, ge=10)
    seed: int = Field(0, ge=0, lt=2 ** 64)
    start_jitter: float = Field(0.01, ge=0)
    failure_mode: FailureMode | None = None
    n_reps: int = Field(20, ge=1)
    n_failures: int | None = Field(None, ge=0)
    phase_shift: float = Field(0.0, ge=-0.2, le=0.2)
    amplitude_bias: float = Field(0.9, gt=0)
    force_noise: float = Field(0.05, ge=0)
    torque_noise: float = Field(0.005, ge=0)

    @model_validator(mode='after')
    def _failures_fit(self) -> 'ScenarioSpec':
        if self.n_failures is not None and self.n_failures > self.n_reps:
            raise ValueError(f'n_failures ({self.n_failures}) exceeds n_reps ({self.n_reps})')
        return self

    @property
    def samples(self) -> int:
        return self.n_samples or DEFAULT_SAMPLES[self.task]

    @property
    def failures(self) -> int:
        return self.n_reps // 2 if self.n_failures is None else self.n_failures


class ManifestEntry(BaseModel):
    id: str
    label: Outcome
    failure_mode: FailureMode | None = None


class Manifest(BaseModel):
    """Everything needed to regenerate a synthetic dataset, written as manifest.json."""
    spec: ScenarioSpec
    n_samples: int
    parameters: dict[str, float] = Field(default_factory=dict, description='Generator constants')
    reps: list[ManifestEntry] = Field(default_factory=list)
