from enum import Enum
from pathlib import Path

from lmap.config import get_settings
from lmap.schemas.trajectory import Outcome
from pydantic import BaseModel, ConfigDict, Field, model_validator


class EvalMode(str, Enum):
    LOOCV = 'loocv'
    CROSS_DEMO = 'cross-demo'


class PipelineConfig(BaseModel):
    """Options of one command invocation.

    Attributes
        dataset_dirs: Dataset directories, the first one is used by train and assess
        model_out: Directory holding the trained model files
        variance_floor: Lower bound on the classifier's per-feature standard deviation
        dtw_enabled: Align reproductions with DTW, otherwise pair samples by index
        parallel_fits: Fit the six wrench components on worker threads
        seed: Seed of generated data, None outside `map generate`
    """
    dataset_dirs: list[Path] = Field(..., min_length=1)
    model_out: Path | None = None
    variance_floor: float = Field(default_factory=lambda: get_settings().variance_floor, gt=0)
    dtw_enabled: bool = True
    parallel_fits: bool = True
    seed: int | None = Field(None, ge=0, lt=2 ** 64)

    model_config = ConfigDict(validate_default=True)

    @property
    def dataset_dir(self) -> Path:
        return self.dataset_dirs[0]


class AssessmentRecord(BaseModel):
    dataset: str
    trajectory_id: str
    actual: Outcome | None = None
    predicted: Outcome
    p_success: float = Field(..., ge=0, le=1)
    degenerate: bool = False
    m: list[float] = Field(..., min_length=6, max_length=6)


class EvaluationReport(BaseModel):
    """Evaluation outcome; confusion rows are actual outcomes, columns predicted, success first."""
    mode: EvalMode
    datasets: list[str]
    per_trajectory: list[AssessmentRecord] = Field(default_factory=list)
    confusion: list[list[int]] = Field(default_factory=lambda: [[0, 0], [0, 0]])
    accuracy: float
    timing: dict[str, float] = Field(default_factory=dict, description='Wall-clock seconds per stage')

    @model_validator(mode='after')
    def _accuracy_matches_confusion(self) -> 'EvaluationReport':
        total = sum(sum(row) for row in self.confusion)
        if total and self.accuracy != (self.confusion[0][0] + self.confusion[1][1]) / total:
            raise ValueError('accuracy does not match the confusion matrix')
        return self


class ModelInfo(BaseModel):
    """Alignment and classifier options a model directory was trained with."""
    demo_id: str
    n_samples: int = Field(..., ge=2)
    n_reproductions: int = Field(..., ge=0)
    dtw_enabled: bool = True
    variance_floor: float = Field(..., gt=0)
