from pydantic import BaseModel, Field


class ClassStatsRecord(BaseModel):
    """Per-class Gaussian statistics of the six similarity features."""
    prior: float = Field(..., gt=0, lt=1)
    mu: list[float] = Field(..., min_length=6, max_length=6)
    sigma: list[float] = Field(..., min_length=6, max_length=6)
    count: int = Field(..., ge=1)


class ClassifierRecord(BaseModel):
    """Persisted Naive Bayes model."""
    success: ClassStatsRecord
    failure: ClassStatsRecord
