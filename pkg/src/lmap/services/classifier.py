"""Gaussian Naive Bayes over the six similarity features.

Each class models every feature with an independent normal distribution whose
mean and (biased, 1/n) standard deviation are maximum likelihood estimates;
class priors are label frequencies. Posteriors are normalized in log space.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from lmap.config import get_settings
from lmap.schemas.classifier import ClassifierRecord, ClassStatsRecord
from lmap.schemas.trajectory import Outcome
from lmap.services.gp import ContractError
from lmap.services.similarity import FeatureVector
from scipy.special import expit

logger = logging.getLogger(__name__)

__all__ = [
    'TrainingError',
    'ClassStats',
    'NaiveBayesModel',
    'Assessment',
    'ConfusionMatrix',
    'Evaluation',
    'train_classifier',
    'posterior_success',
    'classify',
    'evaluate_loocv',
    'evaluate_cross',
    'save_classifier',
    'load_classifier',
]

CLASSES = (Outcome.SUCCESS, Outcome.FAILURE)
LOG_2PI = math.log(2 * math.pi)


class TrainingError(ValueError):
    """Training data does not contain both outcome classes."""

    def __init__(self, message: str, missing: Outcome | None = None):
        super().__init__(message)
        self.missing = missing


@dataclass(frozen=True, eq=False)
class ClassStats:
    mu: np.ndarray
    sigma: np.ndarray
    prior: float
    count: int

    def log_likelihood(self, m: np.ndarray) -> float:
        z = (m - self.mu) / self.sigma
        return float(np.sum(-0.5 * z * z - np.log(self.sigma) - 0.5 * LOG_2PI))

    def to_record(self) -> ClassStatsRecord:
        return ClassStatsRecord(prior=self.prior, mu=self.mu.tolist(), sigma=self.sigma.tolist(), count=self.count)

    @classmethod
    def from_record(cls, record: ClassStatsRecord) -> 'ClassStats':
        return cls(np.array(record.mu), np.array(record.sigma), record.prior, record.count)


@dataclass(frozen=True, eq=False)
class NaiveBayesModel:
    success: ClassStats
    failure: ClassStats

    def stats(self, outcome: Outcome) -> ClassStats:
        return self.success if outcome is Outcome.SUCCESS else self.failure

    def log_scores(self, m: np.ndarray) -> tuple[float, float]:
        """ln p(c) + Σ_k ln N(m_k; μ_kc, σ_kc) for success and failure."""
        return (
            math.log(self.success.prior) + self.success.log_likelihood(m),
            math.log(self.failure.prior) + self.failure.log_likelihood(m),
        )


@dataclass(frozen=True, eq=False)
class Assessment:
    trajectory_id: str
    p_success: float
    predicted: Outcome
    features: FeatureVector

    @property
    def p_failure(self) -> float:
        return 1.0 - self.p_success


@dataclass(frozen=True)
class ConfusionMatrix:
    """2×2 counts; rows are actual outcomes, columns predicted, success first."""
    counts: tuple[tuple[int, int], tuple[int, int]] = ((0, 0), (0, 0))

    @classmethod
    def from_outcomes(cls, actual: Sequence[Outcome], predicted: Sequence[Outcome]) -> 'ConfusionMatrix':
        counts = np.zeros((2, 2), dtype=int)
        for a, p in zip(actual, predicted):
            counts[CLASSES.index(Outcome(a)), CLASSES.index(Outcome(p))] += 1
        return cls(tuple(tuple(int(c) for c in row) for row in counts))

    def __add__(self, other: 'ConfusionMatrix') -> 'ConfusionMatrix':
        a, b = np.array(self.counts), np.array(other.counts)
        return ConfusionMatrix(tuple(tuple(int(c) for c in row) for row in a + b))

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    @property
    def correct(self) -> int:
        return self.counts[0][0] + self.counts[1][1]

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else float('nan')


@dataclass(frozen=True, eq=False)
class Evaluation:
    assessments: list[Assessment]
    actual: list[Outcome]
    confusion: ConfusionMatrix

    @property
    def accuracy(self) -> float:
        return self.confusion.accuracy


def _as_matrix(features: Sequence[FeatureVector | np.ndarray]) -> np.ndarray:
    rows = [f.m if isinstance(f, FeatureVector) else np.asarray(f, dtype=np.float64) for f in features]
    X = np.array(rows, dtype=np.float64).reshape(len(rows), -1)
    if not np.all(np.isfinite(X)):
        raise ContractError('features must be finite')
    return X


def train_classifier(features: Sequence[FeatureVector | np.ndarray], labels: Sequence[Outcome],
                     variance_floor: float | None = None) -> NaiveBayesModel:
    """Fit per-class feature means, floored standard deviations and frequency priors.

    Args:
        features: one feature vector per training reproduction
        labels: matching outcome labels
        variance_floor: lower bound on every σ̂, MAP_VARIANCE_FLOOR by default
    Raises:
        TrainingError naming the class without instances
    """
    if len(features) != len(labels):
        raise ContractError(f'{len(features)} feature vectors for {len(labels)} labels')
    floor = get_settings().variance_floor if variance_floor is None else variance_floor
    X = _as_matrix(features)
    y = np.array([Outcome(label).value for label in labels])

    stats = {}
    for outcome in CLASSES:
        Xc = X[y == outcome.value]
        if not len(Xc):
            raise TrainingError(f'no training instances labeled {outcome.value}', missing=outcome)
        stats[outcome] = ClassStats(
            mu=Xc.mean(axis=0),
            sigma=np.maximum(Xc.std(axis=0), floor),
            prior=len(Xc) / len(X),
            count=len(Xc),
        )
    return NaiveBayesModel(success=stats[Outcome.SUCCESS], failure=stats[Outcome.FAILURE])


def posterior_success(log_success: float, log_failure: float) -> float:
    """Normalize two class log-scores into p(success | m).

    >>> round(posterior_success(8.0, 0.0), 6)
    0.999665
    """
    return float(expit(log_success - log_failure))


def classify(model: NaiveBayesModel, m_star: FeatureVector, trajectory_id: str = '') -> Assessment:
    """Posterior probability of success; equal log-scores predict success."""
    m = _as_matrix([m_star])[0]
    log_success, log_failure = model.log_scores(m)
    p_success = posterior_success(log_success, log_failure)
    predicted = Outcome.SUCCESS if log_success >= log_failure else Outcome.FAILURE
    features = m_star if isinstance(m_star, FeatureVector) else FeatureVector(m)
    return Assessment(trajectory_id=trajectory_id, p_success=p_success, predicted=predicted, features=features)


def _ids(ids: Sequence[str] | None, n: int) -> list[str]:
    return list(ids) if ids is not None else [str(i) for i in range(n)]


def evaluate_loocv(features: Sequence[FeatureVector], labels: Sequence[Outcome],
                   ids: Sequence[str] | None = None, variance_floor: float | None = None) -> Evaluation:
    """Leave-one-out cross-validation; folds that would drop a class from training are skipped."""
    labels = [Outcome(label) for label in labels]
    ids = _ids(ids, len(features))
    counts = {outcome: labels.count(outcome) for outcome in CLASSES}

    assessments, actual = [], []
    for i, (f, label) in enumerate(zip(features, labels)):
        if counts[label] < 2:
            logger.warning(f'Skipping fold {ids[i]}: it is the only {label.value} instance')
            continue
        rest = [j for j in range(len(features)) if j != i]
        model = train_classifier([features[j] for j in rest], [labels[j] for j in rest], variance_floor)
        assessments.append(classify(model, f, ids[i]))
        actual.append(label)

    confusion = ConfusionMatrix.from_outcomes(actual, [a.predicted for a in assessments])
    logger.info(f'LOOCV: {confusion.total} folds, accuracy {confusion.accuracy:.4f}')
    return Evaluation(assessments, actual, confusion)


def evaluate_cross(train_features: Sequence[FeatureVector], train_labels: Sequence[Outcome],
                   test_features: Sequence[FeatureVector], test_labels: Sequence[Outcome],
                   test_ids: Sequence[str] | None = None, variance_floor: float | None = None) -> Evaluation:
    """Train on one labeled feature set and classify another."""
    model = train_classifier(train_features, train_labels, variance_floor)
    ids = _ids(test_ids, len(test_features))
    assessments = [classify(model, f, tid) for f, tid in zip(test_features, ids)]
    actual = [Outcome(label) for label in test_labels]
    confusion = ConfusionMatrix.from_outcomes(actual, [a.predicted for a in assessments])
    return Evaluation(assessments, actual, confusion)


def save_classifier(model: NaiveBayesModel, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    record = ClassifierRecord(success=model.success.to_record(), failure=model.failure.to_record())
    path.write_text(record.model_dump_json(indent=2) + '\n', encoding='utf-8')
    return path


def load_classifier(path: str | Path) -> NaiveBayesModel:
    record = ClassifierRecord.model_validate_json(Path(path).read_text(encoding='utf-8'))
    return NaiveBayesModel(ClassStats.from_record(record.success), ClassStats.from_record(record.failure))


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
