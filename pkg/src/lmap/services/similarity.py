"""Hellinger distances between demonstration and reproduction wrench models.

For two zero-mean Gaussians over the same N-point grid the Hellinger distance
only depends on the covariance log-determinants:

    h² = 1 - exp(¼ ln|K1| + ¼ ln|K2| - ½ ln|(K1 + K2)/2|)

The six per-component distances are normalized by their sum into the
similarity feature vector m.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from lmap.schemas.trajectory import Outcome
from lmap.services.gp import ContractError, NumericalError, WrenchModelSet
from scipy.integrate import quad
from scipy.linalg import LinAlgError, cholesky

logger = logging.getLogger(__name__)

__all__ = [
    'FeatureVector',
    'FeatureRow',
    'hellinger_gp',
    'hellinger_1d_oracle',
    'extract_features',
    'write_features_csv',
    'read_features_csv',
]

N_FEATURES = 6
DEGENERATE_TOTAL = 1e-12
FEATURE_COLUMNS = tuple(f'm{k}' for k in range(1, N_FEATURES + 1))


@dataclass(frozen=True, eq=False)
class FeatureVector:
    """Normalized dissimilarities m (sum 1) and the raw distances h they came from.

    `degenerate` marks a zero total dissimilarity, in which case m is uniform.
    `raw_h` is None for vectors read back from a features CSV.
    """
    m: np.ndarray
    raw_h: np.ndarray | None = None
    degenerate: bool = False

    def __post_init__(self):
        m = np.asarray(self.m, dtype=np.float64).reshape(-1)
        if m.shape != (N_FEATURES,):
            raise ContractError(f'feature vector must have {N_FEATURES} entries, got {m.shape[0]}')
        object.__setattr__(self, 'm', m)
        if self.raw_h is not None:
            object.__setattr__(self, 'raw_h', np.asarray(self.raw_h, dtype=np.float64).reshape(N_FEATURES))

    @classmethod
    def from_distances(cls, raw_h) -> 'FeatureVector':
        """Normalize raw distances; a total below 1e-12 yields the uniform vector.

        >>> FeatureVector.from_distances([0.6, 0.2, 0.2, 0.4, 0.4, 0.2]).m.round(12).tolist()
        [0.3, 0.1, 0.1, 0.2, 0.2, 0.1]
        """
        raw_h = np.asarray(raw_h, dtype=np.float64)
        total = float(raw_h.sum())
        if total < DEGENERATE_TOTAL:
            return cls(np.full(N_FEATURES, 1.0 / N_FEATURES), raw_h, degenerate=True)
        return cls(raw_h / total, raw_h)


@dataclass(frozen=True, eq=False)
class FeatureRow:
    """One labeled (or unlabeled) row of a features table."""
    trajectory_id: str
    features: FeatureVector
    label: Outcome | None = None


def _log_det(K: np.ndarray, what: str) -> float:
    try:
        L = cholesky(K, lower=True, check_finite=False)
    except LinAlgError as e:
        raise NumericalError(f'{what} is not positive definite', diagnostics={'n': K.shape[0]}) from e
    return float(2.0 * np.sum(np.log(np.diag(L))))


def hellinger_gp(K_demo, K_rep, log_det_demo: float | None = None, log_det_rep: float | None = None) -> float:
    """Hellinger distance between N(0, K_demo) and N(0, K_rep).

    Args:
        K_demo: N×N positive definite covariance
        K_rep: N×N positive definite covariance
        log_det_demo: precomputed ln|K_demo|, factorized here when omitted
        log_det_rep: precomputed ln|K_rep|
    Returns:
        Distance in [0, 1]

    >>> round(hellinger_gp([[1.0]], [[4.0]]), 6)
    0.32492
    >>> round(hellinger_gp(np.eye(2), 2 * np.eye(2)), 6)
    0.239146
    """
    K_demo = np.atleast_2d(np.asarray(K_demo, dtype=np.float64))
    K_rep = np.atleast_2d(np.asarray(K_rep, dtype=np.float64))
    if K_demo.shape != K_rep.shape or K_demo.shape[0] != K_demo.shape[1]:
        raise ContractError(f'covariance shapes differ: {K_demo.shape} vs {K_rep.shape}')

    if log_det_demo is None:
        log_det_demo = _log_det(K_demo, 'demonstration covariance')
    if log_det_rep is None:
        log_det_rep = _log_det(K_rep, 'reproduction covariance')
    log_det_avg = _log_det(0.5 * (K_demo + K_rep), 'averaged covariance')

    log_bc = 0.25 * (log_det_demo + log_det_rep) - 0.5 * log_det_avg
    h2 = -math.expm1(min(log_bc, 0.0))
    return math.sqrt(min(max(h2, 0.0), 1.0))


def hellinger_1d_oracle(k1: float, k2: float) -> float:
    """Hellinger distance of N(0, k1) and N(0, k2) by numerical quadrature."""
    if k1 <= 0 or k2 <= 0:
        raise ContractError('variances must be positive')
    s1, s2 = math.sqrt(k1), math.sqrt(k2)

    def integrand(x):
        p1 = math.exp(-0.5 * x * x / k1) / (s1 * math.sqrt(2 * math.pi))
        p2 = math.exp(-0.5 * x * x / k2) / (s2 * math.sqrt(2 * math.pi))
        return 0.5 * (math.sqrt(p1) - math.sqrt(p2)) ** 2

    # symmetric integrand: twice the positive half, split at multiples of the narrower std
    s_min, s_max = min(s1, s2), max(s1, s2)
    upper = 60.0 * s_max
    points = sorted({c * s for s in (s_min, s_max) for c in (0.5, 1, 2, 4, 8, 16) if c * s < upper})
    value, _ = quad(integrand, 0.0, upper, points=points, limit=500, epsabs=1e-15, epsrel=1e-12)
    return math.sqrt(min(max(2.0 * value, 0.0), 1.0))


def extract_features(demo_set: WrenchModelSet, rep_set: WrenchModelSet) -> FeatureVector:
    """Per-component Hellinger distances of two aligned model sets, normalized to sum 1.

    Raises:
        ContractError when the sets were fitted on grids of different length
    """
    if demo_set.n != rep_set.n:
        raise ContractError(f'model sets cover {demo_set.n} and {rep_set.n} samples')
    raw_h = np.array([
        hellinger_gp(d.covariance, r.covariance, log_det_demo=d.log_det, log_det_rep=r.log_det)
        for d, r in zip(demo_set, rep_set)
    ])
    features = FeatureVector.from_distances(raw_h)
    if features.degenerate:
        logger.warning('Reproduction is indistinguishable from the demonstration, using uniform features')
    return features


def write_features_csv(rows: list[FeatureRow], path: str | Path) -> Path:
    """Write `trajectory_id,m1..m6,label` rows; unlabeled rows get an empty label."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(
        np.array([r.features.m for r in rows]).reshape(len(rows), N_FEATURES),
        columns=list(FEATURE_COLUMNS),
    )
    frame.insert(0, 'trajectory_id', [r.trajectory_id for r in rows])
    frame['label'] = [r.label.value if r.label else '' for r in rows]
    frame.to_csv(path, index=False, float_format='%.17g', lineterminator='\n')
    return path


def read_features_csv(path: str | Path) -> list[FeatureRow]:
    frame = pd.read_csv(path, dtype={'trajectory_id': str, 'label': str}, keep_default_na=False,
                        float_precision='round_trip')
    missing = [c for c in ('trajectory_id', *FEATURE_COLUMNS, 'label') if c not in frame.columns]
    if missing:
        raise ContractError(f'{path}: missing columns {missing}')
    values = frame[list(FEATURE_COLUMNS)].to_numpy(dtype=np.float64)
    return [
        FeatureRow(tid, FeatureVector(m), Outcome(label.lower()) if label else None)
        for tid, m, label in zip(frame['trajectory_id'], values, frame['label'])
    ]


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
