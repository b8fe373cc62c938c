"""Zero-mean Gaussian Process wrench models.

One GP per wrench component maps the 8-D input d = (t, x, y, z, qw, qx, qy, qz)
to that component with the kernel

    k(d_n, d_m) = θ0 · exp(-θ1/2 · (Δt² + ‖Δx‖² + φ²)) + σ² · [n = m]

where φ is the geodesic angle between the two orientations. θ0, θ1 and σ²
are fitted by maximizing the log marginal likelihood with a multi-start
Nelder-Mead search in log space.
"""

import hashlib
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from lmap.config import get_settings
from lmap.schemas.gp import KernelParamsRecord, ModelSetRecord
from lmap.schemas.trajectory import WRENCH_COMPONENTS
from lmap.services import quaternion
from scipy.linalg import LinAlgError, cholesky, solve_triangular
from scipy.optimize import minimize
from scipy.spatial.distance import cdist

logger = logging.getLogger(__name__)

__all__ = [
    'NumericalError',
    'FitError',
    'ContractError',
    'KernelParams',
    'Covariance',
    'GpWrenchModel',
    'WrenchModelSet',
    'pairwise_sq_distance',
    'kernel_entry',
    'build_covariance',
    'log_marginal_likelihood',
    'fit_wrench_model',
    'fit_model_set',
    'save_model_set',
    'load_model_set',
]

LOG_2PI = math.log(2 * math.pi)

# relative to theta0; the first attempt adds nothing
JITTER_LADDER = tuple(10.0 ** e for e in range(-10, -3))

LOG_BOUNDS = (
    (math.log(1e-10), math.log(1e6)),   # theta0
    (math.log(1e-4), math.log(1e4)),    # theta1
    (math.log(1e-10), math.log(1e6)),   # sigma2
)
VARIANCE_EPS = 1e-8
SIMPLEX_TOL = 1e-6
MAX_ITER = 500


class NumericalError(ArithmeticError):
    """Covariance could not be factorized even at maximum jitter."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class FitError(RuntimeError):
    """No optimizer start produced a finite likelihood."""

    def __init__(self, message: str, component: int | None = None):
        super().__init__(message)
        self.component = component


class ContractError(ValueError):
    """Arguments violate an operation's contract (shapes, finiteness, hashes)."""


@dataclass(frozen=True)
class KernelParams:
    theta0: float
    theta1: float
    sigma2: float

    def __post_init__(self):
        for name in ('theta0', 'theta1', 'sigma2'):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ContractError(f'{name} must be finite and positive, got {v}')

    @classmethod
    def from_log(cls, log_params) -> 'KernelParams':
        theta0, theta1, sigma2 = np.exp(np.asarray(log_params, dtype=np.float64))
        return cls(float(theta0), float(theta1), float(sigma2))

    def log(self) -> np.ndarray:
        return np.log([self.theta0, self.theta1, self.sigma2])


@dataclass(frozen=True, eq=False)
class Covariance:
    matrix: np.ndarray
    chol: np.ndarray
    log_det: float
    jitter: float


def pairwise_sq_distance(inputs) -> np.ndarray:
    """Parameter-free part of the kernel: Δt² + ‖Δx‖² + φ² for every input pair."""
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.ndim != 2 or inputs.shape[1] != 8:
        raise ContractError(f'inputs must be N×8, got {inputs.shape}')
    t = inputs[:, :1]
    sq = cdist(t, t, 'sqeuclidean') + cdist(inputs[:, 1:4], inputs[:, 1:4], 'sqeuclidean')
    sq += quaternion.pairwise_sq_angle(inputs[:, 4:8])
    np.fill_diagonal(sq, 0.0)
    return sq


def kernel_entry(dn, dm, p: KernelParams, same_index: bool = False) -> float:
    """Single kernel value; the noise variance is added only on the diagonal.

    >>> kernel_entry(np.r_[1.0, 0, 0, 0, 1, 0, 0, 0], np.r_[0.0, 0, 0, 0, 1, 0, 0, 0], KernelParams(1.0, 2.0, 0.5))
    0.36787944117144233
    """
    dn = np.asarray(dn, dtype=np.float64)
    dm = np.asarray(dm, dtype=np.float64)
    sq = (dn[0] - dm[0]) ** 2 + np.sum((dn[1:4] - dm[1:4]) ** 2) + quaternion.quaternion_sq_angle(dn[4:8], dm[4:8])
    value = p.theta0 * math.exp(-0.5 * p.theta1 * float(sq))
    return value + p.sigma2 if same_index else value


def _factorize(sqdist: np.ndarray, p: KernelParams) -> Covariance:
    K = p.theta0 * np.exp(-0.5 * p.theta1 * sqdist)
    K[np.diag_indices_from(K)] += p.sigma2
    for jitter in (0.0, *(step * p.theta0 for step in JITTER_LADDER)):
        Kj = K + jitter * np.eye(K.shape[0]) if jitter else K
        try:
            L = cholesky(Kj, lower=True, check_finite=False)
        except LinAlgError:
            continue
        if jitter:
            logger.debug(f'Cholesky needed jitter {jitter:.3g} (theta0={p.theta0:.3g})')
        return Covariance(matrix=Kj, chol=L, log_det=float(2.0 * np.sum(np.log(np.diag(L)))), jitter=jitter)

    eig = np.linalg.eigvalsh(K)
    raise NumericalError(
        f'covariance not positive definite at jitter {JITTER_LADDER[-1] * p.theta0:.3g}',
        diagnostics={
            'n': K.shape[0],
            'min_eigenvalue': float(eig[0]),
            'max_eigenvalue': float(eig[-1]),
            'params': p,
        },
    )


def build_covariance(inputs, p: KernelParams) -> Covariance:
    """Kernel matrix over all input pairs with its Cholesky factor and log-determinant."""
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.shape[0] < 1:
        raise ContractError('need at least one input row')
    return _factorize(pairwise_sq_distance(inputs), p)


def _lml(targets: np.ndarray, cov: Covariance) -> float:
    v = solve_triangular(cov.chol, targets, lower=True, check_finite=False)
    return float(-0.5 * cov.log_det - 0.5 * (v @ v) - 0.5 * targets.shape[0] * LOG_2PI)


def log_marginal_likelihood(targets, inputs, p: KernelParams) -> float:
    """ln p(w | θ, D) = -½ ln|K| - ½ wᵀK⁻¹w - (N/2) ln 2π, via the Cholesky factor."""
    targets = np.asarray(targets, dtype=np.float64).reshape(-1)
    inputs = np.asarray(inputs, dtype=np.float64)
    if targets.shape[0] != inputs.shape[0]:
        raise ContractError(f'{targets.shape[0]} targets for {inputs.shape[0]} inputs')
    return _lml(targets, build_covariance(inputs, p))


@dataclass(frozen=True, eq=False)
class GpWrenchModel:
    params: KernelParams
    inputs: np.ndarray
    targets: np.ndarray
    covariance: np.ndarray
    chol: np.ndarray
    log_det: float
    jitter: float
    lml: float

    @classmethod
    def build(cls, inputs, targets, params: KernelParams, sqdist: np.ndarray | None = None) -> 'GpWrenchModel':
        inputs = np.asarray(inputs, dtype=np.float64)
        targets = np.asarray(targets, dtype=np.float64).reshape(-1)
        cov = _factorize(pairwise_sq_distance(inputs) if sqdist is None else sqdist, params)
        return cls(params, inputs, targets, cov.matrix, cov.chol, cov.log_det, cov.jitter, _lml(targets, cov))


def start_points(targets: np.ndarray) -> list[np.ndarray]:
    """Fixed optimizer starts in log space, derived from the target variance."""
    var = max(float(np.var(targets)), VARIANCE_EPS)
    log_sigma2 = math.log(0.1 * var + VARIANCE_EPS)
    lower, upper = np.array(LOG_BOUNDS).T
    return [
        np.clip([log_theta0, log_theta1, log_sigma2], lower, upper)
        for log_theta0 in (math.log(var + VARIANCE_EPS), 0.0)
        for log_theta1 in (0.0, math.log(10.0))
    ]


def fit_wrench_model(inputs, targets, component: int | None = None,
                     sqdist: np.ndarray | None = None) -> GpWrenchModel:
    """Fit θ0, θ1, σ² of one wrench component by maximizing the log marginal likelihood.

    Args:
        inputs: N×8 input matrix
        targets: N observations of the wrench component
        component: index used in error messages and logs
        sqdist: precomputed pairwise_sq_distance(inputs)
    Returns:
        GpWrenchModel at the best optimum over all starts
    Raises:
        FitError when every start fails numerically
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64).reshape(-1)
    if inputs.shape[0] < 2:
        raise ContractError(f'need at least 2 samples, got {inputs.shape[0]}')
    if targets.shape[0] != inputs.shape[0]:
        raise ContractError(f'{targets.shape[0]} targets for {inputs.shape[0]} inputs')
    if not np.all(np.isfinite(targets)):
        raise ContractError('targets must be finite')
    if sqdist is None:
        sqdist = pairwise_sq_distance(inputs)

    def objective(log_params):
        try:
            return -_lml(targets, _factorize(sqdist, KernelParams.from_log(log_params)))
        except (NumericalError, ContractError):
            return np.inf

    best = None
    for x0 in start_points(targets):
        # terminate on simplex size only
        res = minimize(objective, x0, method='Nelder-Mead', bounds=LOG_BOUNDS,
                       options={'xatol': SIMPLEX_TOL, 'fatol': np.inf, 'maxiter': MAX_ITER})
        if np.isfinite(res.fun) and (best is None or res.fun < best.fun):
            best = res

    if best is None:
        raise FitError(f'all optimizer starts failed for component {component}', component=component)

    model = GpWrenchModel.build(inputs, targets, KernelParams.from_log(best.x), sqdist=sqdist)
    if model.jitter > 0:
        logger.warning(f'Component {component}: covariance factorized with jitter {model.jitter:.3g}')
    logger.debug(f'Component {component}: theta0={model.params.theta0:.4g} theta1={model.params.theta1:.4g} '
                 f'sigma2={model.params.sigma2:.4g} lml={model.lml:.4f}')
    return model


@dataclass(frozen=True, eq=False)
class WrenchModelSet:
    """Six GP models, one per wrench component (fx, fy, fz, tx, ty, tz), over one input matrix."""
    models: tuple[GpWrenchModel, ...]

    def __post_init__(self):
        if len(self.models) != len(WRENCH_COMPONENTS):
            raise ContractError(f'expected {len(WRENCH_COMPONENTS)} models, got {len(self.models)}')
        first = self.models[0].inputs
        if any(m.inputs is not first and not np.array_equal(m.inputs, first) for m in self.models[1:]):
            raise ContractError('all component models must share the same inputs')

    def __getitem__(self, k: int) -> GpWrenchModel:
        return self.models[k]

    def __iter__(self):
        return iter(self.models)

    @property
    def inputs(self) -> np.ndarray:
        return self.models[0].inputs

    @property
    def n(self) -> int:
        return self.inputs.shape[0]

    def to_record(self) -> ModelSetRecord:
        params = {
            name: KernelParamsRecord(theta0=m.params.theta0, theta1=m.params.theta1,
                                     sigma2=m.params.sigma2, jitter=m.jitter)
            for name, m in zip(WRENCH_COMPONENTS, self.models)
        }
        return ModelSetRecord(**params, inputs_sha256=inputs_hash(self.inputs))


def inputs_hash(inputs) -> str:
    return hashlib.sha256(np.ascontiguousarray(inputs, dtype=np.float64).tobytes()).hexdigest()


def fit_model_set(inputs, wrench, parallel: bool = True) -> WrenchModelSet:
    """Fit the six per-component models of one movement.

    Fits are independent; with `parallel` they run on up to MAP_THREADS threads.
    Results keep the fx, fy, fz, tx, ty, tz order.
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    wrench = np.asarray(wrench, dtype=np.float64)
    if wrench.shape != (inputs.shape[0], len(WRENCH_COMPONENTS)):
        raise ContractError(f'wrench must be {inputs.shape[0]}×6, got {wrench.shape}')
    sqdist = pairwise_sq_distance(inputs)

    def fit(k: int) -> GpWrenchModel:
        return fit_wrench_model(inputs, wrench[:, k], component=k, sqdist=sqdist)

    workers = min(len(WRENCH_COMPONENTS), get_settings().map_threads) if parallel else 1
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            models = tuple(pool.map(fit, range(len(WRENCH_COMPONENTS))))
    else:
        models = tuple(fit(k) for k in range(len(WRENCH_COMPONENTS)))
    return WrenchModelSet(models)


def save_model_set(model_set: WrenchModelSet, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(model_set.to_record().model_dump_json(indent=2) + '\n', encoding='utf-8')
    return path


def load_model_set(path: str | Path, inputs, wrench) -> WrenchModelSet:
    """Rebuild a persisted model set; covariance factors are recomputed from `inputs`.

    Raises:
        ContractError when `inputs` do not hash to the stored digest
    """
    record = ModelSetRecord.model_validate_json(Path(path).read_text(encoding='utf-8'))
    inputs = np.asarray(inputs, dtype=np.float64)
    wrench = np.asarray(wrench, dtype=np.float64)
    if inputs_hash(inputs) != record.inputs_sha256:
        raise ContractError(f'{path}: inputs do not match the stored model set')
    sqdist = pairwise_sq_distance(inputs)
    models = []
    for k, name in enumerate(WRENCH_COMPONENTS):
        p = getattr(record, name)
        models.append(GpWrenchModel.build(inputs, wrench[:, k], KernelParams(p.theta0, p.theta1, p.sigma2),
                                          sqdist=sqdist))
    return WrenchModelSet(tuple(models))


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
