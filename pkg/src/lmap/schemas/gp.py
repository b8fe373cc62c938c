from pydantic import BaseModel, Field


class KernelParamsRecord(BaseModel):
    """Optimized hyperparameters of one wrench component's GP.

    Attributes
        theta0: Signal variance
        theta1: Inverse squared lengthscale shared by time, position and angle
        sigma2: Noise variance
        jitter: Diagonal jitter that was needed to factorize the covariance
    """
    theta0: float = Field(..., gt=0)
    theta1: float = Field(..., gt=0)
    sigma2: float = Field(..., gt=0)
    jitter: float = Field(0.0, ge=0)


class ModelSetRecord(BaseModel):
    """Six per-component GP parameter sets plus a hash of the shared inputs.

    Covariance factors are not stored; they are recomputed from the inputs on load.
    """
    fx: KernelParamsRecord
    fy: KernelParamsRecord
    fz: KernelParamsRecord
    tx: KernelParamsRecord
    ty: KernelParamsRecord
    tz: KernelParamsRecord
    inputs_sha256: str = Field(..., description='sha256 of the float64 N×8 inputs matrix')
