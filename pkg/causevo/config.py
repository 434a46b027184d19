import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    """configuration class for environment variable"""

    # Logging
    @property
    def LOG_LEVEL(self) -> str:
        return os.getenv('LOG_LEVEL', 'info')

    # Arithmetic
    @property
    def ARITHMETIC_MODE(self) -> str:
        """Weight arithmetic: 'rational' (exact) or 'float'."""
        return os.getenv('ARITHMETIC_MODE', 'rational')

    @property
    def FLOAT_FEASIBILITY_TOL(self) -> float:
        return float(os.getenv('FLOAT_FEASIBILITY_TOL', '1e-9'))

    # Causal structure
    @property
    def CAUSAL_SLACK(self) -> float:
        """Slack passed to cone predicates when validating sampled or interpolated data."""
        return float(os.getenv('CAUSAL_SLACK', '1e-12'))

    @property
    def MONOTONE_TOL(self) -> float:
        return float(os.getenv('MONOTONE_TOL', '1e-12'))

    @property
    def CONFORMAL_STEP(self) -> float:
        """Maximum Simpson step used for FLRW conformal time."""
        return float(os.getenv('CONFORMAL_STEP', '1e-3'))

    # Grids and resampling
    @property
    def GRID_TOL(self) -> float:
        return float(os.getenv('GRID_TOL', '1e-12'))

    @property
    def RESAMPLE_TOL(self) -> float:
        return float(os.getenv('RESAMPLE_TOL', '1e-9'))

    # Residual tolerance schedule
    @property
    def TOL_CONT_FACTOR(self) -> float:
        return float(os.getenv('TOL_CONT_FACTOR', '10'))

    @property
    def TOL_QUAD_FACTOR(self) -> float:
        return float(os.getenv('TOL_QUAD_FACTOR', '10'))

    @property
    def ROUNDOFF_FACTOR(self) -> float:
        """Relative round-off allowed in residuals that vanish exactly on the grid."""
        return float(os.getenv('ROUNDOFF_FACTOR', '1e-10'))

    @property
    def CURRENT_EPS(self) -> float:
        """Regularizer in the relative invariant-current discrepancy."""
        return float(os.getenv('CURRENT_EPS', '1e-3'))

    # Randomized batteries
    @property
    def DEFAULT_SEED(self) -> int:
        return int(os.getenv('DEFAULT_SEED', '20240917'))


CONFIG = Config()

__all__ = ["CONFIG"]
