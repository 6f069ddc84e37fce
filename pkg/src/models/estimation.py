from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# measurement vector layout: leg lengths, Euler angles, body rates
LENGTHS = slice(0, 6)
ANGLES = slice(6, 9)
RATES = slice(9, 12)


@dataclass(frozen=True, slots=True, eq=False)
class EkfState:
    xhat: np.ndarray
    P: np.ndarray

    @property
    def asymmetry(self) -> float:
        return float(np.max(np.abs(self.P - self.P.T)))

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(0.5 * (self.P + self.P.T))[0])


@dataclass(frozen=True, slots=True, eq=False)
class NoiseCovariances:
    """Filter tuning, named by where each matrix enters the filter."""

    predict_cov: np.ndarray
    innov_cov: np.ndarray
    initial_cov: np.ndarray
