from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, slots=True, eq=False)
class LqrWeights:
    # entry i pairs with entry i + 6 (position / velocity of the same axis)
    state_weights: np.ndarray
    input_weights: np.ndarray

    @property
    def N(self) -> np.ndarray:
        return np.diag(self.state_weights)

    @property
    def O(self) -> np.ndarray:  # noqa: E743
        return np.diag(self.input_weights)


@dataclass(frozen=True, slots=True, eq=False)
class GainMatrix:
    K: np.ndarray
    closed_loop_poles: np.ndarray
