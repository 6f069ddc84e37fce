from __future__ import annotations

from collections.abc import Callable
from functools import partial

import numpy as np

from src.models.enums import ScenarioKind

Reference = Callable[[float], tuple[np.ndarray, np.ndarray]]

STEP_HEIGHT = 0.4
STEP_WINDOW = 10.0
STEP_TRANSLATION = 0.075
STEP_ROTATION = 0.15
SINUSOID_AMPLITUDE = 0.1

# hold-window index -> (pose axis, offset); window 0 only lifts the platform
_STEP_SCHEDULE = {
    1: (0, STEP_TRANSLATION),
    2: (1, STEP_TRANSLATION),
    3: (3, STEP_ROTATION),
    4: (4, STEP_ROTATION),
    5: (5, STEP_ROTATION),
}


def step_reference(t: float) -> tuple[np.ndarray, np.ndarray]:
    """Piecewise-constant poses held for ten seconds each."""
    q_des = np.zeros(6)
    q_des[2] = STEP_HEIGHT
    # the final instant t = 60 belongs to the last window
    window = min(int(np.floor(t / STEP_WINDOW + 1e-9)), 5)
    if window in _STEP_SCHEDULE:
        axis, offset = _STEP_SCHEDULE[window]
        q_des[axis] = offset
    return q_des, np.zeros(6)


def sinusoid_reference(t: float, literal: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Roll and pitch oscillation at constant height.

    With ``literal`` the velocity reference carries 0.4 in its z slot, as the
    scenario is sometimes written, instead of the derivative of the pose.
    """
    a = SINUSOID_AMPLITUDE
    q_des = np.array([0.0, 0.0, STEP_HEIGHT, a * np.sin(t), a * np.cos(t), 0.0])
    qdot_des = np.array([0.0, 0.0, 0.0, a * np.cos(t), -a * np.sin(t), 0.0])
    if literal:
        qdot_des[2] = STEP_HEIGHT
    return q_des, qdot_des


def hold_reference(t: float, pose: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.array(pose, dtype=float), np.zeros(6)


def reference_for(kind: ScenarioKind, hold_pose: np.ndarray, literal: bool = False) -> Reference:
    if kind is ScenarioKind.STEP:
        return step_reference
    if kind is ScenarioKind.SINUSOID:
        return partial(sinusoid_reference, literal=literal)
    return partial(hold_reference, pose=np.asarray(hold_pose, dtype=float))
