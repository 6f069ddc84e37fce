import enum


class ScenarioKind(str, enum.Enum):
    STEP = "step"
    SINUSOID = "sinusoid"
    HOLD = "hold"


class LinearizationPose(str, enum.Enum):
    """Pose at which the force law evaluates the model terms."""

    ENCODER = "encoder"
    ESTIMATE = "estimate"


class ExitCode(enum.IntEnum):
    OK = 0
    CONFIG_ERROR = 1
    # output files could not be written; shares the config exit status
    IO_ERROR = 1
    NUMERIC_ERROR = 2


class StateIndex(enum.IntEnum):
    X = 0
    Y = 1
    Z = 2
    PHI = 3
    THETA = 4
    PSI = 5
    X_DOT = 6
    Y_DOT = 7
    Z_DOT = 8
    PHI_DOT = 9
    THETA_DOT = 10
    PSI_DOT = 11


POSE_AXES = ("x", "y", "z", "phi", "theta", "psi")
