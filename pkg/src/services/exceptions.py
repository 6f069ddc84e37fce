class StewartError(Exception):
    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(message)


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

class ConfigError(StewartError):
    pass


class ConfigParseError(ConfigError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        self.line = line
        self.column = column
        super().__init__(message)


class ConfigValidationError(ConfigError):
    def __init__(self, message: str, key: str) -> None:
        self.key = key
        super().__init__(message)


# ---------------------------------------------------------------------------
# Kinematics
# ---------------------------------------------------------------------------

class KinematicsError(StewartError):
    pass


class InvalidGeometryError(KinematicsError):
    pass


class SingularOrientationError(KinematicsError):
    def __init__(self, message: str, theta: float) -> None:
        self.theta = theta
        super().__init__(message)


class LegCollapseError(KinematicsError):
    def __init__(self, message: str, lengths: object) -> None:
        self.lengths = lengths
        super().__init__(message)


class SingularJacobianError(KinematicsError):
    def __init__(self, message: str, condition: float) -> None:
        self.condition = condition
        super().__init__(message)


class ForwardKinematicsError(KinematicsError):
    def __init__(self, message: str, iterations: int, residual: float) -> None:
        self.iterations = iterations
        self.residual = residual
        super().__init__(message)


# ---------------------------------------------------------------------------
# Dynamics, control, estimation
# ---------------------------------------------------------------------------

class DynamicsError(StewartError):
    pass


class SingularConfigurationError(DynamicsError):
    def __init__(self, message: str, condition: float) -> None:
        self.condition = condition
        super().__init__(message)


class IllConditionedInertiaError(DynamicsError):
    def __init__(self, message: str, condition: float) -> None:
        self.condition = condition
        super().__init__(message)


class ControlSynthesisError(StewartError):
    pass


class EstimationError(StewartError):
    pass


class InnovationSingularError(EstimationError):
    def __init__(self, message: str, condition: float) -> None:
        self.condition = condition
        super().__init__(message)


class SimulationError(StewartError):
    def __init__(self, message: str, step: int) -> None:
        self.step = step
        super().__init__(message)
