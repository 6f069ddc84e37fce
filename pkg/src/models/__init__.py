from src.models.enums import POSE_AXES, ExitCode, LinearizationPose, ScenarioKind, StateIndex
from src.models.geometry import LegKinematics, PlatformGeometry, Pose, Twist
from src.models.dynamics import DynamicsMatrices, RigidBodyParams
from src.models.control import GainMatrix, LqrWeights
from src.models.estimation import ANGLES, LENGTHS, RATES, EkfState, NoiseCovariances
from src.models.simulation import DEFAULT_DURATIONS, ScenarioSpec, SensorNoiseSpec, SimRecord

__all__ = [
    "POSE_AXES",
    "ExitCode",
    "LinearizationPose",
    "ScenarioKind",
    "StateIndex",
    "PlatformGeometry",
    "Pose",
    "Twist",
    "LegKinematics",
    "RigidBodyParams",
    "DynamicsMatrices",
    "LqrWeights",
    "GainMatrix",
    "LENGTHS",
    "ANGLES",
    "RATES",
    "EkfState",
    "NoiseCovariances",
    "DEFAULT_DURATIONS",
    "ScenarioSpec",
    "SensorNoiseSpec",
    "SimRecord",
]
