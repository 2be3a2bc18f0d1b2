"""
Réseaux équivariants, têtes (anti)symétriques et entraînement
"""

from .approximation import SymmetryMode, symmetrize_approximant
from .checkpoint import load_checkpoint, save_checkpoint
from .heads import HeadKind, HeadSpec
from .layers import emlp_forward, mlp_forward
from .models import EquivariantNetwork, MlpModel, UntiedEmlp
from .params import Activation, EmlpParams, MlpParams
from .training import TrainingConfig, TrainingResult, train

__all__ = [
    "SymmetryMode",
    "symmetrize_approximant",
    "load_checkpoint",
    "save_checkpoint",
    "HeadKind",
    "HeadSpec",
    "emlp_forward",
    "mlp_forward",
    "EquivariantNetwork",
    "MlpModel",
    "UntiedEmlp",
    "Activation",
    "EmlpParams",
    "MlpParams",
    "TrainingConfig",
    "TrainingResult",
    "train",
]
