"""
Hiérarchie d'exceptions d'equisym
"""

from typing import Optional, Tuple


class EquisymError(Exception):
    """Classe de base de toutes les erreurs levées par la bibliothèque"""


class ConfigurationError(EquisymError, ValueError):
    """Configuration d'expérience invalide"""


class OracleSizeError(EquisymError):
    """n dépasse la limite des oracles par énumération des permutations"""

    def __init__(self, n: int, limit: int):
        super().__init__(f"oracle over S_{n} refused: n={n} exceeds the limit {limit}")
        self.n = n
        self.limit = limit


class ShapeMismatchError(EquisymError, ValueError):
    """Dimensions ou arités incompatibles"""


class DivisibilityError(EquisymError):
    """Le polynôme ne s'annule pas sur l'hyperplan x_i = x_j"""

    def __init__(self, pair: Tuple[int, int], message: Optional[str] = None):
        i, j = pair
        super().__init__(message or f"polynomial is not divisible by x_{j} - x_{i} (pair {pair})")
        self.pair = pair


class NotAntisymmetricError(EquisymError):
    """La fonction fournie n'est pas anti-symétrique"""


class UnsupportedDimensionError(EquisymError):
    """Construction non définie pour ces valeurs de n ou d"""


class BasisFamilyError(EquisymError):
    """Opération appelée avec une famille de base incompatible"""


class HeadSpecError(EquisymError):
    """Les invariants d'une tête de réseau ne sont pas respectés"""


class TrainingDivergedError(EquisymError):
    """La perte est devenue NaN ou infinie pendant l'entraînement"""

    def __init__(self, epoch: int, step: int, last_finite_loss: Optional[float]):
        super().__init__(
            f"loss diverged at epoch {epoch}, step {step} "
            f"(last finite loss: {last_finite_loss})"
        )
        self.epoch = epoch
        self.step = step
        self.last_finite_loss = last_finite_loss


class UnknownExperimentError(EquisymError):
    """Nom d'expérience inconnu"""


class ReportWriteError(EquisymError):
    """Impossible d'écrire les rapports"""
