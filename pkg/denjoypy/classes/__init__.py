from denjoypy.classes.gap_sequence import ExceptionRule, GapSequence
from denjoypy.classes.rotation import Convergent, RotationNumber

__all__ = ["RotationNumber", "Convergent", "GapSequence", "ExceptionRule"]
