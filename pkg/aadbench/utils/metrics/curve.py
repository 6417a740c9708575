from dataclasses import dataclass, field
from typing import Any, Dict, List

from aadbench.utils.exceptions import ParameterError


@dataclass(frozen=True)
class CurvePoint:
    tau: float
    accuracy: float
    n_decisions: int


@dataclass
class PerformanceCurve:
    """ Accuracy as a function of the decision window length for one subject and algorithm. """

    subject_id: str
    algorithm: str
    points: List[CurvePoint] = field(default_factory=list)

    def __post_init__(self):
        self.points = sorted(self.points, key=lambda point: point.tau)
        taus = [point.tau for point in self.points]
        if any(b <= a for a, b in zip(taus, taus[1:])):
            raise ParameterError(f"Curve of {self.algorithm} / {self.subject_id} repeats a window length: {taus}")
        for point in self.points:
            if not 0.0 <= point.accuracy <= 100.0:
                raise ParameterError(f"Accuracy {point.accuracy} at tau = {point.tau} s outside [0, 100]")

    @property
    def taus(self) -> List[float]:
        return [point.tau for point in self.points]

    @property
    def accuracies(self) -> List[float]:
        return [point.accuracy for point in self.points]

    def to_records(self) -> List[Dict[str, Any]]:
        return [{'algorithm': self.algorithm, 'subject': self.subject_id, 'tau': point.tau,
                 'accuracy': point.accuracy, 'n_decisions': point.n_decisions} for point in self.points]
