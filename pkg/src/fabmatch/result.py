from dataclasses import dataclass
from typing import Any, Optional

from .curves import DiscreteCurve


@dataclass
class MatchResult:
    """Outcome of an exact or relaxed matching run.

    ``termination`` is one of ``gradient_tol``, ``max_iter`` or
    ``line_search_failure`` for relaxed runs and ``exact`` for the dynamic
    programming solver, which has no iterations.
    """

    end_curve: DiscreteCurve
    elastic_distance: float
    fidelity: float
    rotation: float
    objective_value: float
    iterations: int
    converged: bool
    termination: str
    reparametrization: Optional[Any] = None
    seam_shift: Optional[int] = None

    def to_dict(self):
        out = {
            "elastic_distance": self.elastic_distance,
            "fidelity": self.fidelity,
            "rotation": self.rotation,
            "objective_value": self.objective_value,
            "iterations": self.iterations,
            "converged": self.converged,
            "termination": self.termination,
            "end_curve": {
                "points": self.end_curve.vertices.tolist(),
                "closed": self.end_curve.closed,
            },
        }
        if self.reparametrization is not None:
            out["reparametrization"] = self.reparametrization.pairs.tolist()
        if self.seam_shift is not None:
            out["seam_shift"] = self.seam_shift
        return out
