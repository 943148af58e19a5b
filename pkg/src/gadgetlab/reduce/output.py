"""The result type shared by every reduction compiler."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core import System
from ..errors import InvalidSystem
from ..solve import Objective


@dataclass
class ReductionOutput:
    system: System
    objective: Objective
    correspondence: dict = field(default_factory=dict)  # source element -> list of instance indices
    expected: str = "solvable iff the source instance is a yes-instance"
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = len(self.system.instances)
        for key, idxs in self.correspondence.items():
            for i in idxs:
                if not 0 <= i < n:
                    raise InvalidSystem(f"correspondence entry {key!r} names missing instance {i}")

    def to_dict(self) -> dict:
        from ..io import system_to_dict

        return {
            "system": system_to_dict(self.system),
            "objective": self.objective.to_dict(),
            "correspondence": {str(k): list(v) for k, v in self.correspondence.items()},
            "expected": self.expected,
            "metadata": dict(self.metadata),
        }
