"""
REPORTS

The outcome of one verification suite.
"""

import math
from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class CheckReport:
    """
    - `suite`         -- suite name,
    - `seed`          -- seed that reproduces the run,
    - `trials`        -- number of cases examined,
    - `max_deviation` -- largest deviation seen,
    - `tolerance`     -- deviation allowed,
    - `notes`         -- free text (shapes, enumeration mode),
    - `expected`      -- False for negative controls, which must not pass.

    `passed` holds exactly when `max_deviation <= tolerance`; a NaN deviation
    fails. `ok` holds when `passed` is what was expected.
    """

    suite: str
    seed: int
    trials: int
    max_deviation: float
    tolerance: float
    notes: str = ""
    expected: bool = True
    passed: bool = field(init=False)

    def __post_init__(self):
        deviation = float(self.max_deviation)
        object.__setattr__(self, "max_deviation", deviation)
        object.__setattr__(self, "passed", not math.isnan(deviation) and deviation <= self.tolerance)

    @property
    def ok(self):
        return self.passed == self.expected

    def to_dict(self):
        return dict(asdict(self), ok=self.ok)
