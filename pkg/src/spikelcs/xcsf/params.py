"""Learning-system parameter block.

Defaults follow the benchmark parameterisation: population cap 20000,
learning rate 0.2, accuracy threshold 0.005, activity/deletion
thresholds 50, constant prediction input 1, prediction learning rate
0.2 and discount 0.95.  ``alpha``, ``nu`` and ``delta`` are the
standard accuracy/deletion constants.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class XcsfParams:
    N: int = 20000            # microclassifier cap
    beta: float = 0.2         # bookkeeping learning rate
    epsilon0: float = 0.005   # accuracy threshold
    theta_ga: float = 50.0    # discovery trigger (trial-counter units)
    theta_del: float = 50.0   # deletion experience threshold
    x0: float = 1.0           # constant prediction input
    eta: float = 0.2          # prediction weight learning rate
    gamma: float = 0.95       # payoff discount (non-temporal mode)
    alpha: float = 0.1        # accuracy falloff scale
    nu: float = 5.0           # accuracy falloff power
    delta: float = 0.1        # low-fitness deletion fraction
    cover_attempts: int = 1000        # random draws per missing action
    fitness_init: float = 0.01        # fitness of covered classifiers
    ga_fitness_discount: float = 0.1  # offspring fitness = discount * parent
    weight_law: str = "redraw"        # weight mutation law: redraw | gaussian
    gaussian_sigma: float = 0.1

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be positive")
        for name in ("beta", "eta"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1]")
