"""Stability detection: 50 consecutive optimal probe trials."""

from __future__ import annotations

from dataclasses import dataclass

STABILITY_WINDOW = 50


@dataclass
class StabilityTracker:
    optimal: int | None              # reference value from the environment oracle
    window: int = STABILITY_WINDOW
    streak: int = 0
    first_stable_trial: int | None = None

    def update(self, probe_value: int, trial_index: int) -> "StabilityTracker":
        """Count consecutive optimal probes; latch the trial index when
        the streak reaches the window."""
        if self.optimal is None:
            return self
        if probe_value == self.optimal:
            self.streak += 1
            if self.streak >= self.window and self.first_stable_trial is None:
                self.first_stable_trial = trial_index
        else:
            self.streak = 0
        return self


def detect_stability(tracker: StabilityTracker, probe_value: int,
                     trial_index: int) -> StabilityTracker:
    return tracker.update(probe_value, trial_index)
