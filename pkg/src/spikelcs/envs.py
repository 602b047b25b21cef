"""Benchmark environments and output-to-action codebooks.

Both environments expose the same small surface: ``reset``/
``probe_reset`` produce a true position, ``perceive`` turns it into the
(noisy, normalised) state vector fed to the classifiers, and ``step``
advances the true position.  Noise affects perception only, never the
underlying position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

# Action ids are fixed so that argmax tie-breaking is reproducible.
GRID_ACTIONS = ("N", "E", "S", "W")
MCAR_ACTIONS = ("forward", "backward", "none")

# codebook[2*out0 + out1] -> action id, indexed by the two output bits
# grid: (high, high)=N, (high, low)=E, (low, high)=S, (low, low)=W
GRID_CODEBOOK = np.array([3, 2, 1, 0], dtype=np.int64)
# mountain-car: (high, high)=forward, (low, low)=backward, mixed=none
MCAR_CODEBOOK = np.array([1, 2, 2, 0], dtype=np.int64)

# Absorbs float drift from repeated step additions when testing the goal
# boundary; far below the 0.005 grid resolution.
GOAL_EPS = 1e-9


@dataclass
class GridWorld:
    """Continuous 2-D grid: positions in [0,1]^2, fixed-size compass
    moves, goal in the top-right corner where x + y > goal_threshold."""

    step_size: float = 0.05
    noise_mag: float = 0.05
    noise_model: str = "multiplicative"   # or "additive"
    goal_threshold: float = 1.90
    reward: float = 1000.0
    move_cap: int = 0                     # 0 -> derived from step size
    probe_start: tuple[float, float] = (0.25, 0.25)

    def __post_init__(self):
        if self.move_cap <= 0:
            # 200 at the reference step of 0.05; the published fine-step cap
            if abs(self.step_size - 0.005) < 1e-12:
                self.move_cap = 4000
            else:
                self.move_cap = int(np.ceil(200 * 0.05 / self.step_size))

    n_actions = 4
    input_count = 2
    codebook = GRID_CODEBOOK
    has_probe = True

    def reset(self, rng: np.random.Generator) -> np.ndarray:
        while True:
            pos = rng.uniform(0.0, 1.0, 2)
            if pos[0] + pos[1] <= self.goal_threshold:
                return pos

    def probe_reset(self) -> np.ndarray:
        return np.array(self.probe_start)

    def perceive(self, pos: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        u = rng.uniform(-self.noise_mag, self.noise_mag, 2)
        if self.noise_model == "multiplicative":
            obs = pos * (1.0 + u)
        else:
            obs = pos + u
        return np.clip(obs, 0.0, 1.0)

    def at_goal(self, pos: np.ndarray) -> bool:
        return pos[0] + pos[1] > self.goal_threshold + GOAL_EPS

    def step(self, pos: np.ndarray, action: int,
             ) -> tuple[np.ndarray, float, bool]:
        x, y = pos
        h = self.step_size
        if action == 0:      # N
            y += h
        elif action == 1:    # E
            x += h
        elif action == 2:    # S
            y -= h
        elif action == 3:    # W
            x -= h
        else:
            raise ValueError(f"bad grid action {action}")
        new = np.array([min(1.0, max(0.0, x)), min(1.0, max(0.0, y))])
        done = self.at_goal(new)
        return new, (self.reward if done else 0.0), done

    def min_moves(self, pos: np.ndarray) -> int:
        """Exact minimum number of moves to the goal from ``pos``.

        Computed with rational arithmetic so exact boundary starts (the
        probe point needs strictly more than 28 full steps at step 0.05)
        resolve the same way as the float simulation with its goal
        guard.
        """
        gap = Fraction(self.goal_threshold).limit_denominator(10**6) \
            + Fraction(GOAL_EPS).limit_denominator(10**12) \
            - Fraction(float(pos[0])) - Fraction(float(pos[1]))
        if gap < 0:
            return 0
        h = Fraction(self.step_size).limit_denominator(10**6)
        return int(gap / h) + 1

    def average_optimum(self, rng: np.random.Generator, samples: int = 200000) -> float:
        """Monte-Carlo mean of ``min_moves`` over uniform non-goal starts."""
        total = 0
        n = 0
        while n < samples:
            pos = rng.uniform(0.0, 1.0, 2)
            if pos[0] + pos[1] > self.goal_threshold:
                continue
            total += self.min_moves(pos)
            n += 1
        return total / samples


@dataclass
class MountainCar:
    """Classic under-powered car in a valley.

    Canonical dynamics: velocity gains 0.001 per unit of drive and loses
    0.0025*cos(3x) to gravity, both state variables are clamped to their
    ranges and velocity is zeroed on hitting the left wall.  The goal is
    position > 0.5.  Observations are scaled to [0, 1] per variable.
    """

    force: float = 0.001
    gravity: float = 0.0025
    pos_range: tuple[float, float] = (-1.2, 0.6)
    vel_range: tuple[float, float] = (-0.07, 0.07)
    goal_pos: float = 0.5
    reward: float = 1000.0
    move_cap: int = 1000

    n_actions = 3
    input_count = 2
    codebook = MCAR_CODEBOOK
    has_probe = False

    def reset(self, rng: np.random.Generator) -> np.ndarray:
        while True:
            pos = rng.uniform(*self.pos_range)
            if pos <= self.goal_pos:
                break
        vel = rng.uniform(*self.vel_range)
        return np.array([pos, vel])

    def perceive(self, state: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        lo_p, hi_p = self.pos_range
        lo_v, hi_v = self.vel_range
        return np.array([(state[0] - lo_p) / (hi_p - lo_p),
                         (state[1] - lo_v) / (hi_v - lo_v)])

    def at_goal(self, state: np.ndarray) -> bool:
        return state[0] > self.goal_pos

    def step(self, state: np.ndarray, action: int,
             ) -> tuple[np.ndarray, float, bool]:
        if action == 0:
            drive = 1.0
        elif action == 1:
            drive = -1.0
        elif action == 2:
            drive = 0.0
        else:
            raise ValueError(f"bad mountain-car action {action}")
        pos, vel = state
        vel = vel + self.force * drive - self.gravity * np.cos(3.0 * pos)
        vel = min(self.vel_range[1], max(self.vel_range[0], vel))
        pos = pos + vel
        if pos <= self.pos_range[0]:
            pos = self.pos_range[0]
            vel = 0.0
        pos = min(self.pos_range[1], pos)
        new = np.array([pos, vel])
        done = self.at_goal(new)
        return new, (self.reward if done else 0.0), done
