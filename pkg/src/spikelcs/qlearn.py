"""Tabular Q-learning comparator on a fixed spatial discretisation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def discretise(cont: float, step_size: float) -> int:
    """Cell index floor(cont / step_size); the top boundary value folds
    into the last cell (a 21-cell axis at step 0.05)."""
    top = int(round(1.0 / step_size))
    idx = int(np.floor(cont * (1.0 / step_size)))
    return min(idx, top)


@dataclass
class QTable:
    step_size: float = 0.05
    n_actions: int = 4
    gamma: float = 0.99
    learn_rate: float = 0.2
    values: np.ndarray = field(init=False)

    def __post_init__(self):
        cells = int(round(1.0 / self.step_size)) + 1
        self.values = np.zeros((cells, cells, self.n_actions))

    def cell(self, obs: np.ndarray) -> tuple[int, int]:
        return (discretise(float(obs[0]), self.step_size),
                discretise(float(obs[1]), self.step_size))


def q_select(table: QTable, cell: tuple[int, int], mode: str,
             rng: np.random.Generator) -> int:
    """Exploit: argmax with lowest-index tie break; explore: uniform."""
    if mode == "explore":
        return int(rng.integers(table.n_actions))
    return int(np.argmax(table.values[cell[0], cell[1]]))


def q_update(table: QTable, cell: tuple[int, int], action: int, reward: float,
             next_cell: tuple[int, int] | None) -> None:
    """One-step backup; a terminal transition uses a zero successor term."""
    q = table.values[cell[0], cell[1], action]
    max_next = 0.0 if next_cell is None else \
        float(table.values[next_cell[0], next_cell[1]].max())
    table.values[cell[0], cell[1], action] = \
        q + table.learn_rate * (reward + table.gamma * max_next - q)
