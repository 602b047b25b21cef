"""Leaky integrate-and-fire dynamics and window-based output decoding.

The membrane update is ``m' = m + (I + a - b*m)`` clamped at zero, with a
spike and reset to ``c`` whenever the result exceeds ``mthresh``.  All
nodes update synchronously from the previous step's spike vector; input
nodes integrate the raw external value as their current.  Fresh networks
start at the bootstrap potential ``c_ini`` (> ``c``) so the first spike
arrives early; after a spike the reset target is ``c``.

An activation presents the input ``window`` times (default 5) and reads
each output's spike count; an output is *high* when it spiked in more
than half of the window positions.

The arithmetic here is the reference semantics: currents accumulate
sequentially over source-node index, so results are bit-identical to the
batched kernel in :mod:`spikelcs.networks.batch` (asserted by tests).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .genome import N_OUTPUTS, SpikingGenome


@dataclass(frozen=True)
class LifParams:
    a: float = 0.3          # constant drive
    b: float = 0.05         # leak
    c: float = 0.0          # post-spike reset potential
    c_ini: float = 0.5      # bootstrap potential at trial start
    mthresh: float = 1.0    # firing threshold
    window: int = 5         # simulation steps per activation

    def __post_init__(self):
        if self.c_ini <= self.c:
            raise ValueError("c_ini must exceed c")
        if self.window < 1:
            raise ValueError("window must be >= 1")


@dataclass
class NetState:
    """Per-network membrane potentials and previous-step spike flags."""

    membranes: np.ndarray    # float64 [n_nodes]
    last_spikes: np.ndarray  # float64 [n_nodes], 0.0 or 1.0

    def copy(self) -> "NetState":
        return NetState(self.membranes.copy(), self.last_spikes.copy())


def fresh_state(genome: SpikingGenome, params: LifParams) -> NetState:
    n = genome.n_nodes
    return NetState(np.full(n, params.c_ini), np.zeros(n))


class TernaryActivation(NamedTuple):
    """Discretised output triple; True means high activation."""

    out0: bool
    out1: bool
    dont_match: bool


def lif_step(state: NetState, genome: SpikingGenome,
             external_input: np.ndarray, params: LifParams) -> NetState:
    """Advance the network one synchronous step; returns the new state.

    ``external_input`` holds one current value per input node.
    """
    n = genome.n_nodes
    if len(external_input) != genome.n_in:
        raise ValueError(f"expected {genome.n_in} inputs, got {len(external_input)}")
    if len(state.membranes) != n or len(state.last_spikes) != n:
        raise ValueError("state dimensions do not match genome")

    w_eff = genome.effective_weights()
    prev = state.last_spikes
    new_m = np.empty(n)
    new_s = np.empty(n)
    for t in range(n):
        acc = float(external_input[t]) if t < genome.n_in else 0.0
        for s in range(n):
            acc += w_eff[t, s] * prev[s]
        m = state.membranes[t] + (acc + params.a - params.b * state.membranes[t])
        if m < 0.0:
            m = 0.0
        if m > params.mthresh:
            new_s[t] = 1.0
            m = params.c
        else:
            new_s[t] = 0.0
        new_m[t] = m
    return NetState(new_m, new_s)


def snn_activate(genome: SpikingGenome, inputs: np.ndarray, state: NetState,
                 params: LifParams) -> tuple[TernaryActivation, NetState]:
    """Present ``inputs`` for ``window`` steps; decode output spike counts.

    An output is high when its spike count exceeds half the window
    (>= 3 of 5 at the default).  Membranes persist in the returned state.
    """
    counts = [0, 0, 0]
    out_base = genome.n_nodes - N_OUTPUTS
    for _ in range(params.window):
        state = lif_step(state, genome, inputs, params)
        for k in range(N_OUTPUTS):
            if state.last_spikes[out_base + k] > 0.0:
                counts[k] += 1
    high = [2 * cnt > params.window for cnt in counts]
    return TernaryActivation(high[0], high[1], high[2]), state
