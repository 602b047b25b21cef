"""Stateless feed-forward activation for the MLP representation.

Each neuron applies the logistic function to the sum over its enabled
incoming connections; an output is high when its activation is strictly
greater than 0.5.  Sums accumulate sequentially over source index so the
batched kernel reproduces results bit-exactly.
"""

from __future__ import annotations

import math

import numpy as np

from .genome import N_OUTPUTS, MlpGenome
from .lif import TernaryActivation

HIGH_LEVEL = 0.5


def mlp_activate(genome: MlpGenome, inputs: np.ndarray) -> TernaryActivation:
    if len(inputs) != genome.n_in:
        raise ValueError(f"expected {genome.n_in} inputs, got {len(inputs)}")
    hidden = np.empty(genome.n_hidden)
    for h in range(genome.n_hidden):
        acc = 0.0
        for i in range(genome.n_in):
            if genome.en_ih[h, i]:
                acc += genome.w_ih[h, i] * float(inputs[i])
        hidden[h] = 1.0 / (1.0 + math.exp(-acc))
    outs = []
    for o in range(N_OUTPUTS):
        acc = 0.0
        for h in range(genome.n_hidden):
            if genome.en_ho[o, h]:
                acc += genome.w_ho[o, h] * hidden[h]
        outs.append(1.0 / (1.0 + math.exp(-acc)))
    return TernaryActivation(outs[0] > HIGH_LEVEL, outs[1] > HIGH_LEVEL,
                             outs[2] > HIGH_LEVEL)
