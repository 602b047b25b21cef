"""Topology and weight operators applied during a discovery cycle.

Order within a cycle is: weight mutation (rate ``mu``), then node
addition/removal (``psi``/``omega``), then per-connection toggling
(``tau``).  All operators are copy-on-write: the argument genome is
never modified.  Disabled connection slots keep a zero weight; a slot
that becomes enabled receives a fresh uniform weight from the
representation's legal range.
"""

from __future__ import annotations

import numpy as np

from .genome import (EXCITATORY, INHIBITORY, N_OUTPUTS, Genome, MlpGenome,
                     SpikingGenome, enabled_count, legal_slot_count,
                     snn_legal_mask)


def _weight_range(genome: Genome) -> tuple[float, float]:
    return (0.0, 1.0) if isinstance(genome, SpikingGenome) else (-1.0, 1.0)


def mutate_weights(genome: Genome, mu: float, rng: np.random.Generator,
                   law: str = "redraw", sigma: float = 0.1) -> Genome:
    """Perturb each enabled connection weight independently with
    probability ``mu``.

    ``law='redraw'`` replaces the weight with a fresh uniform draw from
    the legal range (mirrors the initialization law); ``law='gaussian'``
    adds N(0, sigma) and clamps.  Topology is unchanged.
    """
    if not 0.0 < mu <= 1.0:
        raise ValueError("mu must lie in (0, 1]")
    out = genome.copy()
    lo, hi = _weight_range(genome)
    if isinstance(out, SpikingGenome):
        planes = [(out.weights, out.enabled)]
    else:
        planes = [(out.w_ih, out.en_ih), (out.w_ho, out.en_ho)]
    for weights, enabled in planes:
        idx = np.nonzero(enabled)
        hits = rng.random(len(idx[0])) < mu
        k = int(hits.sum())
        if k == 0:
            continue
        sel = (idx[0][hits], idx[1][hits])
        if law == "redraw":
            weights[sel] = rng.uniform(lo, hi, k)
        elif law == "gaussian":
            weights[sel] = np.clip(weights[sel] + rng.normal(0.0, sigma, k), lo, hi)
        else:
            raise ValueError(f"unknown weight mutation law {law!r}")
    return out


def _snn_add_node(genome: SpikingGenome, rng: np.random.Generator) -> SpikingGenome:
    n_in, h = genome.n_in, genome.n_hidden
    kind = EXCITATORY if rng.random() < 0.5 else INHIBITORY
    kinds = np.append(genome.kinds, np.int8(kind))
    # insert a row/column for the new hidden node at the end of the hidden block
    pos = n_in + h
    weights = np.insert(np.insert(genome.weights, pos, 0.0, axis=0), pos, 0.0, axis=1)
    enabled = np.insert(np.insert(genome.enabled, pos, False, axis=0),
                        pos, False, axis=1)
    new = SpikingGenome(n_in, kinds, weights, enabled)
    mask = snn_legal_mask(n_in, h + 1)
    slot_t, slot_s = np.nonzero(mask)
    touches_new = (slot_t == pos) | (slot_s == pos)
    for t, s in zip(slot_t[touches_new], slot_s[touches_new]):
        if rng.random() < 0.5:
            new.enabled[t, s] = True
            new.weights[t, s] = rng.uniform(0.0, 1.0)
    return new


def _mlp_add_node(genome: MlpGenome, rng: np.random.Generator) -> MlpGenome:
    n_in = genome.n_in
    row_en = rng.random(n_in) < 0.5
    row_w = np.where(row_en, rng.uniform(-1.0, 1.0, n_in), 0.0)
    col_en = rng.random(N_OUTPUTS) < 0.5
    col_w = np.where(col_en, rng.uniform(-1.0, 1.0, N_OUTPUTS), 0.0)
    return MlpGenome(
        n_in,
        np.vstack([genome.w_ih, row_w]),
        np.hstack([genome.w_ho, col_w[:, None]]),
        np.vstack([genome.en_ih, row_en]),
        np.hstack([genome.en_ho, col_en[:, None]]),
    )


def _remove_node(genome: Genome, rng: np.random.Generator) -> Genome:
    if genome.n_hidden <= 1:
        return genome.copy()  # hidden layer never shrinks below one node
    victim = int(rng.integers(genome.n_hidden))
    if isinstance(genome, SpikingGenome):
        pos = genome.n_in + victim
        return SpikingGenome(
            genome.n_in,
            np.delete(genome.kinds, victim),
            np.delete(np.delete(genome.weights, pos, axis=0), pos, axis=1),
            np.delete(np.delete(genome.enabled, pos, axis=0), pos, axis=1),
        )
    return MlpGenome(
        genome.n_in,
        np.delete(genome.w_ih, victim, axis=0),
        np.delete(genome.w_ho, victim, axis=1),
        np.delete(genome.en_ih, victim, axis=0),
        np.delete(genome.en_ho, victim, axis=1),
    )


def constructivism_event(genome: Genome, psi: float, omega: float,
                         rng: np.random.Generator) -> Genome:
    """With probability ``psi`` grow or shrink the hidden layer: a node is
    added with probability ``omega``, otherwise one is removed (uniform
    choice, floored at one node).

    A new SNN node is excitatory with probability 0.5; each of a new
    node's potential connections is enabled with probability 0.5 with a
    fresh uniform weight.
    """
    for p in (psi, omega):
        if not 0.0 < p <= 1.0:
            raise ValueError("psi and omega must lie in (0, 1]")
    if rng.random() >= psi:
        return genome.copy()
    if rng.random() < omega:
        if isinstance(genome, SpikingGenome):
            return _snn_add_node(genome, rng)
        return _mlp_add_node(genome, rng)
    return _remove_node(genome, rng)


def connection_selection_event(genome: Genome, tau: float,
                               rng: np.random.Generator) -> Genome:
    """Toggle each legal connection slot independently with probability
    ``tau``; slots that become enabled get a fresh uniform weight."""
    if not 0.0 < tau <= 1.0:
        raise ValueError("tau must lie in (0, 1]")
    out = genome.copy()
    lo, hi = _weight_range(genome)
    if isinstance(out, SpikingGenome):
        mask = snn_legal_mask(out.n_in, out.n_hidden)
        planes = [(out.weights, out.enabled, mask)]
    else:
        planes = [(out.w_ih, out.en_ih, np.ones_like(out.en_ih)),
                  (out.w_ho, out.en_ho, np.ones_like(out.en_ho))]
    for weights, enabled, mask in planes:
        slot_t, slot_s = np.nonzero(mask)
        flips = rng.random(len(slot_t)) < tau
        for t, s in zip(slot_t[flips], slot_s[flips]):
            if enabled[t, s]:
                enabled[t, s] = False
                weights[t, s] = 0.0
            else:
                enabled[t, s] = True
                weights[t, s] = rng.uniform(lo, hi)
    return out


def connectivity_stats(genome: Genome) -> tuple[int, float]:
    """Return (connected hidden node count, enabled fraction of legal slots).

    A hidden node counts as connected when it has at least one enabled
    incoming and one enabled outgoing connection.
    """
    if isinstance(genome, SpikingGenome):
        h0, h1 = genome.n_in, genome.n_in + genome.n_hidden
        incoming = genome.enabled[h0:h1, :].any(axis=1)
        outgoing = genome.enabled[:, h0:h1].any(axis=0)
    else:
        incoming = genome.en_ih.any(axis=1)
        outgoing = genome.en_ho.any(axis=0)
    connected = int((incoming & outgoing).sum())
    return connected, enabled_count(genome) / legal_slot_count(genome)
