"""Match-set construction and on-demand covering.

A classifier matches a state when its don't-match output is low for
that state; the (out0, out1) pair then decodes to the advocated action
through the environment's codebook.  Matching is recomputed for every
state.  Any action missing from the match set is filled by covering:
random genomes are drawn until one matches the state *and* advocates
the missing action.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..networks.genome import Genome, MlpGenome, random_genome
from ..networks.lif import LifParams, NetState, TernaryActivation, fresh_state, snn_activate
from ..networks.mlp import mlp_activate
from .classifier import Classifier, draw_self_adaptive
from .population import Population


class CoverFailure(RuntimeError):
    """No random genome matched within the attempt cap; the
    representation or configuration cannot express the missing action."""


def decode_action(activation: TernaryActivation, codebook: np.ndarray) -> int | None:
    """Map a ternary activation to an action id, or None when excluded.

    The don't-match output is evaluated first; the action bits are only
    read when it is low.
    """
    if activation.dont_match:
        return None
    return int(codebook[2 * int(activation.out0) + int(activation.out1)])


def match_classifier(cl: Classifier, state: np.ndarray, codebook: np.ndarray,
                     lif_params: LifParams,
                     net_state: NetState | None = None,
                     ) -> tuple[int | None, NetState | None]:
    """Activate one classifier's genome on ``state``; returns the
    advocated action (None when excluded) and the advanced network state."""
    genome = cl.genome if isinstance(cl, Classifier) else cl
    if isinstance(genome, MlpGenome):
        return decode_action(mlp_activate(genome, state), codebook), None
    if net_state is None:
        net_state = fresh_state(genome, lif_params)
    act, net_state = snn_activate(genome, state, net_state, lif_params)
    return decode_action(act, codebook), net_state


@dataclass
class MatchSet:
    state: np.ndarray          # the perceived state the set was built for
    slots: np.ndarray          # store slots of matching members
    actions: np.ndarray        # advocated action per member
    classifiers: list[Classifier]

    def __len__(self) -> int:
        return len(self.slots)

    def action_subset(self, action: int) -> "MatchSet":
        mask = self.actions == action
        return MatchSet(self.state, self.slots[mask], self.actions[mask],
                        [cl for cl, m in zip(self.classifiers, mask) if m])


def _cover_one(pop: Population, state: np.ndarray, action: int,
               rng: np.random.Generator, trial_counter: int) -> Classifier:
    """Draw random genomes until one matches ``state`` advocating
    ``action``; insert it with fresh bookkeeping."""
    for _ in range(pop.params.cover_attempts):
        genome: Genome = random_genome(pop.representation, pop.input_count, rng,
                                       pop.initial_hidden, pop.initial_conn_prob)
        got, net_state = match_classifier(genome, state, pop.codebook,
                                          pop.lif_params)
        if got != action:
            continue
        cl = pop.insert(
            genome,
            pred_weights=np.zeros(pop.input_count + 1),
            error=0.0,
            fitness=pop.params.fitness_init,
            as_size=1.0,
            sa=draw_self_adaptive(rng, pop.sa_init_max),
            ga_timestamp=trial_counter,
            net_state=net_state,
        )
        pop.delete_to_cap(rng)
        return cl
    raise CoverFailure(
        f"no random {pop.representation} genome advocated action {action} "
        f"within {pop.params.cover_attempts} attempts")


def build_match_set(pop: Population, state: np.ndarray,
                    rng: np.random.Generator, trial_counter: int,
                    persist_state: bool = False) -> MatchSet:
    """Build the match set for ``state``, covering every absent action.

    ``persist_state`` keeps membrane potentials across activations
    (temporal mode); otherwise every activation starts from the
    bootstrap potential.
    """
    slots = pop.member_slots()
    if len(slots):
        highs = pop.engine.activate(slots, state, persist_state)
        matched = ~highs[:, 2]
        codes = 2 * highs[:, 0].astype(np.int64) + highs[:, 1].astype(np.int64)
        actions = pop.codebook[codes]
        m_slots = slots[matched]
        m_actions = actions[matched]
        m_cls = [cl for cl, ok in zip(pop.members, matched) if ok]
    else:
        m_slots = np.empty(0, dtype=np.int64)
        m_actions = np.empty(0, dtype=np.int64)
        m_cls = []

    present = set(int(a) for a in m_actions)
    missing = [a for a in range(pop.n_actions) if a not in present]
    if missing:
        extra_slots, extra_actions = [], []
        for action in missing:
            cl = _cover_one(pop, state, action, rng, trial_counter)
            extra_slots.append(cl.slot)
            extra_actions.append(action)
            m_cls.append(cl)
        m_slots = np.concatenate([m_slots, np.array(extra_slots, dtype=np.int64)])
        m_actions = np.concatenate([m_actions, np.array(extra_actions, dtype=np.int64)])
    return MatchSet(np.asarray(state, dtype=np.float64), m_slots, m_actions, m_cls)
