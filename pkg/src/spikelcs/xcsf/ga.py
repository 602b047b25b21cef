"""Two-stage discovery component.

Stage 1 self-adapts the offspring's evolution rates (multiplicative
lognormal scaling); stage 2 applies, in order, weight mutation, a node
addition/removal event and per-connection toggling, each driven by the
offspring's own freshly adapted rates.  There is no crossover.  Parents
stay in the population competing with their offspring.
"""

from __future__ import annotations

import numpy as np

from ..networks.operators import (connection_selection_event,
                                  constructivism_event, mutate_weights)
from .classifier import self_adapt
from .population import Population


def _roulette(weights: np.ndarray, rng: np.random.Generator) -> int:
    total = weights.sum()
    if total <= 0.0:
        return int(rng.integers(len(weights)))
    pick = rng.random() * total
    idx = int(np.searchsorted(np.cumsum(weights), pick, side="right"))
    return min(idx, len(weights) - 1)


def ga_should_fire(pop: Population, slots: np.ndarray, trial_counter: int) -> bool:
    """Numerosity-weighted mean time since last activity must exceed the
    trigger threshold."""
    st = pop.store
    num = st.numerosity[slots].astype(np.float64)
    ages = trial_counter - st.ga_ts[slots]
    return float((num * ages).sum() / num.sum()) > pop.params.theta_ga


def run_ga(pop: Population, slots: np.ndarray, state: np.ndarray,
           trial_counter: int, rng: np.random.Generator) -> bool:
    """Run one discovery cycle on an action set if due; returns whether
    it fired.  Two offspring are produced from fitness-proportionate
    parents, inserted with macro-merge, and the population is trimmed
    back to its cap."""
    if len(slots) == 0:
        return False
    if not ga_should_fire(pop, slots, trial_counter):
        return False
    st = pop.store
    st.ga_ts[slots] = trial_counter

    members = {cl.slot: cl for cl in pop.members}
    fitness = st.fitness[slots]
    for _ in range(2):
        parent = members.get(int(slots[_roulette(fitness, rng)]))
        if parent is None:   # parent macro was deleted by the first child's trim
            continue
        sa = self_adapt(parent.self_adapt_params, rng)
        genome = mutate_weights(parent.genome, sa.mu, rng,
                                pop.params.weight_law, pop.params.gaussian_sigma)
        genome = constructivism_event(genome, sa.psi, sa.omega, rng)
        genome = connection_selection_event(genome, sa.tau, rng)
        pop.insert(
            genome,
            pred_weights=parent.pred_weights.copy(),
            error=parent.error,
            fitness=pop.params.ga_fitness_discount * parent.fitness,
            as_size=parent.as_size,
            sa=sa,
            ga_timestamp=trial_counter,
        )
        pop.delete_to_cap(rng)
    return True
