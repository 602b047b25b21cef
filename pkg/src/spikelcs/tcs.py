"""Temporal control: one action set holds the agent across many moves.

After a match set [M] and action set [A] form, successive states are fed
straight into [A] without reforming [M].  Members that stop matching (or
the engagement timeout) force a continue/drop arbitration: [A] splits
into the continue set [C] and drop set [D], one member is drawn by
roulette on fitness-weighted predicted payoff from the whole of [A], and
its side wins.  Dropping reinforces the dropped set with

    P = exp(-phi * t_total) * r + exp(-rho * t_internal) * maxP

where ``t_total`` counts match-set formations this trial (the "steps" of
temporal-mode performance plots), ``t_internal`` counts discrete moves
spent under the dropped set, and r/maxP are mutually exclusive (goal:
maxP = 0; internal drop: r = 0 with maxP read from the next match set's
prediction array).

Membrane potentials are bootstrapped once per trial; between activations
inside a trial the network state persists, which is what lets spiking
classifiers express time-dependent behaviour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .xcsf.ga import run_ga
from .xcsf.matching import MatchSet, build_match_set
from .xcsf.population import Population
from .xcsf.prediction import build_prediction_array, select_action
from .xcsf.updates import update_action_set


@dataclass(frozen=True)
class TcsParams:
    phi: float = 0.45       # whole-trial discount per formation
    rho: float = 0.005      # within-engagement discount per move
    timeout: int = 20       # max moves one action set may hold control

    def __post_init__(self):
        if self.timeout < 1:
            raise ValueError("timeout must be >= 1")


def tcs_payoff(r: float, max_p: float, t_total: int, t_internal: int,
               params: TcsParams) -> float:
    """Temporal reinforcement target (reduces to r + maxP at phi=rho=0)."""
    return math.exp(-params.phi * t_total) * r + \
        math.exp(-params.rho * t_internal) * max_p


@dataclass
class EngagedActionSet:
    """The action set currently in control, with its formation context."""

    slots: np.ndarray            # store slots of the members
    classifiers: list            # aligned Classifier views
    current_action: int
    formation_state: np.ndarray  # perceived state [A] was formed on
    formation_move: int          # global move counter at formation
    steps_held: int = 0          # t_i: moves taken under this set

    def narrow(self, keep: np.ndarray) -> None:
        self.slots = self.slots[keep]
        self.classifiers = [cl for cl, k in zip(self.classifiers, keep) if k]


@dataclass
class Reconsider:
    """Outcome of re-presenting a new state to the engaged set."""

    drop: bool
    action: int | None = None          # set on continue
    drop_slots: np.ndarray | None = None  # members to reinforce on drop


def _select_among_members(pop: Population, engaged: EngagedActionSet,
                          state: np.ndarray, actions: np.ndarray,
                          mode: str, rng: np.random.Generator) -> int:
    """Pick the winning action when surviving members disagree:
    fitness-weighted mean predicted payoff per action, then the trial's
    selection policy."""
    st = pop.store
    aug = np.concatenate(([pop.params.x0], state))
    preds = st.pred_w[engaged.slots] @ aug
    fit = st.fitness[engaged.slots]
    pa = np.full(pop.n_actions, np.nan)
    for action in np.unique(actions):
        mask = actions == action
        fsum = fit[mask].sum()
        pa[action] = float((fit[mask] * preds[mask]).sum() / fsum) \
            if fsum > 0.0 else float(preds[mask].mean())
    return select_action(pa, mode, rng)


def tcs_reconsider(pop: Population, engaged: EngagedActionSet,
                   state: np.ndarray, mode: str,
                   rng: np.random.Generator,
                   timeout: int) -> Reconsider:
    """Re-match every engaged member on the new state and arbitrate.

    All match -> continue.  None match, or the timeout is reached ->
    drop the whole set.  A partial split draws one member from the full
    set with weight fitness * predicted payoff; its side (continue or
    drop) wins.  Losing continue-side members on a drop get no update;
    members evicted for advocating a losing action get no update either
    and join no drop set.
    """
    if engaged.steps_held >= timeout:
        return Reconsider(drop=True, drop_slots=engaged.slots)

    highs = pop.engine.activate(engaged.slots, state, persist=True)
    matched = ~highs[:, 2]
    codes = 2 * highs[:, 0].astype(np.int64) + highs[:, 1].astype(np.int64)
    actions = pop.codebook[codes]

    if not matched.any():
        return Reconsider(drop=True, drop_slots=engaged.slots)

    if not matched.all():
        st = pop.store
        aug = np.concatenate(([pop.params.x0], state))
        preds = st.pred_w[engaged.slots] @ aug
        weights = st.fitness[engaged.slots] * preds
        weights = np.maximum(weights, 0.0)
        total = weights.sum()
        if total <= 0.0:
            pick = int(rng.integers(len(weights)))
        else:
            pick = int(np.searchsorted(np.cumsum(weights),
                                       rng.random() * total, side="right"))
            pick = min(pick, len(weights) - 1)
        if not matched[pick]:  # the drop set wins
            return Reconsider(drop=True, drop_slots=engaged.slots[~matched])
        engaged.narrow(matched)
        actions = actions[matched]

    if len(np.unique(actions)) > 1:
        action = _select_among_members(pop, engaged, state, actions, mode, rng)
        keep = actions == action
        engaged.narrow(keep)  # losers leave [A] with no update, no drop set
    else:
        action = int(actions[0])
    engaged.current_action = action
    return Reconsider(drop=False, action=action)


@dataclass
class TrialResult:
    moves: int
    formations: int
    reached_goal: bool


@dataclass
class _PendingDrop:
    slots: np.ndarray
    formation_state: np.ndarray
    steps_held: int


def run_tcs_trial(env, pop: Population, mode: str, rng: np.random.Generator,
                  trial_counter: int, params: TcsParams,
                  learn: bool = True, probe: bool = False,
                  trace=None) -> TrialResult:
    """One temporal-mode trial.

    Network states bootstrap exactly once, at trial start.  Each drop
    reinforces the dropped set once (using the next match set's best
    prediction) and triggers discovery on it; reaching the goal
    reinforces the final set with the formation-discounted reward.  The
    trial also ends at the environment's move cap, without a final
    update.  ``probe`` starts from the fixed probe position.
    """
    pos = env.probe_reset() if probe else env.reset(rng)
    pop.engine.reset_states()
    moves = 0
    formations = 0
    pending: _PendingDrop | None = None

    while moves < env.move_cap:
        obs = env.perceive(pos, rng)
        mset = build_match_set(pop, obs, rng, trial_counter, persist_state=True)
        formations += 1
        pa = build_prediction_array(pop, mset)
        if pending is not None:
            if learn:
                target = tcs_payoff(0.0, float(np.nanmax(pa)), formations,
                                    pending.steps_held, params)
                update_action_set(pop, pending.slots, target,
                                  pending.formation_state)
                run_ga(pop, pending.slots, pending.formation_state,
                       trial_counter, rng)
            pending = None
        action = select_action(pa, mode, rng)
        sub = mset.action_subset(action)
        engaged = EngagedActionSet(sub.slots, sub.classifiers, action,
                                   obs, moves)

        while moves < env.move_cap:
            pos, reward, done = env.step(pos, engaged.current_action)
            moves += 1
            engaged.steps_held += 1
            if trace is not None:
                trace.move(obs, engaged.current_action, len(engaged.slots),
                           moves, formations)
            if done:
                if learn:
                    target = tcs_payoff(reward, 0.0, formations,
                                        engaged.steps_held, params)
                    update_action_set(pop, engaged.slots, target,
                                      engaged.formation_state)
                    run_ga(pop, engaged.slots, engaged.formation_state,
                           trial_counter, rng)
                return TrialResult(moves, formations, True)
            if moves >= env.move_cap:
                break
            obs = env.perceive(pos, rng)
            decision = tcs_reconsider(pop, engaged, obs, mode, rng,
                                      params.timeout)
            if decision.drop:
                if trace is not None:
                    trace.decision("drop", moves, formations)
                pending = _PendingDrop(decision.drop_slots,
                                       engaged.formation_state,
                                       engaged.steps_held)
                break
            if trace is not None:
                trace.decision("continue", moves, formations)

    return TrialResult(moves, formations, False)
