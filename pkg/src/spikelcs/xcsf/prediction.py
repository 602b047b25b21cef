"""Prediction array and action selection."""

from __future__ import annotations

import numpy as np

from .matching import MatchSet
from .population import Population


def build_prediction_array(pop: Population, mset: MatchSet) -> np.ndarray:
    """Fitness-weighted mean prediction per action; NaN where no member
    advocates the action."""
    if len(mset) == 0:
        raise ValueError("match set is empty")
    st = pop.store
    aug = np.concatenate(([pop.params.x0], mset.state))
    preds = st.pred_w[mset.slots] @ aug
    fit = st.fitness[mset.slots]
    pa = np.full(pop.n_actions, np.nan)
    for action in range(pop.n_actions):
        mask = mset.actions == action
        if not mask.any():
            continue
        fsum = fit[mask].sum()
        if fsum > 0.0:
            pa[action] = float((fit[mask] * preds[mask]).sum() / fsum)
        else:
            pa[action] = float(preds[mask].mean())
    return pa


def select_action(pa: np.ndarray, mode: str, rng: np.random.Generator) -> int:
    """Exploit: argmax with lowest-index tie break.  Explore: roulette
    over entries shifted so the minimum present entry gets weight zero;
    uniform over present entries when all are equal."""
    present = ~np.isnan(pa)
    if not present.any():
        raise ValueError("prediction array has no present entry")
    if mode == "exploit":
        vals = np.where(present, pa, -np.inf)
        return int(np.argmax(vals))
    if mode != "explore":
        raise ValueError(f"unknown selection mode {mode!r}")
    idx = np.nonzero(present)[0]
    weights = pa[idx] - pa[idx].min()
    total = weights.sum()
    if total <= 0.0:
        return int(idx[rng.integers(len(idx))])
    pick = rng.random() * total
    j = int(np.searchsorted(np.cumsum(weights), pick, side="right"))
    return int(idx[min(j, len(idx) - 1)])
