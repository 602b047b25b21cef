"""Reinforcement of an action set toward a payoff target.

Prediction weight vectors move by the normalised delta rule; the error
then tracks the residual against the *updated* prediction, accuracies
follow the standard power-law curve and fitness moves toward each
member's numerosity-weighted relative accuracy.
"""

from __future__ import annotations

import numpy as np

from .population import Population


def update_action_set(pop: Population, slots: np.ndarray, payoff: float,
                      state: np.ndarray) -> None:
    if len(slots) == 0:
        return
    p = pop.params
    st = pop.store
    aug = np.concatenate(([p.x0], state))
    norm2 = float(aug @ aug)

    w = st.pred_w[slots]
    residual = payoff - w @ aug
    st.pred_w[slots] = w + ((p.eta / norm2) * residual)[:, None] * aug[None, :]

    post = st.pred_w[slots] @ aug
    err = st.error[slots]
    err = err + p.beta * (np.abs(payoff - post) - err)
    st.error[slots] = err

    kappa = np.where(err < p.epsilon0, 1.0,
                     p.alpha * (err / p.epsilon0) ** (-p.nu))
    num = st.numerosity[slots].astype(np.float64)
    acc = kappa * num
    rel = acc / acc.sum()
    st.fitness[slots] += p.beta * (rel - st.fitness[slots])

    st.experience[slots] += 1
    st.as_size[slots] += p.beta * (num.sum() - st.as_size[slots])
