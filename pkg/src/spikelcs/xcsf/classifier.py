"""Classifier bookkeeping and per-classifier operations.

Numeric bookkeeping for the whole population lives in slot-indexed
arrays (:class:`ClassifierStore`) so reinforcement, selection and
deletion run vectorised; a :class:`Classifier` is a lightweight view
(genome + slot) whose properties read and write the store.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..networks.genome import Genome

SELF_ADAPT_FLOOR = 1e-6  # lower clip keeps rates strictly positive


@dataclass(frozen=True)
class SelfAdaptiveParams:
    """Per-classifier evolution rates, each in (0, 1]."""

    mu: float     # weight mutation rate per allele
    psi: float    # probability of a node addition/removal event
    omega: float  # probability the event adds (vs removes) a node
    tau: float    # per-connection toggle rate

    def __post_init__(self):
        for name in ("mu", "psi", "omega", "tau"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name}={v} outside (0, 1]")


def self_adapt(parent: SelfAdaptiveParams,
               rng: np.random.Generator) -> SelfAdaptiveParams:
    """Scale each rate by exp(N(0,1)) independently, clipped to
    [1e-6, 1]."""
    def scale(v: float) -> float:
        v = v * float(np.exp(rng.standard_normal()))
        return min(1.0, max(SELF_ADAPT_FLOOR, v))
    return SelfAdaptiveParams(scale(parent.mu), scale(parent.psi),
                              scale(parent.omega), scale(parent.tau))


def draw_self_adaptive(rng: np.random.Generator,
                       maxima: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0),
                       ) -> SelfAdaptiveParams:
    """Initial rates ~ U(0, max] per parameter (1 - U[0,1) keeps the
    bound inclusive and zero excluded)."""
    vals = [(1.0 - rng.random()) * m for m in maxima]
    return SelfAdaptiveParams(*vals)


class ClassifierStore:
    """Slot-indexed numeric fields for every classifier."""

    FLOAT_FIELDS = ("error", "fitness", "as_size", "mu", "psi", "omega", "tau")
    INT_FIELDS = ("numerosity", "experience", "ga_ts")

    def __init__(self, capacity: int, pred_dim: int):
        self.pred_dim = pred_dim
        self.pred_w = np.zeros((capacity, pred_dim))
        for f in self.FLOAT_FIELDS:
            setattr(self, f, np.zeros(capacity))
        for f in self.INT_FIELDS:
            setattr(self, f, np.zeros(capacity, dtype=np.int64))

    @property
    def capacity(self) -> int:
        return len(self.error)

    def ensure(self, capacity: int) -> None:
        cur = self.capacity
        if capacity <= cur:
            return
        pred_w = np.zeros((capacity, self.pred_dim))
        pred_w[:cur] = self.pred_w
        self.pred_w = pred_w
        for f in self.FLOAT_FIELDS + self.INT_FIELDS:
            old = getattr(self, f)
            new = np.zeros(capacity, dtype=old.dtype)
            new[:cur] = old
            setattr(self, f, new)


class Classifier:
    """View of one macroclassifier: genome plus store-backed bookkeeping."""

    __slots__ = ("genome", "slot", "_store")

    def __init__(self, genome: Genome, slot: int, store: ClassifierStore):
        self.genome = genome
        self.slot = slot
        self._store = store

    def _get(self, field):
        return getattr(self._store, field)[self.slot]

    def _set(self, field, value):
        getattr(self._store, field)[self.slot] = value

    @property
    def pred_weights(self) -> np.ndarray:
        return self._store.pred_w[self.slot]

    @pred_weights.setter
    def pred_weights(self, value):
        self._store.pred_w[self.slot] = value

    error = property(lambda s: float(s._get("error")),
                     lambda s, v: s._set("error", v))
    fitness = property(lambda s: float(s._get("fitness")),
                       lambda s, v: s._set("fitness", v))
    as_size = property(lambda s: float(s._get("as_size")),
                       lambda s, v: s._set("as_size", v))
    numerosity = property(lambda s: int(s._get("numerosity")),
                          lambda s, v: s._set("numerosity", v))
    experience = property(lambda s: int(s._get("experience")),
                          lambda s, v: s._set("experience", v))
    ga_timestamp = property(lambda s: int(s._get("ga_ts")),
                            lambda s, v: s._set("ga_ts", v))

    @property
    def self_adapt_params(self) -> SelfAdaptiveParams:
        return SelfAdaptiveParams(float(self._get("mu")), float(self._get("psi")),
                                  float(self._get("omega")), float(self._get("tau")))

    @self_adapt_params.setter
    def self_adapt_params(self, sa: SelfAdaptiveParams):
        self._set("mu", sa.mu)
        self._set("psi", sa.psi)
        self._set("omega", sa.omega)
        self._set("tau", sa.tau)

    def prediction(self, state: np.ndarray, x0: float) -> float:
        return compute_prediction(self, state, x0)


def compute_prediction(cl: Classifier, state: np.ndarray, x0: float = 1.0) -> float:
    """Linear payoff prediction: w0*x0 plus the weighted state sum."""
    w = cl.pred_weights
    if len(w) != len(state) + 1:
        raise ValueError(f"prediction vector length {len(w)} does not fit "
                         f"state of length {len(state)}")
    return float(w[0] * x0 + np.dot(w[1:], state))
