"""Macroclassifier population with numerosity accounting.

The population is a bag of macroclassifiers capped at ``N``
microclassifiers.  Insertion merges bit-identical genomes into the
existing macroclassifier; deletion is roulette on action-set-size
votes with the standard low-fitness penalty.  Member order is insertion
order and is preserved by snapshots, which keeps every roulette draw
reproducible after a reload.
"""

from __future__ import annotations

import numpy as np

from ..networks.batch import make_engine
from ..networks.genome import Genome, genome_from_text, genome_key, genome_to_text
from ..networks.lif import LifParams, NetState
from .classifier import Classifier, ClassifierStore, SelfAdaptiveParams
from .params import XcsfParams


class Population:
    def __init__(self, representation: str, input_count: int, n_actions: int,
                 codebook: np.ndarray, params: XcsfParams,
                 lif_params: LifParams | None = None,
                 initial_hidden: int = 1, initial_conn_prob: float = 1.0,
                 sa_init_max: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)):
        if len(codebook) != 4:
            raise ValueError("codebook must map all four output patterns")
        self.representation = representation
        self.input_count = input_count
        self.n_actions = n_actions
        self.codebook = np.asarray(codebook, dtype=np.int64)
        self.params = params
        self.lif_params = lif_params or LifParams()
        self.initial_hidden = initial_hidden
        self.initial_conn_prob = initial_conn_prob
        self.sa_init_max = sa_init_max

        self.engine = make_engine(representation, input_count, self.lif_params)
        self.store = ClassifierStore(self.engine._cap, input_count + 1)
        self.members: list[Classifier] = []
        self._index: dict[bytes, Classifier] = {}
        self._micros = 0
        self._slots_cache: np.ndarray | None = None

    # ------------------------------------------------------------------
    # accounting
    # ------------------------------------------------------------------

    @property
    def macro_count(self) -> int:
        return len(self.members)

    @property
    def micro_count(self) -> int:
        return self._micros

    def member_slots(self) -> np.ndarray:
        if self._slots_cache is None:
            self._slots_cache = np.array([cl.slot for cl in self.members],
                                         dtype=np.int64)
        return self._slots_cache

    def _invalidate(self) -> None:
        self._slots_cache = None

    # ------------------------------------------------------------------
    # insertion / removal
    # ------------------------------------------------------------------

    def insert(self, genome: Genome, pred_weights: np.ndarray, error: float,
               fitness: float, as_size: float, sa: SelfAdaptiveParams,
               ga_timestamp: int, experience: int = 0, numerosity: int = 1,
               net_state: NetState | None = None) -> Classifier:
        """Insert a microclassifier.  A bit-identical genome already in
        the population absorbs it as numerosity instead."""
        key = genome_key(genome)
        existing = self._index.get(key)
        if existing is not None:
            existing.numerosity += numerosity
            self._micros += numerosity
            return existing
        slot = self.engine.add(genome)
        self.store.ensure(self.engine._cap)
        cl = Classifier(genome, slot, self.store)
        cl.pred_weights = pred_weights
        cl.error = error
        cl.fitness = fitness
        cl.as_size = as_size
        cl.numerosity = numerosity
        cl.experience = experience
        cl.ga_timestamp = ga_timestamp
        cl.self_adapt_params = sa
        if net_state is not None:
            self.engine.set_state(slot, net_state)
        self.members.append(cl)
        self._index[key] = cl
        self._micros += numerosity
        self._invalidate()
        return cl

    def _remove(self, cl: Classifier) -> None:
        self.members.remove(cl)
        del self._index[genome_key(cl.genome)]
        self.engine.remove(cl.slot)
        self._invalidate()

    # ------------------------------------------------------------------
    # deletion
    # ------------------------------------------------------------------

    def delete_to_cap(self, rng: np.random.Generator) -> int:
        """Roulette-delete microclassifiers until the cap holds; returns
        the number deleted."""
        deleted = 0
        while self._micros > self.params.N:
            self._delete_one(rng)
            deleted += 1
        return deleted

    def _delete_one(self, rng: np.random.Generator) -> None:
        slots = self.member_slots()
        st = self.store
        num = st.numerosity[slots].astype(np.float64)
        fitness = st.fitness[slots]
        votes = st.as_size[slots] * num
        mean_fit = fitness.sum() / self._micros
        if mean_fit > 0.0:
            per_micro = fitness / num
            weak = (st.experience[slots] > self.params.theta_del) & \
                   (per_micro < self.params.delta * mean_fit)
            if weak.any():
                scale = np.ones_like(votes)
                scale[weak] = mean_fit / np.maximum(per_micro[weak], 1e-300)
                votes = votes * scale
        total = votes.sum()
        if total <= 0.0:
            idx = int(rng.integers(len(slots)))
        else:
            idx = int(np.searchsorted(np.cumsum(votes),
                                      rng.random() * total, side="right"))
            idx = min(idx, len(slots) - 1)
        victim = self.members[idx]
        victim.numerosity -= 1
        self._micros -= 1
        if victim.numerosity < 1:
            self._remove(victim)

    # ------------------------------------------------------------------
    # population-level metrics helpers
    # ------------------------------------------------------------------

    def field_means(self, field: str) -> tuple[float, float]:
        """(numerosity-weighted mean, plain macro mean) of a store field."""
        if not self.members:
            return float("nan"), float("nan")
        slots = self.member_slots()
        vals = getattr(self.store, field)[slots].astype(np.float64)
        num = self.store.numerosity[slots]
        return float((vals * num).sum() / num.sum()), float(vals.mean())


# ---------------------------------------------------------------------------
# snapshot serialization
# ---------------------------------------------------------------------------

SNAPSHOT_HEADER = "spikelcs-population v1"


def save_snapshot(pop: Population, trial_counter: int) -> str:
    lines = [SNAPSHOT_HEADER,
             f"representation {pop.representation}",
             f"input_count {pop.input_count}",
             f"n_actions {pop.n_actions}",
             f"trial {trial_counter}",
             f"param N {pop.params.N}",
             f"param beta {pop.params.beta!r}",
             f"param epsilon0 {pop.params.epsilon0!r}",
             f"macros {pop.macro_count}"]
    for cl in pop.members:
        sa = cl.self_adapt_params
        lines.append("cl {} {} {} {} {} {} {} {} {} {}".format(
            cl.error.__repr__(), cl.fitness.__repr__(), cl.numerosity,
            cl.experience, cl.as_size.__repr__(), cl.ga_timestamp,
            sa.mu.__repr__(), sa.psi.__repr__(), sa.omega.__repr__(),
            sa.tau.__repr__()))
        lines.append("predw " + " ".join(repr(w) for w in cl.pred_weights))
        lines.append(genome_to_text(cl.genome))
    return "\n".join(lines) + "\n"


def load_snapshot(text: str, params: XcsfParams, codebook: np.ndarray,
                  lif_params: LifParams | None = None,
                  initial_hidden: int = 1, initial_conn_prob: float = 1.0,
                  sa_init_max: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0),
                  ) -> tuple[Population, int]:
    """Rebuild a population from its snapshot text; returns it with the
    stored trial counter.  Member order is restored exactly."""
    lines = text.splitlines()
    if not lines or lines[0] != SNAPSHOT_HEADER:
        raise ValueError("not a population snapshot")
    meta = {}
    i = 1
    while i < len(lines) and not lines[i].startswith("cl "):
        parts = lines[i].split()
        if parts and parts[0] != "param":
            meta[parts[0]] = parts[1]
        i += 1
    pop = Population(meta["representation"], int(meta["input_count"]),
                     int(meta["n_actions"]), codebook, params, lif_params,
                     initial_hidden, initial_conn_prob, sa_init_max)
    trial = int(meta["trial"])
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        head = lines[i].split()
        if head[0] != "cl":
            raise ValueError(f"unexpected snapshot line: {lines[i]!r}")
        error, fitness = float(head[1]), float(head[2])
        numerosity, experience = int(head[3]), int(head[4])
        as_size, ga_ts = float(head[5]), int(head[6])
        sa = SelfAdaptiveParams(float(head[7]), float(head[8]),
                                float(head[9]), float(head[10]))
        pred = np.array([float(v) for v in lines[i + 1].split()[1:]])
        j = i + 2
        while lines[j].strip() != "end":
            j += 1
        genome = genome_from_text(lines[i + 2:j + 1])
        pop.insert(genome, pred, error, fitness, as_size, sa, ga_ts,
                   experience=experience, numerosity=numerosity)
        i = j + 1
    return pop, trial
