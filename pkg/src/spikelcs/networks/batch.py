"""Population-scale network evaluation.

Matching a state against every classifier in the population is the hot
path of the whole system, so genomes are installed into padded slot
tensors and activated by a single compiled kernel call.  The kernels
replay exactly the arithmetic of :func:`spikelcs.networks.lif.lif_step`
and :func:`spikelcs.networks.mlp.mlp_activate` (same accumulation order,
no fast-math), which the test suite checks bit-for-bit.

Slots are reused after removal; membrane state lives in the slot arrays
so it persists across activations within a trial when ``persist`` is
requested (temporal mode) and is re-bootstrapped per activation
otherwise.
"""

from __future__ import annotations

import math

import numba
import numpy as np

from .genome import N_OUTPUTS, MlpGenome, SpikingGenome
from .lif import LifParams, NetState


@numba.njit(cache=True)
def _snn_window_kernel(idx, W, nn, M, S, x, n_in, a, b, c, c_ini, mth,
                       window, persist, counts):
    nmax = M.shape[1]
    m_cur = np.empty(nmax)
    s_cur = np.empty(nmax)
    m_new = np.empty(nmax)
    s_new = np.empty(nmax)
    for k in range(idx.shape[0]):
        p = idx[k]
        n = nn[p]
        if persist:
            for t in range(n):
                m_cur[t] = M[p, t]
                s_cur[t] = S[p, t]
        else:
            for t in range(n):
                m_cur[t] = c_ini
                s_cur[t] = 0.0
        c0 = 0
        c1 = 0
        c2 = 0
        ob = n - 3
        for _ in range(window):
            for t in range(n):
                acc = x[t] if t < n_in else 0.0
                for s_i in range(n):
                    acc += W[p, t, s_i] * s_cur[s_i]
                m = m_cur[t] + (acc + a - b * m_cur[t])
                if m < 0.0:
                    m = 0.0
                if m > mth:
                    s_new[t] = 1.0
                    m = c
                else:
                    s_new[t] = 0.0
                m_new[t] = m
            for t in range(n):
                m_cur[t] = m_new[t]
                s_cur[t] = s_new[t]
            if s_cur[ob] > 0.0:
                c0 += 1
            if s_cur[ob + 1] > 0.0:
                c1 += 1
            if s_cur[ob + 2] > 0.0:
                c2 += 1
        if persist:
            for t in range(n):
                M[p, t] = m_cur[t]
                S[p, t] = s_cur[t]
        counts[p, 0] = c0
        counts[p, 1] = c1
        counts[p, 2] = c2


@numba.njit(cache=True)
def _mlp_kernel(idx, Wih, Who, nh, x, n_in, outs):
    hmax = Wih.shape[1]
    hid = np.empty(hmax)
    for k in range(idx.shape[0]):
        p = idx[k]
        h_n = nh[p]
        for h in range(h_n):
            acc = 0.0
            for i in range(n_in):
                acc += Wih[p, h, i] * x[i]
            hid[h] = 1.0 / (1.0 + math.exp(-acc))
        for o in range(3):
            acc = 0.0
            for h in range(h_n):
                acc += Who[p, o, h] * hid[h]
            outs[p, o] = 1.0 / (1.0 + math.exp(-acc))


class SnnBatchEngine:
    """Slot store and batched simulator for spiking genomes."""

    representation = "snn"

    def __init__(self, n_in: int, params: LifParams,
                 capacity: int = 512, nmax: int = 16):
        self.n_in = n_in
        self.params = params
        self._cap = capacity
        self._nmax = max(nmax, n_in + 1 + N_OUTPUTS)
        self.W = np.zeros((self._cap, self._nmax, self._nmax))
        self.n_nodes = np.zeros(self._cap, dtype=np.int64)
        self.M = np.full((self._cap, self._nmax), params.c_ini)
        self.S = np.zeros((self._cap, self._nmax))
        self.counts = np.zeros((self._cap, 3), dtype=np.int64)
        self._free: list[int] = list(range(self._cap - 1, -1, -1))

    def _grow(self, need_nodes: int) -> None:
        new_cap = self._cap * 2 if not self._free else self._cap
        new_nmax = self._nmax
        while need_nodes > new_nmax:
            new_nmax += 8
        if new_cap == self._cap and new_nmax == self._nmax:
            return
        W = np.zeros((new_cap, new_nmax, new_nmax))
        W[:self._cap, :self._nmax, :self._nmax] = self.W
        M = np.full((new_cap, new_nmax), self.params.c_ini)
        M[:self._cap, :self._nmax] = self.M
        S = np.zeros((new_cap, new_nmax))
        S[:self._cap, :self._nmax] = self.S
        nn = np.zeros(new_cap, dtype=np.int64)
        nn[:self._cap] = self.n_nodes
        self._free.extend(range(new_cap - 1, self._cap - 1, -1))
        self.W, self.M, self.S, self.n_nodes = W, M, S, nn
        self.counts = np.zeros((new_cap, 3), dtype=np.int64)
        self._cap, self._nmax = new_cap, new_nmax

    def add(self, genome: SpikingGenome) -> int:
        n = genome.n_nodes
        if not self._free or n > self._nmax:
            self._grow(n)
        slot = self._free.pop()
        self.W[slot] = 0.0
        self.W[slot, :n, :n] = genome.effective_weights()
        self.n_nodes[slot] = n
        self.M[slot, :n] = self.params.c_ini
        self.S[slot, :n] = 0.0
        return slot

    def remove(self, slot: int) -> None:
        self.n_nodes[slot] = 0
        self._free.append(slot)

    def set_state(self, slot: int, state: NetState) -> None:
        n = self.n_nodes[slot]
        self.M[slot, :n] = state.membranes
        self.S[slot, :n] = state.last_spikes

    def get_state(self, slot: int) -> NetState:
        n = self.n_nodes[slot]
        return NetState(self.M[slot, :n].copy(), self.S[slot, :n].copy())

    def reset_states(self) -> None:
        """Bootstrap every slot's membranes; called once per trial in
        temporal mode."""
        self.M[:] = self.params.c_ini
        self.S[:] = 0.0

    def activate(self, slots: np.ndarray, obs: np.ndarray,
                 persist: bool) -> np.ndarray:
        """Run one activation window for each slot; returns a bool array
        [len(slots), 3] of high flags (out0, out1, dont_match)."""
        p = self.params
        _snn_window_kernel(slots, self.W, self.n_nodes, self.M, self.S,
                           np.ascontiguousarray(obs, dtype=np.float64),
                           self.n_in, p.a, p.b, p.c, p.c_ini, p.mthresh,
                           p.window, persist, self.counts)
        return self.counts[slots] * 2 > p.window


class MlpBatchEngine:
    """Slot store and batched forward pass for MLP genomes."""

    representation = "mlp"

    def __init__(self, n_in: int, params: LifParams,
                 capacity: int = 512, hmax: int = 8):
        self.n_in = n_in
        self.params = params  # unused by the dynamics; kept for interface parity
        self._cap = capacity
        self._hmax = hmax
        self.Wih = np.zeros((self._cap, self._hmax, n_in))
        self.Who = np.zeros((self._cap, N_OUTPUTS, self._hmax))
        self.n_hidden = np.zeros(self._cap, dtype=np.int64)
        self.outs = np.zeros((self._cap, 3))
        self._free: list[int] = list(range(self._cap - 1, -1, -1))

    def _grow(self, need_hidden: int) -> None:
        new_cap = self._cap * 2 if not self._free else self._cap
        new_hmax = self._hmax
        while need_hidden > new_hmax:
            new_hmax += 8
        if new_cap == self._cap and new_hmax == self._hmax:
            return
        Wih = np.zeros((new_cap, new_hmax, self.n_in))
        Wih[:self._cap, :self._hmax] = self.Wih
        Who = np.zeros((new_cap, N_OUTPUTS, new_hmax))
        Who[:self._cap, :, :self._hmax] = self.Who
        nh = np.zeros(new_cap, dtype=np.int64)
        nh[:self._cap] = self.n_hidden
        self._free.extend(range(new_cap - 1, self._cap - 1, -1))
        self.Wih, self.Who, self.n_hidden = Wih, Who, nh
        self.outs = np.zeros((new_cap, 3))
        self._cap, self._hmax = new_cap, new_hmax

    def add(self, genome: MlpGenome) -> int:
        h = genome.n_hidden
        if not self._free or h > self._hmax:
            self._grow(h)
        slot = self._free.pop()
        self.Wih[slot] = 0.0
        self.Wih[slot, :h] = genome.w_ih * genome.en_ih
        self.Who[slot] = 0.0
        self.Who[slot, :, :h] = genome.w_ho * genome.en_ho
        self.n_hidden[slot] = h
        return slot

    def remove(self, slot: int) -> None:
        self.n_hidden[slot] = 0
        self._free.append(slot)

    def set_state(self, slot, state) -> None:  # stateless representation
        pass

    def get_state(self, slot):
        return None

    def reset_states(self) -> None:
        pass

    def activate(self, slots: np.ndarray, obs: np.ndarray,
                 persist: bool = False) -> np.ndarray:
        _mlp_kernel(slots, self.Wih, self.Who, self.n_hidden,
                    np.ascontiguousarray(obs, dtype=np.float64),
                    self.n_in, self.outs)
        return self.outs[slots] > 0.5


def make_engine(representation: str, n_in: int, params: LifParams):
    if representation == "snn":
        return SnnBatchEngine(n_in, params)
    if representation == "mlp":
        return MlpBatchEngine(n_in, params)
    raise ValueError(f"unknown representation {representation!r}")
