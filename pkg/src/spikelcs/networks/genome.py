"""Evolvable network encodings for classifier conditions/actions.

Two representations are supported:

* ``SpikingGenome`` -- leaky integrate-and-fire network with typed
  (excitatory/inhibitory) hidden nodes, weights in [0, 1] and a free
  recurrent topology among hidden nodes.
* ``MlpGenome`` -- strictly feed-forward sigmoid network with weights
  in [-1, 1].

Both carry a per-connection enabled flag over every *legal* connection
slot.  Node order is fixed: inputs, hidden, then the three outputs
(action bit 0, action bit 1, don't-match).  Genomes are treated as
immutable values once inserted into a population; every operator in
:mod:`spikelcs.networks.operators` returns a fresh copy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EXCITATORY = 1
INHIBITORY = -1

N_OUTPUTS = 3  # action bit 0, action bit 1, don't-match


class GenomeFormatError(ValueError):
    """Raised when a serialized genome cannot be parsed."""


@dataclass(eq=False)
class SpikingGenome:
    """Spiking network genome.

    ``weights[t, s]`` is the weight of the connection from source node
    ``s`` into target node ``t`` over all ``n_in + n_hidden + 3`` nodes;
    entries outside the legal topology are zero and stay zero.  The sign
    of a connection's influence is carried by the source node kind, never
    by the weight.
    """

    n_in: int
    kinds: np.ndarray    # int8, one entry per hidden node: +1 or -1
    weights: np.ndarray  # float64 [n_nodes, n_nodes], target-major
    enabled: np.ndarray  # bool    [n_nodes, n_nodes]

    @property
    def n_hidden(self) -> int:
        return len(self.kinds)

    @property
    def n_nodes(self) -> int:
        return self.n_in + len(self.kinds) + N_OUTPUTS

    def node_signs(self) -> np.ndarray:
        """Per-node sign of outgoing influence (+1/-1); inputs and outputs
        are always excitatory."""
        signs = np.ones(self.n_nodes, dtype=np.int8)
        signs[self.n_in:self.n_in + self.n_hidden] = self.kinds
        return signs

    def effective_weights(self) -> np.ndarray:
        """Signed weight matrix with disabled connections zeroed."""
        return self.weights * self.enabled * self.node_signs()[np.newaxis, :].astype(np.float64)

    def copy(self) -> "SpikingGenome":
        return SpikingGenome(self.n_in, self.kinds.copy(),
                             self.weights.copy(), self.enabled.copy())


@dataclass(eq=False)
class MlpGenome:
    """Feed-forward sigmoid network genome (input->hidden, hidden->output)."""

    n_in: int
    w_ih: np.ndarray   # float64 [n_hidden, n_in]
    w_ho: np.ndarray   # float64 [3, n_hidden]
    en_ih: np.ndarray  # bool    [n_hidden, n_in]
    en_ho: np.ndarray  # bool    [3, n_hidden]

    @property
    def n_hidden(self) -> int:
        return self.w_ih.shape[0]

    def copy(self) -> "MlpGenome":
        return MlpGenome(self.n_in, self.w_ih.copy(), self.w_ho.copy(),
                         self.en_ih.copy(), self.en_ho.copy())


Genome = SpikingGenome | MlpGenome


def snn_legal_mask(n_in: int, n_hidden: int) -> np.ndarray:
    """Boolean [n, n] mask of legal (target, source) slots.

    Legal: input->hidden, hidden->hidden (self links included),
    hidden->output.  Nothing may target an input node and outputs have
    no outgoing connections.
    """
    n = n_in + n_hidden + N_OUTPUTS
    h0, h1 = n_in, n_in + n_hidden
    mask = np.zeros((n, n), dtype=bool)
    mask[h0:h1, :h1] = True      # into hidden: from inputs and hidden
    mask[h1:, h0:h1] = True      # into outputs: from hidden only
    return mask


def legal_slot_count(genome: Genome) -> int:
    if isinstance(genome, SpikingGenome):
        h = genome.n_hidden
        return genome.n_in * h + h * h + N_OUTPUTS * h
    return genome.n_in * genome.n_hidden + N_OUTPUTS * genome.n_hidden


def enabled_count(genome: Genome) -> int:
    if isinstance(genome, SpikingGenome):
        return int(genome.enabled.sum())
    return int(genome.en_ih.sum()) + int(genome.en_ho.sum())


def random_genome(rep: str, input_count: int, rng: np.random.Generator,
                  n_hidden: int = 1, enabled_prob: float = 1.0) -> Genome:
    """Draw a fresh genome: ``n_hidden`` hidden nodes (default 1), fully
    connected over the legal topology unless ``enabled_prob`` < 1.

    SNN weights ~ U[0,1] with hidden nodes excitatory with probability
    0.5; MLP weights ~ U[-1,1].
    """
    if n_hidden < 1:
        raise ValueError("n_hidden must be >= 1")
    if rep == "snn":
        n = input_count + n_hidden + N_OUTPUTS
        mask = snn_legal_mask(input_count, n_hidden)
        kinds = np.where(rng.random(n_hidden) < 0.5, EXCITATORY, INHIBITORY).astype(np.int8)
        weights = np.zeros((n, n))
        weights[mask] = rng.uniform(0.0, 1.0, int(mask.sum()))
        enabled = np.zeros((n, n), dtype=bool)
        if enabled_prob >= 1.0:
            enabled[mask] = True
        else:
            enabled[mask] = rng.random(int(mask.sum())) < enabled_prob
        weights[~enabled] = 0.0
        return SpikingGenome(input_count, kinds, weights, enabled)
    if rep == "mlp":
        w_ih = rng.uniform(-1.0, 1.0, (n_hidden, input_count))
        w_ho = rng.uniform(-1.0, 1.0, (N_OUTPUTS, n_hidden))
        if enabled_prob >= 1.0:
            en_ih = np.ones((n_hidden, input_count), dtype=bool)
            en_ho = np.ones((N_OUTPUTS, n_hidden), dtype=bool)
        else:
            en_ih = rng.random((n_hidden, input_count)) < enabled_prob
            en_ho = rng.random((N_OUTPUTS, n_hidden)) < enabled_prob
        w_ih[~en_ih] = 0.0
        w_ho[~en_ho] = 0.0
        return MlpGenome(input_count, w_ih, w_ho, en_ih, en_ho)
    raise ValueError(f"unknown representation {rep!r}")


def validate_genome(genome: Genome) -> None:
    """Check every structural invariant; raises ``ValueError`` on violation.

    Run by the test suite after each operator application.
    """
    if isinstance(genome, SpikingGenome):
        if genome.n_hidden < 1:
            raise ValueError("hidden node count fell below 1")
        if not np.all(np.abs(genome.kinds) == 1):
            raise ValueError("hidden node kinds must be +1/-1")
        n = genome.n_nodes
        if genome.weights.shape != (n, n) or genome.enabled.shape != (n, n):
            raise ValueError("weight/enabled matrix shape mismatch")
        mask = snn_legal_mask(genome.n_in, genome.n_hidden)
        if genome.enabled[~mask].any():
            raise ValueError("enabled connection outside legal topology")
        if np.any(genome.weights[~mask] != 0.0):
            raise ValueError("nonzero weight outside legal topology")
        w = genome.weights[mask]
        if np.any(w < 0.0) or np.any(w > 1.0):
            raise ValueError("SNN weight outside [0, 1]")
    else:
        if genome.n_hidden < 1:
            raise ValueError("hidden node count fell below 1")
        for w in (genome.w_ih, genome.w_ho):
            if np.any(w < -1.0) or np.any(w > 1.0):
                raise ValueError("MLP weight outside [-1, 1]")


def genome_key(genome: Genome) -> bytes:
    """Bit-exact identity key (topology, kinds, enabled flags, weights)."""
    if isinstance(genome, SpikingGenome):
        return b"s" + genome.n_in.to_bytes(4, "little") + \
            genome.kinds.tobytes() + genome.enabled.tobytes() + genome.weights.tobytes()
    return b"m" + genome.n_in.to_bytes(4, "little") + \
        genome.en_ih.tobytes() + genome.en_ho.tobytes() + \
        genome.w_ih.tobytes() + genome.w_ho.tobytes()


# ---------------------------------------------------------------------------
# line-oriented text serialization (bit-exact round trip)
# ---------------------------------------------------------------------------

def genome_to_text(genome: Genome) -> str:
    """Serialize to the line-oriented snapshot form.

    One ``node`` line per hidden node, one ``conn`` line per legal slot
    with source id, target id, full-precision weight and enabled flag.
    """
    lines = []
    if isinstance(genome, SpikingGenome):
        lines.append(f"snn {genome.n_in} {genome.n_hidden}")
        for i, k in enumerate(genome.kinds):
            lines.append(f"node {genome.n_in + i} {'E' if k == EXCITATORY else 'I'}")
        mask = snn_legal_mask(genome.n_in, genome.n_hidden)
        for t, s in zip(*np.nonzero(mask)):
            lines.append(f"conn {s} {t} {genome.weights[t, s]!r} "
                         f"{1 if genome.enabled[t, s] else 0}")
    else:
        lines.append(f"mlp {genome.n_in} {genome.n_hidden}")
        h0 = genome.n_in
        o0 = genome.n_in + genome.n_hidden
        for h in range(genome.n_hidden):
            for i in range(genome.n_in):
                lines.append(f"conn {i} {h0 + h} {genome.w_ih[h, i]!r} "
                             f"{1 if genome.en_ih[h, i] else 0}")
        for o in range(N_OUTPUTS):
            for h in range(genome.n_hidden):
                lines.append(f"conn {h0 + h} {o0 + o} {genome.w_ho[o, h]!r} "
                             f"{1 if genome.en_ho[o, h] else 0}")
    lines.append("end")
    return "\n".join(lines)


def genome_from_text(text: str | list[str]) -> Genome:
    lines = text.splitlines() if isinstance(text, str) else list(text)
    lines = [ln.strip() for ln in lines if ln.strip()]
    if not lines:
        raise GenomeFormatError("empty genome record")
    head = lines[0].split()
    if len(head) != 3 or head[0] not in ("snn", "mlp"):
        raise GenomeFormatError(f"bad genome header: {lines[0]!r}")
    rep, n_in, n_hidden = head[0], int(head[1]), int(head[2])
    if lines[-1] != "end":
        raise GenomeFormatError("missing genome terminator")
    body = lines[1:-1]

    if rep == "snn":
        n = n_in + n_hidden + N_OUTPUTS
        kinds = np.full(n_hidden, EXCITATORY, dtype=np.int8)
        weights = np.zeros((n, n))
        enabled = np.zeros((n, n), dtype=bool)
        for ln in body:
            parts = ln.split()
            if parts[0] == "node":
                kinds[int(parts[1]) - n_in] = EXCITATORY if parts[2] == "E" else INHIBITORY
            elif parts[0] == "conn":
                s, t = int(parts[1]), int(parts[2])
                weights[t, s] = float(parts[3])
                enabled[t, s] = parts[4] == "1"
            else:
                raise GenomeFormatError(f"bad genome line: {ln!r}")
        genome: Genome = SpikingGenome(n_in, kinds, weights, enabled)
    else:
        w_ih = np.zeros((n_hidden, n_in))
        w_ho = np.zeros((N_OUTPUTS, n_hidden))
        en_ih = np.zeros((n_hidden, n_in), dtype=bool)
        en_ho = np.zeros((N_OUTPUTS, n_hidden), dtype=bool)
        h0, o0 = n_in, n_in + n_hidden
        for ln in body:
            parts = ln.split()
            if parts[0] != "conn":
                raise GenomeFormatError(f"bad genome line: {ln!r}")
            s, t = int(parts[1]), int(parts[2])
            if t < o0:
                w_ih[t - h0, s] = float(parts[3])
                en_ih[t - h0, s] = parts[4] == "1"
            else:
                w_ho[t - o0, s - h0] = float(parts[3])
                en_ho[t - o0, s - h0] = parts[4] == "1"
        genome = MlpGenome(n_in, w_ih, w_ho, en_ih, en_ho)
    validate_genome(genome)
    return genome
