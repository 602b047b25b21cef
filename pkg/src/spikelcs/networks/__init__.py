from .genome import (EXCITATORY, INHIBITORY, N_OUTPUTS, Genome,
                     GenomeFormatError, MlpGenome, SpikingGenome,
                     enabled_count, genome_from_text, genome_key,
                     genome_to_text, legal_slot_count, random_genome,
                     snn_legal_mask, validate_genome)
from .lif import LifParams, NetState, TernaryActivation, fresh_state, lif_step, snn_activate
from .mlp import mlp_activate
from .operators import (connection_selection_event, connectivity_stats,
                        constructivism_event, mutate_weights)
from .batch import MlpBatchEngine, SnnBatchEngine, make_engine

__all__ = [
    "EXCITATORY", "INHIBITORY", "N_OUTPUTS", "Genome", "GenomeFormatError",
    "MlpGenome", "SpikingGenome", "enabled_count", "genome_from_text",
    "genome_key", "genome_to_text", "legal_slot_count", "random_genome",
    "snn_legal_mask", "validate_genome", "LifParams", "NetState",
    "TernaryActivation", "fresh_state", "lif_step", "snn_activate",
    "mlp_activate", "connection_selection_event", "connectivity_stats",
    "constructivism_event", "mutate_weights", "MlpBatchEngine",
    "SnnBatchEngine", "make_engine",
]
