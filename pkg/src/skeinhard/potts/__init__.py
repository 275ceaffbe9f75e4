"""Potts/Tutte evaluation, shift calculus, edge operators and denseness certificates."""
from .density import DensityResult, density_certificate, kauffman_generators, potts_generators, preset_certificate
from .graph import (
    PottsBudgetExceeded,
    PottsGraph,
    SingularParameters,
    dual_weight,
    tutte_cd_oracle,
    tutte_from_potts,
    z_cluster,
    z_colorings,
)
from .shift import (
    CompositionTree,
    DegenerateSeries,
    SearchBudgetExhausted,
    implement_weight,
    shift_parallel,
    shift_series,
)
from .transfer import EdgeOp, PartitionBasis, edge_operator, gram_rank, partition_basis, z_transfer

__all__ = [
    "CompositionTree",
    "DegenerateSeries",
    "DensityResult",
    "EdgeOp",
    "PartitionBasis",
    "PottsBudgetExceeded",
    "PottsGraph",
    "SearchBudgetExhausted",
    "SingularParameters",
    "density_certificate",
    "dual_weight",
    "edge_operator",
    "gram_rank",
    "implement_weight",
    "kauffman_generators",
    "partition_basis",
    "potts_generators",
    "preset_certificate",
    "shift_parallel",
    "shift_series",
    "tutte_cd_oracle",
    "tutte_from_potts",
    "z_cluster",
    "z_colorings",
    "z_transfer",
]
