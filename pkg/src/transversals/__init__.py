"""Independent transversals in matrices over matroids."""

from .engine import OracleStats, PreconditionError, brute_force_find, find_it, instrument_scaling
from .generators import GeneratorSpec, gen_fig4, gen_R, gen_random, gen_T
from .instance import (
    Cell,
    Classification,
    Instance,
    TransversalCertificate,
    classify_positions,
    load_instance,
    logical_view,
    serialize,
    validate_rows,
)
from .lab import (
    find_disjoint_transversals,
    find_nrow_decomposition,
    iso_equivalent,
    sweep,
    verify_drisko_uniqueness,
)
from .matroid import (
    GraphicOracle,
    IndependenceOracle,
    LinearOracle,
    PartitionOracle,
    UniformOracle,
    verify_axioms,
)

__version__ = "0.1.0"
