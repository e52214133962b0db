"""Generable and permissible sets over finite corpora of creations.

Closure-style generators (convex hull, coordinate recombination, bounding
box) act on finite point corpora in R^d. The package computes their images,
the permissible subsets that survive removal of any single creation or
protected group, violation attributions for individual outputs, and seeded
growth experiments tracking the permissible volume ratio.
"""
from .errors import (
    BoundViolation,
    DegenerateSystem,
    DimensionMismatch,
    DimensionNotOne,
    DuplicateCreation,
    EmptyCorpus,
    EmptyPolytope,
    GridExplosion,
    InsufficientPoints,
    MisalignedCheckpoints,
    NotConvexValued,
    PermgenError,
    ProtectedSetNotInCorpus,
    SpliceOnContinuum,
    ZeroGenerableVolume,
    ZeroVolumeBounding,
)
from .experiments import (
    BoundRecord,
    CheckpointRecord,
    StatRow,
    Trajectory,
    heavy_tail_bound,
    permissible_ratio,
    run_growth,
    summarize,
    write_stats,
    write_trajectories,
)
from .generators import (
    AxiomReport,
    ConvexRegion,
    ConvexValuedReport,
    FiniteGrid,
    GeneratorSpec,
    GenerableSet,
    box_spec,
    check_closure_axioms,
    check_convex_valued,
    check_homogeneity,
    conv_spec,
    convex_valued,
    generate,
    is_member,
    parse_generator,
    scale_corpus,
    splice_spec,
)
from .geometry import (
    TOL_GEOM,
    Corpus,
    Creation,
    Location,
    Polytope,
    RadonSplit,
    convex_hull,
    halfspace_intersection,
    mc_volume,
    membership,
    radon_partition,
    support,
    volume,
)
from .permissibility import (
    NOT_GENERABLE,
    PERMISSIBLE,
    VIOLATION,
    AddEffect,
    Classification,
    Collection,
    PermissibleResult,
    SuperadditivityReport,
    add_creation_effect,
    classify,
    generable_set_included,
    generable_sets_equal,
    groupwise_permissible,
    permissible_set,
    radon_nonemptiness_witness,
    richness_compare,
    superadditivity_check,
)
from .props import PropertyResult, run_scope
from .sampling import (
    DistributionSpec,
    TailDiagnostic,
    parse_distribution,
    sample_corpus,
    sample_points,
    tail_diagnostic,
)

__version__ = "0.1.0"

__all__ = [
    "AddEffect",
    "AxiomReport",
    "BoundRecord",
    "BoundViolation",
    "CheckpointRecord",
    "Classification",
    "Collection",
    "ConvexRegion",
    "ConvexValuedReport",
    "Corpus",
    "Creation",
    "DegenerateSystem",
    "DimensionMismatch",
    "DimensionNotOne",
    "DistributionSpec",
    "DuplicateCreation",
    "EmptyCorpus",
    "EmptyPolytope",
    "FiniteGrid",
    "GeneratorSpec",
    "GenerableSet",
    "GridExplosion",
    "InsufficientPoints",
    "Location",
    "MisalignedCheckpoints",
    "NOT_GENERABLE",
    "NotConvexValued",
    "PERMISSIBLE",
    "PermgenError",
    "PermissibleResult",
    "Polytope",
    "PropertyResult",
    "ProtectedSetNotInCorpus",
    "RadonSplit",
    "SpliceOnContinuum",
    "StatRow",
    "SuperadditivityReport",
    "TOL_GEOM",
    "TailDiagnostic",
    "Trajectory",
    "VIOLATION",
    "ZeroGenerableVolume",
    "ZeroVolumeBounding",
    "add_creation_effect",
    "box_spec",
    "check_closure_axioms",
    "check_convex_valued",
    "check_homogeneity",
    "classify",
    "conv_spec",
    "convex_hull",
    "convex_valued",
    "generable_set_included",
    "generable_sets_equal",
    "generate",
    "groupwise_permissible",
    "halfspace_intersection",
    "heavy_tail_bound",
    "is_member",
    "mc_volume",
    "membership",
    "parse_distribution",
    "parse_generator",
    "permissible_ratio",
    "permissible_set",
    "radon_nonemptiness_witness",
    "radon_partition",
    "richness_compare",
    "run_growth",
    "run_scope",
    "sample_corpus",
    "sample_points",
    "scale_corpus",
    "splice_spec",
    "summarize",
    "superadditivity_check",
    "support",
    "tail_diagnostic",
    "volume",
    "write_stats",
    "write_trajectories",
]
