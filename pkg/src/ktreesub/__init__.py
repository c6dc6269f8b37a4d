"""Partition posets with block sizes 1 mod k, complexes of k-trees, and an
exact computational verification that the order complex of the former
subdivides the latter."""

from ._kernels import BACKEND, count_partitions_modk, warmup
from .complexes import SimplicialComplex
from .errors import (
    CycleDetected,
    FaceNotPresent,
    KTreeSubError,
    NoLowerBound,
    NotComparable,
    NotLinearExtension,
    NotNested,
    NotUnique,
    NoUpperBound,
    ResourceLimit,
)
from .partitions import (
    Partition,
    PartitionPoset,
    apply_permutation,
    building_set_I,
    enumerate_partitions,
    factors_I,
    factors_k,
    factors_k_of_chain,
    g_set,
    join_all,
    k_minimal_upper_bounds,
    parse_partition,
    partition_join,
)
from .poset import Poset, poset_from_json, poset_to_json, product
from .subdivision import (
    BlowupResult,
    CarrierMap,
    SigmaLattice,
    SubdivisionReport,
    blowup_sequence,
    build_local_carrier_maps,
    carrier_map_from_parts,
    check_compatibility,
    check_equivariance,
    global_carrier_map,
    is_building_set,
    nested_set_complex,
    run_blowup,
    sigma_lattice,
    verify_carrier_map,
    verify_theorem,
)
from .trees import (
    KTree,
    contract,
    enumerate_ktree_complex,
    is_k_nested,
    nested_to_tree,
    star_tree,
    tree_to_nested,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BlowupResult",
    "CarrierMap",
    "CycleDetected",
    "FaceNotPresent",
    "KTree",
    "KTreeSubError",
    "NoLowerBound",
    "NotComparable",
    "NotLinearExtension",
    "NotNested",
    "NotUnique",
    "NoUpperBound",
    "Partition",
    "PartitionPoset",
    "Poset",
    "ResourceLimit",
    "SigmaLattice",
    "SimplicialComplex",
    "SubdivisionReport",
    "apply_permutation",
    "blowup_sequence",
    "build_local_carrier_maps",
    "building_set_I",
    "carrier_map_from_parts",
    "check_compatibility",
    "check_equivariance",
    "contract",
    "count_partitions_modk",
    "enumerate_ktree_complex",
    "enumerate_partitions",
    "factors_I",
    "factors_k",
    "factors_k_of_chain",
    "g_set",
    "global_carrier_map",
    "is_building_set",
    "is_k_nested",
    "join_all",
    "k_minimal_upper_bounds",
    "nested_set_complex",
    "nested_to_tree",
    "parse_partition",
    "partition_join",
    "poset_from_json",
    "poset_to_json",
    "product",
    "run_blowup",
    "sigma_lattice",
    "star_tree",
    "tree_to_nested",
    "verify_carrier_map",
    "verify_theorem",
    "warmup",
]
