"""Exact computation with finite ordered structures: filter spectra,
Priestley-style dualities, and free/completion constructions."""

from ordua.errors import (
    AntisymmetryViolation,
    CarrierMismatch,
    CarrierTooLarge,
    DuplicateLabel,
    InputFormatError,
    KindHintMismatch,
    KindMismatch,
    NotAFilterImage,
    NotInjective,
    NotMonotone,
    NotPriestley,
    NotT0,
    OracleBoundExceeded,
    OrduaError,
    UnknownLabel,
)
from ordua.structures import (
    DEFAULT_ENUMERATION_BOUND,
    KIND_RANK,
    KINDS,
    MORPHISM_KINDS,
    Poset,
    SetFamily,
    Structure,
    StructureMorphism,
    Subset,
    canonical_form,
    chain_structure,
    classify,
    compose,
    disjunctive_filters,
    disjunctively_compact_elements,
    enumerate_homomorphisms,
    filters,
    indecomposable_elements,
    is_coherent_poset,
    is_flat_map,
    is_homomorphism,
    order_isomorphism,
    powerset_structure,
    prime_filters,
    structure_from_closed_masks,
    structure_isomorphism,
    validate_poset,
)
from ordua.spaces import (
    FiniteSpace,
    Preorder,
    PreorderedSpace,
    PriestleyReport,
    alexandrov_space,
    check_frame_pullback,
    check_patch_characterization,
    generate_topology,
    patch_space,
    preorder_coreflection,
    priestley_boolean_algebra,
    priestley_check,
    specialization_preorder,
    upper_open_reduct,
    weakly_indecomposable_clopen_uppers,
)
from ordua.dualities import (
    DUALITY_KINDS,
    DualityResult,
    OrderedBoolean,
    SpaceMap,
    coherent_of_priestley,
    ddlat_spectrum,
    dlat_of_priestley,
    dual_morphism,
    extended_image_check,
    msl_spectrum,
    ordered_boolean_of,
    poset_spectrum,
    priestley_of_coherent,
    priestley_of_dlat,
    roundtrip_check,
    spectrum_for,
    stone_spectrum,
    upper_elements,
)
from ordua.free import (
    FREE_KINDS,
    ClosureFamily,
    FreeResult,
    OracleResult,
    free_boolean,
    free_dlat_on_ddlat,
    free_dlat_on_msl,
    free_frame_on_poset,
    free_point_map,
    frame_supercompacts,
    induced_boolean_hom,
    is_class_morphism,
    recognize_free_boolean,
    supercompact_elements,
    thm22_oracle,
    universal_property_check,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
