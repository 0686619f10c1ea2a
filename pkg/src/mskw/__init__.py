"""Exact finite-group and digraph machinery for boundary extremal checks:
Cayley relations, weak atoms, per-vertex Moser fragments, matching and
flow certificates, and oracle-backed verification campaigns."""

from .errors import (
    BudgetError,
    CapacityError,
    InternalConsistencyError,
    UsageError,
    ValidationError,
)
from .groups import (
    GroupSubset,
    GroupTable,
    build_group,
    complement_set,
    cyclic,
    dihedral,
    direct_product,
    from_table,
    inverse_set,
    product_set,
    quaternion,
    subset,
    symmetric,
    translate_left,
)
from .relations import (
    Relation,
    boundary,
    cayley,
    coboundary,
    exterior,
    image,
    induced,
    is_loopless,
    iterated_image,
    preimage,
    reflexive_closure,
    relation_from_json,
    relation_from_successors,
    relation_to_json,
)
from .isoperimetry import (
    PAPER_DEFINITION,
    PROPER_SUBSET,
    AtomPartition,
    WeakFragmentReport,
    atoms_partition_check,
    weak_connectivity,
)
from .moser import (
    METHOD_BOTH,
    METHOD_ENUMERATION,
    METHOD_FLOW,
    MoserReport,
    ThetaPsi,
    build_theta_psi,
    is_moser_set,
    kappa_v,
    mader_lemma_check,
    theorem_main_check,
    theta_counting_witness,
)
from .constructions import (
    CycleSystem,
    HallResult,
    PathsResult,
    SigmaPermutation,
    ZeroProductCertificate,
    disjoint_paths,
    hall_matching,
    mader_cycles,
    max_matching_size,
    shepherdson_sequence,
    sigma_permutation,
    verify_cycle_system,
    verify_disjoint_paths,
    verify_sigma,
    verify_zero_product,
)
from .harness import (
    CampaignReport,
    CampaignSpec,
    RandomGraphSpec,
    SubsetPolicy,
    campaign_spec_from_json,
    random_reflexive_relation,
    recheck_corpus,
    run_campaign,
    run_constructions_campaign,
    run_mskw_campaign,
    run_sphere_campaign,
    run_structure_campaign,
    run_theorem_campaign,
)

__version__ = "0.1.0"
