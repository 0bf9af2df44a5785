"""Exact homological algebra for global representations over finite sites."""

__version__ = "0.1.0"

from .exactlin import Matrix, kernel_basis, kron, rref, scalar, solve_right
from .groups import Group, Hom, SurjClass, make_group
from .site import Site, build_site, check_widely_closed, classify_site, minimal_objects, preset_site
from .rep import (
    OutRep,
    RepMap,
    RepObject,
    counit_P0,
    exact_pieces,
    hom_space,
    ihom,
    is_s_pure,
    l_filtration,
    make_e,
    projectivity_section,
    standard_e,
    tensor,
    torsion_free_search,
    unit_object,
)
from .complexes import (
    ChainMap,
    Complex,
    GradedMap,
    delta,
    find_homotopy,
    hom_complex,
    homology,
    is_thin,
    mapping_cone,
    pullback,
    pushout,
    semisimple_split,
    shift,
    single_complex,
    homology_dims,
    split_contractible,
    tensor_complex,
)
from .resolutions import Resolution, derived_hom, p_total, resolve_object
from .thin import ThinDecomposition, thin_iso, thin_replacement, thin_split
from .derived import (
    PerfectCertificate,
    compactness_table,
    dualizable_test,
    eG_split_mono,
    perfect_certificate,
    torsion_free_homology,
)
from .model import (
    LiftingProblem,
    MapClass,
    classify_map,
    factor_M,
    factor_N,
    generating_sets,
    rlp_check,
    solve_lift,
)

__all__ = [name for name in dir() if not name.startswith("_")]
