"""Translation-invariant block designs over Z_p^n: build, verify, search."""

from .geometry import Geometry, Line, is_prime
from .designs import (
    CoverageReport,
    Design,
    ParameterSet,
    SimplicityReport,
    StructureReport,
    TwoLineSplit,
    ZeroSumReport,
    affine_plane_two_line_design,
    check_divisibility,
    check_simple,
    check_t_design,
    check_two_parallel_line_structure,
    check_zero_sum,
    expected_lambda,
    intersection_profile,
    pair_coverage,
    split_two_parallel_lines,
    subset_coverage,
)
from .orbits import (
    Family,
    OrbitRep,
    canonical_rep,
    develop,
    difference_vector,
    enumerate_candidate_orbits,
    family_from_blocks,
    make_base_block,
    orbit,
    orbit_rep,
    pair_coverage_by_difference,
    translation_stabilizer,
)
from .data import (
    REFERENCE_BASE_BLOCKS,
    reference_base_blocks,
    reference_family,
    reference_geometry,
)
from .search import FamilySearch, SearchConfig, FamilyVerdict, verify_family
from . import fileio

__version__ = "0.1.0"

__all__ = [
    "CoverageReport",
    "Design",
    "Family",
    "FamilySearch",
    "FamilyVerdict",
    "Geometry",
    "Line",
    "OrbitRep",
    "ParameterSet",
    "REFERENCE_BASE_BLOCKS",
    "SearchConfig",
    "SimplicityReport",
    "StructureReport",
    "TwoLineSplit",
    "ZeroSumReport",
    "affine_plane_two_line_design",
    "canonical_rep",
    "check_divisibility",
    "check_simple",
    "check_t_design",
    "check_two_parallel_line_structure",
    "check_zero_sum",
    "develop",
    "difference_vector",
    "enumerate_candidate_orbits",
    "expected_lambda",
    "family_from_blocks",
    "fileio",
    "intersection_profile",
    "is_prime",
    "make_base_block",
    "orbit",
    "orbit_rep",
    "pair_coverage",
    "pair_coverage_by_difference",
    "reference_base_blocks",
    "reference_family",
    "reference_geometry",
    "split_two_parallel_lines",
    "subset_coverage",
    "translation_stabilizer",
    "verify_family",
]
