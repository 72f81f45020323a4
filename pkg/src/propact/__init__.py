"""Exact and numeric checks for proper actions on homogeneous spaces of reductive type."""

from .roots import (
    LinearSubspace,
    RootType,
    SearchInfeasible,
    SignedPermutation,
    act,
    benoist_pfree,
    calabi_markus_pinf,
    dominant,
    minus_w0_fixed_space,
    orbit_meets_subspace,
    subspace_in_weyl_saturation,
)
from .orbits import (
    MultiplicitySequence,
    Partition,
    enumerate_ddagger_sequences,
    enumerate_partitions_A,
    enumerate_partitions_B,
    multiplicity_sequence_from_partition,
    neutral_element_A,
    neutral_element_B,
    vector_from_multiplicity_sequence,
)
from .properness import (
    Step,
    decide_psl2r,
    reproduce_table,
    star_m_check,
    step8_contradiction_check,
    step_filter,
    theorem_main2_check,
)

__version__ = "0.1.0"
