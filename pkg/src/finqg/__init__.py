"""finqg: a computational workbench for finite quantum groups."""

from .linalg import DEFAULT_TOL, AntilinearMap, Subspace, flip, leg_embed, subspace_equal, tensor
from .cstar import AlgMap, BlockStructure, FdAlg, K0Class, conditional_expectation, generate_algebra, k0, tensor_alg, verify_star_iso, wedderburn
from .qgroup import Fqg, IrrepTable, build_fqg, dual_fqg, irrep_table, opposite_and_coopposite, unitary_antipode

__all__ = [
    "DEFAULT_TOL", "AntilinearMap", "Subspace", "flip", "leg_embed", "subspace_equal", "tensor",
    "AlgMap", "BlockStructure", "FdAlg", "K0Class", "conditional_expectation", "generate_algebra",
    "k0", "tensor_alg", "verify_star_iso", "wedderburn",
    "Fqg", "IrrepTable", "build_fqg", "dual_fqg", "irrep_table", "opposite_and_coopposite", "unitary_antipode",
]
