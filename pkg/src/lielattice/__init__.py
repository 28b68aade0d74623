"""Exact Lie-algebra data, highest-weight modules and lattices over Z_(p)."""

from .chevalley import ChevalleyBasis, adjoint_rep, bracket, chevalley_basis, killing_form
from .highestweight import (
    HighestWeightModule,
    decompose,
    dual,
    direct_sum,
    freudenthal_mult,
    shapovalov_gram,
    simple_module,
    sym_power,
    tensor,
    verma_weight_spaces,
    weight_decomposition,
)
from .lattice import PLattice
from .latticelab import (
    StabilityReport,
    Theorem2Report,
    classify,
    counterexample_lattice,
    enumerate_intermediate,
    is_group_stable,
    is_lie_stable,
    is_p_latticed,
    is_torus_homogeneous,
    spin,
    steinberg_digits,
    verify_theorem2,
)
from .linalg import LinearOperator
from .rootsystem import CartanType, RootSystem, build_root_system, is_dominant, pairing, weyl_dim
from .zform import DividedPowerSet, ModpModule, divided_powers, minimal_admissible_lattice, reduce_mod_p

__all__ = [
    "ChevalleyBasis",
    "adjoint_rep",
    "bracket",
    "chevalley_basis",
    "killing_form",
    "HighestWeightModule",
    "decompose",
    "dual",
    "direct_sum",
    "freudenthal_mult",
    "shapovalov_gram",
    "simple_module",
    "sym_power",
    "tensor",
    "verma_weight_spaces",
    "weight_decomposition",
    "PLattice",
    "StabilityReport",
    "Theorem2Report",
    "classify",
    "counterexample_lattice",
    "enumerate_intermediate",
    "is_group_stable",
    "is_lie_stable",
    "is_p_latticed",
    "is_torus_homogeneous",
    "spin",
    "steinberg_digits",
    "verify_theorem2",
    "LinearOperator",
    "CartanType",
    "RootSystem",
    "build_root_system",
    "is_dominant",
    "pairing",
    "weyl_dim",
    "DividedPowerSet",
    "ModpModule",
    "divided_powers",
    "minimal_admissible_lattice",
    "reduce_mod_p",
]
