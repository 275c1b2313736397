"""Deformed quantum multiplication for flag varieties and the inequality
system of the multiplicative eigenvalue polytope."""

from .root_system import (CartanPoint, RootSystem, Weight, build_root_system,
                          kappa, kappa_inv, killing_form)
from .weyl import (ParabolicContext, WeylElement, WeylGroup, chi,
                   enumerate_weyl, get_weyl_group, minimal_reps, s_matrix)
from .quantum_ring import QuantumTable, build_structure_table, gw_invariant
from .deformed_ring import (DeformedElement, a_exponent, deformed_coeff_tuple,
                            deformed_product, is_levi_movable, render_table)
from .eigencone import (Alcove, Certificate, DistinctnessReport, Inequality,
                        IrredundancyReport, MembershipVerdict, alcove,
                        baseline_inequalities, distinctness_check,
                        generate_inequalities, irredundancy_check, membership)
from .unitary_oracle import (GroupRep, OracleVerdict, group_rep,
                             numeric_membership, rep_for_root_system,
                             su2_reference_membership)

__all__ = [
    "CartanPoint", "RootSystem", "Weight", "build_root_system",
    "kappa", "kappa_inv", "killing_form",
    "ParabolicContext", "WeylElement", "WeylGroup", "chi",
    "enumerate_weyl", "get_weyl_group", "minimal_reps", "s_matrix",
    "QuantumTable", "build_structure_table", "gw_invariant",
    "DeformedElement", "a_exponent", "deformed_coeff_tuple",
    "deformed_product", "is_levi_movable", "render_table",
    "Alcove", "Certificate", "DistinctnessReport", "Inequality",
    "IrredundancyReport", "MembershipVerdict", "alcove",
    "baseline_inequalities", "distinctness_check", "generate_inequalities",
    "irredundancy_check", "membership",
    "GroupRep", "OracleVerdict", "group_rep", "numeric_membership",
    "rep_for_root_system", "su2_reference_membership",
]
