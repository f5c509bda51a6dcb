"""Weight-cone, local-shape, reduction-shape and q-expansion calculators for
mod-p Hilbert modular forms over ramified real quadratic fields."""

try:
    from . import _hmf as _backend
except ImportError:  # running against a plain CMake build tree
    import _hmf as _backend

__all__ = [
    "EmbeddingIndex",
    "EmbeddingSet",
    "Form",
    "HmfError",
    "allowed_st",
    "apply_hasse",
    "apply_op",
    "apply_twist",
    "forms_equal_on_common_window",
    "is_stabilized",
    "is_strongly_stabilized",
    "check_morphism_family",
    "degeneracy",
    "demo_config",
    "eigen_build_json",
    "ext_dimension",
    "hasse_compare",
    "hasse_weight",
    "in_min_cone",
    "inertial_pairs",
    "is_irreducible_weight",
    "lambda_class",
    "lambda_equal",
    "lattice_index",
    "load_form",
    "pw1_lift_decision",
    "run_acceptance",
    "theta_cycle_table",
    "vchi_dim",
    "weight2_membership",
    "y_support",
]

for _name in __all__:
    globals()[_name] = getattr(_backend, _name)
del _name
