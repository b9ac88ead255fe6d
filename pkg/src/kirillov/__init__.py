"""Exact orbit-method computations for nilpotent Lie algebras over Q and F_p."""
from .exactnum import QQ, GF, Fp, FactorialNotInvertible, FieldMismatch, field_from_spec, inv_factorial
from .linalg import Subspace, kernel, solve, sum_intersect
from .liealg import LieAlgebra, InvalidAlgebra, algebra_from_dict, load_algebra
from .chgroup import GroupElement, ch_series, ch_components, ad_exp, matrix_exp, matrix_log
from .dualpol import Functional, bilinear_form, standard_polarization, check_orbit_identities
from .coadjoint import coadjoint_act, orbit, orbit_partition
from .finrep import build_table, induced_character, inner_product, kirillov_audit
from .corpus import bundled_names, load_bundled, resolve_algebra

__version__ = "0.1.0"

__all__ = [
    "QQ", "GF", "Fp", "FactorialNotInvertible", "FieldMismatch", "field_from_spec", "inv_factorial",
    "Subspace", "kernel", "solve", "sum_intersect",
    "LieAlgebra", "InvalidAlgebra", "algebra_from_dict", "load_algebra",
    "GroupElement", "ch_series", "ch_components", "ad_exp", "matrix_exp", "matrix_log",
    "Functional", "bilinear_form", "standard_polarization", "check_orbit_identities",
    "coadjoint_act", "orbit", "orbit_partition",
    "build_table", "induced_character", "inner_product", "kirillov_audit",
    "bundled_names", "load_bundled", "resolve_algebra",
]
