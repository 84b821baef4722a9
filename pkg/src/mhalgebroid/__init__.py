"""Exact computations with finite-dimensional multiplier bialgebroids and Hopf algebroids."""
from .linalg import FIELDS, InconsistentSystem, NotBijective, WellDefinednessViolated
from .algebra import Algebra, MultiplierPair, make_algebra, multiplier_algebra, check_A1
from .btensor import BalancedTensorSpace, btensor, plain
from .bialgebroid import (LeftBialgebroid, RightBialgebroid, AxiomFailed, check_axiom, derive_counit,
                          derive_right_counit, check_counit, check_right_counit, co_opposite, to_opposite)
from .hopf import (MultiplierBialgebroid, NotRegular, check_regular, derive_antipode, derive_counits,
                   verify_antipode, check_galois_inverses, check_antipode_aux, check_antipode_comult, symmetries,
                   transport_counits, co_bialgebroid, op_bialgebroid, StarStructure, check_star,
                   unitality_report, certify)
from .constructions import (parse_category, parse_groupoid, function_algebroid, convolution_algebroid,
                            function_star, convolution_star, tensor_algebroid, crossed_product_algebroid,
                            ActionData, make_fin_hopf, cyclic_group, pair_groupoid, cyclic_group_groupoid,
                            one_point, monoid_category)
from .instance import instance_to_json, instance_from_json, load_instance

__version__ = "0.1.0"

__all__ = [
    "FIELDS",
    "InconsistentSystem",
    "NotBijective",
    "WellDefinednessViolated",
    "Algebra",
    "MultiplierPair",
    "make_algebra",
    "multiplier_algebra",
    "check_A1",
    "BalancedTensorSpace",
    "btensor",
    "plain",
    "LeftBialgebroid",
    "RightBialgebroid",
    "AxiomFailed",
    "check_axiom",
    "derive_counit",
    "derive_right_counit",
    "check_counit",
    "check_right_counit",
    "co_opposite",
    "to_opposite",
    "MultiplierBialgebroid",
    "NotRegular",
    "check_regular",
    "derive_antipode",
    "derive_counits",
    "verify_antipode",
    "check_galois_inverses",
    "check_antipode_aux",
    "check_antipode_comult",
    "symmetries",
    "transport_counits",
    "co_bialgebroid",
    "op_bialgebroid",
    "StarStructure",
    "check_star",
    "unitality_report",
    "certify",
    "parse_category",
    "parse_groupoid",
    "function_algebroid",
    "convolution_algebroid",
    "function_star",
    "convolution_star",
    "tensor_algebroid",
    "crossed_product_algebroid",
    "ActionData",
    "make_fin_hopf",
    "cyclic_group",
    "pair_groupoid",
    "cyclic_group_groupoid",
    "one_point",
    "monoid_category",
    "instance_to_json",
    "instance_from_json",
    "load_instance",
]
