"""Product sets in finite fields as additive bases: certified and brute-forced."""

from .errors import (
    ConstructionViolation,
    FieldMismatchError,
    LemmaViolation,
    PreconditionError,
    TheoremViolation,
    Violation,
)
from .field import FieldElement, FieldSpec, find_primitive_element, make_field
from .subsets import FqSubset, n_fold_product_sum, parse_set, productset, sumset
from .theorems import (
    Certificate,
    minimal_basis_order,
    verify_antisym8,
    verify_main16,
    verify_pair,
    verify_sym8,
    verify_twoq8,
)

__version__ = "0.1.0"
