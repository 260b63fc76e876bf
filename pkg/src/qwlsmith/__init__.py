"""Smith normal form decisions for quasi weakly linear polynomial matrices."""

from .groebner import (
    GroebnerBasis,
    GroebnerLimitExceeded,
    Ideal,
    buchberger,
    eliminate,
    gcd,
    gcd_many,
    groebner_basis,
    is_unit_ideal,
    lcm,
    reduce,
    reduce_basis,
)
from .expr_io import parse_poly, print_poly, read_matrix, write_matrix
from .poly_core import (
    GREVLEX,
    LEX,
    ContextMismatch,
    MonomialOrder,
    NotDivisible,
    Polynomial,
    VariableContext,
    divide_exact,
)
from .polymatrix import (
    MinorReport,
    PolyMatrix,
    RankExceeded,
    determinant,
    is_unimodular,
    is_zlp,
    minor_report,
    minors,
    normal_rank,
)
from .smith import (
    FactorizationWitness,
    QwlShape,
    SmithDecision,
    Verdict,
    decide,
    detect_qwl,
    phi,
    phi_inverse,
    smith_form,
    verify_witness,
)

__version__ = "0.1.0"
