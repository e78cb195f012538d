"""Exact engine for two-parameter deformed su(2)/su(3) Hopf structures.

The package represents scalars, commutative (Poisson) elements and
noncommutative words with exact rational data, normalizes by term
rewriting, and verifies brackets, coproducts, casimirs, limits and Serre
relations by canonical-form equality.  See README.md for a tour.
"""

from .algspec import AlgebraSpec, DiffRule, GeneratorInfo, LieBialgebraData, validate_spec
from .bialgebra import cocycle_check, cojacobi_check, lie_jacobi_check
from .catalog import catalog_load, catalog_names, catalog_source
from .errors import (
    FuelExhausted,
    IncompleteTable,
    LegMismatch,
    NegativeHbarValuation,
    NegativeZValuation,
    NonLinearEImage,
    NonLinearExpArgument,
    ParseError,
    UnknownCatalogEntry,
    UnknownGenerator,
)
from .parser import eval_expression, parse_spec, render_spec
from .poisson import (
    PoissonElem,
    TensorElem,
    apply_coproduct,
    apply_coproduct_to_leg,
    apply_morphism,
    counit_contract,
    first_order_delta,
    p_bracket,
    p_z0_limit,
    poisson_gen,
    render_poisson,
    render_tensor,
    tensor_bracket,
    tensor_z0_limit,
)
from .quantum import (
    DEFAULT_FUEL,
    QTensorElem,
    QuantumElem,
    gen_quantum,
    hbar_limit_bracket,
    hbar_limit_elem,
    normal_order,
    q_anticommutator,
    q_apply_coproduct,
    q_commutator,
    q_mul,
    q_z0_limit,
    qt_commutator,
    qt_from_raw,
    qt_hbar_limit,
    qt_mul,
    render_quantum,
    rescale_map,
    subst_hbar_one,
)
from .ring import CoeffElem, PolyElem, RingKey, render_coeff, render_poly
from .verify import CHECK_KINDS, AlgebraContext, CheckResult, Report, run_check, run_suite

__version__ = "0.1.0"
