"""Exact symbolic engine and verification harness for algebroids of
simplicial infinitesimal spaces.

Layers, bottom up: ``spaces`` (truncated polynomial algebras and their
monomial bases), ``morphisms`` (maps between spaces and pullbacks),
``catalog`` (named standard maps and rank-certified diagrams), ``models``
(three concrete instantiations and the star action), ``ops`` (limit
solving, strong differences, the fiber bracket), ``sections`` (polynomial
fields over a symbolic base point), ``verify``/``suites`` (the seeded
property harness), ``cli`` (the ``weilgroid`` command).

All arithmetic is exact: coefficients are ``fractions.Fraction`` or
polynomials over them, and every check is an equality, never a tolerance.
"""

from .catalog import broken_diagram, get_diagram, get_map, load_catalog, standard_maps
from .errors import (
    BadSlot,
    BaseIncompatible,
    ConfigInvalid,
    DegreeOverflow,
    DimensionMismatch,
    DomainMismatch,
    Incompatible,
    MixedSpace,
    NonNilpotentComponent,
    NonzeroConstant,
    NotInKernel,
    NotPerceivedLimit,
    PatternViolation,
    SpaceMismatch,
    WeilgroidError,
    WrongModel,
)
from .models import (
    FORMAL_SPACE,
    MATRIX_GROUP,
    PAIR_GROUPOID,
    AlgebroidElement,
    Model,
    TangentFamily,
    ad_conjugation,
    anchor,
    apply,
    compose_pointwise,
    const_family,
    element_from_json,
    element_to_json,
    family_anchor,
    family_at_zero,
    family_from_json,
    family_pi,
    family_to_json,
    formal_space,
    inner,
    is_anchor_zero,
    is_inner_element,
    matrix_group,
    matrix_inverse,
    model_from_json,
    model_to_json,
    pair_groupoid,
    star,
    star_family,
    zero,
    zero_family,
)
from .morphisms import (
    SimpMorphism,
    compose,
    identity,
    lift_element,
    make_morphism,
    oplus,
    oplus_inclusion,
    parse_morphism,
    permutation,
    product,
    product_morphism,
    pullback,
    scale_slot_morphism,
)
from .ops import (
    LimitCertificate,
    add,
    bracket,
    check_perceived_limit,
    circledast,
    euclid_derivative,
    negate,
    scalar,
    slot_scale,
    solve_limit,
    strong_diff,
    strong_diff_slot,
)
from .sections import (
    Poly,
    ScalarField,
    Section,
    circledcirc,
    eval_section,
    is_zero_section,
    leibniz_residual,
    lie_derivative,
    parse_poly,
    scale_section,
    section_add,
    section_apply,
    section_bracket,
    section_from_vector,
    section_negate,
    sections_from_json,
    var_base,
    zero_section,
)
from .spaces import (
    D,
    POINT,
    UNIT,
    Monomial,
    SimplicialSpace,
    WeilElement,
    basis,
    d_n,
    d_power,
    dimension,
    format_space,
    oplus_space,
    parse_monomial,
    parse_space,
    product_space,
    weil_from_json,
    weil_to_json,
)
from .verify import (
    DEFAULT_MODELS,
    Property,
    PropertyFailure,
    PropertyRecord,
    SuiteConfig,
    VerificationReport,
    certify_diagrams,
    run_suite,
    subseed,
)

__version__ = "0.1.0"
