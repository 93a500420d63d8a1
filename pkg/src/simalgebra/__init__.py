"""Similarity and dissimilarity measures as first-class objects.

Build measures, derive equivalent and dual measures through monotone maps,
carry their transitivity operators along, and brute-force check every
defining property over finite samples.
"""

from .errors import (
    DirectionError,
    DomainMismatchError,
    IntervalError,
    KindMismatchError,
    SampleTooLargeError,
    SimAlgebraError,
    SpecParseError,
    TransformationError,
    UnknownNameError,
)
from .measures import (
    DEFAULT_TOL,
    DomainSample,
    Interval,
    Kind,
    Measure,
    PairPreorder,
    induced_preorder,
    make_measure,
    parse_domain,
    real_grid,
)
from .operators import (
    AxiomReport,
    Restrictiveness,
    TransitivityOperator,
    builtin_operator,
    check_operator_axioms,
    compare_restrictiveness,
    parse_operator,
)
from .transforms import (
    Direction,
    DualTriple,
    ScalarMap,
    apply_equivalence,
    conjugate_operator,
    dualize_measure,
    is_involutive,
    make_general_transformation,
    make_unit_transformation,
    parse_map,
    transfer_operator,
)
from .verify import (
    ComplementMap,
    FullReport,
    PropertyReport,
    compute_complements,
    full_report,
    verify_boundedness_and_closedness,
    verify_equivalence,
    verify_reflexivity,
    verify_strong_reflexivity,
    verify_symmetry,
    verify_transitivity,
)

__version__ = "0.1.0"
