"""Exact-arithmetic toolkit for radial-subalgebra identities over free
group algebras: reduced-word combinatorics, sparse rational tensor
algebra, conditional expectations, conjugacy-equation solvers, and
series diagnostics, all over Fraction coefficients."""

from .words import (
    CancellationProfile,
    DEFAULT_GUARD_LIMIT,
    InvalidLetterError,
    ShapeMismatchError,
    SizeGuardError,
    Word,
    cancellation_profile,
    concat,
    concat_no_cancel,
    enumerate_words,
    inverse,
    parse_word,
    reduce,
    reduce_letters,
    sphere_size,
)
from .algebra import (
    AlgebraElement,
    TensorWord,
    add,
    adjoint,
    diagonal_tensor,
    element_from_json,
    element_to_json,
    identity_element,
    inner,
    multiply,
    norm2_squared,
    parse_tensor,
    simple_tensor,
    tensor_element,
    trace,
    word_element,
    zero_element,
)
from .radial import (
    RadialCoeffs,
    RecurrenceReport,
    cond_exp,
    radial_basis_element,
    radial_norm_squared,
    radial_to_element,
    simple_tensor_nonvanishing,
    verify_recurrence,
    verify_recurrence_range,
)
from .conjugacy import (
    CertificationSweep,
    ConjugacyProblem,
    MODE_GENERAL,
    MODE_NO_CANCEL,
    SolutionReport,
    count_solutions_per_length,
    solve_brute,
    solve_structural,
)
from .series import (
    CancellationTable,
    DepthInvarianceReport,
    SeriesReport,
    SeriesRow,
    ShortFactorReport,
    cancellation_table,
    interaction_horizon,
    radial_pair_product,
    rows_to_csv,
    rows_to_json,
    series_partial_sums,
    series_term,
    short_factor_report,
    term_bound,
    verify_depth_invariance,
    verify_table_reconstruction,
)

__version__ = "0.1.0"
