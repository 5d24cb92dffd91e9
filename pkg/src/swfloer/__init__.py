"""Exact algebra for Floer chain complexes built from finite flow data.

Modules
-------
series          truncated power and Laurent series with exact coefficients
graded_complex  graded complexes over Z, Q, Z[[t]], Q[[t]], Q((t)) and their homology
datum           the input data model, validator and boundary assembly
spectral        spectral sequence of the lift filtration
direct_sum      block-diagonal data and the direct-sum formula
novikov         series complexes, t = 0 evaluation, Q((t)) homology
gluing          relative invariants, pairing and gluing check
oracle          independent verifiers and the seeded data generator
cli             the ``swfloer`` command
"""

from .datum import (
    GAMMA_LAURENT,
    NONTORSION,
    TORSION_NOVIKOV,
    CriticalPoint,
    FloerDatum,
    FlowClass,
    ValidationFailed,
    ValidationReport,
    Violation,
    assemble_boundary,
    load_datum,
    loads_datum,
    restrict_min_level,
    validate,
)
from .direct_sum import BlockDecomposition, NotBlockDiagonal, decompose, direct_sum_homology
from .gluing import (
    ClosedInvariantTable,
    MismatchedSupport,
    NotACycle,
    RelativeInvariant,
    assemble_relative,
    builtin_example_t2d2,
    glue_check,
    pair,
)
from .graded_complex import (
    GradedComplex,
    HomologyGroup,
    InsufficientTruncation,
    NotAComplex,
    dvr_smith_form,
    homology,
    smith_normal_form,
)
from .novikov import NovikovComplex, build_novikov, evaluate_t0, hf_gamma, t_torsion
from .oracle import GenerationFailed, GeneratorConfig, brute_e_infinity, brute_homology, generate
from .series import LaurentSeries, PowerSeries, ZeroInverse, power_eval_t0, series_add, series_inv, series_mul
from .spectral import FilteredComplex, SpectralPage, build_filtered, converge, page

__version__ = "0.1.0"
