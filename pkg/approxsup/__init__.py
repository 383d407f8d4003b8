#!/usr/bin/env python

# Copyright (c) approxsup developers.
# Distributed under the terms of the Modified BSD License.

from ._version import __version__
from .asymptotics import (
    AsymptoticProfile,
    dominant_exponent,
    fit_growth,
    flatness_exponent,
    poly_bound_check,
    read_samples_csv,
)
from .balanced import BalancedPlan, balanced_witnesses
from .errors import (
    ApproxSupError,
    AsymmetryError,
    DataError,
    DegenerateError,
    DeltaError,
    DimensionError,
    DomainError,
    EmptyError,
    FormError,
    GridError,
    HorizonError,
    HypothesisError,
    InequalityError,
    NegativeError,
    OscError,
    RegimeError,
    SingularError,
    SumFileError,
    WindowError,
)
from .indep import SamplePlan, equivalence_constant, evaluation_matrix, find_sample_points
from .options import Options, get_options, set_options
from .oracle import OracleResult, brute_sup, brute_sup_unbounded
from .oscillatory import (
    OscCertificate,
    certify_osc,
    cross_term,
    gram_form,
    logpoly_sup,
    moment_integral,
    oscillation_threshold,
    p_transform,
)
from .serialization import format_sumfile, parse_sumfile, read_sumfile, write_sumfile
from .supremum import WitnessCertificate, approx_sup, nonneg_single_witness, witness_set
from .termalg import (
    DomainSpec,
    ExponentTriple,
    IdentityUnit,
    PreparedSum,
    RationalTailUnit,
    TabulatedUnit,
    Term,
    evaluate,
    make_sum,
    normalize,
)
from .unbalanced import NegRegimeCertificate, certify_neg, delta_threshold, tail_envelope
