"""Sample points making exponent monomials numerically independent."""
import logging

import numpy as np
from traitlets import Float, List
from traittypes import Array

from .base import FrozenTraits
from .errors import DegenerateError, DimensionError, DomainError, SingularError
from .options import option_value
from .termalg import canonical_triples
from .utils import chebyshev_points, get_rng

logger = logging.getLogger(__name__)


class SamplePlan(FrozenTraits):
    """Sample points for a set of exponent triples together with the
    constant of the norm equivalence ``||c||_1 <= C * max_j |g_c(d_j)|``.

    """

    triples = List(read_only=True, help="exponent triples in canonical order")
    points = Array(read_only=True, dtype=float, help="sample points d_j, increasing")
    matrix_condition = Float(read_only=True, help="smallest singular value of the matrix")
    equivalence_constant = Float(read_only=True, help="C such that ||c||_1 <= C max |g_c(d_j)|")

    def _validate_record(self):
        if len(self.points) != len(self.triples):
            raise DimensionError("number of points must match the number of triples")

    def _repr_keys(self):
        yield "points"
        yield "equivalence_constant"

    def _dict_keys(self):
        yield "triples"
        yield "points"
        yield "matrix_condition"
        yield "equivalence_constant"


def evaluation_matrix(triples, points):
    """Matrix ``M[j, t] = exp(i*alpha_t*log d_j) * d_j**beta_t * log(d_j)**gamma_t``.

    Columns follow the canonical order of the triples.

    Parameters
    ----------
    triples : iterable of :class:`~approxsup.termalg.ExponentTriple` or 3-tuples
        Distinct exponent triples.
    points : array-like
        Distinct points, all > 1.

    """
    triples = canonical_triples(triples)
    points = np.asarray(points, dtype=float)

    if points.ndim != 1 or len(points) != len(triples):
        raise DimensionError(f"expected {len(triples)} points, found {points.size}")
    if np.any(points <= 1):
        raise DomainError("sample points must be > 1")
    if len(np.unique(points)) != len(points):
        raise DomainError("sample points must be distinct")

    log_d = np.log(points)[:, None]
    alpha = np.array([t.alpha for t in triples])
    beta = np.array([float(t.beta) for t in triples])
    gamma = np.array([t.gamma for t in triples])

    return np.exp((beta + 1j * alpha) * log_d) * log_d**gamma


def _smallest_singular_value(matrix):
    return float(np.linalg.svd(matrix, compute_uv=False).min())


def equivalence_constant(matrix):
    """Constant C with ``||c||_1 <= C * ||M c||_inf`` for a square matrix M.

    Returns ``k / sigma_min(M)`` (k the size of M), which is valid because
    ``||c||_1 <= sqrt(k) ||c||_2`` and ``||M c||_2 <= sqrt(k) ||M c||_inf``.

    """
    matrix = np.atleast_2d(np.asarray(matrix))
    k = matrix.shape[1]
    singular_values = np.linalg.svd(matrix, compute_uv=False)
    sigma_min = float(singular_values.min())

    if sigma_min <= np.finfo(float).eps * float(singular_values.max()) * k:
        raise SingularError(f"matrix is singular at working precision (sigma_min={sigma_min})")

    return k / sigma_min


def _jitter(rng, seed_points, lo, hi):
    spacing = np.diff(np.concatenate([[lo], seed_points, [hi]]))
    half_gap = 0.5 * np.minimum(spacing[:-1], spacing[1:])
    trial = seed_points + rng.uniform(-1.0, 1.0, seed_points.size) * half_gap
    margin = 1e-9 * (hi - lo)
    return np.sort(np.clip(trial, lo + margin, hi - margin))


def find_sample_points(triples, interval=None, trials=None, seed=None, tol=None):
    """Pick points in an interval maximizing the smallest singular value of
    the evaluation matrix.

    Candidates are the Chebyshev nodes of the interval followed by
    ``trials - 1`` random perturbations of them. The best candidate wins;
    ties are broken by the lexicographically smallest point list.

    Parameters
    ----------
    triples : iterable
        Exponent triples (or 3-tuples).
    interval : tuple of float, optional
        Interval (lo, hi) with 1 <= lo < hi (default: (1, 2)).
    trials : int, optional
        Number of candidate point sets (default: option ``trials``).
    seed : int, optional
        Random seed (default: option ``seed``).
    tol : float, optional
        Smallest acceptable singular value (default: option ``degeneracy_tol``).

    Returns
    -------
    plan : :class:`SamplePlan`

    """
    triples = canonical_triples(triples)
    if not triples:
        raise DimensionError("at least one exponent triple is required")

    if interval is None:
        interval = (1.0, option_value("sample_interval_upper"))
    lo, hi = (float(v) for v in interval)
    if not 1 <= lo < hi:
        raise DomainError(f"sampling interval must satisfy 1 <= lo < hi, found {interval}")

    trials = option_value("trials", trials)
    tol = option_value("degeneracy_tol", tol)
    rng = get_rng(seed)

    k = len(triples)
    seed_points = chebyshev_points(k, lo, hi)

    best_points = None
    best_sigma = -1.0

    for i in range(trials):
        points = seed_points if i == 0 else _jitter(rng, seed_points, lo, hi)
        if np.any(points <= 1) or len(np.unique(points)) != k:
            continue
        sigma = _smallest_singular_value(evaluation_matrix(triples, points))
        if sigma > best_sigma or (sigma == best_sigma and tuple(points) < tuple(best_points)):
            best_sigma = sigma
            best_points = points

    if best_points is None or best_sigma < tol:
        logger.warning(
            "no independent sample points found for %d triples (sigma_min=%g)", k, best_sigma
        )
        raise DegenerateError(
            f"evaluation matrix is numerically singular on {interval} "
            f"(sigma_min={best_sigma:g} < {tol:g})"
        )

    constant = equivalence_constant(evaluation_matrix(triples, best_points))
    logger.debug("sample points %s, sigma_min=%g, C=%g", best_points, best_sigma, constant)

    return SamplePlan(
        triples=triples,
        points=best_points,
        matrix_condition=best_sigma,
        equivalence_constant=constant,
    )
