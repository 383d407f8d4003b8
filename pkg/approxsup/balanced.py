"""Balanced cells: uniform witness grids on ``lower < y < upper <= kappa * lower``."""
import logging

import numpy as np
from traitlets import Enum, Float, Int
from traittypes import Array

from .base import FrozenTraits
from .errors import DegenerateError, DomainError, GridError
from .options import option_value
from .oracle import brute_sup
from .utils import get_rng, random_unit_vectors, sign_changes

logger = logging.getLogger(__name__)

ZERO_COUNT_GRID = 4096


class BalancedPlan(FrozenTraits):
    """Uniform grid with ``sup |h| <= M * max_j |h(grid_j)|`` on a balanced cell."""

    grid_size = Int(read_only=True, help="N, number of subintervals")
    grid = Array(read_only=True, dtype=float, help="points lower + (j/N) (upper - lower)")
    ratio_bound = Float(read_only=True, help="M")
    zero_bound = Int(read_only=True, help="bound on the number of sign changes")
    provenance = Enum(["asserted", "sampled"], read_only=True, help="origin of the zero bound")

    def _repr_keys(self):
        yield "grid_size"
        yield "ratio_bound"
        yield "provenance"

    def _dict_keys(self):
        yield "grid_size"
        yield "grid"
        yield "ratio_bound"
        yield "zero_bound"
        yield "provenance"


def _balanced_interval(h):
    if h.domain is None or not h.domain.balanced:
        raise DomainError("a balanced cell domain is required")
    return h.domain.lower, h.domain.upper


def _basis_values(h, y):
    log_y = np.log(y)
    unit_sum = h.with_coefficients(np.ones(len(h)))
    return np.column_stack([term.evaluate(y, log_y, h.unit_scale) for term in unit_sum.terms])


def estimate_zero_bound(h, samples=None, seed=None):
    """Sampled bound on the number of sign changes of Re and Im of sums in
    the family of ``h`` (same exponents and units, any coefficients).

    Returns ``1 + max`` of the sign changes counted on a 4096-point grid for
    random unit coefficient vectors.

    """
    lower, upper = _balanced_interval(h)
    samples = option_value("zero_count_samples", samples)

    y = np.linspace(lower, upper, ZERO_COUNT_GRID + 2)[1:-1]
    basis = _basis_values(h, y)
    vectors = random_unit_vectors(get_rng(seed), samples, len(h))
    values = basis @ vectors.T

    changes = max(max(sign_changes(values.real.T)), max(sign_changes(values.imag.T)))
    return 1 + changes


def check_independence(h, tol=None):
    """Raise DegenerateError if the terms of ``h`` are numerically dependent on its cell."""
    lower, upper = _balanced_interval(h)
    tol = option_value("independence_tol", tol)

    k = len(h)
    y = np.linspace(lower, upper, 4 * k + 2)[1:-1]
    basis = _basis_values(h, y)
    basis = basis / np.linalg.norm(basis, axis=0)
    sigma_min = float(np.linalg.svd(basis.conj().T @ basis, compute_uv=False).min())

    if not sigma_min > tol:
        raise DegenerateError(f"terms are numerically dependent (sigma_min={sigma_min:g})")
    return sigma_min


def balanced_witnesses(h, grid_size=None, samples=None, seed=None, budget=None):
    """Uniform witness grid on a balanced cell.

    Parameters
    ----------
    h : :class:`~approxsup.termalg.PreparedSum`
        Sum on a balanced cell.
    grid_size : int, optional
        Number of subintervals N, asserted to exceed the zero count of the
        family. If omitted, N = 1 + the sampled zero bound.
    samples : int, optional
        Number of random coefficient directions used to estimate M
        (default: option ``ratio_samples``).

    Returns
    -------
    plan : :class:`BalancedPlan`

    """
    lower, upper = _balanced_interval(h)
    check_independence(h)

    zero_bound = estimate_zero_bound(h, seed=seed)
    if grid_size is None:
        grid_size = zero_bound + 1
        provenance = "sampled"
    else:
        provenance = "asserted"

    grid_size = int(grid_size)
    if grid_size < 2:
        raise GridError(f"grid size must be >= 2, found {grid_size}")

    grid = lower + (np.arange(1, grid_size) / grid_size) * (upper - lower)

    samples = option_value("ratio_samples", samples)
    directions = [h.coefficients] + list(random_unit_vectors(get_rng(seed), samples, len(h)))

    ratio = 1.0
    for coefficients in directions:
        member = h.with_coefficients(coefficients)
        grid_max = float(np.max(np.abs(member(grid))))
        sup = brute_sup(member, (lower, upper), budget=budget).sup_estimate
        if sup == 0:
            continue
        if grid_max == 0:
            raise GridError("grid misses a nonzero member of the family, increase N")
        ratio = max(ratio, sup / grid_max)

    ratio_bound = option_value("balanced_inflation") * ratio
    logger.debug("balanced grid N=%d, M=%g (%s)", grid_size, ratio_bound, provenance)

    return BalancedPlan(
        grid_size=grid_size,
        grid=grid,
        ratio_bound=ratio_bound,
        zero_bound=zero_bound,
        provenance=provenance,
    )
