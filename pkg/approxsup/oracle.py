"""Brute-force estimates of ``sup |h|``, used to check certificates.

Nothing here depends on the certification modules.

"""
import logging
import math

import numpy as np
from traitlets import Float, Int

from .base import FrozenTraits
from .errors import DomainError, HorizonError, RegimeError
from .options import option_value
from .utils import sup_power_log

logger = logging.getLogger(__name__)

GOLDEN_RATIO = 2.0 / (1.0 + math.sqrt(5.0))

REFINED_BRACKETS = 8
REFINEMENT_ITERATIONS = 40
ENDPOINT_MARGIN = 1e-9
MAX_DOUBLINGS = 8
TAIL_RATIO = 1e-3


class OracleResult(FrozenTraits):
    sup_estimate = Float(read_only=True, help="largest |h| found")
    argmax = Float(read_only=True, help="point where it was found")
    grid_points = Int(read_only=True, help="size of the initial grid")
    refinement_depth = Int(read_only=True, help="golden-section iterations per bracket")
    horizon = Float(None, allow_none=True, read_only=True, help="right end used for y > N")

    def _repr_keys(self):
        yield "sup_estimate"
        yield "argmax"
        if self.horizon is not None:
            yield "horizon"

    def _dict_keys(self):
        yield "sup_estimate"
        yield "argmax"
        yield "grid_points"
        yield "refinement_depth"
        yield "horizon"


def _golden_max(func, lo, hi, iterations):
    """Maximize a unimodal function on [lo, hi] by golden-section search."""
    x1 = hi - GOLDEN_RATIO * (hi - lo)
    x2 = lo + GOLDEN_RATIO * (hi - lo)
    f1 = func(x1)
    f2 = func(x2)

    for _ in range(iterations):
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN_RATIO * (hi - lo)
            f1 = func(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN_RATIO * (hi - lo)
            f2 = func(x2)

    if f1 >= f2:
        return x1, f1
    return x2, f2


def _local_maxima(values):
    n = len(values)
    left = np.concatenate([[-np.inf], values[:-1]])
    right = np.concatenate([values[1:], [-np.inf]])
    candidates = np.nonzero((values >= left) & (values >= right))[0]
    order = np.argsort(-values[candidates], kind="stable")
    return [int(i) for i in candidates[order] if 0 <= i < n]


def brute_sup(h, interval, budget=None):
    """Estimate ``sup |h|`` on an interval.

    A log-uniform grid of ``budget`` points (endpoints pulled inside by a
    relative 1e-9) is refined by golden-section search in log(y) around the
    8 largest local maxima.

    Parameters
    ----------
    h : :class:`~approxsup.termalg.PreparedSum`
        The sum to sample.
    interval : tuple of float
        Finite (lo, hi) inside the evaluation interval of ``h``.
    budget : int, optional
        Grid size, at least 64 (default: option ``budget``).

    """
    lo, hi = (float(v) for v in interval)
    dom_lo, dom_hi = h.interval

    if not (lo < hi and math.isfinite(hi)):
        raise DomainError(f"invalid interval {interval}")
    if lo < dom_lo or hi > dom_hi:
        raise DomainError(f"interval {interval} is outside ({dom_lo}, {dom_hi})")

    budget = option_value("budget", budget)
    if budget < 64:
        raise ValueError(f"budget must be >= 64, found {budget}")

    log_lo = math.log(lo * (1.0 + ENDPOINT_MARGIN))
    log_hi = math.log(hi * (1.0 - ENDPOINT_MARGIN))
    log_grid = np.linspace(log_lo, log_hi, budget)
    values = np.abs(h(np.exp(log_grid)))

    best = int(np.argmax(values))
    best_log_y = log_grid[best]
    best_square = float(values[best]) ** 2

    def squared_modulus(log_y):
        value = complex(h(math.exp(log_y)))
        return value.real**2 + value.imag**2

    for i in _local_maxima(values)[:REFINED_BRACKETS]:
        bracket_lo = log_grid[max(i - 1, 0)]
        bracket_hi = log_grid[min(i + 1, budget - 1)]
        log_y, square = _golden_max(squared_modulus, bracket_lo, bracket_hi, REFINEMENT_ITERATIONS)
        if square > best_square:
            best_log_y, best_square = log_y, square

    return OracleResult(
        sup_estimate=math.sqrt(best_square),
        argmax=math.exp(best_log_y),
        grid_points=budget,
        refinement_depth=REFINEMENT_ITERATIONS,
    )


def tail_envelope_bound(h, horizon):
    """Upper bound of ``|h(y)|`` over ``y >= horizon`` from per-term bounds."""
    total = 0.0
    for term in h.terms:
        e = term.exponent
        total += (
            abs(term.coeff)
            * term.unit.magnitude_bound(horizon)
            * sup_power_log(float(e.beta), e.gamma, horizon)
        )
    return total


def brute_sup_unbounded(h, lower, horizon=None, budget=None):
    """Estimate ``sup_{y > N} |h|`` for a sum of decaying terms.

    The search interval (N, horizon) is doubled until the tail envelope
    beyond the horizon is at most 1e-3 times the estimate.

    Parameters
    ----------
    h : :class:`~approxsup.termalg.PreparedSum`
        Sum with beta < 0 for every term.
    lower : float
        N.
    horizon : float, optional
        Initial right end, at least ``1000 * N`` (default: ``1000 * N``).
    budget : int, optional
        Grid size (default: option ``budget``).

    Raises
    ------
    HorizonError
        If the tail is still too large after 8 doublings.

    """
    if any(term.exponent.beta >= 0 for term in h.terms):
        raise RegimeError("unbounded search requires beta < 0 for every term")

    lower = float(lower)
    if horizon is None:
        horizon = 1e3 * lower
    if horizon < 1e3 * lower:
        raise ValueError(f"horizon must be >= 1000 * N, found {horizon}")

    for _ in range(MAX_DOUBLINGS + 1):
        result = brute_sup(h, (lower, horizon), budget=budget)
        envelope = tail_envelope_bound(h, horizon)
        if envelope <= TAIL_RATIO * result.sup_estimate:
            return OracleResult(
                sup_estimate=result.sup_estimate,
                argmax=result.argmax,
                grid_points=result.grid_points,
                refinement_depth=result.refinement_depth,
                horizon=horizon,
            )
        logger.debug("tail envelope %g too large at horizon %g", envelope, horizon)
        horizon *= 2.0

    raise HorizonError(
        f"tail envelope {envelope:g} still exceeds {TAIL_RATIO:g} * {result.sup_estimate:g} "
        f"at horizon {horizon / 2.0:g}"
    )
