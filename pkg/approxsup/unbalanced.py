"""Estimate of sums with only decaying terms (beta < 0) on ``y > N``.

For such a sum h, the values at ``2N d_j`` (d_j sample points in (1, 2))
control h on the whole half-line::

    |h(y)| <= T * (2N)**A * y**(-A) * max_j |h(2N d_j)|      (y > N)

"""
import logging
import math
from fractions import Fraction

import numpy as np
from traitlets import Enum, Float, Instance, List
from traittypes import Array

from .base import FrozenTraits
from .errors import DeltaError, DomainError, FormError, RegimeError
from .indep import SamplePlan, find_sample_points
from .termalg import ExponentTriple, as_triple

logger = logging.getLogger(__name__)

DECAY_DENOMINATOR = 64


class NegRegimeCertificate(FrozenTraits):
    """Certificate of the decaying-regime estimate of a prepared sum.

    ``inverse_norm`` is reported for diagnostics only; ``total_constant``
    does not depend on it.

    """

    triples = List(read_only=True, help="exponent triples closed under lowering gamma")
    lower = Float(read_only=True, help="N")
    witnesses = Array(read_only=True, dtype=float, help="witness points 2N d_j")
    decay = Instance(Fraction, read_only=True, help="decay exponent A")
    envelope = Float(read_only=True, help="D = max sup_{z>1/2} z**(beta+A) |log z|**gamma")
    delta_threshold = Float(read_only=True, help="largest admissible unit deviation")
    equivalence_constant = Float(read_only=True, help="C of the sample plan")
    inverse_norm = Float(
        read_only=True, help="l1-induced norm of the inverse rescaling map (diagnostic only)"
    )
    perturbation = Float(read_only=True, help="rho, relative weight of unit deviations")
    tail_constant = Float(read_only=True, help="T in |h(y)| <= T (2N/y)**A max |h(w_j)|")
    total_constant = Float(read_only=True, help="sup_{y>N} |h| <= total * max |h(w_j)|")
    plan = Instance(SamplePlan, read_only=True, help="sample plan on (1, 2)")
    confidence = Enum(["exact", "sampled"], read_only=True, help="provenance of constants")

    def tail_factor(self, y):
        """Factor ``T * (2N / y)**A`` bounding ``|h(y)| / max_j |h(w_j)|``."""
        a = float(self.decay)
        return self.tail_constant * (2.0 * self.lower / np.asarray(y, dtype=float)) ** a

    def score(self, h):
        """``max_j |h(w_j)|``."""
        return float(np.max(np.abs(h(self.witnesses))))

    def _repr_keys(self):
        yield "lower"
        yield "decay"
        yield "total_constant"
        yield "confidence"

    def _dict_keys(self):
        yield "triples"
        yield "lower"
        yield "witnesses"
        yield "decay"
        yield "envelope"
        yield "delta_threshold"
        yield "equivalence_constant"
        yield "inverse_norm"
        yield "perturbation"
        yield "tail_constant"
        yield "total_constant"
        yield "confidence"


def pad_triples(triples):
    """Close a set of triples under ``(alpha, beta, gamma) -> (alpha, beta, gamma - 1)``."""
    padded = set()
    for t in map(as_triple, triples):
        for gamma in range(t.gamma + 1):
            padded.add(ExponentTriple(t.alpha, t.beta, gamma))
    return sorted(padded, key=lambda t: t.sort_key)


def _envelope(s, gamma):
    # sup over z > 1/2 of z**s |log z|**gamma, s < 0
    at_half = 2.0 ** (-s) * math.log(2.0) ** gamma
    if gamma == 0:
        return at_half
    u_star = gamma / -s
    return max(at_half, math.exp(s * u_star) * u_star**gamma)


def tail_envelope(triples):
    """Decay exponent A and envelope constant D of a set of triples.

    A is ``min(-beta) / 2`` truncated to a multiple of 1/64 (kept positive),
    so that ``-A > beta`` for every triple. D is the largest value of
    ``sup_{z > 1/2} z**(beta + A) * |log z|**gamma`` over the triples.

    Returns
    -------
    decay : Fraction
    envelope : float

    """
    triples = [as_triple(t) for t in triples]
    if not triples:
        raise ValueError("at least one exponent triple is required")
    if any(t.beta >= 0 for t in triples):
        raise RegimeError("tail envelope requires beta < 0 for every triple")

    half = min(-t.beta for t in triples) / 2
    decay = Fraction(math.floor(half * DECAY_DENOMINATOR), DECAY_DENOMINATOR)
    if decay <= 0:
        decay = half

    envelope = max(_envelope(float(t.beta + decay), t.gamma) for t in triples)

    return decay, envelope


def delta_threshold(equivalence_constant, envelope):
    """Largest admissible unit deviation ``1 / (2 C D)``."""
    if not equivalence_constant >= 1:
        raise ValueError(f"equivalence constant must be >= 1, found {equivalence_constant}")
    if not envelope > 0:
        raise ValueError(f"envelope constant must be > 0, found {envelope}")
    return 1.0 / (2.0 * equivalence_constant * envelope)


def _inverse_row_max(gamma, gamma_max, log_scale):
    return max(math.comb(m, gamma) * log_scale ** (m - gamma) for m in range(gamma, gamma_max + 1))


def certify_neg(h, lower=None):
    """Build the decaying-regime certificate of a prepared sum.

    Parameters
    ----------
    h : :class:`~approxsup.termalg.PreparedSum`
        Sum whose terms all have beta < 0.
    lower : float, optional
        N > 1 (default: lower boundary of the domain of ``h``).

    Returns
    -------
    certificate : :class:`NegRegimeCertificate`

    Raises
    ------
    RegimeError
        If some term has beta >= 0.
    DeltaError
        If a unit is too far from 1 at this N.

    """
    terms = list(h.terms)
    if any(t.exponent.beta >= 0 for t in terms):
        raise RegimeError("decaying-regime estimate requires beta < 0 for every term")

    if lower is None:
        if h.domain is None:
            raise DomainError("lower boundary N is required")
        lower = h.domain.lower
    lower = float(lower)
    if not lower > 1:
        raise DomainError(f"N must be > 1, found {lower}")

    triples = [t.exponent for t in terms]
    if len(set(triples)) != len(triples):
        raise FormError("terms sharing an exponent triple must carry the same unit")

    padded = pad_triples(triples)
    plan = find_sample_points(padded)
    constant = plan.equivalence_constant
    decay, envelope = tail_envelope(padded)
    threshold = delta_threshold(constant, envelope)

    gamma_max = {}
    for t in padded:
        key = (t.alpha, t.beta)
        gamma_max[key] = max(gamma_max.get(key, 0), t.gamma)

    b = max(t.gamma for t in padded)
    scale = 2.0 * lower
    log_scale = math.log(scale)
    log_lower = math.log(lower)

    inverse_norm = max(
        scale ** (-float(beta)) * (1.0 + log_scale) ** g for (_, beta), g in gamma_max.items()
    )

    confidence = "exact"
    weighted = 0.0

    for term in terms:
        unit = term.unit
        if unit.kind == "identity":
            continue

        deviation = unit.delta_bound(lower, b)
        if not deviation < threshold:
            logger.warning("unit deviation %g exceeds 1/(2CD) = %g", deviation, threshold)
            raise DeltaError("delta_t < 1/(2 C D)", deviation, threshold)

        if unit.confidence == "sampled":
            confidence = "sampled"
            excess = unit.sampled_excess(lower)
            if not excess < unit.delta:
                raise DeltaError("sampled |f - 1| (log y)**(2 logpow) < delta", excess, unit.delta)

        e = term.exponent
        beta = float(e.beta)
        row_max = scale ** (-beta) * _inverse_row_max(
            e.gamma, gamma_max[(e.alpha, e.beta)], log_scale
        )
        reach = 2.0 ** (-float(decay) - beta) * scale**beta * log_lower ** (e.gamma - 2 * b)
        weighted += deviation * row_max * reach

    rho = constant * weighted
    if not rho < 0.5:
        logger.warning("unit deviations too large at N=%g (rho=%g)", lower, rho)
        raise DeltaError("rho = C sum_t delta_t m_t R_t < 1/2", rho, 0.5)

    tail_constant = (constant * envelope + rho) / (1.0 - rho)
    total_constant = 2.0 ** float(decay) * tail_constant

    logger.debug(
        "decaying regime: N=%g A=%s D=%g C=%g rho=%g total=%g",
        lower,
        decay,
        envelope,
        constant,
        rho,
        total_constant,
    )

    return NegRegimeCertificate(
        triples=padded,
        lower=lower,
        witnesses=scale * plan.points,
        decay=decay,
        envelope=envelope,
        delta_threshold=threshold,
        equivalence_constant=constant,
        inverse_norm=inverse_norm,
        perturbation=rho,
        tail_constant=tail_constant,
        total_constant=total_constant,
        plan=plan,
        confidence=confidence,
    )
