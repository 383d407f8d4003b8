"""Certified approximate suprema of prepared sums on a cell.

A prepared sum on an unbalanced cell splits into decaying terms
(beta < 0), oscillatory terms (beta = 0) and growing terms (beta > 0).
Each part gets its own witnesses; the score is the largest (weighted)
witness value and the certificate bounds the true supremum between
``score / lower_constant`` and ``upper_constant * score``.

"""
import logging
import math

import numpy as np
from traitlets import Dict, Enum, Float, List, Unicode
from traittypes import Array

from .balanced import balanced_witnesses
from .base import FrozenTraits
from .errors import DomainError, EmptyError, FormError, NegativeError, WindowError
from .oscillatory import certify_osc, chebyshev_extension, logpoly_sup, pure_osc_bound
from .termalg import DomainSpec, ExponentTriple, Term, normalize
from .unbalanced import certify_neg

logger = logging.getLogger(__name__)

REGIME_ORDER = ("neg", "osc", "pos")
CONFIDENCE_RANK = {"asserted": 0, "sampled": 1, "exact": 2}


def weakest_confidence(levels):
    """Lowest confidence level of a collection (exact > sampled > asserted)."""
    return min(levels, key=CONFIDENCE_RANK.__getitem__)


class WitnessCertificate(FrozenTraits):
    """Witnesses and constants certifying::

        score / lower_constant <= sup |h| <= upper_constant * score

    ``total_constant`` is the larger of the two constants.

    """

    witnesses = Array(read_only=True, dtype=float, help="witness points, increasing")
    regime_tags = List(Unicode(), read_only=True, help="regime of each witness")
    values = Array(read_only=True, dtype=float, help="|regime part| at each witness")
    full_values = Array(read_only=True, dtype=float, help="|h| at each witness")
    osc_component = Float(None, allow_none=True, read_only=True, help="||p(c)||_inf")
    osc_weight = Float(1.0, read_only=True, help="weight of the oscillatory entry")
    score = Float(read_only=True, help="largest weighted witness value")
    attained_by = Unicode(read_only=True, help="regime attaining the score")
    upper_constant = Float(read_only=True, help="sup |h| <= upper_constant * score")
    lower_constant = Float(read_only=True, help="score <= lower_constant * sup |h|")
    total_constant = Float(read_only=True, help="max of the upper and lower constants")
    full_witness_constant = Float(
        None, allow_none=True, read_only=True, help="sup |h| <= constant * max full_values"
    )
    form = Enum(["witness", "norm", "balanced"], read_only=True, help="oscillatory form")
    confidence = Enum(["exact", "sampled", "asserted"], read_only=True, help="weakest provenance")
    hypotheses = List(Dict(), read_only=True, help="checked inequalities lhs > rhs")
    details = Dict(read_only=True, help="constants of each regime")

    def sup_bounds(self):
        """Certified (lower, upper) bounds of ``sup |h|``."""
        return self.score / self.lower_constant, self.upper_constant * self.score

    def _repr_keys(self):
        yield "score"
        yield "total_constant"
        yield "form"
        yield "confidence"

    def _dict_keys(self):
        yield "witnesses"
        yield "regime_tags"
        yield "values"
        yield "full_values"
        yield "osc_component"
        yield "osc_weight"
        yield "score"
        yield "attained_by"
        yield "upper_constant"
        yield "lower_constant"
        yield "total_constant"
        yield "full_witness_constant"
        yield "form"
        yield "confidence"
        yield "hypotheses"
        yield "details"


def mirror_positive(terms, upper):
    """Rewrite growing terms as decaying terms in ``w = a / y``.

    The returned terms ``m`` satisfy ``sum m(w) = conj(sum terms(a / w))``, so
    moduli agree. Frequencies are kept in [0, 2*pi) and units are carried over.

    """
    log_a = math.log(upper)
    mirrored = []
    for term in terms:
        e = term.exponent
        base = np.conj(term.coeff * np.exp(complex(float(e.beta), e.alpha) * log_a))
        for m in range(e.gamma + 1):
            coeff = base * math.comb(e.gamma, m) * log_a ** (e.gamma - m) * (-1) ** m
            mirrored.append(Term(coeff, ExponentTriple(e.alpha, -e.beta, m), term.unit))
    return mirrored


def decompose(h):
    """Split a prepared sum on an unbalanced cell into its three regimes.

    Returns
    -------
    neg : PreparedSum or None
        Terms with beta < 0, on ``y > N``.
    osc : PreparedSum or None
        Terms with beta = 0, on the cell of ``h``.
    pos : PreparedSum or None
        Terms with beta > 0 re-expressed in ``w = a / y`` (see
        :func:`mirror_positive`), on ``w > N``.

    Raises
    ------
    FormError
        If a growing or log-growing term appears on an unbounded cell, or if
        an oscillatory term carries a non-identity unit.

    """
    domain = h.domain
    if domain is None:
        raise DomainError("a cell domain is required")
    if domain.balanced:
        raise FormError("balanced cells have no regime decomposition")

    groups = {regime: [] for regime in REGIME_ORDER}
    for term in h.terms:
        e = term.exponent
        if not domain.bounded and (e.beta > 0 or (e.beta == 0 and e.gamma > 0)):
            raise FormError(
                "fiberwise boundedness violated: term with "
                f"beta={e.beta}, gamma={e.gamma} on an unbounded cell"
            )
        if e.beta == 0 and term.unit.kind != "identity":
            raise FormError("oscillatory terms must carry the identity unit")
        groups[e.regime].append(term)

    half_line = DomainSpec(domain.lower)

    neg = normalize(groups["neg"], half_line) if groups["neg"] else None
    osc = normalize(groups["osc"], domain) if groups["osc"] else None
    pos = None
    if groups["pos"]:
        pos = normalize(mirror_positive(groups["pos"], domain.upper), half_line)

    return neg, osc, pos


class _Checks:
    def __init__(self):
        self.records = []

    def require(self, inequality, lhs, rhs):
        lhs = float(lhs)
        rhs = float(rhs)
        self.records.append({"inequality": inequality, "lhs": lhs, "rhs": rhs})
        if not lhs > rhs:
            logger.warning("%s violated (lhs=%g, rhs=%g)", inequality, lhs, rhs)
            raise WindowError(inequality, lhs, rhs)


def _osc_witness_form(osc, domain):
    """Witness points and sup constant of the oscillatory part, or None
    when the norm form is needed.

    """
    cell_lo, cell_hi = domain.cell
    triples = osc.exponents

    if not domain.bounded:
        coeffs = {}
        for term in osc.terms:
            coeffs[term.exponent.alpha] = coeffs.get(term.exponent.alpha, 0j) + term.coeff
        points, constant = pure_osc_bound(coeffs, domain.lower)
        return points, constant, "exact"

    if all(t.alpha == 0 for t in triples):
        coeffs = np.zeros(osc.max_gamma + 1, dtype=complex)
        for term in osc.terms:
            coeffs[term.exponent.gamma] += term.coeff
        window_lo = cell_lo**0.75 * cell_hi**0.25
        window_hi = cell_lo**0.25 * cell_hi**0.75
        points, lebesgue, _ = logpoly_sup(coeffs, window_lo, window_hi)
        degree = coeffs.size - 1
        confidence = "sampled" if degree >= 2 else "exact"
        return points, lebesgue * chebyshev_extension(degree), confidence

    return None


def witness_set(h):
    """Witnesses and certificate of ``sup |h|`` on an unbalanced cell.

    Parameters
    ----------
    h : :class:`~approxsup.termalg.PreparedSum`
        Prepared sum with an unbalanced cell domain.

    Returns
    -------
    certificate : :class:`WitnessCertificate`

    Raises
    ------
    FormError
        If ``h`` is not in prepared form for its cell.
    WindowError
        If a smallness condition between regimes fails for this cell.
    DeltaError
        If a perturbation unit is too far from 1.

    """
    neg, osc, pos = decompose(h)
    domain = h.domain
    lower = domain.lower
    upper = domain.upper
    checks = _Checks()
    details = {}

    if (neg is not None or pos is not None) and domain.bounded:
        checks.require("a > 4 N**2", upper, 4.0 * lower**2)

    points = []
    entries = {}

    neg_cert = None
    if neg is not None:
        neg_cert = certify_neg(neg, lower)
        values = np.abs(neg(neg_cert.witnesses))
        entries["neg"] = float(values.max())
        points += [(y, "neg", v) for y, v in zip(neg_cert.witnesses, values)]
        details["neg"] = neg_cert.to_dict()

    pos_cert = None
    pos_points = None
    if pos is not None:
        pos_cert = certify_neg(pos, lower)
        values = np.abs(pos(pos_cert.witnesses))
        pos_points = upper / pos_cert.witnesses
        entries["pos"] = float(values.max())
        points += [(y, "pos", v) for y, v in zip(pos_points, values)]
        details["pos"] = pos_cert.to_dict()

    osc_sup_constant = 0.0
    osc_component = None
    osc_base = None
    osc_range = None
    form = "witness"
    confidences = [cert.confidence for cert in (neg_cert, pos_cert) if cert is not None]

    if osc is not None:
        witness_form = _osc_witness_form(osc, domain)
        if witness_form is not None:
            osc_points, osc_sup_constant, osc_confidence = witness_form
            values = np.abs(osc(osc_points))
            osc_value = float(values.max())
            points += [(y, "osc", v) for y, v in zip(osc_points, values)]
            osc_range = (float(osc_points.min()), float(osc_points.max()))
            details["osc"] = {"points": osc_points.tolist(), "sup_constant": osc_sup_constant}
        else:
            form = "norm"
            coeffs = {}
            for term in osc.terms:
                key = (term.exponent.alpha, term.exponent.gamma)
                coeffs[key] = coeffs.get(key, 0j) + term.coeff
            osc_cert = certify_osc(coeffs, *domain.cell)
            osc_sup_constant = osc_cert.upper_constant
            osc_value = osc_component = osc_cert.sup_norm
            osc_confidence = osc_cert.confidence
            osc_range = osc_cert.y0_window
            details["osc"] = osc_cert.to_dict()
        confidences.append(osc_confidence)

    others = neg is not None or pos is not None
    omega = 3.0 * osc_sup_constant if (osc is not None and others) else 1.0

    if osc is not None:
        entries["osc"] = omega * osc_value
        if form == "witness":
            osc_base = 1.0 / omega
        elif others:
            osc_base = osc_cert.window_constant / omega
        else:
            osc_base = max(osc_cert.window_constant, osc_cert.lower_constant) / omega

    score = max(entries.values())
    attained_by = next(tag for tag in REGIME_ORDER if tag in entries and entries[tag] == score)

    osc_share = osc_sup_constant / omega if osc is not None else 0.0
    upper_constant = osc_share
    for cert in (neg_cert, pos_cert):
        if cert is not None:
            upper_constant += cert.total_constant

    kappas = {}
    if neg is not None:
        spill = 0.0
        if pos_cert is not None:
            spill = float(pos_cert.tail_factor(upper / neg_cert.witnesses.max()))
        kappas["neg"] = 1.0 - osc_share - spill
    if pos is not None:
        spill = 0.0
        if neg_cert is not None:
            spill = float(neg_cert.tail_factor(pos_points.min()))
        kappas["pos"] = 1.0 - osc_share - spill
    if osc is not None:
        spill = 0.0
        if neg_cert is not None:
            spill += float(neg_cert.tail_factor(osc_range[0]))
        if pos_cert is not None:
            spill += float(pos_cert.tail_factor(upper / osc_range[1]))
        kappas["osc"] = osc_base - spill

    for tag in REGIME_ORDER:
        if tag in kappas:
            checks.require(f"kappa_{tag} > 0", kappas[tag], 0.0)

    kappa_min = min(kappas.values())
    lower_constant = 1.0 / kappa_min
    total_constant = max(upper_constant, lower_constant)

    points.sort(key=lambda item: item[0])
    witnesses = np.array([y for y, _, _ in points], dtype=float)
    full_values = np.abs(h(witnesses)) if witnesses.size else np.zeros(0)
    details["kappa"] = kappas

    logger.debug(
        "score=%g attained by %s, upper=%g lower=%g",
        score,
        attained_by,
        upper_constant,
        lower_constant,
    )

    return WitnessCertificate(
        witnesses=witnesses,
        regime_tags=[tag for _, tag, _ in points],
        values=np.array([v for _, _, v in points], dtype=float),
        full_values=full_values,
        osc_component=osc_component,
        osc_weight=omega,
        score=score,
        attained_by=attained_by,
        upper_constant=upper_constant,
        lower_constant=lower_constant,
        total_constant=total_constant,
        full_witness_constant=upper_constant / kappa_min if form == "witness" else None,
        form=form,
        confidence=weakest_confidence(confidences) if confidences else "exact",
        hypotheses=checks.records,
        details=details,
    )


def _balanced_certificate(h):
    plan = balanced_witnesses(h)
    values = np.abs(h(plan.grid))
    score = float(values.max())

    return WitnessCertificate(
        witnesses=plan.grid,
        regime_tags=["balanced"] * len(plan.grid),
        values=values,
        full_values=values,
        score=score,
        attained_by="balanced",
        upper_constant=plan.ratio_bound,
        lower_constant=1.0,
        total_constant=max(plan.ratio_bound, 1.0),
        full_witness_constant=plan.ratio_bound,
        form="balanced",
        confidence=weakest_confidence([plan.provenance, h.confidence]),
        hypotheses=[],
        details={"balanced": plan.to_dict()},
    )


def approx_sup(h):
    """Certified approximation of ``sup |h|`` over the cell of ``h``.

    Returns
    -------
    score : float
        Approximation of the supremum.
    certificate : :class:`WitnessCertificate`
        ``score / C <= sup |h| <= C * score`` with ``C = certificate.total_constant``.

    """
    if h.domain is not None and h.domain.balanced:
        certificate = _balanced_certificate(h)
    else:
        certificate = witness_set(h)
    return certificate.score, certificate


def nonneg_single_witness(scores):
    """Score of a sum of nonnegative functions from the scores of its summands."""
    scores = [float(s) for s in scores]
    if not scores:
        raise EmptyError("at least one score is required")
    negative = [s for s in scores if s < 0]
    if negative:
        raise NegativeError(f"scores must be nonnegative, found {negative[0]}")
    return sum(scores)
