"""Prepared power-log sums: exponent triples, perturbation units, terms,
cell domains and evaluation.

A prepared sum on a cell ``N < y < a/N`` reads::

    h(y) = sum_t c_t * f_t(y) * y**(i*alpha_t + beta_t) * log(y)**gamma_t

where each ``f_t`` is a perturbation unit close to 1.

"""
import logging
import math
from fractions import Fraction

import numpy as np
from traitlets import (
    Any,
    Bool,
    Complex,
    Float,
    Instance,
    Int,
    List,
    TraitError,
    Tuple,
    Unicode,
    validate,
)
from traittypes import Array

from .base import FrozenTraits
from .errors import DomainError, EmptyError
from .options import option_value
from .utils import TWO_PI, as_fraction, read_two_columns, reduce_angle, sup_power_log

logger = logging.getLogger(__name__)


def _as_natural(value, name):
    if isinstance(value, (bool, np.bool_)) or int(value) != value or value < 0:
        raise ValueError(f"{name} must be a natural number, found {value!r}")
    return int(value)


class ExponentTriple(FrozenTraits):
    """Exponent triple (alpha, beta, gamma) of the monomial
    ``y**(i*alpha + beta) * log(y)**gamma``.

    Parameters
    ----------
    alpha : float
        Oscillation frequency, reduced modulo 2*pi at construction.
    beta : int, str, float or Fraction
        Power of y, stored as an exact rational.
    gamma : int
        Nonnegative power of log(y).

    """

    alpha = Float(0.0, read_only=True, help="frequency in [0, 2*pi)")
    beta = Instance(Fraction, read_only=True, help="exact rational power of y")
    gamma = Int(0, read_only=True, help="nonnegative power of log(y)")

    def __init__(self, alpha=0.0, beta=0, gamma=0):
        super().__init__(
            alpha=reduce_angle(alpha),
            beta=as_fraction(beta),
            gamma=_as_natural(gamma, "gamma"),
        )

    @validate("alpha")
    def _validate_alpha(self, proposal):
        if not 0.0 <= proposal["value"] < TWO_PI:
            raise TraitError(f"alpha must be in [0, 2*pi), found {proposal['value']}")
        return proposal["value"]

    @validate("gamma")
    def _validate_gamma(self, proposal):
        if proposal["value"] < 0:
            raise TraitError(f"gamma must be >= 0, found {proposal['value']}")
        return proposal["value"]

    @property
    def regime(self):
        """'neg', 'osc' or 'pos' depending on the sign of beta."""
        if self.beta < 0:
            return "neg"
        if self.beta > 0:
            return "pos"
        return "osc"

    @property
    def sort_key(self):
        """Canonical order: beta descending, gamma descending, alpha ascending."""
        return (-self.beta, -self.gamma, self.alpha)

    def _key(self):
        return (self.alpha, self.beta, self.gamma)

    def _repr_keys(self):
        yield "alpha"
        yield "beta"
        yield "gamma"

    def to_dict(self):
        return {"alpha": self.alpha, "beta": str(self.beta), "gamma": self.gamma}


def as_triple(value):
    """Return ``value`` as an :class:`ExponentTriple` (accepts 3-tuples)."""
    if isinstance(value, ExponentTriple):
        return value
    alpha, beta, gamma = value
    return ExponentTriple(alpha, beta, gamma)


def canonical_triples(triples):
    """Sorted list of distinct exponent triples."""
    return sorted({as_triple(t) for t in triples}, key=lambda t: t.sort_key)


class PerturbationUnit(FrozenTraits):
    """Base class of real-valued functions f with f(y) -> 1 as y -> infinity."""

    kind = None
    confidence = "exact"

    def __call__(self, y):
        raise NotImplementedError

    def delta_bound(self, lower, log_power):
        """Upper bound of ``|f(y) - 1| * log(y)**(2*log_power)`` over ``y > lower``."""
        raise NotImplementedError

    def magnitude_bound(self, lower):
        """Upper bound of ``|f(y)|`` over ``y > lower``."""
        raise NotImplementedError

    def verify(self, lower, upper=None, points=None):
        """Check the declared bound of the unit on samples over ``(lower, upper)``."""
        return True

    @property
    def sort_key(self):
        return (self.kind, repr(self._key()))


class IdentityUnit(PerturbationUnit):
    """The constant unit f = 1."""

    kind = "identity"

    def __call__(self, y):
        return np.ones_like(np.asarray(y, dtype=float))

    def delta_bound(self, lower, log_power):
        return 0.0

    def magnitude_bound(self, lower):
        return 1.0

    def _key(self):
        return ("identity",)


IDENTITY = IdentityUnit()


class RationalTailUnit(PerturbationUnit):
    """Unit ``f(y) = 1 + sum_i a_i * y**(-i)`` with integer powers i >= 1."""

    kind = "tail"

    terms = List(
        Tuple(Int(), Float()),
        minlen=1,
        read_only=True,
        help="(power, coefficient) pairs, powers increasing",
    )

    def __init__(self, terms):
        if isinstance(terms, dict):
            terms = terms.items()
        merged = {}
        for power, coeff in terms:
            power = _as_natural(power, "tail power")
            if power < 1:
                raise ValueError("tail powers must be >= 1")
            merged[power] = merged.get(power, 0.0) + float(coeff)
        super().__init__(terms=sorted(merged.items()))

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        value = np.ones_like(y)
        for power, coeff in self.terms:
            value = value + coeff * y ** (-power)
        return value

    def delta_bound(self, lower, log_power):
        return sum(
            abs(coeff) * sup_power_log(-power, 2 * log_power, lower) for power, coeff in self.terms
        )

    def magnitude_bound(self, lower):
        return 1.0 + sum(abs(coeff) * lower ** (-power) for power, coeff in self.terms)

    def _key(self):
        return ("tail", tuple(self.terms))

    def _repr_keys(self):
        yield "terms"


class TabulatedUnit(PerturbationUnit):
    """Unit given by a callback (or a table) together with a declared bound
    ``|f(y) - 1| * log(y)**(2*log_power) < delta``.

    Use :meth:`from_table` or :meth:`from_csv` to build a unit from
    tabulated values, interpolated linearly in log(y).

    """

    kind = "table"
    confidence = "sampled"

    func = Any(read_only=True, help="callable evaluating the unit on a float array")
    delta = Float(read_only=True, help="declared bound of |f - 1| (log y)**(2 log_power)")
    log_power = Int(0, read_only=True, help="log weight of the declared bound")
    source = Unicode("", read_only=True, help="path of the table file, as written")
    table = Array(None, allow_none=True, read_only=True, dtype=float, help="(y, f) table")

    def __init__(self, func, delta, log_power=0, source="", table=None):
        super().__init__(
            func=func,
            delta=float(delta),
            log_power=_as_natural(log_power, "log_power"),
            source=str(source),
            table=table,
        )

    @classmethod
    def from_table(cls, y, values, delta, log_power=0, source=""):
        y = np.asarray(y, dtype=float)
        values = np.asarray(values, dtype=float)
        if y.ndim != 1 or y.shape != values.shape or y.size < 2:
            raise ValueError("table must have two columns of equal length >= 2")
        if np.any(y <= 1) or np.any(np.diff(y) <= 0):
            raise ValueError("table abscissae must be > 1 and strictly increasing")

        log_y = np.log(y)

        def interpolate(arg):
            return np.interp(np.log(np.asarray(arg, dtype=float)), log_y, values)

        return cls(
            interpolate,
            delta,
            log_power=log_power,
            source=source,
            table=np.column_stack([y, values]),
        )

    @classmethod
    def from_csv(cls, path, delta, log_power=0, source=None):
        data = read_two_columns(path)
        if source is None:
            source = str(path)
        return cls.from_table(data[:, 0], data[:, 1], delta, log_power=log_power, source=source)

    @validate("func")
    def _validate_func(self, proposal):
        if not callable(proposal["value"]):
            raise TraitError("func must be callable")
        return proposal["value"]

    @validate("delta")
    def _validate_delta(self, proposal):
        if not 0 < proposal["value"] < math.inf:
            raise TraitError(f"delta must be positive and finite, found {proposal['value']}")
        return proposal["value"]

    @validate("log_power")
    def _validate_log_power(self, proposal):
        if proposal["value"] < 0:
            raise TraitError("log_power must be >= 0")
        return proposal["value"]

    def __call__(self, y):
        return np.asarray(self.func(y), dtype=float)

    def delta_bound(self, lower, log_power):
        if log_power > self.log_power:
            return math.inf
        return self.delta * math.log(lower) ** (2 * (log_power - self.log_power))

    def magnitude_bound(self, lower):
        return 1.0 + self.delta * math.log(lower) ** (-2 * self.log_power)

    def sampled_excess(self, lower, upper=None, points=None):
        """Largest sampled value of ``|f(y) - 1| * log(y)**(2*log_power)`` on
        a log-spaced grid over ``(lower, upper)``.

        """
        upper = option_value("table_check_upper", upper)
        points = option_value("table_check_points", points)
        if upper <= lower:
            return 0.0
        y = np.geomspace(lower * (1 + 1e-9), upper, points)
        weighted = np.abs(self(y) - 1.0) * np.log(y) ** (2 * self.log_power)
        return float(weighted.max())

    def verify(self, lower, upper=None, points=None):
        excess = self.sampled_excess(lower, upper=upper, points=points)
        if excess >= self.delta:
            logger.warning(
                "tabulated unit %r exceeds its declared bound (max %g >= %g)",
                self.source,
                excess,
                self.delta,
            )
            return False
        return True

    def _key(self):
        origin = self.source if self.source else id(self.func)
        return ("table", origin, self.delta, self.log_power)

    def _repr_keys(self):
        if self.source:
            yield "source"
        yield "delta"
        yield "log_power"

    def to_dict(self):
        return {"source": self.source, "delta": self.delta, "log_power": self.log_power}


class Term(FrozenTraits):
    """One term ``c * f(arg) * y**(i*alpha + beta) * log(y)**gamma`` of a prepared sum.

    The unit argument is y when beta <= 0 and a/y when beta > 0 (a being the
    upper boundary of the cell).

    """

    coeff = Complex(read_only=True, help="complex coefficient")
    exponent = Instance(ExponentTriple, read_only=True, help="exponent triple")
    unit = Instance(PerturbationUnit, read_only=True, help="perturbation unit")

    def __init__(self, coeff, exponent, unit=None):
        super().__init__(
            coeff=complex(coeff),
            exponent=as_triple(exponent),
            unit=IDENTITY if unit is None else unit,
        )

    @validate("coeff")
    def _validate_coeff(self, proposal):
        value = proposal["value"]
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise TraitError(f"coefficient must be finite, found {value}")
        return value

    def monomial(self, log_y):
        e = self.exponent
        value = np.exp(complex(float(e.beta), e.alpha) * log_y)
        if e.gamma:
            value = value * log_y**e.gamma
        return value

    def evaluate(self, y, log_y, scale=math.inf):
        value = self.coeff * self.monomial(log_y)
        if self.unit.kind != "identity":
            arg = y if self.exponent.beta <= 0 else scale / y
            value = value * self.unit(arg)
        return value

    def _key(self):
        return (self.coeff, self.exponent, self.unit)

    def _repr_keys(self):
        yield "coeff"
        yield "exponent"
        if self.unit.kind != "identity":
            yield "unit"

    def _dict_keys(self):
        yield "coeff"
        yield "exponent"
        yield "unit"

    def to_dict(self):
        d = super().to_dict()
        d["unit"] = {"kind": self.unit.kind, **self.unit.to_dict()}
        return d


class DomainSpec(FrozenTraits):
    """Cell boundaries.

    An unbalanced cell is ``N < y < a/N`` with ``a = inf`` or ``a > N**2``.
    A balanced cell is ``lower < y < upper`` with ``upper <= kappa * lower``.

    """

    lower = Float(read_only=True, help="N, the lower boundary (> 1)")
    upper = Float(math.inf, read_only=True, help="a, the upper boundary (may be inf)")
    balanced = Bool(False, read_only=True, help="whether the cell is balanced")
    kappa = Float(16.0, read_only=True, help="declared ratio bound of a balanced cell")

    def __init__(self, lower, upper=math.inf, balanced=False, kappa=16.0):
        super().__init__(
            lower=float(lower), upper=float(upper), balanced=bool(balanced), kappa=float(kappa)
        )

    def _validate_record(self):
        if not self.lower > 1:
            raise DomainError(f"lower boundary must be > 1, found {self.lower}")
        if not self.kappa > 1:
            raise DomainError(f"kappa must be > 1, found {self.kappa}")
        if self.balanced:
            if not math.isfinite(self.upper):
                raise DomainError("a balanced cell must have a finite upper boundary")
            if not self.lower < self.upper <= self.kappa * self.lower:
                raise DomainError(
                    f"balanced cell requires lower < upper <= kappa * lower, "
                    f"found lower={self.lower}, upper={self.upper}, kappa={self.kappa}"
                )
        elif not (math.isinf(self.upper) or self.upper > self.lower**2):
            raise DomainError(
                f"unbalanced cell requires upper = inf or upper > lower**2, "
                f"found lower={self.lower}, upper={self.upper}"
            )

    @property
    def bounded(self):
        return math.isfinite(self.upper)

    @property
    def cell(self):
        """Open interval of admissible y values."""
        if self.balanced:
            return (self.lower, self.upper)
        if self.bounded:
            return (self.lower, self.upper / self.lower)
        return (self.lower, math.inf)

    def _key(self):
        return (self.lower, self.upper, self.balanced, self.kappa)

    def _repr_keys(self):
        yield "lower"
        yield "upper"
        if self.balanced:
            yield "balanced"
            yield "kappa"

    def _dict_keys(self):
        yield "lower"
        yield "upper"
        yield "balanced"
        yield "kappa"


class PreparedSum(FrozenTraits):
    """A finite sum of :class:`Term` objects, optionally attached to a cell.

    Without a domain, the sum may be evaluated on ``y > 1`` (positive-beta
    terms must then carry identity units).

    """

    terms = List(Instance(Term), minlen=1, read_only=True, help="terms of the sum")
    domain = Instance(DomainSpec, allow_none=True, read_only=True, help="cell of the sum")

    def __init__(self, terms, domain=None):
        super().__init__(terms=list(terms), domain=domain)

    def _validate_record(self):
        if self.domain is not None and self.domain.bounded:
            return
        for term in self.terms:
            if term.exponent.beta > 0 and term.unit.kind != "identity":
                raise ValueError("units of positive-beta terms require a finite upper boundary")

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def exponents(self):
        return [term.exponent for term in self.terms]

    @property
    def coefficients(self):
        return np.array([term.coeff for term in self.terms], dtype=complex)

    @property
    def max_gamma(self):
        return max(term.exponent.gamma for term in self.terms)

    @property
    def interval(self):
        """Open interval on which the sum can be evaluated."""
        if self.domain is None:
            return (1.0, math.inf)
        return self.domain.cell

    @property
    def unit_scale(self):
        if self.domain is None:
            return math.inf
        return self.domain.upper

    @property
    def confidence(self):
        if any(term.unit.confidence == "sampled" for term in self.terms):
            return "sampled"
        return "exact"

    def is_zero(self):
        return all(term.coeff == 0 for term in self.terms)

    def with_coefficients(self, coefficients):
        """Return a sum with the same exponents and units but new coefficients."""
        coefficients = list(coefficients)
        if len(coefficients) != len(self.terms):
            raise ValueError("number of coefficients does not match the number of terms")
        return PreparedSum(
            [Term(c, t.exponent, t.unit) for c, t in zip(coefficients, self.terms)], self.domain
        )

    def with_domain(self, domain):
        return PreparedSum(self.terms, domain)

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        scalar = y.ndim == 0
        y = np.atleast_1d(y)

        lo, hi = self.interval
        inside = (y > lo) & (y < hi)
        if not np.all(inside):
            bad = y[~inside][0]
            raise DomainError(f"y={bad!r} is outside the open interval ({lo!r}, {hi!r})")

        log_y = np.log(y)
        total = np.zeros(y.shape, dtype=complex)
        with np.errstate(over="ignore", invalid="ignore"):
            for term in self.terms:
                total += term.evaluate(y, log_y, self.unit_scale)

        if not np.all(np.isfinite(total)):
            raise OverflowError("evaluation of the prepared sum overflowed")

        if scalar:
            return complex(total[0])
        return total

    def _key(self):
        return (tuple(self.terms), self.domain)

    def _repr_keys(self):
        yield "terms"
        if self.domain is not None:
            yield "domain"


def normalize(terms, domain=None):
    """Build a canonical :class:`PreparedSum` from a list of terms.

    Terms with the same exponent triple and unit are merged, zero terms are
    dropped (one zero term is kept when everything cancels) and terms are
    sorted by beta descending, then gamma descending, then alpha ascending.

    Parameters
    ----------
    terms : list of :class:`Term` or :class:`PreparedSum`
        Terms to normalize.
    domain : :class:`DomainSpec`, optional
        Cell of the sum (default: the domain of ``terms`` if it is a
        prepared sum, else unrestricted ``y > 1``).

    """
    if isinstance(terms, PreparedSum):
        if domain is None:
            domain = terms.domain
        terms = terms.terms

    terms = list(terms)
    if not terms:
        raise EmptyError("cannot normalize an empty list of terms")

    merged = {}
    for term in terms:
        key = (term.exponent, term.unit)
        merged[key] = merged.get(key, 0j) + term.coeff

    ordered = sorted(merged.items(), key=lambda item: (item[0][0].sort_key, item[0][1].sort_key))
    kept = [Term(coeff, exponent, unit) for (exponent, unit), coeff in ordered if coeff != 0]

    if not kept:
        (exponent, unit), _ = ordered[0]
        kept = [Term(0j, exponent, unit)]

    return PreparedSum(kept, domain)


def evaluate(h, y):
    """Evaluate the prepared sum ``h`` at ``y`` (scalar or array)."""
    return h(y)


def make_sum(spec, domain=None):
    """Shortcut building a normalized sum from ``(coeff, alpha, beta, gamma)`` tuples."""
    return normalize([Term(c, (alpha, beta, gamma)) for c, alpha, beta, gamma in spec], domain)


