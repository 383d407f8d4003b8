"""Power-log asymptotics ``v(x) ~ c * x**r * log(x)**l``: dominant terms,
growth fits on sampled data and flatness exponents (``x = 1/eps``).

"""
import logging
import math
from fractions import Fraction

import numpy as np
from traitlets import Enum, Float, Instance, Int, List, TraitError, Unicode, Union

from .base import FrozenTraits
from .errors import DataError, EmptyError
from .options import option_value
from .utils import as_fraction, read_two_columns

logger = logging.getLogger(__name__)

MIN_SAMPLES = 8
MIN_DECADES = 4.0


class AsymptoticProfile(FrozenTraits):
    """Profile ``c * x**r * log(x)**l`` with c in ``[c_lo, c_hi]``.

    For the flatness direction ("eps"), the profile reads
    ``c * eps**r * |log(eps)|**l``.

    """

    r = Union(
        [Instance(Fraction), Float()], read_only=True, help="exponent, exact when rational"
    )
    l = Int(read_only=True, help="log power")  # noqa: E741
    c_lo = Float(read_only=True, help="lower end of the constant band")
    c_hi = Float(read_only=True, help="upper end of the constant band")
    direction = Enum(["x", "eps"], "x", read_only=True, help="x -> inf or eps -> 0")
    flags = List(Unicode(), read_only=True, help="fit diagnostics")
    residual = Float(None, allow_none=True, read_only=True, help="RMS residual in log scale")
    r_stderr = Float(None, allow_none=True, read_only=True, help="standard error of r")
    correction = Float(
        None, allow_none=True, read_only=True, help="log|log eps| / |log eps| at the smallest eps"
    )
    reference_scale = Float(None, allow_none=True, read_only=True, help="x0 of folded bands")

    def _validate_record(self):
        if not 0 < self.c_lo <= self.c_hi:
            raise TraitError(f"constant band must satisfy 0 < c_lo <= c_hi, found {self.band}")

    @property
    def exact(self):
        """True if r was recovered as an exact rational."""
        return isinstance(self.r, Fraction)

    @property
    def band(self):
        return (self.c_lo, self.c_hi)

    @property
    def q(self):
        """Flatness exponent (the eps exponent of an "eps" profile)."""
        return self.r

    def format_exponent(self):
        if self.exact:
            return str(self.r)
        return f"{self.r:.6g}"

    def _repr_keys(self):
        yield "r"
        yield "l"
        yield "c_lo"
        yield "c_hi"
        yield "direction"
        if self.flags:
            yield "flags"

    def _dict_keys(self):
        yield "r"
        yield "l"
        yield "c_lo"
        yield "c_hi"
        yield "direction"
        yield "flags"
        yield "residual"
        yield "r_stderr"
        yield "correction"
        yield "reference_scale"


def dominant_exponent(terms, reference_scale=None):
    """Dominant profile of a finite sum of nonnegative power-log terms.

    Parameters
    ----------
    terms : iterable of (r, l, (u_lo, u_hi))
        Exponents and constant bands of the terms.
    reference_scale : float, optional
        Scale x0 where the bands of sub-dominant terms are folded into the
        upper band (default: option ``reference_scale``).

    Returns
    -------
    profile : :class:`AsymptoticProfile`
        Lexicographically largest (r, l). Terms with the same exponents have
        their bands added.

    """
    terms = list(terms)
    if not terms:
        raise EmptyError("at least one term is required")

    x0 = option_value("reference_scale", reference_scale)
    if not x0 > math.e:
        raise ValueError(f"reference scale must be > e, found {x0}")

    merged = {}
    for r, l, (u_lo, u_hi) in terms:
        if not 0 < u_lo <= u_hi:
            raise ValueError(f"band must satisfy 0 < u_lo <= u_hi, found {(u_lo, u_hi)}")
        key = (as_fraction(r), int(l))
        lo, hi = merged.get(key, (0.0, 0.0))
        merged[key] = (lo + u_lo, hi + u_hi)

    r0, l0 = max(merged)
    c_lo, c_hi = merged.pop((r0, l0))

    log_x0 = math.log(x0)
    for (r, l), (_, u_hi) in merged.items():
        c_hi += u_hi * x0 ** float(r - r0) * log_x0 ** (l - l0)

    return AsymptoticProfile(r=r0, l=l0, c_lo=c_lo, c_hi=c_hi, reference_scale=x0)


def _check_samples(samples):
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise DataError("samples must be an (n, 2) array of (x, value) pairs")

    x, v = data.T
    if len(x) < MIN_SAMPLES:
        raise DataError(f"at least {MIN_SAMPLES} samples are required, found {len(x)}")
    if not np.all(np.isfinite(data)):
        raise DataError("samples must be finite")
    if np.any(np.diff(x) <= 0):
        raise DataError("abscissae must be strictly increasing")
    if x[0] <= 1:
        raise DataError("abscissae must be > 1")
    if np.any(v <= 0):
        raise DataError("values must be positive")

    decades = math.log10(x[-1] / x[0])
    if decades < MIN_DECADES:
        raise DataError(f"samples must span at least {MIN_DECADES:g} decades, found {decades:.3g}")

    return x, v


def fit_growth(
    samples, max_l=None, min_l=None, snap_denominator=None, residual_threshold=None
):
    """Fit ``log v = log c + r log x + l log log x`` on sampled data.

    The log power l is searched in ``min_l..max_l`` (least RMS residual
    wins), r is snapped to a rational of small denominator when it lies
    within 3 standard errors of it, and the constant band is
    ``exp(intercept +/- 2 sigma)``.

    Parameters
    ----------
    samples : array-like
        (n, 2) array of (x, v) pairs, x increasing, n >= 8, spanning at least
        4 decades.

    Returns
    -------
    profile : :class:`AsymptoticProfile`
        Flags: "non-rational" (r not snapped), "non-power-log" (RMS residual
        above the threshold).

    """
    x, v = _check_samples(samples)
    max_l = option_value("max_l", max_l)
    min_l = option_value("min_l", min_l)
    snap_denominator = option_value("snap_denominator", snap_denominator)
    residual_threshold = option_value("residual_threshold", residual_threshold)
    if max_l < min_l:
        raise ValueError(f"max_l must be >= min_l, found max_l={max_l}, min_l={min_l}")

    u = np.log(x)
    log_u = np.log(u)
    log_v = np.log(v)
    design = np.column_stack([u, np.ones_like(u)])

    best = None
    for l in range(min_l, max_l + 1):
        z = log_v - l * log_u
        (slope, intercept), *_ = np.linalg.lstsq(design, z, rcond=None)
        residuals = z - design @ np.array([slope, intercept])
        rms = math.sqrt(float(np.mean(residuals**2)))
        if best is None or rms < best[3]:
            best = (l, float(slope), float(intercept), rms, residuals)

    l, slope, intercept, rms, residuals = best

    n = len(u)
    spread = float(np.sum((u - u.mean()) ** 2))
    stderr = math.sqrt(float(np.sum(residuals**2)) / (n - 2) / spread)

    flags = []
    snapped = Fraction(slope).limit_denominator(snap_denominator)
    tolerance = max(3.0 * stderr, 1e-9 * max(1.0, abs(slope)))

    if abs(float(snapped) - slope) <= tolerance:
        r = snapped
        z = log_v - l * log_u
        intercept = float(np.mean(z - float(r) * u))
        rms = math.sqrt(float(np.mean((z - float(r) * u - intercept) ** 2)))
    else:
        r = slope
        flags.append("non-rational")

    if rms > residual_threshold:
        flags.append("non-power-log")

    logger.debug("growth fit r=%s l=%d rms=%g flags=%s", r, l, rms, flags)

    return AsymptoticProfile(
        r=r,
        l=l,
        c_lo=math.exp(intercept - 2.0 * rms),
        c_hi=math.exp(intercept + 2.0 * rms),
        direction="x",
        flags=flags,
        residual=rms,
        r_stderr=stderr,
    )


def flatness_exponent(samples, **kwargs):
    """Fit ``M(eps) ~ c * eps**a * |log eps|**l`` as eps -> 0.

    The fit is :func:`fit_growth` applied to ``(1/eps, M)``, with
    ``a = -r``. Keyword arguments are passed to :func:`fit_growth`.

    Parameters
    ----------
    samples : array-like
        (n, 2) array of (eps, M) pairs with 0 < eps < 1/2.

    Returns
    -------
    profile : :class:`AsymptoticProfile`
        Profile in the "eps" direction; ``correction`` holds the size of
        ``log|log eps| / |log eps|`` at the smallest eps.

    """
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise DataError("samples must be an (n, 2) array of (eps, value) pairs")

    eps = data[:, 0]
    if np.any(eps <= 0) or np.any(eps >= 0.5):
        raise DataError("eps values must lie in (0, 1/2)")

    order = np.argsort(-eps)
    growth = fit_growth(np.column_stack([1.0 / eps[order], data[order, 1]]), **kwargs)

    smallest = float(eps.min())
    log_eps = abs(math.log(smallest))

    return AsymptoticProfile(
        r=-growth.r,
        l=growth.l,
        c_lo=growth.c_lo,
        c_hi=growth.c_hi,
        direction="eps",
        flags=growth.flags,
        residual=growth.residual,
        r_stderr=growth.r_stderr,
        correction=math.log(log_eps) / log_eps,
    )


def poly_bound_check(profile):
    """Degree of a polynomial bound ``v = O(x**degree)`` implied by a profile.

    Returns
    -------
    bounded : bool
    degree : int

    """
    if profile.direction != "x":
        raise ValueError("polynomial bounds apply to profiles in the x direction")
    degree = math.ceil(profile.r) + (1 if profile.l > 0 else 0)
    return True, degree


def read_samples_csv(path):
    """Read (x, value) samples from a two-column CSV file."""
    data = read_two_columns(path)
    if len(data) == 0:
        raise DataError(f"no samples found in {path}")
    return data
