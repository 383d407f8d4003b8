"""Oscillatory regime: sums ``f(y) = sum c[alpha, gamma] y**(i*alpha) log(y)**gamma``
on a window ``a < y < b``.

After the change of variables ``y = a * (b/a)**t`` the sum becomes
``g(t) = sum p'[alpha, m] exp(i*alpha*L*t) t**m`` with ``L = log(b/a)``.
Its L2 norm on [0, 1] splits into a Gram form (same alpha) and a cross term
(different alpha) that vanishes as L grows.

"""
import functools
import logging
import math
from fractions import Fraction

import numpy as np
from traitlets import Enum, Float, List, Tuple
from traittypes import Array

from .base import FrozenTraits
from .errors import AsymmetryError, DomainError, RegimeError, WindowError
from .indep import find_sample_points
from .options import option_value
from .termalg import ExponentTriple
from .utils import get_rng, random_unit_vectors, reduce_angle

logger = logging.getLogger(__name__)

FULL_WINDOW = (Fraction(0), Fraction(1))
MID_WINDOW = (Fraction(1, 4), Fraction(3, 4))

_SERIES_CUTOFF = 1e-3
_QUADRATURE_NODES = 80
_THRESHOLD_GRID = np.geomspace(1e-2, 1e6, 321)


def _as_key(key):
    if isinstance(key, ExponentTriple):
        if key.beta != 0:
            raise RegimeError("oscillatory terms must have beta = 0")
        return (key.alpha, key.gamma)
    alpha, gamma = key
    if int(gamma) != gamma or gamma < 0:
        raise ValueError(f"gamma must be a natural number, found {gamma!r}")
    return (reduce_angle(alpha), int(gamma))


def coefficient_keys(keys):
    """Rectangular closure ``{alpha} x {0, ..., gamma_max}`` of a set of
    (alpha, gamma) keys, sorted by alpha then gamma.

    """
    keys = [_as_key(k) for k in keys]
    if not keys:
        raise ValueError("at least one (alpha, gamma) key is required")
    alphas = sorted({k[0] for k in keys})
    gamma_max = max(k[1] for k in keys)
    return [(alpha, gamma) for alpha in alphas for gamma in range(gamma_max + 1)]


def _coefficient_vector(c, keys):
    c = {_as_key(k): complex(v) for k, v in dict(c).items()}
    return np.array([c.get(k, 0j) for k in keys], dtype=complex)


def _window_bounds(window):
    if isinstance(window, str):
        window = {"full": FULL_WINDOW, "mid": MID_WINDOW}[window]
    lo, hi = window
    if not 0 <= lo < hi <= 1:
        raise ValueError(f"window must satisfy 0 <= lo < hi <= 1, found {window}")
    return lo, hi


def p_transform(c, a, b):
    """Coefficients of the sum after the change of variables ``y = a (b/a)**t``,
    up to the unimodular factor ``a**(i*alpha)``::

        p[alpha, gamma] = sum_{m >= gamma} c[alpha, m] binom(m, gamma)
                          log(b/a)**gamma log(a)**(m - gamma)

    Parameters
    ----------
    c : dict
        Coefficients keyed by (alpha, gamma).
    a, b : float
        Window boundaries with 1 < a < b.

    Returns
    -------
    p : dict
        Transformed coefficients keyed by the closure of the keys of ``c``.

    """
    if not 1 < a < b:
        raise DomainError(f"window must satisfy 1 < a < b, found a={a}, b={b}")

    keys = coefficient_keys(c)
    coeffs = dict(zip(keys, _coefficient_vector(c, keys)))
    gamma_max = keys[-1][1]
    log_a = math.log(a)
    log_ratio = math.log(b / a)

    p = {}
    for alpha, gamma in keys:
        p[(alpha, gamma)] = sum(
            coeffs[(alpha, m)] * math.comb(m, gamma) * log_ratio**gamma * log_a ** (m - gamma)
            for m in range(gamma, gamma_max + 1)
        )
    return p


def _moment_series(n, lam):
    total = np.zeros(lam.shape, dtype=complex)
    term = np.ones(lam.shape, dtype=complex)
    for k in range(30):
        total += term / (n + k + 1)
        term = term * 1j * lam / (k + 1)
    return total


@functools.lru_cache(maxsize=1)
def _gauss_legendre():
    nodes, weights = np.polynomial.legendre.leggauss(_QUADRATURE_NODES)
    return (nodes + 1.0) / 2.0, weights / 2.0


def _moment_quadrature(n, lam):
    nodes, weights = _gauss_legendre()
    integrand = nodes**n * np.exp(1j * lam[:, None] * nodes)
    return integrand @ weights


def _moment_recursion(n, lam):
    ilam = 1j * lam
    e = np.exp(ilam)
    value = (e - 1.0) / ilam
    for k in range(1, n + 1):
        value = (e - k * value) / ilam
    return value


def moment_integral(n, lam):
    """``I_n(lam) = integral_0^1 y**n exp(i*lam*y) dy``.

    Uses the series in lam for ``|lam| < 1e-3``, Gauss-Legendre quadrature
    up to ``|lam| = n + 1`` (where the forward recursion loses accuracy)
    and the recursion ``I_n = (exp(i*lam) - n I_{n-1}) / (i*lam)`` beyond.

    Parameters
    ----------
    n : int
        Nonnegative power.
    lam : float or array-like
        Frequencies.

    """
    if int(n) != n or n < 0:
        raise ValueError(f"n must be a natural number, found {n!r}")
    n = int(n)

    lam = np.asarray(lam, dtype=float)
    scalar = lam.ndim == 0
    lam = np.atleast_1d(lam)

    result = np.empty(lam.shape, dtype=complex)
    tiny = np.abs(lam) < _SERIES_CUTOFF
    moderate = ~tiny & (np.abs(lam) <= n + 1)
    large = np.abs(lam) > n + 1

    if tiny.any():
        result[tiny] = _moment_series(n, lam[tiny])
    if moderate.any():
        result[moderate] = _moment_quadrature(n, lam[moderate])
    if large.any():
        result[large] = _moment_recursion(n, lam[large])

    if scalar:
        return complex(result[0])
    return result


def window_moment(n, lam, window=FULL_WINDOW):
    """``integral_lo^hi y**n exp(i*lam*y) dy`` for a window [lo, hi] of [0, 1]."""
    lo, hi = (float(v) for v in _window_bounds(window))
    lam = np.asarray(lam, dtype=float)
    width = hi - lo

    if lo == 0.0:
        return width ** (n + 1) * moment_integral(n, lam * width)

    total = 0.0
    for j in range(n + 1):
        total = total + math.comb(n, j) * lo ** (n - j) * width**j * moment_integral(j, lam * width)
    return width * np.exp(1j * lam * lo) * total


def gram_form(keys, window="full"):
    """Block-diagonal Gram matrix ``G[t, s] = [alpha_t == alpha_s] integral y**(gamma_t + gamma_s)``
    over a window of [0, 1] ("full", "mid" or a (lo, hi) pair).

    Entries are computed exactly as rationals, then rounded to floats. Rows
    follow the order of ``keys``.

    """
    keys = [_as_key(k) for k in keys]
    lo, hi = (Fraction(v) for v in _window_bounds(window))

    k = len(keys)
    gram = np.zeros((k, k))
    for t, (alpha_t, gamma_t) in enumerate(keys):
        for s, (alpha_s, gamma_s) in enumerate(keys):
            if alpha_t != alpha_s:
                continue
            n = gamma_t + gamma_s
            gram[t, s] = float((hi ** (n + 1) - lo ** (n + 1)) / (n + 1))
    return gram


def _cross_matrices(keys, frequencies, window):
    frequencies = np.atleast_1d(np.asarray(frequencies, dtype=float))
    k = len(keys)
    matrices = np.zeros((frequencies.size, k, k), dtype=complex)

    for t, (alpha_t, gamma_t) in enumerate(keys):
        for s, (alpha_s, gamma_s) in enumerate(keys):
            if alpha_t == alpha_s or s < t:
                continue
            moments = window_moment(gamma_t + gamma_s, frequencies * (alpha_t - alpha_s), window)
            matrices[:, t, s] = moments
            matrices[:, s, t] = np.conj(moments)

    return matrices


def cross_term(c, frequency, keys=None, window=FULL_WINDOW):
    """Cross term ``T(c, M) = sum_{alpha_t != alpha_s} c_t conj(c_s)
    integral y**(gamma_t + gamma_s) exp(i*M*(alpha_t - alpha_s)*y) dy``.

    Parameters
    ----------
    c : dict or array-like
        Coefficients keyed by (alpha, gamma), or a vector aligned with ``keys``.
    frequency : float
        M.
    keys : list, optional
        Keys of the coefficient vector (default: the closure of the keys of ``c``).
    window : tuple, optional
        Integration window inside [0, 1].

    """
    if isinstance(c, dict):
        if keys is None:
            keys = coefficient_keys(c)
        vector = _coefficient_vector(c, [_as_key(k) for k in keys])
    else:
        vector = np.asarray(c, dtype=complex)
    keys = [_as_key(k) for k in keys]

    matrix = _cross_matrices(keys, frequency, window)[0]
    value = vector @ matrix @ np.conj(vector)

    scale = max(1.0, float(np.vdot(vector, vector).real))
    if abs(value.imag) > 1e-8 * scale:
        raise AsymmetryError(f"cross term has imaginary part {value.imag:g}")
    return float(value.real)


def _quadratic_form(matrix, vector):
    return float((vector @ matrix @ np.conj(vector)).real)


@functools.lru_cache(maxsize=128)
def _oscillation_threshold(keys, window, samples, seed):
    keys = list(keys)
    if len({alpha for alpha, _ in keys}) < 2:
        return 0.0

    lam_min = float(np.linalg.eigvalsh(gram_form(keys, window)).min())
    matrices = _cross_matrices(keys, _THRESHOLD_GRID, window)
    vectors = random_unit_vectors(get_rng(seed), samples, len(keys))

    cross = np.einsum("pt,mts,ps->pm", vectors, matrices, np.conj(vectors)).real
    holds = np.all(np.abs(cross) <= lam_min / 2.0, axis=0)

    failing = np.nonzero(~holds)[0]
    if failing.size == 0:
        return float(_THRESHOLD_GRID[0])
    if failing[-1] == len(_THRESHOLD_GRID) - 1:
        return math.inf
    return float(_THRESHOLD_GRID[failing[-1] + 1])


def oscillation_threshold(keys, window=FULL_WINDOW, samples=None, seed=None):
    """Sampled threshold M0 beyond which ``|T(c, M)| <= lambda_min(G) / 2``
    for unit coefficient vectors (G the Gram matrix of the window).

    The threshold is estimated over unit vectors drawn uniformly on the
    complex sphere and a log-spaced grid of M. Returns 0 when all keys share
    the same alpha (no cross term) and ``inf`` when the inequality fails at
    the largest sampled M.

    """
    keys = tuple(_as_key(k) for k in keys)
    lo, hi = _window_bounds(window)
    samples = option_value("sphere_samples", samples)
    seed = option_value("seed", seed)
    return _oscillation_threshold(keys, (Fraction(lo), Fraction(hi)), samples, seed)


class OscCertificate(FrozenTraits):
    """Certificate of the oscillatory-regime estimate on a window (a, b)::

        lower_constant * ||p||_inf <= sup_{a<y<b} |f(y)| <= upper_constant * ||p||_inf

    and ``sup |f| >= window_constant * ||p||_inf`` on the middle window
    ``y0_window``.

    """

    keys = List(read_only=True, help="(alpha, gamma) keys of the coefficient vector")
    window = Tuple(Float(), Float(), read_only=True, help="(a, b)")
    transformed = Array(read_only=True, dtype=complex, help="p(c), aligned with keys")
    sup_norm = Float(read_only=True, help="||p(c)||_inf")
    threshold = Float(read_only=True, help="M0, sampled")
    mid_threshold = Float(read_only=True, help="M0 of the middle window, sampled")
    gram_min = Float(read_only=True, help="lambda_min of the full-window Gram form")
    mid_gram_min = Float(read_only=True, help="lambda_min of the middle-window Gram form")
    lower_constant = Float(read_only=True, help="Nlo")
    upper_constant = Float(read_only=True, help="Lhi")
    window_constant = Float(read_only=True, help="P, 0 when the middle-window check fails")
    y0_window = Tuple(Float(), Float(), read_only=True, help="middle window in y")
    confidence = Enum(["exact", "sampled"], "sampled", read_only=True, help="provenance")

    def lower_bound(self):
        return self.lower_constant * self.sup_norm

    def upper_bound(self):
        return self.upper_constant * self.sup_norm

    def _repr_keys(self):
        yield "window"
        yield "sup_norm"
        yield "lower_constant"
        yield "upper_constant"

    def _dict_keys(self):
        yield "keys"
        yield "window"
        yield "transformed"
        yield "sup_norm"
        yield "threshold"
        yield "mid_threshold"
        yield "gram_min"
        yield "mid_gram_min"
        yield "lower_constant"
        yield "upper_constant"
        yield "window_constant"
        yield "y0_window"
        yield "confidence"


def certify_osc(c, a, b, keys=None):
    """Build the oscillatory-regime certificate of ``f`` on the window (a, b).

    Parameters
    ----------
    c : dict
        Coefficients keyed by (alpha, gamma).
    a, b : float
        Window boundaries, 1 < a < b.
    keys : list, optional
        Additional keys (coefficients default to 0).

    Raises
    ------
    WindowError
        If ``log(b/a) <= M0`` or if the cross term of the instance is too large.

    """
    if not 1 < a < b:
        raise DomainError(f"window must satisfy 1 < a < b, found a={a}, b={b}")

    keys = coefficient_keys(list(dict(c)) + list(keys or []))
    p = p_transform({k: v for k, v in dict(c).items()}, a, b)
    transformed = np.array([p.get(k, 0j) for k in keys], dtype=complex)
    shifted = transformed * np.exp(1j * np.array([alpha for alpha, _ in keys]) * math.log(a))

    log_ratio = math.log(b / a)

    gram = gram_form(keys, "full")
    mid_gram = gram_form(keys, "mid")
    gram_min = float(np.linalg.eigvalsh(gram).min())
    mid_gram_min = float(np.linalg.eigvalsh(mid_gram).min())

    threshold = oscillation_threshold(keys)
    if not log_ratio > threshold:
        logger.warning("window too short: log(b/a)=%g <= M0=%g", log_ratio, threshold)
        raise WindowError("log(b/a) > M0", log_ratio, threshold)

    cross = cross_term(shifted, log_ratio, keys)
    energy = _quadratic_form(gram, shifted)
    if abs(cross) > energy / 2.0 * (1 + 1e-12):
        raise WindowError("|T(p(c), log(b/a))| <= U(p(c)) / 2", abs(cross), energy / 2.0)

    k = len(keys)
    lower_constant = math.sqrt(gram_min / 2.0) / math.sqrt(k)
    upper_constant = float(k)

    mid_cross = cross_term(shifted, log_ratio, keys, window=MID_WINDOW)
    mid_energy = _quadratic_form(mid_gram, shifted)
    if abs(mid_cross) <= mid_energy / 2.0:
        window_constant = math.sqrt(mid_gram_min)
    else:
        logger.info("middle-window cross term too large, window constant set to 0")
        window_constant = 0.0

    y0_window = (a**0.75 * b**0.25, a**0.25 * b**0.75)

    return OscCertificate(
        keys=keys,
        window=(float(a), float(b)),
        transformed=transformed,
        sup_norm=float(np.max(np.abs(transformed))),
        threshold=threshold,
        mid_threshold=oscillation_threshold(keys, MID_WINDOW),
        gram_min=gram_min,
        mid_gram_min=mid_gram_min,
        lower_constant=lower_constant,
        upper_constant=upper_constant,
        window_constant=window_constant,
        y0_window=y0_window,
    )


def pure_osc_bound(c, lower):
    """Witness points in ``[N**2, 10 N**2]`` for a sum of pure oscillations
    ``sum c[alpha] y**(i*alpha)``, with C such that ``sup |f| <= ||c||_1 <= C max_j |f(d_j)|``.

    Parameters
    ----------
    c : dict
        Coefficients keyed by alpha, or by (alpha, gamma) with gamma = 0.
    lower : float
        N >= 1.

    Returns
    -------
    points : ndarray
    constant : float

    """
    if not lower >= 1:
        raise DomainError(f"N must be >= 1, found {lower}")

    alphas = set()
    for key in c:
        if isinstance(key, tuple):
            alpha, gamma = key
            if gamma != 0:
                raise RegimeError("pure oscillation bound requires gamma = 0")
        elif isinstance(key, ExponentTriple):
            if key.beta != 0 or key.gamma != 0:
                raise RegimeError("pure oscillation bound requires beta = 0 and gamma = 0")
            alpha = key.alpha
        else:
            alpha = key
        alphas.add(reduce_angle(alpha))

    triples = [ExponentTriple(alpha, 0, 0) for alpha in sorted(alphas)]
    plan = find_sample_points(triples, interval=(lower**2, 10.0 * lower**2))

    return plan.points, plan.equivalence_constant


def _lebesgue_function_max(degree, resolution):
    m = degree + 2
    nodes = 1.0 - np.arange(1, m) / m
    x = np.linspace(0.0, 1.0, int(round(1.0 / resolution)) + 1)

    total = np.zeros_like(x)
    for j, node in enumerate(nodes):
        others = np.delete(nodes, j)
        total += np.abs(np.prod((x[:, None] - others) / (node - others), axis=1))

    return float(total.max())


@functools.lru_cache(maxsize=None)
def _cached_lebesgue_constant(degree, resolution, inflation):
    return _lebesgue_constant(degree, resolution, inflation)


def _lebesgue_constant(degree, resolution, inflation):
    value = _lebesgue_function_max(degree, resolution)
    # piecewise linear Lebesgue functions peak on the grid
    if degree >= 2:
        value *= inflation
    return value


def lebesgue_constant(degree, resolution=None, inflation=None):
    """Sampled Lebesgue constant of the nodes ``1 - j/(d+2)``, j = 1..d+1, on [0, 1]."""
    resolution = option_value("logpoly_resolution", resolution)
    inflation = option_value("logpoly_inflation", inflation)
    if degree <= 16:
        return _cached_lebesgue_constant(int(degree), resolution, inflation)
    return _lebesgue_constant(int(degree), resolution, inflation)


def chebyshev_extension(degree):
    """``T_d(2)``: bound on the growth of a degree-d polynomial from the
    middle half of an interval to the whole interval.

    """
    return math.cosh(degree * math.acosh(2.0))


def logpoly_sup(coeffs, a, b):
    """Geometric witness points of ``f(y) = sum_gamma coeffs[gamma] log(y)**gamma``
    on the window (a, b), with ``sup_{a<y<b} |f| <= L * max_j |f(y_j)|``.

    Returns
    -------
    points : ndarray
        The d + 1 points ``a**(j/M) * b**(1 - j/M)``, M = d + 2, increasing.
    constant : float
        L(d).
    bound : float
        ``L(d) * max_j |f(y_j)|``.

    """
    if not 1 < a < b:
        raise DomainError(f"window must satisfy 1 < a < b, found a={a}, b={b}")

    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.ndim != 1 or coeffs.size == 0:
        raise ValueError("at least one coefficient is required")

    degree = coeffs.size - 1
    m = degree + 2
    j = np.arange(1, m)
    points = np.sort(np.exp((j / m) * math.log(a) + (1.0 - j / m) * math.log(b)))

    log_points = np.log(points)
    values = np.polynomial.polynomial.polyval(log_points, coeffs)
    constant = lebesgue_constant(degree)

    return points, constant, constant * float(np.max(np.abs(values)))
