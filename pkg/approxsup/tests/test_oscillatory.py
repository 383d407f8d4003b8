import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

from approxsup.errors import AsymmetryError, DomainError, WindowError
from approxsup.oracle import brute_sup
from approxsup.oscillatory import (
    certify_osc,
    chebyshev_extension,
    coefficient_keys,
    cross_term,
    gram_form,
    lebesgue_constant,
    logpoly_sup,
    moment_integral,
    oscillation_threshold,
    p_transform,
    pure_osc_bound,
    window_moment,
)
from approxsup.termalg import make_sum


def _complex_quad(func, lo, hi):
    options = {"epsabs": 1e-13, "epsrel": 1e-13, "limit": 1000}
    re, _ = quad(lambda t: func(t).real, lo, hi, **options)
    im, _ = quad(lambda t: func(t).imag, lo, hi, **options)
    return complex(re, im)


def test_coefficient_keys():
    keys = coefficient_keys([(1.0, 0), (0.0, 2)])
    assert keys == [(0.0, 0), (0.0, 1), (0.0, 2), (1.0, 0), (1.0, 1), (1.0, 2)]

    with pytest.raises(ValueError, match="natural number"):
        coefficient_keys([(0.0, -1)])


def test_p_transform():
    assert p_transform({(0.0, 0): 2.0}, 10.0, 100.0) == {(0.0, 0): 2.0}

    # log(y) = 1 + 2 t for y = e * (e**2)**t
    p = p_transform({(0.0, 1): 1.0}, math.e, math.e**3)
    assert p[(0.0, 0)] == pytest.approx(1.0)
    assert p[(0.0, 1)] == pytest.approx(2.0)

    with pytest.raises(DomainError):
        p_transform({(0.0, 0): 1.0}, 10.0, 5.0)


def test_p_transform_polynomial():
    rng = np.random.default_rng(7)
    c = {(0.0, g): complex(*rng.standard_normal(2)) for g in range(4)}
    a, b = 20.0, 1e5
    p = p_transform(c, a, b)

    for t in [0.0, 0.3, 0.9]:
        log_y = math.log(a) + t * math.log(b / a)
        f = sum(v * log_y**g for (_, g), v in c.items())
        g = sum(v * t**m for (_, m), v in p.items())
        assert g == pytest.approx(f, rel=1e-10)


@pytest.mark.parametrize("n", [0, 1, 2, 5])
def test_moment_integral_zero_frequency(n):
    assert moment_integral(n, 0.0) == pytest.approx(1 / (n + 1), rel=1e-15)


def test_moment_integral_closed_forms():
    assert moment_integral(0, 2 * math.pi) == pytest.approx(0.0, abs=1e-14)
    assert moment_integral(0, 1.0) == pytest.approx((np.exp(1j) - 1) / 1j, rel=1e-13)
    assert moment_integral(1, math.pi) == pytest.approx(-2 / math.pi**2 + 1j / math.pi, rel=1e-12)

    with pytest.raises(ValueError):
        moment_integral(-1, 1.0)


@pytest.mark.parametrize("n", [0, 1, 3, 6])
@pytest.mark.parametrize("lam", [1e-4, 0.5, 3.0, 7.5, 40.0, 200.0, -12.0])
def test_moment_integral_quadrature(n, lam):
    expected = _complex_quad(lambda y: y**n * np.exp(1j * lam * y), 0.0, 1.0)
    assert abs(moment_integral(n, lam) - expected) <= 1e-10


def test_moment_integral_array():
    lam = np.array([0.0, 1e-5, 2.0, 50.0])
    values = moment_integral(2, lam)
    assert values.shape == (4,)
    for lam_i, value in zip(lam, values):
        assert value == pytest.approx(moment_integral(2, float(lam_i)))


@pytest.mark.parametrize("window", [(0.25, 0.75), (0.0, 0.5), (0.1, 1.0)])
def test_window_moment(window):
    lo, hi = window
    expected = _complex_quad(lambda y: y**2 * np.exp(5j * y), lo, hi)
    assert abs(window_moment(2, 5.0, window) - expected) <= 1e-12


def test_gram_form():
    np.testing.assert_allclose(gram_form([(0.0, 0), (0.0, 1)]), [[1, 1 / 2], [1 / 2, 1 / 3]])
    np.testing.assert_allclose(gram_form([(0.0, 0), (1.0, 0)]), np.eye(2))
    np.testing.assert_allclose(
        gram_form([(0.0, 0), (0.0, 1)], "mid"), [[1 / 2, 1 / 4], [1 / 4, 13 / 96]]
    )
    np.testing.assert_allclose(gram_form([(0.0, 0)], (Fraction(1, 2), Fraction(1))), [[1 / 2]])


def test_cross_term():
    assert cross_term({(0.0, 0): 1.0, (0.0, 1): 2.0}, 10.0) == 0.0

    m = 10.0
    value = cross_term({(0.0, 0): 1.0, (1.0, 0): 1.0}, m)
    assert value == pytest.approx(2 * math.sin(m) / m, rel=1e-12)


def test_cross_term_quadrature():
    rng = np.random.default_rng(42)

    for _ in range(50):
        alphas = sorted(rng.choice([0.0, 0.5, 1.0, 2.5, 4.0], size=2, replace=False))
        keys = coefficient_keys([(alphas[0], 1), (alphas[1], 0)])
        c = {k: complex(*rng.standard_normal(2)) for k in keys}
        m = float(rng.uniform(0.5, 30.0))

        def g(t):
            return sum(v * t**gamma * np.exp(1j * m * alpha * t) for (alpha, gamma), v in c.items())

        vector = np.array([c[k] for k in keys])
        energy = float((vector @ gram_form(keys) @ np.conj(vector)).real)
        total = _complex_quad(lambda t: abs(g(t)) ** 2 + 0j, 0.0, 1.0).real
        assert abs(cross_term(c, m) - (total - energy)) <= 1e-10


def test_cross_term_asymmetry(mocker):
    mocker.patch(
        "approxsup.oscillatory._cross_matrices",
        return_value=np.array([[[0.0, 1j], [1j, 0.0]]]),
    )
    with pytest.raises(AsymmetryError):
        cross_term([1.0, 1.0], 1.0, keys=[(0.0, 0), (1.0, 0)])


def test_oscillation_threshold():
    assert oscillation_threshold([(0.0, 0), (0.0, 1)]) == 0.0

    keys = [(0.0, 0), (1.0, 0)]
    threshold = oscillation_threshold(keys, samples=64)
    assert 0.0 < threshold < 10.0

    rng = np.random.default_rng(0)
    for _ in range(20):
        c = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        c /= np.linalg.norm(c)
        m = threshold * float(rng.uniform(1.0, 100.0))
        assert abs(cross_term(c, m, keys=keys)) <= 0.5 + 1e-2


def test_certify_osc():
    c = {(0.0, 0): 1.0, (1.0, 0): 1.0}
    cert = certify_osc(c, 10.0, 1e10)

    assert cert.sup_norm == pytest.approx(1.0)
    assert cert.upper_constant == 2.0
    assert cert.lower_constant == pytest.approx(0.5)
    assert cert.window_constant == pytest.approx(math.sqrt(0.5))
    assert cert.y0_window[0] == pytest.approx(10.0**3.25)
    assert cert.y0_window[1] == pytest.approx(10.0**7.75)
    assert cert.mid_threshold >= 0.0

    h = make_sum([(1.0, 0.0, 0, 0), (1.0, 1.0, 0, 0)])
    estimate = brute_sup(h, (10.0, 1e10)).sup_estimate
    assert cert.lower_bound() <= estimate <= cert.upper_bound() * (1 + 1e-12)
    assert estimate == pytest.approx(2.0, rel=1e-6)


def test_certify_osc_window_error():
    with pytest.raises(WindowError) as excinfo:
        certify_osc({(0.0, 0): 1.0, (1.0, 0): 1.0}, 10.0, 11.0)

    err = excinfo.value
    assert err.inequality == "log(b/a) > M0"
    assert err.lhs == pytest.approx(math.log(1.1))
    assert err.lhs <= err.rhs


OSC_ALPHAS = [0.0, 1.0, 2.0, math.pi]


def _random_osc_instance(rng):
    n_alpha = int(rng.integers(1, 4))
    gamma_max = int(rng.integers(0, 6 // n_alpha))
    alphas = rng.choice(OSC_ALPHAS, size=n_alpha, replace=False)
    keys = coefficient_keys([(alpha, gamma_max) for alpha in alphas])
    c = {key: complex(*rng.standard_normal(2)) for key in keys}
    return keys, c


def _recheck_cross_term(err, c, keys, a, b):
    p = p_transform(c, a, b)
    vector = np.array([p[key] for key in keys])
    shifted = vector * np.exp(1j * np.array([alpha for alpha, _ in keys]) * math.log(a))
    cross = cross_term(shifted, math.log(b / a), keys)
    energy = float((shifted @ gram_form(keys) @ np.conj(shifted)).real)

    assert err.inequality == "|T(p(c), log(b/a))| <= U(p(c)) / 2"
    assert err.lhs == pytest.approx(abs(cross), rel=1e-9)
    assert err.rhs == pytest.approx(energy / 2.0, rel=1e-9)
    assert abs(cross) > energy / 2.0


def test_certify_osc_norm_equivalence():
    rng = np.random.default_rng(2024)
    checked = 0
    refused = 0

    for _ in range(2000):
        if checked + refused == 100:
            break

        keys, c = _random_osc_instance(rng)
        assert len(keys) <= 6
        threshold = oscillation_threshold(keys)
        if 2.0 * threshold > 300.0:
            continue

        a = float(10 ** rng.uniform(1.0, 2.0))
        b = a * math.exp(max(2.0 * threshold, 2.0))

        try:
            cert = certify_osc(c, a, b)
        except WindowError as err:
            _recheck_cross_term(err, c, keys, a, b)
            refused += 1
            continue

        h = make_sum([(v, alpha, 0, gamma) for (alpha, gamma), v in c.items()])
        estimate = brute_sup(h, (a, b)).sup_estimate
        assert cert.lower_bound() <= estimate * (1 + 1e-9)
        assert estimate <= cert.upper_bound() * (1 + 1e-9)

        # the middle window alone carries a fixed share of ||p||_inf
        lo, hi = cert.y0_window
        assert lo == pytest.approx(a**0.75 * b**0.25)
        assert hi == pytest.approx(a**0.25 * b**0.75)
        window_estimate = brute_sup(h, (lo, hi)).sup_estimate
        assert window_estimate >= cert.window_constant * cert.sup_norm * (1 - 1e-9)
        checked += 1

    assert checked + refused == 100
    assert refused <= 5


def test_pure_osc_bound():
    c = {0.0: 1.0, 1.0: -0.5j}
    points, constant = pure_osc_bound(c, 10.0)

    assert len(points) == 2
    assert np.all((points > 100.0) & (points < 1000.0))

    h = make_sum([(1.0, 0.0, 0, 0), (-0.5j, 1.0, 0, 0)])
    assert 1.5 <= constant * np.abs(h(points)).max() * (1 + 1e-12)

    with pytest.raises(DomainError):
        pure_osc_bound(c, 0.5)


def test_lebesgue_constant():
    assert lebesgue_constant(0) == pytest.approx(1.0)
    assert lebesgue_constant(1) == pytest.approx(3.0)
    assert lebesgue_constant(3) > lebesgue_constant(2) > 3.0


@pytest.mark.parametrize("degree,expected", [(0, 1.0), (1, 2.0), (2, 7.0), (3, 26.0)])
def test_chebyshev_extension(degree, expected):
    assert chebyshev_extension(degree) == pytest.approx(expected)


def test_logpoly_sup():
    points, constant, bound = logpoly_sup([1.0, -1.0], math.e, math.e**4)

    # nodes 1 - j/3 in t, i.e. log(y) = 1 + 3 * (1 - j/3)
    np.testing.assert_allclose(np.log(points), [2.0, 3.0])
    assert constant == pytest.approx(3.0)
    assert bound == pytest.approx(3.0 * 2.0)

    with pytest.raises(DomainError):
        logpoly_sup([1.0], 10.0, 10.0)


def test_logpoly_sup_random():
    rng = np.random.default_rng(99)
    a, b = 10.0, 1e6
    t = np.linspace(0.0, 1.0, 20001)
    log_y = math.log(a) + t * math.log(b / a)

    for _ in range(500):
        degree = int(rng.integers(0, 6))
        coeffs = rng.standard_normal(degree + 1)
        points, constant, bound = logpoly_sup(coeffs, a, b)

        values = np.abs(np.polynomial.polynomial.polyval(np.log(points), coeffs))
        sup = np.abs(np.polynomial.polynomial.polyval(log_y, coeffs)).max()

        assert len(points) == degree + 1
        assert bound == pytest.approx(constant * values.max())
        assert sup <= bound * (1 + 1e-9)
