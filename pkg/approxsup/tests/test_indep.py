import math

import numpy as np
import pytest

from approxsup.errors import DegenerateError, DimensionError, DomainError, SingularError
from approxsup.indep import equivalence_constant, evaluation_matrix, find_sample_points
from approxsup.options import set_options


def test_evaluation_matrix():
    triples = [(0.0, -2, 0), (0.0, -1, 0), (1.0, -1, 1)]
    points = [1.5, 1.8, 1.9]
    matrix = evaluation_matrix(triples, points)

    assert matrix.shape == (3, 3)
    # columns follow the canonical order: (1, -1, 1), (0, -1, 0), (0, -2, 0)
    np.testing.assert_allclose(
        matrix[:, 0], np.exp(1j * np.log(points)) * np.log(points) / np.array(points)
    )
    np.testing.assert_allclose(matrix[:, 1], 1 / np.array(points))
    np.testing.assert_allclose(matrix[:, 2], 1 / np.array(points) ** 2)


def test_evaluation_matrix_errors():
    with pytest.raises(DimensionError, match="expected 2 points"):
        evaluation_matrix([(0, -1, 0), (0, -2, 0)], [1.5])

    with pytest.raises(DomainError, match="must be > 1"):
        evaluation_matrix([(0, -1, 0), (0, -2, 0)], [0.5, 1.5])

    with pytest.raises(DomainError, match="distinct"):
        evaluation_matrix([(0, -1, 0), (0, -2, 0)], [1.5, 1.5])


def test_equivalence_constant():
    assert equivalence_constant(np.eye(2)) == pytest.approx(2.0)
    assert equivalence_constant(2 * np.eye(3)) == pytest.approx(1.5)

    with pytest.raises(SingularError):
        equivalence_constant(np.ones((2, 2)))


def test_equivalence_constant_bound():
    rng = np.random.default_rng(3)
    matrix = evaluation_matrix([(0, -1, 0), (0, -2, 0), (0, -2, 1)], [1.2, 1.5, 1.9])
    constant = equivalence_constant(matrix)

    for _ in range(100):
        c = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        assert np.abs(c).sum() <= constant * np.abs(matrix @ c).max() * (1 + 1e-12)


def test_find_sample_points():
    triples = [(0.0, -1, 0), (0.0, -2, 0), (0.0, -1, 1)]
    plan = find_sample_points(triples)

    assert len(plan.points) == 3
    assert np.all(np.diff(plan.points) > 0)
    assert np.all((plan.points > 1.0) & (plan.points < 2.0))
    assert plan.equivalence_constant >= 1.0
    assert plan.equivalence_constant == pytest.approx(3 / plan.matrix_condition)

    # deterministic for a given seed
    plan2 = find_sample_points(triples)
    np.testing.assert_array_equal(plan.points, plan2.points)


def test_find_sample_points_single():
    plan = find_sample_points([(0.0, -1, 0)])
    (point,) = plan.points
    assert 1.25 <= point <= 1.75
    assert plan.equivalence_constant == pytest.approx(point)


def test_find_sample_points_interval():
    with set_options(sample_interval_upper=4.0):
        plan = find_sample_points([(0.0, -1, 0), (0.0, -3, 0)])
    assert np.all(plan.points < 4.0)
    assert plan.points.max() > 2.0

    plan = find_sample_points([(0.0, 0, 0), (1.0, 0, 0)], interval=(100.0, 1000.0))
    assert np.all((plan.points > 100.0) & (plan.points < 1000.0))


def test_find_sample_points_errors():
    with pytest.raises(DimensionError):
        find_sample_points([])

    with pytest.raises(DomainError, match="1 <= lo < hi"):
        find_sample_points([(0.0, -1, 0)], interval=(0.5, 2.0))

    with pytest.raises(DegenerateError, match="numerically singular"):
        find_sample_points([(0.0, -1, 0), (0.0, -2, 0)], tol=1e3)


@pytest.mark.parametrize(
    "triples,interval",
    [
        ([(0.0, -1, 0), (0.0, -2, 0), (0.0, -1, 1)], None),
        ([(0.0, -1, 0), (1.0, -1, 0), (math.pi, -2, 1), (0.0, -3, 2)], None),
        ([(0.0, 0, 0), (1.0, 0, 0)], (100.0, 1000.0)),
    ],
)
def test_equivalence_constant_sampled(triples, interval):
    plan = find_sample_points(triples, interval=interval)
    matrix = evaluation_matrix(plan.triples, plan.points)

    rng = np.random.default_rng(11)
    k = len(plan.triples)
    c = rng.standard_normal((100_000, k)) + 1j * rng.standard_normal((100_000, k))
    c /= np.abs(c).sum(axis=1, keepdims=True)

    values = np.abs(c @ matrix.T).max(axis=1)
    assert values.min() >= 1.0 / plan.equivalence_constant - 1e-9
