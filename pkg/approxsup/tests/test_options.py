import pytest
from traitlets import TraitError

from approxsup.options import get_options, option_value, set_options


def test_defaults():
    options = get_options()
    assert options.trials == 64
    assert options.budget == 4096
    assert options.max_l == 8
    assert options.snap_denominator == 32
    assert options.residual_threshold == 1e-2


def test_set_options():
    options = get_options()

    with set_options(trials=8, budget=128):
        assert options.trials == 8
        assert option_value("budget") == 128
        assert option_value("budget", 256) == 256

    assert options.trials == 64
    assert options.budget == 4096


def test_set_options_restores_on_error():
    options = get_options()

    with pytest.raises(RuntimeError):
        with set_options(seed=42):
            raise RuntimeError()

    assert options.seed == 0


@pytest.mark.parametrize(
    "kwargs,match",
    [
        ({"budget": 10}, "budget must be >= 64"),
        ({"trials": 0}, "trials must be >= 1"),
        ({"min_l": 20}, "min_l must be <= max_l"),
        ({"residual_threshold": 0.0}, "residual_threshold must be > 0"),
        ({"balanced_inflation": 1.0}, "balanced_inflation must be > 1"),
    ],
)
def test_set_options_invalid(kwargs, match):
    with pytest.raises(TraitError, match=match):
        with set_options(**kwargs):
            pass


def test_set_options_unknown():
    with pytest.raises(ValueError, match="unknown option"):
        with set_options(not_an_option=1):
            pass
