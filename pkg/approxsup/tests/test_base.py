import math
from fractions import Fraction

import numpy as np
import pytest
from traitlets import Int, TraitError

from approxsup.base import FrozenTraits, to_json_value
from approxsup.termalg import ExponentTriple


class Record(FrozenTraits):
    x = Int(0, read_only=True)

    def _repr_keys(self):
        yield "x"


@pytest.mark.parametrize(
    "value,expected",
    [
        (Fraction(1, 3), "1/3"),
        (complex(1, -2), [1.0, -2.0]),
        (math.inf, "inf"),
        (-math.inf, "-inf"),
        (np.float64(0.5), 0.5),
        (np.int64(3), 3),
        (np.array([1.0, 2.0]), [1.0, 2.0]),
        ({"a": Fraction(2)}, {"a": "2/1"}),
        ((1, "b"), [1, "b"]),
    ],
)
def test_to_json_value(value, expected):
    assert to_json_value(value) == expected


def test_frozen_traits():
    record = Record(x=2)
    assert record.x == 2
    assert repr(record) == "Record(x=2)"
    assert record.to_dict() == {"x": 2}

    with pytest.raises(TraitError, match=".*read-only.*"):
        record.x = 3

    with pytest.raises(TypeError, match="unexpected field 'y'"):
        Record(y=1)

    # no key: identity semantics
    assert record != Record(x=2)
    assert record == record


def test_frozen_traits_key():
    t1 = ExponentTriple(0.0, -1, 0)
    t2 = ExponentTriple(0.0, Fraction(-1), 0)
    assert t1 == t2
    assert hash(t1) == hash(t2)
    assert len({t1, t2}) == 1
