import math
from fractions import Fraction

import numpy as np
from traitlets import HasTraits


def to_json_value(value):
    """Convert a record field value into a JSON-compatible value."""
    if isinstance(value, FrozenTraits):
        return value.to_dict()
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, complex):
        return [to_json_value(value.real), to_json_value(value.imag)]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(value, np.ndarray):
        return [to_json_value(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): to_json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json_value(v) for v in value]
    return value


class FrozenTraits(HasTraits):
    """Base class for immutable records with validated fields.

    Fields are declared as read-only traits. They are set once by the
    constructor (keyword arguments only), then cross-field constraints are
    checked by :meth:`_validate_record`.

    """

    def __init__(self, **kwargs):
        super().__init__()

        for name, value in kwargs.items():
            if not self.has_trait(name):
                raise TypeError(f"{type(self).__name__} got an unexpected field {name!r}")
            self.set_trait(name, value)

        self._validate_record()

    def _validate_record(self):
        pass

    def _key(self):
        """Hashable value identifying the record, or None for identity semantics."""
        return None

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        key = self._key()
        if key is None:
            return self is other
        return key == other._key()

    def __hash__(self):
        key = self._key()
        if key is None:
            return id(self)
        return hash((type(self).__name__, key))

    def _repr_keys(self):
        return iter(())

    def _dict_keys(self):
        return self._repr_keys()

    def __repr__(self):
        fields = ", ".join(f"{key}={getattr(self, key)!r}" for key in self._repr_keys())
        return f"{type(self).__name__}({fields})"

    def to_dict(self):
        """Return a JSON-compatible dictionary of this record."""
        return {key: to_json_value(getattr(self, key)) for key in self._dict_keys()}
