from contextlib import contextmanager

from traitlets import Float, HasTraits, Int, TraitError, validate


class Options(HasTraits):
    """Global tunables of the approximation algorithms.

    Library functions read these values when the corresponding keyword
    argument is not given. Use :func:`set_options` to change them
    temporarily.

    """

    trials = Int(64, help="number of candidate point sets tried when sampling")
    seed = Int(0, help="seed of the random number generator")
    budget = Int(4096, help="number of grid points used by the brute-force oracle")
    sphere_samples = Int(512, help="unit coefficient vectors sampled for oscillation thresholds")
    zero_count_samples = Int(256, help="random directions sampled when counting sign changes")
    ratio_samples = Int(64, help="random directions sampled when estimating grid ratios")
    max_l = Int(8, help="largest log power searched by growth fits")
    min_l = Int(0, help="smallest log power searched by growth fits")
    snap_denominator = Int(32, help="largest denominator of a snapped growth exponent")
    residual_threshold = Float(1e-2, help="RMS residual above which a fit is not power-log")
    reference_scale = Float(1e6, help="scale x0 at which sub-dominant bands are folded")
    sample_interval_upper = Float(2.0, help="right end of the sampling interval (1, upper)")
    logpoly_resolution = Float(1e-4, help="grid spacing of Lebesgue function sampling")
    logpoly_inflation = Float(1.01, help="safety factor on sampled Lebesgue constants")
    balanced_inflation = Float(1.1, help="safety factor on sampled grid ratios")
    degeneracy_tol = Float(1e-12, help="smallest singular value accepted for sample points")
    independence_tol = Float(1e-10, help="smallest singular value of balanced Gram matrices")
    table_check_upper = Float(1e8, help="right end of the sampled check of tabulated units")
    table_check_points = Int(256, help="number of points of the check of tabulated units")

    @validate(
        "trials",
        "sphere_samples",
        "zero_count_samples",
        "ratio_samples",
        "snap_denominator",
        "table_check_points",
    )
    def _is_positive_int(self, proposal):
        value = proposal["value"]
        if value < 1:
            raise TraitError(f"{proposal['trait'].name} must be >= 1, found {value}")
        return value

    @validate("budget")
    def _validate_budget(self, proposal):
        if proposal["value"] < 64:
            raise TraitError(f"budget must be >= 64, found {proposal['value']}")
        return proposal["value"]

    @validate("max_l")
    def _validate_max_l(self, proposal):
        if proposal["value"] < self.min_l:
            raise TraitError("max_l must be >= min_l")
        return proposal["value"]

    @validate("min_l")
    def _validate_min_l(self, proposal):
        if proposal["value"] > self.max_l:
            raise TraitError("min_l must be <= max_l")
        return proposal["value"]

    @validate(
        "residual_threshold",
        "reference_scale",
        "logpoly_resolution",
        "degeneracy_tol",
        "independence_tol",
    )
    def _is_positive_float(self, proposal):
        value = proposal["value"]
        if not value > 0:
            raise TraitError(f"{proposal['trait'].name} must be > 0, found {value}")
        return value

    @validate("sample_interval_upper", "logpoly_inflation", "balanced_inflation")
    def _is_greater_than_one(self, proposal):
        value = proposal["value"]
        if not value > 1:
            raise TraitError(f"{proposal['trait'].name} must be > 1, found {value}")
        return value

    @validate("table_check_upper")
    def _validate_table_check_upper(self, proposal):
        if not proposal["value"] > 1:
            raise TraitError("table_check_upper must be > 1")
        return proposal["value"]


_OPTIONS = Options()


def get_options():
    """Returns the global :class:`Options` instance."""
    return _OPTIONS


@contextmanager
def set_options(**kwargs):
    """Temporarily set global options.

    Examples
    --------
    >>> with set_options(trials=8, seed=1):
    ...     plan = find_sample_points(triples)

    """
    unknown = [name for name in kwargs if not _OPTIONS.has_trait(name)]
    if unknown:
        raise ValueError(f"unknown option(s): {', '.join(unknown)}")

    old_values = {name: getattr(_OPTIONS, name) for name in kwargs}

    try:
        with _OPTIONS.hold_trait_notifications():
            for name, value in kwargs.items():
                setattr(_OPTIONS, name, value)
        yield _OPTIONS
    finally:
        with _OPTIONS.hold_trait_notifications():
            for name, value in old_values.items():
                setattr(_OPTIONS, name, value)


def option_value(name, value=None):
    """Return ``value`` if given, else the global option ``name``."""
    if value is None:
        return getattr(_OPTIONS, name)
    return value
