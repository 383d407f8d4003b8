import csv
import math
from fractions import Fraction

import numpy as np

from .errors import DataError
from .options import option_value

TWO_PI = 2.0 * math.pi


def as_fraction(value):
    """Convert ``value`` to an exact :class:`~fractions.Fraction`.

    Floats are converted through their shortest repr, so that ``0.5``
    gives ``1/2`` and ``0.1`` gives ``1/10``.

    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ValueError(f"cannot convert {value!r} to a rational number")
        return Fraction(repr(float(value)))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to a rational number")


def reduce_angle(alpha):
    """Reduce a frequency modulo 2*pi into [0, 2*pi)."""
    alpha = float(alpha) % TWO_PI
    if alpha >= TWO_PI:
        alpha = 0.0
    return alpha


def get_rng(seed=None):
    """Returns a numpy random generator seeded from ``seed`` or the global option."""
    return np.random.default_rng(option_value("seed", seed))


def chebyshev_points(n, lo, hi):
    """Chebyshev nodes of the first kind mapped on the open interval (lo, hi),
    in increasing order.

    """
    nodes = np.cos(np.pi * (2 * np.arange(1, n + 1) - 1) / (2 * n))
    return np.sort(lo + (hi - lo) * (nodes + 1.0) / 2.0)


def random_unit_vectors(rng, count, dim):
    """Draw ``count`` complex vectors uniformly on the unit sphere of C^dim."""
    vectors = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    return vectors / norms


def sup_power_log(beta, power, lower):
    """Supremum of ``y**beta * log(y)**power`` over ``y > lower``.

    Parameters
    ----------
    beta : float
        Power of y. Must be negative, or zero with a nonpositive ``power``.
    power : float
        Power of log(y) (any real number).
    lower : float
        Left end of the range, must be > 1.

    """
    beta = float(beta)
    power = float(power)
    if lower <= 1:
        raise ValueError(f"lower must be > 1, found {lower}")
    if beta > 0 or (beta == 0 and power > 0):
        return math.inf

    log_lower = math.log(lower)

    if power > 0:
        u_star = power / -beta
        if u_star > log_lower:
            return math.exp(beta * u_star) * u_star**power

    return math.exp(beta * log_lower) * log_lower**power


def sign_changes(values):
    """Count sign changes along the last axis, ignoring exact zeros."""
    values = np.asarray(values)
    signs = np.sign(values)
    counts = []
    for row in np.atleast_2d(signs):
        nonzero = row[row != 0]
        counts.append(int(np.count_nonzero(nonzero[1:] != nonzero[:-1])))
    return counts if values.ndim > 1 else counts[0]


def read_two_columns(path):
    """Read a two-column numeric CSV file into an (n, 2) float array.

    Blank lines and lines starting with ``#`` are ignored. A first row that
    cannot be parsed as numbers is taken as a header.

    """
    rows = []
    header_allowed = True

    with open(path, newline="") as f:
        for lineno, row in enumerate(csv.reader(f), start=1):
            cells = [cell.strip() for cell in row if cell.strip()]
            if not cells or cells[0].startswith("#"):
                continue
            try:
                if len(cells) != 2:
                    raise ValueError(f"expected 2 columns, found {len(cells)}")
                rows.append((float(cells[0]), float(cells[1])))
            except ValueError as err:
                if header_allowed and not rows:
                    header_allowed = False
                    continue
                raise DataError(f"{path}, line {lineno}: {err}") from err
            header_allowed = False

    return np.array(rows, dtype=float).reshape(-1, 2)
