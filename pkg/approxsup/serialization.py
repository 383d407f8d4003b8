"""Sum files: a line-oriented text format for prepared sums.

::

    # comment
    domain N 10.0 upper inf balanced 0 kappa 16.0
    term coeff 1.0 0.0 alpha 0.0 beta -2/1 gamma 0 unit identity
    term coeff 0.5 0.0 alpha 3.0 beta 0/1 gamma 1 unit tail 1:0.5,2:0.25
    term coeff 1.0 0.0 alpha 0.0 beta -1/1 gamma 0 unit table unit.csv delta 0.001 logpow 0

Table paths are resolved relative to the sum file. Paths may not contain
whitespace.

"""
import json
import math
from fractions import Fraction
from pathlib import Path

from traitlets import TraitError

from .base import to_json_value
from .errors import DataError, SumFileError
from .termalg import DomainSpec, ExponentTriple, RationalTailUnit, TabulatedUnit, Term, normalize


class _Tokens:
    def __init__(self, tokens, lineno):
        self.tokens = tokens
        self.pos = 0
        self.lineno = lineno

    def error(self, message):
        return SumFileError(message, self.lineno)

    def done(self):
        return self.pos >= len(self.tokens)

    def peek(self):
        if self.done():
            return None
        return self.tokens[self.pos]

    def next(self, what):
        if self.done():
            raise self.error(f"missing {what}")
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, keyword):
        token = self.next(f"keyword {keyword!r}")
        if token != keyword:
            raise self.error(f"expected {keyword!r}, found {token!r}")

    def real(self, what):
        token = self.next(what)
        try:
            value = float(token)
        except ValueError:
            raise self.error(f"invalid {what} {token!r}") from None
        if math.isnan(value):
            raise self.error(f"invalid {what} {token!r}")
        return value

    def natural(self, what):
        token = self.next(what)
        if not token.isdigit():
            raise self.error(f"{what} must be a natural number, found {token!r}")
        return int(token)

    def rational(self, what):
        token = self.next(what)
        try:
            return Fraction(token)
        except (ValueError, ZeroDivisionError):
            raise self.error(f"invalid {what} {token!r}") from None

    def finish(self):
        if not self.done():
            raise self.error(f"unexpected token {self.peek()!r}")


def _parse_domain(tokens):
    tokens.expect("N")
    lower = tokens.real("N")
    tokens.expect("upper")
    upper = tokens.real("upper boundary")
    tokens.expect("balanced")
    flag = tokens.next("balanced flag")
    if flag not in ("0", "1"):
        raise tokens.error(f"balanced flag must be 0 or 1, found {flag!r}")
    kappa = 16.0
    if tokens.peek() == "kappa":
        tokens.expect("kappa")
        kappa = tokens.real("kappa")
    tokens.finish()

    try:
        return DomainSpec(lower, upper, balanced=flag == "1", kappa=kappa)
    except ValueError as err:
        raise tokens.error(str(err)) from err


def _parse_tail(tokens):
    spec = tokens.next("tail coefficients")
    terms = []
    for item in spec.split(","):
        power, sep, coeff = item.partition(":")
        if not sep:
            raise tokens.error(f"tail entries read power:coefficient, found {item!r}")
        try:
            terms.append((int(power), float(coeff)))
        except ValueError:
            raise tokens.error(f"invalid tail entry {item!r}") from None
    try:
        return RationalTailUnit(terms)
    except ValueError as err:
        raise tokens.error(str(err)) from err


def _parse_table(tokens, base_dir):
    source = tokens.next("table path")
    tokens.expect("delta")
    delta = tokens.real("delta")
    log_power = 0
    if tokens.peek() == "logpow":
        tokens.expect("logpow")
        log_power = tokens.natural("logpow")

    path = Path(source)
    if not path.is_absolute():
        path = base_dir / path
    try:
        return TabulatedUnit.from_csv(path, delta, log_power=log_power, source=source)
    except OSError as err:
        raise tokens.error(f"cannot read table {source!r}: {err.strerror}") from err
    except (DataError, TraitError, ValueError) as err:
        raise tokens.error(f"table {source!r}: {err}") from err


def _parse_term(tokens, base_dir):
    tokens.expect("coeff")
    re = tokens.real("real part")
    im = tokens.real("imaginary part")
    tokens.expect("alpha")
    alpha = tokens.real("alpha")
    tokens.expect("beta")
    beta = tokens.rational("beta")
    tokens.expect("gamma")
    gamma = tokens.natural("gamma")
    tokens.expect("unit")

    kind = tokens.next("unit kind")
    if kind == "identity":
        unit = None
    elif kind == "tail":
        unit = _parse_tail(tokens)
    elif kind == "table":
        unit = _parse_table(tokens, base_dir)
    else:
        raise tokens.error(f"unknown unit kind {kind!r}")
    tokens.finish()

    try:
        return Term(complex(re, im), ExponentTriple(alpha, beta, gamma), unit)
    except (TraitError, ValueError) as err:
        raise tokens.error(str(err)) from err


def parse_sumfile(text, base_dir="."):
    """Parse the content of a sum file into a normalized prepared sum.

    Parameters
    ----------
    text : str
        Content of the file.
    base_dir : str or Path
        Directory used to resolve relative table paths.

    Raises
    ------
    SumFileError
        With the number of the offending line.

    """
    base_dir = Path(base_dir)
    domain = None
    terms = []

    for lineno, line in enumerate(text.splitlines(), start=1):
        words = line.split("#", 1)[0].split()
        if not words:
            continue
        tokens = _Tokens(words[1:], lineno)
        keyword = words[0]

        if keyword == "domain":
            if domain is not None:
                raise SumFileError("duplicate domain line", lineno)
            domain = _parse_domain(tokens)
        elif keyword == "term":
            terms.append(_parse_term(tokens, base_dir))
        else:
            raise SumFileError(f"unknown keyword {keyword!r}", lineno)

    if domain is None:
        raise SumFileError("missing domain line")
    if not terms:
        raise SumFileError("no term found")

    try:
        return normalize(terms, domain)
    except ValueError as err:
        raise SumFileError(str(err)) from err


def _format_unit(unit):
    if unit.kind == "identity":
        return "identity"
    if unit.kind == "tail":
        return "tail " + ",".join(f"{power}:{coeff!r}" for power, coeff in unit.terms)
    if not unit.source:
        raise SumFileError("tabulated units without a source file cannot be written")
    return f"table {unit.source} delta {unit.delta!r} logpow {unit.log_power}"


def format_sumfile(h):
    """Canonical text of a prepared sum (normalized term order, repr floats,
    beta as p/q, single trailing newline).

    """
    if h.domain is None:
        raise SumFileError("a sum file requires a domain")

    d = h.domain
    lines = [
        f"domain N {d.lower!r} upper {d.upper!r} balanced {int(d.balanced)} kappa {d.kappa!r}"
    ]
    for term in normalize(h).terms:
        e = term.exponent
        lines.append(
            f"term coeff {term.coeff.real!r} {term.coeff.imag!r} alpha {e.alpha!r} "
            f"beta {e.beta.numerator}/{e.beta.denominator} gamma {e.gamma} "
            f"unit {_format_unit(term.unit)}"
        )
    return "\n".join(lines) + "\n"


def read_sumfile(path):
    """Read a sum file; relative table paths resolve against its directory."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise SumFileError(f"cannot read {path}: {err.strerror}") from err
    return parse_sumfile(text, base_dir=path.parent)


def write_sumfile(h, path):
    Path(path).write_text(format_sumfile(h), encoding="utf-8")


def dumps_json(record, **extra):
    """JSON text of a record (or a plain dict), with extra top-level fields."""
    data = to_json_value(record)
    if not isinstance(data, dict):
        data = {"value": data}
    data = {**{key: to_json_value(value) for key, value in extra.items()}, **data}
    return json.dumps(data, indent=2, sort_keys=False)
