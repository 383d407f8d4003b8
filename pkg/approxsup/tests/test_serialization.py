import json

import numpy as np
import pytest

from approxsup.errors import SumFileError
from approxsup.serialization import (
    dumps_json,
    format_sumfile,
    parse_sumfile,
    read_sumfile,
    write_sumfile,
)
from approxsup.termalg import DomainSpec, PreparedSum, TabulatedUnit, Term, make_sum

CANONICAL = """\
domain N 10.0 upper inf balanced 0 kappa 16.0
term coeff 0.5 0.0 alpha 0.0 beta 0/1 gamma 0 unit identity
term coeff 1.0 -2.0 alpha 3.0 beta 0/1 gamma 0 unit identity
term coeff 0.25 0.0 alpha 0.0 beta -1/2 gamma 1 unit tail 1:0.5,2:0.25
term coeff 1.0 0.0 alpha 0.0 beta -2/1 gamma 0 unit identity
"""


def test_parse_sumfile():
    h = parse_sumfile(CANONICAL)

    assert h.domain == DomainSpec(10.0)
    assert len(h) == 4
    assert h.terms[1].coeff == 1 - 2j
    assert h.terms[2].unit.kind == "tail"
    assert h.terms[2].unit.terms == [(1, 0.5), (2, 0.25)]
    assert str(h.terms[3].exponent.beta) == "-2"


def test_format_sumfile_canonical():
    assert format_sumfile(parse_sumfile(CANONICAL)) == CANONICAL


def test_format_sumfile_normalizes():
    text = """\
# shuffled, with comments and a split term
domain N 10 upper inf balanced 0
term coeff 1 0 alpha 0 beta -2 gamma 0 unit identity   # decaying
term coeff 0.25 0 alpha 0 beta 0 gamma 0 unit identity

term coeff 0.25 0 alpha 0 beta 0 gamma 0 unit identity
term coeff 1 -2 alpha 3 beta 0 gamma 0 unit identity
term coeff 0.25 0 alpha 0 beta -0.5 gamma 1 unit tail 2:0.25,1:0.5
"""
    assert format_sumfile(parse_sumfile(text)) == CANONICAL


def test_sumfile_bounded_balanced():
    text = "domain N 2.0 upper 8.0 balanced 1 kappa 4.0\n"
    text += "term coeff 1.0 0.0 alpha 0.0 beta 1/1 gamma 0 unit identity\n"
    h = parse_sumfile(text)

    assert h.domain.balanced
    assert h.domain.kappa == 4.0
    assert format_sumfile(h) == text


def test_sumfile_table_unit(tmp_path):
    y = np.geomspace(10.0, 1e8, 20)
    lines = ["y,f"] + [f"{float(v)!r},{1.0 + 1e-3 / float(v)!r}" for v in y]
    (tmp_path / "unit.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    text = "domain N 10.0 upper inf balanced 0 kappa 16.0\n"
    text += "term coeff 1.0 0.0 alpha 0.0 beta -1/1 gamma 0 unit table unit.csv delta 0.001"
    text += " logpow 0\n"
    path = tmp_path / "h.sum"
    path.write_text(text, encoding="utf-8")

    h = read_sumfile(path)
    unit = h.terms[0].unit
    assert isinstance(unit, TabulatedUnit)
    assert unit.source == "unit.csv"
    assert unit.delta == 0.001
    assert unit(y[5]) == pytest.approx(1.0 + 1e-3 / y[5])
    assert format_sumfile(h) == text


@pytest.mark.parametrize(
    "text,match",
    [
        ("term coeff 1 0 alpha 0 beta -1 gamma 0 unit identity\n", "missing domain line"),
        ("domain N 10 upper inf balanced 0\n", "no term found"),
        (
            "domain N 10 upper inf balanced 0\ndomain N 10 upper inf balanced 0\n",
            "line 2: duplicate domain line",
        ),
        ("domain N 10 upper inf balanced 0\nterms\n", "line 2: unknown keyword 'terms'"),
        ("domain N 10 upper inf balanced 2\n", "line 1: balanced flag must be 0 or 1"),
        ("domain N 0.5 upper inf balanced 0\n", "line 1: lower boundary must be > 1"),
        ("domain N 10 upper 50 balanced 0\n", "line 1: unbalanced cell requires"),
        ("domain N ten upper inf balanced 0\n", "line 1: invalid N 'ten'"),
        ("domain N 10 upper inf\n", "line 1: missing keyword 'balanced'"),
        (
            "# header\ndomain N 10 upper inf balanced 0\n"
            "term coeff 1 0 alpha 0 beta x gamma 0 unit identity\n",
            "line 3: invalid beta 'x'",
        ),
        (
            "domain N 10 upper inf balanced 0\n"
            "term coeff 1 0 alpha 0 beta -1 gamma 1.5 unit identity\n",
            "line 2: gamma must be a natural number",
        ),
        (
            "domain N 10 upper inf balanced 0\n"
            "term coeff 1 0 alpha 0 beta -1 gamma 0 unit spline\n",
            "line 2: unknown unit kind 'spline'",
        ),
        (
            "domain N 10 upper inf balanced 0\n"
            "term coeff 1 0 alpha 0 beta -1 gamma 0 unit tail 0:1.0\n",
            "line 2: tail powers must be >= 1",
        ),
        (
            "domain N 10 upper inf balanced 0\n"
            "term coeff 1 0 alpha 0 beta -1 gamma 0 unit tail 1=1.0\n",
            "line 2: tail entries read power:coefficient",
        ),
        (
            "domain N 10 upper inf balanced 0\n"
            "term coeff 1 0 alpha 0 beta -1 gamma 0 unit identity extra\n",
            "line 2: unexpected token 'extra'",
        ),
        (
            "domain N 10 upper inf balanced 0\n"
            "term coeff 1 0 alpha 0 beta -1 gamma 0 unit table missing.csv delta 0.1\n",
            "line 2: cannot read table 'missing.csv'",
        ),
    ],
)
def test_parse_sumfile_errors(text, match, tmp_path):
    with pytest.raises(SumFileError, match=match):
        parse_sumfile(text, base_dir=tmp_path)


def test_read_sumfile_missing(tmp_path):
    with pytest.raises(SumFileError, match="cannot read"):
        read_sumfile(tmp_path / "missing.sum")


def test_write_sumfile(tmp_path):
    h = parse_sumfile(CANONICAL)
    path = tmp_path / "out.sum"
    write_sumfile(h, path)

    assert path.read_text(encoding="utf-8") == CANONICAL
    assert read_sumfile(path) == h


def test_format_sumfile_errors():
    with pytest.raises(SumFileError, match="requires a domain"):
        format_sumfile(make_sum([(1.0, 0.0, -1, 0)]))

    unit = TabulatedUnit(lambda y: np.ones_like(y), 0.1)
    h = PreparedSum([Term(1.0, (0.0, -1, 0), unit)], DomainSpec(10.0))
    with pytest.raises(SumFileError, match="without a source file"):
        format_sumfile(h)


def test_dumps_json():
    h = make_sum([(1.0, 0.0, -2, 0)], DomainSpec(10.0))
    data = json.loads(dumps_json(h.domain, passed=True, ratio=float("inf")))

    assert list(data) == ["passed", "ratio", "lower", "upper", "balanced", "kappa"]
    assert data["ratio"] == "inf"
    assert data["upper"] == "inf"
    assert data["lower"] == 10.0

    assert json.loads(dumps_json([1, 2])) == {"value": [1, 2]}
