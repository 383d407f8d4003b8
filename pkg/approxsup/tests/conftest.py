#!/usr/bin/env python

# Copyright (c) approxsup developers.
# Distributed under the terms of the Modified BSD License.

import pytest

from approxsup.options import set_options
from approxsup.termalg import DomainSpec, make_sum


@pytest.fixture(autouse=True)
def fixed_options():
    with set_options(seed=0) as options:
        yield options


@pytest.fixture
def neg_sum():
    return make_sum([(1.0, 0.0, -2, 0), (0.5, 0.0, -1, 1)], DomainSpec(10.0))


@pytest.fixture
def sumfile(tmp_path):
    def write(text, name="h.sum"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write


@pytest.fixture
def samples_csv(tmp_path):
    def write(x, v, name="samples.csv"):
        path = tmp_path / name
        lines = ["x,value"] + [f"{float(xi)!r},{float(vi)!r}" for xi, vi in zip(x, v)]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return write
