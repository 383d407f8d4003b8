#!/usr/bin/env python

# Copyright (c) approxsup developers.
# Distributed under the terms of the Modified BSD License.

__version__ = "0.1.0"
