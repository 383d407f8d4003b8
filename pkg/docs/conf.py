# -*- coding: utf-8 -*-
from traitlets import HasTraits

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
    "myst_parser",
]

source_suffix = [".rst", ".md"]

# The master toctree document.
master_doc = "index"

# General information about the project.
project = "approxsup"
copyright = "2026, approxsup developers"
author = "approxsup developers"

exclude_patterns = ["_build"]

templates_path = ["_templates"]

highlight_language = "python"

# The name of the Pygments (syntax highlighting) style to use.
pygments_style = "sphinx"


# -- Options for HTML output ----------------------------------------------

html_theme = "pydata_sphinx_theme"

# Output file base name for HTML help builder.
htmlhelp_basename = "approxsupdoc"

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable", None),
    "traitlets": ("https://traitlets.readthedocs.io/en/stable", None),
}


def skip_traits_members(app, what, name, obj, skip, options):
    """Be succinct and skip showing all traitlets.HasTraits members."""
    if name in HasTraits.__dict__:
        return True

    return None


def setup(app):
    app.connect("autodoc-skip-member", skip_traits_members)
