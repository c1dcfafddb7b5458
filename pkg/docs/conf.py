#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# Assignflow documentation build configuration file.
# Build with ``make clean html`` or ``sphinx-build -b html . .build/html``.
#
import os
import sys
import sphinx_rtd_theme

sys.path.insert(0, os.path.abspath('../'))


def _version():
    """ Version written by setuptools_scm, without importing the package and its torch stack. """
    path = os.path.join(os.path.dirname(__file__), '..', 'assignflow', '_version.py')
    scope = {}
    try:
        with open(path) as f:
            exec(f.read(), scope)
    except FileNotFoundError:
        return 'develop'
    return scope['__version__']


# -- General configuration ------------------------------------------------
extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.viewcode',
    'sphinx.ext.napoleon',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.doctest',
]

napoleon_use_ivar = True
autodoc_member_order = 'bysource'
autodoc_mock_imports = ['torch', 'torchdiffeq', 'scipy']
intersphinx_mapping = {
    'pytorch': ('https://pytorch.org/docs/stable/', None),
    'python': ('https://docs.python.org/3', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
}

# Doctests run against the real packages, so they are not mocked there
doctest_global_setup = """
import torch
import assignflow as af
af.logger.setConsoleLevel('ERROR')
"""

source_parsers = {
    '.md': 'recommonmark.parser.CommonMarkParser',
}
source_suffix = ['.rst', '.md']
master_doc = 'index'

project = 'Assignflow'
copyright = '2026, Assignflow developers'
author = 'Assignflow developers'
version = release = _version()

language = None
exclude_patterns = ['.build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------
html_theme = 'sphinx_rtd_theme'
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
html_theme_options = {
    'collapse_navigation': False,
    'display_version': True,
}
htmlhelp_basename = 'Assignflowdoc'

# -- Options for other output ---------------------------------------------
man_pages = [(master_doc, 'assignflow', 'Assignflow Documentation', [author], 1)]
