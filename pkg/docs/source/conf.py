"""Sphinx configuration for the lynperm documentation."""
import os
import sys

import sphinx_rtd_theme

sys.path.insert(0, os.path.abspath('../..'))

import lynperm  # noqa: E402

project = 'lynperm'
copyright = '2026, lynperm developers'
author = 'lynperm developers'
version = lynperm.__version__
release = version

# the tutorial page is the README without its title
with open('tutorial.md', 'w') as of:
    content = open('../../README.md').read()
    of.write(content[content.index('##'):])

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
    'recommonmark',
]

autoclass_content = 'both'
autodoc_member_order = 'bysource'

source_suffix = ['.rst', '.md']
master_doc = 'index'
exclude_patterns = []
pygments_style = 'friendly'

html_theme = 'sphinx_rtd_theme'
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
htmlhelp_basename = 'lynpermdoc'

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'sympy': ('https://docs.sympy.org/latest', None),
}
