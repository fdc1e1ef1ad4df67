# -*- coding: utf-8 -*-
#
# Sidforge documentation build configuration file.
#
import os
import sys
import sphinx_rtd_theme

sys.path.insert(0, os.path.abspath('..'))

import sidforge

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx_paramlinks',
    'sphinx.ext.intersphinx',
]

autodoc_member_order = 'groupwise'

intersphinx_mapping = {'python': ('https://docs.python.org/3', None),
                       'numpy': ('https://numpy.org/doc/stable/', None),
                       'scipy': ('https://docs.scipy.org/doc/scipy/', None)}

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'Sidforge'
copyright = '2026 sidforge authors'
author = 'sidforge authors'

version = sidforge.__version__
release = ''

language = 'en'
exclude_patterns = ['_build']
show_authors = False

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
htmlhelp_basename = 'sidforgedoc'

# -- Options for manual page output ---------------------------------------

man_pages = [
    ('man/sid-forge', 'sid-forge', 'Semantic ID collision toolkit', '', 1),
]
