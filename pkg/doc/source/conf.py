# -*- coding: utf-8 -*-
#
# DW-MTJ Toolbox documentation build configuration file.
#
# Only the HTML output with the basicstrap theme is configured.

import os
import sys
sys.path.insert(0, os.path.abspath('../..'))

from dwmtj_toolbox.constants import project_version

# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.autodoc',
              'sphinx.ext.autosectionlabel',
              'sphinx.ext.todo',
              'sphinx.ext.imgmath',
              'sphinxjp.themes.basicstrap']

# docstrings use reST field lists, members are listed in source order
autodoc_member_order = 'bysource'
autosectionlabel_prefix_document = True

source_suffix = '.rst'
master_doc = 'index'

project = u'DW-MTJ Toolbox'
copyright = u'2026, DW-MTJ Toolbox developers'
author = u'DW-MTJ Toolbox developers'

version = u'.'.join(project_version[:3])
release = u'.'.join(project_version)

exclude_patterns = []
pygments_style = 'sphinx'
todo_include_todos = True
numfig = True

# -- Options for HTML output ----------------------------------------------

html_theme = 'basicstrap'
html_theme_options = {
    'header_inverse': False,
    'relbar_inverse': False,
    'inner_theme': True,
    'inner_theme_name': 'bootswatch-cosmo',
    'content_fixed': True,
    'content_width': '1000px'
}

html_sidebars = {
    '**': [
        'relations.html',
        'searchbox.html',
    ]
}

htmlhelp_basename = 'DwMtjToolboxdoc'
