"""Sphinx configuration for the selectq API pages."""

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

from selectq import __version__  # noqa: E402

project = "selectq"
author = "selectq developers"
copyright = "2026, selectq developers"
release = __version__

extensions = ["sphinx.ext.autodoc"]
autodoc_member_order = "bysource"

html_theme = "alabaster"
