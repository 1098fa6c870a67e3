"""Initialization for the scripts package.

This module exports the CSV/SVG writers and the command-line entry point.
"""

from .export_csv import *
from .generate_graph import *
from .cli import main
