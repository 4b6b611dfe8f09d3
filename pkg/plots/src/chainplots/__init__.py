"""Batch figure rendering for wignerchain CSV output."""

__version__ = "0.1.0"

from .figures import FIGURE_IDS, FigureSpec, build_figure, make_spec, render
from .io import BadInput, MissingColumn, Table, load_table
