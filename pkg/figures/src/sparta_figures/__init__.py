"""Paper-style figure rendering for experiment result directories."""

from .render import FIGURE_KINDS, FigureSpec, SchemaError, render

__version__ = "0.1.0"
