"""Figure rendering for fracwave experiment outputs."""

from .figures import KINDS, FigureSpec, SchemaError, build_figure, load_figure_spec, render

__version__ = "0.1.0"

__all__ = ["KINDS", "FigureSpec", "SchemaError", "build_figure",
           "load_figure_spec", "render"]
