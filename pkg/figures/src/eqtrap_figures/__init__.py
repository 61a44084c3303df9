"""Static figure rendering for sweep CSV files."""

from .render import FigureSpec, RenderError, build_figure, render

__all__ = ["FigureSpec", "RenderError", "build_figure", "render"]
