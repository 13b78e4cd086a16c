"""Figure renderers for qrtlab dataset and report CSVs."""

from .figures import FIGURE_IDS, PlotSpec, render
from .io import FAMILY_COLORS, WITNESS_IDS, SchemaError

__version__ = "0.1.0"

__all__ = [
    "FAMILY_COLORS",
    "FIGURE_IDS",
    "PlotSpec",
    "SchemaError",
    "WITNESS_IDS",
    "render",
]
