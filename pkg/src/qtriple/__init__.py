"""qtriple: exact verification workbench for q-series identities of
Abel-Rothe type (triple-product generalizations, their multidimensional
extensions, and the classical summations they terminate to)."""

from .laurent import LaurentPoly
from .series import DEFAULT_GRADING, Inv, TruncatedSeries, WeightMap, series_product

__version__ = "0.1.0"

__all__ = [
    "LaurentPoly",
    "TruncatedSeries",
    "WeightMap",
    "DEFAULT_GRADING",
    "Inv",
    "series_product",
    "__version__",
]
