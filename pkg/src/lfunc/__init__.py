"""Numerics for L-functionals of distributions and regression models.

The package evaluates linear functionals T(F) = int Q(p) dG(p) of quantile
functions against signed weight measures G: construction of the measures
(weight_systems), evaluation and series approximation (lfunctionals),
estimation from samples with asymptotic variances (lstatistics), conditional
response distributions in quantile-regression models (quantile_regression),
censored-data estimators (censored), grouped-data analysis (analysis), and
the ``lf`` command line front end (cli).
"""

__version__ = "0.1.0"

from .distributions import make_distribution, parse_family
from .weight_systems import (
    PolynomialSystem,
    RatioMeasure,
    WeightMeasure,
    classify_order,
    gram_schmidt_eps,
    make_classical,
    system_weight,
)

__all__ = [
    "__version__",
    "make_distribution",
    "parse_family",
    "PolynomialSystem",
    "RatioMeasure",
    "WeightMeasure",
    "classify_order",
    "gram_schmidt_eps",
    "make_classical",
    "system_weight",
]
