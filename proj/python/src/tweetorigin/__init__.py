"""Tweet origin geotagging: gazetteer geocoding, mention extraction,
evidence classification and location-vector voting."""

from tweetorigin._core import (
    Index,
    Pipeline,
    cohen_kappa,
    conclusive,
    filter_surfaces,
    normalize_country,
    preprocess,
    vote,
)

__all__ = [
    "Index",
    "Pipeline",
    "cohen_kappa",
    "conclusive",
    "filter_surfaces",
    "normalize_country",
    "preprocess",
    "vote",
]
