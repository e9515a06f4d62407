"""Persistent homology of featured time series."""

from ._feathom import (
    BoundsError,
    DomainError,
    EMPTY_FIRST,
    EMPTY_ZEROTH,
    FeathomError,
    FeatureSet,
    FeaturedSeries,
    FormatError,
    InfluenceVector,
    InputError,
    ResourceError,
    SchemaError,
    StructureError,
    asc_curve,
    bottleneck_distance,
    diagram_stats,
    distance_matrix,
    landscape,
    landscape_norm,
    music_stats_grid,
    overlapping_percentage,
    persistence,
    stability_check,
    stock_preprocess,
    tasc_curve,
    weighted_graph,
)

__all__ = [
    "BoundsError",
    "DomainError",
    "EMPTY_FIRST",
    "EMPTY_ZEROTH",
    "FeathomError",
    "FeatureSet",
    "FeaturedSeries",
    "FormatError",
    "InfluenceVector",
    "InputError",
    "ResourceError",
    "SchemaError",
    "StructureError",
    "asc_curve",
    "bottleneck_distance",
    "diagram_stats",
    "distance_matrix",
    "landscape",
    "landscape_norm",
    "music_stats_grid",
    "overlapping_percentage",
    "persistence",
    "stability_check",
    "stock_preprocess",
    "tasc_curve",
    "weighted_graph",
]
