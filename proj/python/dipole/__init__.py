"""Topology-preserving dimensionality reduction."""

from ._core import (
    ConnectivityError,
    DipoleError,
    NumericalError,
    ParameterError,
    ValidationError,
    circle,
    euclidean_distances,
    evaluate,
    geodesic_distances,
    isomap,
    optimize,
    rips_diagrams,
    swiss_roll,
    torus,
    wasserstein,
)

__version__ = "0.1.0"
