"""Functional calculus for definitizable normal operators on
finite-dimensional indefinite inner product spaces."""

from .bipoly import (
    BiPoly,
    RealPoly,
    ZeroGrid,
    euclidean_reduce,
    grid_jets,
    hermite_matrix,
    interpolate_jets,
)
from .calculus import (
    CalculusContext,
    CalculusFunction,
    CriticalSet,
    Disk,
    Rect,
    RegionUnion,
    function_from_dict,
    region_from_dict,
)
from .embed import EmbeddingBundle, build_bundle, gram_factor
from .errors import (
    BoundaryError,
    ConditioningError,
    ConstructionError,
    DegenerateInputError,
    DomainMismatchError,
    KreinCalcError,
    NotInCommutantError,
    NotInIdealError,
    NotInvertibleError,
    NotNormalError,
    NotPsdError,
    SearchFailedError,
    ShapeMismatchError,
    ValidationError,
)
from .instances import Instance, generate, parse_instance
from .jets import Jet, JetShape
from .krein import (
    DefinitizablePair,
    KreinSpace,
    search_definitizing,
    split_normal,
    verify_definitizing,
)
from .spectral import SpectralData, augmented_integral, diagonalize, spectral_integral
from .suite import Report, run_suite
from .tol import DEFAULT_TOL, Tolerances

__version__ = "0.1.0"

__all__ = [
    "BiPoly",
    "BoundaryError",
    "CalculusContext",
    "CalculusFunction",
    "ConditioningError",
    "ConstructionError",
    "CriticalSet",
    "DEFAULT_TOL",
    "DefinitizablePair",
    "DegenerateInputError",
    "Disk",
    "DomainMismatchError",
    "EmbeddingBundle",
    "Instance",
    "Jet",
    "JetShape",
    "KreinCalcError",
    "KreinSpace",
    "NotInCommutantError",
    "NotInIdealError",
    "NotInvertibleError",
    "NotNormalError",
    "NotPsdError",
    "RealPoly",
    "Rect",
    "RegionUnion",
    "Report",
    "SearchFailedError",
    "ShapeMismatchError",
    "SpectralData",
    "Tolerances",
    "ValidationError",
    "ZeroGrid",
    "augmented_integral",
    "build_bundle",
    "diagonalize",
    "euclidean_reduce",
    "function_from_dict",
    "generate",
    "gram_factor",
    "grid_jets",
    "hermite_matrix",
    "interpolate_jets",
    "parse_instance",
    "region_from_dict",
    "run_suite",
    "search_definitizing",
    "spectral_integral",
    "split_normal",
    "verify_definitizing",
]
