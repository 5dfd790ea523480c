"""Fitness Dependent Optimizer (FDO) and its chaotic variant (CFDO)."""

from .chaos import ChaoticGenerator, MapKind, chaotic_sequence
from .exceptions import (
    CfdoError,
    ConfigError,
    DegenerateSampleError,
    DimensionError,
    EncodingError,
    ParseError,
    SizeError,
    UnknownObjectiveError,
)
from .objectives import BoundedDomain, ObjectiveSpec, TransformData, get_objective, load_transform, registry_names
from .optimizer import (
    ChaoticFitnessDependentOptimizer,
    FdoConfig,
    FitnessDependentOptimizer,
    RunRecord,
    optimize,
)

__version__ = "0.1.0"
from .stats import SampleSet, TestResult, aggregate, ranksum
from .experiment import ExperimentConfig, ExperimentReport, run_experiment
