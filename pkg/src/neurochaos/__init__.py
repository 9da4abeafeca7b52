"""Neurochaos learning: chaotic GLS-neuron feature extraction (ChaosFEX)
with SVM classifiers, plus the data generators, genome preprocessing and
experiment harness used to evaluate it."""

__version__ = "0.1.0"

from .chaosfex import ChaosFeatures, transform
from .config import ExperimentConfig, load_config
from .errors import (ApproximationError, ArgumentError, DataError, NeurochaosError,
                     ProtocolError, TrainingError)
from .gls import GlsParams, approximate_function, fire, firing_times
from .metrics import ClassificationReport, report

__all__ = [
    "__version__", "ChaosFeatures", "transform", "ExperimentConfig", "load_config",
    "ApproximationError", "ArgumentError", "DataError", "NeurochaosError", "ProtocolError",
    "TrainingError", "GlsParams", "approximate_function", "fire", "firing_times",
    "ClassificationReport", "report",
]
