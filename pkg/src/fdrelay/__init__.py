"""Throughput of half- and full-duplex relaying under fixed and reactive relay selection.

The package combines a cumulant model of Poisson-field interference, the
probability generating function of a binary splitting-tree contention, and a
three-state semi-Markov renewal-reward model. Each analytical piece has a
Monte Carlo counterpart in :mod:`fdrelay.montecarlo` or next to the code it
checks.
"""

from fdrelay.fading import CompositeFadingParams, LognormalParams, XI
from fdrelay.interference import AnnulusField, CumulantVector, SelfInterference
from fdrelay.scenario import ScenarioConfig, ScenarioResult, evaluate_point, sweep, validate

__all__ = [
    "XI",
    "AnnulusField",
    "CompositeFadingParams",
    "CumulantVector",
    "LognormalParams",
    "ScenarioConfig",
    "ScenarioResult",
    "SelfInterference",
    "evaluate_point",
    "sweep",
    "validate",
]

__version__ = "0.1.0"
