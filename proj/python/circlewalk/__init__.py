"""Exact piecewise-affine circle maps, Thompson's group T and random-walk statistics."""

from ._core import (
    CircleMap,
    ConfigError,
    GeneratorSet,
    StepDistribution,
    bernoulli_entropy,
    default_generators,
    default_lazy_measure,
    default_measure,
    default_relations,
    defaults,
    entropy_curve,
    lazify,
    power,
    remark_element,
    run,
    subcommands,
    version,
)

__version__ = version()

__all__ = [
    "CircleMap",
    "ConfigError",
    "GeneratorSet",
    "StepDistribution",
    "bernoulli_entropy",
    "default_generators",
    "default_lazy_measure",
    "default_measure",
    "default_relations",
    "defaults",
    "entropy_curve",
    "lazify",
    "power",
    "remark_element",
    "run",
    "subcommands",
    "version",
]
