"""Exception hierarchy shared by the library and the command-line front end."""

from __future__ import annotations


class TransportHessianError(RuntimeError):
    """Base error; `exit_code` is what the CLI returns when this escapes a command."""

    exit_code = 1


# density


class DensityError(TransportHessianError):
    exit_code = 10


class NonPositiveDensity(DensityError):
    exit_code = 11


class NotNormalizable(DensityError):
    exit_code = 12


class TooFewNodes(DensityError):
    exit_code = 13


class TooFewSamples(DensityError):
    exit_code = 14


class DegenerateSamples(DensityError):
    exit_code = 15


class InvalidSupport(DensityError):
    exit_code = 16


# entropy


class EntropyError(TransportHessianError):
    exit_code = 17


class InvalidGamma(EntropyError):
    exit_code = 18


class NonConvex(EntropyError):
    exit_code = 19


class DomainError(EntropyError):
    """h is undefined (its defining integral diverges) at the requested argument."""

    exit_code = 20


class QuadratureDivergence(DomainError):
    exit_code = 21


class HInversionOutOfRange(EntropyError):
    exit_code = 22


class UndefinedEntropyFunction(EntropyError):
    exit_code = 23


# hessian


class NotMeanZero(TransportHessianError):
    exit_code = 24


class PerturbedDensityInvalid(TransportHessianError):
    exit_code = 25


# parameters and I/O


class InvalidParameter(TransportHessianError):
    exit_code = 26


class InputFileNotFound(TransportHessianError):
    exit_code = 27


class ParseError(TransportHessianError):
    exit_code = 28


class OutputWriteError(TransportHessianError):
    exit_code = 29


class ConfigError(TransportHessianError):
    exit_code = 30


__all__ = [
    "TransportHessianError",
    "DensityError",
    "NonPositiveDensity",
    "NotNormalizable",
    "TooFewNodes",
    "TooFewSamples",
    "DegenerateSamples",
    "InvalidSupport",
    "EntropyError",
    "InvalidGamma",
    "NonConvex",
    "DomainError",
    "QuadratureDivergence",
    "HInversionOutOfRange",
    "UndefinedEntropyFunction",
    "NotMeanZero",
    "PerturbedDensityInvalid",
    "InvalidParameter",
    "InputFileNotFound",
    "ParseError",
    "OutputWriteError",
    "ConfigError",
]
