"""Typed errors raised across the package.

Every error is a subclass of HilbertError so callers can catch the whole
family; the CLI maps them to exit code 3 (computation error) unless noted.
"""


class HilbertError(Exception):
    pass


# quadfield
class NotFundamentalDiscriminant(HilbertError):
    pass


class NarrowClassNumberNotOne(HilbertError):
    pass


class NotTotallyPositive(HilbertError):
    pass


class ZeroElement(HilbertError):
    pass


class FactorizationTooLarge(HilbertError):
    pass


class GeneratorSearchExhausted(HilbertError):
    pass


# scalars
class ReconstructionUnstable(HilbertError):
    pass


class CrossCheckFailed(HilbertError):
    pass


class GammaPole(HilbertError):
    pass


class ZetaArgumentOdd(HilbertError):
    pass


# fourier
class WeightMismatch(HilbertError):
    pass


class FieldMismatch(HilbertError):
    pass


class TailBoundTooLarge(HilbertError):
    pass


# modforms
class FitInconsistent(HilbertError):
    pass


class NumericCrossCheckFailed(HilbertError):
    pass


class SymmetryViolated(HilbertError):
    pass


class InsufficientTruncation(HilbertError):
    pass


# hecke
class NotStable(HilbertError):
    pass


class FactorizationFailed(HilbertError):
    pass


class EigenvalueCheckFailed(HilbertError):
    pass


class MissingPrime(HilbertError):
    pass


# kernels
class RegionViolation(HilbertError):
    pass


# lvalues
class NotInSpan(HilbertError):
    pass


class GridTooSparse(HilbertError):
    pass


# cli / cache
class CacheCorrupt(HilbertError):
    pass


class ConfigError(HilbertError):
    pass
