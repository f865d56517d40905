"""Exception hierarchy shared by all ingrex modules.

Every domain failure raises a subclass of :class:`IngrexError`, so callers
(CLI, HTTP handlers) can map errors to exit codes / status codes without
matching on message strings.
"""

from __future__ import annotations


class IngrexError(Exception):
    """Base class for all domain errors raised by this package."""


class OutOfRange(IngrexError):
    """An index (node id, edge endpoint) is outside its valid range."""


class DuplicateEdge(IngrexError):
    """The same directed edge was supplied more than once."""


class EmptyGraph(IngrexError):
    """An operation requires a graph with at least one node."""


class DimensionMismatch(IngrexError):
    """Operands have incompatible shapes."""


class ShapeMismatch(DimensionMismatch):
    """Gradient/parameter shape disagreement during an optimizer step."""


class InvalidParams(IngrexError):
    """Generator parameters violate their preconditions."""


class InvalidConfig(IngrexError):
    """A training configuration violates its preconditions."""


class MisalignedMask(IngrexError):
    """An edge mask does not line up with the sparse matrix it gates."""


class BadDistribution(IngrexError):
    """A vector expected to be a probability distribution is not one."""


class TargetOutOfRange(OutOfRange):
    """The node targeted by an explanation does not exist."""


class IncompatibleModel(IngrexError):
    """A model cannot be applied to the given graph or dataset."""


class DatasetMismatch(IngrexError):
    """A model/report was requested against a dataset it was not built for."""


class TooManyFeatures(IngrexError):
    """Exact Shapley enumeration was requested beyond its feature budget."""


class TooFewSamples(IngrexError):
    """Kernel SHAP was given fewer coalition samples than it needs."""


class EmptySample(IngrexError):
    """An aggregate was requested over zero samples."""


class NoSameClassItem(IngrexError):
    """No other index item shares the query's class."""


class NoDiffClassItem(IngrexError):
    """No index item has a class different from the query's."""


class NotFound(IngrexError):
    """A dataset or model id is unknown to the registry."""


class ParseError(IngrexError):
    """A stored dataset/checkpoint file could not be parsed."""
