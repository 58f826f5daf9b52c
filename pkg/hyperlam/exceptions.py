"""Error hierarchy shared by the library and the command line."""


class HyperlamError(Exception):
    """Base class for every error raised by hyperlam."""


class InputError(HyperlamError):
    """Malformed or inconsistent input. The CLI maps these to exit code 3."""


class RankMismatch(InputError):
    """A label, edge or hypergraph has the wrong rank for its position."""


class UnknownEdge(InputError):
    """An edge id does not exist in the hypergraph."""


class UnknownNode(InputError):
    """A node id does not exist in the hypergraph."""


class UnknownLabel(InputError):
    """A label name is not registered in the alphabet."""


class BothRanked(InputError):
    """Disjoint union of two hypergraphs that both have external nodes."""


class ArityMismatch(InputError):
    """Interface maps disagree in length."""


class InvalidType(InputError):
    """A type expression violates its well-formedness conditions."""


class InvalidRule(InputError):
    """A DPO rule or grammar is malformed."""


class InvalidContext(InputError):
    """A context does not present the hypergraph as an occurrence of the rule's left side."""


class EncodingError(InputError):
    """A grammar cannot be converted by the requested construction."""


class ConfigError(InputError):
    """A search or command budget is not positive."""


class ParseError(InputError):
    """A document could not be parsed.

    Attributes:
        location: Where the problem was found (file and JSON path).
    """

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class BudgetExceeded(HyperlamError):
    """A search hit its state cap before reaching a verdict."""


class SearchInvariantError(HyperlamError):
    """The proof search violated its own termination metric."""
