"""Exception hierarchy shared by every module."""


class TreeDecompError(Exception):
    """Base class for all library errors."""


class InputError(TreeDecompError):
    """Malformed or unusable input (maps to exit code 2 on the CLI)."""


class FormatError(InputError):
    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.path = path
        self.line = line


class DuplicateEdge(InputError):
    pass


class SelfLoop(InputError):
    pass


class NotBipartite(InputError):
    def __init__(self, cycle: list[str]):
        super().__init__("odd cycle: " + "-".join(cycle))
        self.cycle = cycle


class PartitionMismatch(InputError):
    pass


class TooSmall(InputError):
    pass


class UnknownVertex(InputError):
    pass


class UncolouredEdge(InputError):
    pass


class NotATree(InputError):
    pass


class RootUnknown(InputError):
    pass


class NoLeafInTB(InputError):
    pass


class UnknownTreeVertex(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class ParameterOutOfRange(InputError):
    pass


class NotEquitable(InputError):
    def __init__(self, violations):
        super().__init__(f"colouring is not T-equitable ({len(violations)} violations)")
        self.violations = violations


class EmbeddingFailed(TreeDecompError):
    pass


class BudgetExhausted(TreeDecompError):
    """A bounded search stopped before reaching a definite answer."""


class DegreeTooSmall(TreeDecompError):
    pass


class ProfileMismatch(TreeDecompError):
    pass


class MalformedComponent(TreeDecompError):
    """The star graph has a component that is not a copy of T (internal bug)."""


class SharedVertexMismatch(TreeDecompError):
    pass


class Infeasible(TreeDecompError):
    def __init__(self, message: str, witness=None, stats=None):
        super().__init__(message)
        self.witness = witness
        self.stats = stats or {}
