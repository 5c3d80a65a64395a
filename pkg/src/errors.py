"""Exceptions shared by the generator, the oracles and the entry points."""


class ConfigurationError(ValueError):
    """Unsupported or malformed setup / run configuration."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class FrameMismatchError(TypeError):
    """Vectors from incompatible frames (t vs t*) or different flag varieties."""


class HypothesisRefusal(Exception):
    """The setup violates a standing hypothesis; generation refuses to run."""


class FingerprintMismatch(Exception):
    """A polytope is used against a setup it was not generated for."""


# Exit codes of the command-line tool
EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_REFUSED = 3
