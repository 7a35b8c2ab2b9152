"""Error taxonomy shared by all modules.

The CLI maps these onto process exit codes: configuration / parse problems
exit 2, numerical-domain problems exit 3, I/O problems exit 4.
"""


class ConfigurationError(ValueError):
    """Invalid construction parameters (counts, widths, sample sizes, ...)."""


class DegenerateInputError(ValueError):
    """Input that is formally valid but has no usable content (e.g. zero norm)."""


class NumericalDomainError(ArithmeticError):
    """Non-finite values or results outside the mathematically valid domain."""


class ContractViolationError(RuntimeError):
    """A documented precondition was violated (wrong basis tag, unnormalized state, ...)."""


class ScenarioParseError(ValueError):
    """Scenario or sweep file does not conform to the published schema."""
