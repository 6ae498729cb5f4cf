"""Exception types shared across the package."""


class ZonoidsError(Exception):
    """Base class for package-specific failures."""


class SchemaError(ValueError):
    """A JSON document does not match the expected schema (unknown or missing fields)."""


class DiagnosticError(ZonoidsError):
    """A numerical diagnostic fired: the computation cannot be trusted.

    Examples: a running mean that diverges (non-integrable sampler), sampled
    negativity for a law declared positive.
    """


class InternalConsistencyError(DiagnosticError):
    """Two routes that must agree produced different verdicts.

    Raised loudly because it indicates an implementation bug, not bad input.
    """


class BoundedSupportError(ValueError):
    """Location-scale recovery refused: the base law has bounded support.

    With a bounded base the positive-part expectation no longer pins down the
    scale parameter, so recovery would silently return garbage.
    """


class NoOracleError(ZonoidsError):
    """The sequence model has no closed-form ergodic limit."""
