"""Exception types shared across the package."""


class ClaimverifyError(Exception):
    """Base class for all package errors."""


class ParseError(ClaimverifyError):
    """A dataset or artifact file is syntactically malformed."""


class IntegrityError(ClaimverifyError):
    """A record violates a dataset invariant (duplicate ids, bad references, ...)."""


class ContractError(ClaimverifyError):
    """A value handed to the API violates its contract."""


class ConfigError(ClaimverifyError):
    """A run configuration is invalid or inconsistent."""


class FingerprintError(ClaimverifyError):
    """An artifact was produced under a different configuration fingerprint."""


class TransportError(ClaimverifyError):
    """A remote scorer could not be reached (retry policy exhausted)."""


class ProtocolError(ClaimverifyError):
    """A scorer reply does not conform to the scoring protocol."""


class StageError(ClaimverifyError):
    """A pipeline stage failed; carries the stage name and offending claim."""

    def __init__(self, stage: str, claim_id: int | None, cause: Exception):
        self.stage = stage
        self.claim_id = claim_id
        self.cause = cause
        where = f"claim {claim_id}" if claim_id is not None else "setup"
        super().__init__(f"stage '{stage}' failed at {where}: {cause}")
