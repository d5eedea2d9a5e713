"""Error types shared across the package.

Every error carries a stable ``code`` string; the HTTP service and CLI
surface these codes verbatim, so they are part of the public contract.
"""

from __future__ import annotations

from typing import Any


class OccoError(Exception):
    """Base error. ``code`` is stable; ``detail`` holds structured context."""

    code = "internal-error"

    def __init__(self, message: str, **detail: Any):
        super().__init__(message)
        self.message = message
        self.detail = dict(detail)

    def with_detail(self, **extra: Any) -> "OccoError":
        merged = {**self.detail, **extra}
        err = type(self)(self.message, **merged)
        return err

    def __str__(self) -> str:  # pragma: no cover - repr convenience
        if self.detail:
            return f"{self.code}: {self.message} {self.detail}"
        return f"{self.code}: {self.message}"


# --- schema layer ---

class UnknownTermError(OccoError):
    code = "unknown-term"


class DuplicateIdError(OccoError):
    code = "duplicate-id"


class DanglingParentError(OccoError):
    code = "dangling-parent"


class CycleIntroducedError(OccoError):
    code = "cycle-introduced"


class SchemaConsistencyError(OccoError):
    """A malformed built-in registry; always a defect, never user input."""

    code = "schema-inconsistent"


# --- graph layer ---

class UnknownClassError(OccoError):
    code = "unknown-class"


class AbstractClassError(OccoError):
    code = "abstract-class"


class DanglingEndpointError(OccoError):
    code = "dangling-endpoint"


class SignatureViolationError(OccoError):
    code = "signature-violation"


class UnknownAssertionError(OccoError):
    code = "unknown-assertion"


class AlreadyClosedError(OccoError):
    code = "already-closed"


class UnknownEntityError(OccoError):
    code = "unknown-entity"


class TemporalOrderError(OccoError):
    code = "temporal-order"


class ParseError(OccoError):
    code = "parse-error"


# --- validity layer ---

class WrongClassError(OccoError):
    code = "wrong-class"


class NotACredentialError(OccoError):
    code = "not-a-credential"


# --- ctdl layer ---

class DuplicateCtidError(OccoError):
    code = "duplicate-ctid"


class DanglingOrganizationError(OccoError):
    code = "dangling-organization"


# --- matcher layer ---

class UncoverableGapError(OccoError):
    code = "uncoverable-gap"


class UnknownTemplateError(OccoError):
    code = "unknown-template"


class NoTemplatesError(OccoError):
    code = "provider-has-no-templates"
