"""Exception types shared by the pipeline stages.

The CLI maps ``ConfigError`` to exit status 2, ``MasseyNotWellDefined`` to 3
and any other ``G2kitError`` to 1.
"""

from __future__ import annotations

from typing import Any


class G2kitError(Exception):
	"""Base class; ``stage`` names the pipeline step that failed, when known."""

	def __init__(self, message: str, stage: str | None = None):
		super().__init__(message)
		self.message = message
		self.stage = stage

	def __str__(self) -> str:
		if self.stage:
			return f"[{self.stage}] {self.message}"
		return self.message


class ConfigError(G2kitError):
	def __init__(self, path: str, message: str):
		super().__init__(f"{path}: {message}" if path else message, stage="config")
		self.path = path


class PipelineError(G2kitError):
	pass


class GroupClosureError(G2kitError):
	pass


class SingularLocusError(G2kitError):
	pass


class IntegrationError(G2kitError):
	pass


class DegeneratePairingError(G2kitError):
	pass


class ModelError(G2kitError):
	pass


class CobordismError(G2kitError):
	pass


class NonTransverseError(CobordismError):
	pass


class MasseyNotWellDefined(G2kitError):
	"""Raised when a·b or b·c is nonzero; the witnesses are the offending products."""

	def __init__(self, message: str, witnesses: dict[str, Any]):
		super().__init__(message, stage="massey")
		self.witnesses = witnesses
