"""Preset pipelines shared by the test modules; each is computed once per session."""

from __future__ import annotations

from functools import lru_cache

from g2kit._config import parseConfig
from g2kit._exteriorAlgebra import STANDARD_COORDINATES, Form, monomial
from g2kit._presets import presetDocument
from g2kit._report import Pipeline


@lru_cache(maxsize=None)
def pipeline(name: str = "paper") -> Pipeline:
	return Pipeline(parseConfig(presetDocument(name)))


def form(*terms: tuple[int, str]) -> Form:
	"""Sum of ``coefficient·d(names)`` with names written as ``"t x1 y2"``."""
	result = Form(STANDARD_COORDINATES)
	for coefficient, names in terms:
		result = result + monomial(STANDARD_COORDINATES, names.split(), coefficient)
	return result
