"""Pipeline driver and report assembly.

A ``Pipeline`` computes each stage lazily and at most once: closure, strata,
Betti numbers, Poincaré duals, then the cobordism and the Massey product.
Reports are plain JSON-ready dictionaries holding exact rational strings
only, so equal configurations give byte-identical machine output.
"""

from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from functools import cached_property
from pathlib import Path
from typing import Any

from ._cache import loadStages, storeStages
from ._cobordismMassey import (
	VERDICT_NO_DATA,
	BoundarySlice,
	Crossing,
	MasseyVerdict,
	boundary,
	crossingCoefficients,
	intersections,
	masseyValueFrom,
	tripleMassey,
)
from ._cohomology import betti, pairingMatrix, poincareDual
from ._config import ClassSpec, G2Config
from ._errors import G2kitError, PipelineError
from ._exactLinalg import formatRational
from ._exteriorAlgebra import Form, constant, formToJson, parametrizationCoordinates
from ._flatOrbifold import IsometryGroup, closure
from ._resolutionAlgebra import ModelClass, ResolutionModel
from ._singularLocus import Stratum, fixedComponents
from ._singularLocus import strata as findStrata
from .logHandler import log

COMMANDS = ("closure", "strata", "betti", "pd", "massey", "report")


@contextmanager
def stage(name: str) -> Iterator[None]:
	"""Attribute failures inside the block to a pipeline stage."""
	try:
		yield
	except G2kitError as e:
		if e.stage is None:
			e.stage = name
		raise
	except (ValueError, ArithmeticError) as e:
		raise PipelineError(str(e), stage=name) from e


def _rationals(values: Any) -> list[str]:
	return [formatRational(x) for x in values]


def _matrix(rows: Any) -> list[list[str]]:
	return [_rationals(row) for row in rows]


def _unit(s: Stratum) -> Form:
	return constant(parametrizationCoordinates(s.dimension))


class Pipeline:
	def __init__(self, config: G2Config, cacheDir: str | Path | None = None):
		self.config = config
		self.cacheDir = cacheDir
		self._cachedStrata: list[Stratum] | None = None

	@cached_property
	def group(self) -> IsometryGroup:
		if self.cacheDir is not None:
			cached = loadStages(self.cacheDir, self.config.cacheKey)
			if cached is not None:
				group, self._cachedStrata = cached
				return group
		with stage("closure"):
			group = closure(self.config.lattice, self.config.generators, self.config.groupBound)
		if self.cacheDir is not None:
			storeStages(self.cacheDir, self.config.cacheKey, group)
		return group

	@cached_property
	def strata(self) -> list[Stratum]:
		group = self.group
		if self._cachedStrata is not None:
			return self._cachedStrata
		with stage("strata"):
			result = findStrata(group, self.config.phi, self.config.anchors)
		if self.cacheDir is not None:
			storeStages(self.cacheDir, self.config.cacheKey, group, result)
		return result

	@cached_property
	def model(self) -> ResolutionModel:
		with stage("betti"):
			return ResolutionModel(self.group, self.strata, coordinates=self.config.coordinates)

	@cached_property
	def duals(self) -> dict[str, Form]:
		coordinates = self.config.coordinates
		with stage("pd"):
			return {s.label: poincareDual(s, _unit(s), self.group, coordinates) for s in self.strata}

	@cached_property
	def cobordism(self) -> tuple[list[BoundarySlice], list[Crossing]] | None:
		datum = self.config.cobordism
		if datum is None:
			return None
		with stage("cobordism"):
			slices = boundary(datum, self.group, self.strata, self.config.phi)
			crossings = intersections(datum, self.group, self.strata, self.config.phi)
		return slices, crossings

	def _classFromSpec(self, spec: ClassSpec) -> ModelClass:
		return self.model.fromThomCombination(dict(spec.thom), spec.base)

	@cached_property
	def massey(self) -> tuple[MasseyVerdict, dict[str, Any]] | None:
		cobordism = self.cobordism
		if cobordism is None or self.config.massey is None:
			return None
		slices, crossings = cobordism
		model = self.model
		with stage("massey"):
			a, b, c = (self._classFromSpec(spec) for spec in self.config.massey)
			value = masseyValueFrom(model, slices, crossings, self.config.phi)
			verdict = tripleMassey(model, a, b, c, value)
			sigma = crossingCoefficients(model, slices, crossings)
		return verdict, {"a": a, "b": b, "c": c, "sigma": sigma}

	# --- sections -------------------------------------------------------------

	def closureSection(self) -> dict[str, Any]:
		group = self.group
		return {
			"order": group.order,
			"generators": list(group.generatorLabels),
			"linearImageOrder": len(group.distinctLinearParts()),
			"elements": [
				{"word": g.word, "linear": _matrix(g.linear), "translation": _rationals(g.translation)}
				for g in group.elements
			],
		}

	def strataSection(self) -> dict[str, Any]:
		group = self.group
		with stage("strata"):
			fixedCount = len(fixedComponents(group))
		rows = []
		for s in self.strata:
			rows.append(
				{
					"label": s.label,
					"dimension": s.dimension,
					"orbitSize": len(s.orbit),
					"multiplicity": s.multiplicity,
					"calibration": formatRational(s.calibration),
					"involution": s.stabilizingInvolution.word,
					"deck": None if s.deckElement is None else s.deckElement.word,
					"setwiseStabilizerOrder": len(s.setwiseStabilizer),
					"hasHarmonicOneForm": s.hasHarmonicOneForm,
					"representative": s.representative.toJson(),
					"parametrization": _matrix(s.parametrization),
				},
			)
		return {"fixedSubtori": fixedCount, "strata": rows}

	def bettiSection(self) -> dict[str, Any]:
		model = self.model
		with stage("betti"):
			orbifold = betti(self.group, self.config.coordinates)
		modelBetti = model.modelBetti()
		n = len(orbifold) - 1
		return {
			"orbifold": orbifold,
			"model": modelBetti,
			"poincareSymmetric": all(modelBetti[k] == modelBetti[n - k] for k in range(n + 1)),
			"bases": {
				str(k): [formToJson(f) for f in space.basis] for k, space in enumerate(model.baseSpaces)
			},
			"strata": {
				label: [space.dimension for space in spaces] for label, spaces in model.fiberSpaces.items()
			},
		}

	def pdSection(self) -> dict[str, Any]:
		model = self.model
		duals = self.duals
		n = model.dimension
		with stage("pd"):
			coordinates = self.config.coordinates
			pairing = {str(k): _matrix(pairingMatrix(self.group, k, coordinates)) for k in range(n + 1)}
		codimension = {s.label: n - s.dimension for s in self.strata}
		rows = [
			{
				"label": label,
				"dual": formToJson(form),
				"coordinates": _rationals(model.baseSpaces[codimension[label]].coordinates(form)),
			}
			for label, form in duals.items()
		]
		return {"volume": pairing["0"][0][0], "pairing": pairing, "duals": rows}

	def masseySection(self) -> dict[str, Any]:
		result = self.massey
		if result is None:
			return {"verdict": VERDICT_NO_DATA}
		verdict, inputs = result
		model = self.model
		slices, crossings = self.cobordism or ([], [])
		return {
			"triple": {key: model.toJson(inputs[key]) for key in ("a", "b", "c")},
			"boundary": [{"label": s.label, "sign": s.sign, "torus": s.torus.toJson()} for s in slices],
			"crossings": [
				{
					"label": x.label,
					"t": formatRational(x.t),
					"point": _rationals(x.point),
					"sign": x.sign,
				}
				for x in crossings
			],
			"sigma": {label: formatRational(v) for label, v in inputs["sigma"].items()},
			"degree": verdict.degree,
			"wellDefined": verdict.wellDefined,
			"value": model.toJson(verdict.value),
			"valueText": model.describe(verdict.value),
			"idealBasis": [model.toJson(u) for u in verdict.idealBasis],
			"idealRank": verdict.idealRank,
			"augmentedRank": verdict.augmentedRank,
			"member": verdict.member,
			"verdict": verdict.verdictText,
		}


def formalityReport(config: G2Config, cacheDir: str | Path | None = None) -> dict[str, Any]:
	"""Run every stage and collect the sections; stops after the duals without Massey data."""
	pipeline = Pipeline(config, cacheDir)
	report: dict[str, Any] = {"command": "report", "config": config.name}
	completed: list[str] = []
	for name, build in (
		("closure", pipeline.closureSection),
		("strata", pipeline.strataSection),
		("betti", pipeline.bettiSection),
		("pd", pipeline.pdSection),
	):
		report[name] = build()
		completed.append(name)
	massey = pipeline.masseySection()
	if pipeline.massey is not None:
		completed.extend(["cobordism", "massey"])
	report["massey"] = massey
	report["stages"] = completed
	report["verdict"] = massey["verdict"]
	log.info(f"g2kit report: {config.name}: {report['verdict']}")
	return report


def commandReport(command: str, config: G2Config, cacheDir: str | Path | None = None) -> dict[str, Any]:
	if command == "report":
		return formalityReport(config, cacheDir)
	pipeline = Pipeline(config, cacheDir)
	sections = {
		"closure": pipeline.closureSection,
		"strata": pipeline.strataSection,
		"betti": pipeline.bettiSection,
		"pd": pipeline.pdSection,
		"massey": pipeline.masseySection,
	}
	if command not in sections:
		raise PipelineError(f"unknown command {command!r}")
	return {"command": command, "config": config.name, command: sections[command]()}


# --- text rendering -----------------------------------------------------------


def _approx(text: str) -> str:
	"""``p/q`` with a marked decimal approximation when it is not an integer."""
	if "/" not in text:
		return text
	numerator, denominator = text.split("/")
	return f"{text} (≈ {int(numerator) / int(denominator):.6g})"


def _table(header: list[str], rows: list[list[str]]) -> list[str]:
	widths = [max(len(str(cell)) for cell in column) for column in zip(header, *rows, strict=True)]
	lines = ["  ".join(str(cell).ljust(w) for cell, w in zip(header, widths, strict=True)).rstrip()]
	lines.append("  ".join("-" * w for w in widths))
	for row in rows:
		lines.append("  ".join(str(cell).ljust(w) for cell, w in zip(row, widths, strict=True)).rstrip())
	return lines


def _formText(data: list[list[Any]]) -> str:
	if not data:
		return "0"
	return " + ".join(f"{value}·{'∧'.join('d' + name for name in names) or '1'}" for names, value in data)


def _renderClosure(section: dict[str, Any]) -> list[str]:
	lines = [
		f"group order: {section['order']}",
		f"generators: {', '.join(section['generators'])}",
		f"linear image order: {section['linearImageOrder']}",
	]
	rows = [
		[str(i), e["word"], "(" + ", ".join(e["translation"]) + ")"]
		for i, e in enumerate(section["elements"])
	]
	return lines + _table(["#", "word", "translation"], rows)


def _renderStrata(section: dict[str, Any]) -> list[str]:
	rows = [
		[
			s["label"],
			str(s["dimension"]),
			str(s["orbitSize"]),
			str(s["multiplicity"]),
			s["calibration"],
			s["involution"],
			"(" + ", ".join(s["representative"]["basepoint"]) + ")",
		]
		for s in section["strata"]
	]
	return [f"fixed subtori: {section['fixedSubtori']}"] + _table(
		["label", "dim", "orbit", "m", "φ|vol", "involution", "basepoint"],
		rows,
	)


def _renderBetti(section: dict[str, Any]) -> list[str]:
	lines = [
		"orbifold: (" + ",".join(str(b) for b in section["orbifold"]) + ")",
		"model:    (" + ",".join(str(b) for b in section["model"]) + ")",
	]
	for k, basis in section["bases"].items():
		for form in basis:
			lines.append(f"  H^{k}: {_formText(form)}")
	return lines


def _renderPd(section: dict[str, Any]) -> list[str]:
	lines = [f"vol(X) = {_approx(section['volume'])}"]
	rows = [
		[d["label"], _formText(d["dual"]), "(" + ", ".join(d["coordinates"]) + ")"] for d in section["duals"]
	]
	return lines + _table(["stratum", "Poincaré dual", "coordinates"], rows)


def _renderMassey(section: dict[str, Any]) -> list[str]:
	if "value" not in section:
		return [section["verdict"]]
	lines = [section["verdict"]]
	signs = " ".join(f"{'+' if b['sign'] > 0 else '-'}{b['label']}" for b in section["boundary"])
	lines.append(f"boundary: {signs or '(empty)'}")
	for x in section["crossings"]:
		lines.append(f"  crossing {x['label']} at t={x['t']} sign {x['sign']:+d}")
	for label, value in section["sigma"].items():
		lines.append(f"  σ[{label}] = {_approx(value)}")
	lines.append(f"degree: {section['degree']}")
	lines.append(f"value: {section['valueText']}")
	lines.append(f"ideal rank: {section['idealRank']}, with value: {section['augmentedRank']}")
	lines.append(f"member of ideal: {'yes' if section['member'] else 'no'}")
	return lines


_RENDERERS = {
	"closure": _renderClosure,
	"strata": _renderStrata,
	"betti": _renderBetti,
	"pd": _renderPd,
	"massey": _renderMassey,
}


def renderText(report: dict[str, Any]) -> str:
	lines = [f"# {report['command']} ({report['config']})"]
	for name, render in _RENDERERS.items():
		if name in report:
			if report["command"] == "report":
				lines.append(f"\n## {name}")
			lines.extend(render(report[name]))
	return "\n".join(lines) + "\n"
