"""JSON configuration: schema checks, rational parsing and generator validation.

Rationals are JSON integers or strings ``"p/q"``; floats are rejected
everywhere. Every schema error names the dotted path of the offending
field, e.g. ``generators.F.linear``.

Directions (of anchors and of the cobordism base) are integer vectors in
lattice coordinates, one vector per direction.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from ._cobordismMassey import CobordismDatum, Knot
from ._errors import ConfigError
from ._exactLinalg import formatRational, parseRational
from ._exteriorAlgebra import (
	STANDARD_COORDINATES,
	Form,
	defaultCoordinates,
	formFromJson,
	formToJson,
	standardG2Form,
)
from ._flatOrbifold import DEFAULT_GROUP_BOUND, AffineIsometry, TorusLattice, validate
from ._singularLocus import StratumAnchor, canonicalSubtorus
from .logHandler import log

_TOP_LEVEL_KEYS = frozenset(
	{"name", "coordinates", "lattice", "generators", "phi", "groupBound", "strata", "cobordism", "massey"},
)


@dataclass(frozen=True)
class ClassSpec:
	"""A model class given as ``Σ c_j·x_j`` plus an optional base form."""

	thom: tuple[tuple[str, Fraction], ...]
	base: Form | None


@dataclass(frozen=True)
class G2Config:
	name: str
	coordinates: tuple[str, ...]
	lattice: TorusLattice
	generators: tuple[AffineIsometry, ...]
	phi: Form
	groupBound: int
	anchors: tuple[StratumAnchor, ...]
	cobordism: CobordismDatum | None
	massey: tuple[ClassSpec, ClassSpec, ClassSpec] | None
	# canonical JSON text of the normalized document
	canonical: str

	@property
	def cacheKey(self) -> str:
		return hashlib.sha256(self.canonical.encode("utf-8")).hexdigest()


def _child(path: str, key: str | int) -> str:
	if isinstance(key, int):
		return f"{path}[{key}]"
	return f"{path}.{key}" if path else key


def _require(doc: Mapping[str, Any], key: str, path: str) -> Any:
	if key not in doc:
		raise ConfigError(_child(path, key), "missing required field")
	return doc[key]


def _object(value: Any, path: str) -> Mapping[str, Any]:
	if not isinstance(value, Mapping):
		raise ConfigError(path, f"expected an object, got {type(value).__name__}")
	return value


def _list(value: Any, path: str, length: int | None = None) -> Sequence[Any]:
	if not isinstance(value, list):
		raise ConfigError(path, f"expected a list, got {type(value).__name__}")
	if length is not None and len(value) != length:
		raise ConfigError(path, f"expected {length} entries, got {len(value)}")
	return value


def _rational(value: Any, path: str) -> Fraction:
	if isinstance(value, float):
		raise ConfigError(path, f"floats are not exact, write {value!r} as a string 'p/q'")
	try:
		return parseRational(value)
	except (ValueError, ZeroDivisionError) as e:
		raise ConfigError(path, str(e)) from None


def _integer(value: Any, path: str) -> int:
	if isinstance(value, bool) or not isinstance(value, int):
		raise ConfigError(path, f"expected an integer, got {value!r}")
	return value


def _vector(value: Any, path: str, n: int) -> list[Fraction]:
	return [_rational(x, _child(path, i)) for i, x in enumerate(_list(value, path, n))]


def _matrix(value: Any, path: str, n: int) -> list[list[Fraction]]:
	return [_vector(row, _child(path, i), n) for i, row in enumerate(_list(value, path, n))]


def _directions(value: Any, path: str, n: int) -> list[list[int]]:
	"""Direction vectors (one per entry) turned into an ``n × k`` column matrix."""
	vectors = [
		[_integer(x, _child(_child(path, j), i)) for i, x in enumerate(_list(vec, _child(path, j), n))]
		for j, vec in enumerate(_list(value, path))
	]
	return [[vec[i] for vec in vectors] for i in range(n)]


def _parseGenerators(
	value: Any,
	lattice: TorusLattice,
	phi: Form,
) -> tuple[AffineIsometry, ...]:
	n = lattice.dimension
	doc = _object(value, "generators")
	if not doc:
		raise ConfigError("generators", "at least one generator is required")
	generators = []
	for label, entry in doc.items():
		path = _child("generators", label)
		entry = _object(entry, path)
		linear = _matrix(_require(entry, "linear", path), _child(path, "linear"), n)
		translation = _vector(_require(entry, "translation", path), _child(path, "translation"), n)
		g = AffineIsometry.create(lattice, linear, translation, label)
		verdict = validate(lattice, g, phi)
		if not verdict.ok:
			raise ConfigError(path, "invalid isometry: " + "; ".join(verdict.violations))
		generators.append(g)
	return tuple(generators)


def _parseAnchors(value: Any, n: int) -> tuple[StratumAnchor, ...]:
	doc = _object(value, "strata")
	anchors = []
	raw = _list(doc.get("anchors", []), "strata.anchors")
	for i, entry in enumerate(raw):
		path = _child("strata.anchors", i)
		entry = _object(entry, path)
		label = _require(entry, "label", path)
		if not isinstance(label, str) or not label:
			raise ConfigError(_child(path, "label"), "expected a nonempty string")
		basepoint = _vector(_require(entry, "basepoint", path), _child(path, "basepoint"), n)
		directions = _directions(_require(entry, "directions", path), _child(path, "directions"), n)
		anchors.append(StratumAnchor(label, tuple(basepoint), tuple(tuple(row) for row in directions)))
	return tuple(anchors)


def _parseCobordism(value: Any, lattice: TorusLattice) -> CobordismDatum:
	n = lattice.dimension
	doc = _object(value, "cobordism")
	base = _object(_require(doc, "base", "cobordism"), "cobordism.base")
	basepoint = _vector(_require(base, "basepoint", "cobordism.base"), "cobordism.base.basepoint", n)
	directions = _directions(_require(base, "directions", "cobordism.base"), "cobordism.base.directions", n)
	torus = canonicalSubtorus(lattice, basepoint, directions)
	if "knots" in doc:
		knots = []
		for i, entry in enumerate(_list(doc["knots"], "cobordism.knots")):
			path = _child("cobordism.knots", i)
			entry = _object(entry, path)
			t = _rational(_require(entry, "t", path), _child(path, "t"))
			drift = _vector(_require(entry, "drift", path), _child(path, "drift"), n)
			knots.append(Knot(t, tuple(drift)))
		if not knots:
			raise ConfigError("cobordism.knots", "at least one knot is required")
		return CobordismDatum(torus, tuple(knots))
	return CobordismDatum.fromEndpoints(
		torus,
		_rational(_require(doc, "t_start", "cobordism"), "cobordism.t_start"),
		_rational(_require(doc, "t_end", "cobordism"), "cobordism.t_end"),
		_vector(_require(doc, "drift_start", "cobordism"), "cobordism.drift_start", n),
		_vector(_require(doc, "drift_end", "cobordism"), "cobordism.drift_end", n),
	)


def _parseClass(value: Any, path: str, coordinates: tuple[str, ...]) -> ClassSpec:
	doc = _object(value, path)
	thomDoc = _object(doc.get("thom", {}), _child(path, "thom"))
	thomPath = _child(path, "thom")
	thom = tuple((str(label), _rational(c, _child(thomPath, label))) for label, c in thomDoc.items())
	base = None
	if "base" in doc:
		try:
			base = formFromJson(coordinates, _list(doc["base"], _child(path, "base")))
		except ValueError as e:
			raise ConfigError(_child(path, "base"), str(e)) from None
	if not thom and (base is None or base.isZero()):
		raise ConfigError(path, "class is zero")
	return ClassSpec(thom, base)


def _parseMassey(value: Any, coordinates: tuple[str, ...]) -> tuple[ClassSpec, ClassSpec, ClassSpec]:
	doc = _object(value, "massey")
	a, b, c = (_parseClass(_require(doc, key, "massey"), _child("massey", key), coordinates) for key in "abc")
	return a, b, c


def _normalizedDocument(config: G2Config) -> dict[str, Any]:
	"""Exact canonical content; equal configurations serialize identically."""
	doc: dict[str, Any] = {
		"name": config.name,
		"coordinates": list(config.coordinates),
		"lattice": [[formatRational(x) for x in row] for row in config.lattice.basis],
		"generators": [
			{
				"label": g.word,
				"linear": [[formatRational(x) for x in row] for row in g.linear],
				"translation": [formatRational(x) for x in g.translation],
			}
			for g in config.generators
		],
		"phi": formToJson(config.phi),
		"groupBound": config.groupBound,
		"anchors": [
			{
				"label": a.label,
				"basepoint": [formatRational(x) for x in a.basepoint],
				"directions": [list(col) for col in zip(*a.directions, strict=True)] if a.directions else [],
			}
			for a in config.anchors
		],
	}
	if config.cobordism is not None:
		doc["cobordism"] = {
			"base": config.cobordism.base.toJson(),
			"knots": [
				{"t": formatRational(k.t), "drift": [formatRational(x) for x in k.drift]}
				for k in config.cobordism.knots
			],
		}
	if config.massey is not None:
		doc["massey"] = [
			{
				"thom": [[label, formatRational(c)] for label, c in spec.thom],
				"base": formToJson(spec.base) if spec.base is not None else None,
			}
			for spec in config.massey
		]
	return doc


def parseConfig(document: Mapping[str, Any] | str) -> G2Config:
	"""Validate a configuration document (an object or its JSON text)."""
	if isinstance(document, str):
		try:
			document = json.loads(document)
		except json.JSONDecodeError as e:
			raise ConfigError(f"line {e.lineno} column {e.colno}", f"invalid JSON: {e.msg}") from None
	doc = _object(document, "")
	unknown = sorted(set(doc) - _TOP_LEVEL_KEYS)
	if unknown:
		raise ConfigError(unknown[0], "unknown field")
	name = doc.get("name", "unnamed")
	if not isinstance(name, str):
		raise ConfigError("name", "expected a string")

	rows = _list(_require(doc, "lattice", ""), "lattice")
	n = len(rows)
	if n == 0:
		raise ConfigError("lattice", "lattice basis is empty")
	try:
		lattice = TorusLattice.fromRows(_matrix(rows, "lattice", n))
	except ValueError as e:
		raise ConfigError("lattice", str(e)) from None

	default = defaultCoordinates(n)
	coordinates = tuple(str(c) for c in _list(doc.get("coordinates", list(default)), "coordinates", n))
	if len(set(coordinates)) != n:
		raise ConfigError("coordinates", "coordinate names must be distinct")

	if "phi" in doc:
		try:
			phi = formFromJson(coordinates, _list(doc["phi"], "phi"))
		except ValueError as e:
			raise ConfigError("phi", str(e)) from None
		if phi.degree != 3:
			raise ConfigError("phi", "expected a nonzero 3-form")
	elif coordinates == STANDARD_COORDINATES:
		phi = standardG2Form()
	else:
		raise ConfigError("phi", "required unless the canonical seven coordinates are used")

	generators = _parseGenerators(_require(doc, "generators", ""), lattice, phi)
	groupBound = _integer(doc.get("groupBound", DEFAULT_GROUP_BOUND), "groupBound")
	if groupBound < 1:
		raise ConfigError("groupBound", "must be positive")
	anchors = _parseAnchors(doc["strata"], n) if "strata" in doc else ()
	cobordism = _parseCobordism(doc["cobordism"], lattice) if doc.get("cobordism") is not None else None
	massey = _parseMassey(doc["massey"], coordinates) if doc.get("massey") is not None else None

	config = G2Config(name, coordinates, lattice, generators, phi, groupBound, anchors, cobordism, massey, "")
	canonical = json.dumps(_normalizedDocument(config), sort_keys=True, separators=(",", ":"))
	config = dataclasses.replace(config, canonical=canonical)
	log.debug(f"g2kit config: parsed {name!r} with {len(generators)} generators, key {config.cacheKey[:12]}")
	return config


def loadConfig(path: str | Path) -> G2Config:
	try:
		text = Path(path).read_text(encoding="utf-8")
	except OSError as e:
		raise ConfigError(str(path), f"cannot read config: {e.strerror}") from None
	return parseConfig(text)
