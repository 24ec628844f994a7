"""On-disk cache of the group closure and the strata.

Files live at ``<dir>/<key>.json`` where the key is the SHA-256 of the
canonical configuration text. Reading is best effort: anything unreadable
is logged and recomputed.
"""

from __future__ import annotations

import json
import os
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

from ._exactLinalg import formatRational
from ._flatOrbifold import AffineIsometry, IsometryGroup, TorusLattice
from ._singularLocus import AffineSubtorus, Stratum
from .logHandler import log

# bump when the stored layout changes
CACHE_FORMAT = 1


def _rationals(values: Sequence[Fraction]) -> list[str]:
	return [formatRational(x) for x in values]


def _fractions(values: Sequence[str]) -> tuple[Fraction, ...]:
	return tuple(Fraction(x) for x in values)


def _torusToJson(torus: AffineSubtorus) -> dict[str, Any]:
	return {"basepoint": _rationals(torus.basepoint), "directions": [list(row) for row in torus.directions]}


def _torusFromJson(data: dict[str, Any]) -> AffineSubtorus:
	directions = tuple(tuple(int(x) for x in row) for row in data["directions"])
	return AffineSubtorus(_fractions(data["basepoint"]), directions)


def groupToJson(group: IsometryGroup) -> dict[str, Any]:
	return {
		"lattice": [_rationals(row) for row in group.lattice.basis],
		"generatorLabels": list(group.generatorLabels),
		"elements": [
			{
				"word": g.word,
				"linear": [_rationals(row) for row in g.linear],
				"translation": _rationals(g.translation),
			}
			for g in group.elements
		],
	}


def groupFromJson(data: dict[str, Any]) -> IsometryGroup:
	lattice = TorusLattice(tuple(_fractions(row) for row in data["lattice"]))
	elements = tuple(
		AffineIsometry(tuple(_fractions(row) for row in e["linear"]), _fractions(e["translation"]), e["word"])
		for e in data["elements"]
	)
	return IsometryGroup(lattice, elements, tuple(data["generatorLabels"]))


def stratumToJson(stratum: Stratum, group: IsometryGroup) -> dict[str, Any]:
	return {
		"label": stratum.label,
		"representative": _torusToJson(stratum.representative),
		"orbit": [_torusToJson(t) for t in stratum.orbit],
		"involution": group.indexOf(stratum.stabilizingInvolution),
		"multiplicity": stratum.multiplicity,
		"parametrization": [_rationals(row) for row in stratum.parametrization],
		"calibration": formatRational(stratum.calibration),
		"setwiseStabilizer": list(stratum.setwiseStabilizer),
		"pointwiseStabilizer": list(stratum.pointwiseStabilizer),
		"deck": None if stratum.deckElement is None else group.indexOf(stratum.deckElement),
		"hasHarmonicOneForm": stratum.hasHarmonicOneForm,
	}


def stratumFromJson(data: dict[str, Any], group: IsometryGroup) -> Stratum:
	deck = data["deck"]
	return Stratum(
		label=data["label"],
		representative=_torusFromJson(data["representative"]),
		orbit=tuple(_torusFromJson(t) for t in data["orbit"]),
		stabilizingInvolution=group.elements[data["involution"]],
		multiplicity=int(data["multiplicity"]),
		parametrization=tuple(_fractions(row) for row in data["parametrization"]),
		calibration=Fraction(data["calibration"]),
		setwiseStabilizer=tuple(data["setwiseStabilizer"]),
		pointwiseStabilizer=tuple(data["pointwiseStabilizer"]),
		deckElement=None if deck is None else group.elements[deck],
		hasHarmonicOneForm=bool(data["hasHarmonicOneForm"]),
	)


def cachePath(directory: str | Path, key: str) -> Path:
	return Path(directory) / f"{key}.json"


def loadStages(directory: str | Path, key: str) -> tuple[IsometryGroup, list[Stratum] | None] | None:
	"""The cached group and strata (``None`` if never stored), or ``None`` on a miss or an unusable file."""
	path = cachePath(directory, key)
	if not path.is_file():
		log.debug(f"g2kit cache: miss for {key[:12]}")
		return None
	try:
		data = json.loads(path.read_text(encoding="utf-8"))
		if data.get("format") != CACHE_FORMAT or data.get("key") != key:
			log.warning(f"g2kit cache: ignoring {path}, written by another format")
			return None
		group = groupFromJson(data["group"])
		rawStrata = data.get("strata")
		strata = None if rawStrata is None else [stratumFromJson(s, group) for s in rawStrata]
	except Exception:
		log.debug(f"g2kit cache: unreadable cache file {path}", exc_info=True)
		return None
	log.info(f"g2kit cache: hit for {key[:12]}")
	return group, strata


def storeStages(
	directory: str | Path,
	key: str,
	group: IsometryGroup,
	strata: Sequence[Stratum] | None = None,
) -> None:
	"""Write the group and strata for ``key``; failures are logged and never raised."""
	path = cachePath(directory, key)
	data = {
		"format": CACHE_FORMAT,
		"key": key,
		"group": groupToJson(group),
		"strata": None if strata is None else [stratumToJson(s, group) for s in strata],
	}
	try:
		path.parent.mkdir(parents=True, exist_ok=True)
		tmp = path.with_suffix(".tmp")
		tmp.write_text(json.dumps(data, sort_keys=True, indent=1), encoding="utf-8")
		os.replace(tmp, path)
	except Exception:
		log.debug(f"g2kit cache: could not write {path}", exc_info=True)
		return
	log.info(f"g2kit cache: stored {path}")
