"""Built-in configuration documents.

Presets are plain JSON-shaped documents and go through ``parseConfig`` like
any user file. All three describe the flat orbifold ``T⁷/G`` with
``T⁷ = R/4Z × T⁶`` in coordinates ``(t, x1, y1, x2, y2, x3, y3)`` and the
group generated by

- ``F``: ``t ↦ t+1``, ``z1 ↦ i·z1``, ``z2 ↦ i·z2``, ``z3 ↦ -z3``
- ``kappa``: ``t ↦ 1-t``, ``z ↦ conj(z)``
- ``iota1``, ``iota2``: ``(z1, z2, z3) ↦ (-z1, -z2, z3)`` shifted by half a
  period in ``x3`` and ``y3`` respectively
"""

from __future__ import annotations

import copy
from typing import Any

from ._errors import ConfigError

N = 7
_NAMES = ("t", "x1", "y1", "x2", "y2", "x3", "y3")


def _diagonal(entries: list[int]) -> list[list[int]]:
	return [[entries[i] if i == j else 0 for j in range(N)] for i in range(N)]


def _vector(**entries: str | int) -> list[str | int]:
	"""Coordinate vector with the named entries set, zeros elsewhere."""
	return [entries.get(name, 0) for name in _NAMES]


def _rotation() -> list[list[int]]:
	rows = [[0] * N for _ in range(N)]
	rows[0][0] = 1
	rows[1][2], rows[2][1] = -1, 1
	rows[3][4], rows[4][3] = -1, 1
	rows[5][5] = rows[6][6] = -1
	return rows


def _anchor(label: str, basepoint: list[str | int], *directions: list[str | int]) -> dict[str, Any]:
	return {"label": label, "basepoint": basepoint, "directions": list(directions)}


def _anchors() -> list[dict[str, Any]]:
	x1, y1, x2, y2, x3, y3 = (_vector(**{name: 1}) for name in _NAMES[1:])
	anchors = [
		_anchor("N1", _vector(), _vector(x1=1, y1=-1), _vector(x2=1, y2=-1), y3),
		_anchor("N2", _vector(x3="3/4"), _vector(x1=1, y1=1), _vector(x2=1, y2=1), y3),
		_anchor("N3", _vector(t="1/2"), x1, x2, x3),
	]
	for label, (a, b) in zip(("N4", "N5", "N6"), ((0, "1/2"), ("1/2", 0), ("1/2", "1/2")), strict=True):
		anchors.append(_anchor(label, _vector(t="1/2", y1=a, y2=b), x1, x2, x3))
	shifts = ((0, 0), (0, "1/2"), ("1/2", 0), ("1/2", "1/2"))
	for label, (a, b) in zip(("N7", "N8", "N9", "N10"), shifts, strict=True):
		anchors.append(_anchor(label, _vector(t="1/2", x1=a, x2=b, y3="3/4"), y1, y2, x3))
	return anchors


def _orbifold(name: str) -> dict[str, Any]:
	iota = _diagonal([1, -1, -1, -1, -1, 1, 1])
	return {
		"name": name,
		"coordinates": list(_NAMES),
		"lattice": _diagonal([4, 1, 1, 1, 1, 1, 1]),
		"generators": {
			"F": {"linear": _rotation(), "translation": _vector(t=1)},
			"kappa": {"linear": _diagonal([-1, 1, -1, 1, -1, 1, -1]), "translation": _vector(t=1)},
			"iota1": {"linear": iota, "translation": _vector(x3="1/2")},
			"iota2": {"linear": iota, "translation": _vector(y3="1/2")},
		},
		"strata": {"anchors": _anchors()},
	}


def _massey() -> dict[str, Any]:
	return {
		"a": {"thom": {"N1": 1, "N2": 1}},
		"b": {"thom": {"N7": 1, "N3": 1}},
		"c": {"thom": {"N7": 1, "N3": -1}},
	}


def _base() -> dict[str, Any]:
	return {"basepoint": _vector(t="1/2"), "directions": [_vector(x1=1), _vector(x2=1), _vector(x3=1)]}


def _paper() -> dict[str, Any]:
	doc = _orbifold("paper")
	# flat, then a ramp in y3 from 9/8 to 5/4, then flat again up to N7's slice at t = 3/2
	doc["cobordism"] = {
		"base": _base(),
		"knots": [
			{"t": "1/2", "drift": _vector()},
			{"t": "9/8", "drift": _vector()},
			{"t": "5/4", "drift": _vector(y3="1/4")},
			{"t": "3/2", "drift": _vector(y3="1/4")},
		],
	}
	doc["massey"] = _massey()
	return doc


def _paperZeroDrift() -> dict[str, Any]:
	doc = _orbifold("paper-zero-drift")
	doc["cobordism"] = {
		"base": _base(),
		"t_start": "1/2",
		"t_end": "1/2",
		"drift_start": _vector(),
		"drift_end": _vector(),
	}
	doc["massey"] = _massey()
	return doc


def _paperNoCobordism() -> dict[str, Any]:
	return _orbifold("paper-no-cobordism")


_PRESETS = {
	"paper": _paper(),
	"paper-zero-drift": _paperZeroDrift(),
	"paper-no-cobordism": _paperNoCobordism(),
}


def presetNames() -> list[str]:
	return sorted(_PRESETS)


def presetDocument(name: str) -> dict[str, Any]:
	"""A fresh copy of the named preset document."""
	try:
		return copy.deepcopy(_PRESETS[name])
	except KeyError:
		choices = ", ".join(presetNames())
		raise ConfigError("preset", f"unknown preset {name!r}, choose from {choices}") from None
