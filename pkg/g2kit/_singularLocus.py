"""Fixed subtori of group elements and the orbifold strata they form.

Everything is solved in lattice coordinates, where the congruence
``(A - I)·u ≡ -b (mod Zⁿ)`` is diagonalised by a Smith normal form. A
subtorus is stored canonically: its direction lattice is saturated and put
in column Hermite normal form, and its basepoint is reduced against the
integer annihilator of the directions, so equal subtori compare equal.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from ._errors import SingularLocusError
from ._exactLinalg import (
	IntegerMatrix,
	RationalMatrix,
	Scalar,
	formatRational,
	hermiteNormalForm,
	integerInverse,
	inverse,
	isInteger,
	matMul,
	matVec,
	rank,
	smithDiagonal,
	smithNormalForm,
	transpose,
)
from ._exteriorAlgebra import Form, invariantForms, parametrizationCoordinates, restrict
from ._flatOrbifold import (
	AffineIsometry,
	IsometryGroup,
	TorusLattice,
	applyToPoint,
	fractionalPart,
	latticeLinear,
	reducePoint,
)
from .logHandler import log

# Generic points sit at basepoint + Σ (1/p_i)·d_i; the second set re-checks.
PRIMARY_PRIMES = (1009, 1013, 1019, 1021, 1031, 1033, 1039)
CHECK_PRIMES = (1049, 1051, 1061, 1063, 1069, 1087, 1091)

NORMAL_CODIMENSION = 4


@dataclass(frozen=True)
class AffineSubtorus:
	"""``basepoint + span(B·directions)`` mod Λ, in canonical form."""

	basepoint: tuple[Fraction, ...]
	# n × k, lattice coordinates, column HNF
	directions: tuple[tuple[int, ...], ...]

	@property
	def dimension(self) -> int:
		return len(self.directions[0]) if self.directions else 0

	def key(self) -> tuple[tuple[Fraction, ...], tuple[tuple[int, ...], ...]]:
		"""Sort key: t-level first (basepoint[0]), then the rest of the basepoint."""
		return (self.basepoint, self.directions)

	def toJson(self) -> dict[str, object]:
		return {
			"basepoint": [formatRational(x) for x in self.basepoint],
			"directions": [list(col) for col in transpose(self.directions, self.dimension)],
		}


@lru_cache(maxsize=1024)
def _frame(directions: tuple[tuple[int, ...], ...], n: int) -> tuple[IntegerMatrix, IntegerMatrix]:
	"""``(U, W = U⁻¹)`` with ``U·H·V = [I; 0]``; rows ``k..`` of ``U`` annihilate ``H``."""
	k = len(directions[0]) if directions else 0
	if k == 0:
		eye = [[int(i == j) for j in range(n)] for i in range(n)]
		return eye, [row[:] for row in eye]
	u, _, _ = smithNormalForm([list(row) for row in directions], cols=k)
	return u, integerInverse(u)


@lru_cache(maxsize=1024)
def _canonicalDirections(directions: tuple[tuple[int, ...], ...], n: int) -> tuple[tuple[int, ...], ...]:
	"""Column HNF of the saturation of the direction lattice."""
	k = len(directions[0]) if directions else 0
	if not k:
		return tuple(() for _ in range(n))
	u, d, _ = smithNormalForm([list(row) for row in directions], cols=k)
	r = sum(1 for x in smithDiagonal(d) if x)
	# the first r columns of U⁻¹ span the saturation
	w = integerInverse(u)
	hnf, _ = hermiteNormalForm([row[:r] for row in w], cols=r)
	return tuple(tuple(row) for row in hnf)


def canonicalSubtorus(
	lattice: TorusLattice,
	basepoint: Sequence[Scalar],
	directions: Sequence[Sequence[int]],
) -> AffineSubtorus:
	"""Canonical form of ``basepoint + span(directions)``; directions in lattice coordinates."""
	n = lattice.dimension
	frozen = _canonicalDirections(tuple(tuple(int(x) for x in row) for row in directions), n)
	k = len(frozen[0]) if frozen else 0
	u, w = _frame(frozen, n)
	s = matVec(u, lattice.toLattice(basepoint))
	reduced = [Fraction(0)] * k + [fractionalPart(x) for x in s[k:]]
	point = lattice.fromLattice(matVec(w, reduced))
	return AffineSubtorus(tuple(point), frozen)


def subtorusContains(lattice: TorusLattice, torus: AffineSubtorus, x: Sequence[Scalar]) -> bool:
	u, _ = _frame(torus.directions, lattice.dimension)
	delta = [a - b for a, b in zip(lattice.toLattice(x), lattice.toLattice(torus.basepoint), strict=True)]
	return all(isInteger(value) for value in matVec(u[torus.dimension :], delta))


def subtorusParametrization(lattice: TorusLattice, torus: AffineSubtorus) -> RationalMatrix:
	"""Ambient ``n × k`` matrix ``B·H``; its unit cube covers the subtorus once."""
	if not torus.directions:
		return []
	return matMul(lattice.basis, torus.directions)


def calibratedParametrization(
	lattice: TorusLattice,
	torus: AffineSubtorus,
	phi: Form,
) -> tuple[RationalMatrix, Fraction]:
	"""Parametrization oriented so that φ restricts positively, and the restricted coefficient.

	The last column is negated when φ restricts negatively; a zero
	coefficient is returned unchanged and left to the caller.
	"""
	parametrization = subtorusParametrization(lattice, torus)
	if phi.degree != torus.dimension:
		return parametrization, Fraction(0)
	coefficient = restrict(phi, parametrization).topCoefficient()
	if coefficient < 0:
		for row in parametrization:
			row[-1] = -row[-1]
		coefficient = -coefficient
	return parametrization, coefficient


def fixedSet(lattice: TorusLattice, g: AffineIsometry) -> list[AffineSubtorus]:
	"""Connected components of ``{x : g(x) ≡ x mod Λ}``, canonical and sorted."""
	n = lattice.dimension
	a = latticeLinear(lattice, g)
	b = lattice.toLattice(g.translation)
	shifted = [[a[i][j] - int(i == j) for j in range(n)] for i in range(n)]
	u, d, v = smithNormalForm(shifted)
	diagonal = smithDiagonal(d)
	r = sum(1 for x in diagonal if x)
	c = [-x for x in matVec(u, b)]
	if not all(isInteger(c[i]) for i in range(r, n)):
		return []
	directions = [row[r:] for row in v]
	choices = [[(c[i] + step) / diagonal[i] for step in range(diagonal[i])] for i in range(r)]
	components: dict[AffineSubtorus, None] = {}
	for combo in product(*choices):
		w = [*combo, *[Fraction(0)] * (n - r)]
		point = lattice.fromLattice(matVec(v, w))
		components.setdefault(canonicalSubtorus(lattice, point, directions))
	return sorted(components, key=AffineSubtorus.key)


def actOnSubtorus(lattice: TorusLattice, g: AffineIsometry, torus: AffineSubtorus) -> AffineSubtorus:
	directions = [[int(x) for x in row] for row in matMul(latticeLinear(lattice, g), torus.directions)]
	return canonicalSubtorus(lattice, applyToPoint(g, torus.basepoint), directions)


def genericPoint(
	lattice: TorusLattice,
	torus: AffineSubtorus,
	primes: Sequence[int] = PRIMARY_PRIMES,
) -> list[Fraction]:
	k = torus.dimension
	if k > len(primes):
		raise SingularLocusError(f"need {k} primes for a generic point, have {len(primes)}", stage="strata")
	parametrization = subtorusParametrization(lattice, torus)
	offsets = [Fraction(1, p) for p in primes[:k]]
	point = list(torus.basepoint)
	for i, row in enumerate(parametrization):
		point[i] += sum((offsets[j] * row[j] for j in range(k)), Fraction(0))
	return point


def inducedAction(g: AffineIsometry, parametrization: Sequence[Sequence[Scalar]]) -> RationalMatrix:
	"""The ``k × k`` matrix ``M`` with ``A·P = P·M``."""
	pt = transpose(parametrization)
	image = matMul(g.linear, parametrization)
	induced = matMul(matMul(inverse(matMul(pt, parametrization)), pt), image)
	if matMul(parametrization, induced) != image:
		raise ValueError(f"element {g.word} does not preserve the subtorus directions")
	return induced


@dataclass(frozen=True)
class Stratum:
	label: str
	representative: AffineSubtorus
	orbit: tuple[AffineSubtorus, ...]
	# generator of the generic-point stabilizer, the local model C²/Z2
	stabilizingInvolution: AffineIsometry
	multiplicity: int
	# oriented so that φ restricts to calibration·du1∧…∧duk
	parametrization: tuple[tuple[Fraction, ...], ...]
	calibration: Fraction
	setwiseStabilizer: tuple[int, ...]
	pointwiseStabilizer: tuple[int, ...]
	deckElement: AffineIsometry | None
	hasHarmonicOneForm: bool

	@property
	def dimension(self) -> int:
		return self.representative.dimension


@dataclass(frozen=True)
class StratumAnchor:
	"""Config-supplied label and representative for one orbit."""

	label: str
	basepoint: tuple[Fraction, ...]
	directions: tuple[tuple[int, ...], ...]


def _stabilizerOfPoint(group: IsometryGroup, point: Sequence[Fraction]) -> tuple[int, ...]:
	reduced = reducePoint(group.lattice, point)
	return tuple(
		i
		for i, g in enumerate(group.elements)
		if reducePoint(group.lattice, applyToPoint(g, point)) == reduced
	)


def _multiplicity(group: IsometryGroup, setwise: Sequence[int], point: Sequence[Fraction]) -> int:
	return len({reducePoint(group.lattice, applyToPoint(group.elements[i], point)) for i in setwise})


def _buildStratum(
	group: IsometryGroup,
	phi: Form,
	label: str,
	representative: AffineSubtorus,
	orbit: Sequence[AffineSubtorus],
) -> Stratum:
	lattice = group.lattice
	n = lattice.dimension
	k = representative.dimension
	if n - k != NORMAL_CODIMENSION:
		raise SingularLocusError(
			f"unsupported singularity: stratum {label} has codimension {n - k}",
			stage="strata",
		)
	setwise = tuple(
		i for i, g in enumerate(group.elements) if actOnSubtorus(lattice, g, representative) == representative
	)
	point = genericPoint(lattice, representative, PRIMARY_PRIMES)
	pointwise = _stabilizerOfPoint(group, point)
	if len(pointwise) != 2:
		raise SingularLocusError(
			f"unsupported singularity: generic stabilizer of {label} has order {len(pointwise)}",
			stage="strata",
		)
	sigma = group.elements[pointwise[1]]
	minusOne = [[x - int(i == j) for j, x in enumerate(row)] for i, row in enumerate(sigma.linear)]
	plusOne = [[x + int(i == j) for j, x in enumerate(row)] for i, row in enumerate(sigma.linear)]
	if rank(minusOne) != n - k or rank(plusOne) != k:
		raise SingularLocusError(
			f"unsupported singularity: {sigma.word} does not act as -1 on the normal space of {label}",
			stage="strata",
		)
	base = representative.basepoint
	directions = subtorusParametrization(lattice, representative)
	fixesBase = reducePoint(lattice, applyToPoint(sigma, base)) == reducePoint(lattice, base)
	if matMul(sigma.linear, directions) != directions or not fixesBase:
		raise SingularLocusError(f"{sigma.word} does not fix {label} pointwise", stage="strata")
	multiplicity = _multiplicity(group, setwise, point)
	checkPoint = genericPoint(lattice, representative, CHECK_PRIMES)
	checkMultiplicity = _multiplicity(group, setwise, checkPoint)
	if _stabilizerOfPoint(group, checkPoint) != pointwise or checkMultiplicity != multiplicity:
		raise SingularLocusError(f"generic point checks disagree on stratum {label}", stage="strata")
	parametrization, calibration = calibratedParametrization(lattice, representative, phi)
	if calibration == 0:
		raise SingularLocusError(f"non-calibrated stratum: φ restricts to zero on {label}", stage="strata")
	deck = next((group.elements[i] for i in setwise if i not in pointwise), None)
	induced = [inducedAction(group.elements[i], parametrization) for i in setwise]
	hasOneForm = bool(invariantForms(induced, parametrizationCoordinates(k), 1))
	if not hasOneForm:
		log.warning(f"g2kit strata: {label} carries no invariant 1-form")
	log.debug(
		f"g2kit strata: {label} orbit={len(orbit)} setwise={len(setwise)} "
		f"m={multiplicity} calibration={calibration}",
	)
	return Stratum(
		label=label,
		representative=representative,
		orbit=tuple(orbit),
		stabilizingInvolution=sigma,
		multiplicity=multiplicity,
		parametrization=tuple(tuple(row) for row in parametrization),
		calibration=calibration,
		setwiseStabilizer=setwise,
		pointwiseStabilizer=pointwise,
		deckElement=deck,
		hasHarmonicOneForm=hasOneForm,
	)


def _nextLabel(used: set[str]) -> str:
	i = 1
	while f"N{i}" in used:
		i += 1
	used.add(f"N{i}")
	return f"N{i}"


def fixedComponents(group: IsometryGroup) -> list[AffineSubtorus]:
	"""Union of the fixed sets of all non-identity elements, deduplicated and sorted."""
	components: dict[AffineSubtorus, None] = {}
	for g in group.elements:
		if g.isIdentity():
			continue
		for torus in fixedSet(group.lattice, g):
			components.setdefault(torus)
	return sorted(components, key=AffineSubtorus.key)


def orbitPartition(group: IsometryGroup, tori: Sequence[AffineSubtorus]) -> list[list[AffineSubtorus]]:
	known = set(tori)
	assigned: set[AffineSubtorus] = set()
	orbits: list[list[AffineSubtorus]] = []
	for torus in tori:
		if torus in assigned:
			continue
		images = {actOnSubtorus(group.lattice, g, torus) for g in group.elements}
		orbit = sorted(images, key=AffineSubtorus.key)
		if not known.issuperset(orbit):
			raise SingularLocusError("fixed components are not closed under the group", stage="strata")
		assigned.update(orbit)
		orbits.append(orbit)
	return orbits


def strata(group: IsometryGroup, phi: Form, anchors: Sequence[StratumAnchor] = ()) -> list[Stratum]:
	"""Group the fixed subtori into G-orbits and describe each as a stratum.

	Anchored orbits come first, in anchor order, with the anchor as their
	representative. The rest follow ordered by their smallest member and
	take the lowest unused ``N<i>`` labels.
	"""
	lattice = group.lattice
	tori = fixedComponents(group)
	orbits = orbitPartition(group, tori)
	log.info(f"g2kit strata: {len(tori)} fixed subtori in {len(orbits)} orbits")

	chosen: list[tuple[str, AffineSubtorus, list[AffineSubtorus]]] = []
	taken: set[int] = set()
	used = {anchor.label for anchor in anchors}
	if len(used) != len(anchors):
		raise SingularLocusError("duplicate stratum anchor labels", stage="strata")
	for anchor in anchors:
		torus = canonicalSubtorus(lattice, anchor.basepoint, anchor.directions)
		index = next((i for i, orbit in enumerate(orbits) if torus in orbit), None)
		if index is None:
			raise SingularLocusError(f"anchor {anchor.label} is not a fixed subtorus", stage="strata")
		if index in taken:
			raise SingularLocusError(
				f"anchor {anchor.label} lies in an already anchored orbit",
				stage="strata",
			)
		taken.add(index)
		chosen.append((anchor.label, torus, orbits[index]))
	for index, orbit in enumerate(orbits):
		if index not in taken:
			chosen.append((_nextLabel(used), orbit[0], orbit))
	return [_buildStratum(group, phi, label, rep, orbit) for label, rep, orbit in chosen]
