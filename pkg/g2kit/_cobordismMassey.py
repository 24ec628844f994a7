"""Cobordisms between strata, their crossings with other strata, and Massey products.

A cobordism sweeps a 3-torus along the t-circle while a piecewise-linear
drift pushes it in directions normal to the torus. Its boundary is the pair
of end slices; where the swept 4-manifold crosses another stratum it
contributes a signed count that feeds the Massey value.

Crossings are found exactly. On one segment the swept torus is
``p + s·w + B·H·a`` and a target torus is ``q + B·H'·b``, so a crossing is an
integer congruence ``[H | -H']·(a, b) ≡ B⁻¹(q - p) - s·B⁻¹w (mod Zⁿ)``. A
Smith normal form splits it into rows that fix ``a, b`` up to a finite
choice and rows that only constrain ``s``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, floor

from ._errors import CobordismError, MasseyNotWellDefined, ModelError, NonTransverseError
from ._exactLinalg import (
	RationalMatrix,
	determinant,
	fromColumns,
	isInteger,
	matVec,
	rank,
	rowReduce,
	smithDiagonal,
	smithNormalForm,
	transpose,
)
from ._exteriorAlgebra import Form, restrict
from ._flatOrbifold import IsometryGroup, TorusLattice, reducePoint
from ._resolutionAlgebra import ModelClass, ResolutionModel
from ._singularLocus import (
	AffineSubtorus,
	Stratum,
	calibratedParametrization,
	canonicalSubtorus,
	subtorusParametrization,
)
from .logHandler import log

# averaging over the order-8 quotient together with the Thom normalisation Th = [2υ]
MASSEY_FACTOR = 4

# the cobordism parameter runs along this coordinate
T_AXIS = 0

VERDICT_NON_FORMAL = "NON-FORMAL: certificate follows"
VERDICT_VANISHES = "Massey product vanishes (value 0)"
VERDICT_IN_IDEAL = "Massey product lies in the ideal"
VERDICT_NO_DATA = "no Massey data"


@dataclass(frozen=True)
class Knot:
	t: Fraction
	drift: tuple[Fraction, ...]


@dataclass(frozen=True)
class CobordismDatum:
	"""The family ``t ↦ base|_{t} + drift(t)``, linear in ``t`` between knots."""

	base: AffineSubtorus
	knots: tuple[Knot, ...]

	@classmethod
	def fromEndpoints(
		cls,
		base: AffineSubtorus,
		tStart: Fraction,
		tEnd: Fraction,
		driftStart: Sequence[Fraction],
		driftEnd: Sequence[Fraction],
	) -> CobordismDatum:
		return cls(base, (Knot(tStart, tuple(driftStart)), Knot(tEnd, tuple(driftEnd))))

	def reversed(self) -> CobordismDatum:
		return CobordismDatum(self.base, tuple(reversed(self.knots)))

	def isDegenerate(self) -> bool:
		return all(knot == self.knots[0] for knot in self.knots)

	def point(self, knot: Knot) -> list[Fraction]:
		"""Basepoint of the slice at a knot."""
		point = [x + d for x, d in zip(self.base.basepoint, knot.drift, strict=True)]
		point[T_AXIS] = knot.t
		return point

	def velocity(self, segment: int) -> list[Fraction]:
		start, end = self.knots[segment], self.knots[segment + 1]
		return [b - a for a, b in zip(self.point(start), self.point(end), strict=True)]


@dataclass(frozen=True)
class BoundarySlice:
	label: str
	torus: AffineSubtorus
	sign: int


@dataclass(frozen=True)
class Crossing:
	"""One transverse point where the cobordism meets a stratum torus."""

	label: str
	torus: AffineSubtorus
	segment: int
	parameter: Fraction
	t: Fraction
	point: tuple[Fraction, ...]
	sign: int


def checkDatum(lattice: TorusLattice, datum: CobordismDatum) -> None:
	"""Raise ``CobordismError`` unless the knots describe a valid monotone family."""
	n = lattice.dimension
	if not datum.knots:
		raise CobordismError("cobordism needs at least one knot", stage="cobordism")
	if any(len(knot.drift) != n for knot in datum.knots):
		raise CobordismError(f"drift vectors must have {n} entries", stage="cobordism")
	if any(knot.drift[T_AXIS] for knot in datum.knots):
		raise CobordismError("drift must not move the t coordinate", stage="cobordism")
	if any(datum.base.directions[T_AXIS]):
		raise CobordismError("base torus must lie in a t-level", stage="cobordism")
	if datum.isDegenerate():
		return
	steps = [b.t - a.t for a, b in zip(datum.knots, datum.knots[1:])]
	if not (all(step > 0 for step in steps) or all(step < 0 for step in steps)):
		raise CobordismError("knot t-values must be strictly monotone", stage="cobordism")
	tangent = subtorusParametrization(lattice, datum.base)
	for a, b in zip(datum.knots, datum.knots[1:]):
		shift = [y - x for x, y in zip(a.drift, b.drift, strict=True)]
		if any(x for x in matVec(transpose(tangent), shift)):
			raise CobordismError("drift must be normal to the base torus", stage="cobordism")


def _sign(value: Fraction) -> int:
	return (value > 0) - (value < 0)


def _stratumOf(strata: Sequence[Stratum], torus: AffineSubtorus) -> Stratum | None:
	return next((s for s in strata if torus in s.orbit), None)


def boundary(
	datum: CobordismDatum,
	group: IsometryGroup,
	strata: Sequence[Stratum],
	phi: Form,
) -> list[BoundarySlice]:
	"""Signed end slices, with the outward normal first.

	The cobordism is oriented by ``(-v, P)`` with ``v`` the direction of
	travel and ``P`` the base parametrization, so the first slice enters with
	``+`` and the last with ``-``. Each sign is then taken relative to the
	calibrated orientation of the slice.
	"""
	lattice = group.lattice
	checkDatum(lattice, datum)
	if datum.isDegenerate():
		return []
	tangent = subtorusParametrization(lattice, datum.base)
	relative = _sign(restrict(phi, tangent).topCoefficient())
	if relative == 0:
		raise CobordismError("φ vanishes on the base torus", stage="cobordism")
	slices: list[BoundarySlice] = []
	for knot, sign in ((datum.knots[0], 1), (datum.knots[-1], -1)):
		torus = canonicalSubtorus(lattice, datum.point(knot), datum.base.directions)
		stratum = _stratumOf(strata, torus)
		if stratum is None:
			raise CobordismError(f"slice at t={knot.t} is not a stratum torus", stage="cobordism")
		slices.append(BoundarySlice(stratum.label, torus, sign * relative))
	log.info(
		"g2kit cobordism: boundary "
		+ " ".join(f"{'+' if s.sign > 0 else '-'}{s.label}" for s in slices),
	)
	return slices


def _crossingParameters(qr: Sequence[Fraction], qw: Sequence[Fraction]) -> list[Fraction] | None:
	"""All ``s`` in ``[0, 1]`` with ``s·qw ≡ qr (mod Z)``; ``None`` when every ``s`` works."""
	moving = [i for i, x in enumerate(qw) if x]
	if not moving:
		return None if all(isInteger(x) for x in qr) else []
	i = moving[0]
	lo, hi = sorted((-qr[i], qw[i] - qr[i]))
	found: set[Fraction] = set()
	for m in range(ceil(lo), floor(hi) + 1):
		s = (qr[i] + m) / qw[i]
		if all(isInteger(s * w - r) for w, r in zip(qw, qr, strict=True)):
			found.add(s)
	return sorted(found)


def _segmentCrossings(
	datum: CobordismDatum,
	segment: int,
	lattice: TorusLattice,
	target: AffineSubtorus,
) -> list[tuple[Fraction, tuple[Fraction, ...]]]:
	n = lattice.dimension
	k = datum.base.dimension
	width = k + target.dimension
	start = datum.point(datum.knots[segment])
	velocity = datum.velocity(segment)
	g = [[*datum.base.directions[i], *(-x for x in target.directions[i])] for i in range(n)]
	u, d, v = smithNormalForm(g, cols=width)
	diagonal = smithDiagonal(d)
	pivots = sum(1 for x in diagonal if x)
	r = [b - a for a, b in zip(lattice.toLattice(start), lattice.toLattice(target.basepoint), strict=True)]
	ur = matVec(u, r)
	uw = matVec(u, lattice.toLattice(velocity))
	parameters = _crossingParameters(ur[pivots:], uw[pivots:])
	if parameters is None:
		raise NonTransverseError(f"non-transverse intersection with {target.toJson()}", stage="cobordism")
	last = segment == len(datum.knots) - 2
	found: list[tuple[Fraction, tuple[Fraction, ...]]] = []
	for s in parameters:
		if s == 0 or (s == 1 and last):
			continue
		if s == 1:
			knot = datum.knots[segment + 1]
			raise NonTransverseError(f"crossing at the knot t={knot.t}", stage="cobordism")
		if pivots < width:
			raise NonTransverseError(f"non-transverse intersection at s={s}", stage="cobordism")
		c = [x - s * y for x, y in zip(ur, uw, strict=True)]
		choices = [[(c[i] + step) / diagonal[i] for step in range(diagonal[i])] for i in range(pivots)]
		for combo in product(*choices):
			a = matVec(v, list(combo))[:k]
			offset = lattice.fromLattice(matVec(datum.base.directions, a)) if k else [Fraction(0)] * n
			point = [p + s * w + o for p, w, o in zip(start, velocity, offset, strict=True)]
			found.append((s, reducePoint(lattice, point)))
	return found


def _orientationSign(
	velocity: Sequence[Fraction],
	tangent: RationalMatrix,
	targetFrame: RationalMatrix,
) -> int:
	n = len(velocity)
	cols = [[-x for x in velocity], *transpose(tangent), *transpose(targetFrame)]
	return _sign(determinant(fromColumns(cols, n)))


def intersections(
	datum: CobordismDatum,
	group: IsometryGroup,
	strata: Sequence[Stratum],
	phi: Form,
) -> list[Crossing]:
	"""Signed transverse crossings with every torus of every stratum, on the covering torus.

	The sign compares ``(-v, P, P')`` with the ambient orientation, where
	``P'`` is the calibrated frame of the crossed torus.
	"""
	lattice = group.lattice
	checkDatum(lattice, datum)
	if datum.isDegenerate():
		return []
	n = lattice.dimension
	if any(datum.base.dimension + 1 + s.dimension != n for s in strata):
		raise CobordismError("cobordism and strata do not have complementary dimensions", stage="cobordism")
	tangent = subtorusParametrization(lattice, datum.base)
	result: list[Crossing] = []
	for stratum in strata:
		for torus in stratum.orbit:
			frame, _ = calibratedParametrization(lattice, torus, phi)
			for segment in range(len(datum.knots) - 1):
				hits = _segmentCrossings(datum, segment, lattice, torus)
				if not hits:
					continue
				velocity = datum.velocity(segment)
				sign = _orientationSign(velocity, tangent, frame)
				if sign == 0:
					raise NonTransverseError(
						f"degenerate orientation frame on {stratum.label}",
						stage="cobordism",
					)
				start, end = datum.knots[segment].t, datum.knots[segment + 1].t
				for s, point in hits:
					t = start + s * (end - start)
					result.append(Crossing(stratum.label, torus, segment, s, t, point, sign))
	log.info(f"g2kit cobordism: {len(result)} transverse crossings")
	return result


def crossingCoefficients(
	model: ResolutionModel,
	slices: Sequence[BoundarySlice],
	crossings: Sequence[Crossing],
) -> dict[str, Fraction]:
	"""Per-stratum coefficient σ_S of ``[φ|_S]⊗x_S`` before the factor ``MASSEY_FACTOR``.

	σ_S is the signed crossing count on one torus of S. Every crossed torus of
	an orbit must carry the same count.
	"""
	if not slices:
		return {}
	perTorus: dict[str, dict[AffineSubtorus, int]] = {}
	for crossing in crossings:
		counts = perTorus.setdefault(crossing.label, {})
		counts[crossing.torus] = counts.get(crossing.torus, 0) + crossing.sign
	coefficients: dict[str, Fraction] = {}
	for stratum in model.strata:
		found = set(perTorus.get(stratum.label, {}).values())
		if len(found) > 1:
			raise CobordismError(
				f"crossed tori of {stratum.label} disagree: counts {sorted(found)}",
				stage="cobordism",
			)
		if found and (count := found.pop()):
			coefficients[stratum.label] = Fraction(count)
	return coefficients


def masseyValue(
	datum: CobordismDatum,
	model: ResolutionModel,
	phi: Form,
) -> ModelClass:
	"""``Σ_S MASSEY_FACTOR·σ_S·[φ|_S]⊗x_S`` over the strata the cobordism crosses."""
	slices = boundary(datum, model.group, model.strata, phi)
	crossings = intersections(datum, model.group, model.strata, phi)
	return masseyValueFrom(model, slices, crossings, phi)


def masseyValueFrom(
	model: ResolutionModel,
	slices: Sequence[BoundarySlice],
	crossings: Sequence[Crossing],
	phi: Form,
) -> ModelClass:
	value = ModelClass()
	for label, sigma in crossingCoefficients(model, slices, crossings).items():
		stratum = model.stratum(label)
		calibration = restrict(phi, stratum.parametrization)
		value = value + model.fromFiberedForm(label, calibration * (MASSEY_FACTOR * sigma))
	return value


@dataclass(frozen=True)
class MasseyVerdict:
	degree: int
	witnesses: dict[str, ModelClass]
	value: ModelClass
	idealBasis: tuple[ModelClass, ...]
	idealRank: int
	augmentedRank: int

	@property
	def wellDefined(self) -> bool:
		return all(w.isZero() for w in self.witnesses.values())

	@property
	def member(self) -> bool:
		return self.idealRank == self.augmentedRank

	@property
	def verdictText(self) -> str:
		if self.value.isZero():
			return VERDICT_VANISHES
		if self.member:
			return VERDICT_IN_IDEAL
		return VERDICT_NON_FORMAL


def _homogeneousDegree(model: ResolutionModel, u: ModelClass, name: str) -> int:
	degree = model.degreeOf(u)
	if degree is None:
		raise ModelError(f"Massey input {name} must be a nonzero homogeneous class", stage="massey")
	return degree


def tripleMassey(
	model: ResolutionModel,
	a: ModelClass,
	b: ModelClass,
	c: ModelClass,
	value: ModelClass,
) -> MasseyVerdict:
	"""Decide whether ``value`` lies in the ideal ``a·H* + H*·c`` of its degree.

	Raises ``MasseyNotWellDefined`` unless ``a·b = 0`` and ``b·c = 0``.
	"""
	da = _homogeneousDegree(model, a, "a")
	db = _homogeneousDegree(model, b, "b")
	dc = _homogeneousDegree(model, c, "c")
	ab = model.product(a, b)
	bc = model.product(b, c)
	if not ab.isZero() or not bc.isZero():
		raise MasseyNotWellDefined(
			"Massey product is not well-defined: a·b or b·c is nonzero",
			{"ab": model.toJson(ab), "bc": model.toJson(bc)},
		)
	degree = da + db + dc - 1
	if not value.isZero() and model.degreeOf(value) != degree:
		raise ModelError(f"Massey value must have degree {degree}", stage="massey")
	generators: list[ModelClass] = []
	if 0 <= degree - da <= model.dimension:
		generators.extend(model.product(a, e) for e in model.basis(degree - da))
	if 0 <= degree - dc <= model.dimension:
		generators.extend(model.product(e, c) for e in model.basis(degree - dc))
	vectors = [model.vector(x, degree) for x in generators]
	idealRank = rank(vectors)
	augmentedRank = rank([*vectors, model.vector(value, degree)])
	reduced, _ = rowReduce(vectors) if vectors and vectors[0] else ([], [])
	basis = tuple(model.fromVector(degree, row) for row in reduced)
	log.info(f"g2kit massey: degree {degree}, ideal rank {idealRank}, with value {augmentedRank}")
	return MasseyVerdict(
		degree=degree,
		witnesses={"ab": ab, "bc": bc},
		value=value,
		idealBasis=basis,
		idealRank=idealRank,
		augmentedRank=augmentedRank,
	)
