"""Cohomology model of the resolved orbifold.

``H*(X) ⊕ ⊕_j H^{*-2}(N_j)⊗x_j``: the base sector holds invariant classes of
the orbifold, and every stratum contributes a copy of its own cohomology
shifted up by two through the Thom symbol ``x_j``.

A ``ModelClass`` stores coefficient vectors keyed by ``(sector, degree)``,
where the sector is ``None`` for the base and a stratum label otherwise and
the degree is always the total degree in the model.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence
from fractions import Fraction

from ._cohomology import CohomologySpace, invariantBasis, poincareDual, stratumCohomology
from ._errors import ModelError
from ._exactLinalg import Scalar, formatRational
from ._exteriorAlgebra import Form, defaultCoordinates, parametrizationCoordinates, restrict, wedge
from ._flatOrbifold import IsometryGroup
from ._singularLocus import Stratum
from .logHandler import log

# x_j·x_j = THOM_SQUARE·Th[N_j]; the self-intersection of the exceptional CP¹
THOM_SQUARE = Fraction(-2)

# sector key of H*(X)
BASE = None

SectorKey = tuple[str | None, int]


def _partOrder(item: tuple[SectorKey, tuple[Fraction, ...]]) -> tuple[str, int]:
	return (item[0][0] or "", item[0][1])


class ModelClass:
	"""Exact element of the model; zero vectors are never stored."""

	__slots__ = ("parts",)

	parts: dict[SectorKey, tuple[Fraction, ...]]

	def __init__(self, parts: Mapping[SectorKey, Sequence[Scalar]] | None = None):
		self.parts = {}
		for key, vector in (parts or {}).items():
			values = tuple(Fraction(x) for x in vector)
			if any(values):
				self.parts[key] = values

	def isZero(self) -> bool:
		return not self.parts

	@property
	def degree(self) -> int | None:
		degrees = {degree for _, degree in self.parts}
		return degrees.pop() if len(degrees) == 1 else None

	def _combine(self, other: ModelClass, factor: int) -> ModelClass:
		parts = dict(self.parts)
		for key, vector in other.parts.items():
			if key in parts:
				if len(parts[key]) != len(vector):
					raise ValueError(f"sector {key} has vectors of different length")
				parts[key] = tuple(x + factor * y for x, y in zip(parts[key], vector, strict=True))
			else:
				parts[key] = tuple(factor * y for y in vector)
		return ModelClass(parts)

	def __add__(self, other: ModelClass) -> ModelClass:
		return self._combine(other, 1)

	def __sub__(self, other: ModelClass) -> ModelClass:
		return self._combine(other, -1)

	def __neg__(self) -> ModelClass:
		return self * -1

	def __mul__(self, scalar: Scalar) -> ModelClass:
		return ModelClass({key: [x * scalar for x in vector] for key, vector in self.parts.items()})

	__rmul__ = __mul__

	def __eq__(self, other: object) -> bool:
		if not isinstance(other, ModelClass):
			return NotImplemented
		return self.parts == other.parts

	def __hash__(self) -> int:
		return hash(tuple(sorted(self.parts.items(), key=_partOrder)))

	def __repr__(self) -> str:
		return f"ModelClass({self.parts!r})"


class ResolutionModel:
	"""The model algebra over a computed group and its strata."""

	def __init__(
		self,
		group: IsometryGroup,
		strata: Sequence[Stratum],
		thomSquare: Fraction = THOM_SQUARE,
		coordinates: tuple[str, ...] | None = None,
	):
		self.group = group
		self.strata = tuple(strata)
		self.thomSquare = Fraction(thomSquare)
		self.dimension = group.lattice.dimension
		self.coordinates = coordinates or defaultCoordinates(self.dimension)
		self._byLabel = {s.label: s for s in self.strata}
		self.baseSpaces: list[CohomologySpace] = [
			invariantBasis(group, k, self.coordinates) for k in range(self.dimension + 1)
		]
		self.fiberSpaces: dict[str, list[CohomologySpace]] = {
			s.label: stratumCohomology(s, group) for s in self.strata
		}
		self._duals: dict[tuple[str, Form], Form] = {}

	def stratum(self, label: str) -> Stratum:
		try:
			return self._byLabel[label]
		except KeyError:
			raise ModelError(f"unknown stratum {label!r}", stage="model") from None

	def _sectors(self) -> Iterator[str | None]:
		yield BASE
		for s in self.strata:
			yield s.label

	def _space(self, sector: str | None, degree: int) -> CohomologySpace | None:
		if sector is BASE:
			return self.baseSpaces[degree] if 0 <= degree <= self.dimension else None
		spaces = self.fiberSpaces[sector]
		fiberDegree = degree - 2
		return spaces[fiberDegree] if 0 <= fiberDegree < len(spaces) else None

	# --- construction ---------------------------------------------------------

	def thomSymbol(self, label: str) -> ModelClass:
		"""``1⊗x_label``, of degree two."""
		self.stratum(label)
		return ModelClass({(label, 2): [1]})

	def fromBaseForm(self, form: Form) -> ModelClass:
		if form.isZero():
			return ModelClass()
		degree = form.degree
		if degree is None:
			raise ModelError(f"base form {form!r} is not homogeneous", stage="model")
		try:
			return ModelClass({(BASE, degree): self.baseSpaces[degree].coordinates(form)})
		except ValueError as e:
			raise ModelError(str(e), stage="model") from e

	def fromFiberedForm(self, label: str, form: Form) -> ModelClass:
		"""``[form]⊗x_label`` for an invariant form on the stratum's coordinates."""
		stratum = self.stratum(label)
		if form.isZero():
			return ModelClass()
		if form.ambient != parametrizationCoordinates(stratum.dimension):
			raise ModelError(
				f"fibered form for {label} must live on {parametrizationCoordinates(stratum.dimension)}",
				stage="model",
			)
		degree = form.degree
		if degree is None:
			raise ModelError(f"fibered form {form!r} is not homogeneous", stage="model")
		try:
			return ModelClass({(label, degree + 2): self.fiberSpaces[label][degree].coordinates(form)})
		except ValueError as e:
			raise ModelError(f"{label}: {e}", stage="model") from e

	def fromThomCombination(
		self,
		thom: Mapping[str, Scalar],
		base: Form | None = None,
	) -> ModelClass:
		"""``Σ c_j·x_j`` plus an optional base class."""
		result = ModelClass()
		for label, coefficient in thom.items():
			result = result + self.thomSymbol(label) * coefficient
		if base is not None:
			result = result + self.fromBaseForm(base)
		return result

	def baseForm(self, u: ModelClass, degree: int) -> Form:
		"""Invariant representative of the base part of ``u`` in one degree."""
		vector = u.parts.get((BASE, degree))
		if vector is None:
			return Form(self.coordinates)
		return self.baseSpaces[degree].combine(vector, self.coordinates)

	def fiberForm(self, u: ModelClass, label: str, degree: int) -> Form:
		"""Representative on the stratum of the ``label`` part of ``u`` in total degree ``degree``."""
		ambient = parametrizationCoordinates(self.stratum(label).dimension)
		vector = u.parts.get((label, degree))
		if vector is None:
			return Form(ambient)
		return self.fiberSpaces[label][degree - 2].combine(vector, ambient)

	# --- linear structure -----------------------------------------------------

	def modelBetti(self) -> list[int]:
		result = []
		for k in range(self.dimension + 1):
			total = 0
			for sector in self._sectors():
				space = self._space(sector, k)
				total += space.dimension if space else 0
			result.append(total)
		return result

	def basis(self, degree: int) -> list[ModelClass]:
		"""Unit classes of one degree: base first, then strata in order."""
		result: list[ModelClass] = []
		for sector in self._sectors():
			space = self._space(sector, degree)
			if space is None:
				continue
			for i in range(space.dimension):
				result.append(ModelClass({(sector, degree): [int(i == j) for j in range(space.dimension)]}))
		return result

	def vector(self, u: ModelClass, degree: int) -> list[Fraction]:
		"""Coordinates of the degree-``degree`` part of ``u`` against ``basis(degree)``."""
		for key in u.parts:
			if key[0] is not BASE and key[0] not in self._byLabel:
				raise ModelError(f"class refers to unknown stratum {key[0]!r}", stage="model")
		result: list[Fraction] = []
		for sector in self._sectors():
			space = self._space(sector, degree)
			if space is None:
				continue
			result.extend(u.parts.get((sector, degree), (Fraction(0),) * space.dimension))
		return result

	def fromVector(self, degree: int, vector: Sequence[Scalar]) -> ModelClass:
		parts: dict[SectorKey, list[Scalar]] = {}
		offset = 0
		for sector in self._sectors():
			space = self._space(sector, degree)
			if space is None:
				continue
			parts[(sector, degree)] = list(vector[offset : offset + space.dimension])
			offset += space.dimension
		if offset != len(vector):
			raise ValueError(f"expected {offset} coordinates in degree {degree}, got {len(vector)}")
		return ModelClass(parts)

	def degreeOf(self, u: ModelClass) -> int | None:
		return u.degree

	# --- product --------------------------------------------------------------

	def _dual(self, label: str, w: Form) -> Form:
		key = (label, w)
		if key not in self._duals:
			self._duals[key] = poincareDual(self.stratum(label), w, self.group, self.coordinates)
			log.debug(f"g2kit model: PD[{label}] against {w!r} = {self._duals[key]!r}")
		return self._duals[key]

	def _restrictTo(self, xi: Form, stratum: Stratum) -> Form | None:
		degree = xi.degree
		if degree is None or degree > stratum.dimension:
			return None
		return restrict(xi, stratum.parametrization)

	def _productPart(self, left: SectorKey, right: SectorKey, u: ModelClass, v: ModelClass) -> ModelClass:
		(leftSector, leftDegree), (rightSector, rightDegree) = left, right
		if leftSector is BASE and rightSector is BASE:
			return self.fromBaseForm(wedge(self.baseForm(u, leftDegree), self.baseForm(v, rightDegree)))
		if leftSector is not BASE and rightSector is not BASE:
			if leftSector != rightSector:
				return ModelClass()
			alpha = self.fiberForm(u, leftSector, leftDegree)
			beta = self.fiberForm(v, rightSector, rightDegree)
			weight = wedge(alpha, beta)
			if weight.isZero():
				return ModelClass()
			return self.fromBaseForm(self._dual(leftSector, weight) * self.thomSquare)
		if leftSector is BASE:
			assert rightSector is not BASE
			label = rightSector
			stratum = self.stratum(label)
			restricted = self._restrictTo(self.baseForm(u, leftDegree), stratum)
			if restricted is None:
				return ModelClass()
			return self.fromFiberedForm(label, wedge(restricted, self.fiberForm(v, label, rightDegree)))
		assert leftSector is not BASE
		label = leftSector
		stratum = self.stratum(label)
		restricted = self._restrictTo(self.baseForm(v, rightDegree), stratum)
		if restricted is None:
			return ModelClass()
		return self.fromFiberedForm(label, wedge(self.fiberForm(u, label, leftDegree), restricted))

	def product(self, u: ModelClass, v: ModelClass) -> ModelClass:
		"""Bilinear product; parts landing above the top degree vanish."""
		result = ModelClass()
		for left in u.parts:
			for right in v.parts:
				if left[1] + right[1] > self.dimension:
					continue
				result = result + self._productPart(left, right, u, v)
		return result

	# --- output ---------------------------------------------------------------

	def toJson(self, u: ModelClass) -> dict[str, object]:
		base: dict[str, list[str]] = {}
		fibered: dict[str, dict[str, list[str]]] = {}
		for (sector, degree), vector in sorted(u.parts.items(), key=_partOrder):
			values = [formatRational(x) for x in vector]
			if sector is BASE:
				base[str(degree)] = values
			else:
				fibered.setdefault(sector, {})[str(degree)] = values
		return {"base": base, "fibered": fibered}

	def describe(self, u: ModelClass) -> str:
		"""Human-readable sum of representatives, strata in model order."""
		if u.isZero():
			return "0"
		pieces: list[str] = []
		for sector in self._sectors():
			for _, degree in sorted(k for k in u.parts if k[0] == sector):
				if sector is BASE:
					pieces.append(f"[{self.baseForm(u, degree)!r}]")
				else:
					pieces.append(f"[{self.fiberForm(u, sector, degree)!r}]⊗x_{sector}")
		return " + ".join(pieces)
