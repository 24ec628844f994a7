"""Exterior algebra of constant-coefficient forms over Q.

A monomial ``dx_{i1}∧…∧dx_{ik}`` with ``i1 < … < ik`` is stored as the bit
mask ``Σ 2**i``; a ``Form`` maps masks to nonzero ``Fraction`` coefficients.
Bases are ordered lexicographically by index tuple, which is the order
``itertools.combinations`` produces.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from itertools import combinations

from ._exactLinalg import Scalar, formatRational, parseRational, rowReduce

STANDARD_COORDINATES: tuple[str, ...] = ("t", "x1", "y1", "x2", "y2", "x3", "y3")


def defaultCoordinates(n: int) -> tuple[str, ...]:
	"""The canonical names for seven coordinates, ``c1..cn`` otherwise."""
	if n == len(STANDARD_COORDINATES):
		return STANDARD_COORDINATES
	return tuple(f"c{i + 1}" for i in range(n))


def parametrizationCoordinates(k: int) -> tuple[str, ...]:
	return tuple(f"u{i + 1}" for i in range(k))


def maskFromIndices(indices: Iterable[int]) -> int:
	mask = 0
	for i in indices:
		if mask >> i & 1:
			raise ValueError(f"repeated index {i}")
		mask |= 1 << i
	return mask


def indicesFromMask(mask: int) -> tuple[int, ...]:
	return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def basisMasks(n: int, k: int) -> list[int]:
	"""Degree-k monomials on n coordinates, in lexicographic index order."""
	return [maskFromIndices(c) for c in combinations(range(n), k)]


def wedgeSign(a: int, b: int) -> int:
	"""Sign of ``e_a ∧ e_b`` relative to the sorted monomial, 0 if they overlap."""
	if a & b:
		return 0
	swaps = 0
	for j in indicesFromMask(b):
		swaps += (a >> (j + 1)).bit_count()
	return -1 if swaps & 1 else 1


class Form:
	"""Immutable exact form on a fixed list of coordinate names."""

	__slots__ = ("ambient", "terms", "_hash")

	ambient: tuple[str, ...]
	terms: Mapping[int, Fraction]

	def __init__(self, ambient: Sequence[str], terms: Mapping[int, Scalar] | None = None):
		self.ambient = tuple(ambient)
		if len(set(self.ambient)) != len(self.ambient):
			raise ValueError(f"coordinate names are not distinct: {self.ambient}")
		limit = 1 << len(self.ambient)
		cleaned: dict[int, Fraction] = {}
		for mask, coefficient in (terms or {}).items():
			if not 0 <= mask < limit:
				raise ValueError(f"monomial {mask:b} outside {len(self.ambient)} coordinates")
			value = Fraction(coefficient)
			if value:
				cleaned[mask] = value
		self.terms = dict(sorted(cleaned.items(), key=lambda item: indicesFromMask(item[0])))
		self._hash: int | None = None

	@property
	def dimension(self) -> int:
		return len(self.ambient)

	@property
	def degree(self) -> int | None:
		"""Common degree of all terms; ``None`` for zero or inhomogeneous forms."""
		degrees = {mask.bit_count() for mask in self.terms}
		return degrees.pop() if len(degrees) == 1 else None

	def isZero(self) -> bool:
		return not self.terms

	def coefficient(self, names: Sequence[str]) -> Fraction:
		return self.terms.get(maskFromIndices(self.ambient.index(name) for name in names), Fraction(0))

	def topCoefficient(self) -> Fraction:
		return self.terms.get((1 << self.dimension) - 1, Fraction(0))

	def vector(self, k: int) -> list[Fraction]:
		"""Coefficients against ``basisMasks(n, k)``."""
		return [self.terms.get(mask, Fraction(0)) for mask in basisMasks(self.dimension, k)]

	@classmethod
	def fromVector(cls, ambient: Sequence[str], k: int, vector: Sequence[Scalar]) -> Form:
		masks = basisMasks(len(ambient), k)
		if len(masks) != len(vector):
			raise ValueError(f"expected {len(masks)} coefficients for degree {k}, got {len(vector)}")
		return cls(ambient, dict(zip(masks, vector, strict=True)))

	def _check(self, other: Form) -> None:
		if other.ambient != self.ambient:
			raise ValueError(f"coordinate mismatch: {self.ambient} vs {other.ambient}")

	def __add__(self, other: Form) -> Form:
		self._check(other)
		terms = dict(self.terms)
		for mask, value in other.terms.items():
			terms[mask] = terms.get(mask, Fraction(0)) + value
		return Form(self.ambient, terms)

	def __neg__(self) -> Form:
		return Form(self.ambient, {mask: -value for mask, value in self.terms.items()})

	def __sub__(self, other: Form) -> Form:
		return self + (-other)

	def __mul__(self, scalar: Scalar) -> Form:
		return Form(self.ambient, {mask: value * scalar for mask, value in self.terms.items()})

	__rmul__ = __mul__

	def __eq__(self, other: object) -> bool:
		if not isinstance(other, Form):
			return NotImplemented
		return self.ambient == other.ambient and self.terms == other.terms

	def __hash__(self) -> int:
		if self._hash is None:
			self._hash = hash((self.ambient, tuple(self.terms.items())))
		return self._hash

	def __repr__(self) -> str:
		if not self.terms:
			return "0"
		parts = []
		for mask, value in self.terms.items():
			names = "∧".join(f"d{self.ambient[i]}" for i in indicesFromMask(mask)) or "1"
			parts.append(f"{formatRational(value)}·{names}")
		return " + ".join(parts)


def monomial(ambient: Sequence[str], names: Sequence[str], coefficient: Scalar = 1) -> Form:
	"""``coefficient·d(names[0])∧…`` with the sign of sorting the names applied."""
	ambient = tuple(ambient)
	result = Form(ambient, {0: coefficient})
	for name in names:
		result = wedge(result, Form(ambient, {1 << ambient.index(name): 1}))
	return result


def constant(ambient: Sequence[str], value: Scalar = 1) -> Form:
	return Form(ambient, {0: value})


def wedge(a: Form, b: Form) -> Form:
	if a.ambient != b.ambient:
		raise ValueError(f"coordinate mismatch: {a.ambient} vs {b.ambient}")
	terms: dict[int, Fraction] = {}
	for ma, ca in a.terms.items():
		for mb, cb in b.terms.items():
			sign = wedgeSign(ma, mb)
			if sign:
				key = ma | mb
				terms[key] = terms.get(key, Fraction(0)) + sign * ca * cb
	return Form(a.ambient, terms)


def _pullbackAlong(matrix: Sequence[Sequence[Scalar]], a: Form, target: tuple[str, ...]) -> Form:
	"""Pull back along the linear map whose rows give ``d(source_i)`` in target covectors."""
	oneForms = [
		Form(target, {1 << j: value for j, value in enumerate(row) if value}) for row in matrix
	]
	terms: dict[int, Fraction] = {}
	for mask, coefficient in a.terms.items():
		image = constant(target, coefficient)
		for i in indicesFromMask(mask):
			image = wedge(image, oneForms[i])
			if image.isZero():
				break
		for key, value in image.terms.items():
			terms[key] = terms.get(key, Fraction(0)) + value
	return Form(target, terms)


def pullback(linear: Sequence[Sequence[Scalar]], a: Form) -> Form:
	"""Pullback of ``a`` along ``x ↦ L·x``; ``pullback(L1·L2, a) = pullback(L2, pullback(L1, a))``."""
	n = a.dimension
	if len(linear) != n or any(len(row) != n for row in linear):
		raise ValueError(f"pullback needs a {n}x{n} matrix")
	return _pullbackAlong(linear, a, a.ambient)


def restrict(a: Form, parametrization: Sequence[Sequence[Scalar]]) -> Form:
	"""Pull ``a`` back along ``u ↦ P·u`` onto coordinates ``u1..uk``.

	``P`` is ``n × k`` in ambient coordinates, so lengths of the embedding
	are part of the resulting coefficients.
	"""
	if len(parametrization) != a.dimension:
		raise ValueError(f"parametrization has {len(parametrization)} rows, form lives on {a.dimension}")
	k = len(parametrization[0]) if parametrization else 0
	if any(len(row) != k for row in parametrization):
		raise ValueError("ragged parametrization matrix")
	degree = a.degree
	if degree is not None and degree > k:
		raise ValueError(f"cannot restrict a degree-{degree} form to a {k}-dimensional subtorus")
	return _pullbackAlong(parametrization, a, parametrizationCoordinates(k))


# Named forms on the canonical coordinates (t, x1, y1, x2, y2, x3, y3).


def omega() -> Form:
	c = STANDARD_COORDINATES
	return monomial(c, ("x1", "y1")) + monomial(c, ("x2", "y2")) + monomial(c, ("x3", "y3"))


def reTheta() -> Form:
	"""Real part of dz1∧dz2∧dz3."""
	c = STANDARD_COORDINATES
	return (
		monomial(c, ("x1", "x2", "x3"))
		- monomial(c, ("x1", "y2", "y3"))
		- monomial(c, ("y1", "x2", "y3"))
		- monomial(c, ("y1", "y2", "x3"))
	)


def imTheta() -> Form:
	"""Imaginary part of dz1∧dz2∧dz3."""
	c = STANDARD_COORDINATES
	return (
		monomial(c, ("x1", "x2", "y3"))
		+ monomial(c, ("x1", "y2", "x3"))
		+ monomial(c, ("y1", "x2", "x3"))
		- monomial(c, ("y1", "y2", "y3"))
	)


def standardG2Form() -> Form:
	"""φ = dt∧ω + Re(dz1∧dz2∧dz3)."""
	return wedge(monomial(STANDARD_COORDINATES, ("t",)), omega()) + reTheta()


def volumeForm(ambient: Sequence[str] = STANDARD_COORDINATES) -> Form:
	return Form(ambient, {(1 << len(ambient)) - 1: 1})


def formToJson(a: Form) -> list[list[object]]:
	"""``[[names...], "p/q"]`` pairs in basis order."""
	return [
		[[a.ambient[i] for i in indicesFromMask(mask)], formatRational(value)]
		for mask, value in a.terms.items()
	]


def formFromJson(ambient: Sequence[str], data: Iterable[Sequence[object]]) -> Form:
	result = Form(ambient)
	for entry in data:
		names, value = entry
		if not isinstance(names, list | tuple):
			raise ValueError(f"form term needs a list of coordinate names, got {names!r}")
		unknown = [name for name in names if name not in ambient]
		if unknown:
			raise ValueError(f"unknown coordinates {unknown}")
		coefficient = parseRational(value if isinstance(value, int) else str(value))
		result = result + monomial(ambient, [str(name) for name in names], coefficient)
	return result


def averagingProjector(
	matrices: Sequence[Sequence[Sequence[Scalar]]],
	ambient: Sequence[str],
	k: int,
) -> list[list[Fraction]]:
	"""Row ``i`` is the average of the pullbacks of the ``i``-th degree-k monomial."""
	ambient = tuple(ambient)
	count = len(matrices)
	rows: list[list[Fraction]] = []
	for mask in basisMasks(len(ambient), k):
		source = Form(ambient, {mask: 1})
		total = Form(ambient)
		for linear in matrices:
			total = total + pullback(linear, source)
		rows.append([x / count for x in total.vector(k)])
	return rows


def invariantForms(
	matrices: Sequence[Sequence[Sequence[Scalar]]],
	ambient: Sequence[str],
	k: int,
) -> list[Form]:
	"""Basis of the degree-k forms fixed by every matrix, in reduced echelon order.

	The matrices must form a group, so the image of the averaging projector
	is exactly the fixed subspace.
	"""
	if not matrices:
		raise ValueError("need at least the identity to average over")
	projector = averagingProjector(matrices, ambient, k)
	basis, _ = rowReduce(projector, len(projector))
	return [Form.fromVector(ambient, k, row) for row in basis]
