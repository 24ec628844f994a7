"""Flat tori, affine isometries and finite group closure.

Points and translations are kept in ambient coordinates; the lattice basis
``B`` converts to lattice coordinates ``u = B⁻¹·x`` in which the lattice is
``Zⁿ``. Translations are always reduced into the half-open cube ``[0, 1)ⁿ``
of lattice coordinates so that equal isometries compare equal.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import floor

from ._errors import GroupClosureError
from ._exactLinalg import (
	RationalMatrix,
	Scalar,
	determinant,
	formatRational,
	identity,
	inverse,
	isInteger,
	matMul,
	matVec,
	toIntegerMatrix,
	transpose,
)
from ._exteriorAlgebra import Form, pullback
from .logHandler import log

DEFAULT_GROUP_BOUND = 100000


def _freeze(m: Sequence[Sequence[Scalar]]) -> tuple[tuple[Fraction, ...], ...]:
	return tuple(tuple(Fraction(x) for x in row) for row in m)


@dataclass(frozen=True)
class TorusLattice:
	"""Lattice Λ spanned by the columns of ``basis``."""

	basis: tuple[tuple[Fraction, ...], ...]

	@classmethod
	def fromRows(cls, rows: Sequence[Sequence[Scalar]]) -> TorusLattice:
		lattice = cls(_freeze(rows))
		if determinant(lattice.basis) == 0:
			raise ValueError("lattice basis is singular")
		return lattice

	@property
	def dimension(self) -> int:
		return len(self.basis)

	@cached_property
	def inverseBasis(self) -> RationalMatrix:
		return inverse(self.basis)

	@cached_property
	def covolume(self) -> Fraction:
		return abs(determinant(self.basis))

	def toLattice(self, x: Sequence[Scalar]) -> list[Fraction]:
		return matVec(self.inverseBasis, x)

	def fromLattice(self, u: Sequence[Scalar]) -> list[Fraction]:
		return matVec(self.basis, u)

	def linearToLattice(self, a: Sequence[Sequence[Scalar]]) -> RationalMatrix:
		"""``B⁻¹·A·B``"""
		return matMul(matMul(self.inverseBasis, a), self.basis)


def fractionalPart(x: Fraction) -> Fraction:
	return x - floor(x)


def reducePoint(lattice: TorusLattice, x: Sequence[Scalar]) -> tuple[Fraction, ...]:
	"""Representative of ``x`` mod Λ inside the fundamental cube."""
	return tuple(lattice.fromLattice([fractionalPart(c) for c in lattice.toLattice(x)]))


@dataclass(frozen=True)
class AffineIsometry:
	"""``x ↦ A·x + b`` with ``b`` reduced mod Λ; ``word`` is only a label."""

	linear: tuple[tuple[Fraction, ...], ...]
	translation: tuple[Fraction, ...]
	word: str = field(default="id", compare=False)

	@classmethod
	def create(
		cls,
		lattice: TorusLattice,
		linear: Sequence[Sequence[Scalar]],
		translation: Sequence[Scalar],
		word: str = "id",
	) -> AffineIsometry:
		n = lattice.dimension
		if len(linear) != n or any(len(row) != n for row in linear) or len(translation) != n:
			raise ValueError(f"isometry {word!r} does not act on a {n}-torus")
		return cls(_freeze(linear), reducePoint(lattice, translation), word)

	@property
	def dimension(self) -> int:
		return len(self.translation)

	def isIdentity(self) -> bool:
		return self.linear == _freeze(identity(self.dimension)) and not any(self.translation)

	def key(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
		"""Serialized form used to order elements deterministically."""
		return (
			tuple(formatRational(x) for row in self.linear for x in row),
			tuple(formatRational(x) for x in self.translation),
		)


def identityIsometry(lattice: TorusLattice) -> AffineIsometry:
	n = lattice.dimension
	return AffineIsometry.create(lattice, identity(n), [0] * n)


def _composeWords(g: str, h: str) -> str:
	if g == "id":
		return h
	if h == "id":
		return g
	return f"{g}*{h}"


def compose(lattice: TorusLattice, g: AffineIsometry, h: AffineIsometry) -> AffineIsometry:
	"""``g∘h``: ``(A_g·A_h, A_g·b_h + b_g)`` reduced mod Λ."""
	if g.dimension != h.dimension:
		raise ValueError("isometries act on tori of different dimension")
	linear = matMul(g.linear, h.linear)
	translation = [x + y for x, y in zip(matVec(g.linear, h.translation), g.translation, strict=True)]
	return AffineIsometry.create(lattice, linear, translation, _composeWords(g.word, h.word))


def inverseIsometry(lattice: TorusLattice, g: AffineIsometry) -> AffineIsometry:
	linearInverse = inverse(g.linear)
	translation = [-x for x in matVec(linearInverse, g.translation)]
	word = "id" if g.word == "id" else f"({g.word})^-1"
	return AffineIsometry.create(lattice, linearInverse, translation, word)


def applyToPoint(g: AffineIsometry, x: Sequence[Scalar]) -> list[Fraction]:
	"""``A·x + b`` without reduction."""
	return [y + b for y, b in zip(matVec(g.linear, x), g.translation, strict=True)]


@lru_cache(maxsize=4096)
def latticeLinear(lattice: TorusLattice, g: AffineIsometry) -> tuple[tuple[int, ...], ...]:
	"""Linear part in lattice coordinates; integral for lattice-preserving maps."""
	return tuple(tuple(row) for row in toIntegerMatrix(lattice.linearToLattice(g.linear)))


@dataclass(frozen=True)
class ValidationVerdict:
	violations: tuple[str, ...]

	@property
	def ok(self) -> bool:
		return not self.violations


def validate(lattice: TorusLattice, g: AffineIsometry, phi: Form | None = None) -> ValidationVerdict:
	"""Check ``AᵀA = I``, ``A·Λ = Λ`` and, when ``phi`` is given, ``A*φ = φ``."""
	violations: list[str] = []
	n = lattice.dimension
	if matMul(transpose(g.linear), g.linear) != [[Fraction(x) for x in row] for row in identity(n)]:
		violations.append("orthogonality: AᵀA ≠ I")
	inLattice = lattice.linearToLattice(g.linear)
	if not all(isInteger(x) for row in inLattice for x in row):
		violations.append("lattice: A·Λ ⊄ Λ")
	elif abs(determinant(inLattice)) != 1:
		violations.append("lattice: A·Λ ≠ Λ")
	if phi is not None:
		if phi.dimension != n:
			violations.append("phi: form lives on a different number of coordinates")
		elif pullback(g.linear, phi) != phi:
			violations.append("phi: A*φ ≠ φ")
	return ValidationVerdict(tuple(violations))


@dataclass(frozen=True)
class IsometryGroup:
	lattice: TorusLattice
	elements: tuple[AffineIsometry, ...]
	generatorLabels: tuple[str, ...]

	@property
	def order(self) -> int:
		return len(self.elements)

	def __iter__(self) -> Iterator[AffineIsometry]:
		return iter(self.elements)

	def __contains__(self, g: object) -> bool:
		return g in self._index

	@cached_property
	def _index(self) -> dict[AffineIsometry, int]:
		return {g: i for i, g in enumerate(self.elements)}

	def indexOf(self, g: AffineIsometry) -> int:
		return self._index[g]

	@property
	def identity(self) -> AffineIsometry:
		return self.elements[0]

	def distinctLinearParts(self) -> list[tuple[tuple[Fraction, ...], ...]]:
		"""The image group acting on constant forms, in element order."""
		seen: dict[tuple[tuple[Fraction, ...], ...], None] = {}
		for g in self.elements:
			seen.setdefault(g.linear, None)
		return list(seen)


def closure(
	lattice: TorusLattice,
	generators: Sequence[AffineIsometry],
	bound: int = DEFAULT_GROUP_BOUND,
) -> IsometryGroup:
	"""Breadth-first closure under composition with the generators.

	Elements are ordered by generation layer; inside a layer by serialized
	form. The identity always comes first.
	"""
	start = identityIsometry(lattice)
	elements = [start]
	known = {start}
	frontier = [start]
	while frontier:
		fresh: dict[AffineIsometry, AffineIsometry] = {}
		for element in frontier:
			for generator in generators:
				product = compose(lattice, generator, element)
				if product not in known and product not in fresh:
					fresh[product] = product
		layer = sorted(fresh.values(), key=AffineIsometry.key)
		if len(elements) + len(layer) > bound:
			raise GroupClosureError(f"group exceeds bound {bound}", stage="closure")
		elements.extend(layer)
		known.update(layer)
		frontier = layer
		log.debug(f"g2kit closure: layer of {len(layer)} elements, {len(elements)} total")
	labels = tuple(g.word for g in generators)
	log.info(f"g2kit closure: group of order {len(elements)} from generators {', '.join(labels)}")
	return IsometryGroup(lattice, tuple(elements), labels)
