"""Invariant cohomology of the orbifold and of its strata.

A flat torus quotient has its cohomology represented by constant forms
fixed by the linear parts of the group; translations play no role. All
bases are reduced echelon against the lexicographic monomial order.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ._errors import DegeneratePairingError
from ._exactLinalg import RationalMatrix, rank, solve
from ._exteriorAlgebra import (
	Form,
	defaultCoordinates,
	invariantForms,
	parametrizationCoordinates,
	restrict,
	wedge,
)
from ._flatOrbifold import IsometryGroup
from ._integration import integrateOnStratumCoordinates, integrateOrbifold
from ._singularLocus import Stratum, inducedAction
from .logHandler import log


@dataclass(frozen=True)
class CohomologySpace:
	degree: int
	basis: tuple[Form, ...]

	@property
	def dimension(self) -> int:
		return len(self.basis)

	def coordinates(self, form: Form) -> list[Fraction]:
		"""Coefficients of ``form`` in the basis; raises ``ValueError`` outside the span."""
		if form.isZero():
			return [Fraction(0)] * self.dimension
		if form.degree != self.degree:
			raise ValueError(f"expected a degree-{self.degree} form, got degree {form.degree}")
		# reduced echelon basis: each vector's leading monomial is its pivot
		pivots = [next(iter(b.terms)) for b in self.basis]
		coefficients = [form.terms.get(mask, Fraction(0)) for mask in pivots]
		rebuilt = Form(form.ambient)
		for value, b in zip(coefficients, self.basis, strict=True):
			rebuilt = rebuilt + b * value
		if rebuilt != form:
			raise ValueError(f"form {form!r} is not in the invariant subspace of degree {self.degree}")
		return coefficients

	def combine(self, coefficients: Sequence[Fraction], ambient: Sequence[str]) -> Form:
		result = Form(ambient)
		for value, b in zip(coefficients, self.basis, strict=True):
			result = result + b * value
		return result


@lru_cache(maxsize=256)
def invariantBasis(
	group: IsometryGroup,
	k: int,
	coordinates: tuple[str, ...] | None = None,
) -> CohomologySpace:
	"""Degree-k forms fixed by every linear part of the group."""
	ambient = coordinates or defaultCoordinates(group.lattice.dimension)
	basis = invariantForms(group.distinctLinearParts(), ambient, k)
	log.debug(f"g2kit cohomology: degree {k} has {len(basis)} invariant forms")
	return CohomologySpace(k, tuple(basis))


def betti(group: IsometryGroup, coordinates: tuple[str, ...] | None = None) -> list[int]:
	n = group.lattice.dimension
	return [invariantBasis(group, k, coordinates).dimension for k in range(n + 1)]


def pairingMatrix(group: IsometryGroup, k: int, coordinates: tuple[str, ...] | None = None) -> RationalMatrix:
	"""``∫_X α_i∧β_j`` for the invariant bases of degrees ``k`` and ``n-k``."""
	n = group.lattice.dimension
	left = invariantBasis(group, k, coordinates).basis
	right = invariantBasis(group, n - k, coordinates).basis
	return [[integrateOrbifold(wedge(a, b), group) for b in right] for a in left]


def poincareDual(
	stratum: Stratum,
	w: Form,
	group: IsometryGroup,
	coordinates: tuple[str, ...] | None = None,
) -> Form:
	"""The invariant class P with ``∫_X P∧ξ = ∫_S w∧ξ|_S`` for every invariant ξ.

	``w`` lives on the stratum's parametrization coordinates; ``w = 1``
	gives the Poincaré dual of the stratum itself.
	"""
	n = group.lattice.dimension
	k = stratum.dimension
	if w.ambient != parametrizationCoordinates(k):
		raise ValueError(f"weight must live on {parametrizationCoordinates(k)}, got {w.ambient}")
	ambient = coordinates or defaultCoordinates(n)
	if w.isZero():
		return Form(ambient)
	weightDegree = w.degree
	if weightDegree is None or weightDegree > k:
		raise ValueError(f"weight on {stratum.label} must be homogeneous of degree at most {k}")
	target = n - k + weightDegree
	complement = n - target
	classes = invariantBasis(group, target, coordinates).basis
	tests = invariantBasis(group, complement, coordinates).basis
	if len(classes) != len(tests):
		raise DegeneratePairingError(
			f"degenerate pairing: b{target} = {len(classes)} but b{complement} = {len(tests)}",
			stage="pd",
		)
	matrix = [[integrateOrbifold(wedge(p, xi), group) for p in classes] for xi in tests]
	if rank(matrix) < len(classes):
		raise DegeneratePairingError(f"degenerate pairing in degree {target}", stage="pd")
	rhs = [
		integrateOnStratumCoordinates(wedge(w, restrict(xi, stratum.parametrization)), stratum)
		for xi in tests
	]
	solution = solve(matrix, rhs, cols=len(classes))
	if solution is None:
		raise DegeneratePairingError(
			f"no invariant class is dual to {stratum.label} against {w!r}",
			stage="pd",
		)
	coefficients, _ = solution
	result = Form(ambient)
	for value, p in zip(coefficients, classes, strict=True):
		result = result + p * value
	return result


def stratumCohomology(stratum: Stratum, group: IsometryGroup) -> list[CohomologySpace]:
	"""Invariant forms on the parametrization torus, degrees ``0..dim S``.

	Every set-wise stabilizer element acts through ``A·P = P·M``; the
	point-wise stabilizer acts trivially, so on a double cover this is the
	action of the deck involution.
	"""
	k = stratum.dimension
	coordinates = parametrizationCoordinates(k)
	induced = [inducedAction(group.elements[i], stratum.parametrization) for i in stratum.setwiseStabilizer]
	return [CohomologySpace(d, tuple(invariantForms(induced, coordinates, d))) for d in range(k + 1)]
