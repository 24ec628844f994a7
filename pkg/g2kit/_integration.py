"""Integrals of constant-coefficient forms over subtori, strata and the orbifold.

A parametrization ``B·H`` maps the unit cube bijectively onto its subtorus,
so the integral of a top-degree form is just the coefficient of its
restriction.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

from ._errors import IntegrationError
from ._exactLinalg import Scalar
from ._exteriorAlgebra import Form, restrict
from ._flatOrbifold import IsometryGroup
from ._singularLocus import Stratum


def integrateSubtorus(a: Form, parametrization: Sequence[Sequence[Scalar]]) -> Fraction:
	"""∫ over the subtorus oriented by ``parametrization``."""
	k = len(parametrization[0]) if parametrization else 0
	if not a.isZero() and a.degree != k:
		raise IntegrationError(f"degree mismatch: degree-{a.degree} form on a {k}-dimensional subtorus")
	if a.isZero():
		return Fraction(0)
	return restrict(a, parametrization).topCoefficient()


def integrateStratum(a: Form, stratum: Stratum) -> Fraction:
	"""``(1/m)·∫`` over the representative; the representative covers the stratum m times."""
	return integrateSubtorus(a, stratum.parametrization) / stratum.multiplicity


def integrateOrbifold(a: Form, group: IsometryGroup) -> Fraction:
	n = group.lattice.dimension
	if not a.isZero() and a.degree != n:
		raise IntegrationError(f"degree mismatch: degree-{a.degree} form on a {n}-dimensional orbifold")
	return a.topCoefficient() * group.lattice.covolume / group.order


def integrateOnStratumCoordinates(w: Form, stratum: Stratum) -> Fraction:
	"""∫ of a form already written on the stratum's parametrization coordinates."""
	k = stratum.dimension
	if not w.isZero() and w.degree != k:
		raise IntegrationError(f"degree mismatch: degree-{w.degree} form on {stratum.label}")
	return w.topCoefficient() / stratum.multiplicity
