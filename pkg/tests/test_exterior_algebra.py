"""Constant-coefficient forms: signs, pullbacks, restriction and the G2 form."""

from __future__ import annotations

from fractions import Fraction

import pytest

from g2kit._exactLinalg import determinant, matMul
from g2kit._exteriorAlgebra import (
	STANDARD_COORDINATES,
	Form,
	defaultCoordinates,
	formFromJson,
	formToJson,
	imTheta,
	invariantForms,
	maskFromIndices,
	monomial,
	omega,
	pullback,
	reTheta,
	restrict,
	standardG2Form,
	volumeForm,
	wedge,
	wedgeSign,
)

C = STANDARD_COORDINATES
ROTATION = [
	[1, 0, 0, 0, 0, 0, 0],
	[0, 0, -1, 0, 0, 0, 0],
	[0, 1, 0, 0, 0, 0, 0],
	[0, 0, 0, 0, -1, 0, 0],
	[0, 0, 0, 1, 0, 0, 0],
	[0, 0, 0, 0, 0, -1, 0],
	[0, 0, 0, 0, 0, 0, -1],
]
SHEAR = [[1 if i == j else 0 for j in range(7)] for i in range(7)]
SHEAR[1][3] = 2


def _one(name: str) -> Form:
	return monomial(C, [name])


def test_wedge_sign_of_sorted_and_swapped_monomials():
	assert wedgeSign(maskFromIndices([0]), maskFromIndices([1])) == 1
	assert wedgeSign(maskFromIndices([1]), maskFromIndices([0])) == -1
	assert wedgeSign(maskFromIndices([0, 2]), maskFromIndices([1])) == -1
	assert wedgeSign(maskFromIndices([0, 1]), maskFromIndices([1, 2])) == 0


def test_monomial_sorts_names_with_sign():
	assert monomial(C, ["y1", "x1"]) == -monomial(C, ["x1", "y1"])
	assert monomial(C, ["x3", "t", "y1"]) == monomial(C, ["t", "y1", "x3"])
	assert monomial(C, ["x1", "x1"]).isZero()


def test_graded_commutativity():
	a = _one("x1") + _one("y2") * 3
	b = monomial(C, ["t", "x2"]) + monomial(C, ["y1", "y3"], Fraction(1, 2))
	assert wedge(a, a).isZero()
	assert wedge(a, _one("x2")) == -wedge(_one("x2"), a)
	assert wedge(a, b) == wedge(b, a)


def test_omega_cubed_is_six_times_the_volume_of_c3():
	cube = wedge(wedge(omega(), omega()), omega())
	assert cube == monomial(C, ["x1", "y1", "x2", "y2", "x3", "y3"], 6)


def test_omega_is_primitive_against_the_holomorphic_volume_form():
	assert wedge(omega(), reTheta()).isZero()
	assert wedge(omega(), imTheta()).isZero()
	assert imTheta().coefficient(["y1", "y2", "y3"]) == -1


def test_standard_form_has_seven_terms():
	phi = standardG2Form()
	assert phi.degree == 3
	assert len(phi.terms) == 7
	assert phi.coefficient(["t", "x1", "y1"]) == 1
	assert phi.coefficient(["y1", "y2", "x3"]) == -1


def test_pullback_composes_contravariantly():
	phi = standardG2Form()
	composed = pullback(matMul(ROTATION, SHEAR), phi)
	assert composed == pullback(SHEAR, pullback(ROTATION, phi))


def test_wedge_is_associative():
	triples = [
		(_one("t"), omega(), _one("y3")),
		(standardG2Form(), _one("x1") + _one("y2") * 3, _one("t")),
		(omega(), reTheta(), _one("t")),
	]
	for a, b, c in triples:
		assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


def test_pullback_is_multiplicative():
	phi = standardG2Form()
	for linear in (ROTATION, SHEAR, matMul(ROTATION, SHEAR)):
		expected = wedge(pullback(linear, phi), pullback(linear, omega()))
		assert pullback(linear, wedge(phi, omega())) == expected


def test_top_forms_scale_by_the_determinant():
	scaled = [row[:] for row in SHEAR]
	scaled[0][0] = 3
	scaled[6][6] = -2
	assert determinant(scaled) == -6
	assert pullback(scaled, volumeForm()) == volumeForm() * -6


def test_rotation_preserves_phi_and_shear_does_not():
	phi = standardG2Form()
	assert pullback(ROTATION, phi) == phi
	assert pullback(SHEAR, phi) != phi


def test_restrict_to_coordinate_subtorus():
	parametrization = [[0, 0, 0], [1, 0, 0], [0, 0, 0], [0, 1, 0], [0, 0, 0], [0, 0, 1], [0, 0, 0]]
	restricted = restrict(standardG2Form(), parametrization)
	assert restricted.ambient == ("u1", "u2", "u3")
	assert restricted.topCoefficient() == 1


def test_restrict_picks_up_lengths_of_the_embedding():
	parametrization = [[4], [0], [0], [0], [0], [0], [0]]
	assert restrict(_one("t"), parametrization).topCoefficient() == 4


def test_restrict_rejects_degree_above_dimension():
	with pytest.raises(ValueError):
		restrict(standardG2Form(), [[1, 0]] + [[0, 1]] * 6)


def test_invariant_forms_of_trivial_group_are_all_monomials():
	eye = [[int(i == j) for j in range(7)] for i in range(7)]
	assert len(invariantForms([eye], C, 1)) == 7
	assert len(invariantForms([eye], C, 3)) == 35


def test_invariant_two_forms_of_a_rotation():
	eye = [[int(i == j) for j in range(7)] for i in range(7)]
	group = [eye, ROTATION, matMul(ROTATION, ROTATION), matMul(ROTATION, matMul(ROTATION, ROTATION))]
	basis = invariantForms(group, C, 2)
	# four (1,1)-forms on C², plus dx3∧dy3
	assert len(basis) == 5
	for form in basis:
		assert pullback(ROTATION, form) == form


def test_form_json_round_trip():
	phi = standardG2Form()
	assert formFromJson(C, formToJson(phi)) == phi


def test_form_json_rejects_unknown_coordinate():
	with pytest.raises(ValueError):
		formFromJson(C, [[["t", "z9"], 1]])


def test_default_coordinates():
	assert defaultCoordinates(7) == C
	assert defaultCoordinates(3) == ("c1", "c2", "c3")
