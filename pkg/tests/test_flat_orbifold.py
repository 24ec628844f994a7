"""Torus lattices, affine isometries and group closure."""

from __future__ import annotations

from fractions import Fraction

import pytest

from g2kit._errors import GroupClosureError
from g2kit._exteriorAlgebra import standardG2Form
from g2kit._flatOrbifold import (
	AffineIsometry,
	TorusLattice,
	closure,
	compose,
	identityIsometry,
	inverseIsometry,
	reducePoint,
	validate,
)
from tests._pipelines import pipeline

GROUP = pipeline().group
LATTICE = GROUP.lattice
GENERATORS = {g.word: g for g in pipeline().config.generators}


def _power(g: AffineIsometry, k: int) -> AffineIsometry:
	result = identityIsometry(LATTICE)
	for _ in range(k):
		result = compose(LATTICE, g, result)
	return result


def test_lattice_covolume_and_reduction():
	assert LATTICE.covolume == 4
	assert reducePoint(LATTICE, [5, Fraction(3, 2), -1, 0, 0, 0, Fraction(-1, 4)]) == (
		1,
		Fraction(1, 2),
		0,
		0,
		0,
		0,
		Fraction(3, 4),
	)


def test_preset_group_has_order_32():
	assert GROUP.order == 32
	assert GROUP.identity.isIdentity()
	assert GROUP.generatorLabels == ("F", "kappa", "iota1", "iota2")


def test_every_element_preserves_phi_and_the_lattice():
	phi = standardG2Form()
	for g in GROUP:
		assert validate(LATTICE, g, phi).ok, g.word


def test_group_is_closed_with_inverses():
	for g in GROUP:
		assert inverseIsometry(LATTICE, g) in GROUP
		for h in GENERATORS.values():
			assert compose(LATTICE, g, h) in GROUP


def test_generator_orders():
	assert not _power(GENERATORS["F"], 2).isIdentity()
	assert _power(GENERATORS["F"], 4).isIdentity()
	assert _power(GENERATORS["kappa"], 2).isIdentity()
	assert _power(GENERATORS["iota1"], 2).isIdentity()


def test_composition_reduces_translation_mod_lattice():
	f = GENERATORS["F"]
	square = compose(LATTICE, f, f)
	assert square.translation[0] == 2
	assert all(0 <= x < 1 for x in square.translation[1:])


def test_inverse_composes_to_identity():
	for g in GROUP:
		assert compose(LATTICE, g, inverseIsometry(LATTICE, g)).isIdentity()


def test_iota_product_is_a_pure_translation():
	product = compose(LATTICE, GENERATORS["iota1"], GENERATORS["iota2"])
	assert product.linear == identityIsometry(LATTICE).linear
	assert product.translation == (0, 0, 0, 0, 0, Fraction(1, 2), Fraction(1, 2))


def test_kappa_conjugates_f_to_its_inverse():
	f, kappa = GENERATORS["F"], GENERATORS["kappa"]
	assert compose(LATTICE, kappa, f) == compose(LATTICE, inverseIsometry(LATTICE, f), kappa)


def test_closure_order_is_deterministic():
	again = closure(LATTICE, pipeline().config.generators)
	assert again.elements == GROUP.elements
	assert [g.word for g in again.elements] == [g.word for g in GROUP.elements]


def test_closure_respects_bound():
	with pytest.raises(GroupClosureError):
		closure(LATTICE, pipeline().config.generators, bound=10)


def test_validate_reports_each_violation():
	lattice = TorusLattice.fromRows([[1, 0], [0, 1]])
	shear = AffineIsometry.create(lattice, [[1, 1], [0, 1]], [0, 0], "shear")
	assert validate(lattice, shear).violations == ("orthogonality: AᵀA ≠ I",)
	rotation = AffineIsometry.create(lattice, [[0, -1], [1, 0]], [0, 0], "r")
	assert validate(lattice, rotation).ok
	rectangle = TorusLattice.fromRows([[2, 0], [0, 1]])
	swap = AffineIsometry.create(rectangle, [[0, 1], [1, 0]], [0, 0], "swap")
	assert validate(rectangle, swap).violations == ("lattice: A·Λ ⊄ Λ",)


def test_validate_reports_phi_violation():
	flip = [[-1 if i == j == 0 else int(i == j) for j in range(7)] for i in range(7)]
	g = AffineIsometry.create(LATTICE, flip, [0] * 7, "flip")
	assert validate(LATTICE, g, standardG2Form()).violations == ("phi: A*φ ≠ φ",)


def test_trivial_generating_set_gives_trivial_group():
	assert closure(LATTICE, []).order == 1
