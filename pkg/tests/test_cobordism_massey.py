"""Cobordism boundaries, signed crossings and the triple Massey product."""

from __future__ import annotations

from fractions import Fraction

import pytest

from g2kit import _singularLocus
from g2kit._cobordismMassey import (
	VERDICT_IN_IDEAL,
	VERDICT_NON_FORMAL,
	VERDICT_VANISHES,
	CobordismDatum,
	Crossing,
	Knot,
	_crossingParameters,
	boundary,
	checkDatum,
	crossingCoefficients,
	intersections,
	masseyValue,
	tripleMassey,
)
from g2kit._errors import CobordismError, MasseyNotWellDefined, ModelError
from g2kit._exactLinalg import rank
from g2kit._exteriorAlgebra import monomial, parametrizationCoordinates
from g2kit._resolutionAlgebra import ModelClass
from g2kit._singularLocus import AffineSubtorus, Stratum
from tests._pipelines import pipeline

PIPELINE = pipeline()
GROUP = PIPELINE.group
LATTICE = GROUP.lattice
STRATA = PIPELINE.strata
MODEL = PIPELINE.model
PHI = PIPELINE.config.phi
DATUM = PIPELINE.config.cobordism
assert DATUM is not None

U = parametrizationCoordinates(3)
ZERO = (Fraction(0),) * 7


def _x(label: str) -> ModelClass:
	return MODEL.thomSymbol(label)


def _volume_class(label: str, coefficient: int) -> ModelClass:
	return MODEL.fromFiberedForm(label, monomial(U, ["u1", "u2", "u3"], coefficient))


def _drift(y3: Fraction | int = 0, x1: Fraction | int = 0, t: Fraction | int = 0) -> tuple[Fraction, ...]:
	return (Fraction(t), Fraction(x1), Fraction(0), Fraction(0), Fraction(0), Fraction(0), Fraction(y3))


A = _x("N1") + _x("N2")
B = _x("N7") + _x("N3")
C = _x("N7") - _x("N3")
EXPECTED_VALUE = _volume_class("N1", -8) + _volume_class("N2", 8)


def test_boundary_runs_from_n3_to_n7():
	slices = boundary(DATUM, GROUP, STRATA, PHI)
	assert [(s.label, s.sign) for s in slices] == [("N3", 1), ("N7", -1)]


def test_reversed_cobordism_flips_boundary():
	slices = boundary(DATUM.reversed(), GROUP, STRATA, PHI)
	assert [(s.label, s.sign) for s in slices] == [("N7", 1), ("N3", -1)]


def test_crossings_hit_only_the_calibrated_pair():
	crossings = intersections(DATUM, GROUP, STRATA, PHI)
	assert crossings
	assert {c.label for c in crossings} == {"N1", "N2"}
	assert all(c.t == 1 for c in crossings)
	totals = {label: sum(c.sign for c in crossings if c.label == label) for label in ("N1", "N2")}
	assert totals == {"N1": -2, "N2": 2}


def test_crossing_coefficients():
	slices = boundary(DATUM, GROUP, STRATA, PHI)
	crossings = intersections(DATUM, GROUP, STRATA, PHI)
	assert crossingCoefficients(MODEL, slices, crossings) == {"N1": -1, "N2": 1}


def test_massey_value_of_the_preset_cobordism():
	assert masseyValue(DATUM, MODEL, PHI) == EXPECTED_VALUE


def test_reversing_the_cobordism_negates_the_value():
	assert masseyValue(DATUM.reversed(), MODEL, PHI) == -EXPECTED_VALUE


def test_massey_product_is_not_in_the_ideal():
	verdict = tripleMassey(MODEL, A, B, C, EXPECTED_VALUE)
	assert verdict.degree == 5
	assert verdict.wellDefined
	assert not verdict.member
	assert verdict.augmentedRank == verdict.idealRank + 1
	assert verdict.verdictText == VERDICT_NON_FORMAL


def test_calibration_class_lies_in_the_ideal():
	inside = _volume_class("N1", 2) + _volume_class("N2", 2)
	verdict = tripleMassey(MODEL, A, B, C, inside)
	assert verdict.member
	assert verdict.verdictText == VERDICT_IN_IDEAL


def test_h3_times_a_is_one_dimensional():
	products = [MODEL.vector(MODEL.product(MODEL.fromBaseForm(xi), A), 5) for xi in MODEL.baseSpaces[3].basis]
	assert rank(products) == 1
	calibrationClass = _volume_class("N1", 2) + _volume_class("N2", 2)
	assert rank([*products, MODEL.vector(calibrationClass, 5)]) == 1


def test_membership_ignores_rescaling_and_ideal_generators():
	base = tripleMassey(MODEL, A, B, C, EXPECTED_VALUE)
	scaled = tripleMassey(MODEL, A * 2, B, C * Fraction(-3), EXPECTED_VALUE * Fraction(5, 3))
	assert not scaled.member
	assert scaled.idealRank == base.idealRank
	assert scaled.augmentedRank == base.augmentedRank
	inside = (_volume_class("N1", 2) + _volume_class("N2", 2)) * Fraction(-7, 2)
	assert tripleMassey(MODEL, A * Fraction(1, 3), B, C * 5, inside).member


def test_crossing_signs_do_not_depend_on_the_generic_primes(monkeypatch):
	monkeypatch.setattr(_singularLocus, "PRIMARY_PRIMES", _singularLocus.CHECK_PRIMES)
	monkeypatch.setattr(_singularLocus, "CHECK_PRIMES", (1093, 1097, 1103, 1109, 1117, 1123, 1129))
	rebuilt = _singularLocus.strata(GROUP, PHI, PIPELINE.config.anchors)

	def signs(strata: list[Stratum]) -> list[tuple[str, AffineSubtorus, tuple[Fraction, ...], int]]:
		return [(c.label, c.torus, c.point, c.sign) for c in intersections(DATUM, GROUP, strata, PHI)]

	assert signs(rebuilt) == signs(STRATA)


def test_sigma_is_the_count_on_a_single_torus():
	# N1 swept from t = 0 to t = 1 while drifting in x3 ends on an N2 torus
	n1 = next(s for s in STRATA if s.label == "N1")
	drift = (0, 0, 0, 0, 0, Fraction(3, 4), 0)
	knots = (Knot(Fraction(0), ZERO), Knot(Fraction(1), tuple(Fraction(x) for x in drift)))
	datum = CobordismDatum(n1.representative, knots)
	slices = boundary(datum, GROUP, STRATA, PHI)
	assert [(s.label, s.sign) for s in slices] == [("N1", 1), ("N2", -1)]
	crossings = intersections(datum, GROUP, STRATA, PHI)
	sigma = crossingCoefficients(MODEL, slices, crossings)
	assert sigma
	assert set(sigma) == {c.label for c in crossings}
	assert set(sigma) <= {f"N{i}" for i in range(3, 11)}
	assert all(abs(v) == 1 for v in sigma.values())
	for label, value in sigma.items():
		perTorus: dict[AffineSubtorus, int] = {}
		for c in crossings:
			if c.label == label:
				perTorus[c.torus] = perTorus.get(c.torus, 0) + c.sign
		assert set(perTorus.values()) == {value}


def test_disagreeing_tori_of_one_orbit_are_rejected():
	slices = boundary(DATUM, GROUP, STRATA, PHI)
	n3 = next(s for s in STRATA if s.label == "N3")
	point = (Fraction(0),) * 7
	crossings = [
		Crossing("N3", n3.orbit[0], 0, Fraction(1, 2), Fraction(1), point, 1),
		Crossing("N3", n3.orbit[1], 0, Fraction(1, 2), Fraction(1), point, -1),
	]
	with pytest.raises(CobordismError):
		crossingCoefficients(MODEL, slices, crossings)


def test_zero_drift_cobordism_gives_vanishing_value():
	verdict, inputs = pipeline("paper-zero-drift").massey or (None, None)
	assert verdict is not None and inputs is not None
	assert verdict.value.isZero()
	assert verdict.member
	assert verdict.verdictText == VERDICT_VANISHES
	assert inputs["sigma"] == {}


def test_degenerate_datum_has_no_boundary_or_crossings():
	datum = CobordismDatum.fromEndpoints(DATUM.base, Fraction(1, 2), Fraction(1, 2), ZERO, ZERO)
	assert datum.isDegenerate()
	assert boundary(datum, GROUP, STRATA, PHI) == []
	assert intersections(datum, GROUP, STRATA, PHI) == []


def test_not_well_defined_triple_reports_witnesses():
	with pytest.raises(MasseyNotWellDefined) as info:
		tripleMassey(MODEL, _x("N1"), _x("N1"), _x("N3"), ModelClass())
	assert set(info.value.witnesses) == {"ab", "bc"}
	assert info.value.witnesses["ab"]["base"]
	assert info.value.witnesses["bc"] == {"base": {}, "fibered": {}}


def test_value_of_wrong_degree_is_rejected():
	with pytest.raises(ModelError):
		tripleMassey(MODEL, A, B, C, _x("N1"))


def test_non_monotone_knots_are_rejected():
	knots = (Knot(Fraction(1, 2), ZERO), Knot(Fraction(1), ZERO), Knot(Fraction(3, 4), ZERO))
	with pytest.raises(CobordismError):
		checkDatum(LATTICE, CobordismDatum(DATUM.base, knots))


def test_drift_along_the_torus_is_rejected():
	knots = (Knot(Fraction(1, 2), ZERO), Knot(Fraction(3, 2), _drift(x1=Fraction(1, 4))))
	with pytest.raises(CobordismError):
		checkDatum(LATTICE, CobordismDatum(DATUM.base, knots))


def test_drift_in_t_is_rejected():
	knots = (Knot(Fraction(1, 2), ZERO), Knot(Fraction(3, 2), _drift(t=1)))
	with pytest.raises(CobordismError):
		checkDatum(LATTICE, CobordismDatum(DATUM.base, knots))


def test_end_slice_off_the_singular_locus_is_rejected():
	datum = CobordismDatum.fromEndpoints(DATUM.base, Fraction(1, 2), Fraction(3, 4), ZERO, ZERO)
	with pytest.raises(CobordismError):
		boundary(datum, GROUP, STRATA, PHI)


def test_crossing_parameters():
	assert _crossingParameters([Fraction(1, 2)], [Fraction(1)]) == [Fraction(1, 2)]
	assert _crossingParameters([Fraction(0)], [Fraction(2)]) == [0, Fraction(1, 2), 1]
	assert _crossingParameters([Fraction(1)], [Fraction(0)]) is None
	assert _crossingParameters([Fraction(1, 3)], [Fraction(0)]) == []
