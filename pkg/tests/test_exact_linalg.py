"""Exact linear algebra: ranks, solves and the integer normal forms."""

from __future__ import annotations

from fractions import Fraction

import pytest
from sympy import ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_form

from g2kit._exactLinalg import (
	determinant,
	formatRational,
	hermiteNormalForm,
	identity,
	integerInverse,
	matMul,
	parseRational,
	rank,
	smithDiagonal,
	smithNormalForm,
	solve,
)

SAMPLES = [
	[[2, 4, 4], [-6, 6, 12], [10, -4, -16]],
	[[0, 2, 0, 1], [1, 0, -1, 0], [2, 2, -2, 1]],
	[[-2, 0, 0], [0, 0, 0], [0, 0, -2], [1, 1, 0]],
	[[6]],
	[[0, 0], [0, 0]],
]


def _is_unimodular(m: list[list[int]]) -> bool:
	return abs(determinant(m)) == 1


def _sympy_invariants(a: list[list[int]]) -> list[int]:
	snf = smith_normal_form(Matrix(a), domain=ZZ)
	return [abs(int(snf[i, i])) for i in range(min(snf.rows, snf.cols))]


def test_format_and_parse_rationals():
	assert formatRational(Fraction(3, 4)) == "3/4"
	assert formatRational(Fraction(-8, 2)) == "-4"
	assert parseRational("-3/4") == Fraction(-3, 4)
	assert parseRational(5) == 5


@pytest.mark.parametrize("bad", ["0.5", "1e3", True])
def test_parse_rational_rejects_inexact_input(bad):
	with pytest.raises(ValueError):
		parseRational(bad)


def test_rank_over_rationals():
	assert rank([[1, 2], [2, 4]]) == 1
	assert rank([[Fraction(1, 2), Fraction(1, 3)], [3, 2]]) == 1
	assert rank([[1, 0, 0], [0, 0, 1]]) == 2
	assert rank([]) == 0


def test_solve_returns_particular_solution_and_kernel():
	result = solve([[1, 1, 0], [0, 1, 1]], [2, 3])
	assert result is not None
	particular, kernel = result
	assert matMul([[1, 1, 0], [0, 1, 1]], [[x] for x in particular]) == [[2], [3]]
	assert len(kernel) == 1
	assert matMul([[1, 1, 0], [0, 1, 1]], [[x] for x in kernel[0]]) == [[0], [0]]


def test_solve_detects_inconsistent_system():
	assert solve([[1, 1], [2, 2]], [1, 3]) is None


@pytest.mark.parametrize("a", SAMPLES)
def test_smith_normal_form_recomposes(a):
	u, d, v = smithNormalForm(a)
	assert matMul(matMul(u, a), v) == d
	assert _is_unimodular(u) and _is_unimodular(v)
	for i, row in enumerate(d):
		for j, x in enumerate(row):
			if i != j:
				assert x == 0
	diagonal = smithDiagonal(d)
	assert all(x >= 0 for x in diagonal)
	for x, y in zip(diagonal, diagonal[1:]):
		if x:
			assert y % x == 0
		else:
			assert y == 0


@pytest.mark.parametrize("a", SAMPLES[:4])
def test_smith_invariants_match_sympy(a):
	_, d, _ = smithNormalForm(a)
	assert smithDiagonal(d) == _sympy_invariants(a)


def test_smith_normal_form_textbook_example():
	_, d, _ = smithNormalForm(SAMPLES[0])
	assert smithDiagonal(d) == [2, 6, 12]


def test_hermite_normal_form_shape():
	a = [[3, 1], [5, 2], [7, 4]]
	h, u = hermiteNormalForm(a)
	assert matMul(a, u) == h
	assert _is_unimodular(u)
	assert h[0][1] == 0
	assert h[0][0] > 0
	pivotRow = next(r for r in range(3) if h[r][1])
	assert h[pivotRow][1] > 0
	assert 0 <= h[pivotRow][0] < h[pivotRow][1]


def test_hermite_normal_form_depends_only_on_column_lattice():
	a = [[1, 0], [1, 1], [0, 2]]
	w = [[2, 1], [1, 1]]
	changed = [[int(x) for x in row] for row in matMul(a, w)]
	assert hermiteNormalForm(changed)[0] == hermiteNormalForm(a)[0]


@pytest.mark.parametrize("a", SAMPLES)
def test_hermite_normal_form_is_idempotent(a):
	h, _ = hermiteNormalForm(a)
	again, _ = hermiteNormalForm(h)
	assert again == h


def test_integer_inverse_of_unimodular_matrix():
	m = [[2, 1, 0], [1, 1, 0], [0, 0, -1]]
	assert matMul(m, integerInverse(m)) == identity(3)


def test_integer_inverse_rejects_non_unimodular_matrix():
	with pytest.raises(ValueError):
		integerInverse([[2, 0], [0, 1]])
