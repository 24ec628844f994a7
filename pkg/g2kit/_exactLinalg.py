"""Exact rational and integer linear algebra.

Matrices are plain row-major ``list[list[...]]`` values holding ``Fraction``
or ``int`` entries; nothing in the package ever touches floating point.
Rank uses fraction-free (Bareiss) elimination on integer-scaled rows,
row reduction and inverses go through sympy, and the Smith and Hermite
normal forms are computed here because their transforms must follow a
fixed, documented pivot order.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from math import lcm
from typing import TypeVar

import sympy

Scalar = int | Fraction
RationalMatrix = list[list[Fraction]]
IntegerMatrix = list[list[int]]

T = TypeVar("T")


def formatRational(value: Scalar) -> str:
	"""Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
	value = Fraction(value)
	if value.denominator == 1:
		return str(value.numerator)
	return f"{value.numerator}/{value.denominator}"


def parseRational(text: str | int) -> Fraction:
	if isinstance(text, bool):
		raise ValueError(f"not a rational: {text!r}")
	if isinstance(text, int):
		return Fraction(text)
	if not isinstance(text, str) or "." in text or "e" in text.lower():
		# decimal strings would silently smuggle in rounding
		raise ValueError(f"not an exact rational string: {text!r}")
	return Fraction(text.strip())


def identity(n: int) -> IntegerMatrix:
	return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence[T]], rows: int | None = None) -> list[list[T]]:
	"""Transpose; ``rows`` gives the row count of the result when ``m`` is empty."""
	if not m:
		return [[] for _ in range(rows or 0)]
	return [list(col) for col in zip(*m, strict=True)]


def matMul(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> list[list[Fraction]]:
	inner = len(b)
	cols = len(b[0]) if b else 0
	if a and len(a[0]) != inner:
		raise ValueError(f"cannot multiply {len(a)}x{len(a[0])} by {inner}x{cols}")
	return [[Fraction(sum(row[k] * b[k][j] for k in range(inner))) for j in range(cols)] for row in a]


def matVec(a: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> list[Fraction]:
	if a and len(a[0]) != len(v):
		raise ValueError(f"cannot apply {len(a)}x{len(a[0])} matrix to vector of length {len(v)}")
	return [Fraction(sum(x * y for x, y in zip(row, v, strict=True))) for row in a]


def isInteger(value: Scalar) -> bool:
	return Fraction(value).denominator == 1


def toIntegerMatrix(m: Sequence[Sequence[Scalar]]) -> IntegerMatrix:
	result: IntegerMatrix = []
	for row in m:
		if not all(isInteger(x) for x in row):
			raise ValueError("matrix has non-integer entries")
		result.append([int(Fraction(x)) for x in row])
	return result


def _toSympy(m: Sequence[Sequence[Scalar]], cols: int = 0) -> sympy.Matrix:
	if not m:
		return sympy.zeros(0, cols)
	return sympy.Matrix(
		[[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in m],
	)


def _fromSympy(value: object) -> Fraction:
	r = sympy.Rational(value)
	return Fraction(int(r.p), int(r.q))


def rank(m: Sequence[Sequence[Scalar]]) -> int:
	"""Rank over Q by fraction-free Gaussian elimination."""
	rows: list[list[int]] = []
	for row in m:
		scale = lcm(*(Fraction(x).denominator for x in row)) if row else 1
		rows.append([int(Fraction(x) * scale) for x in row])
	if not rows or not rows[0]:
		return 0
	nrows, ncols = len(rows), len(rows[0])
	r = 0
	prev = 1
	for c in range(ncols):
		pivot = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
		if pivot is None:
			continue
		rows[r], rows[pivot] = rows[pivot], rows[r]
		top = rows[r]
		for i in range(r + 1, nrows):
			lead = rows[i][c]
			rows[i] = [(top[c] * rows[i][j] - lead * top[j]) // prev for j in range(ncols)]
		prev = top[c]
		r += 1
		if r == nrows:
			break
	return r


def rowReduce(m: Sequence[Sequence[Scalar]], cols: int = 0) -> tuple[RationalMatrix, list[int]]:
	"""Nonzero rows of the reduced row echelon form, with their pivot columns."""
	if not m:
		return [], []
	reduced, pivots = _toSympy(m, cols).rref()
	basis = [[_fromSympy(reduced[i, j]) for j in range(reduced.cols)] for i in range(len(pivots))]
	return basis, list(pivots)


def solve(
	m: Sequence[Sequence[Scalar]],
	v: Sequence[Scalar],
	cols: int | None = None,
) -> tuple[list[Fraction], RationalMatrix] | None:
	"""Solve ``m·x = v``.

	Returns ``None`` when the system is inconsistent, otherwise a particular
	solution and a basis of the nullspace (one vector per free column).
	"""
	if len(v) != len(m):
		raise ValueError(f"right-hand side has length {len(v)}, matrix has {len(m)} rows")
	ncols = len(m[0]) if m else (cols or 0)
	if not m:
		kernel = [[Fraction(1 if i == j else 0) for j in range(ncols)] for i in range(ncols)]
		return [Fraction(0)] * ncols, kernel
	augmented = [[*row, value] for row, value in zip(m, v, strict=True)]
	reduced, pivots = rowReduce(augmented)
	if ncols in pivots:
		return None
	particular = [Fraction(0)] * ncols
	for i, p in enumerate(pivots):
		particular[p] = reduced[i][ncols]
	kernel: RationalMatrix = []
	for free in range(ncols):
		if free in pivots:
			continue
		vec = [Fraction(0)] * ncols
		vec[free] = Fraction(1)
		for i, p in enumerate(pivots):
			vec[p] = -reduced[i][free]
		kernel.append(vec)
	return particular, kernel


def determinant(m: Sequence[Sequence[Scalar]]) -> Fraction:
	if len(m) != (len(m[0]) if m else 0):
		raise ValueError("determinant of a non-square matrix")
	if not m:
		return Fraction(1)
	return _fromSympy(_toSympy(m).det(method="bareiss"))


def inverse(m: Sequence[Sequence[Scalar]]) -> RationalMatrix:
	if determinant(m) == 0:
		raise ValueError("matrix is singular")
	inv = _toSympy(m).inv()
	return [[_fromSympy(inv[i, j]) for j in range(inv.cols)] for i in range(inv.rows)]


def integerInverse(m: Sequence[Sequence[int]]) -> IntegerMatrix:
	"""Inverse of a unimodular integer matrix, checked to be integral."""
	if not m:
		return []
	return toIntegerMatrix(inverse(m))


# --- Smith and Hermite normal forms ---------------------------------------


def _swapRows(d: IntegerMatrix, u: IntegerMatrix, i: int, j: int) -> None:
	if i != j:
		d[i], d[j] = d[j], d[i]
		u[i], u[j] = u[j], u[i]


def _swapCols(d: IntegerMatrix, v: IntegerMatrix, i: int, j: int) -> None:
	if i == j:
		return
	for mat in (d, v):
		for row in mat:
			row[i], row[j] = row[j], row[i]


def _addRow(d: IntegerMatrix, u: IntegerMatrix, target: int, source: int, factor: int) -> None:
	for mat in (d, u):
		src = mat[source]
		mat[target] = [x + factor * y for x, y in zip(mat[target], src, strict=True)]


def _addCol(d: IntegerMatrix, v: IntegerMatrix, target: int, source: int, factor: int) -> None:
	for mat in (d, v):
		for row in mat:
			row[target] += factor * row[source]


def _smallestEntry(d: IntegerMatrix, t: int) -> tuple[int, int] | None:
	best: tuple[int, int, int] | None = None
	for i in range(t, len(d)):
		for j in range(t, len(d[i])):
			x = d[i][j]
			if x and (best is None or abs(x) < best[0]):
				best = (abs(x), i, j)
	return None if best is None else (best[1], best[2])


def smithNormalForm(
	a: Sequence[Sequence[int]],
	cols: int | None = None,
) -> tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
	"""Return ``(U, D, V)`` with ``D = U·A·V`` diagonal, ``d_i | d_{i+1}`` and ``d_i >= 0``.

	Pivot: the nonzero entry of smallest absolute value in the remaining
	block, ties broken by lowest (row, col).
	"""
	m = len(a)
	n = len(a[0]) if a else (cols or 0)
	d = [[int(x) for x in row] for row in a]
	u = identity(m)
	v = identity(n)
	for t in range(min(m, n)):
		exhausted = False
		while True:
			pivot = _smallestEntry(d, t)
			if pivot is None:
				exhausted = True
				break
			_swapRows(d, u, t, pivot[0])
			_swapCols(d, v, t, pivot[1])
			p = d[t][t]
			clean = True
			for i in range(t + 1, m):
				q = d[i][t] // p
				if q:
					_addRow(d, u, i, t, -q)
				if d[i][t]:
					clean = False
			for j in range(t + 1, n):
				q = d[t][j] // p
				if q:
					_addCol(d, v, j, t, -q)
				if d[t][j]:
					clean = False
			if not clean:
				continue
			offender = next(
				(i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p),
				None,
			)
			if offender is None:
				break
			_addRow(d, u, t, offender, 1)
		if exhausted:
			break
		if d[t][t] < 0:
			d[t] = [-x for x in d[t]]
			u[t] = [-x for x in u[t]]
	return u, d, v


def smithDiagonal(d: IntegerMatrix) -> list[int]:
	return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def hermiteNormalForm(
	a: Sequence[Sequence[int]],
	cols: int | None = None,
) -> tuple[IntegerMatrix, IntegerMatrix]:
	"""Column Hermite normal form: ``H = A·U`` with ``U`` unimodular.

	``H`` is lower echelon with strictly increasing pivot rows, positive
	pivots, entries left of a pivot reduced into ``[0, pivot)`` and zero
	columns last. It depends only on the column lattice of ``A``.
	"""
	m = len(a)
	n = len(a[0]) if a else (cols or 0)
	h = [[int(x) for x in row] for row in a]
	# column operations on H are row operations on its transpose
	ht = transpose(h, n)
	ut = identity(n)
	c = 0
	for r in range(m):
		if c == n:
			break
		while True:
			live = [j for j in range(c, n) if ht[j][r]]
			if not live:
				break
			j = min(live, key=lambda k: (abs(ht[k][r]), k))
			_swapRows(ht, ut, c, j)
			done = True
			for k in range(c + 1, n):
				q = ht[k][r] // ht[c][r]
				if q:
					_addRow(ht, ut, k, c, -q)
				if ht[k][r]:
					done = False
			if done:
				break
		if not ht[c][r]:
			continue
		if ht[c][r] < 0:
			ht[c] = [-x for x in ht[c]]
			ut[c] = [-x for x in ut[c]]
		for k in range(c):
			q = ht[k][r] // ht[c][r]
			if q:
				_addRow(ht, ut, k, c, -q)
		c += 1
	return transpose(ht, m), transpose(ut, n)


def fromColumns(cols: Sequence[Sequence[T]], rows: int) -> list[list[T]]:
	"""Assemble a ``rows × len(cols)`` matrix; works for zero columns."""
	return [[col[i] for col in cols] for i in range(rows)]
