"""Exact integer matrix kernels.

Everything over the integers and rationals uses Python's arbitrary precision
``int``; numpy only ever sees residues modulo a prime.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form as _sympy_hnf

from .utils import InvariantViolation, require_prime


@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(f'{len(self.entries)} entries for a {self.rows}x{self.cols} matrix')

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int = None) -> 'IntegerMatrix':
        rows = [list(row) for row in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != cols:
                raise ValueError('Ragged rows')
        return cls(len(rows), cols, tuple(int(x) for row in rows for x in row))

    @classmethod
    def from_rational_rows(cls, rows: Sequence[Sequence[Fraction]]) -> 'IntegerMatrix':
        """Scale every row by the lcm of its denominators; row space (hence rank) is unchanged."""
        scaled = []
        for row in rows:
            lcm = 1
            for x in row:
                d = Fraction(x).denominator
                lcm = lcm * d // gcd(lcm, d)
            scaled.append([int(Fraction(x) * lcm) for x in row])
        return cls.from_rows(scaled, len(rows[0]) if rows else 0)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'IntegerMatrix':
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> 'IntegerMatrix':
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def __getitem__(self, key: Tuple[int, int]) -> int:
        i, j = key
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> List[List[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> 'IntegerMatrix':
        return IntegerMatrix.from_rows([[self[i, j] for i in range(self.rows)] for j in range(self.cols)],
                                       self.rows)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __add__(self, other: 'IntegerMatrix') -> 'IntegerMatrix':
        self._check_shape(other)
        return IntegerMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: 'IntegerMatrix') -> 'IntegerMatrix':
        self._check_shape(other)
        return IntegerMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __matmul__(self, other: 'IntegerMatrix') -> 'IntegerMatrix':
        if self.cols != other.rows:
            raise ValueError(f'Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}')
        columns = [other.column(j) for j in range(other.cols)]
        return IntegerMatrix.from_rows([[sum(a * b for a, b in zip(self.row(i), column)) for column in columns]
                                        for i in range(self.rows)], other.cols)

    def column(self, j: int) -> Tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def scale(self, c: int) -> 'IntegerMatrix':
        return IntegerMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def _check_shape(self, other: 'IntegerMatrix'):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError('Shape mismatch')


def vstack(blocks: Sequence[IntegerMatrix], cols: int = None) -> IntegerMatrix:
    if cols is None:
        cols = blocks[0].cols if blocks else 0
    rows = [row for block in blocks for row in block.to_rows()]
    return IntegerMatrix.from_rows(rows, cols)


def hstack(blocks: Sequence[IntegerMatrix]) -> IntegerMatrix:
    n = blocks[0].rows
    return IntegerMatrix.from_rows([[x for block in blocks for x in block.row(i)] for i in range(n)],
                                   sum(block.cols for block in blocks))


@dataclass(frozen=True)
class SmithForm:
    diagonal: Tuple[int, ...]

    def __post_init__(self):
        for d in self.diagonal:
            if d <= 0:
                raise InvariantViolation(f'Smith form diagonal must hold positive entries, got {self.diagonal}')
        for a, b in zip(self.diagonal, self.diagonal[1:]):
            if b % a:
                raise InvariantViolation(f'Smith form divisibility chain broken: {a} does not divide {b}')

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.diagonal if d != 1)


def _min_nonzero(a: List[List[int]], t: int) -> Tuple[int, int]:
    best = None
    for i in range(t, len(a)):
        row = a[i]
        for j in range(t, len(row)):
            x = row[j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
                if best[0] == 1:
                    return i, j
    return (best[1], best[2]) if best else (-1, -1)


def smith_normal_form(m: IntegerMatrix) -> SmithForm:
    """Invariant factors of m; the pivot is always the smallest nonzero entry left."""
    a = m.to_rows()
    rows, cols = m.rows, m.cols
    diagonal = []
    t = 0
    while t < min(rows, cols):
        i, j = _min_nonzero(a, t)
        if i < 0:
            break
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            pivot = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // pivot
                    if q:
                        ri, rt = a[i], a[t]
                        for c in range(t, cols):
                            ri[c] -= q * rt[c]
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // pivot
                    if q:
                        for row in a[t:]:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        clean = False
            if not clean:
                # a remainder smaller than the pivot is left in row/column t
                best = (abs(pivot), t, t)
                for i in range(t + 1, rows):
                    if a[i][t] and abs(a[i][t]) < best[0]:
                        best = (abs(a[i][t]), i, t)
                for j in range(t + 1, cols):
                    if a[t][j] and abs(a[t][j]) < best[0]:
                        best = (abs(a[t][j]), t, j)
                _, i, j = best
                a[t], a[i] = a[i], a[t]
                for row in a:
                    row[t], row[j] = row[j], row[t]
                continue
            offender = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                             if a[i][j] % pivot), None)
            if offender is None:
                break
            ri, rt = a[offender[0]], a[t]
            for c in range(t, cols):
                rt[c] += ri[c]
        diagonal.append(abs(a[t][t]))
        t += 1
    return SmithForm(tuple(diagonal))


def rank_rational(m: IntegerMatrix) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    a = [list(m.row(i)) for i in range(m.rows) if any(m.row(i))]
    rows, cols = len(a), m.cols
    rank = 0
    previous = 1
    for c in range(cols):
        if rank == rows:
            break
        pivot_row = next((r for r in range(rank, rows) if a[r][c]), None)
        if pivot_row is None:
            continue
        a[rank], a[pivot_row] = a[pivot_row], a[rank]
        pivot = a[rank][c]
        top = a[rank]
        tail = top[c + 1:]
        for r in range(rank + 1, rows):
            row = a[r]
            factor = row[c]
            if factor == 0:
                if pivot != previous:
                    a[r] = row[:c + 1] + [pivot * x // previous for x in row[c + 1:]]
                continue
            a[r] = row[:c] + [0] + [(pivot * x - factor * y) // previous for x, y in zip(row[c + 1:], tail)]
        previous = pivot
        rank += 1
    return rank


def rref_mod_p(rows: Sequence[Sequence[int]], p: int, cols: int = None) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over GF(p): (nonzero rows, pivot columns)."""
    require_prime(p)
    if cols is None:
        cols = len(rows[0]) if len(rows) else 0
    a = np.array([[int(x) % p for x in row] for row in rows], dtype=np.int64).reshape(len(rows), cols)
    return _rref_array(a, p)


def _rref_array(a: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    a = a % p
    rank = 0
    pivots = []
    n_rows, n_cols = a.shape
    for c in range(n_cols):
        if rank == n_rows:
            break
        nonzero = np.nonzero(a[rank:, c])[0]
        if nonzero.size == 0:
            continue
        r = rank + int(nonzero[0])
        if r != rank:
            a[[rank, r]] = a[[r, rank]]
        inverse = pow(int(a[rank, c]), p - 2, p)
        a[rank] = (a[rank] * inverse) % p
        factors = a[:, c].copy()
        factors[rank] = 0
        a = (a - np.outer(factors, a[rank])) % p
        pivots.append(c)
        rank += 1
    return a[:rank], pivots


def rank_mod_p(m: IntegerMatrix, p: int) -> int:
    return len(rref_mod_p(m.to_rows(), p, m.cols)[1])


def row_space_membership(basis: IntegerMatrix, v: Sequence[int]) -> bool:
    """True iff v lies in the rational row span of basis."""
    if len(v) != basis.cols:
        raise ValueError(f'Vector of length {len(v)} against {basis.cols} columns')
    if not any(v):
        return True
    extended = IntegerMatrix.from_rows(basis.to_rows() + [list(v)], basis.cols)
    return rank_rational(extended) == rank_rational(basis)


def hermite_normal_form(m: IntegerMatrix) -> IntegerMatrix:
    """Hermite basis of the row lattice, one row per basis vector.

    Row i ends in a positive pivot at column f(i), f strictly increasing; the
    entries of later rows at column f(i) lie in [0, pivot).
    """
    if m.is_zero():
        return IntegerMatrix.zeros(0, m.cols)
    # columns of the column-style form of m^T span the row lattice of m
    transposed = DomainMatrix([[ZZ(x) for x in m.column(j)] for j in range(m.cols)], (m.cols, m.rows), ZZ)
    h = _sympy_hnf(transposed).to_Matrix()
    return IntegerMatrix.from_rows([[int(h[i, j]) for i in range(h.rows)] for j in range(h.cols)], m.cols)


def _pivot(row: Sequence[int]) -> int:
    return max(j for j, x in enumerate(row) if x)


def lattice_coordinates(basis: IntegerMatrix, vectors: IntegerMatrix) -> IntegerMatrix:
    """Integral coordinates of each row of vectors in an HNF basis; raises if a row is outside the lattice."""
    pivots = [_pivot(basis.row(i)) for i in range(basis.rows)]
    coordinates = []
    for k in range(vectors.rows):
        rest = list(vectors.row(k))
        coords = [0] * basis.rows
        for i in reversed(range(basis.rows)):
            c = pivots[i]
            if any(rest[c + 1:]):
                raise InvariantViolation('Vector is not in the lattice spanned by the basis')
            q, remainder = divmod(rest[c], basis[i, c])
            if remainder:
                raise InvariantViolation('Vector is not in the lattice spanned by the basis')
            coords[i] = q
            if q:
                rest = [x - q * y for x, y in zip(rest, basis.row(i))]
        if any(rest):
            raise InvariantViolation('Vector is not in the lattice spanned by the basis')
        coordinates.append(coords)
    return IntegerMatrix.from_rows(coordinates, basis.rows)
