"""Exact linear algebra over the two-element field.

Vectors are Python ints used as bitsets: bit ``i`` of a vector is its
coordinate ``i``, and addition is XOR.  Matrices store one int per row, so a
row operation is a single XOR on machine words.  Everything is deterministic:
the reduced row-echelon form is unique, pivot columns are produced in
ascending order, and subspaces are always kept in reduced echelon form so
that two subspaces are equal iff their stored bases are identical.

All values are immutable after construction and every operation is a pure
function, so concurrent use needs no synchronization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "Gf2Matrix",
    "Gf2Subspace",
    "reduced_echelon",
    "kernel_basis",
    "image_basis",
    "subspace_sum",
    "subspace_intersection",
    "quotient_dim",
    "bits",
    "rref_rows",
    "apply_columns",
    "invert_columns",
]


def bits(v: int) -> Iterator[int]:
    """Yield the set bit positions of ``v`` in ascending order."""
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


def rref_rows(rows: Iterable[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Reduced row echelon form of a list of bitset rows.

    Returns ``(reduced_nonzero_rows, pivot_columns)``; pivots ascend and each
    pivot column is zero in every other row.  The result is the unique RREF
    of the row space, hence independent of the input order.
    """
    basis: list[int] = []  # kept sorted by pivot (ascending)
    pivots: list[int] = []
    for row in rows:
        # Reduce against the current basis.
        for piv, b in zip(pivots, basis):
            if (row >> piv) & 1:
                row ^= b
        if row == 0:
            continue
        piv = (row & -row).bit_length() - 1
        # Back-substitute into existing rows, then insert in pivot order.
        for i, b in enumerate(basis):
            if (b >> piv) & 1:
                basis[i] = b ^ row
        pos = 0
        while pos < len(pivots) and pivots[pos] < piv:
            pos += 1
        pivots.insert(pos, piv)
        basis.insert(pos, row)
    return tuple(basis), tuple(pivots)


@dataclass(frozen=True)
class Gf2Matrix:
    """A rows x cols matrix over GF(2); ``rows[i]`` has bit ``j`` set iff entry (i, j) is 1."""

    n_rows: int
    n_cols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.n_rows:
            raise ValueError("row count mismatch")
        mask = (1 << self.n_cols) - 1
        if any(r & ~mask for r in self.rows):
            raise ValueError("row has bits beyond n_cols")

    @staticmethod
    def from_entries(n_rows: int, n_cols: int, entries: Iterable[tuple[int, int]]) -> "Gf2Matrix":
        rows = [0] * n_rows
        for i, j in entries:
            rows[i] ^= 1 << j
        return Gf2Matrix(n_rows, n_cols, tuple(rows))

    @staticmethod
    def identity(n: int) -> "Gf2Matrix":
        return Gf2Matrix(n, n, tuple(1 << i for i in range(n)))

    @staticmethod
    def zero(n_rows: int, n_cols: int) -> "Gf2Matrix":
        return Gf2Matrix(n_rows, n_cols, (0,) * n_rows)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def column(self, j: int) -> int:
        """Column ``j`` as a bitset over row indices."""
        out = 0
        for i, r in enumerate(self.rows):
            out |= ((r >> j) & 1) << i
        return out

    def columns(self) -> list[int]:
        return [self.column(j) for j in range(self.n_cols)]

    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix(self.n_cols, self.n_rows, tuple(self.columns()))

    def mat_vec(self, x: int) -> int:
        """Matrix-vector product; ``x`` is a bitset over columns, result over rows."""
        out = 0
        for i, r in enumerate(self.rows):
            out |= ((r & x).bit_count() & 1) << i
        return out

    def mat_mul(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.n_cols != other.n_rows:
            raise ValueError("dimension mismatch in matrix product")
        out_rows = []
        for r in self.rows:
            acc = 0
            for j in bits(r):
                acc ^= other.rows[j]
            out_rows.append(acc)
        return Gf2Matrix(self.n_rows, other.n_cols, tuple(out_rows))

    def rank(self) -> int:
        return len(rref_rows(self.rows)[0])

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.rows)


def reduced_echelon(m: Gf2Matrix) -> tuple[Gf2Matrix, tuple[int, ...]]:
    """Unique reduced row-echelon form of ``m`` plus its ascending pivot columns.

    Zero rows are retained at the bottom so the shape is preserved.
    """
    basis, pivots = rref_rows(m.rows)
    padded = basis + (0,) * (m.n_rows - len(basis))
    return Gf2Matrix(m.n_rows, m.n_cols, padded), pivots


@dataclass(frozen=True)
class Gf2Subspace:
    """A subspace of GF(2)^ambient_dim with its unique reduced-echelon basis."""

    ambient_dim: int
    basis: tuple[int, ...]  # reduced echelon, ascending pivots; () for the zero space

    @staticmethod
    def from_vectors(ambient_dim: int, vectors: Iterable[int]) -> "Gf2Subspace":
        basis, _ = rref_rows(vectors)
        return Gf2Subspace(ambient_dim, basis)

    @staticmethod
    def zero(ambient_dim: int) -> "Gf2Subspace":
        return Gf2Subspace(ambient_dim, ())

    @staticmethod
    def full(ambient_dim: int) -> "Gf2Subspace":
        return Gf2Subspace(ambient_dim, tuple(1 << i for i in range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: int) -> int:
        """Remainder of ``v`` after reduction against the basis (0 iff member)."""
        for b in self.basis:
            piv = (b & -b).bit_length() - 1
            if (v >> piv) & 1:
                v ^= b
        return v

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def contains_space(self, other: "Gf2Subspace") -> bool:
        return all(self.contains(b) for b in other.basis)


def kernel_basis(m: Gf2Matrix) -> Gf2Subspace:
    """Null space {x : m.mat_vec(x) = 0}; dim = n_cols - rank."""
    basis, pivots = rref_rows(m.rows)
    pivot_set = set(pivots)
    vectors = []
    for free in range(m.n_cols):
        if free in pivot_set:
            continue
        v = 1 << free
        for piv, row in zip(pivots, basis):
            if (row >> free) & 1:
                v ^= 1 << piv
        vectors.append(v)
    return Gf2Subspace.from_vectors(m.n_cols, vectors)


def image_basis(m: Gf2Matrix) -> Gf2Subspace:
    """Column space of ``m`` as a subspace of GF(2)^n_rows."""
    return Gf2Subspace.from_vectors(m.n_rows, m.columns())


def subspace_sum(u: Gf2Subspace, v: Gf2Subspace) -> Gf2Subspace:
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return Gf2Subspace.from_vectors(u.ambient_dim, u.basis + v.basis)


def subspace_intersection(u: Gf2Subspace, v: Gf2Subspace) -> Gf2Subspace:
    """Zassenhaus intersection.

    Stack rows ``(u, u)`` for the first space and ``(v, 0)`` for the second,
    eliminate on the first block; rows whose first block vanished carry the
    intersection in their second block.  Bits 0..n-1 hold the block being
    eliminated (rref pivots ascend, so it is cleared first), bits n..2n-1 the
    carried copy.
    """
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    n = u.ambient_dim
    mask = (1 << n) - 1
    stacked = [b | (b << n) for b in u.basis] + list(v.basis)
    reduced, _ = rref_rows(stacked)
    inter = [r >> n for r in reduced if (r & mask) == 0]
    return Gf2Subspace.from_vectors(n, inter)


def quotient_dim(u: Gf2Subspace, v: Gf2Subspace) -> int:
    """dim(u / v); requires v to be a subspace of u (checked)."""
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if not u.contains_space(v):
        raise ValueError("quotient requires the denominator to lie inside the numerator")
    return u.dim - v.dim


def apply_columns(cols: list[int], v: int) -> int:
    """Image of bitset vector ``v`` under the map with column bitsets ``cols``."""
    out = 0
    for b in bits(v):
        out ^= cols[b]
    return out


def invert_columns(cols: list[int]) -> list[int]:
    """Columns of the inverse of the square map given by column bitsets.

    Raises ``ValueError`` if the map is singular.
    """
    n = len(cols)
    # Row-reduce [M | I]; row r of M collects bit r of every column.
    rows = []
    for r in range(n):
        row = 0
        for j in range(n):
            row |= ((cols[j] >> r) & 1) << j
        rows.append(row | (1 << (n + r)))
    reduced, pivots = rref_rows(rows)
    if list(pivots) != list(range(n)):
        raise ValueError("cannot invert a singular GF(2) matrix")
    inv_rows = [row >> n for row in reduced]
    inv_cols = []
    for j in range(n):
        col = 0
        for r in range(n):
            col |= ((inv_rows[r] >> j) & 1) << r
        inv_cols.append(col)
    return inv_cols
