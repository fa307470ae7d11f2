"""Exact integer matrices and the Smith-normal-form backend dispatch.

Matrices are immutable, hashable, dense, and arbitrary precision.  The Smith
normal form routine prefers the compiled ``_snf_core`` kernel when it is
importable and all entries fit in 64 bits, falling back to the pure-Python
kernel otherwise.  Set ``MACKEYBOX_PURE=1`` to force the fallback (used by
the benchmark and the backend-parity tests).
"""

from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache

from . import _snf_py
from .errors import IllFormedHom

try:  # compiled kernel is optional
    from . import _snf_core
except ImportError:  # pragma: no cover - depends on build environment
    _snf_core = None

_I64_MIN = -(2**63)
_I64_MAX = 2**63 - 1


def compiled_kernel_available():
    return _snf_core is not None


def _force_pure():
    return os.environ.get("MACKEYBOX_PURE", "") == "1"


class IntMatrix:
    """Immutable integer matrix; rows stored as a tuple of tuples."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows, ncols=None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged matrix")
            if ncols is not None and ncols != width:
                raise ValueError("ncols disagrees with row width")
            ncols = width
        elif ncols is None:
            raise ValueError("empty matrix needs explicit ncols")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, *args):
        raise AttributeError("IntMatrix is immutable")

    # ------------------------------------------------------------------
    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(tuple((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def from_columns(cls, cols, nrows):
        cols = [tuple(c) for c in cols]
        if any(len(c) != nrows for c in cols):
            raise ValueError("column length mismatch")
        return cls(tuple(tuple(c[i] for c in cols) for i in range(nrows)), len(cols))

    @classmethod
    def column_vector(cls, entries):
        return cls(tuple((int(x),) for x in entries), 1)

    # ------------------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ncols, self.rows))

    def __repr__(self):
        return f"IntMatrix({self.nrows}x{self.ncols})"

    def to_lists(self):
        return [list(r) for r in self.rows]

    def row(self, i):
        return self.rows[i]

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def is_zero(self):
        return all(x == 0 for r in self.rows for x in r)

    # ------------------------------------------------------------------
    def transpose(self):
        return IntMatrix(tuple(self.column(j) for j in range(self.ncols)), self.nrows)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        ot = other.transpose().rows
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in ot) for row in self.rows),
            other.ncols,
        )

    def __add__(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return IntMatrix(
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, k):
        return IntMatrix(tuple(tuple(k * x for x in r) for r in self.rows), self.ncols)

    def power(self, e):
        if e < 0:
            raise ValueError("negative power")
        if self.nrows != self.ncols:
            raise ValueError("power of non-square matrix")
        out = IntMatrix.identity(self.nrows)
        for _ in range(e):
            out = out @ self
        return out

    def kron(self, other):
        """Kronecker product; pair (i, j) of generators maps to index i*other + j."""
        rows = []
        for r1 in self.rows:
            for r2 in other.rows:
                rows.append(tuple(a * b for a in r1 for b in r2))
        return IntMatrix(tuple(rows), self.ncols * other.ncols)

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise ValueError("column mismatch in vstack")
        return IntMatrix(self.rows + other.rows, self.ncols)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("row mismatch in hstack")
        return IntMatrix(
            tuple(r1 + r2 for r1, r2 in zip(self.rows, other.rows)),
            self.ncols + other.ncols,
        )


def _fits_i64(mat):
    return all(_I64_MIN <= x <= _I64_MAX for r in mat.rows for x in r)


@lru_cache(maxsize=None)
def smith_normal_form(mat: IntMatrix):
    """(U, D, V) with U @ mat @ V == D in Smith normal form."""
    if _snf_core is not None and not _force_pure() and _fits_i64(mat):
        try:
            u, d, v = _snf_core.smith_normal_form(mat.to_lists(), mat.nrows, mat.ncols)
            return (
                IntMatrix(u, mat.nrows),
                IntMatrix(d, mat.ncols),
                IntMatrix(v, mat.ncols),
            )
        except OverflowError:
            pass
    u, d, v = _snf_py.smith_normal_form(mat.rows, mat.nrows, mat.ncols)
    return IntMatrix(u, mat.nrows), IntMatrix(d, mat.ncols), IntMatrix(v, mat.ncols)


def smith_diagonal(mat):
    _, d, _ = smith_normal_form(mat)
    return tuple(d.rows[i][i] for i in range(min(d.nrows, d.ncols)))


def snf_rank(mat):
    return sum(1 for x in smith_diagonal(mat) if x != 0)


def solve(mat, target):
    """One integer solution x of mat @ x = target, or None.

    ``target`` is a flat tuple of length ``mat.nrows``.
    """
    u, d, v = smith_normal_form(mat)
    w = [sum(a * b for a, b in zip(row, target)) for row in u.rows]
    y = [0] * mat.ncols
    k = min(mat.nrows, mat.ncols)
    for i in range(mat.nrows):
        di = d.rows[i][i] if i < k else 0
        if di == 0:
            if w[i] != 0:
                return None
        else:
            if w[i] % di != 0:
                return None
            y[i] = w[i] // di
    return tuple(sum(v.rows[i][j] * y[j] for j in range(mat.ncols)) for i in range(mat.ncols))


def kernel_basis(mat):
    """Columns spanning ker(mat) as a subgroup of Z^ncols."""
    _, d, v = smith_normal_form(mat)
    k = min(mat.nrows, mat.ncols)
    basis = []
    for j in range(mat.ncols):
        if j >= k or d.rows[j][j] == 0:
            basis.append(v.column(j))
    return basis


def unimodular_inverse(mat):
    """Inverse of a unimodular integer matrix (exact, via fractions)."""
    n = mat.nrows
    if n != mat.ncols:
        raise ValueError("not square")
    a = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(mat.rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            v = a[i][n + j]
            if v.denominator != 1:
                raise ValueError("matrix is not unimodular")
            row.append(int(v))
        out.append(tuple(row))
    return IntMatrix(tuple(out), n)


def hermite_row_basis(rows, ncols):
    """Canonical (Hermite-style) row basis of the subgroup spanned by ``rows``.

    Used as a deterministic key for subgroups of Z^n; two generating sets of
    the same subgroup produce identical output.
    """
    work = [list(r) for r in rows if any(x != 0 for x in r)]
    basis = []
    for col in range(ncols):
        while True:
            pivots = [i for i, r in enumerate(work) if r[col] != 0]
            if len(pivots) <= 1:
                break
            pivots.sort(key=lambda i: abs(work[i][col]))
            p = work[pivots[0]]
            for i in pivots[1:]:
                q = work[i][col] // p[col]
                work[i] = [x - q * y for x, y in zip(work[i], p)]
            work = [r for r in work if any(x != 0 for x in r)]
        pivots = [i for i, r in enumerate(work) if r[col] != 0]
        if pivots:
            p = work.pop(pivots[0])
            if p[col] < 0:
                p = [-x for x in p]
            basis.append(p)
    # reduce entries above each pivot; floor division gives canonical residues
    for i in reversed(range(len(basis))):
        pcol = next(j for j, x in enumerate(basis[i]) if x != 0)
        for k in range(i):
            q = basis[k][pcol] // basis[i][pcol]
            if q:
                basis[k] = [x - q * y for x, y in zip(basis[k], basis[i])]
    return tuple(tuple(r) for r in basis)


def require_well_defined(matrix, source_relations, target_solver, context=""):
    """Check matrix sends each source relation into the target relation span."""
    for rel in source_relations.rows:
        image = tuple(sum(m * r for m, r in zip(row, rel)) for row in matrix.rows)
        if target_solver(image) is None:
            raise IllFormedHom(
                f"relation {list(rel)} maps to {list(image)} outside the target relation span"
                + (f" ({context})" if context else "")
            )
