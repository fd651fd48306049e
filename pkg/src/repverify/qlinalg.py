"""Exact rational matrices and the subspace calculus used everywhere else.

All arithmetic is over Q via fractions.Fraction, so ranks, kernels, sums,
intersections and orthogonal complements are exact.  Subspaces are kept in
reduced column echelon form, which makes subspace equality a plain value
comparison.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Rat = Fraction


class LinAlgError(Exception):
    pass


class DimensionMismatch(LinAlgError):
    pass


class NotNilpotent(LinAlgError):
    pass


def _rat(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Mat:
    """Immutable row-major rational matrix."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "Mat":
        r = len(rows)
        c = len(rows[0]) if r else 0
        ents = []
        for row in rows:
            if len(row) != c:
                raise DimensionMismatch("ragged rows")
            ents.extend(_rat(x) for x in row)
        return Mat(r, c, tuple(ents))

    @staticmethod
    def from_cols(cols: Sequence[Sequence]) -> "Mat":
        if not cols:
            return Mat(0, 0, ())
        n = len(cols[0])
        return Mat.from_rows([[cols[j][i] for j in range(len(cols))] for i in range(n)])

    @staticmethod
    def zeros(rows: int, cols: int) -> "Mat":
        return Mat(rows, cols, (Fraction(0),) * (rows * cols))

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat(n, n, tuple(Fraction(1 if i == j else 0) for i in range(n) for j in range(n)))

    @staticmethod
    def diagonal(values: Sequence) -> "Mat":
        vals = [_rat(v) for v in values]
        n = len(vals)
        return Mat(n, n, tuple(vals[i] if i == j else Fraction(0) for i in range(n) for j in range(n)))

    def at(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Mat":
        return Mat(
            self.cols,
            self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def __add__(self, other: "Mat") -> "Mat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in addition")
        return Mat(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Mat") -> "Mat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in subtraction")
        return Mat(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Mat":
        return Mat(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> "Mat":
        c = _rat(c)
        return Mat(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        r, k, c = self.rows, self.cols, other.cols
        a, b = self.entries, other.entries
        out = [Fraction(0)] * (r * c)
        for i in range(r):
            arow = a[i * k : (i + 1) * k]
            for t in range(k):
                av = arow[t]
                if av:
                    boff = t * c
                    ooff = i * c
                    for j in range(c):
                        bv = b[boff + j]
                        if bv:
                            out[ooff + j] += av * bv
        return Mat(r, c, tuple(out))

    def apply(self, vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length mismatch")
        return tuple(sum((self.at(i, j) * vec[j] for j in range(self.cols)), Fraction(0)) for i in range(self.rows))

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise DimensionMismatch("trace of non-square matrix")
        return sum((self.at(i, i) for i in range(self.rows)), Fraction(0))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def hstack(self, other: "Mat") -> "Mat":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack row mismatch")
        rows = [list(self.row(i)) + list(other.row(i)) for i in range(self.rows)]
        return Mat(self.rows, self.cols + other.cols, tuple(x for row in rows for x in row))

    def vstack(self, other: "Mat") -> "Mat":
        if self.cols != other.cols:
            raise DimensionMismatch("vstack column mismatch")
        return Mat(self.rows + other.rows, self.cols, self.entries + other.entries)

    def to_float_rows(self) -> list[list[float]]:
        return [[float(x) for x in self.row(i)] for i in range(self.rows)]


def _rref_rows(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place reduced row echelon form; returns (rows, pivot column indices)."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def rref(m: Mat) -> tuple[Mat, list[int]]:
    rows, pivots = _rref_rows(m.to_rows())
    return Mat.from_rows(rows) if rows else Mat(0, m.cols, ()), pivots


def rank(m: Mat) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    _, pivots = _rref_rows(m.to_rows())
    return len(pivots)


def det(m: Mat) -> Fraction:
    if m.rows != m.cols:
        raise DimensionMismatch("determinant of non-square matrix")
    n = m.rows
    rows = m.to_rows()
    d = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            d = -d
        d *= rows[c][c]
        inv = Fraction(1) / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return d


def mat_inverse(m: Mat) -> Mat:
    if m.rows != m.cols:
        raise DimensionMismatch("inverse of non-square matrix")
    n = m.rows
    aug = [list(m.row(i)) + [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    aug, pivots = _rref_rows(aug)
    if len(pivots) < n:
        raise LinAlgError("matrix is singular")
    return Mat.from_rows([row[n:] for row in aug])


def solve_exact(m: Mat, rhs: Mat) -> Mat:
    """Solve m @ X = rhs for a consistent system with full column rank m."""
    aug = [list(m.row(i)) + list(rhs.row(i)) for i in range(m.rows)]
    aug, pivots = _rref_rows(aug)
    if len(pivots) < m.cols or any(p >= m.cols for p in pivots):
        raise LinAlgError("system is inconsistent or underdetermined")
    sol = [[Fraction(0)] * rhs.cols for _ in range(m.cols)]
    for r, p in enumerate(pivots):
        sol[p] = aug[r][m.cols :]
    # consistency: remaining rows must vanish
    for r in range(len(pivots), len(aug)):
        if any(x != 0 for x in aug[r][m.cols :]) and all(x == 0 for x in aug[r][: m.cols]):
            raise LinAlgError("system is inconsistent")
    return Mat.from_rows(sol)


class RowSpan:
    """Incrementally maintained echelonized row span of exact vectors.

    Used for algebra closures and membership tests: add() reduces a vector
    against the current span and absorbs any new direction.
    """

    def __init__(self, length: int):
        self.length = length
        self._rows: dict[int, tuple[Fraction, ...]] = {}

    @property
    def dim(self) -> int:
        return len(self._rows)

    def reduce(self, vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
        v = list(vec)
        for p in sorted(self._rows):
            if v[p] != 0:
                f = v[p]
                row = self._rows[p]
                v = [a - f * b for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, vec: Sequence[Fraction]) -> bool:
        return all(x == 0 for x in self.reduce(vec))

    def add(self, vec: Sequence[Fraction]) -> bool:
        v = list(self.reduce(vec))
        p = next((i for i, x in enumerate(v) if x != 0), None)
        if p is None:
            return False
        inv = Fraction(1) / v[p]
        v = [x * inv for x in v]
        for q, row in list(self._rows.items()):
            if row[p] != 0:
                f = row[p]
                self._rows[q] = tuple(a - f * b for a, b in zip(row, v))
        self._rows[p] = tuple(v)
        return True


@dataclass(frozen=True)
class Subspace:
    """Column span in reduced column echelon form.

    The canonical basis makes equality of subspaces equality of values; the
    zero subspace is a basis with zero columns.
    """

    ambient_dim: int
    basis: Mat

    def __post_init__(self):
        if self.basis.rows != self.ambient_dim:
            raise DimensionMismatch("basis rows must equal ambient dimension")

    @property
    def dim(self) -> int:
        return self.basis.cols

    @staticmethod
    def zero(n: int) -> "Subspace":
        return Subspace(n, Mat(n, 0, ()))

    @staticmethod
    def full(n: int) -> "Subspace":
        return Subspace(n, Mat.identity(n))

    @staticmethod
    def from_columns(n: int, cols: Sequence[Sequence]) -> "Subspace":
        if not cols:
            return Subspace.zero(n)
        return canonicalize(Mat.from_cols([[_rat(x) for x in c] for c in cols]))

    def contains_vector(self, vec: Sequence[Fraction]) -> bool:
        if len(vec) != self.ambient_dim:
            raise DimensionMismatch("vector length mismatch")
        span = RowSpan(self.ambient_dim)
        for j in range(self.dim):
            span.add(self.basis.col(j))
        return span.contains(tuple(_rat(x) for x in vec))

    def contains_subspace(self, other: "Subspace") -> bool:
        return subspace_sum(self, other) == self

    def column_vectors(self) -> list[tuple[Fraction, ...]]:
        return [self.basis.col(j) for j in range(self.dim)]


def canonicalize(m: Mat) -> Subspace:
    """Column span of m as a canonical Subspace (reduced column echelon form)."""
    if m.cols == 0:
        return Subspace(m.rows, Mat(m.rows, 0, ()))
    reduced, pivots = rref(m.transpose())
    cols = [reduced.row(i) for i in range(len(pivots))]
    if not cols:
        return Subspace(m.rows, Mat(m.rows, 0, ()))
    return Subspace(m.rows, Mat.from_cols(cols))


def kernel_basis(m: Mat) -> Subspace:
    """ker(m) as a Subspace of the domain; dimension cols - rank(m)."""
    rows, pivots = _rref_rows(m.to_rows()) if m.rows else ([], [])
    pivset = set(pivots)
    free = [j for j in range(m.cols) if j not in pivset]
    cols = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -rows[r][f]
        cols.append(v)
    if not cols:
        return Subspace.zero(m.cols)
    return canonicalize(Mat.from_cols(cols))


def subspace_sum(u: Subspace, w: Subspace) -> Subspace:
    if u.ambient_dim != w.ambient_dim:
        raise DimensionMismatch("ambient dimension mismatch in sum")
    if u.dim == 0:
        return w
    if w.dim == 0:
        return u
    return canonicalize(u.basis.hstack(w.basis))


def subspace_intersect(u: Subspace, w: Subspace) -> Subspace:
    """u cap w via the kernel of the stacked block matrix [B_u | -B_w]."""
    if u.ambient_dim != w.ambient_dim:
        raise DimensionMismatch("ambient dimension mismatch in intersection")
    if u.dim == 0 or w.dim == 0:
        return Subspace.zero(u.ambient_dim)
    stacked = u.basis.hstack(-w.basis)
    ker = kernel_basis(stacked)
    if ker.dim == 0:
        return Subspace.zero(u.ambient_dim)
    top = Mat.from_rows([ker.basis.row(i) for i in range(u.dim)])
    return canonicalize(u.basis @ top)


def orthogonal_complement(u: Subspace) -> Subspace:
    """Complement w.r.t. the standard dot product of the fixed coordinates."""
    if u.dim == 0:
        return Subspace.full(u.ambient_dim)
    return kernel_basis(u.basis.transpose())


def projection_matrix(u: Subspace) -> Mat:
    """Orthogonal projection onto u: B (B^T B)^{-1} B^T, exact."""
    n = u.ambient_dim
    if u.dim == 0:
        return Mat.zeros(n, n)
    b = u.basis
    gram_inv = mat_inverse(b.transpose() @ b)
    return b @ gram_inv @ b.transpose()


def nilpotent_exp(n: Mat) -> Mat:
    """exp(n) as the finite exact series for nilpotent n."""
    if n.rows != n.cols:
        raise DimensionMismatch("exp of non-square matrix")
    acc = Mat.identity(n.rows)
    cur = n
    fact = 1
    for i in range(1, n.rows + 1):
        if cur.is_zero():
            return acc
        fact *= i
        acc = acc + cur.scale(Fraction(1, fact))
        cur = cur @ n
    if not cur.is_zero():
        raise NotNilpotent("matrix is not nilpotent (n^dim != 0)")
    return acc


# --- JSON round trip (exact rational strings) ---------------------------------


def mat_to_json(m: Mat) -> dict:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [[str(x) for x in m.row(i)] for i in range(m.rows)],
    }


def mat_from_json(obj: dict) -> Mat:
    rows = int(obj["rows"])
    cols = int(obj["cols"])
    ents = obj["entries"]
    if len(ents) != rows or any(len(r) != cols for r in ents):
        raise DimensionMismatch("bad serialized matrix shape")
    return Mat(rows, cols, tuple(Fraction(x) for r in ents for x in r))


def subspace_to_json(s: Subspace) -> dict:
    return {"ambient_dim": s.ambient_dim, "basis": mat_to_json(s.basis)}


def subspace_from_json(obj: dict) -> Subspace:
    return Subspace(int(obj["ambient_dim"]), mat_from_json(obj["basis"]))


def dumps_mat(m: Mat) -> str:
    return json.dumps(mat_to_json(m), sort_keys=True)


def loads_mat(text: str) -> Mat:
    return mat_from_json(json.loads(text))
