"""Exact linear algebra: rational matrices, matrices over Q(eps), Vandermonde.

Everything here is plain Gaussian elimination over an exact field.  Matrices
are small (bounded by the number of monomials of desk-scale polynomials), so
no fraction-free or modular tricks are needed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from .epsilon import EpsScalar
from .errors import PoleAtZero, SingularMatrixError


def _frac_rows(rows) -> List[List[Fraction]]:
    return [[Fraction(x) if isinstance(x, int) else x for x in r] for r in rows]


def rat_rref(rows: Sequence[Sequence[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form; returns (rref, pivot column indices)."""
    m = _frac_rows(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: List[int] = []
    row = 0
    for col in range(ncols):
        pivot = None
        for r in range(row, len(m)):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = 1 / m[row][col]
        m[row] = [x * inv for x in m[row]]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
        if row == len(m):
            break
    return m, pivots


def rat_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rat_rref(rows)[1])


def rat_nullspace(rows: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """Basis of the right kernel, one vector per free column."""
    if not rows:
        return []
    ncols = len(rows[0])
    rref, pivots = rat_rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rref[r][fc]
        basis.append(v)
    return basis


def rat_solve(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> List[Fraction] | None:
    """One exact solution of A x = b, or None if the system is inconsistent."""
    if len(rows) != len(rhs):
        raise ValueError("rhs length mismatch")
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(_frac_rows(rows), rhs)]
    rref, pivots = rat_rref(aug)
    if ncols in pivots:
        return None  # pivot in the rhs column: inconsistent
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = rref[r][ncols]
    return x


def rat_inverse(rows: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("inverse of a non-square matrix")
    aug = [list(r) + [Fraction(1 if i == j else 0) for j in range(n)]
           for i, r in enumerate(_frac_rows(rows))]
    rref, pivots = rat_rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular over Q")
    return [r[n:] for r in rref[:n]]


def solve_vandermonde(nodes: Sequence[Fraction], rhs: Sequence[Fraction]) -> List[Fraction]:
    """Solve sum_j c_j * nodes[j]**s = rhs[s] for s = 0..n-1, exactly.

    Uses the Lagrange-basis expansion: c_j = sum_s lambda_{j,s} rhs[s] where
    L_j(x) = prod_{k != j} (x - t_k)/(t_j - t_k) = sum_s lambda_{j,s} x**s.
    O(n^2) and division-free except by node differences, so duplicate nodes
    surface as an immediate error.
    """
    nodes = [Fraction(t) if isinstance(t, int) else t for t in nodes]
    rhs = [Fraction(b) if isinstance(b, int) else b for b in rhs]
    n = len(nodes)
    if len(rhs) != n:
        raise ValueError("rhs length must match node count")
    if len(set(nodes)) != n:
        raise ValueError("duplicate interpolation nodes")
    out: List[Fraction] = []
    for j in range(n):
        # numerator polynomial prod_{k != j} (x - t_k), low-to-high coefficients
        num = [Fraction(1)]
        denom = Fraction(1)
        for k in range(n):
            if k == j:
                continue
            tk = nodes[k]
            new = [Fraction(0)] * (len(num) + 1)
            for s, c in enumerate(num):
                new[s + 1] += c
                new[s] -= tk * c
            num = new
            denom *= nodes[j] - tk
        c_j = sum((num[s] * rhs[s] for s in range(n)), Fraction(0)) / denom
        out.append(c_j)
    return out


class EpsMatrix:
    """Square matrix over Q(eps)."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence[object]]):
        n = len(rows)
        clean = []
        for r in rows:
            if len(r) != n:
                raise ValueError("EpsMatrix must be square")
            clean.append(tuple(self._lift(x) for x in r))
        self.rows = tuple(clean)

    @staticmethod
    def _lift(x) -> EpsScalar:
        if isinstance(x, EpsScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return EpsScalar.from_rational(x)
        raise TypeError(f"bad matrix entry {x!r}")

    @property
    def dim(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "EpsMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_rational(cls, rows: Sequence[Sequence[Fraction]]) -> "EpsMatrix":
        return cls(rows)

    def __mul__(self, other: "EpsMatrix") -> "EpsMatrix":
        if not isinstance(other, EpsMatrix):
            return NotImplemented
        n = self.dim
        if other.dim != n:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = EpsScalar.zero()
                for k in range(n):
                    a = self.rows[i][k]
                    b = other.rows[k][j]
                    if not a.is_zero and not b.is_zero:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return EpsMatrix(out)

    def inverse(self) -> "EpsMatrix":
        """Gauss-Jordan over the field Q(eps)."""
        n = self.dim
        aug = [list(self.rows[i]) + [EpsScalar.from_rational(1 if i == j else 0)
                                     for j in range(n)] for i in range(n)]
        for col in range(n):
            pivot = None
            for r in range(col, n):
                if not aug[r][col].is_zero:
                    pivot = r
                    break
            if pivot is None:
                raise SingularMatrixError("matrix is singular over Q(eps)")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            inv = EpsScalar.one() / aug[col][col]
            aug[col] = [x * inv for x in aug[col]]
            for r in range(n):
                if r != col and not aug[r][col].is_zero:
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        return EpsMatrix([row[n:] for row in aug])

    def at_zero(self) -> List[List[Fraction]]:
        """Entrywise limit at eps = 0; raises PoleAtZero on a pole."""
        out = []
        for i, row in enumerate(self.rows):
            orow = []
            for j, x in enumerate(row):
                try:
                    orow.append(x.limit())
                except PoleAtZero as exc:
                    raise PoleAtZero(f"matrix entry ({i},{j}) has a pole", witness=(i, j)) from exc
            out.append(orow)
        return out

    def is_unit_at_zero(self) -> bool:
        """All entries regular at 0 and the limit matrix invertible over Q."""
        try:
            m0 = self.at_zero()
        except PoleAtZero:
            return False
        return rat_rank(m0) == self.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, EpsMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __repr__(self) -> str:
        return "EpsMatrix([" + ", ".join(repr(list(r)) for r in self.rows) + "])"


def invert_matrix(m: EpsMatrix) -> EpsMatrix:
    """Module-level alias for EpsMatrix.inverse."""
    return m.inverse()
