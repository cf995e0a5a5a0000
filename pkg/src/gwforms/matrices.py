"""Dense matrices over the exact rings, with fraction-free determinants and
exact inverses of unimodular matrices."""

from __future__ import annotations

from fractions import Fraction

from .errors import AlgebraError, NonSquare, NotAUnit, RingMismatch
from .rings import QQ, ZZ, PolyRing, Ring, RingElement


class Matrix:
    """Immutable dense matrix; entries are raw ring values."""

    __slots__ = ("ring", "rows", "cols", "_e")

    def __init__(self, ring: Ring, entries, cols=None):
        self.ring = ring
        ent = tuple(tuple(self._raw(x) for x in row) for row in entries)
        self.rows = len(ent)
        if ent:
            self.cols = len(ent[0])
        else:
            self.cols = 0 if cols is None else cols
        if any(len(r) != self.cols for r in ent):
            raise AlgebraError("ragged rows")
        self._e = ent

    def _raw(self, x):
        if isinstance(x, RingElement):
            if x.ring != self.ring:
                raise RingMismatch(f"{x.ring} vs {self.ring}")
            return x.value
        if isinstance(x, int):
            return self.ring._from_int(x)
        return x

    # constructors

    @classmethod
    def from_rows(cls, ring, rows):
        return cls(ring, rows)

    @classmethod
    def identity(cls, ring, n):
        one, zero = ring._from_int(1), ring._from_int(0)
        return cls(ring, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring, rows, cols):
        zero = ring._from_int(0)
        return cls(ring, [[zero] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def block_diag(cls, blocks):
        if not blocks:
            raise AlgebraError("need at least one block")
        ring = blocks[0].ring
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        zero = ring._from_int(0)
        out = [[zero] * m for _ in range(n)]
        r = c = 0
        for b in blocks:
            if b.ring != ring:
                raise RingMismatch("blocks over different rings")
            for i in range(b.rows):
                out[r + i][c : c + b.cols] = b._e[i]
            r += b.rows
            c += b.cols
        return cls(ring, out, cols=m)

    @classmethod
    def hstack(cls, blocks):
        ring = blocks[0].ring
        rows = blocks[0].rows
        if any(b.rows != rows or b.ring != ring for b in blocks):
            raise AlgebraError("hstack shape/ring mismatch")
        return cls(ring, [sum((list(b._e[i]) for b in blocks), []) for i in range(rows)])

    @classmethod
    def vstack(cls, blocks):
        ring = blocks[0].ring
        cols = blocks[0].cols
        if any(b.cols != cols or b.ring != ring for b in blocks):
            raise AlgebraError("vstack shape/ring mismatch")
        rows = []
        for b in blocks:
            rows.extend(b._e)
        return cls(ring, rows)

    # access

    def entry(self, i, j) -> RingElement:
        return RingElement(self.ring, self._e[i][j])

    def raw(self, i, j):
        return self._e[i][j]

    def row_list(self):
        return [[RingElement(self.ring, x) for x in row] for row in self._e]

    def column(self, j):
        return tuple(RingElement(self.ring, self._e[i][j]) for i in range(self.rows))

    def is_square(self):
        return self.rows == self.cols

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and self._e == other._e
        )

    def __hash__(self):
        return hash((self.ring, self._e))

    def __repr__(self):
        body = "; ".join(
            ", ".join(self.ring._fmt(x) for x in row) for row in self._e
        )
        return f"[{body}]"

    # arithmetic

    def __add__(self, other):
        self._same_shape(other)
        add = self.ring._add
        return Matrix(
            self.ring,
            [
                [add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self._e, other._e)
            ],
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        neg = self.ring._neg
        return Matrix(self.ring, [[neg(x) for x in row] for row in self._e])

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.ring != self.ring:
            raise RingMismatch(f"{other.ring} vs {self.ring}")
        if self.cols != other.rows:
            raise AlgebraError(
                f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        if self.cols == 0 or self.rows == 0 or other.cols == 0:
            return Matrix.zeros(self.ring, self.rows, other.cols)
        add, mul = self.ring._add, self.ring._mul
        zero = self.ring._from_int(0)
        bt = list(zip(*other._e))
        out = []
        for row in self._e:
            orow = []
            for col in bt:
                acc = zero
                for a, b in zip(row, col):
                    acc = add(acc, mul(a, b))
                orow.append(acc)
            out.append(orow)
        return Matrix(self.ring, out)

    def scale(self, c) -> "Matrix":
        c = self._raw(c)
        mul = self.ring._mul
        return Matrix(self.ring, [[mul(c, x) for x in row] for row in self._e])

    def transpose(self) -> "Matrix":
        if self.rows == 0 or self.cols == 0:
            return Matrix.zeros(self.ring, self.cols, self.rows)
        return Matrix(self.ring, list(zip(*self._e)))

    def kron(self, other: "Matrix") -> "Matrix":
        if other.ring != self.ring:
            raise RingMismatch("Kronecker factors over different rings")
        mul = self.ring._mul
        out = []
        for i in range(self.rows):
            for k in range(other.rows):
                out.append(
                    [
                        mul(self._e[i][j], other._e[k][l])
                        for j in range(self.cols)
                        for l in range(other.cols)
                    ]
                )
        return Matrix(self.ring, out)

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        return Matrix(
            self.ring, [[self._e[i][j] for j in col_idx] for i in row_idx]
        )

    def map_entries(self, fn) -> "Matrix":
        return Matrix(self.ring, [[fn(x) for x in row] for row in self._e])

    def map_ring(self, target: Ring, fn) -> "Matrix":
        """New matrix over ``target`` with entries fn(raw) -> raw."""
        return Matrix(target, [[fn(x) for x in row] for row in self._e])

    def rot180(self) -> "Matrix":
        return Matrix(self.ring, [row[::-1] for row in self._e[::-1]], cols=self.cols)

    def is_zero(self) -> bool:
        z = self.ring._is_zero
        return all(z(x) for row in self._e for x in row)

    def _same_shape(self, other):
        if other.ring != self.ring:
            raise RingMismatch(f"{other.ring} vs {self.ring}")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise AlgebraError("shape mismatch")


def determinant(m: Matrix) -> RingElement:
    """Exact determinant: Bareiss over integral domains, cofactor expansion
    over rings with zero divisors."""
    if not m.is_square():
        raise NonSquare(f"{m.rows}x{m.cols}")
    if m.rows == 0:
        return m.ring.one()
    if m.ring.is_domain:
        return RingElement(m.ring, _det_bareiss(m))
    return RingElement(m.ring, _det_cofactor(m.ring, [list(r) for r in m._e]))


def _det_bareiss(m: Matrix):
    ring = m.ring
    n = m.rows
    a = [list(row) for row in m._e]
    sign = 1
    prev = ring._from_int(1)
    for k in range(n - 1):
        if ring._is_zero(a[k][k]):
            for i in range(k + 1, n):
                if not ring._is_zero(a[i][k]):
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ring._from_int(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = ring._add(
                    ring._mul(a[k][k], a[i][j]),
                    ring._neg(ring._mul(a[i][k], a[k][j])),
                )
                a[i][j] = ring._exact_div(num, prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return ring._neg(d) if sign < 0 else d


def _det_cofactor(ring, rows):
    n = len(rows)
    if n == 0:
        return ring._from_int(1)
    if n == 1:
        return rows[0][0]
    total = ring._from_int(0)
    for j in range(n):
        c = rows[0][j]
        if ring._is_zero(c):
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = ring._mul(c, _det_cofactor(ring, minor))
        if j % 2:
            term = ring._neg(term)
        total = ring._add(total, term)
    return total


def is_unit(x: RingElement) -> bool:
    return x.is_unit()


def inverse_if_unit(m: Matrix) -> Matrix:
    """Exact inverse when det is a unit; raises NotAUnit otherwise."""
    if not m.is_square():
        raise NonSquare(f"{m.rows}x{m.cols}")
    d = determinant(m)
    if not d.is_unit():
        raise NotAUnit(f"determinant {d} is not a unit")
    if m.rows == 0:
        return m
    ring = m.ring
    if ring.is_field:
        inv = _inverse_field(m)
    elif isinstance(ring, ZZ):
        qq = QQ()
        mq = m.map_ring(qq, Fraction)
        invq = _inverse_field(mq)
        if any(x.denominator != 1 for row in invq._e for x in row):
            raise NotAUnit("integer matrix with non-integer inverse")
        inv = invq.map_ring(ring, lambda x: x.numerator)
    else:
        inv = _inverse_adjugate(m, d)
    prod = m @ inv
    if prod != Matrix.identity(ring, m.rows):
        raise AlgebraError("inverse verification failed")
    return inv


def _inverse_field(m: Matrix) -> Matrix:
    ring = m.ring
    n = m.rows
    a = [list(row) + list(Matrix.identity(ring, n)._e[i]) for i, row in enumerate(m._e)]
    for k in range(n):
        piv = None
        for i in range(k, n):
            if not ring._is_zero(a[i][k]):
                piv = i
                break
        if piv is None:
            raise NotAUnit("singular matrix")
        a[k], a[piv] = a[piv], a[k]
        ipiv = ring._inv(a[k][k])
        a[k] = [ring._mul(ipiv, x) for x in a[k]]
        for i in range(n):
            if i == k or ring._is_zero(a[i][k]):
                continue
            c = a[i][k]
            a[i] = [
                ring._add(x, ring._neg(ring._mul(c, y)))
                for x, y in zip(a[i], a[k])
            ]
    return Matrix(ring, [row[n:] for row in a])


def _inverse_adjugate(m: Matrix, det: RingElement) -> Matrix:
    ring = m.ring
    n = m.rows
    dinv = det.inv().value
    rows = [list(r) for r in m._e]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [rows[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            if not minor:
                cof = ring._from_int(1)
            elif ring.is_domain:
                cof = _det_bareiss(Matrix(ring, minor))
            else:
                cof = _det_cofactor(ring, minor)
            if (i + j) % 2:
                cof = ring._neg(cof)
            adj[j][i] = ring._mul(dinv, cof)
    return Matrix(ring, adj)


def substitute_matrix(m: Matrix, assignment: dict) -> Matrix:
    """Evaluate a polynomial matrix at a full variable assignment."""
    ring = m.ring
    if not isinstance(ring, PolyRing):
        raise AlgebraError("substitution needs a polynomial matrix")
    return m.map_ring(ring.base, lambda x: ring.substitute(x, assignment).value)


def embed_matrix(m: Matrix, target: Ring) -> Matrix:
    """Coerce every entry into ``target`` along the canonical embedding."""
    from .rings import coerce

    return m.map_ring(
        target, lambda x: coerce(RingElement(m.ring, x), target).value
    )
