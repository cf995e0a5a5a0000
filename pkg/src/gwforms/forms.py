"""Bilinear spaces over exact rings: hyperbolic spaces, orthogonal sums,
tensor products, certified isometries, and the constructive embedding of any
symplectic space into a split hyperbolic one."""

from __future__ import annotations

from enum import Enum

from .errors import (
    CongruenceFails,
    FlavorMismatch,
    NoUnitPivot,
    NotAlternating,
    NotInvertible,
    NotSymmetric,
    NotUnimodular,
    RingMismatch,
)
from .matrices import Matrix, determinant, inverse_if_unit
from .rings import Ring, ZZ


class FormFlavor(Enum):
    SYMMETRIC = "symmetric"
    ALTERNATING = "alternating"


def matrix_is_symmetric(g: Matrix) -> bool:
    return g == g.transpose()


def matrix_is_alternating(g: Matrix) -> bool:
    # zero diagonal is the defining condition; together with G^T = -G it is
    # characteristic-2 safe (over char 2 the two conditions read G^T = G).
    z = g.ring._is_zero
    if any(not z(g.raw(i, i)) for i in range(g.rows)):
        return False
    return g.transpose() == -g


class BilinearSpace:
    """A square Gram matrix with a declared flavor."""

    __slots__ = ("flavor", "gram", "_unimodular")

    def __init__(self, flavor: FormFlavor, gram: Matrix):
        if not gram.is_square():
            raise NotSymmetric("Gram matrix must be square")
        if flavor is FormFlavor.SYMMETRIC:
            if not matrix_is_symmetric(gram):
                raise NotSymmetric("Gram matrix is not symmetric")
        else:
            if not matrix_is_alternating(gram):
                raise NotAlternating("Gram matrix is not alternating")
        self.flavor = flavor
        self.gram = gram
        self._unimodular = None

    @property
    def ring(self) -> Ring:
        return self.gram.ring

    @property
    def rank(self) -> int:
        return self.gram.rows

    def is_unimodular(self) -> bool:
        if self._unimodular is None:
            self._unimodular = determinant(self.gram).is_unit()
        return self._unimodular

    def require_unimodular(self):
        if not self.is_unimodular():
            raise NotUnimodular(f"determinant {determinant(self.gram)} is not a unit")

    def negate(self) -> "BilinearSpace":
        return BilinearSpace(self.flavor, -self.gram)

    def __eq__(self, other):
        return (
            isinstance(other, BilinearSpace)
            and self.flavor == other.flavor
            and self.gram == other.gram
        )

    def __hash__(self):
        return hash((self.flavor, self.gram))

    def __repr__(self):
        return f"BilinearSpace({self.flavor.value}, {self.gram!r})"


class Isometry:
    """An invertible matrix T with T^t * gram(source) * T = gram(target).

    The witness expresses the target basis in source coordinates; the
    constructor re-verifies the congruence exactly, so an Isometry instance
    is always a valid certificate.
    """

    __slots__ = ("source", "target", "witness")

    def __init__(self, source: BilinearSpace, target: BilinearSpace, witness: Matrix):
        check = witness.transpose() @ source.gram @ witness
        g = target.gram
        if check != g:
            for i in range(g.rows):
                for j in range(g.cols):
                    if check.raw(i, j) != g.raw(i, j):
                        raise CongruenceFails(
                            i, j, check.entry(i, j), g.entry(i, j)
                        )
            raise CongruenceFails(0, 0, check, g)
        if not determinant(witness).is_unit():
            raise NotInvertible("witness determinant is not a unit")
        self.source = source
        self.target = target
        self.witness = witness

    def compose(self, other: "Isometry") -> "Isometry":
        """self: a -> b composed with other: b -> c gives a -> c."""
        if self.target != other.source:
            raise FlavorMismatch("isometries do not compose")
        return Isometry(self.source, other.target, self.witness @ other.witness)

    def inverse(self) -> "Isometry":
        return Isometry(self.target, self.source, inverse_if_unit(self.witness))

    def __repr__(self):
        return f"Isometry({self.source.rank}-dim, witness={self.witness!r})"


def _plane(flavor: FormFlavor, ring: Ring) -> Matrix:
    if flavor is FormFlavor.ALTERNATING:
        return Matrix(ring, [[0, 1], [-1, 0]])
    return Matrix(ring, [[0, 1], [1, 0]])


def hyperbolic(flavor: FormFlavor, n: int, ring: Ring = ZZ()) -> BilinearSpace:
    """Orthogonal sum of n copies of the rank-2 hyperbolic plane."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return BilinearSpace(flavor, Matrix.zeros(ring, 0, 0))
    return BilinearSpace(flavor, Matrix.block_diag([_plane(flavor, ring)] * n))


def orthogonal_sum(a: BilinearSpace, b: BilinearSpace) -> BilinearSpace:
    if a.flavor != b.flavor:
        raise FlavorMismatch(f"{a.flavor} vs {b.flavor}")
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    return BilinearSpace(a.flavor, Matrix.block_diag([a.gram, b.gram]))


def tensor_product(a: BilinearSpace, b: BilinearSpace) -> BilinearSpace:
    """Kronecker-product form; symmetric unless exactly one factor alternates."""
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    if a.flavor == b.flavor:
        flavor = FormFlavor.SYMMETRIC
    else:
        flavor = FormFlavor.ALTERNATING
    return BilinearSpace(flavor, a.gram.kron(b.gram))


def check_isometry(a: BilinearSpace, b: BilinearSpace, t: Matrix) -> Isometry:
    if a.ring != b.ring or t.ring != a.ring:
        raise RingMismatch("isometry data over different rings")
    if t.rows != a.rank or t.cols != b.rank:
        raise NotInvertible(
            f"witness shape {t.rows}x{t.cols} does not match ranks {a.rank},{b.rank}"
        )
    if not determinant(t).is_unit():
        raise NotInvertible("witness determinant is not a unit")
    return Isometry(a, b, t)


def lower_decompose(m: Matrix) -> Matrix:
    """Strictly lower triangular L with m = L - L^t, for alternating m."""
    if not (m.is_square() and matrix_is_alternating(m)):
        raise NotAlternating("input must be alternating")
    zero = m.ring._from_int(0)
    return Matrix(
        m.ring,
        [[m.raw(i, j) if i > j else zero for j in range(m.cols)] for i in range(m.rows)],
    )


def split_hyperbolic_gram(q: int, ring: Ring, sign: int = -1) -> Matrix:
    """Block Gram [[0, sign*I_q], [-sign*I_q, 0]]."""
    i = Matrix.identity(ring, q)
    z = Matrix.zeros(ring, q, q)
    top = Matrix.hstack([z, i.scale(ring._from_int(sign))])
    bot = Matrix.hstack([i.scale(ring._from_int(-sign)), z])
    return Matrix.vstack([top, bot])


def hyperbolic_of_rank(q_rank: int, ring: Ring = ZZ()) -> BilinearSpace:
    """The split alternating space (Q + Q*, [[0, I], [-I, 0]]) for free Q."""
    if q_rank < 0:
        raise ValueError("rank must be >= 0")
    return BilinearSpace(
        FormFlavor.ALTERNATING, split_hyperbolic_gram(q_rank, ring, sign=1)
    )


def shuffle_isometry(space: BilinearSpace) -> Isometry:
    """Certified isometry from a split space [[0, +-I],[-+I, 0]] onto the
    plane-wise standard hyperbolic space of the same rank."""
    n = space.rank
    if n % 2:
        raise NotAlternating("split space must have even rank")
    q = n // 2
    ring = space.ring
    one = ring._from_int(1)
    zero = ring._from_int(0)
    plus = space.gram == split_hyperbolic_gram(q, ring, sign=1)
    cols = []
    for k in range(q):
        if plus:
            pair = (k, q + k)
        else:
            pair = (q + k, k)
        for idx in pair:
            cols.append([one if i == idx else zero for i in range(n)])
    w = Matrix(ring, list(zip(*cols)))
    return check_isometry(space, hyperbolic(FormFlavor.ALTERNATING, q, ring), w)


def embed_into_hyperbolic(s: BilinearSpace) -> Isometry:
    """Certified isometry from diag(S, -S) onto [[0, -I],[I, 0]], where S is
    the Gram matrix of the given symplectic space.

    The witness is [[L, I],[L^t, I]] with L the strictly lower part of
    S^{-1}; composing with ``shuffle_isometry`` reaches the plane-wise
    standard hyperbolic space.
    """
    if s.flavor is not FormFlavor.ALTERNATING:
        raise NotAlternating("embedding needs an alternating space")
    s.require_unimodular()
    ring = s.ring
    sg = s.gram
    m2 = sg.rows
    sinv = inverse_if_unit(sg)
    low = lower_decompose(sinv)
    ident = Matrix.identity(ring, m2)
    witness = Matrix.vstack(
        [Matrix.hstack([low, ident]), Matrix.hstack([low.transpose(), ident])]
    )
    source = BilinearSpace(
        FormFlavor.ALTERNATING, Matrix.block_diag([sg, -sg])
    )
    target = BilinearSpace(
        FormFlavor.ALTERNATING, split_hyperbolic_gram(m2, ring, sign=-1)
    )
    return check_isometry(source, target, witness)


def standardize_symplectic(s: BilinearSpace) -> Isometry:
    """Symplectic Gram-Schmidt with unit-pivot search (row-major order).

    Always succeeds over a field on unimodular input; otherwise raises
    NoUnitPivot carrying the residual block as soon as no remaining pairing
    is a unit.
    """
    if s.flavor is not FormFlavor.ALTERNATING:
        raise NotAlternating("standardization needs an alternating space")
    ring = s.ring
    g = s.gram
    n = g.rows
    basis = [
        [ring._from_int(1) if i == k else ring._from_int(0) for i in range(n)]
        for k in range(n)
    ]

    def pairing(u, v):
        acc = ring._from_int(0)
        for i in range(n):
            if ring._is_zero(u[i]):
                continue
            for j in range(n):
                acc = ring._add(
                    acc, ring._mul(u[i], ring._mul(g.raw(i, j), v[j]))
                )
        return acc

    new_basis = []
    remaining = basis
    while remaining:
        k = len(remaining)
        pivot = None
        for i in range(k):
            for j in range(k):
                if i == j:
                    continue
                val = pairing(remaining[i], remaining[j])
                if ring._is_unit(val):
                    pivot = (i, j, val)
                    break
            if pivot:
                break
        if pivot is None:
            rows = [
                [pairing(remaining[i], remaining[j]) for j in range(k)]
                for i in range(k)
            ]
            raise NoUnitPivot(Matrix(ring, rows))
        i, j, val = pivot
        inv = ring._inv(val)
        u = remaining[i]
        v = [ring._mul(inv, x) for x in remaining[j]]
        new_basis.append(u)
        new_basis.append(v)
        rest = []
        for idx in range(k):
            if idx in (i, j):
                continue
            w = remaining[idx]
            cu = pairing(w, u)
            cv = pairing(w, v)
            # w + <w,u> v - <w,v> u is orthogonal to the new plane
            w2 = [
                ring._add(
                    wx,
                    ring._add(
                        ring._mul(cu, vx), ring._neg(ring._mul(cv, ux))
                    ),
                )
                for wx, ux, vx in zip(w, u, v)
            ]
            rest.append(w2)
        remaining = rest
    witness = Matrix(ring, list(zip(*new_basis))) if new_basis else Matrix.zeros(ring, 0, 0)
    target = hyperbolic(FormFlavor.ALTERNATING, n // 2, ring)
    return check_isometry(s, target, witness)


def _standard_tensor_pair_witness(first: FormFlavor, ring: Ring) -> Matrix:
    """4x4 change of basis turning plane (x) plane into two standard planes.

    first = ALTERNATING: H- (x) H- -> H+^2;  first = SYMMETRIC: H+ (x) H- -> H-^2.
    Basis of the Kronecker product is e1v1, e1v2, e2v1, e2v2.
    """
    one = ring._from_int(1)
    zero = ring._from_int(0)
    neg = ring._neg(one)
    if first is FormFlavor.ALTERNATING:
        cols = [
            [one, zero, zero, zero],   # e1 v1
            [zero, zero, zero, one],   # e2 v2
            [zero, one, zero, zero],   # e1 v2
            [zero, zero, neg, zero],   # -e2 v1
        ]
    else:
        cols = [
            [one, zero, zero, zero],   # e1 v1
            [zero, zero, zero, one],   # e2 v2
            [zero, zero, one, zero],   # e2 v1
            [zero, one, zero, zero],   # e1 v2
        ]
    return Matrix(ring, list(zip(*cols)))


def tensor_hyperbolic_isometry(n: int, m: int, ring: Ring = ZZ()) -> Isometry:
    """Certified isometry from H-^n (x) H-^m onto H+^(2nm), built plane-wise."""
    hn = hyperbolic(FormFlavor.ALTERNATING, n, ring)
    hm = hyperbolic(FormFlavor.ALTERNATING, m, ring)
    source = tensor_product(hn, hm)
    dim = 4 * n * m
    zero = ring._from_int(0)
    k_block = _standard_tensor_pair_witness(FormFlavor.ALTERNATING, ring)
    cols = []
    for a in range(n):
        for b in range(m):
            quad = [
                (2 * a) * 2 * m + 2 * b,
                (2 * a) * 2 * m + 2 * b + 1,
                (2 * a + 1) * 2 * m + 2 * b,
                (2 * a + 1) * 2 * m + 2 * b + 1,
            ]
            for c in range(4):
                col = [zero] * dim
                for r in range(4):
                    col[quad[r]] = k_block.raw(r, c)
                cols.append(col)
    witness = Matrix(ring, list(zip(*cols)))
    target = hyperbolic(FormFlavor.SYMMETRIC, 2 * n * m, ring)
    return check_isometry(source, target, witness)
