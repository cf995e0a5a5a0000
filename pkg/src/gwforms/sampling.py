"""Seeded random generators used by the test-suite and the command line:
alternating and symmetric unimodular Gram matrices, symplectic matrices as
transvection products, and plain ring elements."""

from __future__ import annotations

from fractions import Fraction

from .forms import BilinearSpace, FormFlavor, hyperbolic
from .matrices import Matrix, determinant
from .rings import GF, QQ, Ring, Zmod
from .symplectic import Transvection


def random_element(ring: Ring, rng, span: int = 4):
    if isinstance(ring, QQ):
        den = rng.randint(1, 3)
        return ring.el(Fraction(rng.randint(-span, span), den))
    if isinstance(ring, (GF, Zmod)):
        return ring.from_int(rng.randrange(ring.characteristic))
    return ring.from_int(rng.randint(-span, span))


def random_unimodular(ring: Ring, size: int, rng, shears: int = None) -> Matrix:
    """Product of random elementary row operations; determinant is a unit."""
    n = size
    shears = shears if shears is not None else 2 * n * n
    rows = [list(r) for r in Matrix.identity(ring, n)._e]
    for _ in range(shears):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        c = ring._from_int(rng.randint(-2, 2))
        rows[i] = [ring._add(x, ring._mul(c, y)) for x, y in zip(rows[i], rows[j])]
    if rng.random() < 0.5 and n:
        i, j = rng.randrange(n), rng.randrange(n)
        rows[i], rows[j] = rows[j], rows[i]
    m = Matrix(ring, rows)
    if not determinant(m).is_unit():
        return random_unimodular(ring, size, rng, shears)
    return m


def random_alternating_unimodular(ring: Ring, size: int, rng) -> BilinearSpace:
    """T^t J T for a random unimodular T; every symplectic space of even
    rank over these rings arises this way."""
    if size % 2:
        raise ValueError("alternating unimodular spaces have even rank")
    j = hyperbolic(FormFlavor.ALTERNATING, size // 2, ring).gram
    t = random_unimodular(ring, size, rng)
    return BilinearSpace(FormFlavor.ALTERNATING, t.transpose() @ j @ t)


def random_symmetric_unimodular(ring: Ring, size: int, rng, tries: int = 200):
    """Random symmetric Gram matrix with unit determinant, over a field."""
    for _ in range(tries):
        ent = [[ring.zero() for _ in range(size)] for _ in range(size)]
        for i in range(size):
            for j in range(i, size):
                x = random_element(ring, rng, span=3)
                ent[i][j] = x
                ent[j][i] = x
        m = Matrix(ring, ent)
        if determinant(m).is_unit():
            return BilinearSpace(FormFlavor.SYMMETRIC, m)
    raise ValueError(f"no unimodular symmetric sample in {tries} tries")


def random_symplectic(ring: Ring, planes: int, rng, factors: int = 8) -> Matrix:
    """Product of random transvections; exactly symplectic by construction."""
    out = Matrix.identity(ring, 2 * planes)
    for _ in range(factors):
        v = [ring.from_int(rng.randint(-2, 2)) for _ in range(2 * planes)]
        if all(x.is_zero() for x in v):
            v[rng.randrange(2 * planes)] = ring.one()
        lam = ring.from_int(rng.choice((1, -1, 2)))
        out = out @ Transvection(v, lam).matrix().entries
    return out
