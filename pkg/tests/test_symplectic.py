import itertools
import random

import pytest

from gwforms.errors import NotSymplectic, OddSize, UnsupportedInput
from gwforms.matrices import Matrix, determinant, inverse_if_unit
from gwforms.rings import GF, QQ, ZZ, PolyRing
from gwforms.sampling import random_symplectic
from gwforms.symplectic import (
    HomotopyPath,
    SymplecticMatrix,
    Transvection,
    block_swap,
    factor_into_transvections,
    homotopy_witness,
    is_symplectic,
    plane_permutation_matrix,
    stabilize,
    standard_j,
    transvection_product,
)

ZZr, QQr, F5 = ZZ(), QQ(), GF(5)


def test_is_symplectic_contract():
    assert is_symplectic(Matrix.identity(ZZr, 2))
    assert is_symplectic(Matrix(ZZr, [[1, 1], [0, 1]]))
    assert not is_symplectic(Matrix(ZZr, [[2, 0], [0, 1]]))
    with pytest.raises(OddSize):
        is_symplectic(Matrix(ZZr, [[1]]))


def test_constructor_rejects_non_symplectic():
    with pytest.raises(NotSymplectic):
        SymplecticMatrix(Matrix(ZZr, [[2, 0], [0, 1]]))
    SymplecticMatrix(Matrix(ZZr, [[1, 3], [0, 1]]))


def test_stabilize_contract():
    a = SymplecticMatrix(Matrix.identity(ZZr, 2))
    s = stabilize(a)
    assert s.entries == Matrix(
        ZZr, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
    )
    assert stabilize(s).size == 6
    b = SymplecticMatrix(Matrix(ZZr, [[1, 2], [0, 1]]))
    assert determinant(stabilize(b).entries) == determinant(b.entries)


def test_transvections_always_symplectic_with_square_zero_nilpotent():
    rng = random.Random(0)
    for ring in (ZZr, QQr, F5):
        for _ in range(20):
            v = [ring.from_int(rng.randint(-3, 3)) for _ in range(4)]
            lam = ring.from_int(rng.randint(-2, 2))
            t = Transvection(v, lam)
            m = t.matrix().entries  # constructor verifies symplecticity
            n = t.nilpotent()
            assert (n @ n).is_zero()
            assert m == Matrix.identity(ring, 4) + n


def test_block_swap_conjugation_examples():
    p = block_swap(1, 1)
    a = Matrix(ZZr, [[1, 1], [0, 1]])
    b = Matrix(ZZr, [[1, 0], [2, 1]])
    lhs = p.entries @ Matrix.block_diag([a, b]) @ inverse_if_unit(p.entries)
    assert lhs == Matrix.block_diag([b, a])
    # plane-wise permutation action on the standard form
    assert is_symplectic(p.entries)


def test_block_swap_conjugation_fifty_random_pairs_per_ring():
    rng = random.Random(1)
    for ring in (F5, QQr):
        for _ in range(50):
            a = random_symplectic(ring, 2, rng, factors=5)
            b = random_symplectic(ring, 1, rng, factors=5)
            p = block_swap(2, 1, ring)
            lhs = Matrix.block_diag([a, b])
            rhs = p.entries @ Matrix.block_diag([b, a]) @ inverse_if_unit(p.entries)
            assert lhs == rhs


def test_factorization_examples():
    word = factor_into_transvections(block_swap(1, 1))
    assert len(word) <= 12
    assert transvection_product(word) == block_swap(1, 1).entries
    ident = SymplecticMatrix(Matrix.identity(ZZr, 4))
    assert factor_into_transvections(ident) == []
    rotation = SymplecticMatrix(Matrix(ZZr, [[0, -1], [1, 0]]))
    word = factor_into_transvections(rotation)
    assert len(word) == 3
    assert transvection_product(word) == rotation.entries


def test_factorization_exhaustive_for_small_plane_counts():
    rot = Matrix(ZZr, [[0, -1], [1, 0]])
    powers = {0: Matrix.identity(ZZr, 2), 1: rot, 2: rot @ rot, 3: rot @ rot @ rot}
    for n in (2, 3):
        for images in itertools.permutations(range(n)):
            for pw in itertools.product(range(4), repeat=n):
                m = plane_permutation_matrix(ZZr, list(images)) @ Matrix.block_diag(
                    [powers[p] for p in pw]
                )
                sp = SymplecticMatrix(m)
                word = factor_into_transvections(sp)
                if word:
                    assert transvection_product(word) == m
                else:
                    assert m == Matrix.identity(ZZr, 2 * n)


def test_factorization_rejects_general_symplectic_input():
    with pytest.raises(UnsupportedInput):
        factor_into_transvections(SymplecticMatrix(Matrix(ZZr, [[1, 1], [0, 1]])))


def test_homotopy_paths_are_polynomial_identities():
    # dense symbolic oracle: expand F^t J F over ZZ[t] and compare with J,
    # comparing every polynomial coefficient
    word = factor_into_transvections(block_swap(1, 1))
    path = homotopy_witness(word)
    rt = path.ring
    assert isinstance(rt, PolyRing) and path.parameter == "t"
    j = standard_j(rt, 2)
    for f in path.matrices:
        assert f.transpose() @ j @ f == j
    starts = path.endpoint(0)
    ends = path.endpoint(1)
    ident = Matrix.identity(ZZr, 4)
    for s, e, fac in zip(starts, ends, word):
        assert s == ident
        assert e == fac.matrix().entries
    prod = ident
    for e in ends:
        prod = prod @ e
    assert prod == block_swap(1, 1).entries


def test_homotopy_witness_single_and_empty():
    t = Transvection([ZZr.one(), ZZr.zero()], ZZr.from_int(2))
    path = homotopy_witness([t])
    rt = path.ring
    j = standard_j(rt, 1)
    f = path.matrices[0]
    assert f.transpose() @ j @ f == j
    empty = homotopy_witness([])
    assert empty.matrices == () and empty.endpoint(1) == []


def test_block_swap_factorizations_up_to_four_planes():
    for n, m in ((1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2)):
        for ring in (ZZr, F5):
            p = block_swap(n, m, ring)
            word = factor_into_transvections(p)
            assert transvection_product(word) == p.entries
