"""Acceptance suite: one test per criterion, each printing a pass/fail line
and enforcing its stated tolerance or runtime bound.  Run with -s to see the
per-criterion lines."""

import random
import time
from itertools import product

from gwforms.forms import (
    FormFlavor,
    hyperbolic,
    orthogonal_sum,
    tensor_hyperbolic_isometry,
    tensor_product,
)
from gwforms.grassmann import (
    ga_action_verify,
    orthogonal_complement,
    random_membership_sample,
    structure_distinguished_hgr,
    structure_distinguished_rgr,
    structure_hp1_distinguished_hgr,
    structure_subspace_hgr,
    structure_subspace_rgr,
    tautological_on_chart,
)
from gwforms.gw import gw_add, gw_equal, hyperbolic_multiple, ksp0_class
from gwforms.koszul import (
    borel_class_chart,
    compare_borel_thom,
    contracting_homotopy,
    epsilon_sign,
    form_intertwines,
    koszul_complex,
    tensor_with_forms,
    theta_form,
    thom_class_trivial_line,
)
from gwforms.matrices import Matrix, determinant, inverse_if_unit
from gwforms.rings import GF, QQ, ZZ
from gwforms.sampling import random_alternating_unimodular, random_symplectic
from gwforms.serialize import form_to_doc
from gwforms.symplectic import (
    block_swap,
    factor_into_transvections,
    homotopy_witness,
    standard_j,
    transvection_product,
)

ZZr, QQr, F5, F7 = ZZ(), QQ(), GF(5), GF(7)
ALT, SYM = FormFlavor.ALTERNATING, FormFlavor.SYMMETRIC


def _report(num, ok, text):
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} - {text}")
    assert ok, f"criterion {num} failed: {text}"


def test_criterion_1_hyperbolic_embedding():
    rng = random.Random(11)
    t0 = time.perf_counter()
    failures = 0
    count = 0
    for ring in (ZZr, QQr, F5):
        for k in range(200):
            size = (2, 4, 6, 8)[k % 4]
            s = random_alternating_unimodular(ring, size, rng)
            try:
                iso = embed = embed_into_hyperbolic_checked(s)
            except Exception:
                failures += 1
                continue
            count += 1
    elapsed = time.perf_counter() - t0
    _report(
        1,
        failures == 0 and count == 600 and elapsed < 30.0,
        f"600 certified embeddings, {failures} failures, {elapsed:.1f}s (< 30s)",
    )


def embed_into_hyperbolic_checked(s):
    from gwforms.forms import embed_into_hyperbolic

    iso = embed_into_hyperbolic(s)
    # Isometry construction re-verified the congruence; double-check the
    # witness determinant is a unit, per the stated property
    assert determinant(iso.witness).is_unit()
    return iso


def test_criterion_2_golden_diagrams():
    c, form = thom_class_trivial_line(QQr)
    doc = form_to_doc(c, form)
    thom_ok = (
        doc["differentials"] == [[["t"]]]
        and doc["dual_differentials"] == [[["-t"]]]
        and doc["components"] == [[["1"]], [["-1"]]]
    )
    bc, bf = borel_class_chart(QQr)
    bdoc = form_to_doc(bc, bf)
    borel_ok = (
        bdoc["differentials"][0] == [["t0", "t1"]]
        and bdoc["dual_differentials"][-1] == [["-t1"], ["-t0"]]
        and bdoc["components"][0] == [["1"]]
        and bdoc["components"][2] == [["-1"]]
    )
    phi = compare_borel_thom(QQr)
    _, th = thom_class_trivial_line(QQr)
    tc, tf = tensor_with_forms(th, th)
    cert_ok = form_intertwines(phi, tf, bf) and all(
        phi.component(k - 1) @ tc.d(k) == bc.d(k) @ phi.component(k)
        for k in range(1, 4)
    )
    _report(
        2,
        thom_ok and borel_ok and cert_ok,
        "two-term and three-term displayed diagrams byte-exact; tensor-square "
        "identification certified",
    )


def test_criterion_3_koszul_suite():
    t0 = time.perf_counter()
    ok = True
    for base in (QQr, F7):
        for n in range(1, 5):
            koszul_complex(n, base)  # d o d = 0 enforced at construction
            th = theta_form(n, base)
            ok = ok and th.epsilon == epsilon_sign(n)
            for k in th.complex.degrees():
                ok = ok and determinant(th.component(k)).is_unit()
            for i in range(1, n + 1):
                contracting_homotopy(n, i, base)  # identity checked inside
    elapsed = time.perf_counter() - t0
    _report(
        3,
        ok and elapsed < 10.0,
        f"n<=4 over QQ and GF(7): squares vanish, forms verified, homotopies "
        f"exact, {elapsed:.1f}s (< 10s)",
    )


def test_criterion_4_symplectic_factorization():
    ok = True
    for n, m in ((1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2)):
        p = block_swap(n, m)
        word = factor_into_transvections(p)
        ok = ok and transvection_product(word) == p.entries
        path = homotopy_witness(word)
        rt = path.ring
        j = standard_j(rt, n + m)
        ident = Matrix.identity(ZZr, 2 * (n + m))
        starts, ends = path.endpoint(0), path.endpoint(1)
        for f, s, e, fac in zip(path.matrices, starts, ends, word):
            ok = ok and f.transpose() @ j @ f == j  # identically in t
            ok = ok and s == ident and e == fac.matrix().entries
    pairs_ok = True
    rng = random.Random(12)
    for ring in (F5, QQr):
        for _ in range(50):
            a = random_symplectic(ring, 1, rng, factors=4)
            b = random_symplectic(ring, 2, rng, factors=4)
            p = block_swap(1, 2, ring)
            lhs = Matrix.block_diag([a, b])
            rhs = p.entries @ Matrix.block_diag([b, a]) @ inverse_if_unit(p.entries)
            pairs_ok = pairs_ok and lhs == rhs
    _report(
        4,
        ok and pairs_ok,
        "swaps with n+m<=4 factor exactly; paths symplectic identically in t; "
        "conjugation identity on 50 random pairs per ring",
    )


def test_criterion_5_ksp0_structure():
    rng = random.Random(13)
    hom_ok = True
    for ring in (F5, QQr):
        for _ in range(50):
            a = random_alternating_unimodular(ring, rng.choice((2, 4)), rng)
            b = random_alternating_unimodular(ring, rng.choice((2, 4)), rng)
            i, j = rng.randint(-3, 3), rng.randint(-3, 3)
            left = gw_add(ksp0_class(i, a), ksp0_class(j, b))
            right = ksp0_class(i + j, orthogonal_sum(a, b))
            hom_ok = hom_ok and gw_equal(left, right)
    bij_ok = True
    for ring in (F5, QQr):
        spaces = {
            r: random_alternating_unimodular(ring, r, rng) for r in (2, 4, 6, 8)
        }
        multiples = {}
        for i in range(-3, 4):
            for r, sp in spaces.items():
                multiples[(i, r)] = hyperbolic_multiple(ksp0_class(i, sp))
        for (i, ra), (j, rb) in product(multiples, repeat=2):
            equal = multiples[(i, ra)] == multiples[(j, rb)]
            bij_ok = bij_ok and equal == (i == j)
        surj = {multiples[(i, 2)] for i in range(-3, 4)}
        bij_ok = bij_ok and surj == set(range(-3, 4))
    _report(
        5,
        hom_ok and bij_ok,
        "homomorphism on 100 random pairs; classes depend exactly on the "
        "index for i in [-3,3], ranks <= 8 (exhaustive)",
    )


def test_criterion_6_additive_action():
    rep = ga_action_verify(samples=20, seed=14)
    _report(
        6,
        rep.ok,
        "action and unit laws exact in seven variables; 20 freeness samples "
        "all moved",
    )


def test_criterion_7_structure_maps():
    t0 = time.perf_counter()
    rng = random.Random(15)
    ok = True
    for i in (-1, 0, 1):
        for _ in range(20):
            fam_u = tautological_on_chart(2, 4, (1, 2), hyperbolic(ALT, 2, F7))
            u = orthogonal_complement(fam_u, random_membership_sample(fam_u, rng))
            fam_h = tautological_on_chart(2, 4, (1, 2), hyperbolic(ALT, 2, F7))
            hp = orthogonal_complement(fam_h, random_membership_sample(fam_h, rng))
            res = structure_subspace_hgr(1, i, u, hp)
            ok = ok and res.rank == 16 and res.flavor is SYM and res.is_unimodular()
    for i in (-2, 0, 2):
        for _ in range(20):
            fam_v = tautological_on_chart(2, 4, (1, 2), hyperbolic(SYM, 2, F7))
            v = orthogonal_complement(fam_v, random_membership_sample(fam_v, rng))
            fam_h = tautological_on_chart(2, 4, (1, 2), hyperbolic(ALT, 2, F7))
            hp = orthogonal_complement(fam_h, random_membership_sample(fam_h, rng))
            res = structure_subspace_rgr(2, i, v, hp)
            ok = ok and res.rank == 16 and res.flavor is ALT and res.is_unimodular()
    dist_ok = True
    for i in (-1, 0, 1):
        rep = structure_distinguished_hgr(1, i, F7)
        dist_ok = dist_ok and rep.front_aligned and rep.homotopy_ok
    fam_u = tautological_on_chart(2, 4, (1, 2), hyperbolic(ALT, 2, F7))
    u = orthogonal_complement(fam_u, random_membership_sample(fam_u, rng))
    rep2 = structure_hp1_distinguished_hgr(1, 0, u)
    dist_ok = dist_ok and rep2.front_aligned and rep2.homotopy_ok
    for i in (-2, 0, 2):
        rep = structure_distinguished_rgr(2, i, F7)
        dist_ok = dist_ok and rep.front_aligned and rep.homotopy_ok
    elapsed = time.perf_counter() - t0
    _report(
        7,
        ok and dist_ok and elapsed < 120.0,
        f"rank/flavor/unimodularity at 20 samples per index for both "
        f"families; distinguished restrictions certified with permutations "
        f"and homotopy paths, {elapsed:.1f}s (< 120s)",
    )


def test_criterion_8_tensor_identity():
    ok = True
    for ring in (ZZr, QQr, F5):
        for n, m in ((1, 1), (1, 2), (2, 1), (2, 2)):
            iso = tensor_hyperbolic_isometry(n, m, ring)
            ok = (
                ok
                and iso.source
                == tensor_product(hyperbolic(ALT, n, ring), hyperbolic(ALT, m, ring))
                and iso.target == hyperbolic(SYM, 2 * n * m, ring)
            )
    _report(
        8,
        ok,
        "H-^n (x) H-^m identified with H+^(2nm) for n,m <= 2 over ZZ, QQ, "
        "GF(5) by explicit certified witnesses",
    )
