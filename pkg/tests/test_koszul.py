import pytest

from gwforms.errors import AlgebraError
from gwforms.koszul import (
    ChainComplex,
    ChainMap,
    DualityForm,
    borel_class_chart,
    compare_borel_thom,
    contracting_homotopy,
    dual_shifted,
    epsilon_sign,
    form_intertwines,
    koszul_complex,
    tensor_complex,
    tensor_with_forms,
    theta_form,
    thom_class_trivial_line,
    wedge_basis,
)
from gwforms.matrices import Matrix, determinant
from gwforms.rings import GF, QQ, ZZ, PolyRing
from gwforms.serialize import form_to_doc

QQr, F7 = QQ(), GF(7)


def test_koszul_complex_displayed_matrices():
    c1 = koszul_complex(1, QQr)
    rt = c1.ring
    assert rt.variables == ("t",)
    assert c1.d(1) == Matrix(rt, [[rt.variable("t")]])
    c2 = koszul_complex(2, QQr)
    r2 = c2.ring
    t1, t2 = r2.variable("t1"), r2.variable("t2")
    assert c2.d(1) == Matrix(r2, [[t1, t2]])
    assert c2.d(2) == Matrix(r2, [[-t2], [t1]])
    assert [c2.rank(k) for k in c2.degrees()] == [1, 2, 1]
    assert wedge_basis(2) == {0: [()], 1: [(1,), (2,)], 2: [(1, 2)]}


def test_squares_to_zero_is_enforced():
    for n in range(5):
        for base in (QQr, F7):
            koszul_complex(n, base)  # constructor checks d o d = 0
    rt = PolyRing(QQr, ("t",))
    t = rt.variable("t")
    with pytest.raises(AlgebraError):
        ChainComplex(
            rt,
            0,
            2,
            {0: 1, 1: 1, 2: 1},
            {1: Matrix(rt, [[t]]), 2: Matrix(rt, [[t]])},
        )


def test_dual_shifted_contract():
    c1 = koszul_complex(1, QQr)
    d1 = dual_shifted(c1, 1)
    rt = c1.ring
    assert d1.d(1) == Matrix(rt, [[-rt.variable("t")]])
    empty = ChainComplex(QQr, 0, 0, {0: 0}, {})
    de = dual_shifted(empty, 0)
    assert de.rank(0) == 0
    c2 = koszul_complex(2, QQr)
    assert dual_shifted(dual_shifted(c2, 2), 2) == c2


def test_theta_form_displayed_signs():
    th1 = theta_form(1, QQr)
    rt = th1.complex.ring
    assert th1.component(1) == Matrix(rt, [[-1]])
    assert th1.component(0) == Matrix(rt, [[1]])
    assert th1.epsilon == -1
    th2 = theta_form(2, QQr)
    r2 = th2.complex.ring
    assert th2.component(2) == Matrix(r2, [[-1]])
    assert th2.component(1) == Matrix(r2, [[-1, 0], [0, 1]])
    assert th2.component(0) == Matrix(r2, [[1]])
    assert th2.epsilon == -1


def test_theta_form_invariants_up_to_four():
    for n in range(5):
        for base in (QQr, F7):
            th = theta_form(n, base)
            c = th.complex
            assert th.epsilon == epsilon_sign(n)
            # independent re-check of the dual-transpose symmetry
            for k in c.degrees():
                dt = th.component(n - k).transpose().rot180()
                assert dt == th.component(k).scale(c.ring._from_int(th.epsilon))
                assert determinant(th.component(k)).is_unit()
    assert [epsilon_sign(n) for n in (1, 2, 3, 4)] == [-1, -1, 1, 1]


def test_contracting_homotopy_examples_and_identity():
    h1 = contracting_homotopy(1, 1, QQr)
    ring = h1.source.ring
    assert h1.component(0) == Matrix(ring, [[ring.monomial("t", -1)]])
    h2 = contracting_homotopy(2, 1, QQr)
    r2 = h2.source.ring
    tinv = r2.monomial("t1", -1)
    assert h2.component(0) == Matrix(r2, [[tinv], [r2.zero()]])
    # h(e2) = t1^-1 e1 ^ e2 ; h(e1) = 0
    assert h2.component(1) == Matrix(r2, [[r2.zero(), tinv]])
    # independent recomputation of d h + h d = id in every degree
    for n in (1, 2, 3, 4):
        for i in range(1, n + 1):
            for base in (QQr, F7):
                h = contracting_homotopy(n, i, base)
                c = h.source
                for k in c.degrees():
                    total = c.d(k + 1) @ h.component(k)
                    if k > 0:
                        total = total + h.component(k - 1) @ c.d(k)
                    assert total == Matrix.identity(c.ring, c.rank(k))


def test_tensor_of_line_classes_matches_expected_matrices():
    _, th = thom_class_trivial_line(QQr)
    cc, form = tensor_with_forms(th, th)
    ring = cc.ring
    assert ring.variables == ("t0", "t1")
    t0, t1 = ring.variable("t0"), ring.variable("t1")
    assert cc.d(1) == Matrix(ring, [[t1, t0]])
    assert cc.d(2) == Matrix(ring, [[t0], [-t1]])
    assert form.epsilon == -1
    assert form.shift == 2


def test_tensor_unit_complex_is_identity():
    _, th = thom_class_trivial_line(QQr)
    unit_c = ChainComplex(QQr, 0, 0, {0: 1}, {})
    unit_f = DualityForm(
        ChainMap(unit_c, dual_shifted(unit_c, 0), {0: Matrix.identity(QQr, 1)}),
        0,
        1,
    )
    cc, form = tensor_with_forms(th, unit_f)
    assert cc == th.complex
    for k in cc.degrees():
        assert form.component(k) == th.component(k)


def test_tensor_associative_up_to_reassociation():
    _, th = thom_class_trivial_line(QQr)
    ab, ab_f = tensor_with_forms(th, th)
    left, left_f = tensor_with_forms(ab_f, th)
    bc, bc_f = tensor_with_forms(th, th)
    right, right_f = tensor_with_forms(th, bc_f)
    assert [left.rank(k) for k in left.degrees()] == [
        right.rank(k) for k in right.degrees()
    ]
    # align variable names factor by factor (left tags the three factors
    # t0, t1, t; right tags them t, t0, t1), then compare differentials
    # through the reassociation permutation of summand triples
    lr, rr = left.ring, right.ring
    assert set(lr.variables) == set(rr.variables)
    factor_match = {"t": "t0", "t0": "t1", "t1": "t"}
    moved = right.map_ring(lr, lambda raw: rr.rename(raw, factor_match, lr))
    perms = _reassociation_permutations()
    for m in range(1, 4):
        p_rows = _perm_matrix(lr, perms[m - 1])
        p_cols = _perm_matrix(lr, perms[m])
        assert p_rows @ left.d(m) == moved.d(m) @ p_cols


def _reassociation_permutations():
    """Positions of ((p,q),r) triples inside (p,(q,r)) layout per degree."""
    out = []
    for m in range(4):
        left_order = []
        for s in range(max(0, m - 1), min(2, m) + 1):
            for p in range(max(0, s - 1), min(1, s) + 1):
                q = s - p
                r = m - s
                if 0 <= r <= 1:
                    left_order.append((p, q, r))
        right_order = []
        for p in range(max(0, m - 2), min(1, m) + 1):
            w = m - p
            for q in range(max(0, w - 1), min(1, w) + 1):
                r = w - q
                if 0 <= r <= 1:
                    right_order.append((p, q, r))
        out.append([right_order.index(t) for t in left_order])
    return out


def _perm_matrix(ring, positions):
    n = len(positions)
    m = [[ring._from_int(0)] * n for _ in range(n)]
    for src, dst in enumerate(positions):
        m[dst][src] = ring._from_int(1)
    return Matrix(ring, m, cols=n)


def test_thom_class_trivial_line_golden():
    c, form = thom_class_trivial_line(QQr)
    doc = form_to_doc(c, form)
    assert doc["differentials"] == [[["t"]]]
    assert doc["dual_differentials"] == [[["-t"]]]
    assert doc["components"] == [[["1"]], [["-1"]]]
    for k in c.degrees():
        assert determinant(form.component(k)).is_unit()
    # restriction to the inverted variable is contractible
    contracting_homotopy(1, 1, QQr)


def test_borel_class_chart_golden():
    c, form = borel_class_chart(QQr)
    doc = form_to_doc(c, form)
    assert doc["differentials"][0] == [["t0", "t1"]]
    assert doc["dual_differentials"][-1] == [["-t1"], ["-t0"]]
    assert doc["components"][0] == [["1"]]
    assert doc["components"][2] == [["-1"]]
    assert form.epsilon == -1


def test_compare_borel_thom_certificate():
    phi = compare_borel_thom(QQr)
    ring = phi.source.ring
    swap = Matrix(ring, [[0, 1], [1, 0]])
    assert phi.component(0) == Matrix.identity(ring, 1)
    assert phi.component(1) == swap
    assert phi.component(2) == Matrix.identity(ring, 1)
    # round trip: the certificate carries the tensor square onto the chart
    _, th = thom_class_trivial_line(QQr)
    tensor_cc, tensor_form = tensor_with_forms(th, th)
    chart_cc, chart_form = borel_class_chart(QQr)
    for k in range(1, 4):
        assert phi.component(k - 1) @ tensor_cc.d(k) == chart_cc.d(k) @ phi.component(k)
    assert form_intertwines(phi, tensor_form, chart_form)


def test_koszul_over_integer_base():
    c = koszul_complex(3, ZZ())
    th = theta_form(3, ZZ())
    assert th.epsilon == 1
    assert c.rank(1) == 3 and c.rank(2) == 3
