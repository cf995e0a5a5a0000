"""Bounded chain complexes of free modules with duality: Koszul complexes,
their Hodge-pairing duality forms, contracting homotopies off the punctured
locus, tensor products with forms, and the three-term chart complex together
with its identification as a tensor square.

Sign conventions (pinned by the two golden diagrams and checked at
construction): the shifted dual stores reversed dual bases and negated
transposed differentials; the duality form on the exterior-power complex is
degreewise diagonal with entries (-1)^(k(k+1)/2) * shuffle-sign, and its
symmetry sign is (-1)^(n(n+1)/2).
"""

from __future__ import annotations

from itertools import combinations

from .errors import AlgebraError, NoMatchFound, RingMismatch, UnknownVariable
from .matrices import Matrix
from .rings import PolyRing, Ring, extend_with_variables, invert_variable


class ChainComplex:
    """Free modules indexed by a contiguous degree range with differentials
    d_k: degree k -> degree k-1 satisfying d o d = 0 exactly."""

    __slots__ = ("ring", "lo", "hi", "ranks", "differentials")

    def __init__(self, ring: Ring, lo: int, hi: int, ranks, differentials):
        if hi < lo:
            raise AlgebraError("empty degree range")
        self.ring = ring
        self.lo = lo
        self.hi = hi
        self.ranks = dict(ranks)
        self.differentials = dict(differentials)
        for k in range(lo, hi + 1):
            if k not in self.ranks:
                raise AlgebraError(f"missing rank in degree {k}")
        for k in range(lo + 1, hi + 1):
            d = self.differentials.get(k)
            if d is None:
                raise AlgebraError(f"missing differential in degree {k}")
            if d.ring != ring:
                raise RingMismatch("differential over wrong ring")
            if (d.rows, d.cols) != (self.ranks[k - 1], self.ranks[k]):
                raise AlgebraError(f"differential shape mismatch in degree {k}")
        for k in range(lo + 2, hi + 1):
            prod = self.differentials[k - 1] @ self.differentials[k]
            if not prod.is_zero():
                raise AlgebraError(f"d o d != 0 at degree {k}")

    def rank(self, k: int) -> int:
        return self.ranks.get(k, 0)

    def d(self, k: int) -> Matrix:
        d = self.differentials.get(k)
        if d is None:
            return Matrix.zeros(self.ring, self.rank(k - 1), self.rank(k))
        return d

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def map_ring(self, target: Ring, fn) -> "ChainComplex":
        return ChainComplex(
            target,
            self.lo,
            self.hi,
            self.ranks,
            {k: d.map_ring(target, fn) for k, d in self.differentials.items()},
        )

    def __eq__(self, other):
        return (
            isinstance(other, ChainComplex)
            and self.ring == other.ring
            and (self.lo, self.hi) == (other.lo, other.hi)
            and self.ranks == other.ranks
            and self.differentials == other.differentials
        )

    def __repr__(self):
        rk = ", ".join(str(self.ranks[k]) for k in self.degrees())
        return f"ChainComplex(deg {self.lo}..{self.hi}, ranks [{rk}])"


class ChainMap:
    """A graded map between complexes with a declared degree shift.

    Maps with shift 0 are verified to commute with the differentials at
    construction; homotopies (shift +1) skip that check and are certified by
    the identity they satisfy instead.
    """

    __slots__ = ("source", "target", "components", "shift")

    def __init__(self, source, target, components, shift=0, check=True):
        self.source = source
        self.target = target
        self.components = dict(components)
        self.shift = shift
        for k in source.degrees():
            comp = self.component(k)
            tk = k + shift
            want = (target.rank(tk), source.rank(k))
            if (comp.rows, comp.cols) != want:
                raise AlgebraError(f"component shape mismatch in degree {k}")
        if check and shift == 0:
            for k in range(source.lo + 1, source.hi + 1):
                left = self.component(k - 1) @ source.d(k)
                right = target.d(k) @ self.component(k)
                if left != right:
                    raise AlgebraError(
                        f"map does not commute with differentials at degree {k}"
                    )

    def component(self, k: int) -> Matrix:
        comp = self.components.get(k)
        if comp is None:
            return Matrix.zeros(
                self.source.ring, self.target.rank(k + self.shift), self.source.rank(k)
            )
        return comp

    def __repr__(self):
        return f"ChainMap(shift {self.shift}, deg {self.source.lo}..{self.source.hi})"


def variables_for(n: int):
    return ("t",) if n == 1 else tuple(f"t{i}" for i in range(1, n + 1))


def _subsets(n: int, k: int):
    return list(combinations(range(1, n + 1), k))


def koszul_complex(n: int, base: Ring, variables=None) -> ChainComplex:
    """Exterior-power complex on n generators over base[t_1..t_n].

    Degree k holds the rank-C(n,k) module with the lexicographic wedge
    basis; the differential contracts against the coordinate covector,
    sending a basis wedge to the signed sum of its facets scaled by the
    matching variable.
    """
    if n < 0:
        raise AlgebraError("n must be >= 0")
    names = tuple(variables) if variables is not None else variables_for(n)
    if len(names) != n:
        raise AlgebraError("need one variable per generator")
    ring = extend_with_variables(base, names) if n else base
    ranks = {}
    diffs = {}
    for k in range(n + 1):
        ranks[k] = len(_subsets(n, k))
    for k in range(1, n + 1):
        rows = {s: idx for idx, s in enumerate(_subsets(n, k - 1))}
        cols = _subsets(n, k)
        m = [[ring._from_int(0)] * len(cols) for _ in rows] if rows else []
        for cj, s in enumerate(cols):
            for j, elem in enumerate(s):
                t = tuple(x for x in s if x != elem)
                coeff = ring.monomial(names[elem - 1], 1, 1 if j % 2 == 0 else -1)
                m[rows[t]][cj] = coeff.value
        diffs[k] = Matrix(ring, m, cols=len(cols))
    if n == 0:
        return ChainComplex(ring, 0, 0, {0: 1}, {})
    return ChainComplex(ring, 0, n, ranks, diffs)


def dual_shifted(c: ChainComplex, n: int) -> ChainComplex:
    """Degree k holds the dual of degree n-k with the reversed dual basis;
    differentials are negated, 180-degree-rotated transposes."""
    lo, hi = n - c.hi, n - c.lo
    ranks = {k: c.rank(n - k) for k in range(lo, hi + 1)}
    diffs = {}
    for k in range(lo + 1, hi + 1):
        diffs[k] = (-c.d(n - k + 1).transpose()).rot180()
    return ChainComplex(c.ring, lo, hi, ranks, diffs)


def _shuffle_sign(s, k: int) -> int:
    return -1 if (sum(s) - k * (k + 1) // 2) % 2 else 1


def _degree_sign(k: int) -> int:
    return -1 if (k * (k + 1) // 2) % 2 else 1


def epsilon_sign(n: int) -> int:
    return -1 if (n * (n + 1) // 2) % 2 else 1


class DualityForm:
    """A chain isomorphism from a complex onto its shifted dual with a
    declared symmetry sign epsilon.

    Construction verifies: the map commutes with the differentials, each
    component is invertible, and the dual-transpose equals epsilon times
    the map under the biduality identification.
    """

    __slots__ = ("underlying", "shift", "epsilon")

    def __init__(self, underlying: ChainMap, shift: int, epsilon: int):
        from .matrices import determinant

        c = underlying.source
        if underlying.target != dual_shifted(c, shift):
            raise AlgebraError("form target is not the shifted dual")
        if underlying.shift != 0:
            raise AlgebraError("duality forms have shift-0 underlying maps")
        for k in c.degrees():
            comp = underlying.component(k)
            if not comp.is_square() or not determinant(comp).is_unit():
                raise AlgebraError(f"component in degree {k} is not invertible")
        for k in c.degrees():
            dt = underlying.component(shift - k).transpose().rot180()
            want = underlying.component(k).scale(c.ring._from_int(epsilon))
            if dt != want:
                raise AlgebraError(
                    f"dual-transpose differs from epsilon * form at degree {k}"
                )
        self.underlying = underlying
        self.shift = shift
        self.epsilon = epsilon

    @property
    def complex(self) -> ChainComplex:
        return self.underlying.source

    def component(self, k: int) -> Matrix:
        return self.underlying.component(k)

    def __repr__(self):
        return f"DualityForm(shift {self.shift}, epsilon {self.epsilon})"


def theta_form(n: int, base: Ring, variables=None) -> DualityForm:
    """The signed Hodge-pairing duality form on koszul_complex(n, base)."""
    c = koszul_complex(n, base, variables)
    ring = c.ring
    comps = {}
    for k in range(n + 1):
        subs = _subsets(n, k)
        g = _degree_sign(k)
        diag = [
            [
                ring._from_int(g * _shuffle_sign(s, k)) if i == j else ring._from_int(0)
                for j in range(len(subs))
            ]
            for i, s in enumerate(subs)
        ]
        comps[k] = Matrix(ring, diag, cols=len(subs))
    cm = ChainMap(c, dual_shifted(c, n), comps, shift=0)
    return DualityForm(cm, n, epsilon_sign(n))


def wedge_basis(n: int):
    """Lexicographic wedge bases per degree, recorded for serialization."""
    return {k: _subsets(n, k) for k in range(n + 1)}


def contracting_homotopy(n: int, i: int, base: Ring, variables=None) -> ChainMap:
    """Degree +1 map h with d h + h d = id over the ring with t_i inverted.

    h wedges with t_i^{-1} e_i; the identity is verified symbolically in
    every degree before the map is returned.
    """
    if not 1 <= i <= n:
        raise UnknownVariable(f"variable index {i} out of range 1..{n}")
    names = tuple(variables) if variables is not None else variables_for(n)
    plain = koszul_complex(n, base, names)
    ring = invert_variable(plain.ring, names[i - 1])
    c = plain.map_ring(ring, lambda raw: raw)
    tinv = ring.monomial(names[i - 1], -1)
    comps = {}
    for k in range(n + 1):
        rows = {s: idx for idx, s in enumerate(_subsets(n, k + 1))}
        cols = _subsets(n, k)
        if not rows:
            comps[k] = Matrix.zeros(ring, 0, len(cols))
            continue
        m = [[ring._from_int(0)] * len(cols) for _ in rows]
        for cj, s in enumerate(cols):
            if i in s:
                continue
            sign = -1 if sum(1 for x in s if x < i) % 2 else 1
            target = tuple(sorted(s + (i,)))
            m[rows[target]][cj] = (tinv * sign).value
        comps[k] = Matrix(ring, m, cols=len(cols))
    h = ChainMap(c, c, comps, shift=1, check=False)
    ident = {k: Matrix.identity(ring, c.rank(k)) for k in c.degrees()}
    for k in c.degrees():
        total = c.d(k + 1) @ h.component(k)
        if k > 0:
            total = total + h.component(k - 1) @ c.d(k)
        if total != ident[k]:
            raise AlgebraError(f"homotopy identity fails in degree {k}")
    return h


def _ring_parts(ring: Ring):
    if isinstance(ring, PolyRing):
        return ring.base, ring.variables, ring.inverted
    return ring, (), frozenset()


def _disjointify(ra: Ring, rb: Ring):
    """Combined polynomial ring for a tensor product, renaming on collision."""
    base_a, vars_a, inv_a = _ring_parts(ra)
    base_b, vars_b, inv_b = _ring_parts(rb)
    if base_a != base_b:
        raise RingMismatch(f"tensor factors over different bases: {base_a}, {base_b}")
    if set(vars_a) & set(vars_b):
        map_a = {v: v + "0" for v in vars_a}
        map_b = {v: v + "1" for v in vars_b}
    else:
        map_a = {v: v for v in vars_a}
        map_b = {v: v for v in vars_b}
    names = tuple(map_a[v] for v in vars_a) + tuple(map_b[v] for v in vars_b)
    inverted = frozenset({map_a[v] for v in inv_a} | {map_b[v] for v in inv_b})
    if not names:
        return base_a, map_a, map_b
    return PolyRing(base_a, names, inverted), map_a, map_b


def _transport(c: ChainComplex, target: Ring, mapping: dict) -> ChainComplex:
    if c.ring == target:
        return c
    if isinstance(c.ring, PolyRing):
        src = c.ring
        return c.map_ring(target, lambda raw: src.rename(raw, mapping, target))
    if isinstance(target, PolyRing) and c.ring == target.base:
        return c.map_ring(target, lambda raw: target._const(raw))
    raise RingMismatch("cannot transport complex into the combined ring")


def tensor_complex(a: ChainComplex, b: ChainComplex):
    """Tensor product with the Koszul sign d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy.

    Degree-m summands are ordered by ascending first-factor degree; within a
    summand the basis is first-factor-major.  Returns (complex, summand
    layout) where the layout lists (p, q, offset) triples per degree.
    """
    ring, map_a, map_b = _disjointify(a.ring, b.ring)
    ca = _transport(a, ring, map_a)
    cb = _transport(b, ring, map_b)
    lo, hi = ca.lo + cb.lo, ca.hi + cb.hi
    layout = {}
    ranks = {}
    for m in range(lo, hi + 1):
        entries = []
        off = 0
        for p in ca.degrees():
            q = m - p
            if q < cb.lo or q > cb.hi:
                continue
            r = ca.rank(p) * cb.rank(q)
            if r:
                entries.append((p, q, off))
            off += r
        layout[m] = entries
        ranks[m] = off
    diffs = {}
    for m in range(lo + 1, hi + 1):
        mat = Matrix.zeros(ring, ranks[m - 1], ranks[m])
        rows = [list(r) for r in mat._e]
        tgt_off = {(p, q): off for p, q, off in layout[m - 1]}
        for p, q, off in layout[m]:
            ra, rb = ca.rank(p), cb.rank(q)
            # d_a (x) id
            if (p - 1, q) in tgt_off:
                da = ca.d(p)
                o2 = tgt_off[(p - 1, q)]
                for ii in range(da.rows):
                    for jj in range(da.cols):
                        v = da.raw(ii, jj)
                        if ring._is_zero(v):
                            continue
                        for bb in range(rb):
                            rows[o2 + ii * rb + bb][off + jj * rb + bb] = v
            # (-1)^p id (x) d_b
            if (p, q - 1) in tgt_off:
                db = cb.d(q)
                o2 = tgt_off[(p, q - 1)]
                for ii in range(db.rows):
                    for jj in range(db.cols):
                        v = db.raw(ii, jj)
                        if ring._is_zero(v):
                            continue
                        if p % 2:
                            v = ring._neg(v)
                        for aa in range(ra):
                            rows[o2 + aa * db.rows + ii][off + aa * rb + jj] = v
        diffs[m] = Matrix(ring, rows, cols=ranks[m])
    cc = ChainComplex(ring, lo, hi, ranks, diffs)
    return cc, layout


def tensor_with_forms(a: DualityForm, b: DualityForm):
    """Tensor product of complexes-with-forms; the result carries the
    combined shift and the predicted symmetry sign, re-verified exactly."""
    ca, cb = a.complex, b.complex
    n1, n2 = a.shift, b.shift
    cc, layout = tensor_complex(ca, cb)
    ring = cc.ring
    _, map_a, map_b = _disjointify(ca.ring, cb.ring)
    ta = {
        k: _transport_matrix(a.component(k), ca.ring, ring, map_a)
        for k in ca.degrees()
    }
    tb = {
        k: _transport_matrix(b.component(k), cb.ring, ring, map_b)
        for k in cb.degrees()
    }
    n = n1 + n2
    comps = {}
    for m in cc.degrees():
        rows_n = cc.rank(n - m)
        cols_n = cc.rank(m)
        u = [[ring._from_int(0)] * cols_n for _ in range(rows_n)]
        dual_off = {(p, q): off for p, q, off in layout[n - m]}
        for p, q, off in layout[m]:
            r, s = n1 - p, n2 - q
            if (r, s) not in dual_off:
                raise AlgebraError("tensor form block misses its dual summand")
            o2 = dual_off[(r, s)]
            # components are stored with reversed dual rows; undo, pair, redo
            pa = _unreverse_rows(ta[p])
            pb = _unreverse_rows(tb[q])
            sign = -1 if (n1 * q) % 2 else 1
            for i2 in range(pa.rows):
                for i in range(pa.cols):
                    va = pa.raw(i2, i)
                    if ring._is_zero(va):
                        continue
                    for j2 in range(pb.rows):
                        for j in range(pb.cols):
                            vb = pb.raw(j2, j)
                            if ring._is_zero(vb):
                                continue
                            v = ring._mul(va, vb)
                            if sign < 0:
                                v = ring._neg(v)
                            u[o2 + i2 * pb.rows + j2][off + i * pb.cols + j] = v
        comps[m] = Matrix(ring, u[::-1], cols=cols_n)
    cm = ChainMap(cc, dual_shifted(cc, n), comps, shift=0)
    return cc, DualityForm(cm, n, epsilon_sign(n))


def _transport_matrix(m: Matrix, src: Ring, target: Ring, mapping: dict) -> Matrix:
    if m.ring == target:
        return m
    if isinstance(src, PolyRing):
        return m.map_ring(target, lambda raw: src.rename(raw, mapping, target))
    return m.map_ring(target, lambda raw: target._const(raw))


def _unreverse_rows(m: Matrix) -> Matrix:
    return Matrix(m.ring, m._e[::-1], cols=m.cols)


def thom_class_trivial_line(base: Ring):
    """The two-term complex multiplied by t with its rank-one duality form."""
    form = theta_form(1, base)
    return form.complex, form


def borel_class_chart(base: Ring):
    """The three-term self-dual chart complex over base[t0, t1]: top row has
    d1 = (t0, t1), the shifted dual row is (-t1, -t0), and the outer form
    components are -1 and 1."""
    form = theta_form(2, base, variables=("t0", "t1"))
    return form.complex, form


def _signed_permutations(ring: Ring, n: int):
    from itertools import permutations, product

    out = []
    for perm in permutations(range(n)):
        for signs in product((1, -1), repeat=n):
            m = [[ring._from_int(0)] * n for _ in range(n)]
            for j, (i, s) in enumerate(zip(perm, signs)):
                m[i][j] = ring._from_int(s)
            out.append(Matrix(ring, m, cols=n))
    return out


def form_intertwines(phi: ChainMap, fa: DualityForm, fb: DualityForm) -> bool:
    """Whether phi pulls the target form back to the source form."""
    n = fa.shift
    for k in fa.complex.degrees():
        lhs = fa.component(k)
        rhs = phi.component(n - k).transpose().rot180() @ fb.component(k) @ phi.component(k)
        if lhs != rhs:
            return False
    return True


def compare_borel_thom(base: Ring) -> ChainMap:
    """Explicit degreewise signed-permutation chain isomorphism from the
    tensor square of the two-term class onto the chart complex, intertwining
    the duality forms; found by exhaustive search over the sign and order
    choices in each degree."""
    _, th = thom_class_trivial_line(base)
    tensor_cc, tensor_form = tensor_with_forms(th, th)
    chart_cc, chart_form = borel_class_chart(base)
    if tensor_cc.ring != chart_cc.ring:
        raise RingMismatch("tensor square and chart complex over different rings")
    ring = tensor_cc.ring
    for p0 in _signed_permutations(ring, 1):
        for p1 in _signed_permutations(ring, 2):
            for p2 in _signed_permutations(ring, 1):
                comps = {0: p0, 1: p1, 2: p2}
                try:
                    phi = ChainMap(tensor_cc, chart_cc, comps, shift=0)
                except AlgebraError:
                    continue
                if form_intertwines(phi, tensor_form, chart_form):
                    return phi
    raise NoMatchFound("no signed permutation identifies the two forms")
