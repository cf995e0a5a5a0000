"""Isometry classes, their formal-difference group completion, Witt-style
splitting over fields, and the index-shifted class map onto multiples of the
symplectic hyperbolic plane."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import isqrt

from .errors import (
    CharacteristicTwo,
    FlavorMismatch,
    NoUnitPivot,
    NotAField,
    OddRank,
    NotAlternating,
    RingMismatch,
    SearchExhausted,
    Undecidable,
)
from .forms import (
    BilinearSpace,
    FormFlavor,
    Isometry,
    check_isometry,
    embed_into_hyperbolic,
    hyperbolic,
    orthogonal_sum,
    shuffle_isometry,
    standardize_symplectic,
)
from .matrices import Matrix
from .rings import GF, QQ, Ring


def _require_odd_field(ring: Ring):
    if not ring.is_field:
        raise NotAField(f"{ring} is not a field")
    if ring.characteristic == 2:
        raise CharacteristicTwo("needs an odd or zero characteristic")


def _pairing(g: Matrix, u, v):
    ring = g.ring
    acc = ring._from_int(0)
    for i, ui in enumerate(u):
        if ring._is_zero(ui):
            continue
        for j, vj in enumerate(v):
            acc = ring._add(acc, ring._mul(ui, ring._mul(g.raw(i, j), vj)))
    return acc


def diagonalize_symmetric(s: BilinearSpace) -> Isometry:
    """Isometry onto a diagonal Gram matrix, over a field of odd or zero
    characteristic."""
    if s.flavor is not FormFlavor.SYMMETRIC:
        raise FlavorMismatch("diagonalization needs a symmetric space")
    _require_odd_field(s.ring)
    s.require_unimodular()
    ring = s.ring
    g = s.gram
    n = g.rows
    basis = [
        [ring._from_int(1) if i == k else ring._from_int(0) for i in range(n)]
        for k in range(n)
    ]
    done = []
    rest = basis
    while rest:
        k = len(rest)
        pick = None
        for i in range(k):
            if not ring._is_zero(_pairing(g, rest[i], rest[i])):
                pick = i
                break
        if pick is None:
            hit = None
            for i in range(k):
                for j in range(i + 1, k):
                    if not ring._is_zero(_pairing(g, rest[i], rest[j])):
                        hit = (i, j)
                        break
                if hit:
                    break
            if hit is None:
                raise NotAField("degenerate block despite unimodularity")
            i, j = hit
            rest[i] = [ring._add(a, b) for a, b in zip(rest[i], rest[j])]
            pick = i
        u = rest[pick]
        uu = _pairing(g, u, u)
        inv = ring._inv(uu) if ring._is_unit(uu) else None
        done.append(u)
        nxt = []
        for idx in range(k):
            if idx == pick:
                continue
            w = rest[idx]
            c = ring._mul(inv, _pairing(g, w, u))
            nxt.append([ring._add(wx, ring._neg(ring._mul(c, ux))) for wx, ux in zip(w, u)])
        rest = nxt
    witness = Matrix(ring, list(zip(*done))) if done else Matrix.zeros(ring, 0, 0)
    diag = witness.transpose() @ g @ witness
    target = BilinearSpace(FormFlavor.SYMMETRIC, diag)
    return check_isometry(s, target, witness)


def _diag_entries(space: BilinearSpace):
    iso = diagonalize_symmetric(space)
    g = iso.target.gram
    return iso, [g.entry(i, i) for i in range(g.rows)]


def _fraction_is_square(q: Fraction):
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _gf_sqrt(ring: GF, a: int):
    for x in range(1, ring.p):
        if (x * x - a) % ring.p == 0:
            return x
    return None


def isotropic_vector(space: BilinearSpace, bound: int = 50):
    """A nonzero v with v^t G v = 0, or None if the space is certified
    anisotropic; raises SearchExhausted when the rational search hits the
    height bound without a verdict."""
    ring = space.ring
    g = space.gram
    n = g.rows
    if n == 0:
        return None
    if isinstance(ring, GF):
        p = ring.p
        for first in range(n):
            prefix = [0] * first + [1]
            for tail in product(range(p), repeat=n - first - 1):
                v = [ring._from_int(x) for x in prefix + list(tail)]
                if ring._is_zero(_pairing(g, v, v)):
                    return [ring.el(x) for x in v]
        return None
    if isinstance(ring, QQ):
        iso, diag = _diag_entries(space)
        signs = {x.value > 0 for x in diag}
        if len(signs) == 1:
            return None  # definite, hence anisotropic
        # exact test on two-entry subforms first
        for i in range(n):
            for j in range(i + 1, n):
                ratio = -diag[i].value / diag[j].value
                root = _fraction_is_square(ratio)
                if root is not None:
                    vd = [Fraction(0)] * n
                    vd[i] = Fraction(1)
                    vd[j] = root
                    col = Matrix(ring, [[x] for x in vd])
                    v = iso.witness @ col
                    return [v.entry(r, 0) for r in range(n)]
        if n == 2:
            return None  # the pair test is exact in rank 2
        for h in range(1, bound + 1):
            for tail in product(range(-h, h + 1), repeat=n):
                if max(abs(x) for x in tail) != h:
                    continue
                vd = [Fraction(x) for x in tail]
                val = sum(d.value * x * x for d, x in zip(diag, vd))
                if val == 0:
                    col = Matrix(ring, [[x] for x in vd])
                    v = iso.witness @ col
                    return [v.entry(r, 0) for r in range(n)]
        raise SearchExhausted(bound)
    raise NotAField(f"isotropic search unsupported over {ring}")


@dataclass
class WittDecomposition:
    hyperbolic_count: int
    anisotropic: BilinearSpace
    witness: Isometry


def witt_decompose(s: BilinearSpace, bound: int = 50) -> WittDecomposition:
    """Greedy splitting of symmetric hyperbolic planes over F_p (p odd) or
    the rationals; the witness maps the input onto hyperbolic(Symmetric, h)
    orthogonal to the anisotropic residue."""
    if s.flavor is not FormFlavor.SYMMETRIC:
        raise FlavorMismatch("Witt decomposition needs a symmetric space")
    _require_odd_field(s.ring)
    s.require_unimodular()
    ring = s.ring
    g = s.gram
    n = g.rows
    half = ring._inv(ring._from_int(2))
    basis = [
        [ring._from_int(1) if i == k else ring._from_int(0) for i in range(n)]
        for k in range(n)
    ]
    pairs = []
    rest = basis
    while rest:
        sub_g = Matrix(
            ring, [[_pairing(g, u, v) for v in rest] for u in rest]
        )
        sub = BilinearSpace(FormFlavor.SYMMETRIC, sub_g)
        viso = isotropic_vector(sub, bound)
        if viso is None:
            break
        # transport relative coordinates back to ambient coordinates
        v = [ring._from_int(0)] * n
        for coef, b in zip(viso, rest):
            for i in range(n):
                v[i] = ring._add(v[i], ring._mul(coef.value, b[i]))
        w = None
        for b in rest:
            val = _pairing(g, v, b)
            if ring._is_unit(val):
                inv = ring._inv(val)
                w = [ring._mul(inv, x) for x in b]
                break
        if w is None:
            raise NotAField("isotropic vector pairs with nothing; not unimodular")
        c = ring._mul(half, _pairing(g, w, w))
        w = [ring._add(wx, ring._neg(ring._mul(c, vx))) for wx, vx in zip(w, v)]
        pairs.append((v, w))
        nxt = []
        for b in rest:
            cb_w = _pairing(g, b, w)
            cb_v = _pairing(g, b, v)
            b2 = [
                ring._add(
                    bx,
                    ring._neg(
                        ring._add(ring._mul(cb_w, vx), ring._mul(cb_v, wx))
                    ),
                )
                for bx, vx, wx in zip(b, v, w)
            ]
            if any(not ring._is_zero(x) for x in b2):
                nxt.append(b2)
        if len(nxt) != len(rest) - 2:
            nxt = _independent_subset(ring, nxt, len(rest) - 2)
        rest = nxt
    cols = []
    for v, w in pairs:
        cols.append(v)
        cols.append(w)
    cols.extend(rest)
    witness = Matrix(ring, list(zip(*cols))) if cols else Matrix.zeros(ring, 0, 0)
    final = witness.transpose() @ g @ witness
    h = len(pairs)
    anis_g = final.submatrix(range(2 * h, n), range(2 * h, n))
    anis = BilinearSpace(FormFlavor.SYMMETRIC, anis_g)
    target = orthogonal_sum(hyperbolic(FormFlavor.SYMMETRIC, h, ring), anis)
    iso = check_isometry(s, target, witness)
    return WittDecomposition(h, anis, iso)


def _independent_subset(ring, vectors, want):
    """Select a maximal independent subset by elimination over a field."""
    out = []
    rows = []
    for v in vectors:
        cand = list(v)
        for r in rows:
            lead = next((i for i, x in enumerate(r) if not ring._is_zero(x)), None)
            if lead is not None and not ring._is_zero(cand[lead]):
                c = ring._mul(cand[lead], ring._inv(r[lead]))
                cand = [
                    ring._add(x, ring._neg(ring._mul(c, y)))
                    for x, y in zip(cand, r)
                ]
        if any(not ring._is_zero(x) for x in cand):
            rows.append(cand)
            out.append(v)
        if len(out) == want:
            break
    if len(out) != want:
        raise NotAField("could not complete an independent residual basis")
    return out


def _gf_nonresidue(ring: GF) -> int:
    for x in range(2, ring.p):
        if _gf_sqrt(ring, x) is None:
            return x
    raise NotAField("no quadratic nonresidue found")


def canonical_symmetric_gf(s: BilinearSpace) -> Isometry:
    """Isometry onto diag(1, ..., 1, d) with d in {1, least nonresidue};
    rank and the class of d classify symmetric spaces over odd prime fields."""
    ring = s.ring
    if not isinstance(ring, GF):
        raise NotAField("canonical form implemented over prime fields")
    iso, diag = _diag_entries(s)
    n = len(diag)
    g = iso.target.gram
    witness = iso.witness
    vals = [x.value for x in diag]
    basis = Matrix.identity(ring, n)
    cols = [list(basis.column(j)) for j in range(n)]
    cols = [[x.value for x in col] for col in cols]
    p = ring.p
    for i in range(n - 1):
        a, b = vals[i], vals[i + 1]
        found = None
        for x in range(p):
            for y in range(p):
                if (a * x * x + b * y * y - 1) % p == 0:
                    found = (x, y)
                    break
            if found:
                break
        x, y = found
        u = [(x * cols[i][r] + y * cols[i + 1][r]) % p for r in range(n)]
        w = [((-b * y) * cols[i][r] + (a * x) * cols[i + 1][r]) % p for r in range(n)]
        cols[i], cols[i + 1] = u, w
        vals[i], vals[i + 1] = 1, (a * b) % p
    d = vals[-1] if n else 1
    if n and _gf_sqrt(ring, d) is not None:
        root = _gf_sqrt(ring, pow(d, -1, p))
        cols[-1] = [(root * x) % p for x in cols[-1]]
        vals[-1] = 1
    elif n:
        srep = _gf_nonresidue(ring)
        root = _gf_sqrt(ring, (srep * pow(d, -1, p)) % p)
        cols[-1] = [(root * x) % p for x in cols[-1]]
        vals[-1] = srep
    w2 = Matrix(ring, list(zip(*cols))) if cols else Matrix.zeros(ring, 0, 0)
    step = check_isometry(
        iso.target,
        BilinearSpace(FormFlavor.SYMMETRIC, w2.transpose() @ g @ w2),
        w2,
    )
    return iso.compose(step)


@dataclass
class Decision:
    status: str  # "equal" | "distinct" | "unknown"
    witness: Isometry | None = None

    @property
    def certified_equal(self):
        return self.status == "equal"

    @property
    def certified_distinct(self):
        return self.status == "distinct"


def decide_isometry(a: BilinearSpace, b: BilinearSpace, bound: int = 50) -> Decision:
    """Ring-gated three-valued isometry decision with certificates."""
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    if a.flavor != b.flavor or a.rank != b.rank:
        return Decision("distinct")
    if a == b:
        return Decision("equal", check_isometry(a, b, Matrix.identity(a.ring, a.rank)))
    ring = a.ring
    if a.flavor is FormFlavor.ALTERNATING:
        try:
            ia = standardize_symplectic(a)
            ib = standardize_symplectic(b)
            return Decision("equal", ia.compose(ib.inverse()))
        except NoUnitPivot:
            return Decision("unknown")
    if ring.is_field and ring.characteristic != 2:
        if isinstance(ring, GF):
            ca = canonical_symmetric_gf(a)
            cb = canonical_symmetric_gf(b)
            if ca.target == cb.target:
                return Decision("equal", ca.compose(cb.inverse()))
            return Decision("distinct")
        if isinstance(ring, QQ):
            return _decide_symmetric_qq(a, b, bound)
    return Decision("unknown")


def _signature(diag):
    pos = sum(1 for x in diag if x.value > 0)
    return pos, len(diag) - pos


def _squarefree(q: Fraction) -> int:
    n = q.numerator * q.denominator
    out = 1
    d = 2
    m = abs(n)
    while d * d <= m:
        while m % (d * d) == 0:
            m //= d * d
        if m % d == 0:
            out *= d
            m //= d
        d += 1
    out *= m
    return out if n > 0 else -out


def _decide_symmetric_qq(a, b, bound):
    ia, da = _diag_entries(a)
    ib, db = _diag_entries(b)
    if _signature(da) != _signature(db):
        return Decision("distinct")
    disc_a = _squarefree(Fraction(1) * _prod(x.value for x in da))
    disc_b = _squarefree(Fraction(1) * _prod(x.value for x in db))
    if disc_a != disc_b:
        return Decision("distinct")
    try:
        wa = witt_decompose(a, bound)
        wb = witt_decompose(b, bound)
    except SearchExhausted:
        return Decision("unknown")
    if wa.hyperbolic_count != wb.hyperbolic_count:
        # equal rank + signature makes counts agree over QQ; treat defensively
        return Decision("unknown")
    ra = wa.anisotropic.rank
    if ra == 0:
        return Decision("equal", wa.witness.compose(wb.witness.inverse()))
    inner = None
    if ra == 1:
        qa = wa.anisotropic.gram.entry(0, 0).value
        qb = wb.anisotropic.gram.entry(0, 0).value
        root = _fraction_is_square(qa / qb)
        if root is None:
            return Decision("distinct")
        scale = Matrix(a.ring, [[1 / root]])
        inner = check_isometry(wa.anisotropic, wb.anisotropic, scale)
    else:
        deca = _diag_entries(wa.anisotropic)
        decb = _diag_entries(wb.anisotropic)
        perm = _match_by_squares(deca[1], decb[1])
        if perm is not None:
            w = _square_perm_witness(a.ring, deca[1], decb[1], perm)
            step = check_isometry(deca[0].target, decb[0].target, w)
            inner = deca[0].compose(step).compose(decb[0].inverse())
    if inner is None:
        return Decision("unknown")
    mid = check_isometry(
        wa.witness.target, wb.witness.target, _sum_isometry(wa, inner)
    )
    return Decision("equal", wa.witness.compose(mid).compose(wb.witness.inverse()))


def _prod(it):
    out = Fraction(1)
    for x in it:
        out *= x
    return out


def _match_by_squares(da, db):
    used = set()
    perm = []
    for x in da:
        hit = None
        for j, y in enumerate(db):
            if j in used:
                continue
            if _fraction_is_square(x.value / y.value) is not None:
                hit = j
                break
        if hit is None:
            return None
        used.add(hit)
        perm.append(hit)
    return perm


def _square_perm_witness(ring, da, db, perm):
    n = len(da)
    m = [[Fraction(0)] * n for _ in range(n)]
    for i, j in enumerate(perm):
        root = _fraction_is_square(da[i].value / db[j].value)
        m[i][j] = 1 / root
    return Matrix(ring, m)


def _sum_isometry(w: WittDecomposition, inner: Isometry) -> Matrix:
    h = w.hyperbolic_count
    ring = inner.witness.ring
    return Matrix.block_diag([Matrix.identity(ring, 2 * h), inner.witness])


class IsometryClass:
    """An isometry class carried by a chosen representative.

    Equality is decided by the module's equivalence procedure: two classes
    compare equal exactly when a certified isometry between their
    representatives is found."""

    __slots__ = ("representative", "normalization")

    def __init__(self, representative: BilinearSpace, normalization: str = "raw"):
        self.representative = representative
        self.normalization = normalization

    @property
    def rank(self):
        return self.representative.rank

    def __eq__(self, other):
        if not isinstance(other, IsometryClass):
            return NotImplemented
        if self.representative.ring != other.representative.ring:
            return False
        return decide_isometry(
            self.representative, other.representative
        ).certified_equal

    def __hash__(self):
        return hash(
            (
                self.representative.ring,
                self.representative.flavor,
                self.representative.rank,
            )
        )

    def __repr__(self):
        return f"IsometryClass(rank {self.rank}, {self.normalization})"


class GWClass:
    """A formal difference of isometry classes; construction cancels any
    class certified to appear on both sides."""

    __slots__ = ("ring", "flavor", "plus", "minus")

    def __init__(self, ring, flavor, plus=(), minus=()):
        plus = list(plus)
        minus = list(minus)
        for c in plus + minus:
            sp = c.representative
            if sp.ring != ring:
                raise RingMismatch("class over the wrong ring")
            if sp.flavor != flavor:
                raise FlavorMismatch("class of the wrong flavor")
        i = 0
        while i < len(plus):
            cancelled = False
            for j, m in enumerate(minus):
                d = decide_isometry(plus[i].representative, m.representative)
                if d.certified_equal:
                    plus.pop(i)
                    minus.pop(j)
                    cancelled = True
                    break
            if not cancelled:
                i += 1
        self.ring = ring
        self.flavor = flavor
        self.plus = tuple(plus)
        self.minus = tuple(minus)

    def is_formally_zero(self):
        return not self.plus and not self.minus

    def __repr__(self):
        return f"GWClass(+{[c.rank for c in self.plus]}, -{[c.rank for c in self.minus]})"


def gw_add(x: GWClass, y: GWClass) -> GWClass:
    if x.ring != y.ring:
        raise RingMismatch("classes over different rings")
    if x.flavor != y.flavor:
        raise FlavorMismatch("classes of different flavors")
    return GWClass(x.ring, x.flavor, x.plus + y.plus, x.minus + y.minus)


def gw_negate(x: GWClass) -> GWClass:
    return GWClass(x.ring, x.flavor, x.minus, x.plus)


def hyperbolic_complement(b: BilinearSpace) -> tuple:
    """C with b + C certified isometric to H-^rank(b): C is -b, and the
    certificate chains the split embedding with the shuffle onto the
    plane-wise standard space."""
    emb = embed_into_hyperbolic(b)
    shuf = shuffle_isometry(emb.target)
    return b.negate(), emb.compose(shuf)


def gw_normalize(x: GWClass) -> GWClass:
    """Rewrite as [single sum] - k[H-] using certified hyperbolic
    complements, then collapse over fields to a net hyperbolic count."""
    if x.flavor is not FormFlavor.ALTERNATING:
        return x
    ring = x.ring
    h1 = hyperbolic(FormFlavor.ALTERNATING, 1, ring)
    plus_spaces = [c.representative for c in x.plus]
    hyper_count = 0
    for c in x.minus:
        b = c.representative
        d = decide_isometry(b, hyperbolic(FormFlavor.ALTERNATING, b.rank // 2, ring))
        if d.certified_equal:
            hyper_count += b.rank // 2
            continue
        comp, _cert = hyperbolic_complement(b)
        plus_spaces.append(comp)
        hyper_count += b.rank
    plus_out = []
    for sp in plus_spaces:
        try:
            standardize_symplectic(sp)
            hyper_count -= sp.rank // 2
        except NoUnitPivot:
            plus_out.append(IsometryClass(sp, "raw"))
    if hyper_count > 0:
        minus = tuple(IsometryClass(h1, "hyperbolic") for _ in range(hyper_count))
        return GWClass(ring, x.flavor, tuple(plus_out), minus)
    plus = tuple(plus_out) + tuple(
        IsometryClass(h1, "hyperbolic") for _ in range(-hyper_count)
    )
    return GWClass(ring, x.flavor, plus, ())


def hyperbolic_multiple(x: GWClass) -> int:
    """The integer m with x = m[H-]; defined for alternating classes whose
    members all standardize (always over fields)."""
    if x.flavor is not FormFlavor.ALTERNATING:
        raise FlavorMismatch("hyperbolic multiples are for alternating classes")
    n = gw_normalize(x)
    if n.plus and any(c.normalization != "hyperbolic" for c in n.plus):
        raise Undecidable("class does not reduce to hyperbolic multiples")
    return sum(c.rank // 2 for c in n.plus) - sum(c.rank // 2 for c in n.minus)


def gw_equal(x: GWClass, y: GWClass) -> bool:
    if x.flavor is FormFlavor.ALTERNATING:
        try:
            return hyperbolic_multiple(x) == hyperbolic_multiple(y)
        except Undecidable:
            pass
    diff = gw_add(x, gw_negate(y))
    if diff.is_formally_zero():
        return True
    raise Undecidable("no certificate decides equality of the classes")


def ksp0_class(i: int, a: BilinearSpace) -> GWClass:
    """The formal difference [a] - (rank/2 - i)[H-], normalized."""
    if a.flavor is not FormFlavor.ALTERNATING:
        raise NotAlternating("class map needs an alternating space")
    if a.rank % 2:
        raise OddRank(f"rank {a.rank} is odd")
    a.require_unimodular()
    ring = a.ring
    k = a.rank // 2 - i
    h1 = hyperbolic(FormFlavor.ALTERNATING, 1, ring)
    plus = [IsometryClass(a)]
    minus = []
    if k >= 0:
        minus = [IsometryClass(h1, "hyperbolic") for _ in range(k)]
    else:
        plus += [IsometryClass(h1, "hyperbolic") for _ in range(-k)]
    return gw_normalize(GWClass(ring, FormFlavor.ALTERNATING, plus, minus))


def stable_isometry_test(a: BilinearSpace, b: BilinearSpace, max_stab: int) -> bool:
    """Whether a + H^p and b + H^p are certified isometric for some
    p <= max_stab; over fields the answer is exact."""
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    if a.flavor != b.flavor:
        raise FlavorMismatch(f"{a.flavor} vs {b.flavor}")
    ring = a.ring
    if ring.is_field:
        if a.flavor is FormFlavor.ALTERNATING:
            return a.rank == b.rank
        d = decide_isometry(a, b)
        if d.status == "unknown":
            raise Undecidable("field invariants exhausted without a certificate")
        return d.certified_equal
    if a.rank != b.rank:
        return False
    flat = FormFlavor.ALTERNATING
    for p in range(max_stab + 1):
        h = hyperbolic(
            a.flavor if a.flavor is flat else FormFlavor.SYMMETRIC, p, ring
        )
        d = decide_isometry(orthogonal_sum(a, h), orthogonal_sum(b, h))
        if d.certified_equal:
            return True
    raise Undecidable(f"no certificate up to stabilization {max_stab}")
