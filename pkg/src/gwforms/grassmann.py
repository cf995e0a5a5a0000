"""Affine-chart geometry of Grassmannians carrying a bilinear form: chart
tautological families with restricted forms, membership loci, orthogonal
complements at samples, the additive-group action on the punctured
quaternionic line, and the desk-scale structure-map subspaces with their
distinguished-point certificates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AlgebraError,
    BadPivot,
    NotAField,
    NotInMembershipLocus,
    RingMismatch,
    UnsupportedScale,
)
from .forms import (
    BilinearSpace,
    FormFlavor,
    Isometry,
    check_isometry,
    hyperbolic,
    orthogonal_sum,
    standardize_symplectic,
    _standard_tensor_pair_witness,
)
from .matrices import Matrix, determinant, inverse_if_unit, substitute_matrix
from .rings import PolyRing, Ring, extend_with_variables
from .symplectic import (
    SymplecticMatrix,
    factor_into_transvections,
    homotopy_witness,
    plane_permutation_matrix,
    transvection_product,
)


@dataclass(frozen=True)
class Chart:
    """Affine chart of the Grassmannian of r-subspaces of an n-space: the
    pivot rows of the basis matrix form the identity and every other row is
    a free coordinate."""

    r: int
    n: int
    pivots: tuple
    ring: PolyRing

    @property
    def variables(self):
        return self.ring.variables


@dataclass(frozen=True)
class TautologicalFamily:
    chart: Chart
    basis: Matrix
    ambient: BilinearSpace

    def restricted_gram(self) -> Matrix:
        amb = self.ambient.gram.map_ring(
            self.chart.ring, lambda raw: self.chart.ring._const(raw)
        )
        return self.basis.transpose() @ amb @ self.basis


@dataclass(frozen=True)
class PointSample:
    chart: Chart
    assignment: dict

    def raw_assignment(self):
        out = {}
        for v in self.chart.variables:
            if v not in self.assignment:
                raise AlgebraError(f"sample misses variable {v!r}")
            out[v] = self.assignment[v]
        return out


def chart_variables(r: int, n: int):
    return tuple(f"x{i}{j}" for i in range(1, n - r + 1) for j in range(1, r + 1))


def tautological_on_chart(
    r: int, n: int, pivot, ambient: BilinearSpace
) -> TautologicalFamily:
    """Family of r-subspaces with identity in the pivot rows and free
    coordinates elsewhere, inside the given rank-n ambient space."""
    pivots = tuple(sorted(pivot))
    if len(pivots) != r or any(p < 1 or p > n for p in pivots) or len(set(pivots)) != r:
        raise BadPivot(f"pivot set {pivot} invalid for ({r},{n})")
    if ambient.rank != n:
        raise BadPivot(f"ambient rank {ambient.rank} != {n}")
    ring = extend_with_variables(ambient.ring, chart_variables(r, n))
    chart = Chart(r, n, pivots, ring)
    rows = []
    free_row = 0
    for i in range(1, n + 1):
        if i in pivots:
            k = pivots.index(i)
            rows.append(
                [ring._from_int(1 if j == k else 0) for j in range(r)]
            )
        else:
            free_row += 1
            rows.append(
                [ring.monomial(f"x{free_row}{j + 1}", 1).value for j in range(r)]
            )
    return TautologicalFamily(chart, Matrix(ring, rows, cols=r), ambient)


def evaluate_family(family: TautologicalFamily, sample: PointSample):
    """Evaluated basis and restricted Gram of the family at the sample."""
    if sample.chart != family.chart:
        raise AlgebraError("sample belongs to a different chart")
    assign = sample.raw_assignment()
    basis = substitute_matrix(family.basis, assign)
    g = family.ambient.gram
    gram = basis.transpose() @ g @ basis
    return basis, gram


def form_membership(family: TautologicalFamily, sample: PointSample) -> bool:
    """Whether the restricted form is unimodular at the sample."""
    _, gram = evaluate_family(family, sample)
    return determinant(gram).is_unit()


@dataclass
class SampledSubbundle:
    """A subbundle evaluated at a membership sample, with its orthogonal
    complement and the certified splitting of the ambient space."""

    ambient: BilinearSpace
    basis: Matrix
    space: BilinearSpace
    comp_basis: Matrix
    comp_space: BilinearSpace
    to_ambient: Isometry


def orthogonal_complement(
    family: TautologicalFamily, sample: PointSample
) -> SampledSubbundle:
    """Basis of the complement via the projector I - B (B^t G B)^{-1} B^t G,
    with a certified isometry from sub + complement onto the ambient."""
    basis, gram = evaluate_family(family, sample)
    if not determinant(gram).is_unit():
        raise NotInMembershipLocus("restricted form degenerates at the sample")
    return _complement_of(family.ambient, basis, gram)


def _complement_of(ambient: BilinearSpace, basis: Matrix, gram: Matrix):
    ring = ambient.ring
    if not ring.is_field:
        raise NotAField("complements are computed at field samples")
    g = ambient.gram
    n = ambient.rank
    proj = basis @ inverse_if_unit(gram) @ basis.transpose() @ g
    cmpl = Matrix.identity(ring, n) - proj
    comp_cols = _independent_columns(cmpl, n - basis.cols)
    comp_basis = Matrix(ring, list(zip(*comp_cols)), cols=len(comp_cols))
    cross = basis.transpose() @ g @ comp_basis
    if not cross.is_zero():
        raise AlgebraError("complement is not orthogonal to the subbundle")
    comp_gram = comp_basis.transpose() @ g @ comp_basis
    sub_space = BilinearSpace(ambient.flavor, gram)
    comp_space = BilinearSpace(ambient.flavor, comp_gram)
    witness = Matrix.hstack([basis, comp_basis])
    split = check_isometry(ambient, orthogonal_sum(sub_space, comp_space), witness)
    return SampledSubbundle(
        ambient, basis, sub_space, comp_basis, comp_space, split.inverse()
    )


def _independent_columns(m: Matrix, want: int):
    ring = m.ring
    cols = []
    echelon = []
    for j in range(m.cols):
        cand = [m.raw(i, j) for i in range(m.rows)]
        red = list(cand)
        for r in echelon:
            lead = next(i for i, x in enumerate(r) if not ring._is_zero(x))
            if not ring._is_zero(red[lead]):
                c = ring._mul(red[lead], ring._inv(r[lead]))
                red = [
                    ring._add(x, ring._neg(ring._mul(c, y)))
                    for x, y in zip(red, r)
                ]
        if any(not ring._is_zero(x) for x in red):
            echelon.append(red)
            cols.append(cand)
        if len(cols) == want:
            return cols
    raise AlgebraError(f"found only {len(cols)} of {want} independent columns")


# ---------------------------------------------------------------------------
# additive-group action on the punctured chart


@dataclass
class GAReport:
    unit_law: bool
    composition_law: bool
    pairing_invariance: bool
    stabilizer_shape: bool
    freeness_samples: int
    freeness_failures: int

    @property
    def ok(self):
        return (
            self.unit_law
            and self.composition_law
            and self.pairing_invariance
            and self.stabilizer_shape
            and self.freeness_failures == 0
        )


def _ga_phi(a1, a2, b1, b2):
    return a1 * b2 - a2 * b1


def _ga_act(t, point):
    a1, a2, b1, b2, r = point
    one = t.ring.one()
    phi = _ga_phi(a1, a2, b1, b2)
    return (a1, a2, b1 + t * a1, b2 + t * a2, r + t * (one - phi))


def ga_action_verify(base: Ring = None, samples: int = 20, seed: int = 0) -> GAReport:
    """Exact polynomial verification of the action laws
    t.(a, b, r) = (a, b + t a, r + t(1 - phi(a, b))) in seven variables,
    plus spot checks that points off the degenerate locus are moved."""
    from .rings import QQ

    base = base or QQ()
    ring = extend_with_variables(base, ("a1", "a2", "b1", "b2", "r", "s", "t"))
    a1, a2, b1, b2, r, s, t = (ring.variable(v) for v in ring.variables)
    x = (a1, a2, b1, b2, r)
    zero = ring.zero()
    unit_law = _ga_act(zero, x) == x
    left = _ga_act(s, _ga_act(t, x))
    right = _ga_act(s + t, x)
    composition_law = left == right
    moved = _ga_act(t, x)
    pairing_invariance = _ga_phi(moved[0], moved[1], moved[2], moved[3]) == _ga_phi(
        a1, a2, b1, b2
    )
    # the displacement is exactly (0, 0, t a1, t a2, t(1 - phi)), so a fixed
    # point forces t a = 0 and t(1 - phi(a, b)) = 0
    phi0 = _ga_phi(a1, a2, b1, b2)
    displacement = tuple(m - y for m, y in zip(moved, x))
    stabilizer_shape = displacement == (
        ring.zero(),
        ring.zero(),
        t * a1,
        t * a2,
        t * (ring.one() - phi0),
    )
    import random

    rng = random.Random(seed)
    failures = 0
    tried = 0
    while tried < samples:
        vals = {v: base.from_int(rng.randint(-5, 5)) for v in ring.variables}
        tval = vals["t"]
        if tval.is_zero():
            continue
        phi = vals["a1"] * vals["b2"] - vals["a2"] * vals["b1"]
        degenerate = (
            vals["a1"].is_zero()
            and vals["a2"].is_zero()
            and (phi - base.one()).is_zero()
        )
        if degenerate:
            continue
        tried += 1
        pt = tuple(vals[v] for v in ("a1", "a2", "b1", "b2", "r"))
        out = _num_act(base, vals["t"], pt)
        if out == pt:
            failures += 1
    return GAReport(
        unit_law,
        composition_law,
        pairing_invariance,
        stabilizer_shape,
        tried,
        failures,
    )


def _num_act(base, t, point):
    a1, a2, b1, b2, r = point
    phi = a1 * b2 - a2 * b1
    return (a1, a2, b1 + t * a1, b2 + t * a2, r + t * (base.one() - phi))


# ---------------------------------------------------------------------------
# structure-map subspaces


@dataclass
class StructureResult:
    ambient: BilinearSpace
    basis: Matrix
    space: BilinearSpace
    to_hyperbolic: Isometry
    group_ranks: tuple
    index: int
    scale: int
    family: str

    @property
    def rank(self):
        return self.space.rank

    @property
    def flavor(self):
        return self.space.flavor

    def is_unimodular(self):
        return self.space.is_unimodular()


def _prefix_embedding(ring, total, take):
    m = Matrix.zeros(ring, total, take)
    rows = [list(r) for r in m._e]
    one = ring._from_int(1)
    for j in range(take):
        rows[j][j] = one
    return Matrix(ring, rows, cols=take)


def _group_plane_witness(second_space: BilinearSpace, first_flavor: FormFlavor):
    """Witness turning plane (x) second_space into two standard planes."""
    ring = second_space.ring
    t = standardize_symplectic(second_space).witness
    k = _standard_tensor_pair_witness(first_flavor, ring)
    return Matrix.identity(ring, 2).kron(t) @ k


def _group_ambient_witness(
    first_planes: int,
    second_space: BilinearSpace,
    first_flavor: FormFlavor,
    adapt: Matrix = None,
):
    """Isometry witness from planes (x) second_space onto standard planes,
    optionally pre-composed with an adapted first-factor decomposition."""
    ring = second_space.ring
    w = Matrix.block_diag([_group_plane_witness(second_space, first_flavor)] * first_planes)
    if adapt is not None:
        w = adapt.kron(Matrix.identity(ring, 2)) @ w
    return w


def structure_subspace_hgr(
    n: int,
    i: int,
    u: SampledSubbundle,
    hp1: SampledSubbundle,
    max_scale: int = 2,
    adapt: bool = False,
) -> StructureResult:
    """The rank-16n symmetric subspace of the rank-32n ambient built from the
    four tensor summands, certified unimodular, with a plane-wise isometry of
    the ambient onto the standard symmetric hyperbolic space."""
    if n < 1 or n > max_scale:
        raise UnsupportedScale(f"scale n={n} outside 1..{max_scale}")
    if not -n <= i <= n:
        raise AlgebraError(f"index i={i} outside [-{n},{n}]")
    ring = u.ambient.ring
    if hp1.ambient.ring != ring:
        raise RingMismatch("samples over different rings")
    if u.ambient != hyperbolic(FormFlavor.ALTERNATING, 2 * n, ring):
        raise AlgebraError("first sample must live in the rank-4n split space")
    if hp1.ambient != hyperbolic(FormFlavor.ALTERNATING, 2, ring):
        raise AlgebraError("second sample must live in the rank-4 split space")
    for sp in (u.space, hp1.space):
        if not sp.is_unimodular():
            raise NotInMembershipLocus("sample lies outside the membership locus")
    j2n = u.ambient.gram
    hminus = hyperbolic(FormFlavor.ALTERNATING, 1, ring)
    seconds = [hp1.space, hp1.comp_space, hminus, hminus]
    firsts = [
        u.basis,
        _prefix_embedding(ring, 4 * n, 2 * (n - i)),
        u.comp_basis,
        _prefix_embedding(ring, 4 * n, 2 * (n + i)),
    ]
    adapt_m = None
    if adapt:
        tu = standardize_symplectic(u.space).witness
        tc = standardize_symplectic(u.comp_space).witness
        adapt_m = Matrix.hstack([u.basis @ tu, u.comp_basis @ tc])
    return _assemble_structure(
        ring,
        j2n,
        FormFlavor.ALTERNATING,
        firsts,
        seconds,
        adapt_groups={0: adapt_m, 2: adapt_m} if adapt else {},
        index=i,
        scale=n,
        family="hgr",
    )


def structure_subspace_rgr(
    n: int,
    i: int,
    v: SampledSubbundle,
    hp1: SampledSubbundle,
    max_scale: int = 2,
) -> StructureResult:
    """The alternating rank-8n subspace of the rank-16n ambient: symmetric
    first factors tensored with symplectic second factors."""
    if n % 2 or n < 2 or n > max_scale:
        raise UnsupportedScale(f"scale n={n} must be even within 2..{max_scale}")
    if not (-n <= i <= n and (i - n) % 2 == 0):
        raise AlgebraError(f"index i={i} must be within [-{n},{n}] and even with n")
    ring = v.ambient.ring
    if v.ambient != hyperbolic(FormFlavor.SYMMETRIC, n, ring):
        raise AlgebraError("first sample must live in the rank-2n symmetric space")
    if hp1.ambient != hyperbolic(FormFlavor.ALTERNATING, 2, ring):
        raise AlgebraError("second sample must live in the rank-4 split space")
    for sp in (v.space, hp1.space):
        if not sp.is_unimodular():
            raise NotInMembershipLocus("sample lies outside the membership locus")
    gplus = v.ambient.gram
    hminus = hyperbolic(FormFlavor.ALTERNATING, 1, ring)
    seconds = [hp1.space, hp1.comp_space, hminus, hminus]
    firsts = [
        v.basis,
        _prefix_embedding(ring, 2 * n, n - i),
        v.comp_basis,
        _prefix_embedding(ring, 2 * n, n + i),
    ]
    return _assemble_structure(
        ring,
        gplus,
        FormFlavor.SYMMETRIC,
        firsts,
        seconds,
        adapt_groups={},
        index=i,
        scale=n,
        family="rgr",
    )


def _assemble_structure(
    ring, first_gram, first_flavor, firsts, seconds, adapt_groups, index, scale, family
):
    planes = first_gram.rows // 2
    sub_flavor = (
        FormFlavor.SYMMETRIC
        if first_flavor is FormFlavor.ALTERNATING
        else FormFlavor.ALTERNATING
    )
    group_grams = []
    embeddings = []
    sub_grams = []
    for emb, sec in zip(firsts, seconds):
        amb_g = first_gram.kron(sec.gram)
        e = emb.kron(Matrix.identity(ring, 2))
        sub_g = e.transpose() @ amb_g @ e
        expect = (emb.transpose() @ first_gram @ emb).kron(sec.gram)
        if sub_g != expect:
            raise AlgebraError("tensor summand Gram mismatch")
        group_grams.append(amb_g)
        embeddings.append(e)
        sub_grams.append(sub_g)
    ambient = BilinearSpace(sub_flavor, Matrix.block_diag(group_grams))
    basis = Matrix.block_diag(embeddings)
    space = BilinearSpace(sub_flavor, Matrix.block_diag(sub_grams))
    if basis.transpose() @ ambient.gram @ basis != space.gram:
        raise AlgebraError("assembled restriction mismatch")
    witnesses = []
    for g, sec in enumerate(seconds):
        witnesses.append(
            _group_ambient_witness(planes, sec, first_flavor, adapt_groups.get(g))
        )
    w = Matrix.block_diag(witnesses)
    target_flavor = sub_flavor
    target = hyperbolic(target_flavor, ambient.rank // 2, ring)
    to_hyp = check_isometry(ambient, target, w)
    return StructureResult(
        ambient,
        basis,
        space,
        to_hyp,
        tuple(m.cols for m in embeddings),
        index,
        scale,
        family,
    )


# ---------------------------------------------------------------------------
# distinguished-point certificates


def _rref(rows, ring):
    out = [list(r) for r in rows]
    piv_cols = []
    r = 0
    ncols = len(out[0]) if out else 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(out)):
            if not ring._is_zero(out[i][c]):
                piv = i
                break
        if piv is None:
            continue
        out[r], out[piv] = out[piv], out[r]
        inv = ring._inv(out[r][c])
        out[r] = [ring._mul(inv, x) for x in out[r]]
        for i in range(len(out)):
            if i != r and not ring._is_zero(out[i][c]):
                f = out[i][c]
                out[i] = [
                    ring._add(x, ring._neg(ring._mul(f, y)))
                    for x, y in zip(out[i], out[r])
                ]
        piv_cols.append(c)
        r += 1
        if r == len(out):
            break
    return out[:r], piv_cols


def coordinate_support(basis: Matrix):
    """If the column span is a coordinate subspace, its coordinate set."""
    ring = basis.ring
    rows = [[basis.raw(i, j) for i in range(basis.rows)] for j in range(basis.cols)]
    red, pivots = _rref(rows, ring)
    if len(red) != basis.cols:
        return None
    support = set()
    for row in red:
        nz = [i for i, x in enumerate(row) if not ring._is_zero(x)]
        if len(nz) != 1:
            return None
        support.add(nz[0])
    return support


@dataclass
class DistinguishedReport:
    result: StructureResult
    occupied_planes: tuple
    plane_permutation: tuple
    permutation_isometry: Isometry
    transvection_count: int
    homotopy_ok: bool
    front_aligned: bool

    @property
    def ok(self):
        return self.front_aligned and self.homotopy_ok


def distinguished_certificates(result: StructureResult) -> DistinguishedReport:
    """At a slot-aligned sample: the occupied standard planes, the plane
    permutation sending them to the front, its transvection factorization,
    and the one-parameter paths certifying the permutation deforms to the
    identity inside the symplectic group of the standard planes."""
    ring = result.ambient.ring
    w = result.to_hyperbolic.witness
    b2 = inverse_if_unit(w) @ result.basis
    support = coordinate_support(b2)
    if support is None:
        raise NotInMembershipLocus("subspace is not slot-aligned at this sample")
    planes = sorted({c // 2 for c in support})
    if len(planes) * 2 != len(support):
        raise AlgebraError("support does not consist of whole planes")
    total = result.ambient.rank // 2
    others = [p for p in range(total) if p not in planes]
    images = [None] * total
    for pos, p in enumerate(planes):
        images[p] = pos
    for pos, p in enumerate(others):
        images[p] = len(planes) + pos
    perm = plane_permutation_matrix(ring, images)
    target = result.to_hyperbolic.target
    perm_iso = check_isometry(target, target, perm)
    moved = perm @ b2
    front = coordinate_support(moved)
    front_aligned = front == set(range(result.rank))
    sub_gram = moved.transpose() @ target.gram @ moved
    if sub_gram != result.space.gram:
        raise AlgebraError("permutation failed to preserve the restriction")
    sp = SymplecticMatrix(perm)
    word = factor_into_transvections(sp)
    path = homotopy_witness(word)
    if word:
        homotopy_ok = (
            len(path.matrices) == len(word)
            and transvection_product(word) == perm
        )
    else:
        homotopy_ok = perm == Matrix.identity(ring, perm.rows)
    return DistinguishedReport(
        result,
        tuple(planes),
        tuple(images),
        perm_iso,
        len(word),
        homotopy_ok,
        front_aligned,
    )


def distinguished_subbundle(
    sub_planes: int, total_planes: int, ring: Ring, flavor: FormFlavor
) -> SampledSubbundle:
    """The chart sample at zero: the subbundle spanned by the leading
    planes, built through the tautological chart machinery."""
    r = 2 * sub_planes
    n = 2 * total_planes
    ambient = hyperbolic(flavor, total_planes, ring)
    fam = tautological_on_chart(r, n, tuple(range(1, r + 1)), ambient)
    sample = PointSample(
        fam.chart, {v: ring.zero() for v in fam.chart.variables}
    )
    return orthogonal_complement(fam, sample)


def structure_distinguished_hgr(n: int, i: int, ring: Ring) -> DistinguishedReport:
    """Condition check at the fully distinguished sample: the subspace is the
    leading coordinate block after the recorded plane permutation."""
    u = distinguished_subbundle(n, 2 * n, ring, FormFlavor.ALTERNATING)
    hp1 = distinguished_subbundle(1, 2, ring, FormFlavor.ALTERNATING)
    res = structure_subspace_hgr(n, i, u, hp1)
    return distinguished_certificates(res)


def structure_hp1_distinguished_hgr(
    n: int, i: int, u: SampledSubbundle
) -> DistinguishedReport:
    """Condition check with an arbitrary membership sample in the first
    factor and the distinguished point on the quaternionic line, using the
    sample-adapted plane decomposition."""
    ring = u.ambient.ring
    hp1 = distinguished_subbundle(1, 2, ring, FormFlavor.ALTERNATING)
    res = structure_subspace_hgr(n, i, u, hp1, adapt=True)
    return distinguished_certificates(res)


def structure_distinguished_rgr(n: int, i: int, ring: Ring) -> DistinguishedReport:
    v = distinguished_subbundle(n // 2, n, ring, FormFlavor.SYMMETRIC)
    hp1 = distinguished_subbundle(1, 2, ring, FormFlavor.ALTERNATING)
    res = structure_subspace_rgr(n, i, v, hp1)
    return distinguished_certificates(res)


# ---------------------------------------------------------------------------
# stabilization compatibility at distinguished samples


@dataclass
class StabilizationReport:
    index: int
    group_sets_small: tuple
    group_sets_large: tuple
    group_sets_expected: tuple
    group_permutations: tuple
    ok: bool


def _column_support_sets(result: StructureResult):
    """Per-group occupied ambient coordinates at a coordinate-aligned sample."""
    ring = result.ambient.ring
    sets = []
    off_r = 0
    off_c = 0
    for g, cols in enumerate(result.group_ranks):
        rows = result.ambient.rank // 4
        block = result.basis.submatrix(
            range(off_r, off_r + rows), range(off_c, off_c + cols)
        )
        support = coordinate_support(block)
        if support is None:
            raise AlgebraError("sample is not coordinate-aligned")
        sets.append(frozenset(support))
        off_r += rows
        off_c += cols
    return tuple(sets)


def structure_stabilization_hgr(i: int, ring: Ring) -> StabilizationReport:
    """Compatibility of the structure subspace with the inclusion that adds
    one hyperbolic plane to the subbundle and one to its complement, checked
    at the distinguished samples; equality holds up to a per-group
    permutation of first-factor planes, witnessed by set equality of the
    occupied planes."""
    small = structure_subspace_hgr(
        1,
        i,
        distinguished_subbundle(1, 2, ring, FormFlavor.ALTERNATING),
        distinguished_subbundle(1, 2, ring, FormFlavor.ALTERNATING),
    )
    large = structure_subspace_hgr(
        2,
        i,
        distinguished_subbundle(2, 4, ring, FormFlavor.ALTERNATING),
        distinguished_subbundle(1, 2, ring, FormFlavor.ALTERNATING),
    )
    sets_small = _column_support_sets(small)
    sets_large = _column_support_sets(large)
    # first-factor plane maps: old planes (L1, R1) land at (L1, R1) of
    # (L1, L2, R1, R2); the new subbundle plane is L2, the new complement
    # plane is R2
    plane_map = {0: 0, 1: 2}
    extra = {0: 1, 1: 1, 2: 3, 3: 1}
    expected = []
    for g, s in enumerate(sets_small):
        planes_old = {c // 4 for c in s}
        mapped = {plane_map[p] for p in planes_old}
        mapped.add(extra[g])
        coords = set()
        for p in mapped:
            coords.update(range(4 * p, 4 * p + 4))
        expected.append(frozenset(coords))
    expected_planes = [{c // 4 for c in s} for s in expected]
    large_planes = [{c // 4 for c in s} for s in sets_large]
    # groups carrying the subbundle and its complement must agree on the
    # nose; the abstract hyperbolic-power groups agree up to a recorded
    # permutation of first-factor planes within the group
    perms = []
    ok = True
    for g in range(4):
        e, l = expected_planes[g], large_planes[g]
        if g in (0, 2):
            ok = ok and e == l
        else:
            ok = ok and len(e) == len(l)
        mapping = dict(zip(sorted(e), sorted(l)))
        perms.append(tuple(sorted(mapping.items())))
    return StabilizationReport(
        i, sets_small, sets_large, tuple(expected), tuple(perms), ok
    )


# ---------------------------------------------------------------------------
# sampling helpers


def random_point(chart: Chart, rng, span: int = 3) -> PointSample:
    base = chart.ring.base
    from .rings import QQ

    if isinstance(base, QQ):
        vals = {
            v: base.el(Fraction(rng.randint(-span, span)))
            for v in chart.variables
        }
    elif base.is_field:
        vals = {v: base.from_int(rng.randrange(base.characteristic)) for v in chart.variables}
    else:
        vals = {v: base.from_int(rng.randint(-span, span)) for v in chart.variables}
    return PointSample(chart, vals)


def random_membership_sample(
    family: TautologicalFamily, rng, tries: int = 200
) -> PointSample:
    for _ in range(tries):
        p = random_point(family.chart, rng)
        if form_membership(family, p):
            return p
    raise NotInMembershipLocus(f"no membership sample found in {tries} tries")
