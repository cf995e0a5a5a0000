"""Batch command line: every construction and verification as a subcommand
with deterministic, machine-readable reports.

Exit codes: 0 all checks pass, 1 at least one check failed, 2 malformed
input or usage error."""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import __version__
from .errors import AlgebraError, NoUnitPivot
from .forms import (
    FormFlavor,
    embed_into_hyperbolic,
    hyperbolic,
    shuffle_isometry,
    standardize_symplectic,
    tensor_hyperbolic_isometry,
    tensor_product,
)
from .gw import (
    hyperbolic_multiple,
    ksp0_class,
    stable_isometry_test,
    witt_decompose,
)
from .grassmann import (
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
from .koszul import (
    borel_class_chart,
    compare_borel_thom,
    contracting_homotopy,
    theta_form,
    thom_class_trivial_line,
)
from .matrices import Matrix, determinant
from .rings import GF, QQ, ZZ
from .sampling import random_alternating_unimodular
from .serialize import (
    canonical_json,
    complex_from_doc,
    form_from_doc,
    form_to_doc,
    isometry_to_doc,
    matrix_to_doc,
    parse_ring_name,
    space_from_doc,
    space_to_doc,
)
from .symplectic import (
    block_swap,
    factor_into_transvections,
    homotopy_witness,
    transvection_product,
)


class Report:
    def __init__(self, command, seed=None):
        self.command = command
        self.seed = seed
        self.details = []
        self.payload = {}
        self.error = None

    def check(self, name, ok, info=None):
        rec = {"name": name, "ok": bool(ok)}
        if info is not None:
            rec["info"] = info
        self.details.append(rec)
        return ok

    @property
    def outcome(self):
        if self.error is not None:
            return "error"
        return "pass" if all(d["ok"] for d in self.details) else "fail"

    def to_doc(self):
        doc = {
            "command": self.command,
            "outcome": self.outcome,
            "details": self.details,
            "seed": self.seed,
            "version": __version__,
        }
        if self.error is not None:
            doc["error"] = self.error
        doc.update(self.payload)
        return doc

    def render(self, mode):
        if mode == "json":
            return canonical_json(self.to_doc()) + "\n"
        lines = [f"command: {self.command}", f"outcome: {self.outcome}"]
        if self.error is not None:
            lines.append(f"error: {self.error}")
        for d in self.details:
            tag = "PASS" if d["ok"] else "FAIL"
            info = f" ({d['info']})" if "info" in d else ""
            lines.append(f"  [{tag}] {d['name']}{info}")
        return "\n".join(lines) + "\n"

    def exit_code(self):
        return {"pass": 0, "fail": 1, "error": 2}[self.outcome]


def _read_doc(args, stdin):
    if getattr(args, "infile", None):
        with open(args.infile) as fh:
            return json.load(fh)
    text = stdin.read()
    return json.loads(text)


def _ring(args):
    return parse_ring_name(getattr(args, "ring", "QQ") or "QQ")


# ---------------------------------------------------------------------------
# form commands


def cmd_form_embed(args, stdin, report):
    space = space_from_doc(_read_doc(args, stdin))
    iso = embed_into_hyperbolic(space)
    report.check("embedding-congruence", True, f"rank {space.rank} -> {iso.target.rank}")
    std = iso.compose(shuffle_isometry(iso.target))
    report.check("standard-target", True, f"planes {std.target.rank // 2}")
    report.payload["isometry"] = isometry_to_doc(iso)
    report.payload["standard"] = isometry_to_doc(std)


def cmd_form_tensor(args, stdin, report):
    doc = _read_doc(args, stdin)
    a = space_from_doc(doc["a"])
    b = space_from_doc(doc["b"])
    t = tensor_product(a, b)
    report.check("rank-multiplies", t.rank == a.rank * b.rank)
    report.check("flavor", True, t.flavor.value)
    report.payload["product"] = space_to_doc(t)
    if (
        a.flavor is FormFlavor.ALTERNATING
        and b.flavor is FormFlavor.ALTERNATING
        and a == hyperbolic(FormFlavor.ALTERNATING, a.rank // 2, a.ring)
        and b == hyperbolic(FormFlavor.ALTERNATING, b.rank // 2, b.ring)
    ):
        iso = tensor_hyperbolic_isometry(a.rank // 2, b.rank // 2, a.ring)
        report.check("hyperbolic-identification", True, f"H+^{t.rank // 2}")
        report.payload["hyperbolic_witness"] = matrix_to_doc(iso.witness)


def cmd_form_standardize(args, stdin, report):
    space = space_from_doc(_read_doc(args, stdin))
    try:
        iso = standardize_symplectic(space)
    except NoUnitPivot as e:
        report.check("unit-pivot", False, str(e))
        report.payload["residual"] = matrix_to_doc(e.residual)
        return
    report.check("standardized", True, f"planes {iso.target.rank // 2}")
    report.payload["isometry"] = isometry_to_doc(iso)


# ---------------------------------------------------------------------------
# gw commands


def cmd_gw_ksp0(args, stdin, report):
    doc = _read_doc(args, stdin)
    space = space_from_doc(doc["space"])
    cls = ksp0_class(int(doc["i"]), space)
    report.payload["class"] = {
        "plus": [space_to_doc(c.representative) for c in cls.plus],
        "minus": [space_to_doc(c.representative) for c in cls.minus],
    }
    try:
        m = hyperbolic_multiple(cls)
        report.check("hyperbolic-multiple", True, str(m))
        report.payload["invariant"] = m
    except AlgebraError:
        report.check("normalized", True, "no field invariant available")


def cmd_gw_witt(args, stdin, report):
    space = space_from_doc(_read_doc(args, stdin))
    dec = witt_decompose(space, bound=args.bound)
    ok = 2 * dec.hyperbolic_count + dec.anisotropic.rank == space.rank
    report.check("rank-bookkeeping", ok)
    report.check("witness-congruence", True)
    report.payload["hyperbolic_count"] = dec.hyperbolic_count
    report.payload["anisotropic"] = space_to_doc(dec.anisotropic)
    report.payload["witness"] = isometry_to_doc(dec.witness)


def cmd_gw_stable(args, stdin, report):
    from .errors import Undecidable

    doc = _read_doc(args, stdin)
    a = space_from_doc(doc["a"])
    b = space_from_doc(doc["b"])
    try:
        result = stable_isometry_test(a, b, args.max_stab)
    except Undecidable as e:
        report.check("stable-isometry-decided", False, str(e))
        return
    report.check("stable-isometry-decided", True, str(result))
    report.payload["stably_isometric"] = result
    report.payload["max_stab"] = args.max_stab


# ---------------------------------------------------------------------------
# sp commands


def _factors_payload(word):
    return [
        {
            "vector": [str(x) for x in t.vector],
            "scalar": str(t.scalar),
        }
        for t in word
    ]


def cmd_sp_swap_factor(args, stdin, report):
    ring = _ring(args)
    p = block_swap(args.n, args.m, ring)
    word = factor_into_transvections(p)  # product re-verified internally
    report.check("factor-count", True, str(len(word)))
    if args.verify:
        prod = transvection_product(word) if word else p.entries
        report.check("product-equals-swap", prod == p.entries)
    report.payload["size"] = p.size
    report.payload["swap"] = matrix_to_doc(p.entries)
    report.payload["factors"] = _factors_payload(word)


def cmd_sp_homotopy(args, stdin, report):
    ring = _ring(args)
    p = block_swap(args.n, args.m, ring)
    word = factor_into_transvections(p)
    path = homotopy_witness(word)
    report.check("paths-built", len(path.matrices) == len(word))
    prod = transvection_product(word) if word else p.entries
    report.check("composite-endpoint", prod == p.entries)
    report.payload["parameter"] = path.parameter
    report.payload["paths"] = [matrix_to_doc(m) for m in path.matrices]
    report.payload["factors"] = _factors_payload(word)


# ---------------------------------------------------------------------------
# koszul commands


def cmd_koszul_verify(args, stdin, report):
    doc = _read_doc(args, stdin)
    try:
        if "shift" in doc:
            c, form = form_from_doc(doc)
            report.check("differentials-square-to-zero", True)
            report.check("form-chain-map", True)
            report.check("components-invertible", True)
            report.check(
                "symmetry-sign", True, f"epsilon {form.epsilon}"
            )
        else:
            complex_from_doc(doc)
            report.check("differentials-square-to-zero", True)
    except AlgebraError as e:
        report.check("verification", False, str(e))


def _golden_rows(report, c, form, want_d1, want_dual):
    doc = form_to_doc(c, form)
    report.payload["class"] = doc
    report.check("row", doc["differentials"][0] == want_d1, str(want_d1))
    report.check(
        "dual-row", doc["dual_differentials"][-1] == want_dual, str(want_dual)
    )
    comps = doc["components"]
    report.check(
        "outer-components",
        comps[0] == [["1"]] and comps[-1] == [["-1"]],
        "(-1, .., 1)",
    )


def cmd_koszul_thom(args, stdin, report):
    ring = _ring(args)
    c, form = thom_class_trivial_line(ring)
    _golden_rows(report, c, form, [["t"]], [["-t"]])


def cmd_koszul_borel(args, stdin, report):
    ring = _ring(args)
    c, form = borel_class_chart(ring)
    _golden_rows(report, c, form, [["t0", "t1"]], [["-t1"], ["-t0"]])
    phi = compare_borel_thom(ring)
    report.check("tensor-square-identification", True)
    report.payload["identification"] = [
        matrix_to_doc(phi.component(k)) for k in range(3)
    ]


# ---------------------------------------------------------------------------
# grass commands


def cmd_grass_ga_check(args, stdin, report):
    rep = ga_action_verify(samples=args.samples, seed=args.seed)
    report.check("unit-law", rep.unit_law)
    report.check("composition-law", rep.composition_law)
    report.check("pairing-invariance", rep.pairing_invariance)
    report.check("stabilizer-shape", rep.stabilizer_shape)
    report.check(
        "freeness-samples",
        rep.freeness_failures == 0,
        f"{rep.freeness_samples} samples",
    )


def cmd_grass_structure_check(args, stdin, report):
    ring = _ring(args)
    rng = random.Random(args.seed)
    fam = args.family
    n, i = args.n, args.i
    if fam == "hgr":
        want_rank, want_flavor = 16 * n, FormFlavor.SYMMETRIC
        sub_r, amb_r = 2 * n, 4 * n
        first_flavor = FormFlavor.ALTERNATING
    else:
        want_rank, want_flavor = 8 * n, FormFlavor.ALTERNATING
        sub_r, amb_r = n, 2 * n
        first_flavor = FormFlavor.SYMMETRIC
    amb_first = hyperbolic(first_flavor, amb_r // 2, ring)
    amb_hp1 = hyperbolic(FormFlavor.ALTERNATING, 2, ring)
    ok_all = True
    for s in range(args.samples):
        fam_u = tautological_on_chart(sub_r, amb_r, tuple(range(1, sub_r + 1)), amb_first)
        u = orthogonal_complement(fam_u, random_membership_sample(fam_u, rng))
        fam_h = tautological_on_chart(2, 4, (1, 2), amb_hp1)
        hp = orthogonal_complement(fam_h, random_membership_sample(fam_h, rng))
        if fam == "hgr":
            res = structure_subspace_hgr(n, i, u, hp)
        else:
            res = structure_subspace_rgr(n, i, u, hp)
        ok = (
            res.rank == want_rank
            and res.flavor == want_flavor
            and res.is_unimodular()
        )
        ok_all = ok_all and ok
        report.check(f"sample-{s}", ok, f"rank {res.rank} {res.flavor.value}")
    if fam == "hgr":
        dist = structure_distinguished_hgr(n, i, ring)
    else:
        dist = structure_distinguished_rgr(n, i, ring)
    report.check("distinguished-front-aligned", dist.front_aligned)
    report.check("distinguished-homotopy", dist.homotopy_ok)
    report.payload["occupied_planes"] = list(dist.occupied_planes)
    report.payload["plane_permutation"] = list(dist.plane_permutation)
    report.payload["transvections"] = dist.transvection_count
    if fam == "hgr":
        fam_u = tautological_on_chart(sub_r, amb_r, tuple(range(1, sub_r + 1)), amb_first)
        u = orthogonal_complement(fam_u, random_membership_sample(fam_u, rng))
        d2 = structure_hp1_distinguished_hgr(n, i, u)
        report.check("line-distinguished-certificate", d2.ok)


# ---------------------------------------------------------------------------
# selftest


def cmd_selftest(args, stdin, report):
    rng = random.Random(args.seed)
    qq, zz, f5 = QQ(), ZZ(), GF(5)

    ok = True
    for ring in (zz, qq, f5):
        from .sampling import random_element

        for _ in range(50):
            x = random_element(ring, rng)
            ok = ok and (x - x).is_zero()
    report.check("canonical-zero", ok)

    ok = True
    for ring in (zz, qq, f5):
        for _ in range(3):
            a = Matrix(ring, [[random_element(ring, rng, 2).value for _ in range(3)] for _ in range(3)])
            b = Matrix(ring, [[random_element(ring, rng, 2).value for _ in range(3)] for _ in range(3)])
            ok = ok and determinant(a @ b) == determinant(a) * determinant(b)
    report.check("determinant-multiplicative", ok)

    ok = True
    for ring in (zz, qq, f5):
        for size in (2, 4):
            s = random_alternating_unimodular(ring, size, rng)
            iso = embed_into_hyperbolic(s)
            ok = ok and iso.target.rank == 2 * size
    report.check("hyperbolic-embedding", ok)

    ok = True
    for ring in (zz, qq, f5):
        tensor_hyperbolic_isometry(1, 1, ring)
    report.check("tensor-identity", True)

    for nm in ((1, 1), (1, 2)):
        p = block_swap(*nm)
        word = factor_into_transvections(p)
        homotopy_witness(word)
    report.check("swap-factorization", True)

    for n in (1, 2, 3):
        theta_form(n, qq)
        contracting_homotopy(n, 1, qq)
    report.check("koszul-suite", True)

    vals = {}
    for i in (-2, 0, 2):
        cls = ksp0_class(i, hyperbolic(FormFlavor.ALTERNATING, 2, f5))
        vals[i] = hyperbolic_multiple(cls)
    report.check("class-map", all(vals[i] == i for i in vals))

    rep = ga_action_verify(samples=5, seed=args.seed)
    report.check("additive-action", rep.ok)

    c, form = thom_class_trivial_line(qq)
    doc = form_to_doc(c, form)
    report.check("golden-rows", doc["differentials"] == [[["t"]]])
    compare_borel_thom(qq)
    report.check("chart-identification", True)


# ---------------------------------------------------------------------------
# wiring


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gwforms",
        description="exact bilinear forms, symplectic factorizations, Koszul "
        "duality and Grassmannian chart checks",
    )
    parser.add_argument("--output", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="group", required=True)

    def leaf(group, name, fn, **flags):
        p = group.add_parser(name)
        p.set_defaults(fn=fn)
        if flags.get("infile", True):
            p.add_argument("--in", dest="infile", default=None, metavar="FILE")
        p.add_argument("--ring", default="QQ")
        p.add_argument("--seed", type=int, default=0)
        for extra in flags.get("extra", ()):
            extra(p)
        return p

    form = sub.add_parser("form").add_subparsers(dest="command", required=True)
    leaf(form, "embed", cmd_form_embed)
    leaf(form, "tensor", cmd_form_tensor)
    leaf(form, "standardize", cmd_form_standardize)

    gw = sub.add_parser("gw").add_subparsers(dest="command", required=True)
    leaf(gw, "ksp0", cmd_gw_ksp0)
    leaf(
        gw,
        "witt",
        cmd_gw_witt,
        extra=(lambda p: p.add_argument("--bound", type=int, default=50),),
    )
    leaf(
        gw,
        "stable",
        cmd_gw_stable,
        extra=(lambda p: p.add_argument("--max-stab", type=int, default=3),),
    )

    sp = sub.add_parser("sp").add_subparsers(dest="command", required=True)

    def sp_flags(p):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--verify", action="store_true")

    leaf(sp, "swap-factor", cmd_sp_swap_factor, extra=(sp_flags,))
    leaf(sp, "homotopy", cmd_sp_homotopy, extra=(sp_flags,))

    koszul = sub.add_parser("koszul").add_subparsers(dest="command", required=True)
    leaf(koszul, "verify", cmd_koszul_verify)
    leaf(koszul, "thom", cmd_koszul_thom)
    leaf(koszul, "borel", cmd_koszul_borel)

    grass = sub.add_parser("grass").add_subparsers(dest="command", required=True)
    leaf(
        grass,
        "ga-check",
        cmd_grass_ga_check,
        extra=(lambda p: p.add_argument("--samples", type=int, default=20),),
    )

    def grass_flags(p):
        p.add_argument("--n", type=int, default=1)
        p.add_argument("--i", type=int, default=0)
        p.add_argument("--samples", type=int, default=20)
        p.add_argument("--family", choices=("hgr", "rgr"), default="hgr")

    leaf(grass, "structure-check", cmd_grass_structure_check, extra=(grass_flags,))

    st = sub.add_parser("selftest")
    st.set_defaults(fn=cmd_selftest, group="selftest", command=None)
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--ring", default="QQ")

    return parser


def main(argv=None, stdin=None, stdout=None):
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    name = args.group if not getattr(args, "command", None) else f"{args.group} {args.command}"
    report = Report(name, seed=getattr(args, "seed", None))
    try:
        args.fn(args, stdin, report)
    except (AlgebraError, json.JSONDecodeError, KeyError, ValueError, OSError) as e:
        report.error = f"{type(e).__name__}: {e}"
    stdout.write(report.render(args.output))
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
