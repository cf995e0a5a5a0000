"""Textual exchange format: ring descriptors, matrices, bilinear spaces,
isometries, chain complexes and duality forms as JSON documents whose entries
use a canonical term grammar (integers, a/b fractions, and polynomial terms
c*v1^e1*v2^e2 joined by + and -).

Parsing is total: malformed entries raise EntryParseError carrying the
offending position."""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import AlgebraError, EntryParseError
from .forms import BilinearSpace, FormFlavor, Isometry, check_isometry
from .koszul import ChainComplex, ChainMap, DualityForm, dual_shifted
from .matrices import Matrix
from .rings import GF, QQ, ZZ, PolyRing, Ring, RingElement, Zmod


# ---------------------------------------------------------------------------
# entry grammar


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] == " ":
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def take(self):
        c = self.peek()
        self.pos += 1
        return c

    def error(self, reason):
        raise EntryParseError(self.text, self.pos, reason)

    def integer(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected a digit")
        return int(self.text[start : self.pos])

    def name(self):
        self.skip_ws()
        start = self.pos
        if self.pos >= len(self.text) or not (
            self.text[self.pos].isalpha() or self.text[self.pos] == "_"
        ):
            self.error("expected a variable name")
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        return self.text[start : self.pos]

    def done(self):
        self.skip_ws()
        return self.pos >= len(self.text)


def _parse_rational(sc: _Scanner) -> Fraction:
    num = sc.integer()
    if sc.peek() == "/":
        sc.take()
        den = sc.integer()
        if den == 0:
            sc.error("zero denominator")
        return Fraction(num, den)
    return Fraction(num)


def _parse_term(sc: _Scanner, ring: PolyRing):
    """One term: optional coefficient, then *-joined variable powers."""
    coeff = Fraction(1)
    saw_coeff = False
    c = sc.peek()
    if c is not None and c.isdigit():
        coeff = _parse_rational(sc)
        saw_coeff = True
    exps = [0] * len(ring.variables)
    saw_var = False
    while True:
        c = sc.peek()
        if saw_coeff or saw_var:
            if c != "*":
                break
            sc.take()
        pos = sc.pos
        v = sc.name()
        if v not in ring.variables:
            sc.pos = pos
            sc.error(f"unknown variable {v!r}")
        e = 1
        if sc.peek() == "^":
            sc.take()
            neg = False
            if sc.peek() == "-":
                sc.take()
                neg = True
            e = sc.integer()
            if neg:
                e = -e
        epos = sc.pos
        if e < 0 and ring.variables[ring.var_index(v)] not in ring.inverted:
            sc.pos = epos
            sc.error(f"negative exponent on non-inverted variable {v!r}")
        exps[ring.var_index(v)] += e
        saw_var = True
        if sc.peek() != "*":
            break
    if not saw_coeff and not saw_var:
        sc.error("expected a term")
    return coeff, tuple(exps)


def _coeff_into(ring: Ring, q: Fraction, sc: _Scanner, pos: int):
    if isinstance(ring, QQ):
        return q
    if q.denominator != 1:
        sc.pos = pos
        sc.error(f"fractional coefficient {q} not allowed over {ring}")
    return ring._from_int(q.numerator)


def parse_entry(ring: Ring, text: str) -> RingElement:
    """Parse one canonical entry; total, rejecting malformed input with the
    failing position."""
    if not isinstance(text, str):
        raise EntryParseError(str(text), 0, "entry must be a string")
    sc = _Scanner(text)
    if isinstance(ring, PolyRing):
        total = ring.zero()
        sign = 1
        c = sc.peek()
        if c == "-":
            sc.take()
            sign = -1
        elif c == "+":
            sc.take()
        while True:
            pos = sc.pos
            coeff, exps = _parse_term(sc, ring)
            base_c = _coeff_into(ring.base, coeff * sign, sc, pos)
            term = ring.el(ring._normalize({exps: base_c}))
            total = total + term
            c = sc.peek()
            if c is None:
                break
            if c == "+":
                sign = 1
            elif c == "-":
                sign = -1
            else:
                sc.error(f"unexpected character {c!r}")
            sc.take()
        if not sc.done():
            sc.error("trailing input")
        return total
    sign = 1
    c = sc.peek()
    if c == "-":
        sc.take()
        sign = -1
    pos = sc.pos
    q = _parse_rational(sc)
    if not sc.done():
        sc.error("trailing input")
    return ring.el(_coeff_into(ring, q * sign, sc, pos)) if not isinstance(
        ring, QQ
    ) else ring.el(q * sign)


# ---------------------------------------------------------------------------
# ring descriptors


def ring_to_doc(ring: Ring) -> dict:
    if isinstance(ring, ZZ):
        return {"kind": "integers"}
    if isinstance(ring, QQ):
        return {"kind": "rationals"}
    if isinstance(ring, GF):
        return {"kind": "prime_field", "p": ring.p}
    if isinstance(ring, Zmod):
        return {"kind": "modular", "n": ring.n}
    if isinstance(ring, PolyRing):
        doc = {
            "kind": "polynomial",
            "base": ring_to_doc(ring.base),
            "variables": list(ring.variables),
        }
        if ring.inverted:
            doc["inverted"] = sorted(ring.inverted)
        return doc
    raise AlgebraError(f"unsupported ring {ring}")


def ring_from_doc(doc) -> Ring:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise AlgebraError("ring descriptor must be an object with a kind")
    kind = doc["kind"]
    if kind == "integers":
        return ZZ()
    if kind == "rationals":
        return QQ()
    if kind == "prime_field":
        return GF(int(doc["p"]))
    if kind == "modular":
        return Zmod(int(doc["n"]))
    if kind == "polynomial":
        base = ring_from_doc(doc["base"])
        return PolyRing(
            base,
            tuple(doc["variables"]),
            frozenset(doc.get("inverted", ())),
        )
    raise AlgebraError(f"unknown ring kind {kind!r}")


def parse_ring_name(name: str) -> Ring:
    """Concise ring names for command lines: ZZ, QQ, GF(p), Z/n."""
    name = name.strip()
    if name in ("ZZ", "Z"):
        return ZZ()
    if name in ("QQ", "Q"):
        return QQ()
    if name.startswith("GF(") and name.endswith(")"):
        return GF(int(name[3:-1]))
    if name.startswith("Z/"):
        return Zmod(int(name[2:]))
    raise AlgebraError(f"unknown ring name {name!r}; use ZZ, QQ, GF(p) or Z/n")


# ---------------------------------------------------------------------------
# matrices, spaces, isometries


def matrix_rows(m: Matrix):
    return [[m.ring._fmt(m.raw(i, j)) for j in range(m.cols)] for i in range(m.rows)]


def matrix_to_doc(m: Matrix) -> dict:
    doc = {"ring": ring_to_doc(m.ring), "rows": matrix_rows(m)}
    if not m.rows:
        doc["cols"] = m.cols
    return doc


def matrix_from_doc(doc) -> Matrix:
    if not isinstance(doc, dict) or "ring" not in doc or "rows" not in doc:
        raise AlgebraError("matrix document needs ring and rows")
    ring = ring_from_doc(doc["ring"])
    rows = doc["rows"]
    parsed = []
    for i, row in enumerate(rows):
        out = []
        for j, text in enumerate(row):
            try:
                out.append(parse_entry(ring, text))
            except EntryParseError as e:
                raise EntryParseError(
                    e.text, e.pos, f"row {i}, column {j}: {e.reason}"
                ) from None
        parsed.append(out)
    return Matrix(ring, parsed, cols=doc.get("cols"))


def space_to_doc(s: BilinearSpace) -> dict:
    doc = matrix_to_doc(s.gram)
    doc["flavor"] = s.flavor.value
    return doc


def space_from_doc(doc) -> BilinearSpace:
    if not isinstance(doc, dict) or "flavor" not in doc:
        raise AlgebraError("space document needs a flavor")
    flavor = FormFlavor(doc["flavor"])
    return BilinearSpace(flavor, matrix_from_doc(doc))


def isometry_to_doc(iso: Isometry) -> dict:
    return {
        "source": space_to_doc(iso.source),
        "target": space_to_doc(iso.target),
        "witness": matrix_to_doc(iso.witness),
    }


def isometry_from_doc(doc) -> Isometry:
    """Rebuild and re-verify; serialized certificates are never trusted."""
    src = space_from_doc(doc["source"])
    tgt = space_from_doc(doc["target"])
    wit = matrix_from_doc(doc["witness"])
    return check_isometry(src, tgt, wit)


# ---------------------------------------------------------------------------
# complexes and forms


def complex_to_doc(c: ChainComplex) -> dict:
    return {
        "ring": ring_to_doc(c.ring),
        "degrees": [c.lo, c.hi],
        "ranks": [c.rank(k) for k in c.degrees()],
        "differentials": [matrix_rows(c.d(k)) for k in range(c.lo + 1, c.hi + 1)],
    }


def complex_from_doc(doc) -> ChainComplex:
    ring = ring_from_doc(doc["ring"])
    lo, hi = doc["degrees"]
    ranks = {lo + k: r for k, r in enumerate(doc["ranks"])}
    diffs = {}
    for idx, rows in enumerate(doc["differentials"]):
        k = lo + 1 + idx
        parsed = [[parse_entry(ring, x) for x in row] for row in rows]
        diffs[k] = Matrix(ring, parsed, cols=ranks[k])
    return ChainComplex(ring, lo, hi, ranks, diffs)


def form_to_doc(c: ChainComplex, f: DualityForm) -> dict:
    doc = complex_to_doc(c)
    doc["shift"] = f.shift
    doc["epsilon"] = f.epsilon
    doc["components"] = [matrix_rows(f.component(k)) for k in c.degrees()]
    dual = dual_shifted(c, f.shift)
    doc["dual_differentials"] = [
        matrix_rows(dual.d(k)) for k in range(dual.lo + 1, dual.hi + 1)
    ]
    return doc


def form_from_doc(doc):
    """Rebuild the complex and form, re-running every verification."""
    c = complex_from_doc(doc)
    shift = int(doc["shift"])
    epsilon = int(doc["epsilon"])
    dual = dual_shifted(c, shift)
    comps = {}
    for idx, rows in enumerate(doc["components"]):
        k = c.lo + idx
        parsed = [[parse_entry(c.ring, x) for x in row] for row in rows]
        comps[k] = Matrix(c.ring, parsed, cols=c.rank(k))
    cm = ChainMap(c, dual, comps, shift=0)
    return c, DualityForm(cm, shift, epsilon)


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
