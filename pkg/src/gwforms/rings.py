"""Exact coefficient rings: integers, rationals, Z/n, prime fields, and sparse
multivariate polynomial rings with an optional set of inverted variables.

Every value is immutable and in canonical form, so two elements are equal iff
their representations are identical.  Polynomial values are stored as a tuple
of (exponent-vector, coefficient) pairs sorted by descending lexicographic
exponent order with no zero coefficients; negative exponents are allowed only
on inverted variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import AlgebraError, NotAUnit, RingMismatch, UnknownVariable


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class RingElement:
    """A canonical value tagged with its ring."""

    __slots__ = ("ring", "value")

    def __init__(self, ring, value):
        self.ring = ring
        self.value = value

    def _coerce(self, other):
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise RingMismatch(f"{other.ring} vs {self.ring}")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RingElement(self.ring, self.ring._add(self.value, other.value))

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, self.ring._neg(self.value))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RingElement(self.ring, self.ring._mul(self.value, other.value))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return self.ring._is_zero(self.value)

    def is_unit(self) -> bool:
        return self.ring._is_unit(self.value)

    def inv(self) -> "RingElement":
        return RingElement(self.ring, self.ring._inv(self.value))

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        return (
            isinstance(other, RingElement)
            and self.ring == other.ring
            and self.value == other.value
        )

    def __hash__(self):
        return hash((self.ring, self.value))

    def __str__(self):
        return self.ring._fmt(self.value)

    def __repr__(self):
        return f"<{self} over {self.ring}>"


@dataclass(frozen=True)
class Ring:
    """Base descriptor; subclasses implement the raw-value protocol."""

    is_field = False
    is_domain = True
    characteristic = 0

    def el(self, raw) -> RingElement:
        return RingElement(self, raw)

    def zero(self) -> RingElement:
        return self.from_int(0)

    def one(self) -> RingElement:
        return self.from_int(1)

    def from_int(self, k: int) -> RingElement:
        return RingElement(self, self._from_int(k))

    # subclasses: _add, _neg, _mul, _from_int, _is_zero, _is_unit, _inv,
    # _exact_div, _fmt


@dataclass(frozen=True)
class ZZ(Ring):
    characteristic = 0

    def _add(self, a, b):
        return a + b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _from_int(self, k):
        return k

    def _is_zero(self, a):
        return a == 0

    def _is_unit(self, a):
        return a in (1, -1)

    def _inv(self, a):
        if a not in (1, -1):
            raise NotAUnit(f"{a} is not a unit in ZZ")
        return a

    def _exact_div(self, a, b):
        q, r = divmod(a, b)
        if r:
            raise AlgebraError(f"inexact division {a}/{b} in ZZ")
        return q

    def _fmt(self, a):
        return str(a)

    def __str__(self):
        return "ZZ"


@dataclass(frozen=True)
class QQ(Ring):
    is_field = True
    characteristic = 0

    def _add(self, a, b):
        return a + b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _from_int(self, k):
        return Fraction(k)

    def _is_zero(self, a):
        return a == 0

    def _is_unit(self, a):
        return a != 0

    def _inv(self, a):
        if a == 0:
            raise NotAUnit("0 is not a unit in QQ")
        return 1 / a

    def _exact_div(self, a, b):
        return a / b

    def _fmt(self, a):
        return str(a)

    def __str__(self):
        return "QQ"


@dataclass(frozen=True)
class GF(Ring):
    """Prime field Z/p, p prime."""

    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise AlgebraError(f"{self.p} is not prime")

    @property
    def is_field(self):
        return True

    @property
    def characteristic(self):
        return self.p

    def _add(self, a, b):
        return (a + b) % self.p

    def _neg(self, a):
        return (-a) % self.p

    def _mul(self, a, b):
        return (a * b) % self.p

    def _from_int(self, k):
        return k % self.p

    def _is_zero(self, a):
        return a == 0

    def _is_unit(self, a):
        return a % self.p != 0

    def _inv(self, a):
        if a % self.p == 0:
            raise NotAUnit(f"0 is not a unit in GF({self.p})")
        return pow(a, -1, self.p)

    def _exact_div(self, a, b):
        return (a * self._inv(b)) % self.p

    def _fmt(self, a):
        return str(a)

    def __str__(self):
        return f"GF({self.p})"


@dataclass(frozen=True)
class Zmod(Ring):
    """Z/n for n >= 2; may have zero divisors."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise AlgebraError("modulus must be >= 2")

    @property
    def is_field(self):
        return _is_prime(self.n)

    @property
    def is_domain(self):
        return _is_prime(self.n)

    @property
    def characteristic(self):
        return self.n

    def _add(self, a, b):
        return (a + b) % self.n

    def _neg(self, a):
        return (-a) % self.n

    def _mul(self, a, b):
        return (a * b) % self.n

    def _from_int(self, k):
        return k % self.n

    def _is_zero(self, a):
        return a == 0

    def _is_unit(self, a):
        return gcd(a, self.n) == 1

    def _inv(self, a):
        if gcd(a, self.n) != 1:
            raise NotAUnit(f"{a} is not a unit mod {self.n}")
        return pow(a, -1, self.n)

    def _exact_div(self, a, b):
        return (a * self._inv(b)) % self.n

    def _fmt(self, a):
        return str(a)

    def __str__(self):
        return f"Z/{self.n}"


def _exp_key(exp):
    return exp


@dataclass(frozen=True)
class PolyRing(Ring):
    """Sparse multivariate polynomials over a non-polynomial base ring.

    ``inverted`` lists the variables that have been made invertible; negative
    exponents may appear only there.  An empty ``inverted`` set is a plain
    polynomial ring.
    """

    base: Ring
    variables: tuple
    inverted: frozenset = frozenset()

    def __post_init__(self):
        if isinstance(self.base, PolyRing):
            raise AlgebraError("polynomial base must not itself be polynomial")
        if len(set(self.variables)) != len(self.variables):
            raise AlgebraError("duplicate variable names")
        if not self.inverted <= set(self.variables):
            raise UnknownVariable(
                f"inverted set {set(self.inverted)} not among variables"
            )

    @property
    def is_domain(self):
        return self.base.is_domain

    @property
    def characteristic(self):
        return self.base.characteristic

    def var_index(self, v: str) -> int:
        try:
            return self.variables.index(v)
        except ValueError:
            raise UnknownVariable(f"unknown variable {v!r} in {self}") from None

    def monomial(self, v: str, e: int = 1, coeff: int = 1) -> RingElement:
        i = self.var_index(v)
        if e < 0 and v not in self.inverted:
            raise NotAUnit(f"negative exponent on non-inverted variable {v!r}")
        c = self.base._from_int(coeff)
        if self.base._is_zero(c):
            return self.zero()
        exp = tuple(e if j == i else 0 for j in range(len(self.variables)))
        return self.el(((exp, c),))

    def variable(self, v: str) -> RingElement:
        return self.monomial(v, 1)

    def embed_base(self, x: RingElement) -> RingElement:
        if x.ring != self.base:
            raise RingMismatch(f"{x.ring} is not the base of {self}")
        return self.el(self._const(x.value))

    def _const(self, c):
        if self.base._is_zero(c):
            return ()
        return (((0,) * len(self.variables), c),)

    def _normalize(self, termmap):
        items = []
        for exp, c in termmap.items():
            if not self.base._is_zero(c):
                items.append((exp, c))
        items.sort(key=lambda t: t[0], reverse=True)
        return tuple(items)

    def _check_exponents(self, exp):
        for v, e in zip(self.variables, exp):
            if e < 0 and v not in self.inverted:
                raise NotAUnit(
                    f"negative exponent on non-inverted variable {v!r}"
                )

    def _add(self, a, b):
        acc = dict(a)
        for exp, c in b:
            cur = acc.get(exp)
            acc[exp] = self.base._add(cur, c) if cur is not None else c
        return self._normalize(acc)

    def _neg(self, a):
        return tuple((exp, self.base._neg(c)) for exp, c in a)

    def _mul(self, a, b):
        acc = {}
        for ea, ca in a:
            for eb, cb in b:
                e = tuple(x + y for x, y in zip(ea, eb))
                c = self.base._mul(ca, cb)
                cur = acc.get(e)
                acc[e] = self.base._add(cur, c) if cur is not None else c
        return self._normalize(acc)

    def _from_int(self, k):
        return self._const(self.base._from_int(k))

    def _is_zero(self, a):
        return a == ()

    def _is_unit(self, a):
        if len(a) != 1:
            return False
        exp, c = a[0]
        for v, e in zip(self.variables, exp):
            if e != 0 and v not in self.inverted:
                return False
        return self.base._is_unit(c)

    def _inv(self, a):
        if not self._is_unit(a):
            raise NotAUnit(f"{self._fmt(a)} is not a unit in {self}")
        exp, c = a[0]
        return ((tuple(-e for e in exp), self.base._inv(c)),)

    def _min_exps(self, a):
        nv = len(self.variables)
        mins = [0] * nv
        for i in range(nv):
            mins[i] = min(exp[i] for exp, _ in a)
        return tuple(mins)

    def _shift(self, a, delta):
        out = tuple(
            (tuple(e + d for e, d in zip(exp, delta)), c) for exp, c in a
        )
        return tuple(sorted(out, key=lambda t: t[0], reverse=True))

    def _exact_div(self, a, b):
        """Exact division a/b; valid only when the quotient exists."""
        if self._is_zero(b):
            raise AlgebraError("division by zero polynomial")
        if self._is_zero(a):
            return ()
        if not self.base.is_domain:
            raise AlgebraError("exact polynomial division needs a domain base")
        sa = self._min_exps(a)
        sb = self._min_exps(b)
        fa = self._shift(a, tuple(-x for x in sa))
        fb = self._shift(b, tuple(-x for x in sb))
        quot = {}
        rem = fa
        lead_b, cb = fb[0]
        while rem:
            lead_r, cr = rem[0]
            e = tuple(x - y for x, y in zip(lead_r, lead_b))
            if any(x < 0 for x in e):
                raise AlgebraError("inexact polynomial division")
            c = self.base._exact_div(cr, cb)
            quot[e] = c
            rem = self._add(rem, self._neg(self._mul(((e, c),), fb)))
        shift = tuple(x - y for x, y in zip(sa, sb))
        q = self._shift(self._normalize(quot), shift)
        for exp, _ in q:
            self._check_exponents(exp)
        return q

    def substitute(self, a, assignment: dict) -> RingElement:
        """Evaluate at a full assignment of every variable to base-ring values."""
        vals = []
        for v in self.variables:
            if v not in assignment:
                raise UnknownVariable(f"no value for variable {v!r}")
            x = assignment[v]
            if isinstance(x, int):
                x = self.base.from_int(x)
            if x.ring != self.base:
                raise RingMismatch("substitution values must lie in the base ring")
            vals.append(x.value)
        total = self.base._from_int(0)
        for exp, c in a:
            term = c
            for val, e in zip(vals, exp):
                if e == 0:
                    continue
                if e < 0:
                    val = self.base._inv(val)
                    e = -e
                for _ in range(e):
                    term = self.base._mul(term, val)
            total = self.base._add(total, term)
        return RingElement(self.base, total)

    def rename(self, a, mapping: dict, target: "PolyRing"):
        """Transport a value along a variable renaming into ``target``."""
        if target.base != self.base:
            raise RingMismatch("renaming must preserve the base ring")
        out = {}
        for exp, c in a:
            new = [0] * len(target.variables)
            for v, e in zip(self.variables, exp):
                if e == 0:
                    continue
                w = mapping.get(v, v)
                new[target.var_index(w)] = e
            target._check_exponents(tuple(new))
            key = tuple(new)
            cur = out.get(key)
            out[key] = self.base._add(cur, c) if cur is not None else c
        return target._normalize(out)

    def _fmt(self, a):
        if not a:
            return "0"
        parts = []
        for exp, c in a:
            factors = [
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.variables, exp)
                if e != 0
            ]
            cs = self.base._fmt(c)
            neg = cs.startswith("-")
            mag = cs[1:] if neg else cs
            if factors and mag == "1":
                body = "*".join(factors)
            elif factors:
                body = "*".join([mag] + factors)
            else:
                body = mag
            parts.append(("-" if neg else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += sign + body
        return text

    def __str__(self):
        vs = ",".join(
            v + "^-1" if v in self.inverted else v for v in self.variables
        )
        return f"{self.base}[{vs}]"


def invert_variable(ring: PolyRing, v: str) -> PolyRing:
    """Adjoin the inverse of ``v``; idempotent, elements embed unchanged."""
    if not isinstance(ring, PolyRing):
        raise AlgebraError("can only invert variables of a polynomial ring")
    ring.var_index(v)
    return PolyRing(ring.base, ring.variables, ring.inverted | {v})


def extend_with_variables(ring: Ring, names) -> PolyRing:
    """Adjoin fresh polynomial variables to any supported ring."""
    names = tuple(names)
    if isinstance(ring, PolyRing):
        clash = set(names) & set(ring.variables)
        if clash:
            raise AlgebraError(f"variables {clash} already present")
        return PolyRing(ring.base, ring.variables + names, ring.inverted)
    return PolyRing(ring, names)


def coerce(x: RingElement, target: Ring) -> RingElement:
    """Embed ``x`` into ``target`` when a canonical embedding exists."""
    if x.ring == target:
        return x
    if isinstance(target, PolyRing):
        if x.ring == target.base:
            return target.embed_base(x)
        if (
            isinstance(x.ring, PolyRing)
            and x.ring.base == target.base
            and set(x.ring.variables) <= set(target.variables)
            and x.ring.inverted <= target.inverted
        ):
            return target.el(x.ring.rename(x.value, {}, target))
    if isinstance(target, QQ) and isinstance(x.ring, ZZ):
        return target.el(Fraction(x.value))
    raise RingMismatch(f"no canonical embedding {x.ring} -> {target}")
