"""Exterior calculus on an invariant model with truncated-series coefficients.

Conventions
-----------
* A :class:`Form` maps basis monomials (sorted generator-index tuples) to
  :class:`~nilcohom.series.Series`.
* ``d`` acts on a monomial by the graded Leibniz rule from the generator
  differentials stored on the model; ``del`` and ``delbar`` are its bidegree
  pieces.
* A :class:`Beltrami` is a vector-valued form ``sum_i phi_i (x) Z_i``.
  Contraction is ``iota_phi(alpha) = sum_a phi_a ^ (E_a -| alpha)`` where
  ``E_a -| e_{a_0}^...^e_{a_k}`` removes slot ``j`` (with ``a_j = a``) with
  sign ``(-1)^j``.  For (0,1)-valued phi this is the even derivation that
  replaces each ``phi^i`` factor in place by ``phi_i``.
* An :class:`EndomorphismField` is a 2n x 2n matrix of series acting on
  generator 1-forms: column b is the image of ``e_b``.  Its simultaneous
  contraction is the induced algebra map on monomials.
"""

from __future__ import annotations

from math import factorial

from .gauss import ONE, ZERO, GaussRational
from .linalg import inverse as _mat_inverse
from .model import ComplexModel, bracket_of
from .monomial import basis, bidegree, conj_mono, insert_sign, mono_name, wedge_mono
from .series import Ring, Series

__all__ = [
    "Form",
    "Beltrami",
    "EndomorphismField",
    "wedge",
    "differential",
    "contract",
    "exp_contract",
    "lie_derivative_10",
    "bracket",
    "delbar_beltrami",
    "delbar_beltrami_dual",
    "simultaneous_contract",
    "inverse_endo",
    "ext_map_pair",
    "rho",
    "rho_projection",
    "type_decomposition",
    "deformed_delbar",
    "pullback_operator",
    "pullback_operator_direct",
    "conjugate",
]

CONST = Ring(0, 0)


def _acc(out: dict, key, val: Series):
    cur = out.get(key)
    if cur is None:
        if val.terms:
            out[key] = val
    else:
        s = cur + val
        if s.terms:
            out[key] = s
        else:
            del out[key]


def _scaled(s: Series, c) -> Series:
    if c == 1:
        return s
    if c == -1:
        return -s
    return s.scale(c)


# ----------------------------------------------------------------------


class Form:
    """Element of the invariant exterior algebra with series coefficients."""

    __slots__ = ("model", "ring", "terms")

    def __init__(self, model: ComplexModel, ring: Ring = CONST, terms: dict | None = None):
        self.model = model
        self.ring = ring
        self.terms = terms if terms is not None else {}

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, model, ring=CONST):
        return cls(model, ring, {})

    @classmethod
    def one(cls, model, ring=CONST):
        return cls(model, ring, {(): ring.one()})

    @classmethod
    def monomial(cls, model, mono, coef=1, ring=CONST):
        mono = tuple(mono)
        if sorted(set(mono)) != list(mono):
            # arbitrary order: normalize with sign
            cur = {(): 1}
            for x in mono:
                nxt = {}
                for m, s in cur.items():
                    r = insert_sign(m, x)
                    if r:
                        nxt[r[1]] = s * r[0]
                cur = nxt
            if not cur:
                return cls(model, ring, {})
            (mono, sign), = cur.items()
            coef = GaussRational.coerce(coef) * sign if not isinstance(coef, Series) else coef.scale(sign)
        c = coef if isinstance(coef, Series) else ring.const(coef)
        return cls(model, ring, {mono: c} if c.terms else {})

    @classmethod
    def gen(cls, model, a: int, ring=CONST, conj: bool = False):
        """Generator 1-form phi^{a+1} (or its conjugate); 0-based index."""
        return cls.monomial(model, (a + model.n if conj else a,), 1, ring)

    @classmethod
    def parse(cls, model, text: str, ring=CONST):
        """Parse ``c * p1^q2 + ...`` with constant coefficients."""
        import re

        s = text.strip()
        out = cls.zero(model, ring)
        if s in ("", "0"):
            return out
        pos = 0
        term_re = re.compile(
            r"\s*(?P<sign>[+-])?\s*(?:(?P<coef>\([^()]*\)|[0-9/ .+\-i]*?[0-9i])\s*\*\s*)?"
            r"(?P<mono>(?:[pq]\d+)(?:\s*\^\s*[pq]\d+)*|1)\s*"
        )
        first = True
        while pos < len(s):
            m = term_re.match(s, pos)
            if not m or m.end() == pos or (not first and not m.group("sign")):
                raise ValueError(f"cannot parse form near {s[pos:]!r}")
            first = False
            c = GaussRational.parse(m.group("coef")) if m.group("coef") else ONE
            if m.group("sign") == "-":
                c = -c
            mono = []
            if m.group("mono") != "1":
                for f in re.findall(r"([pq])(\d+)", m.group("mono")):
                    i = int(f[1]) - 1
                    if not 0 <= i < model.n:
                        raise ValueError(f"generator index out of range in {text!r}")
                    mono.append(i + model.n if f[0] == "q" else i)
            out = out + cls.monomial(model, mono, c, ring)
            pos = m.end()
        return out

    # arithmetic ------------------------------------------------------------
    def _check(self, other):
        if other.model is not self.model and other.model != self.model:
            raise ValueError("forms live on different models")
        if other.ring != self.ring:
            raise ValueError(f"series ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        if not other.terms:
            return self
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return Form(self.model, self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Form(self.model, self.ring, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Form":
        """Multiply by a scalar or a series."""
        if isinstance(c, Series):
            out = {}
            for k, v in self.terms.items():
                w = v * c
                if w.terms:
                    out[k] = w
            return Form(self.model, self.ring, out)
        c = GaussRational.coerce(c)
        if not c:
            return Form(self.model, self.ring, {})
        return Form(self.model, self.ring, {k: v.scale(c) for k, v in self.terms.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    # structure ----------------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, Form):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def bidegrees(self) -> set:
        n = self.model.n
        return {bidegree(m, n) for m in self.terms}

    def bidegree(self):
        """The unique bidegree of a pure-type nonzero form (None if zero)."""
        bd = self.bidegrees()
        if len(bd) > 1:
            raise ValueError(f"form is not of pure type: {sorted(bd)}")
        return next(iter(bd)) if bd else None

    def component(self, p: int, q: int) -> "Form":
        n = self.model.n
        return Form(self.model, self.ring, {m: v for m, v in self.terms.items() if bidegree(m, n) == (p, q)})

    def degree_part(self, k: int) -> "Form":
        return Form(self.model, self.ring, {m: v for m, v in self.terms.items() if len(m) == k})

    def coefficient(self, mono) -> Series:
        return self.terms.get(tuple(mono), self.ring.zero())

    def conjugate(self) -> "Form":
        return conjugate(self)

    def homogeneous(self, k: int) -> "Form":
        """Part of series order exactly k."""
        out = {}
        for m, v in self.terms.items():
            h = v.homogeneous(k)
            if h.terms:
                out[m] = h
        return Form(self.model, self.ring, out)

    def up_to(self, k: int) -> "Form":
        """Part of series order at most k (same ring)."""
        out = {}
        for m, v in self.terms.items():
            h = Series(v.ring, {e: c for e, c in v.terms.items() if sum(e) <= k})
            if h.terms:
                out[m] = h
        return Form(self.model, self.ring, out)

    def valuation(self):
        return min((v.valuation() for v in self.terms.values()), default=float("inf"))

    def promote(self, ring: Ring) -> "Form":
        if ring == self.ring:
            return self
        if self.ring.m == 0:
            return Form(self.model, ring, {m: ring.const(v.constant()) for m, v in self.terms.items() if v.constant()})
        out = {}
        for m, v in self.terms.items():
            w = v.promote(ring)
            if w.terms:
                out[m] = w
        return Form(self.model, ring, out)

    def truncate(self, N: int) -> "Form":
        ring = Ring(self.ring.m, N)
        return self.promote(ring)

    def evaluate(self, t) -> "Form":
        """Substitute exact parameter values; the result has constant coefficients."""
        out = {}
        for m, v in self.terms.items():
            c = v.evaluate(t)
            if c:
                out[m] = CONST.const(c)
        return Form(self.model, CONST, out)

    def constant_part(self) -> "Form":
        """Series order-0 part as a constant form."""
        out = {}
        for m, v in self.terms.items():
            c = v.constant()
            if c:
                out[m] = CONST.const(c)
        return Form(self.model, CONST, out)

    def vector(self, mono_basis) -> list:
        """Coefficient list over a monomial basis (series order 0 only for CONST)."""
        z = self.ring.zero()
        return [self.terms.get(m, z) for m in mono_basis]

    def const_vector(self, mono_basis) -> list:
        return [self.terms[m].constant() if m in self.terms else ZERO for m in mono_basis]

    @classmethod
    def from_vector(cls, model, mono_basis, vec, ring=CONST):
        out = {}
        for m, c in zip(mono_basis, vec):
            s = c if isinstance(c, Series) else ring.const(c)
            if s.terms:
                out[m] = s
        return cls(model, ring, out)

    def __repr__(self):
        return f"Form({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        n = self.model.n
        parts = []
        for m in sorted(self.terms, key=lambda m: (len(m), m)):
            parts.append(f"({self.terms[m]})*{mono_name(m, n)}")
        return " + ".join(parts)


# ----------------------------------------------------------------------


def wedge(a: Form, b: Form) -> Form:
    """Exterior product with series multiplication truncated at N."""
    a._check(b)
    out = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            r = wedge_mono(m1, m2)
            if r is None:
                continue
            s, m = r
            _acc(out, m, _scaled(c1 * c2, s))
    return Form(a.model, a.ring, out)


def _mono_image(model: ComplexModel, kind: str, mono: tuple) -> dict:
    """kind-differential of a basis monomial as {mono: GaussRational}."""
    cache = model.__dict__.setdefault("_dcache", {"d": {}, "del": {}, "delbar": {}})[kind]
    hit = cache.get(mono)
    if hit is not None:
        return hit
    gens = {"d": model.gen_d, "del": model.gen_del, "delbar": model.gen_delbar}[kind]
    out = {}
    for j, a in enumerate(mono):
        img = gens[a]
        if not img:
            continue
        prefix, suffix = mono[:j], mono[j + 1 :]
        sj = -1 if j & 1 else 1
        for m2, c in img.items():
            if m2 == "_bad":
                continue
            r = wedge_mono(prefix, m2)
            if r is None:
                continue
            r2 = wedge_mono(r[1], suffix)
            if r2 is None:
                continue
            v = c * (sj * r[0] * r2[0])
            key = r2[1]
            w = out.get(key)
            w = v if w is None else w + v
            if w:
                out[key] = w
            else:
                out.pop(key, None)
    cache[mono] = out
    return out


_KINDS = {"d": "d", "del": "del", "delbar": "delbar", "dbar": "delbar", "partial": "del"}


def differential(kind: str, a: Form) -> Form:
    """Apply d, del (partial) or delbar to a form."""
    try:
        k = _KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown differential {kind!r}") from None
    out = {}
    for m, c in a.terms.items():
        for m2, v in _mono_image(a.model, k, m).items():
            _acc(out, m2, c.scale(v))
    return Form(a.model, a.ring, out)


def d(a: Form) -> Form:
    return differential("d", a)


def delop(a: Form) -> Form:
    return differential("del", a)


def dbar(a: Form) -> Form:
    return differential("delbar", a)


def conjugate(a: Form) -> Form:
    n = a.model.n
    out = {}
    for m, c in a.terms.items():
        s, cm = conj_mono(m, n)
        _acc(out, cm, _scaled(c.conjugate(), s))
    return Form(a.model, a.ring, out)


# ----------------------------------------------------------------------


class Beltrami:
    """Vector-valued form sum_i components[i] (x) Z_i.

    With ``antiholomorphic=True`` the frame is conj(Z_i) instead; that is how
    conj(phi) is represented.
    """

    __slots__ = ("model", "ring", "components", "antiholomorphic")

    def __init__(self, model, components, ring=None, antiholomorphic=False):
        comps = tuple(components)
        if len(comps) != model.n:
            raise ValueError(f"expected {model.n} components, got {len(comps)}")
        if ring is None:
            ring = comps[0].ring if comps else CONST
        self.model = model
        self.ring = ring
        self.components = tuple(c.promote(ring) for c in comps)
        self.antiholomorphic = antiholomorphic

    @classmethod
    def zero(cls, model, ring=CONST, antiholomorphic=False):
        return cls(model, [Form.zero(model, ring)] * model.n, ring, antiholomorphic)

    @classmethod
    def from_matrix(cls, model, Phi, ring=CONST):
        """(0,1)-Beltrami with Phi[i][j] = coefficient of conj(phi^{j+1}) in component i."""
        n = model.n
        comps = []
        for i in range(n):
            f = Form.zero(model, ring)
            for j in range(n):
                c = Phi[i][j]
                if isinstance(c, Series) or GaussRational.coerce(c):
                    f = f + Form.monomial(model, (n + j,), c, ring)
            comps.append(f)
        return cls(model, comps, ring)

    def matrix(self) -> list:
        """Phi[i][j] (series) for a (0,1)-valued Beltrami."""
        n = self.model.n
        off = 0 if self.antiholomorphic else n
        return [[c.coefficient((off + j,)) for j in range(n)] for c in self.components]

    @property
    def offset(self) -> int:
        return self.model.n if self.antiholomorphic else 0

    def _check(self, other):
        if other.antiholomorphic != self.antiholomorphic:
            raise ValueError("cannot mix T^{1,0}- and T^{0,1}-valued forms")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        return Beltrami(self.model, [a + b for a, b in zip(self.components, other.components)], self.ring, self.antiholomorphic)

    __radd__ = __add__

    def __neg__(self):
        return Beltrami(self.model, [-a for a in self.components], self.ring, self.antiholomorphic)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return Beltrami(self.model, [a.scale(c) for a in self.components], self.ring, self.antiholomorphic)

    __mul__ = scale
    __rmul__ = scale

    def __bool__(self):
        return any(self.components)

    def is_zero(self):
        return not any(self.components)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, Beltrami):
            return NotImplemented
        return (
            self.antiholomorphic == other.antiholomorphic
            and self.ring == other.ring
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.components, self.antiholomorphic))

    def conjugate(self) -> "Beltrami":
        return Beltrami(self.model, [conjugate(c) for c in self.components], self.ring, not self.antiholomorphic)

    def bidegree(self):
        bd = set()
        for c in self.components:
            bd |= c.bidegrees()
        if len(bd) > 1:
            raise ValueError(f"Beltrami components of mixed type: {sorted(bd)}")
        return next(iter(bd)) if bd else None

    def form_degree(self) -> int:
        bd = self.bidegree()
        return sum(bd) if bd else 0

    def homogeneous(self, k):
        return Beltrami(self.model, [c.homogeneous(k) for c in self.components], self.ring, self.antiholomorphic)

    def up_to(self, k):
        return Beltrami(self.model, [c.up_to(k) for c in self.components], self.ring, self.antiholomorphic)

    def promote(self, ring):
        return Beltrami(self.model, [c.promote(ring) for c in self.components], ring, self.antiholomorphic)

    def truncate(self, N):
        return self.promote(Ring(self.ring.m, N))

    def evaluate(self, t):
        return Beltrami(self.model, [c.evaluate(t) for c in self.components], CONST, self.antiholomorphic)

    def valuation(self):
        return min((c.valuation() for c in self.components), default=float("inf"))

    def __repr__(self):
        return f"Beltrami({self})"

    def __str__(self):
        frame = "Zb" if self.antiholomorphic else "Z"
        parts = [f"[{c}] (x) {frame}{i + 1}" for i, c in enumerate(self.components) if c]
        return " + ".join(parts) if parts else "0"


def _contract_slots(mono: tuple, lo: int, hi: int):
    return [(j, x, mono[:j] + mono[j + 1 :]) for j, x in enumerate(mono) if lo <= x < hi]


def contract(phi: Beltrami, a: Form) -> Form:
    """iota_phi(a) = sum_a phi_a ^ (E_a -| a)."""
    model = a.model
    n = model.n
    lo = phi.offset
    hi = lo + n
    out = {}
    comps = phi.components
    for m, c in a.terms.items():
        for j, x, rest in _contract_slots(m, lo, hi):
            comp = comps[x - lo]
            if not comp.terms:
                continue
            sj = -1 if j & 1 else 1
            for m2, v in comp.terms.items():
                r = wedge_mono(m2, rest)
                if r is None:
                    continue
                _acc(out, r[1], _scaled(v * c, sj * r[0]))
    return Form(model, a.ring, out)


def exp_contract(phi: Beltrami, a: Form) -> Form:
    """e^{iota_phi} a = sum_k iota_phi^k a / k!."""
    total = a
    term = a
    k = 0
    while True:
        k += 1
        term = contract(phi, term)
        if not term.terms:
            break
        total = total + term.scale(GaussRational(1, 0) / factorial(k))
    return total


def lie_derivative_10(phi: Beltrami, a: Form) -> Form:
    """L^{1,0}_phi = iota_phi del - del iota_phi."""
    return contract(phi, delop(a)) - delop(contract(phi, a))


def bracket(phi: Beltrami, psi: Beltrami) -> Beltrami:
    """[phi, psi] for (0,1)-valued Beltrami differentials.

    Component k is the four-term expression evaluated at alpha = phi^k;
    the two terms involving psi -| (phi -| phi^k) vanish by type.
    """
    model = phi.model
    comps = []
    for k in range(model.n):
        ek = Form.gen(model, k, phi.ring)
        v = (
            -contract(psi, contract(phi, delop(ek)))
            + contract(phi, delop(psi.components[k]))
            + contract(psi, delop(phi.components[k]))
            - delop(contract(psi, contract(phi, ek)))
        )
        comps.append(v)
    return Beltrami(model, comps, phi.ring)


def bracket_rhs(phi: Beltrami, psi: Beltrami, alpha: Form) -> Form:
    """Right-hand side of the bracket identity applied to an arbitrary form."""
    return (
        -delop(contract(psi, contract(phi, alpha)))
        - contract(psi, contract(phi, delop(alpha)))
        + contract(phi, delop(contract(psi, alpha)))
        + contract(psi, delop(contract(phi, alpha)))
    )


def delbar_beltrami(phi: Beltrami) -> Beltrami:
    """delbar on T^{1,0}-valued forms through the frame.

    delbar(sum phi_i (x) Z_i) = sum delbar(phi_i) (x) Z_i
        + (-1)^q sum phi_i ^ conj(phi^j) (x) [conj Z_j, Z_i]^{1,0}.
    """
    model = phi.model
    n = model.n
    q = phi.form_degree()
    sign = -1 if q & 1 else 1
    comps = [dbar(c) for c in phi.components]
    for i in range(n):
        pi = phi.components[i]
        if not pi.terms:
            continue
        for j in range(n):
            br = {c: v for c, v in bracket_of(model, n + j, i).items() if c < n}
            if not br:
                continue
            w = wedge(pi, Form.gen(model, j, phi.ring, conj=True))
            for c, v in br.items():
                comps[c] = comps[c] + w.scale(v * sign)
    return Beltrami(model, comps, phi.ring)


def delbar_beltrami_dual(phi: Beltrami) -> Beltrami:
    """Same operator through the dual coframe: (delbar phi)^k =
    delbar(phi_k) + (-1)^q iota_phi(delbar phi^k)."""
    model = phi.model
    q = phi.form_degree()
    sign = -1 if q & 1 else 1
    comps = []
    for k in range(model.n):
        ek = Form.gen(model, k, phi.ring)
        comps.append(dbar(phi.components[k]) + contract(phi, dbar(ek)).scale(sign))
    return Beltrami(model, comps, phi.ring)


# ----------------------------------------------------------------------


class EndomorphismField:
    """2n x 2n series matrix acting on generator 1-forms (columns = images)."""

    __slots__ = ("model", "ring", "matrix", "_cols")

    def __init__(self, model, matrix, ring=None):
        self.model = model
        self.ring = ring or matrix[0][0].ring
        self.matrix = [list(r) for r in matrix]
        size = 2 * model.n
        self._cols = [
            [(a, self.matrix[a][b]) for a in range(size) if self.matrix[a][b].terms] for b in range(size)
        ]

    @classmethod
    def identity(cls, model, ring=CONST):
        size = 2 * model.n
        z, o = ring.zero(), ring.one()
        return cls(model, [[o if i == j else z for j in range(size)] for i in range(size)], ring)

    @classmethod
    def scalar(cls, model, c, ring=CONST):
        size = 2 * model.n
        z, cc = ring.zero(), ring.const(c)
        return cls(model, [[cc if i == j else z for j in range(size)] for i in range(size)], ring)

    @property
    def size(self):
        return 2 * self.model.n

    def __matmul__(self, other: "EndomorphismField") -> "EndomorphismField":
        s = self.size
        z = self.ring.zero()
        out = [[z] * s for _ in range(s)]
        for i in range(s):
            row = self.matrix[i]
            for j in range(s):
                acc = z
                for k in range(s):
                    if row[k].terms and other.matrix[k][j].terms:
                        acc = acc + row[k] * other.matrix[k][j]
                out[i][j] = acc
        return EndomorphismField(self.model, out, self.ring)

    def __add__(self, other):
        return EndomorphismField(self.model, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix, other.matrix)], self.ring)

    def __sub__(self, other):
        return EndomorphismField(self.model, [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix, other.matrix)], self.ring)

    def __eq__(self, other):
        return isinstance(other, EndomorphismField) and self.matrix == other.matrix

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.matrix))

    def is_identity(self) -> bool:
        return self == EndomorphismField.identity(self.model, self.ring)

    def constant_part(self):
        return [[x.constant() for x in r] for r in self.matrix]

    def evaluate(self, t) -> "EndomorphismField":
        return EndomorphismField(self.model, [[CONST.const(x.evaluate(t)) for x in r] for r in self.matrix], CONST)

    def image(self, b: int) -> Form:
        """Image of the generator e_b."""
        return Form(self.model, self.ring, {(a,): v for a, v in self._cols[b]})

    def __repr__(self):
        return f"EndomorphismField(n={self.model.n}, ring={self.ring})"


def simultaneous_contract(M: EndomorphismField, a: Form) -> Form:
    """Apply M to every 1-form factor of every monomial at once."""
    model = a.model
    out = {}
    one = a.ring.one()
    for m, c in a.terms.items():
        cur = {(): one}
        for b in m:
            col = M._cols[b]
            nxt = {}
            for mm, v in cur.items():
                for x, w in col:
                    r = insert_sign(mm, x)
                    if r is None:
                        continue
                    _acc(nxt, r[1], _scaled(v * w, r[0]))
            cur = nxt
            if not cur:
                break
        for mm, v in cur.items():
            _acc(out, mm, v * c)
    return Form(model, a.ring, out)


def inverse_endo(M: EndomorphismField) -> EndomorphismField:
    """Inverse in the truncated ring.

    For series coefficients the order-0 part must be the identity and the
    Neumann series is summed; constant matrices are inverted exactly.
    """
    ring = M.ring
    if ring.m == 0 or ring.N == 0:
        C = M.constant_part()
        inv = _mat_inverse(C)
        return EndomorphismField(M.model, [[ring.const(x) for x in r] for r in inv], ring)
    C = M.constant_part()
    size = M.size
    for i in range(size):
        for j in range(size):
            if C[i][j] != (ONE if i == j else ZERO):
                raise ValueError("order-0 part of the endomorphism is not the identity")
    Id = EndomorphismField.identity(M.model, ring)
    Q = Id - M
    out = Id
    power = Id
    for _ in range(ring.N):
        power = power @ Q
        if all(not x.terms for r in power.matrix for x in r):
            break
        out = out + power
    return out


def _require_01(phi: Beltrami):
    if phi.antiholomorphic:
        raise ValueError("expected a T^{1,0}-valued Beltrami differential")
    bd = phi.bidegree()
    if bd not in (None, (0, 1)):
        raise ValueError(f"expected a (0,1)-valued Beltrami differential, got {bd}")


def exp_matrix(phi: Beltrami) -> EndomorphismField:
    """e_i -> e_i + phi_i, conj e_j fixed: e^{iota_phi} as a simultaneous contraction."""
    _require_01(phi)
    n = phi.model.n
    ring = phi.ring
    Phi = phi.matrix()
    M = EndomorphismField.identity(phi.model, ring).matrix
    for i in range(n):
        for j in range(n):
            M[n + j][i] = Phi[i][j]
    return EndomorphismField(phi.model, M, ring)


def pair_matrix(phi: Beltrami) -> EndomorphismField:
    """e_i -> e_i + phi -| e_i and conj e_j -> conj e_j + conj(phi) -| conj e_j."""
    _require_01(phi)
    n = phi.model.n
    ring = phi.ring
    Phi = phi.matrix()
    M = EndomorphismField.identity(phi.model, ring).matrix
    for i in range(n):
        for j in range(n):
            M[n + j][i] = Phi[i][j]
            M[i][n + j] = Phi[j][i].conjugate()
    return EndomorphismField(phi.model, M, ring)


def one_minus_phibar_phi(phi: Beltrami) -> EndomorphismField:
    """1 - conj(phi) phi as a simultaneous contraction.

    Identity on phi^i; on conj(phi^j) it subtracts iota_phi iota_phibar, i.e.
    conj e_j -> conj e_j - sum_k (Phibar Phi)_{jk} conj e_k.
    """
    _require_01(phi)
    n = phi.model.n
    ring = phi.ring
    Phi = phi.matrix()
    M = EndomorphismField.identity(phi.model, ring).matrix
    for j in range(n):
        for k in range(n):
            acc = ring.zero()
            for l in range(n):
                if Phi[j][l].terms and Phi[l][k].terms:
                    acc = acc + Phi[j][l].conjugate() * Phi[l][k]
            M[n + k][n + j] = M[n + k][n + j] - acc
    return EndomorphismField(phi.model, M, ring)


def ext_map_pair(phi: Beltrami, a: Form) -> Form:
    """e^{iota_phi | iota_phibar}: simultaneous substitution of both frames."""
    return simultaneous_contract(pair_matrix(phi), a)


def rho(phi: Beltrami, a: Form) -> Form:
    """Extension map A^{p,q}(X_0) -> A^{p,q}(X_t): ext_map_pair o (1 - phibar phi)^{-1} -|."""
    C = inverse_endo(one_minus_phibar_phi(phi))
    return ext_map_pair(phi, simultaneous_contract(C, a))


def type_decomposition(phi: Beltrami, a: Form) -> dict:
    """Split a form into its X_t-bidegree pieces.

    Writes a in the coframe theta = pair_matrix(phi)(e) and groups by type;
    returns {(p, q): form expressed back in the X_0 basis}.
    """
    E = pair_matrix(phi)
    Einv = inverse_endo(E)
    coords = simultaneous_contract(Einv, a)
    out = {}
    for bd in sorted(coords.bidegrees()):
        piece = simultaneous_contract(E, coords.component(*bd))
        if piece.terms:
            out[bd] = piece
    return out


def rho_projection(phi: Beltrami, a: Form) -> Form:
    """Independent route for rho: the (p,q)_t piece of e^{iota_phi} a."""
    bd = a.bidegree()
    if bd is None:
        return a
    return type_decomposition(phi, exp_contract(phi, a)).get(bd, Form.zero(a.model, a.ring))


def deformed_delbar(phi: Beltrami, a: Form) -> Form:
    """(delbar - L^{1,0}_phi)(a) = delbar a + del iota_phi a - iota_phi del a."""
    return dbar(a) - lie_derivative_10(phi, a)


def pullback_operator(phi: Beltrami, a: Form, which: str = "delbar_t") -> Form:
    """Pullback of delbar_t (or del_t) to X_0 through ext_map_pair.

    delbar_t: (1 - phibar phi)^{-1} -| (delbar + [del, iota_phi]) (1 - phibar phi) -|
    del_t: its conjugate, conj o D o conj.
    """
    if which in ("del_t", "del"):
        return conjugate(pullback_operator(phi, conjugate(a), "delbar_t"))
    if which not in ("delbar_t", "delbar"):
        raise ValueError(f"unknown deformed operator {which!r}")
    C = one_minus_phibar_phi(phi)
    Cinv = inverse_endo(C)
    return simultaneous_contract(Cinv, deformed_delbar(phi, simultaneous_contract(C, a)))


def pullback_operator_direct(phi: Beltrami, a: Form, which: str = "delbar_t") -> Form:
    """Same operator computed as the typed piece of E^{-1} d E a."""
    E = pair_matrix(phi)
    Einv = inverse_endo(E)
    out = Form.zero(a.model, a.ring)
    for p, q in sorted(a.bidegrees()):
        g = simultaneous_contract(Einv, d(simultaneous_contract(E, a.component(p, q))))
        tgt = (p, q + 1) if which in ("delbar_t", "delbar") else (p + 1, q)
        out = out + g.component(*tgt)
    return out
