"""Invariant-form complex models given by structure equations.

A model is determined by the 2-forms d(phi^k), k = 1..n, on n complex
generator 1-forms phi^1..phi^n.  d(conj phi^k) is the conjugate of d(phi^k).
Generator indices are 0-based throughout the code: index i < n is phi^{i+1},
index n + i is its conjugate.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IntegrabilityError, ModelError, ModelSyntaxError, NilpotencyError
from .gauss import ONE, GaussRational
from .monomial import bidegree, conj_mono, insert_sign, mono_name

__all__ = [
    "StructureTerm",
    "ComplexModel",
    "IntegrabilityReport",
    "parse_model",
    "serialize",
    "check_integrability",
    "catalog",
    "catalog_names",
    "torus_model",
    "frame_structure",
]


@dataclass(frozen=True)
class StructureTerm:
    """coefficient * f_1 ^ f_2 where each factor is (index, conjugated)."""

    coefficient: GaussRational
    factors: tuple

    def __post_init__(self):
        if not self.coefficient:
            raise ModelError("structure term with zero coefficient")
        keys = [_factor_key(f) for f in self.factors]
        if any(a >= b for a, b in zip(keys, keys[1:])):
            raise ModelError(f"factors not strictly ordered: {self.factors}")

    def monomial(self, n: int) -> tuple:
        return tuple(i + n if c else i for i, c in self.factors)


def _factor_key(f):
    i, conj = f
    return (1 if conj else 0, i)


def _add(target: dict, key, val):
    s = target.get(key)
    s = val if s is None else s + val
    if s:
        target[key] = s
    else:
        target.pop(key, None)


class ComplexModel:
    """Structure equations plus cached generator differentials.

    The constructor only checks index ranges; :func:`parse_model` and
    :meth:`validate` check integrability and d^2 = 0.
    """

    def __init__(self, n: int, d_on_generators: dict | None = None, name: str = ""):
        if n < 1:
            raise ModelError("dimension must be positive")
        self.n = n
        self.name = name or f"model{n}"
        terms = {}
        for k, lst in (d_on_generators or {}).items():
            if not 0 <= k < n:
                raise ModelError(f"generator index {k} out of range")
            for t in lst:
                for i, _ in t.factors:
                    if not 0 <= i < n:
                        raise ModelError(f"factor index {i} out of range")
            if lst:
                terms[k] = tuple(lst)
        self.d_on_generators = terms
        self._build()

    # ------------------------------------------------------------------
    def _build(self):
        n = self.n
        d = [dict() for _ in range(2 * n)]
        for k, lst in self.d_on_generators.items():
            for t in lst:
                _add(d[k], t.monomial(n), t.coefficient)
        for k in range(n):
            for mono, c in d[k].items():
                s, cm = conj_mono(mono, n)
                _add(d[k + n], cm, c.conjugate() * s)
        self.gen_d = d
        # split by bidegree: del raises p by one, delbar raises q by one
        self.gen_del, self.gen_delbar = [], []
        for a in range(2 * n):
            p0 = 1 if a < n else 0
            dl, db = {}, {}
            for mono, c in d[a].items():
                p, _ = bidegree(mono, n)
                if p == p0 + 1:
                    dl[mono] = c
                elif p == p0:
                    db[mono] = c
                else:
                    db.setdefault("_bad", {})[mono] = c
            self.gen_del.append(dl)
            self.gen_delbar.append(db)

    def is_integrable(self) -> bool:
        return all("_bad" not in db for db in self.gen_delbar)

    def validate(self):
        rep = check_integrability(self)
        if not rep.integrable:
            bad = [k for k, c in rep.components.items() if c[(0, 2)]]
            raise IntegrabilityError(
                "d p%d has a (0,2)-component: %s"
                % (bad[0] + 1, _fmt_2form(rep.components[bad[0]][(0, 2)], self.n))
            )
        if not rep.nilpotent:
            k, res = next((k, r) for k, r in rep.d2_residual.items() if r)
            raise NilpotencyError(
                "d^2 p%d = %s != 0" % (k + 1, _fmt_2form(res, self.n))
            )
        return self

    def __eq__(self, other):
        return (
            isinstance(other, ComplexModel)
            and self.n == other.n
            and self.gen_d[: self.n] == other.gen_d[: other.n]
        )

    def __hash__(self):
        return hash((self.n, tuple(frozenset(x.items()) for x in self.gen_d[: self.n])))

    def __repr__(self):
        return f"ComplexModel({self.name!r}, n={self.n})"

    def is_abelian(self) -> bool:
        return not any(self.gen_d)


# ----------------------------------------------------------------------
# d^2 on generators with constant coefficients


def _d_mono(model: ComplexModel, mono: tuple) -> dict:
    out = {}
    for j, a in enumerate(mono):
        for m2, c in model.gen_d[a].items():
            # prefix ^ d e_a ^ suffix, sign (-1)^j
            prefix, suffix = mono[:j], mono[j + 1 :]
            cur = {prefix: ONE}
            for x in m2 + suffix:
                nxt = {}
                for m, v in cur.items():
                    r = insert_sign(m, x)
                    if r is not None:
                        nxt[r[1]] = v * r[0]
                cur = nxt
            for m, v in cur.items():
                _add(out, m, v * c * (-1 if j & 1 else 1))
    return out


def _fmt_2form(terms: dict, n: int) -> str:
    if not terms:
        return "0"
    return " + ".join(f"{c} * {mono_name(m, n)}" for m, c in sorted(terms.items()))


@dataclass
class IntegrabilityReport:
    """Per generator: bidegree components of d phi^k and the d^2 residual."""

    components: dict = field(default_factory=dict)
    d2_residual: dict = field(default_factory=dict)

    @property
    def integrable(self) -> bool:
        return all(not c[(0, 2)] for c in self.components.values())

    @property
    def nilpotent(self) -> bool:
        return all(not r for r in self.d2_residual.values())

    @property
    def passed(self) -> bool:
        return self.integrable and self.nilpotent

    def __str__(self):
        lines = []
        for k in sorted(self.components):
            c = self.components[k]
            lines.append(
                "p%d\t(2,0)=%s\t(1,1)=%s\t(0,2)=%s\td2=%s"
                % (
                    k + 1,
                    _fmt_2form(c[(2, 0)], self._n),
                    _fmt_2form(c[(1, 1)], self._n),
                    _fmt_2form(c[(0, 2)], self._n),
                    _fmt_2form(self.d2_residual[k], self._n),
                )
            )
        lines.append(f"PASS={'yes' if self.passed else 'no'}")
        return "\n".join(lines)


def check_integrability(m: ComplexModel) -> IntegrabilityReport:
    rep = IntegrabilityReport()
    rep._n = m.n
    for k in range(m.n):
        comps = {(2, 0): {}, (1, 1): {}, (0, 2): {}}
        for mono, c in m.gen_d[k].items():
            comps[bidegree(mono, m.n)][mono] = c
        rep.components[k] = comps
        res = {}
        for mono, c in m.gen_d[k].items():
            for m3, v in _d_mono(m, mono).items():
                _add(res, m3, v * c)
        rep.d2_residual[k] = res
    return rep


# ----------------------------------------------------------------------
# parsing

_FACTOR = r"([pq])(\d+)"
_TERM_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?:(?P<coef>\([^()]*\)|[0-9/ .+\-i]*?[0-9i])\s*\*\s*)?"
    rf"{_FACTOR}\s*\^\s*{_FACTOR}\s*"
)


def _parse_rhs(rhs: str, n: int, lineno: int, col0: int):
    terms = {}
    pos = 0
    s = rhs.rstrip()
    if s.strip() == "0":
        return []
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos:
            raise ModelSyntaxError(f"cannot parse term near {s[pos:].strip()!r}", lineno, col0 + pos + 1)
        if not first and m.group("sign") is None:
            raise ModelSyntaxError("missing '+' or '-' between terms", lineno, col0 + pos + 1)
        first = False
        coef = ONE
        if m.group("coef"):
            try:
                coef = GaussRational.parse(m.group("coef"))
            except ValueError:
                raise ModelSyntaxError(
                    f"bad coefficient {m.group('coef')!r}", lineno, col0 + m.start("coef") + 1
                ) from None
        if m.group("sign") == "-":
            coef = -coef
        f1 = (int(m.group(4)) - 1, m.group(3) == "q")
        f2 = (int(m.group(6)) - 1, m.group(5) == "q")
        for f, g in ((f1, 3), (f2, 5)):
            if not 0 <= f[0] < n:
                raise ModelSyntaxError(
                    f"generator index {f[0] + 1} out of range 1..{n}", lineno, col0 + m.start(g) + 1
                )
        if f1 == f2:
            raise ModelSyntaxError("repeated factor (term is identically zero)", lineno, col0 + m.start(3) + 1)
        if _factor_key(f1) > _factor_key(f2):
            f1, f2 = f2, f1
            coef = -coef
        _add(terms, (f1, f2), coef)
        pos = m.end()
    return [StructureTerm(c, fs) for fs, c in sorted(terms.items(), key=lambda kv: [_factor_key(f) for f in kv[0]])]


def _statements(text: str):
    """Yield (lineno, col0, statement) for each ';'- or newline-separated piece."""
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        col = 0
        for piece in line.split(";"):
            stripped = piece.strip()
            if stripped:
                yield lineno, col + (len(piece) - len(piece.lstrip())), stripped
            col += len(piece) + 1


_D_LINE = re.compile(r"^d\s+([pq])(\d+)\s*=\s*(.*)$")


def parse_model(text: str, validate: bool = True) -> ComplexModel:
    """Parse a model file; see the README for the grammar."""
    n = None
    name = ""
    eqs = {}
    for lineno, col0, st in _statements(text):
        if st.startswith("dim"):
            mm = re.fullmatch(r"dim\s+(\d+)", st)
            if not mm:
                raise ModelSyntaxError("expected 'dim <n>'", lineno, col0 + 1)
            if n is not None:
                raise ModelSyntaxError("duplicate 'dim' line", lineno, col0 + 1)
            n = int(mm.group(1))
            if n < 1:
                raise ModelSyntaxError("dimension must be positive", lineno, col0 + 5)
        elif st.startswith("name"):
            mm = re.fullmatch(r"name\s+(.+)", st)
            if not mm:
                raise ModelSyntaxError("expected 'name <string>'", lineno, col0 + 1)
            name = mm.group(1).strip()
        elif st.startswith("d"):
            if n is None:
                raise ModelSyntaxError("'dim' must come before d-lines", lineno, col0 + 1)
            mm = _D_LINE.match(st)
            if not mm:
                raise ModelSyntaxError("expected 'd p<k> = <terms>'", lineno, col0 + 1)
            if mm.group(1) == "q":
                raise ModelSyntaxError(
                    "d q<k> is determined by conjugation; give d p<k> instead", lineno, col0 + 3
                )
            k = int(mm.group(2)) - 1
            if not 0 <= k < n:
                raise ModelSyntaxError(f"generator index {k + 1} out of range 1..{n}", lineno, col0 + 4)
            if k in eqs:
                raise ModelSyntaxError(f"duplicate equation for p{k + 1}", lineno, col0 + 1)
            eqs[k] = _parse_rhs(mm.group(3), n, lineno, col0 + mm.start(3))
        else:
            raise ModelSyntaxError(f"unrecognized statement {st!r}", lineno, col0 + 1)
    if n is None:
        raise ModelSyntaxError("missing 'dim <n>'", 1, 1)
    model = ComplexModel(n, eqs, name)
    return model.validate() if validate else model


def _fmt_coef(c: GaussRational) -> str:
    if c.is_real():
        return str(c.re)
    if not c.re:
        return f"{c.im} i"
    sign = "+" if c.im > 0 else "-"
    return f"({c.re} {sign} {abs(c.im)} i)"


def serialize(m: ComplexModel) -> str:
    """Canonical text form; parse_model(serialize(m)) == m."""
    lines = [f"dim {m.n}"]
    if m.name:
        lines.append(f"name {m.name}")
    for k in range(m.n):
        terms = m.d_on_generators.get(k)
        if not terms:
            continue
        parts = []
        for i, t in enumerate(terms):
            c = t.coefficient
            neg = c.is_real() and c.re < 0
            body = f"{_fmt_coef(-c if neg else c)} * " + "^".join(
                f"{'q' if cj else 'p'}{ix + 1}" for ix, cj in t.factors
            )
            if i == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        lines.append(f"d p{k + 1} = " + " ".join(parts))
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# catalog

_BUILTIN = {
    "iwasawa3": "dim 3\nname iwasawa3\nd p3 = -1 * p1^p2\n",
    "torus1": "dim 1\nname torus1\n",
    "torus2": "dim 2\nname torus2\n",
    "torus3": "dim 3\nname torus3\n",
    "kodaira-thurston": "dim 2\nname kodaira-thurston\nd p2 = p1^q1\n",
}

_CACHE: dict = {}


def torus_model(n: int) -> ComplexModel:
    """The complex torus of dimension n (d = 0)."""
    key = ("torus", n)
    if key not in _CACHE:
        _CACHE[key] = ComplexModel(n, {}, f"torus{n}")
    return _CACHE[key]


def _extra_dir_models():
    out = {}
    root = os.environ.get("NILCOHOM_CATALOG_DIR")
    if root and Path(root).is_dir():
        for p in sorted(Path(root).glob("*.model")):
            out[p.stem] = p
    return out


def catalog_names() -> list:
    return sorted(set(_BUILTIN) | set(_extra_dir_models()))


def catalog(name: str) -> ComplexModel:
    """Built-in model by name.  Files ``<name>.model`` in
    ``$NILCOHOM_CATALOG_DIR`` extend the catalog."""
    if name in _BUILTIN:
        if name not in _CACHE:
            _CACHE[name] = parse_model(_BUILTIN[name])
        return _CACHE[name]
    extra = _extra_dir_models()
    if name in extra:
        m = parse_model(extra[name].read_text(encoding="utf-8"))
        if not m.name or m.name == f"model{m.n}":
            m.name = name
        return m
    raise KeyError(f"unknown model {name!r}; known: {', '.join(catalog_names())}")


def load_model(source: str) -> ComplexModel:
    """Catalog name or path to a model file."""
    p = Path(source)
    if p.is_file():
        m = parse_model(p.read_text(encoding="utf-8"))
        if m.name == f"model{m.n}":
            m.name = p.stem
        return m
    return catalog(source)


# ----------------------------------------------------------------------
# frame brackets


def frame_structure(m: ComplexModel) -> dict:
    """Brackets of the dual frame {E_a}: {(a, b): {c: coeff}} for a < b.

    With d alpha(X, Y) = -alpha([X, Y]) on invariant data and monomials
    carrying no normalisation, [E_a, E_b] = -sum_c (coeff of e_a^e_b in
    d e_c) E_c.  Index a < n is Z_{a+1}, n + i is conj Z_{i+1}.
    """
    if hasattr(m, "_frame"):
        return m._frame
    out = {}
    for c in range(2 * m.n):
        for (a, b), v in m.gen_d[c].items():
            out.setdefault((a, b), {})[c] = -v
    m._frame = out
    return out


def bracket_of(m: ComplexModel, a: int, b: int) -> dict:
    """[E_a, E_b] as {c: coeff} for any ordered pair."""
    if a == b:
        return {}
    fs = frame_structure(m)
    if a < b:
        return dict(fs.get((a, b), {}))
    return {c: -v for c, v in fs.get((b, a), {}).items()}
