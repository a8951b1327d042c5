"""Finite-dimensional Hodge theory on the invariant double complex.

The monomial basis is declared orthonormal, so adjoints are conjugate
transposes and every Laplacian, projector and Green operator is an exact
matrix over Q(i).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .algebra import CONST, Form, _mono_image, conjugate
from .errors import HypothesisError, NotSolvableError
from .gauss import ZERO, GaussRational
from .linalg import Mat, projector, span_contains, subspace_intersection
from .model import ComplexModel
from .monomial import basis, total_basis
from .series import Series

__all__ = [
    "OperatorMatrix",
    "CohomologyTable",
    "LemmaReport",
    "operator_matrix",
    "de_rham_matrix",
    "laplacian",
    "harmonic_and_green",
    "cohomology",
    "cohomology_by_laplacians",
    "diagram_map",
    "lemma_variants",
    "lemma_condition",
    "solve_ddbar",
    "ddbar_star_green",
    "canonical_representative",
    "solve_system",
    "apply_matrix",
    "cohomology_tsv",
    "lemma_tsv",
    "THEORIES",
]

THEORIES = ("dbar", "del", "BC", "A")

_OPS = {
    "d": ("d", (1, 0), (0, 1)),
    "del": ("del", (1, 0)),
    "delbar": ("delbar", (0, 1)),
    "dbar": ("delbar", (0, 1)),
    "deldelbar": ("deldelbar", (1, 1)),
    "ddbar": ("deldelbar", (1, 1)),
}


@dataclass
class OperatorMatrix:
    """An operator restricted to a bidegree, in the monomial bases."""

    name: str
    source: tuple
    target: tuple
    matrix: Mat
    source_basis: tuple = ()
    target_basis: tuple = ()

    @property
    def H(self) -> Mat:
        return self.matrix.H

    def rank(self) -> int:
        return self.matrix.rank()


def _cache(m: ComplexModel) -> dict:
    return m.__dict__.setdefault("_hodge_cache", {})


def _in_range(m, p, q):
    return 0 <= p <= m.n and 0 <= q <= m.n


def _raw(m: ComplexModel, kind: str, p: int, q: int, dp: int, dq: int) -> Mat:
    """Matrix of a differential from A^{p,q} to A^{p+dp,q+dq} (empty if out of range)."""
    key = ("raw", kind, p, q, dp, dq)
    c = _cache(m)
    if key in c:
        return c[key]
    src = basis(m.n, p, q) if _in_range(m, p, q) else ()
    tgt = basis(m.n, p + dp, q + dq) if _in_range(m, p + dp, q + dq) else ()
    idx = {mono: i for i, mono in enumerate(tgt)}
    rows = [[ZERO] * len(src) for _ in range(len(tgt))]
    for j, mono in enumerate(src):
        if kind == "deldelbar":
            img = {}
            for m1, c1 in _mono_image(m, "delbar", mono).items():
                for m2, c2 in _mono_image(m, "del", m1).items():
                    img[m2] = img.get(m2, ZERO) + c1 * c2
        else:
            img = _mono_image(m, kind, mono)
        for m2, v in img.items():
            i = idx.get(m2)
            if i is not None and v:
                rows[i][j] = rows[i][j] + v
    M = Mat(rows, len(tgt), len(src))
    c[key] = M
    return M


def _del(m, p, q):
    return _raw(m, "del", p, q, 1, 0)


def _dbar(m, p, q):
    return _raw(m, "delbar", p, q, 0, 1)


def _dd(m, p, q):
    return _raw(m, "deldelbar", p, q, 1, 1)


def _dim(m, p, q):
    return len(basis(m.n, p, q)) if _in_range(m, p, q) else 0


def operator_matrix(m: ComplexModel, which: str, p: int, q: int) -> OperatorMatrix:
    """Matrix of d, del, delbar or deldelbar on A^{p,q}.

    For ``d`` the target is A^{p+1,q} (+) A^{p,q+1}, stacked in that order.
    """
    if not _in_range(m, p, q):
        raise ValueError(f"bidegree ({p},{q}) out of range for n={m.n}")
    if which not in _OPS:
        raise ValueError(f"unknown operator {which!r}")
    kind = _OPS[which][0]
    src = basis(m.n, p, q)
    if kind == "d":
        A, B = _del(m, p, q), _dbar(m, p, q)
        tb = (basis(m.n, p + 1, q) if p < m.n else ()) + (basis(m.n, p, q + 1) if q < m.n else ())
        return OperatorMatrix("d", (p, q), (p + q + 1,), Mat.vstack(A, B), src, tb)
    dp, dq = _OPS[which][1]
    M = _raw(m, kind, p, q, dp, dq)
    tgt = basis(m.n, p + dp, q + dq) if _in_range(m, p + dp, q + dq) else ()
    return OperatorMatrix(kind, (p, q), (p + dp, q + dq), M, src, tgt)


def de_rham_matrix(m: ComplexModel, k: int) -> Mat:
    """d from total degree k to k+1 in the grouped total bases."""
    key = ("dR", k)
    c = _cache(m)
    if key in c:
        return c[key]
    src = total_basis(m.n, k) if 0 <= k <= 2 * m.n else ()
    tgt = total_basis(m.n, k + 1) if 0 <= k + 1 <= 2 * m.n else ()
    idx = {mono: i for i, mono in enumerate(tgt)}
    rows = [[ZERO] * len(src) for _ in range(len(tgt))]
    for j, mono in enumerate(src):
        for m2, v in _mono_image(m, "d", mono).items():
            rows[idx[m2]][j] = v
    M = Mat(rows, len(tgt), len(src))
    c[key] = M
    return M


# ----------------------------------------------------------------------
# Laplacians


def laplacian(m: ComplexModel, kind: str, p: int, q: int) -> Mat:
    """Hermitian PSD Laplacian on A^{p,q}: kind in dbar/del/BC/A (or dR with p = k)."""
    key = ("lap", kind, p, q)
    c = _cache(m)
    if key in c:
        return c[key]
    if kind == "dR":
        k = p
        a, b = de_rham_matrix(m, k - 1), de_rham_matrix(m, k)
        L = a @ a.H + b.H @ b
        c[key] = L
        return L
    if not _in_range(m, p, q):
        raise ValueError(f"bidegree ({p},{q}) out of range")
    if kind in ("dbar", "delbar"):
        a, b = _dbar(m, p, q - 1), _dbar(m, p, q)
        L = a @ a.H + b.H @ b
    elif kind in ("del", "partial"):
        a, b = _del(m, p - 1, q), _del(m, p, q)
        L = a @ a.H + b.H @ b
    elif kind == "BC":
        dd_in, dd_out = _dd(m, p - 1, q - 1), _dd(m, p, q)
        db, dl = _dbar(m, p, q), _del(m, p, q)
        x = _del(m, p - 1, q + 1)  # (p-1,q+1) -> (p,q+1)
        y = _dbar(m, p + 1, q - 1)  # (p+1,q-1) -> (p+1,q)
        L = (
            dd_in @ dd_in.H
            + dd_out.H @ dd_out
            + db.H @ x @ x.H @ db
            + dl.H @ y @ y.H @ dl
            + db.H @ db
            + dl.H @ dl
        )
    elif kind == "A":
        dl_in, db_in = _del(m, p - 1, q), _dbar(m, p, q - 1)
        dd_in, dd_out = _dd(m, p - 1, q - 1), _dd(m, p, q)
        u = _dbar(m, p - 1, q)  # (p-1,q) -> (p-1,q+1)
        v = _del(m, p, q - 1)  # (p,q-1) -> (p+1,q-1)
        L = (
            dl_in @ dl_in.H
            + db_in @ db_in.H
            + dd_out.H @ dd_out
            + dd_in @ dd_in.H
            + dl_in @ u.H @ u @ dl_in.H
            + db_in @ v.H @ v @ db_in.H
        )
    else:
        raise ValueError(f"unknown Laplacian {kind!r}")
    c[key] = L
    return L


def harmonic_and_green(m: ComplexModel, kind: str, p: int, q: int):
    """(H, G): orthogonal projector onto ker(Laplacian) and the Green operator.

    L G = G L = 1 - H and G H = 0, exactly.
    """
    key = ("HG", kind, p, q)
    c = _cache(m)
    if key in c:
        return c[key]
    L = laplacian(m, kind, p, q)
    dim = L.nrows
    Hm = projector(L.kernel(), dim)
    G = (L + Hm).inverse() - Hm if dim else Mat.zeros(0, 0)
    c[key] = (Hm, G)
    return Hm, G


def harmonic_basis(m: ComplexModel, kind: str, p: int, q: int):
    return laplacian(m, kind, p, q).kernel()


# ----------------------------------------------------------------------
# cohomology


@dataclass
class CohomologyTable:
    name: str
    n: int
    h: dict = field(default_factory=dict)  # (theory, p, q) -> int
    b: dict = field(default_factory=dict)  # k -> int

    def get(self, theory: str, p: int, q: int) -> int:
        return self.h[(theory, p, q)]

    def check_dualities(self) -> list:
        """Violations of the standard symmetries (empty when all hold)."""
        n = self.n
        bad = []
        for p in range(n + 1):
            for q in range(n + 1):
                h = self.h
                if h[("BC", p, q)] != h[("BC", q, p)]:
                    bad.append(f"h_BC^{{{p},{q}}} != h_BC^{{{q},{p}}}")
                if h[("BC", p, q)] != h[("A", n - q, n - p)]:
                    bad.append(f"h_BC^{{{p},{q}}} != h_A^{{{n - q},{n - p}}}")
                if h[("dbar", p, q)] != h[("del", q, p)]:
                    bad.append(f"h_dbar^{{{p},{q}}} != h_del^{{{q},{p}}}")
                if h[("dbar", p, q)] != h[("dbar", n - p, n - q)]:
                    bad.append(f"h_dbar^{{{p},{q}}} != h_dbar^{{{n - p},{n - q}}}")
        for k in range(2 * n + 1):
            if self.b[k] != self.b[2 * n - k]:
                bad.append(f"b_{k} != b_{2 * n - k}")
        return bad

    def at_defect(self, k: int) -> int:
        s = sum(self.h[("BC", p, k - p)] + self.h[("A", p, k - p)] for p in range(self.n + 1) if 0 <= k - p <= self.n)
        return s - 2 * self.b[k]


def _h_dbar(m, p, q):
    return _dbar(m, p, q).nullity() - _dbar(m, p, q - 1).rank()


def _h_del(m, p, q):
    return _del(m, p, q).nullity() - _del(m, p - 1, q).rank()


def _h_bc(m, p, q):
    both = Mat.vstack(_del(m, p, q), _dbar(m, p, q))
    return both.nullity() - _dd(m, p - 1, q - 1).rank()


def _h_a(m, p, q):
    ex = Mat.hstack(_del(m, p - 1, q), _dbar(m, p, q - 1))
    return _dd(m, p, q).nullity() - ex.rank()


def _b(m, k):
    return de_rham_matrix(m, k).nullity() - de_rham_matrix(m, k - 1).rank()


def cohomology(m: ComplexModel) -> CohomologyTable:
    """All Dolbeault, conjugate-Dolbeault, Bott-Chern, Aeppli and de Rham numbers by rank-nullity."""
    c = _cache(m)
    if "table" in c:
        return c["table"]
    t = CohomologyTable(m.name, m.n)
    for p in range(m.n + 1):
        for q in range(m.n + 1):
            t.h[("dbar", p, q)] = _h_dbar(m, p, q)
            t.h[("del", p, q)] = _h_del(m, p, q)
            t.h[("BC", p, q)] = _h_bc(m, p, q)
            t.h[("A", p, q)] = _h_a(m, p, q)
    for k in range(2 * m.n + 1):
        t.b[k] = _b(m, k)
    c["table"] = t
    return t


def cohomology_by_laplacians(m: ComplexModel) -> CohomologyTable:
    """Independent route: kernel dimensions of the Laplacians."""
    t = CohomologyTable(m.name, m.n)
    for p in range(m.n + 1):
        for q in range(m.n + 1):
            for th in THEORIES:
                t.h[(th, p, q)] = laplacian(m, th, p, q).nullity()
    for k in range(2 * m.n + 1):
        t.b[k] = laplacian(m, "dR", k, 0).nullity()
    return t


# ----------------------------------------------------------------------
# maps between cohomologies


def _embed_pq_in_total(m, p, q) -> Mat:
    """Inclusion A^{p,q} -> A^{p+q} in the grouped total basis."""
    tot = total_basis(m.n, p + q)
    idx = {mono: i for i, mono in enumerate(tot)}
    src = basis(m.n, p, q)
    M = Mat.zeros(len(tot), len(src))
    for j, mono in enumerate(src):
        M.rows[idx[mono]][j] = GaussRational(1)
    return M


_MAPS = {
    "BC->del": ("BC", "del"),
    "BC->dbar": ("BC", "dbar"),
    "BC->dR": ("BC", "dR"),
    "dbar->A": ("dbar", "A"),
    "del->A": ("del", "A"),
    "dR->A": ("dR", "A"),
}

_ALIASES = {"BC→∂": "BC->del", "BC→∂̄": "BC->dbar", "BC→dR": "BC->dR", "∂̄→A": "dbar->A", "∂→A": "del->A", "dR→A": "dR->A"}


@dataclass
class DiagramMap:
    which: str
    p: int
    q: int
    matrix: Mat
    source_dim: int
    target_dim: int

    @property
    def rank(self):
        return self.matrix.rank()

    @property
    def injective(self) -> bool:
        return self.rank == self.source_dim

    @property
    def surjective(self) -> bool:
        return self.rank == self.target_dim


def diagram_map(m: ComplexModel, which: str, p: int, q: int) -> DiagramMap:
    """Identity-induced map between cohomologies, on harmonic representatives.

    The matrix is H_target applied to a kernel basis of the source
    Laplacian, so its rank is the rank of the induced map.
    """
    which = _ALIASES.get(which, which)
    if which not in _MAPS:
        raise ValueError(f"unknown diagram map {which!r}")
    src, tgt = _MAPS[which]
    if src == "dR":
        K = Mat.from_columns(harmonic_basis(m, "dR", p + q, 0), len(total_basis(m.n, p + q)))
        tot = total_basis(m.n, p + q)
        sel = [tot.index(mono) for mono in basis(m.n, p, q)]
        proj = Mat([[GaussRational(1) if j == s else ZERO for j in range(len(tot))] for s in sel], len(sel), len(tot))
        H, _ = harmonic_and_green(m, tgt, p, q)
        M = H @ proj @ K
        return DiagramMap(which, p, q, M, K.ncols, cohomology(m).get(tgt, p, q))
    K = Mat.from_columns(harmonic_basis(m, src, p, q), _dim(m, p, q))
    if tgt == "dR":
        H, _ = harmonic_and_green(m, "dR", p + q, 0)
        M = H @ _embed_pq_in_total(m, p, q) @ K
        return DiagramMap(which, p, q, M, K.ncols, cohomology(m).b[p + q])
    H, _ = harmonic_and_green(m, tgt, p, q)
    M = H @ K
    return DiagramMap(which, p, q, M, K.ncols, cohomology(m).get(tgt, p, q))


# ----------------------------------------------------------------------
# partial del-delbar lemmata


def _cols(M: Mat):
    return M.columns()


def _image_in_kernel(m, p, q):
    """(im del ∩ ker delbar)^{p,q}."""
    dim = _dim(m, p, q)
    im = _del(m, p - 1, q).image()
    ker = _dbar(m, p, q).kernel()
    return subspace_intersection(im, ker, dim)


def _del_of_dbar_closed(m, p, q):
    """del(ker delbar^{p-1,q}) as vectors in A^{p,q}."""
    ker = _dbar(m, p - 1, q).kernel()
    D = _del(m, p - 1, q)
    return [D.apply(v) for v in ker]


def lemma_condition(m: ComplexModel, cond: str, p: int, q: int) -> bool:
    """Direct subspace test of one condition at (p,q).

    B:  (im del ∩ ker delbar)^{p,q} ⊆ im del delbar
    S:  (im del ∩ ker delbar)^{p,q} ⊆ im delbar
    Bc: del(ker delbar^{p-1,q}) ⊆ im del delbar      (calligraphic B)
    Sc: del(ker delbar^{p-1,q}) ⊆ im delbar          (calligraphic S)
    Out-of-range bidegrees hold vacuously.
    """
    if not _in_range(m, p, q):
        return True
    dim = _dim(m, p, q)
    if cond in ("B", "S"):
        vecs = _image_in_kernel(m, p, q)
    elif cond in ("Bc", "Sc"):
        vecs = _del_of_dbar_closed(m, p, q)
    else:
        raise ValueError(f"unknown condition {cond!r}")
    if cond in ("B", "Bc"):
        target = _dd(m, p - 1, q - 1).image()
    else:
        target = _dbar(m, p, q - 1).image()
    return span_contains(target, vecs, dim)


@dataclass
class LemmaReport:
    name: str
    n: int
    conditions: dict = field(default_factory=dict)  # (cond, p, q) -> bool
    map_tests: dict = field(default_factory=dict)  # (cond, p, q) -> bool
    ddbar_lemma: bool = False
    ddbar_lemma_by_defect: bool = False
    at_defects: dict = field(default_factory=dict)
    b: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)

    def holds(self, cond: str, p: int, q: int) -> bool:
        if not (0 <= p <= self.n and 0 <= q <= self.n):
            return True
        return self.conditions[(cond, p, q)]

    def lattice_violations(self) -> list:
        bad = []
        for (c, p, q), v in self.conditions.items():
            if c != "B" or not v:
                continue
            if not self.conditions[("S", p, q)]:
                bad.append(f"B^{{{p},{q}}} without S^{{{p},{q}}}")
            if not self.conditions[("Bc", p, q)]:
                bad.append(f"B^{{{p},{q}}} without calB^{{{p},{q}}}")
        for (c, p, q), v in self.conditions.items():
            if c in ("S", "Bc") and v and not self.conditions[("Sc", p, q)]:
                bad.append(f"{c}^{{{p},{q}}} without calS^{{{p},{q}}}")
        return bad


def lemma_variants(m: ComplexModel) -> LemmaReport:
    c = _cache(m)
    if "lemma" in c:
        return c["lemma"]
    t = cohomology(m)
    r = LemmaReport(m.name, m.n)
    n = m.n
    for p in range(n + 1):
        for q in range(n + 1):
            for cond in ("B", "S", "Bc", "Sc"):
                r.conditions[(cond, p, q)] = lemma_condition(m, cond, p, q)
            r.map_tests[("B", p, q)] = diagram_map(m, "BC->del", p, q).injective
            r.map_tests[("S", p, q)] = diagram_map(m, "dbar->A", p, q).injective
            r.map_tests[("Bc", p, q)] = diagram_map(m, "BC->dbar", p - 1, q).surjective if p >= 1 else True
            for cond in ("B", "S", "Bc"):
                if r.map_tests[(cond, p, q)] != r.conditions[(cond, p, q)]:
                    r.diagnostics.append(f"{cond}^{{{p},{q}}}: subspace test and map test disagree")
    r.ddbar_lemma = all(
        diagram_map(m, "BC->dR", p, q).injective for p in range(n + 1) for q in range(n + 1)
    )
    for k in range(2 * n + 1):
        r.at_defects[k] = t.at_defect(k)
        r.b[k] = t.b[k]
    r.ddbar_lemma_by_defect = all(v == 0 for v in r.at_defects.values())
    if r.ddbar_lemma != r.ddbar_lemma_by_defect:
        r.diagnostics.append("ddbar-lemma: map test and defect test disagree")
    c["lemma"] = r
    return r


def require(m: ComplexModel, cond: str, p: int, q: int):
    """Raise HypothesisError unless the condition holds."""
    if not lemma_variants(m).holds(cond, p, q):
        label = {"B": "B", "S": "S", "Bc": "calB", "Sc": "calS"}[cond]
        raise HypothesisError(f"{label}^{{{p},{q}}}")


# ----------------------------------------------------------------------
# applying constant matrices to series-valued forms


def apply_matrix(M: Mat, form: Form, src_basis, tgt_basis) -> Form:
    """Apply a constant matrix to the src_basis part of a form (series coefficients kept)."""
    ring = form.ring
    vec = [form.terms.get(mono) for mono in src_basis]
    out = {}
    for i, row in enumerate(M.rows):
        acc = None
        for a, v in zip(row, vec):
            if a and v is not None:
                s = v.scale(a)
                acc = s if acc is None else acc + s
        if acc is not None and acc.terms:
            out[tgt_basis[i]] = acc
    return Form(form.model, ring, out)


def _bc_green_piece(m, form, p, q):
    """(del delbar)^* G_BC applied to the (p,q)-part of a form."""
    if p < 1 or q < 1:
        return Form.zero(m, form.ring)
    _, G = harmonic_and_green(m, "BC", p, q)
    DDs = _dd(m, p - 1, q - 1).H
    return apply_matrix(DDs @ G, form, basis(m.n, p, q), basis(m.n, p - 1, q - 1))


def ddbar_star_green(m: ComplexModel, form: Form) -> Form:
    """(del delbar)^* G_BC on every bidegree component, no solvability check."""
    out = Form.zero(m, form.ring)
    for p, q in sorted(form.bidegrees()):
        out = out + _bc_green_piece(m, form.component(p, q), p, q)
    return out


def solve_ddbar(m: ComplexModel, alpha: Form) -> Form:
    """Minimal-norm solution x = (del delbar)^* G_BC alpha of del delbar x = alpha."""
    from .algebra import dbar, delop

    if alpha.is_zero():
        return alpha
    x = ddbar_star_green(m, alpha)
    res = alpha - delop(dbar(x))
    if not res.is_zero():
        raise NotSolvableError("alpha is not in the image of del delbar", residual=res)
    return x


def _dbar_harmonic(m, form):
    out = Form.zero(m, form.ring)
    for p, q in sorted(form.bidegrees()):
        H, _ = harmonic_and_green(m, "dbar", p, q)
        b = basis(m.n, p, q)
        out = out + apply_matrix(H, form.component(p, q), b, b)
    return out


def canonical_representative(m: ComplexModel, sigma: Form) -> Form:
    """d-closed representative gamma = H(sigma) + delbar beta of a Dolbeault class.

    beta = -(del delbar)^* G_BC del H(sigma); needs calB^{p+1,q}.
    """
    from .algebra import dbar, delop

    bd = sigma.bidegree()
    if bd is None:
        return sigma
    p, q = bd
    if not dbar(sigma).is_zero():
        raise ValueError("sigma is not delbar-closed")
    h = _dbar_harmonic(m, sigma)
    target = delop(h)
    beta = -ddbar_star_green(m, target)
    if not (delop(dbar(beta)) + target).is_zero():
        raise HypothesisError(f"calB^{{{p + 1},{q}}}", "del H(sigma) is not del-delbar-exact")
    gamma = h + dbar(beta)
    return gamma


def solve_system(m: ComplexModel, zeta: Form, xi: Form) -> Form:
    """Canonical solution of del x = delbar zeta, delbar x = del conj(xi).

    x = delbar (del delbar)^* G_BC delbar zeta - del (del delbar)^* G_BC del conj(xi).
    """
    from .algebra import dbar, delop

    xib = conjugate(xi)
    if not delop(dbar(zeta)).is_zero():
        raise NotSolvableError("del delbar zeta != 0 (first equation is inconsistent)")
    if not dbar(delop(xib)).is_zero():
        raise NotSolvableError("delbar del conj(xi) != 0 (second equation is inconsistent)")
    x = dbar(ddbar_star_green(m, dbar(zeta))) - delop(ddbar_star_green(m, delop(xib)))
    r1 = delop(x) - dbar(zeta)
    r2 = dbar(x) - delop(xib)
    if not r1.is_zero():
        raise NotSolvableError("del x = delbar zeta fails (delbar zeta not del-delbar-exact)", residual=r1)
    if not r2.is_zero():
        raise NotSolvableError("delbar x = del conj(xi) fails (del conj(xi) not del-delbar-exact)", residual=r2)
    return x


# ----------------------------------------------------------------------
# TSV


def cohomology_tsv(t: CohomologyTable) -> str:
    lines = [f"# model\t{t.name}", "p\tq\th_dbar\th_d\th_BC\th_A"]
    for p in range(t.n + 1):
        for q in range(t.n + 1):
            lines.append(
                f"{p}\t{q}\t{t.h[('dbar', p, q)]}\t{t.h[('del', p, q)]}\t{t.h[('BC', p, q)]}\t{t.h[('A', p, q)]}"
            )
    lines.append("k\tb_k\tat_defect")
    for k in range(2 * t.n + 1):
        lines.append(f"{k}\t{t.b[k]}\t{t.at_defect(k)}")
    return "\n".join(lines) + "\n"


def lemma_tsv(r: LemmaReport) -> str:
    yn = {True: "yes", False: "no"}
    lines = [f"# model\t{r.name}", "p\tq\tB\tS\tcalB\tcalS"]
    for p in range(r.n + 1):
        for q in range(r.n + 1):
            c = r.conditions
            lines.append(
                f"{p}\t{q}\t{yn[c[('B', p, q)]]}\t{yn[c[('S', p, q)]]}\t{yn[c[('Bc', p, q)]]}\t{yn[c[('Sc', p, q)]]}"
            )
    lines.append("k\tb_k\tat_defect")
    for k in sorted(r.at_defects):
        lines.append(f"{k}\t{r.b[k]}\t{r.at_defects[k]}")
    lines.append(f"ddbar_lemma\t{'holds' if r.ddbar_lemma else 'fails'}")
    for dmsg in r.diagnostics:
        lines.append(f"# diagnostic\t{dmsg}")
    return "\n".join(lines) + "\n"
