"""Kuranishi families, deformed operators and Hodge-number scans."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import (
    CONST,
    Beltrami,
    Form,
    bracket,
    conjugate,
    deformed_delbar,
    delbar_beltrami,
    inverse_endo,
    one_minus_phibar_phi,
    simultaneous_contract,
)
from .errors import HypothesisError
from .gauss import ZERO, GaussRational
from .hodge import cohomology, lemma_variants
from .linalg import Mat, projector
from .model import ComplexModel
from .monomial import basis
from .series import Ring, Series

__all__ = [
    "KuranishiFamily",
    "ScanReport",
    "vector_basis",
    "vector_delbar_matrix",
    "harmonic_beltrami_basis",
    "kuranishi_series",
    "check_maurer_cartan",
    "deformed_operator",
    "operators_at",
    "hodge_numbers_at",
    "default_samples",
    "invariance_scan",
]

HALF = GaussRational(1, 0) / 2


# ----------------------------------------------------------------------
# T^{1,0}-valued (0,q)-forms as vectors


def vector_basis(m: ComplexModel, q: int):
    """Basis (i, mono) of A^{0,q}(T^{1,0}): frame index outer, monomial inner."""
    return [(i, mono) for i in range(m.n) for mono in basis(m.n, 0, q)]


def _to_vec(phi: Beltrami, q: int):
    return [phi.components[i].terms.get(mono) for i, mono in vector_basis(phi.model, q)]


def _from_vec(m: ComplexModel, q: int, vec, ring) -> Beltrami:
    comps = [dict() for _ in range(m.n)]
    for (i, mono), v in zip(vector_basis(m, q), vec):
        if v is None:
            continue
        s = v if isinstance(v, Series) else ring.const(v)
        if s.terms:
            comps[i][mono] = s
    return Beltrami(m, [Form(m, ring, c) for c in comps], ring)


def _apply_const(M: Mat, vec):
    out = []
    for row in M.rows:
        acc = None
        for a, v in zip(row, vec):
            if a and v is not None and v.terms:
                s = v.scale(a)
                acc = s if acc is None else acc + s
        out.append(acc)
    return out


def vector_delbar_matrix(m: ComplexModel, q: int) -> Mat:
    """delbar: A^{0,q}(T) -> A^{0,q+1}(T) in the vector bases."""
    cache = m.__dict__.setdefault("_deform_cache", {})
    key = ("Dq", q)
    if key in cache:
        return cache[key]
    src = vector_basis(m, q) if 0 <= q <= m.n else []
    tgt = vector_basis(m, q + 1) if 0 <= q + 1 <= m.n else []
    idx = {b: k for k, b in enumerate(tgt)}
    rows = [[ZERO] * len(src) for _ in range(len(tgt))]
    for j, (i, mono) in enumerate(src):
        comps = [Form.zero(m) for _ in range(m.n)]
        comps[i] = Form.monomial(m, mono)
        img = delbar_beltrami(Beltrami(m, comps))
        for k, c in enumerate(img.components):
            for mm, v in c.terms.items():
                rows[idx[(k, mm)]][j] = v.constant()
    M = Mat(rows, len(tgt), len(src))
    cache[key] = M
    return M


def _vector_laplacian(m, q):
    a, b = vector_delbar_matrix(m, q - 1), vector_delbar_matrix(m, q)
    return a @ a.H + b.H @ b


def _vector_harmonic_green(m, q):
    cache = m.__dict__.setdefault("_deform_cache", {})
    key = ("HG", q)
    if key not in cache:
        L = _vector_laplacian(m, q)
        H = projector(L.kernel(), L.nrows)
        G = (L + H).inverse() - H if L.nrows else Mat.zeros(0, 0)
        cache[key] = (L, H, G)
    return cache[key]


def harmonic_beltrami_basis(m: ComplexModel) -> list:
    """Basis of the harmonic T^{1,0}-valued (0,1)-forms (kernel of the vector Laplacian)."""
    L, _, _ = _vector_harmonic_green(m, 1)
    return [_from_vec(m, 1, v, CONST) for v in L.kernel()]


# ----------------------------------------------------------------------
# Kuranishi recursion


@dataclass
class KuranishiFamily:
    model: ComplexModel
    m: int
    phi: Beltrami
    N: int
    terminated: bool
    termination_order: int | None
    obstruction: Beltrami
    mc_residual: Beltrami
    directions: list = field(default_factory=list)
    exact_phi: Beltrami | None = None  # polynomial family when terminated

    @property
    def unobstructed(self) -> bool:
        return self.obstruction.is_zero()

    def summary(self) -> str:
        lines = [
            f"model={self.model.name}",
            f"m={self.m}",
            f"N={self.N}",
            f"terminated={'yes' if self.terminated else 'no'}",
            f"termination_order={self.termination_order if self.terminated else 'none'}",
            f"unobstructed={'yes' if self.unobstructed else 'no'}",
            f"mc_residual_zero={'yes' if self.mc_residual.is_zero() else 'no'}",
        ]
        for i, c in enumerate(self.obstruction.components):
            if c:
                lines.append(f"obstruction_Z{i + 1}={c}")
        for i, c in enumerate(self.phi.components):
            lines.append(f"phi_Z{i + 1}={c}")
        return "\n".join(lines) + "\n"


def check_maurer_cartan(phi: Beltrami, N: int | None = None) -> Beltrami:
    """delbar phi - 1/2 [phi, phi], truncated at N."""
    res = delbar_beltrami(phi) - bracket(phi, phi).scale(HALF)
    if N is not None and phi.ring.m:
        res = res.truncate(min(N, phi.ring.N))
    return res


def _run(m: ComplexModel, directions, Nw: int):
    ring = Ring(len(directions), Nw)
    phi = Beltrami.zero(m, ring)
    for nu, eta in enumerate(directions):
        phi = phi + eta.promote(ring).scale(ring.var(nu))
    _, _, G2 = _vector_harmonic_green(m, 2)
    P = vector_delbar_matrix(m, 1).H @ G2  # delbar^* G on (0,2)-valued forms
    orders = {1: not phi.is_zero()}
    for k in range(2, Nw + 1):
        b = bracket(phi, phi).homogeneous(k)
        vec = _apply_const(P.scale(HALF), _to_vec(b, 2))
        phik = _from_vec(m, 1, vec, ring)
        orders[k] = not phik.is_zero()
        phi = phi + phik
    return phi, orders


def kuranishi_series(m: ComplexModel, N: int, directions: list | None = None) -> KuranishiFamily:
    """Build phi(t) = sum t_nu eta_nu + higher orders via phi_k = 1/2 delbar^* G sum [phi_j, phi_l].

    Termination at order k0 is certified when phi_k = 0 for k0 < k <= 2 k0;
    if N is too small for that, the recursion is re-run internally at 2 k0.
    """
    if N < 1:
        raise ValueError("order N must be at least 1")
    if directions is None:
        directions = harmonic_beltrami_basis(m)
    directions = [d.promote(CONST) if d.ring != CONST else d for d in directions]
    mdim = len(directions)
    if mdim == 0:
        z = Beltrami.zero(m, Ring(0, N))
        return KuranishiFamily(m, 0, z, N, True, 0, z, z, [], z)
    Nw = N
    phi, orders = _run(m, directions, Nw)
    k0 = max((k for k, nz in orders.items() if nz), default=0)
    while 2 * k0 > Nw and Nw < 2 * max(N, 2):
        Nw = min(2 * k0, 2 * max(N, 2))
        phi, orders = _run(m, directions, Nw)
        k0 = max((k for k, nz in orders.items() if nz), default=0)
    terminated = 2 * k0 <= Nw
    _, H2, _ = _vector_harmonic_green(m, 2)
    br = bracket(phi, phi)
    obs_vec = _apply_const(H2, _to_vec(br, 2))
    obstruction = _from_vec(m, 2, obs_vec, phi.ring)
    residual = check_maurer_cartan(phi)
    ringN = Ring(mdim, N)
    fam = KuranishiFamily(
        model=m,
        m=mdim,
        phi=phi.promote(ringN),
        N=N,
        terminated=terminated,
        termination_order=k0 if terminated else None,
        obstruction=obstruction.promote(ringN),
        mc_residual=residual.promote(ringN),
        directions=directions,
        exact_phi=phi if terminated else None,
    )
    return fam


# ----------------------------------------------------------------------
# deformed operators


@dataclass
class SeriesOperator:
    """Matrix with series entries between monomial bases."""

    which: str
    source: tuple
    target: tuple
    rows: list
    source_basis: tuple
    target_basis: tuple

    def evaluate(self, t) -> Mat:
        return Mat([[x.evaluate(t) for x in r] for r in self.rows], len(self.target_basis), len(self.source_basis))

    def constant(self) -> Mat:
        return Mat([[x.constant() for x in r] for r in self.rows], len(self.target_basis), len(self.source_basis))


class _Pullback:
    """delbar_t and del_t pulled back to X_0, with the contraction matrices cached."""

    def __init__(self, phi: Beltrami):
        self.phi = phi
        self.C = one_minus_phibar_phi(phi)
        self.Cinv = inverse_endo(self.C)

    def delbar_t(self, a: Form) -> Form:
        return simultaneous_contract(self.Cinv, deformed_delbar(self.phi, simultaneous_contract(self.C, a)))

    def del_t(self, a: Form) -> Form:
        return conjugate(self.delbar_t(conjugate(a)))

    def apply(self, which, a):
        return self.delbar_t(a) if which == "delbar_t" else self.del_t(a)


def _phi_of(x) -> Beltrami:
    return x.phi if isinstance(x, KuranishiFamily) else x


def _require_mc(phi: Beltrami):
    res = check_maurer_cartan(phi)
    if not res.is_zero():
        raise HypothesisError("Maurer-Cartan", "delbar phi - 1/2 [phi,phi] != 0 in the truncated ring")


def deformed_operator(phi, which: str, p: int, q: int) -> SeriesOperator:
    """Series matrix of the pulled-back delbar_t (A^{p,q} -> A^{p,q+1}) or del_t (-> A^{p+1,q})."""
    phi = _phi_of(phi)
    if which not in ("delbar_t", "del_t"):
        raise ValueError(f"unknown deformed operator {which!r}")
    _require_mc(phi)
    m = phi.model
    pb = _Pullback(phi)
    src = basis(m.n, p, q)
    tp, tq = (p, q + 1) if which == "delbar_t" else (p + 1, q)
    tgt = basis(m.n, tp, tq) if tp <= m.n and tq <= m.n else ()
    z = phi.ring.zero()
    rows = [[z] * len(src) for _ in range(len(tgt))]
    idx = {mono: i for i, mono in enumerate(tgt)}
    for j, mono in enumerate(src):
        img = pb.apply(which, Form.monomial(m, mono, 1, phi.ring))
        for mm, v in img.terms.items():
            rows[idx[mm]][j] = v
    return SeriesOperator(which, (p, q), (tp, tq), rows, src, tgt)


def _evaluate_phi(fam_or_phi, t) -> Beltrami:
    if isinstance(fam_or_phi, KuranishiFamily):
        fam = fam_or_phi
        if fam.m == 0:
            return Beltrami.zero(fam.model)
        src = fam.exact_phi if fam.exact_phi is not None else fam.phi
        phi_t = src.evaluate(t)
    else:
        phi_t = fam_or_phi.evaluate(t) if fam_or_phi.ring.m else fam_or_phi.promote(CONST)
    res = check_maurer_cartan(phi_t)
    if not res.is_zero():
        raise HypothesisError("Maurer-Cartan at sample", f"residual {res}")
    return phi_t


def operators_at(fam_or_phi, t):
    """Exact matrices of delbar_t and del_t on every bidegree at the sample t.

    Returns (phi_t, {(p,q): Mat delbar_t}, {(p,q): Mat del_t}).
    """
    phi_t = _evaluate_phi(fam_or_phi, t)
    m = phi_t.model
    n = m.n
    pb = _Pullback(phi_t)
    D, P = {}, {}
    for p in range(n + 1):
        for q in range(n + 1):
            src = basis(n, p, q)
            for which, store, (tp, tq) in (("delbar_t", D, (p, q + 1)), ("del_t", P, (p + 1, q))):
                tgt = basis(n, tp, tq) if tp <= n and tq <= n else ()
                idx = {mono: i for i, mono in enumerate(tgt)}
                rows = [[ZERO] * len(src) for _ in range(len(tgt))]
                for j, mono in enumerate(src):
                    img = pb.apply(which, Form.monomial(m, mono))
                    for mm, v in img.terms.items():
                        rows[idx[mm]][j] = v.constant()
                store[(p, q)] = Mat(rows, len(tgt), len(src))
    return phi_t, D, P


def _get(store, p, q, n, shape_src, shape_tgt):
    if 0 <= p <= n and 0 <= q <= n:
        return store[(p, q)]
    return Mat.zeros(shape_tgt, shape_src)


def hodge_numbers_at(fam_or_phi, t, bottchern: bool = True) -> dict:
    """{(theory, p, q): dim} at the sample t, theory in dbar / BC."""
    phi_t, D, P = operators_at(fam_or_phi, t)
    n = phi_t.model.n
    dim = lambda p, q: len(basis(n, p, q)) if 0 <= p <= n and 0 <= q <= n else 0  # noqa: E731
    out = {}
    for p in range(n + 1):
        for q in range(n + 1):
            Dpq = D[(p, q)]
            Din = _get(D, p, q - 1, n, dim(p, q - 1), dim(p, q))
            if not (Dpq @ Din).is_zero():
                raise HypothesisError("delbar_t^2 = 0", f"at bidegree ({p},{q - 1})")
            out[("dbar", p, q)] = Dpq.nullity() - Din.rank()
            if bottchern:
                both = Mat.vstack(P[(p, q)], Dpq)
                if p >= 1 and q >= 1:
                    dd = P[(p - 1, q)] @ D[(p - 1, q - 1)]
                    r = dd.rank()
                else:
                    r = 0
                out[("BC", p, q)] = both.nullity() - r
    return out


# ----------------------------------------------------------------------
# scans

SAMPLE_VALUES = (
    GaussRational(1, 0) / 7,
    GaussRational(-1, 0) / 7,
    GaussRational(1, 0) / 5,
    GaussRational(-1, 0) / 5,
    GaussRational(0, 1) / 7,
)


def default_samples(m_params: int, k: int, seed: int = 0) -> list:
    """k deterministic parameter tuples with components in {+-1/7, +-1/5, i/7}."""
    rng = random.Random(seed)
    return [tuple(rng.choice(SAMPLE_VALUES) for _ in range(m_params)) for _ in range(k)]


@dataclass
class ScanRow:
    sample: int
    theory: str
    p: int
    q: int
    h_t: int
    h_0: int

    @property
    def jumped(self) -> bool:
        return self.h_t != self.h_0


@dataclass
class ScanReport:
    model: str
    samples: list
    rows: list = field(default_factory=list)
    hypotheses: dict = field(default_factory=dict)  # (p,q) -> {name: bool}
    invariant: dict = field(default_factory=dict)  # (theory,p,q) -> bool
    semicontinuity_ok: bool = True
    euler_ok: bool = True
    soundness_violations: list = field(default_factory=list)

    def jumping(self, theory: str = "dbar") -> list:
        return sorted((p, q) for (th, p, q), inv in self.invariant.items() if th == theory and not inv)

    def failed_hypotheses(self, p: int, q: int) -> list:
        return [k for k, v in self.hypotheses[(p, q)].items() if not v]

    def to_tsv(self) -> str:
        lines = [f"# model\t{self.model}"]
        for i, s in enumerate(self.samples):
            lines.append(f"# sample\t{i}\t" + ",".join(str(x) for x in s))
        lines.append("sample\ttheory\tp\tq\th_t\th_0\tjumped\thypotheses_held")
        yn = {True: "yes", False: "no"}
        for r in self.rows:
            held = all(self.hypotheses[(r.p, r.q)].values())
            lines.append(f"{r.sample}\t{r.theory}\t{r.p}\t{r.q}\t{r.h_t}\t{r.h_0}\t{yn[r.jumped]}\t{yn[held]}")
        lines.append(f"# semicontinuity\t{'ok' if self.semicontinuity_ok else 'VIOLATED'}")
        lines.append(f"# euler_characteristic\t{'constant' if self.euler_ok else 'VARIES'}")
        lines.append(f"# soundness\t{'ok' if not self.soundness_violations else 'VIOLATED'}")
        for p, q in self.jumping("dbar"):
            fails = self.failed_hypotheses(p, q)
            lines.append(f"# jump\t{p},{q}\tfailed\t{','.join(fails) if fails else 'none'}")
        return "\n".join(lines) + "\n"


def invariance_scan(fam: KuranishiFamily, samples: list, theories=("dolbeault",)) -> ScanReport:
    """Compare h(t) with h(0) on exact samples and cross-check the invariance criteria."""
    if not samples:
        raise ValueError("at least one sample is required")
    m = fam.model
    n = m.n
    t0 = cohomology(m)
    lem = lemma_variants(m)
    want_bc = "bottchern" in theories
    rep = ScanReport(m.name, list(samples))
    per_sample = []
    for i, t in enumerate(samples):
        h = hodge_numbers_at(fam, t, bottchern=want_bc)
        per_sample.append(h)
        for (th, p, q), v in sorted(h.items()):
            rep.rows.append(ScanRow(i, th, p, q, v, t0.get(th, p, q)))
            if v > t0.get(th, p, q):
                rep.semicontinuity_ok = False
    ths = ["dbar"] + (["BC"] if want_bc else [])
    for th in ths:
        for p in range(n + 1):
            for q in range(n + 1):
                rep.invariant[(th, p, q)] = all(h[(th, p, q)] == t0.get(th, p, q) for h in per_sample)
    for p in range(n + 1):
        chi0 = sum((-1) ** q * t0.get("dbar", p, q) for q in range(n + 1))
        for h in per_sample:
            if sum((-1) ** q * h[("dbar", p, q)] for q in range(n + 1)) != chi0:
                rep.euler_ok = False

    def inv(p, q):
        if not (0 <= p <= n and 0 <= q <= n):
            return True
        return rep.invariant[("dbar", p, q)]

    for p in range(n + 1):
        for q in range(n + 1):
            hyp = {
                f"B^{{{p},{q + 1}}}": lem.holds("B", p, q + 1),
                f"calB^{{{p + 1},{q}}}": lem.holds("Bc", p + 1, q),
                f"h^{{{p},{q - 1}}} invariant": inv(p, q - 1),
            }
            rep.hypotheses[(p, q)] = hyp
            if all(hyp.values()) and not inv(p, q):
                rep.soundness_violations.append(f"main criterion at ({p},{q})")
            if q == 0 and lem.holds("B", p, 1) and lem.holds("Sc", p + 1, 0) and not inv(p, 0):
                rep.soundness_violations.append(f"(p,0) criterion at ({p},0)")
            if p == 0 and lem.holds("Bc", 1, q) and inv(0, q - 1) and not inv(0, q):
                rep.soundness_violations.append(f"(0,q) criterion at (0,{q})")
    return rep
