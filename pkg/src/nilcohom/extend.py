"""Extension of d-closed forms along a Kuranishi family, p-Kähler forms and positivity.

Two solvers are provided:

* the Bott-Chern route, ``mu = mu0 + Q(mu)`` with
  ``Q = del (del delbar)^* G_BC del iota_phi``, summed as a finite Neumann series in the
  truncated ring (Q raises the series order, so ``1 - Q`` is unipotent);
* the two-equation route, which solves ``delbar_t Omega = 0`` and ``del_t Omega = 0``
  order by order in pulled-back coordinates with two Green-operator terms.

Sample-level variants solve the same fixed-point equation exactly at a numeric
parameter value, where ``1 - Q_t`` is an honest finite matrix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import (
    CONST,
    Beltrami,
    Form,
    conjugate,
    contract,
    d,
    dbar,
    deformed_delbar,
    delop,
    exp_contract,
    inverse_endo,
    one_minus_phibar_phi,
    pair_matrix,
    rho,
    simultaneous_contract,
    type_decomposition,
)
from .deform import KuranishiFamily, _evaluate_phi, deformed_operator, operators_at
from .errors import HypothesisError, NotSolvableError
from .gauss import ONE, ZERO, GaussRational
from .hodge import (
    _dd,
    apply_matrix,
    canonical_representative,
    ddbar_star_green,
    harmonic_and_green,
    harmonic_basis,
    lemma_variants,
)
from .linalg import Mat
from .model import ComplexModel
from .monomial import basis, wedge_mono
from .series import Ring

__all__ = [
    "ExtensionResult",
    "PKahlerResult",
    "Positivity",
    "extend_d_closed",
    "extend_at_sample",
    "verify_extension",
    "uniqueness_check",
    "injectivity_test",
    "p_kahler_extend",
    "transverse_positivity",
    "mild_extension_two_eq",
    "compare_routes",
]

HALF = GaussRational(1, 0) / 2


def _phi(x) -> Beltrami:
    return x.phi if isinstance(x, KuranishiFamily) else x


def _q_operator(m: ComplexModel, phi: Beltrami, mu: Form) -> Form:
    return delop(ddbar_star_green(m, delop(contract(phi, mu))))


def _hyp_B(m, p, q):
    if not lemma_variants(m).holds("B", p, q):
        raise HypothesisError(f"B^{{{p},{q}}}")


def _truncate(f: Form, N: int) -> Form:
    return f.truncate(N) if f.ring.m else f


# ----------------------------------------------------------------------
# Bott-Chern route


@dataclass
class ExtensionResult:
    mu: Form
    closed_ok: bool
    rho_mu: Form
    dbar_t_ok: bool
    mu0: Form = None
    N: int = 0
    system_ok: bool = False  # del mu = 0 and delbar mu = -del(phi -| mu)
    order_residuals: list = field(default_factory=list)  # per order: is d(e^{iota} mu) zero there
    route: str = "bott-chern"
    omega_tilde: Form | None = None  # two-equation route: (1 - phibar phi) -| Omega

    def report(self) -> str:
        yn = {True: "yes", False: "no"}
        lines = [
            f"route={self.route}",
            f"N={self.N}",
            f"bidegree={','.join(map(str, self.mu0.bidegree() or ()))}",
            f"closed_ok={yn[self.closed_ok]}",
            f"dbar_t_ok={yn[self.dbar_t_ok]}",
            f"system_ok={yn[self.system_ok]}",
        ]
        for k, ok in enumerate(self.order_residuals):
            lines.append(f"order_{k}_residual_zero={yn[ok]}")
        lines.append(f"mu={self.mu}")
        return "\n".join(lines) + "\n"


def extend_d_closed(m: ComplexModel, mu0: Form, phi, N: int, check_hypothesis: bool = True) -> ExtensionResult:
    """Solve mu + (-Q)(mu) = mu0 in the truncated ring and check the closedness conclusions.

    ``phi`` is a :class:`KuranishiFamily` or a Beltrami series satisfying Maurer-Cartan
    through order N.  With ``check_hypothesis=False`` the B condition is not enforced
    and the checks simply report what happens.
    """
    phi = _phi(phi)
    bd = mu0.bidegree()
    if bd is None:
        if mu0.is_zero():
            bd = (0, 0)
        else:
            raise ValueError("mu0 must have pure bidegree")
    p, q = bd
    if not d(mu0).is_zero():
        raise ValueError("mu0 is not d-closed")
    if check_hypothesis:
        _hyp_B(m, p, q + 1)
    if phi.ring.m:
        N = min(N, phi.ring.N)
        phi = phi.truncate(N)
    ring = phi.ring if phi.ring.m else Ring(0, 0)
    mu0r = mu0.promote(ring) if mu0.ring != ring else mu0
    mu = mu0r
    # Neumann sum: each pass fixes one more order
    for _ in range(max(N, 0) + 1):
        nxt = mu0r + _q_operator(m, phi, mu)
        nxt = _truncate(nxt, N)
        if nxt == mu:
            break
        mu = nxt
    ext = _truncate(d(exp_contract(phi, mu)), N)
    closed_ok = ext.is_zero()
    residuals = [ext.homogeneous(k).is_zero() for k in range(N + 1)] if ring.m else [closed_ok]
    sys_ok = delop(mu).is_zero() and _truncate(dbar(mu) + delop(contract(phi, mu)), N).is_zero()
    crit = _truncate(deformed_delbar(phi, mu), N)
    rmu = _truncate(rho(phi, mu), N)
    return ExtensionResult(
        mu=mu,
        closed_ok=closed_ok,
        rho_mu=rmu,
        dbar_t_ok=crit.is_zero(),
        mu0=mu0,
        N=N,
        system_ok=sys_ok,
        order_residuals=residuals,
    )


@dataclass
class ExtensionCheck:
    """Outcome of :func:`verify_extension`."""

    decomposition: dict
    top_matches_rho: bool
    dbar_t_closed: bool
    criterion_ok: bool

    @property
    def ok(self) -> bool:
        return self.top_matches_rho and self.dbar_t_closed and self.criterion_ok

    def report(self) -> str:
        yn = {True: "yes", False: "no"}
        bds = ";".join(f"{p},{q}" for p, q in sorted(self.decomposition))
        return (
            f"decomposition_bidegrees={bds}\n"
            f"top_equals_rho={yn[self.top_matches_rho]}\n"
            f"dbar_t_closed={yn[self.dbar_t_closed]}\n"
            f"criterion_ok={yn[self.criterion_ok]}\n"
        )


def verify_extension(res: ExtensionResult, phi) -> ExtensionCheck:
    """Split e^{iota_phi} mu by X_t-type; compare the (p,q) piece with rho(mu).

    Closedness of rho(mu) under delbar_t is tested directly (the (p,q+1)_t part of
    d rho(mu)) and through (delbar - L_phi) mu = 0.
    """
    phi = _phi(phi)
    N = res.N
    if phi.ring.m:
        phi = phi.truncate(N)
    p, q = res.mu0.bidegree() or (0, 0)
    e = _truncate(exp_contract(phi, res.mu), N)
    dec = {bd: _truncate(f, N) for bd, f in type_decomposition(phi, e).items()}
    dec = {bd: f for bd, f in dec.items() if not f.is_zero()}
    top = dec.get((p, q), Form.zero(res.mu.model, res.mu.ring))
    top_ok = (top - res.rho_mu).is_zero()
    drho = type_decomposition(phi, _truncate(d(res.rho_mu), N))
    closed = _truncate(drho.get((p, q + 1), Form.zero(res.mu.model, res.mu.ring)), N).is_zero()
    crit = delop(res.mu).is_zero() and _truncate(deformed_delbar(phi, res.mu), N).is_zero()
    return ExtensionCheck(dec, top_ok, closed, crit)


def uniqueness_check(res: ExtensionResult, phi, seed: int = 0) -> bool:
    """Iterate the fixed-point map from a perturbed start; it must return to mu."""
    from .randomgen import random_form

    phi = _phi(phi)
    m = res.mu.model
    N = res.N
    if phi.ring.m:
        phi = phi.truncate(N)
    p, q = res.mu0.bidegree() or (0, 0)
    ring = res.mu.ring
    rng = random.Random(seed)
    pert = random_form(rng, m, ring, p, q)
    # strip the constant part so the seed at t = 0 is unchanged
    pert = pert - pert.constant_part().promote(ring)
    mu = res.mu + pert
    mu0r = res.mu0.promote(ring) if ring.m else res.mu0
    for _ in range(N + 2):
        mu = _truncate(mu0r + _q_operator(m, phi, mu), N)
    return mu == res.mu


# ----------------------------------------------------------------------
# sample-level solves


def _matrix_on(m, p, q, op) -> Mat:
    b = basis(m.n, p, q)
    cols = [op(Form.monomial(m, mono)).const_vector(b) for mono in b]
    return Mat.from_columns(cols, len(b)) if b else Mat.zeros(0, 0)


def extend_at_sample(m: ComplexModel, mu0: Form, phi_t: Beltrami) -> Form:
    """Exact solution of mu = mu0 + Q_t mu at a numeric parameter value."""
    bd = mu0.bidegree()
    if bd is None:
        return mu0
    p, q = bd
    b = basis(m.n, p, q)
    Qt = _matrix_on(m, p, q, lambda f: _q_operator(m, phi_t, f))
    A = Mat.identity(len(b)) - Qt
    x = A.solve(mu0.const_vector(b))
    if x is None:
        raise NotSolvableError("1 - Q_t is singular at this sample")
    return Form.from_vector(m, b, x)


@dataclass
class InjectivityVerdict:
    p: int
    q: int
    injective: bool
    per_sample: list  # (sample index, rank of extended classes, number of classes)
    failing: list = field(default_factory=list)  # (sample index, kernel combination)

    def report(self) -> str:
        lines = [f"bidegree={self.p},{self.q}", f"injective={'yes' if self.injective else 'no'}"]
        for i, r, k in self.per_sample:
            lines.append(f"sample_{i}_rank={r}/{k}")
        for i, comb in self.failing:
            lines.append(f"sample_{i}_kernel_class=" + ",".join(str(c) for c in comb))
        return "\n".join(lines) + "\n"


def injectivity_test(m: ComplexModel, phi, p: int, q: int, samples: list) -> InjectivityVerdict:
    """Extend a harmonic basis of H_dbar^{p,q} and test independence of the images at each sample.

    Classes at t are computed in pulled-back coordinates: rho(mu) corresponds to
    (1 - phibar phi)^{-1} -| mu, and the delbar_t-exact forms are the image of
    the sampled delbar_t on (p, q-1).
    """
    n = m.n
    H = harmonic_basis(m, "dbar", p, q)
    b = basis(n, p, q)
    reps = [canonical_representative(m, Form.from_vector(m, b, v)) for v in H]
    _hyp_B(m, p, q + 1)
    per, failing = [], []
    inj = True
    for i, t in enumerate(samples):
        phi_t, D, _ = operators_at(phi, t)
        Cinv = inverse_endo(one_minus_phibar_phi(phi_t))
        vecs = []
        for g in reps:
            mu_t = extend_at_sample(m, g, phi_t)
            v = simultaneous_contract(Cinv, mu_t).const_vector(b)
            if any(D[(p, q)].apply(v)):
                raise NotSolvableError(f"extended class {len(vecs)} is not delbar_t-closed at sample {i}")
            vecs.append(v)
        if q >= 1:
            exact = D[(p, q - 1)].image()
        else:
            exact = []
        base = Mat.from_columns(exact, len(b)).rank() if exact else 0
        full = Mat.from_columns(exact + vecs, len(b)).rank() if exact or vecs else 0
        r = full - base
        per.append((i, r, len(vecs)))
        if r < len(vecs):
            inj = False
            M = Mat.from_columns(exact + vecs, len(b))
            for kv in M.kernel():
                comb = kv[len(exact):]
                if any(comb):
                    failing.append((i, comb))
                    break
    return InjectivityVerdict(p, q, inj, per, failing)


# ----------------------------------------------------------------------
# positivity


@dataclass
class Positivity:
    positive: bool
    method: str  # exact | sampled | skipped
    samples: int = 0
    witness: object = None

    def __str__(self):
        if self.method == "skipped":
            return "skipped"
        if self.positive:
            return f"positive({self.method}{', ' + str(self.samples) if self.method == 'sampled' else ''})"
        return f"not-positive(witness {self.witness})"


def _i_power(k: int) -> GaussRational:
    return [ONE, GaussRational(0, 1), -ONE, GaussRational(0, -1)][k % 4]


def _top_coefficient(f: Form) -> GaussRational:
    n = f.model.n
    top = tuple(range(2 * n))
    c = f.terms.get(top)
    return c.constant() if c is not None else ZERO


def _volume_value(f: Form) -> GaussRational:
    """Top coefficient relative to the positive volume i^{n^2} e_1..e_n conj(e_1)..conj(e_n)."""
    n = f.model.n
    return _top_coefficient(f) / _i_power(n * n)


def _is_positive_real(x: GaussRational) -> bool:
    return x.is_real() and x.re > 0


def _sylvester(H) -> tuple:
    """Leading principal minors of a Hermitian matrix; (positive definite, first bad index)."""
    k = len(H)
    for r in range(1, k + 1):
        sub = [row[:r] for row in H[:r]]
        det = _det(sub)
        if not _is_positive_real(det):
            return False, r
    return True, None


def _det(A) -> GaussRational:
    M = [list(r) for r in A]
    n = len(M)
    det = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c]), None)
        if p is None:
            return ZERO
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det = det * M[c][c]
        inv = M[c][c].inverse()
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return det


def _hermitian_from_pairing(omega: Form, k: int) -> list:
    """H_ab = value of omega ^ i^{k^2}-normalized pairing with e_a, conj e_b (k = n - p = 1)."""
    m = omega.model
    n = m.n
    H = [[ZERO] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            tau = Form.monomial(m, (a, n + b), _i_power(1))
            H[a][b] = _volume_value(omega ^ tau)
    return H


def _random_10(rng, m) -> Form:
    from .randomgen import random_scalar

    f = Form.zero(m)
    for a in range(m.n):
        if rng.random() < 0.8:
            f = f + Form.gen(m, a).scale(random_scalar(rng))
    return f if not f.is_zero() else Form.gen(m, rng.randrange(m.n))


def transverse_positivity(m: ComplexModel, omega: Form, p: int, samples: int = 500, seed: int = 0) -> Positivity:
    """Decide (p = 1, n-1, n) or sample (otherwise) strict weak positivity of a real (p,p)-form."""
    n = m.n
    if omega.ring.m:
        omega = omega.constant_part()
    if not (omega - conjugate(omega)).is_zero():
        raise ValueError("omega is not real")
    bd = omega.bidegree()
    if bd not in (None, (p, p)):
        raise ValueError(f"omega has bidegree {bd}, expected ({p},{p})")
    if p == 0:
        c = omega.terms.get(())
        v = c.constant() if c is not None else ZERO
        return Positivity(_is_positive_real(v), "exact", witness=None if _is_positive_real(v) else "1")
    if p == n:
        v = _volume_value(omega)
        return Positivity(_is_positive_real(v), "exact", witness=None if _is_positive_real(v) else "1")
    if p == 1:
        # omega = i sum h_ab e_a ^ conj e_b
        H = [[ZERO] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                c = omega.terms.get((a, n + b))
                H[a][b] = (c.constant() if c is not None else ZERO) / _i_power(1)
        ok, bad = _sylvester(H)
        return Positivity(ok, "exact", witness=None if ok else f"leading minor {bad}")
    if p == n - 1:
        H = _hermitian_from_pairing(omega, 1)
        ok, bad = _sylvester(H)
        return Positivity(ok, "exact", witness=None if ok else f"leading minor {bad}")
    k = n - p
    rng = random.Random(seed)
    sigma = _i_power(k * k)
    for s in range(samples):
        tau = Form.one(m)
        for _ in range(k):
            tau = tau ^ _random_10(rng, m)
        if tau.is_zero():
            continue
        v = _volume_value(omega ^ (tau ^ conjugate(tau)).scale(sigma))
        if not _is_positive_real(v):
            return Positivity(False, "sampled", s + 1, witness=str(tau))
    return Positivity(True, "sampled", samples)


# ----------------------------------------------------------------------
# p-Kähler pipeline


@dataclass
class PKahlerResult:
    omega_pp: Form  # rho(mu) as a series
    beta: Form  # series beta, order by order with the t = 0 Green operator
    omega_tilde: Form  # series omega_tilde
    real_ok: bool
    closed_ok: bool
    initial_ok: bool
    beta_positive_order: bool
    positivity: dict = field(default_factory=dict)  # sample index -> Positivity
    sample_checks: dict = field(default_factory=dict)  # sample index -> (real, closed)
    samples: list = field(default_factory=list)
    p: int = 1

    @property
    def positivity_verdict(self) -> str:
        if not self.positivity:
            return "skipped"
        if all(v.positive for v in self.positivity.values()):
            return "exact" if all(v.method == "exact" for v in self.positivity.values()) else "sampled"
        return "not-positive"

    @property
    def ok(self) -> bool:
        return (
            self.real_ok
            and self.closed_ok
            and self.initial_ok
            and self.beta_positive_order
            and all(a and b for a, b in self.sample_checks.values())
            and all(v.positive for v in self.positivity.values())
        )

    def report(self) -> str:
        yn = {True: "yes", False: "no"}
        lines = [
            f"p={self.p}",
            f"real_ok={yn[self.real_ok]}",
            f"closed_ok={yn[self.closed_ok]}",
            f"initial_ok={yn[self.initial_ok]}",
            f"beta_positive_order={yn[self.beta_positive_order]}",
            f"positivity={self.positivity_verdict}",
        ]
        for i in sorted(self.sample_checks):
            r, c = self.sample_checks[i]
            lines.append(f"sample_{i}_real={yn[r]}")
            lines.append(f"sample_{i}_closed={yn[c]}")
            if i in self.positivity:
                lines.append(f"sample_{i}_positivity={self.positivity[i]}")
        lines.append(f"omega_tilde={self.omega_tilde}")
        return "\n".join(lines) + "\n"


def _coords_to_form(m, E, coords: Form) -> Form:
    return simultaneous_contract(E, coords)


def _series_beta(phi: Beltrami, sigma: Form, p: int, N: int) -> Form:
    """Solve del_t delbar_t beta = del_t sigma order by order with the t = 0 Green operator."""
    m = phi.model
    ring = phi.ring
    if p < 1:
        return Form.zero(m, ring)
    src = basis(m.n, p, p - 1)
    Dop = deformed_operator(phi, "delbar_t", p, p - 1)
    Pop = deformed_operator(phi, "del_t", p, p)
    P1 = deformed_operator(phi, "del_t", p, p - 1)
    tgt = basis(m.n, p + 1, p)

    def apply(op, f):
        vec = [f.terms.get(mono) for mono in op.source_basis]
        out = {}
        for i, row in enumerate(op.rows):
            acc = None
            for a, v in zip(row, vec):
                if a.terms and v is not None:
                    w = a * v
                    acc = w if acc is None else acc + w
            if acc is not None and acc.terms:
                out[op.target_basis[i]] = acc
        return Form(m, ring, out)

    rhs = apply(Pop, sigma)
    _, G = harmonic_and_green(m, "BC", p + 1, p)
    A0s = _dd(m, p, p - 1).H  # (del delbar)^* from (p+1,p) to (p,p-1)
    pinv = A0s @ G
    beta = Form.zero(m, ring)
    for k in range(N + 1):
        lhs = apply(P1, apply(Dop, beta))
        r = (rhs - lhs).homogeneous(k)
        if r.is_zero():
            continue
        bk = apply_matrix(pinv, r, tgt, src)
        beta = beta + bk
        chk = (rhs - apply(P1, apply(Dop, beta))).homogeneous(k)
        if not chk.is_zero():
            raise NotSolvableError(f"del_t sigma not del_t delbar_t-exact at order {k}", residual=chk)
    return _truncate(beta, N)


def _sample_beta(phi_t: Beltrami, D, P, sigma: Form, p: int) -> Form:
    """beta_t = (del_t delbar_t)^* G_{BC,t} del_t sigma with the metric of the fixed basis.

    On im(del_t delbar_t) the Bott-Chern Laplacian reduces to A A^*, so the
    minimal solution is A^* y for any y with A A^* y = del_t sigma.
    """
    m = phi_t.model
    n = m.n
    if p < 1:
        return Form.zero(m)
    src = basis(n, p, p - 1)
    rhs = P[(p, p)].apply(sigma.const_vector(basis(n, p, p)))
    if not any(rhs):
        return Form.zero(m)
    A = P[(p, p - 1)] @ D[(p, p - 1)]
    y = (A @ A.H).solve(rhs)
    if y is None:
        raise NotSolvableError("del_t omega is not del_t delbar_t-exact at this sample", residual=rhs)
    return Form.from_vector(m, src, A.H.apply(y))


def p_kahler_extend(
    m: ComplexModel,
    omega0: Form,
    phi,
    p: int,
    N: int,
    samples: list | None = None,
    positivity_samples: int = 500,
    seed: int = 0,
) -> PKahlerResult:
    """Extend a real d-closed (p,p)-form to a real d-closed form on each X_t.

    Requires the del-delbar lemma on the model.  Series data (omega^{p,p}, beta,
    omega_tilde) are computed in the truncated ring; at each sample the whole
    construction is repeated exactly (extension solved at t, beta from the
    t-level Bott-Chern Green operator) and the result is tested for positivity
    in the X_t coframe.
    """
    fam = phi
    phi = _phi(phi)
    if omega0.bidegree() not in (None, (p, p)):
        raise ValueError(f"omega0 must be a ({p},{p})-form")
    if not (omega0 - conjugate(omega0)).is_zero():
        raise ValueError("omega0 is not real")
    if not lemma_variants(m).ddbar_lemma:
        raise HypothesisError("ddbar-lemma")
    res = extend_d_closed(m, omega0, phi, N)
    ring = res.mu.ring
    phiN = phi.truncate(res.N) if phi.ring.m else phi
    C = one_minus_phibar_phi(phiN)
    Cinv = inverse_endo(C)
    E = pair_matrix(phiN)
    sigma = _truncate(simultaneous_contract(Cinv, res.mu), res.N)
    omega_pp = _truncate(simultaneous_contract(E, sigma), res.N)
    if phi.ring.m:
        beta = _series_beta(phiN, sigma, p, res.N)
        corr = _truncate(
            simultaneous_contract(E, _apply_series_op(deformed_operator(phiN, "delbar_t", p, p - 1), beta))
            if p >= 1
            else Form.zero(m, ring),
            res.N,
        )
    else:
        beta = Form.zero(m, ring)
        corr = Form.zero(m, ring)
    omega_hat = omega_pp - corr
    omega_tilde = _truncate((omega_hat + conjugate(omega_hat)).scale(HALF), res.N)
    real_ok = (omega_tilde - conjugate(omega_tilde)).is_zero()
    closed_ok = _truncate(d(omega_tilde), res.N).is_zero()
    o0 = omega0.promote(ring) if ring.m else omega0
    initial_ok = (omega_tilde.constant_part().promote(ring) if ring.m else omega_tilde) == o0
    beta_pos = all(v.valuation() >= 1 for v in beta.terms.values()) if ring.m else beta.is_zero()
    out = PKahlerResult(
        omega_pp=omega_pp,
        beta=beta,
        omega_tilde=omega_tilde,
        real_ok=real_ok,
        closed_ok=closed_ok,
        initial_ok=initial_ok,
        beta_positive_order=beta_pos,
        samples=list(samples or []),
        p=p,
    )
    for i, t in enumerate(samples or []):
        phi_t, D, P = operators_at(fam, t)
        mu_t = extend_at_sample(m, omega0, phi_t)
        Ct = inverse_endo(one_minus_phibar_phi(phi_t))
        Et = pair_matrix(phi_t)
        sig_t = simultaneous_contract(Ct, mu_t)
        beta_t = _sample_beta(phi_t, D, P, sig_t, p)
        if p >= 1:
            src = basis(m.n, p, p - 1)
            corr_t = Form.from_vector(m, basis(m.n, p, p), D[(p, p - 1)].apply(beta_t.const_vector(src)))
        else:
            corr_t = Form.zero(m)
        hat_coords = sig_t - corr_t
        hat = simultaneous_contract(Et, hat_coords)
        tilde = (hat + conjugate(hat)).scale(HALF)
        real_t = (tilde - conjugate(tilde)).is_zero()
        closed_t = d(tilde).is_zero()
        out.sample_checks[i] = (real_t, closed_t)
        coords = simultaneous_contract(inverse_endo(Et), tilde)
        out.positivity[i] = transverse_positivity(m, coords, p, positivity_samples, seed)
    return out


def _apply_series_op(op, f: Form) -> Form:
    m = f.model
    vec = [f.terms.get(mono) for mono in op.source_basis]
    out = {}
    for i, row in enumerate(op.rows):
        acc = None
        for a, v in zip(row, vec):
            if a.terms and v is not None:
                w = a * v
                acc = w if acc is None else acc + w
        if acc is not None and acc.terms:
            out[op.target_basis[i]] = acc
    return Form(m, f.ring, out)


# ----------------------------------------------------------------------
# two-equation route


def mild_extension_two_eq(m: ComplexModel, omega0: Form, phi, N: int, check_hypothesis: bool = True) -> ExtensionResult:
    """Solve delbar_t Omega = 0 = del_t Omega order by order with Omega_0 = omega0.

    At order l the equations read delbar x = a, del x = b with a, b built from
    lower orders; the canonical solution is
    x = delbar (del delbar)^* G_BC b - del (del delbar)^* G_BC a.
    Then e^{iota_phi | iota_phibar} Omega is d-closed through order N, and
    omega_tilde = (1 - phibar phi) -| Omega.
    """
    phi = _phi(phi)
    bd = omega0.bidegree()
    if bd is None:
        raise ValueError("omega0 must have pure bidegree")
    p, q = bd
    if not d(omega0).is_zero():
        raise ValueError("omega0 is not d-closed")
    if check_hypothesis:
        _hyp_B(m, p, q + 1)
        _hyp_B(m, q, p + 1)
    if not phi.ring.m:
        raise ValueError("the two-equation route needs a parameter series")
    N = min(N, phi.ring.N)
    phi = phi.truncate(N)
    ring = phi.ring
    Dop = deformed_operator(phi, "delbar_t", p, q)
    Pop = deformed_operator(phi, "del_t", p, q)
    omega = omega0.promote(ring)
    residuals = [True]
    for l in range(1, N + 1):
        a = -_apply_series_op(Dop, omega).homogeneous(l)
        b = -_apply_series_op(Pop, omega).homogeneous(l)
        x = dbar(ddbar_star_green(m, b)) - delop(ddbar_star_green(m, a))
        omega = omega + x
        ok = _apply_series_op(Dop, omega).homogeneous(l).is_zero() and _apply_series_op(Pop, omega).homogeneous(l).is_zero()
        residuals.append(ok)
    E = pair_matrix(phi)
    full = _truncate(simultaneous_contract(E, omega), N)
    closed = _truncate(d(full), N).is_zero()
    otil = _truncate(simultaneous_contract(one_minus_phibar_phi(phi), omega), N)
    dbar_t_ok = _apply_series_op(Dop, omega).truncate(N).is_zero()
    return ExtensionResult(
        mu=omega,
        closed_ok=closed,
        rho_mu=full,
        dbar_t_ok=dbar_t_ok,
        mu0=omega0,
        N=N,
        system_ok=all(residuals),
        order_residuals=residuals,
        route="two-equation",
        omega_tilde=otil,
    )


@dataclass
class RouteComparison:
    orders: list  # per order l: difference is del-delbar-exact
    difference: Form

    @property
    def agree(self) -> bool:
        return all(self.orders)


def compare_routes(m: ComplexModel, omega0: Form, phi, N: int, check_hypothesis: bool = True) -> RouteComparison:
    """Compare the two routes order by order.

    Both produce a (p,q)-form on X_0 whose extension is d-closed: mu with
    e^{iota_phi} mu closed, and Omega with e^{iota_phi | iota_phibar} Omega closed.
    Each homogeneous piece of Omega - mu is tested for membership in im(del delbar).
    """
    phi = _phi(phi)
    bc = extend_d_closed(m, omega0, phi, N, check_hypothesis)
    mild = mild_extension_two_eq(m, omega0, phi, N, check_hypothesis)
    diff = mild.mu - bc.mu
    orders = []
    for l in range(bc.N + 1):
        piece = diff.homogeneous(l)
        if piece.is_zero():
            orders.append(True)
            continue
        x = ddbar_star_green(m, piece)
        orders.append((delop(dbar(x)) - piece).is_zero())
    return RouteComparison(orders, diff)
