"""Command-line front end.

Exit codes: 0 when every asserted invariant passes, 1 on a hypothesis refusal
or a failed invariant, 2 on model or argument errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from .errors import HypothesisError, ModelError, NotSolvableError

__all__ = ["RunConfig", "main", "run"]

SUBCOMMANDS = ("cohomology", "lemma", "kuranishi", "scan", "extend", "pkahler", "identities")


@dataclass
class RunConfig:
    subcommand: str
    model: str | None
    order: int = 4
    seed: int = 0
    samples: int = 5
    bidegree: tuple | None = None
    klass: int = 0
    out: str | None = None
    pretty: bool = False
    theories: tuple = ("dolbeault", "bottchern")
    cases: int = 1000


def _bidegree(text: str) -> tuple:
    try:
        p, q = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected p,q but got {text!r}") from None
    if p < 0 or q < 0:
        raise argparse.ArgumentTypeError("bidegree entries must be non-negative")
    return p, q


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nilcohom", description="Exact cohomology and deformation engine for invariant complex models.")
    ap.add_argument("subcommand", choices=SUBCOMMANDS)
    ap.add_argument("--model", help="catalog name or path to a .model file")
    ap.add_argument("--order", type=_positive, default=4, help="truncation order N (default 4)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=_positive, default=5, help="number of exact parameter samples")
    ap.add_argument("--bidegree", type=_bidegree, help="p,q")
    ap.add_argument("--class", dest="klass", type=int, default=0, help="index into the harmonic basis")
    ap.add_argument("--cases", type=_positive, default=1000, help="random cases per identity and model")
    ap.add_argument("--dolbeault-only", action="store_true", help="scan: skip Bott-Chern numbers")
    ap.add_argument("--out", help="write the report to this path")
    ap.add_argument("--pretty", action="store_true", help="align TSV columns")
    return ap


def _config(argv) -> RunConfig:
    a = _parser().parse_args(argv)
    return RunConfig(
        subcommand=a.subcommand,
        model=a.model,
        order=a.order,
        seed=a.seed,
        samples=a.samples,
        bidegree=a.bidegree,
        klass=a.klass,
        out=a.out,
        pretty=a.pretty,
        theories=("dolbeault",) if a.dolbeault_only else ("dolbeault", "bottchern"),
        cases=a.cases,
    )


def _align(text: str) -> str:
    rows = [line.split("\t") for line in text.rstrip("\n").split("\n")]
    table = [r for r in rows if len(r) > 1 and not r[0].startswith("#")]
    width = {}
    for r in table:
        for i, c in enumerate(r):
            width[i] = max(width.get(i, 0), len(c))
    out = []
    for r in rows:
        if r in table:
            out.append("  ".join(c.ljust(width[i]) for i, c in enumerate(r)).rstrip())
        else:
            out.append("\t".join(r).replace("\t", "  "))
    return "\n".join(out) + "\n"


def _model(cfg: RunConfig):
    from .model import load_model

    if not cfg.model:
        raise ModelError("--model is required")
    try:
        return load_model(cfg.model)
    except KeyError as e:
        raise ModelError(str(e.args[0])) from None
    except OSError as e:
        raise ModelError(f"cannot read model: {e}") from None


def _cmd_cohomology(cfg):
    from .hodge import cohomology, cohomology_tsv

    t = cohomology(_model(cfg))
    bad = t.check_dualities()
    text = cohomology_tsv(t)
    for b in bad:
        text += f"# duality_violation\t{b}\n"
    return text, not bad


def _cmd_lemma(cfg):
    from .hodge import lemma_tsv, lemma_variants

    r = lemma_variants(_model(cfg))
    bad = r.lattice_violations()
    text = lemma_tsv(r)
    for b in bad:
        text += f"# implication_violation\t{b}\n"
    return text, not bad and not r.diagnostics


def _cmd_kuranishi(cfg):
    from .deform import kuranishi_series

    fam = kuranishi_series(_model(cfg), cfg.order)
    return fam.summary(), fam.mc_residual.is_zero()


def _cmd_scan(cfg):
    from .deform import default_samples, invariance_scan, kuranishi_series

    fam = kuranishi_series(_model(cfg), cfg.order)
    rep = invariance_scan(fam, default_samples(fam.m, cfg.samples, cfg.seed), cfg.theories)
    ok = rep.semicontinuity_ok and rep.euler_ok and not rep.soundness_violations
    return rep.to_tsv(), ok


def _cmd_extend(cfg):
    from .algebra import Form
    from .deform import kuranishi_series
    from .extend import extend_d_closed, uniqueness_check, verify_extension
    from .hodge import canonical_representative, harmonic_basis
    from .monomial import basis

    m = _model(cfg)
    if cfg.bidegree is None:
        raise ModelError("--bidegree is required for extend")
    p, q = cfg.bidegree
    if p > m.n or q > m.n:
        raise ModelError(f"bidegree ({p},{q}) out of range for n = {m.n}")
    H = harmonic_basis(m, "dbar", p, q)
    if not 0 <= cfg.klass < len(H):
        raise ModelError(f"class index {cfg.klass} out of range: h_dbar^{{{p},{q}}} = {len(H)}")
    fam = kuranishi_series(m, cfg.order)
    mu0 = canonical_representative(m, Form.from_vector(m, basis(m.n, p, q), H[cfg.klass]))
    res = extend_d_closed(m, mu0, fam, cfg.order)
    chk = verify_extension(res, fam)
    uniq = uniqueness_check(res, fam, cfg.seed)
    text = f"model={m.name}\nclass={cfg.klass}\nmu0={mu0}\n" + res.report() + chk.report()
    text += f"unique={'yes' if uniq else 'no'}\n"
    return text, res.closed_ok and res.dbar_t_ok and res.system_ok and chk.ok and uniq


def _cmd_pkahler(cfg):
    from .algebra import Form
    from .deform import default_samples, kuranishi_series
    from .extend import p_kahler_extend
    from .gauss import GaussRational

    m = _model(cfg)
    p = cfg.bidegree[0] if cfg.bidegree else 1
    if cfg.bidegree and cfg.bidegree[0] != cfg.bidegree[1]:
        raise ModelError("pkahler needs a bidegree of the form p,p")
    if not 0 <= p <= m.n:
        raise ModelError(f"p = {p} out of range for n = {m.n}")
    omega = Form.zero(m)
    for j in range(m.n):
        omega = omega + Form.monomial(m, (j, m.n + j), GaussRational(0, 1))
    w = Form.one(m)
    for _ in range(p):
        w = w ^ omega
    fam = kuranishi_series(m, cfg.order)
    res = p_kahler_extend(m, w, fam, p, cfg.order, default_samples(fam.m, cfg.samples, cfg.seed), seed=cfg.seed)
    return f"model={m.name}\nomega0={w}\n" + res.report(), res.ok


def _cmd_identities(cfg):
    from .identities import run_identity_suite
    from .model import catalog, catalog_names

    models = [_model(cfg)] if cfg.model else [catalog(n) for n in catalog_names()]
    rep = run_identity_suite(models, cfg.cases, cfg.seed)
    return rep.to_tsv(), rep.ok


_DISPATCH = {
    "cohomology": _cmd_cohomology,
    "lemma": _cmd_lemma,
    "kuranishi": _cmd_kuranishi,
    "scan": _cmd_scan,
    "extend": _cmd_extend,
    "pkahler": _cmd_pkahler,
    "identities": _cmd_identities,
}


def run(cfg: RunConfig) -> tuple:
    """Execute a configuration; returns (exit code, report text)."""
    try:
        text, ok = _DISPATCH[cfg.subcommand](cfg)
    except ModelError as e:
        return 2, f"error: {e}\n"
    except HypothesisError as e:
        return 1, f"refused: {e}\n"
    except NotSolvableError as e:
        return 1, f"not solvable: {e}\n"
    if cfg.pretty:
        text = _align(text)
    return (0 if ok else 1), text


def main(argv=None) -> int:
    try:
        cfg = _config(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    code, text = run(cfg)
    if text.startswith(("error:", "refused:", "not solvable:")):
        sys.stderr.write(text)
    elif cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
