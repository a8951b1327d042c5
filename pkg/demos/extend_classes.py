"""Extend d-closed forms of the Iwasawa manifold along its Kuranishi family.

For each harmonic (1,1) class with a d-closed representative we solve the
fixed-point equation in the truncated parameter ring and check that the
extension stays d-closed on every fibre up to order N.
"""

from nilcohom import catalog
from nilcohom.algebra import Form
from nilcohom.deform import kuranishi_series
from nilcohom.errors import HypothesisError
from nilcohom.extend import compare_routes, extend_d_closed, verify_extension
from nilcohom.hodge import canonical_representative, harmonic_basis
from nilcohom.monomial import basis

N = 3
m = catalog("iwasawa3")
fam = kuranishi_series(m, N)
b = basis(3, 1, 1)
for v in harmonic_basis(m, "dbar", 1, 1):
    sigma = Form.from_vector(m, b, v)
    try:
        mu0 = canonical_representative(m, sigma)
    except HypothesisError as e:
        print(f"no d-closed representative for {sigma}: {e}")
        continue
    res = extend_d_closed(m, mu0, fam, N)
    chk = verify_extension(res, fam)
    same = compare_routes(m, mu0, fam, N).agree
    print(f"mu0 = {mu0}")
    print(f"  closed: {res.closed_ok}  delbar_t-closed: {res.dbar_t_ok}  checks: {chk.ok}  routes agree: {same}")

# the (2,0) classes are refused: the needed partial del-delbar condition fails
try:
    extend_d_closed(m, Form.parse(m, "p1^p2"), fam, N)
except HypothesisError as e:
    print("refused:", e)
