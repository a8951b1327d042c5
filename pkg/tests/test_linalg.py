import random

from nilcohom.gauss import ONE, ZERO, GaussRational
from nilcohom.linalg import Mat, green_and_projector, projector, span_contains, subspace_intersection


def rand_mat(rng, r, c, density=0.6):
    return Mat(
        [[GaussRational(rng.randint(-3, 3), rng.randint(-2, 2)) if rng.random() < density else ZERO for _ in range(c)] for _ in range(r)],
        r,
        c,
    )


def test_rank_nullity_and_kernel():
    rng = random.Random(3)
    for _ in range(30):
        A = rand_mat(rng, rng.randint(1, 5), rng.randint(1, 6))
        assert A.rank() + A.nullity() == A.ncols
        for v in A.kernel():
            assert not any(A.apply(v))


def test_inverse_and_solve():
    rng = random.Random(5)
    for _ in range(20):
        A = rand_mat(rng, 4, 4, 0.9)
        if A.rank() < 4:
            continue
        assert (A @ A.inverse()) == Mat.identity(4)
        b = [GaussRational(rng.randint(-3, 3)) for _ in range(4)]
        assert A.apply(A.solve(b)) == b


def test_green_and_projector():
    rng = random.Random(7)
    B = rand_mat(rng, 3, 5)
    L = B.H @ B
    H, G = green_and_projector(L.rows)
    H, G = Mat(H), Mat(G)
    one = Mat.identity(5)
    assert L @ G == one - H
    assert G @ L == one - H
    assert (G @ H).is_zero()
    assert H @ H == H and H.is_hermitian()


def test_empty_shapes():
    Z = Mat.zeros(0, 3)
    assert Z.rank() == 0 and len(Z.kernel()) == 3
    assert (Mat.zeros(2, 0) @ Mat.zeros(0, 4)).shape == (2, 4)
    assert projector([], 0).shape == (0, 0)


def test_subspaces():
    e = lambda i: [ONE if j == i else ZERO for j in range(3)]  # noqa: E731
    inter = subspace_intersection([e(0), e(1)], [e(1), e(2)], 3)
    assert len(inter) == 1 and span_contains([e(1)], inter, 3)
    assert span_contains([e(0), e(1)], [[ONE, ONE, ZERO]], 3)
    assert not span_contains([e(0)], [e(2)], 3)
