"""Exact dense linear algebra over Q(i).

Matrices are lists of rows of :class:`GaussRational`.  Sizes in this package
are tiny (dimension of an invariant bigraded piece), so plain Gauss-Jordan
elimination is used throughout.
"""

from __future__ import annotations

from .gauss import ONE, ZERO, GaussRational

__all__ = [
    "zeros",
    "identity",
    "shape",
    "matmul",
    "matvec",
    "add",
    "sub",
    "scale",
    "conj_transpose",
    "hstack",
    "vstack",
    "rref",
    "rank",
    "nullspace",
    "column_space",
    "solve",
    "inverse",
    "is_zero",
    "orthogonal_projector",
    "green_and_projector",
    "in_column_space",
    "Mat",
    "projector",
    "subspace_intersection",
    "span_contains",
]


def zeros(r: int, c: int):
    return [[ZERO] * c for _ in range(r)]


def identity(n: int):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def shape(A):
    return len(A), (len(A[0]) if A else 0)


def matmul(A, B, inner: int | None = None):
    """A @ B; ``inner`` gives the shared dimension when A has no rows."""
    if not A:
        return []
    k = len(A[0]) if inner is None else inner
    cols = len(B[0]) if B else 0
    if k == 0:
        return zeros(len(A), cols)
    Bt = list(zip(*B)) if B else []
    out = []
    for row in A:
        nz = [(j, a) for j, a in enumerate(row) if a]
        out_row = []
        for col in Bt:
            s = ZERO
            for j, a in nz:
                b = col[j]
                if b:
                    s = s + a * b
            out_row.append(s)
        out.append(out_row)
    return out


def matvec(A, v):
    out = []
    for row in A:
        s = ZERO
        for a, x in zip(row, v):
            if a and x:
                s = s + a * x
        out.append(s)
    return out


def add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(A, c):
    c = GaussRational.coerce(c)
    return [[a * c for a in row] for row in A]


def conj_transpose(A, rows: int | None = None):
    """Hermitian adjoint.  ``rows`` is the column count of A when A is empty."""
    if not A:
        return [[] for _ in range(rows or 0)]
    return [[A[i][j].conjugate() for i in range(len(A))] for j in range(len(A[0]))]


def hstack(*mats):
    mats = [M for M in mats if M is not None]
    rows = max((len(M) for M in mats), default=0)
    out = [[] for _ in range(rows)]
    for M in mats:
        for i in range(rows):
            out[i].extend(M[i] if M else [])
    return out


def vstack(*mats):
    out = []
    for M in mats:
        out.extend(list(r) for r in M)
    return out


def is_zero(A) -> bool:
    return all(not a for row in A for a in row)


def rref(A, ncols: int | None = None):
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    M = [list(r) for r in A]
    rows = len(M)
    cols = len(M[0]) if M else (ncols or 0)
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = None
        for i in range(r, rows):
            if M[i][c]:
                p = i
                break
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = M[r][c].inverse()
        M[r] = [x * inv if x else x for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c]:
                f = M[i][c]
                Mi, Mr = M[i], M[r]
                M[i] = [x - f * y if y else x for x, y in zip(Mi, Mr)]
        pivots.append(c)
        r += 1
    return M, pivots


def rank(A) -> int:
    if not A or not A[0]:
        return 0
    return len(rref(A)[1])


def nullspace(A, ncols: int | None = None):
    """Basis of {x : A x = 0} as a list of column vectors."""
    cols = len(A[0]) if A else (ncols or 0)
    if not A:
        return [[ONE if i == j else ZERO for i in range(cols)] for j in range(cols)]
    R, piv = rref(A)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * cols
        v[f] = ONE
        for row, pc in zip(R, piv):
            if row[f]:
                v[pc] = -row[f]
        basis.append(v)
    return basis


def column_space(A):
    """Basis of the column space (a subset of A's columns)."""
    if not A or not A[0]:
        return []
    _, piv = rref(A)
    return [[row[c] for row in A] for c in piv]


def solve(A, b):
    """One solution x of A x = b, or None if inconsistent."""
    rows = len(A)
    cols = len(A[0]) if A else 0
    if rows == 0:
        return [] if not cols else [ZERO] * cols
    aug = [list(A[i]) + [b[i]] for i in range(rows)]
    R, piv = rref(aug)
    if cols in piv:
        return None
    x = [ZERO] * cols
    for row, pc in zip(R, piv):
        x[pc] = row[cols]
    return x


def in_column_space(A, b) -> bool:
    if not any(b):
        return True
    if not A or not A[0]:
        return False
    return solve(A, b) is not None


def inverse(A):
    n = len(A)
    aug = [list(A[i]) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n or (piv and piv[n - 1] != n - 1):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def orthogonal_projector(basis, dim: int):
    """Orthogonal projector onto span(basis) w.r.t. the standard Hermitian form."""
    if not basis:
        return zeros(dim, dim)
    K = [[v[i] for v in basis] for i in range(dim)]  # dim x k
    Kh = conj_transpose(K)
    gram_inv = inverse(matmul(Kh, K))
    return matmul(matmul(K, gram_inv), Kh)


def green_and_projector(L):
    """For a Hermitian positive semidefinite L return (H, G).

    H is the orthogonal projector onto ker L and G the Green operator:
    L G = G L = 1 - H and G H = 0.
    """
    n = len(L)
    if n == 0:
        return [], []
    H = orthogonal_projector(nullspace(L), n)
    G = sub(inverse(add(L, H)), H)
    return H, G


class Mat:
    """Shape-aware matrix over Q(i); tolerates zero rows or columns."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, nrows: int | None = None, ncols: int | None = None):
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows) if nrows is None else nrows
        self.ncols = (len(self.rows[0]) if self.rows else 0) if ncols is None else ncols
        if not self.rows and self.nrows:
            self.rows = [[] for _ in range(self.nrows)]

    @classmethod
    def zeros(cls, r, c):
        return cls(zeros(r, c), r, c)

    @classmethod
    def identity(cls, n):
        return cls(identity(n), n, n)

    @classmethod
    def from_columns(cls, cols, nrows):
        return cls([[v[i] for v in cols] for i in range(nrows)], nrows, len(cols))

    @property
    def shape(self):
        return self.nrows, self.ncols

    def columns(self):
        return [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)]

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.nrows == 0 or other.ncols == 0:
            return Mat.zeros(self.nrows, other.ncols)
        if self.ncols == 0:
            return Mat.zeros(self.nrows, other.ncols)
        return Mat(matmul(self.rows, other.rows), self.nrows, other.ncols)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return Mat(add(self.rows, other.rows), self.nrows, self.ncols)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return Mat(sub(self.rows, other.rows), self.nrows, self.ncols)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return Mat(scale(self.rows, c), self.nrows, self.ncols)

    @property
    def H(self) -> "Mat":
        if self.nrows == 0 or self.ncols == 0:
            return Mat.zeros(self.ncols, self.nrows)
        return Mat(conj_transpose(self.rows), self.ncols, self.nrows)

    def __eq__(self, other):
        return isinstance(other, Mat) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, tuple(tuple(r) for r in self.rows)))

    def is_zero(self) -> bool:
        return is_zero(self.rows)

    def is_hermitian(self) -> bool:
        return self.nrows == self.ncols and self == self.H

    def rank(self) -> int:
        if self.nrows == 0 or self.ncols == 0:
            return 0
        return rank(self.rows)

    def nullity(self) -> int:
        return self.ncols - self.rank()

    def kernel(self):
        """Kernel basis as a list of column vectors."""
        if self.ncols == 0:
            return []
        if self.nrows == 0:
            return nullspace([], self.ncols)
        return nullspace(self.rows)

    def image(self):
        if self.nrows == 0 or self.ncols == 0:
            return []
        return column_space(self.rows)

    def apply(self, v):
        if self.ncols == 0:
            return [ZERO] * self.nrows
        return matvec(self.rows, v)

    def solve(self, b):
        """One solution of self x = b or None."""
        if self.ncols == 0:
            return [] if not any(b) else None
        if self.nrows == 0:
            return [ZERO] * self.ncols
        return solve(self.rows, b)

    def inverse(self) -> "Mat":
        if self.nrows == 0:
            return Mat.zeros(0, 0)
        return Mat(inverse(self.rows), self.nrows, self.ncols)

    @staticmethod
    def hstack(*mats):
        r = mats[0].nrows
        if any(m.nrows != r for m in mats):
            raise ValueError("hstack row mismatch")
        return Mat([sum((m.rows[i] for m in mats), []) for i in range(r)], r, sum(m.ncols for m in mats))

    @staticmethod
    def vstack(*mats):
        c = mats[0].ncols
        if any(m.ncols != c for m in mats):
            raise ValueError("vstack column mismatch")
        return Mat([row for m in mats for row in m.rows], sum(m.nrows for m in mats), c)

    def __repr__(self):
        return f"Mat({self.nrows}x{self.ncols})"


def projector(basis_vectors, dim: int) -> Mat:
    """Orthogonal projector onto span(basis_vectors) as a Mat."""
    if dim == 0:
        return Mat.zeros(0, 0)
    return Mat(orthogonal_projector(basis_vectors, dim), dim, dim)


def subspace_intersection(A_cols, B_cols, dim: int):
    """Basis of span(A) ∩ span(B) (inputs: lists of column vectors)."""
    if not A_cols or not B_cols:
        return []
    M = Mat.from_columns(list(A_cols) + [[-x for x in v] for v in B_cols], dim)
    out = []
    ka = len(A_cols)
    for v in M.kernel():
        w = [ZERO] * dim
        for c, a in zip(v[:ka], A_cols):
            if c:
                for i in range(dim):
                    if a[i]:
                        w[i] = w[i] + c * a[i]
        out.append(w)
    if not out:
        return []
    return column_space([[w[i] for w in out] for i in range(dim)])


def span_contains(A_cols, vectors, dim: int) -> bool:
    """Whether every vector lies in span(A_cols)."""
    vecs = [v for v in vectors if any(v)]
    if not vecs:
        return True
    if not A_cols:
        return False
    base = Mat.from_columns(A_cols, dim).rank()
    return Mat.from_columns(list(A_cols) + vecs, dim).rank() == base
