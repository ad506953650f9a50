"""Matrices, projective points and Hermitian forms over F_{q^2}.

Vectors are rows and projective transformations act on the right, so a
point P maps to P.T and a form matrix A pulls back to T^-1 A (T^-1)*
where * is conjugate transpose (entrywise q-power Frobenius, then
transpose).  Matrices are tuples of row tuples of encoded field
elements, hashable for use as orbit and closure keys.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from .fields import FieldTower, GaloisField

Matrix = tuple[tuple[int, ...], ...]
Point = tuple[int, ...]


class SingularMatrixError(ValueError):
    """A matrix required to be invertible is singular."""


def mat_identity(size: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(size)) for i in range(size))


def mat_from_rows(rows) -> Matrix:
    return tuple(tuple(r) for r in rows)


def mat_mul(K: GaloisField, A: Matrix, B: Matrix) -> Matrix:
    add, mul = K.add, K.mul
    n, mid, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(m):
            acc = 0
            for k in range(mid):
                acc = add(acc, mul(Ai[k], B[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def vec_mat(K: GaloisField, v: Point, A: Matrix) -> Point:
    add, mul = K.add, K.mul
    out = []
    for j in range(len(A[0])):
        acc = 0
        for k in range(len(v)):
            acc = add(acc, mul(v[k], A[k][j]))
        out.append(acc)
    return tuple(out)


def mat_transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def conj_matrix(tower: FieldTower, A: Matrix) -> Matrix:
    frob = tower.frob
    return tuple(tuple(frob[x] for x in row) for row in A)


def conj_transpose(tower: FieldTower, A: Matrix) -> Matrix:
    return mat_transpose(conj_matrix(tower, A))


def mat_scale(K: GaloisField, c: int, A: Matrix) -> Matrix:
    mul = K.mul
    return tuple(tuple(mul(c, x) for x in row) for row in A)


def mat_neg(K: GaloisField, A: Matrix) -> Matrix:
    neg = K.neg
    return tuple(tuple(neg(x) for x in row) for row in A)


def mat_det(K: GaloisField, A: Matrix) -> int:
    rows = [list(r) for r in A]
    n = len(rows)
    add, mul, neg = K.add, K.mul, K.neg
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = neg(det)
        det = mul(det, rows[c][c])
        ic = K.inv(rows[c][c])
        for r in range(c + 1, n):
            f = rows[r][c]
            if f:
                f = mul(f, ic)
                for j in range(c, n):
                    rows[r][j] = add(rows[r][j], neg(mul(f, rows[c][j])))
    return det


def mat_inv(K: GaloisField, A: Matrix) -> Matrix:
    n = len(A)
    add, mul, neg = K.add, K.mul, K.neg
    rows = [list(r) + [1 if i == j else 0 for j in range(n)]
            for i, r in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        rows[c], rows[piv] = rows[piv], rows[c]
        ic = K.inv(rows[c][c])
        rows[c] = [mul(ic, x) for x in rows[c]]
        for r in range(n):
            if r != c and rows[r][c]:
                f = rows[r][c]
                rows[r] = [add(x, neg(mul(f, y))) for x, y in zip(rows[r], rows[c])]
    return tuple(tuple(r[n:]) for r in rows)


def canonical_proj(K: GaloisField, A: Matrix) -> Matrix:
    """Scale so the first nonzero entry in row-major order is 1."""
    lead = next((x for row in A for x in row if x), None)
    if lead is None:
        raise ValueError("zero matrix has no projective representative")
    if lead == 1:
        return mat_from_rows(A)
    return mat_scale(K, K.inv(lead), A)


def proj_equal(K: GaloisField, A: Matrix, B: Matrix) -> bool:
    return canonical_proj(K, A) == canonical_proj(K, B)


# projective points ----------------------------------------------------------

def normalize_point(K: GaloisField, v: Sequence[int]) -> Point:
    lead = next((x for x in v if x), None)
    if lead is None:
        raise ValueError("zero vector is not a projective point")
    if lead == 1:
        return tuple(v)
    il = K.inv(lead)
    return tuple(K.mul(il, x) for x in v)


def point_code(K: GaloisField, pt: Point) -> int:
    code = 0
    for x in reversed(pt):
        code = code * K.order + x
    return code


def point_from_code(K: GaloisField, code: int, dim: int) -> Point:
    out = []
    for _ in range(dim + 1):
        out.append(code % K.order)
        code //= K.order
    return tuple(out)


def all_projective_points(tower: FieldTower, dim: int) -> Iterator[Point]:
    """Canonical representatives of P^dim(F_{q^2}), first nonzero = 1."""
    m = tower.fq2.order
    for lead in range(dim + 1):
        for tail in itertools.product(range(m), repeat=dim - lead):
            yield (0,) * lead + (1,) + tail


# Hermitian machinery ---------------------------------------------------------

def lang_map(tower: FieldTower, T: Matrix) -> Matrix:
    """T conj(T)^t; always Hermitian, invertible iff T is."""
    return mat_mul(tower.fq2, T, conj_transpose(tower, T))


def is_hermitian(tower: FieldTower, A: Matrix) -> bool:
    frob = tower.frob
    n = len(A)
    return all(A[i][j] == frob[A[j][i]] for i in range(n) for j in range(n))


def hermitian_rescale(tower: FieldTower, A: Matrix):
    """(c, cA) with cA Hermitian, or None when no scalar works.

    c is the smallest solution (element encoding order) of
    c^(q-1) = d^-1 where conj(A)^t = d A.
    """
    K = tower.fq2
    if is_hermitian(tower, A):
        return 1, mat_from_rows(A)
    Astar = conj_transpose(tower, A)
    pairs = [(x, y) for row_a, row_s in zip(A, Astar) for x, y in zip(row_a, row_s)]
    lead = next(((x, y) for x, y in pairs if x or y), None)
    if lead is None or lead[0] == 0:
        return None
    d = K.div(lead[1], lead[0])
    if mat_scale(K, d, A) != Astar:
        return None
    target = K.inv(d)
    for c in range(1, K.order):
        if K.pow_int(c, tower.q - 1) == target:
            H = mat_scale(K, c, A)
            assert is_hermitian(tower, H)
            return c, H
    return None


def eval_form(tower: FieldTower, A: Matrix, P: Sequence[int]) -> int:
    """Value of sum a_ij x_i x_j^q at the point P."""
    K = tower.fq2
    add, mul, frob = K.add, K.mul, tower.frob
    acc = 0
    for i, Pi in enumerate(P):
        if Pi:
            row = A[i]
            w = 0
            for j, Pj in enumerate(P):
                w = add(w, mul(row[j], frob[Pj]))
            acc = add(acc, mul(Pi, w))
    return acc


class HermitianVariety:
    """The hypersurface sum a_ij x_i x_j^q = 0 for an invertible A.

    A need not be Hermitian (conjugate transposes of scalars of Hermitian
    matrices appear naturally); the hermitian flag records the entry test.
    Two varieties are equal iff their matrices agree up to a scalar.
    """

    __slots__ = ("tower", "A", "n", "hermitian", "_points")

    def __init__(self, tower: FieldTower, A: Matrix, check: bool = True):
        self.tower = tower
        self.A = mat_from_rows(A)
        self.n = len(A) - 1
        if check and mat_det(tower.fq2, self.A) == 0:
            raise SingularMatrixError("form matrix is singular")
        self.hermitian = is_hermitian(tower, self.A)
        self._points = None

    def eval(self, P: Sequence[int]) -> int:
        if len(P) != self.n + 1:
            raise ValueError(f"point has {len(P)} coordinates, form needs {self.n + 1}")
        return eval_form(self.tower, self.A, P)

    def contains(self, P: Sequence[int]) -> bool:
        return self.eval(P) == 0

    def points(self) -> list[Point]:
        """All F_{q^2}-rational points, canonical representatives."""
        if self._points is None:
            self._points = [P for P in all_projective_points(self.tower, self.n)
                            if self.eval(P) == 0]
        return self._points

    def __eq__(self, other):
        return (isinstance(other, HermitianVariety)
                and (other.tower.p, other.tower.nu) == (self.tower.p, self.tower.nu)
                and proj_equal(self.tower.fq2, self.A, other.A))

    def __hash__(self):
        return hash((self.tower.p, self.tower.nu,
                     canonical_proj(self.tower.fq2, self.A)))

    def __repr__(self):
        return f"HermitianVariety(n={self.n}, q={self.tower.q})"


def transform_variety(X: HermitianVariety, T: Matrix) -> HermitianVariety:
    """Image of X under the right action of [T]: P in X iff P.T in X^T."""
    K = X.tower.fq2
    Ti = mat_inv(K, T)
    A2 = mat_mul(K, Ti, mat_mul(K, X.A, conj_transpose(X.tower, Ti)))
    return HermitianVariety(X.tower, A2, check=False)


def fermat_matrix(size: int) -> Matrix:
    return mat_identity(size)


# Hermitian Gram-Schmidt and the constructive inverse of the Lang map ---------

def _gram(tower: FieldTower, H: Matrix, S: list[list[int]]) -> list[list[int]]:
    K = tower.fq2
    Sm = mat_from_rows(S)
    G = mat_mul(K, Sm, mat_mul(K, H, conj_transpose(tower, Sm)))
    return [list(r) for r in G]


def _indicator(n1: int, i: int, j: int | None = None) -> tuple[int, ...]:
    return tuple(1 if k == i or k == j else 0 for k in range(n1))


def gram_schmidt_against_form(tower: FieldTower, H: Matrix,
                              basis: Matrix | None = None) -> Matrix:
    """Rows W with W H conj(W)^t = I, starting from the given basis rows.

    Pivot search per step: remaining basis vectors first, then their
    pairwise sums, then targeted scalar combinations; candidates within a
    tier are ordered by the lexicographic order of their indicator
    vectors.  Pivots are rescaled to norm one via the solved norm
    equation.  The output is verified by re-multiplication.
    """
    K = tower.fq2
    n1 = len(H)
    if basis is None:
        basis = mat_identity(n1)
    S = [list(r) for r in basis]
    G = _gram(tower, H, S)
    add, mul, neg, frob = K.add, K.mul, K.neg, tower.frob

    def add_row(dst, src, c):
        S[dst] = [add(x, mul(c, y)) for x, y in zip(S[dst], S[src])]

    for k in range(n1):
        idxs = sorted(range(k, n1), key=lambda i: _indicator(n1, i))
        pairs = sorted(itertools.combinations(range(k, n1), 2),
                       key=lambda ij: _indicator(n1, *ij))
        piv = next((i for i in idxs if G[i][i]), None)
        if piv is None:
            for i, j in pairs:
                if tower.trace[G[i][j]]:
                    add_row(i, j, 1)
                    piv = i
                    break
        if piv is None:
            for i, j in pairs:
                gij = G[i][j]
                if gij:
                    c = next(c for c in range(1, K.order)
                             if tower.trace[mul(frob[c], gij)])
                    add_row(i, j, c)
                    piv = i
                    break
        if piv is None:
            raise SingularMatrixError("form is degenerate on the given basis")
        if piv != k:
            S[k], S[piv] = S[piv], S[k]
        G = _gram(tower, H, S)
        h = G[k][k]
        hq = tower.embed_inv[h]
        assert hq > 0, "pivot norm escaped F_q"
        alpha = tower.solve_norm_table[hq]
        ia = K.inv(alpha)
        S[k] = [mul(ia, x) for x in S[k]]
        G = _gram(tower, H, S)
        assert G[k][k] == 1
        for j in range(n1):
            if j != k and G[j][k]:
                add_row(j, k, neg(G[j][k]))
        G = _gram(tower, H, S)
    W = mat_from_rows(S)
    if _gram(tower, H, [list(r) for r in W]) != [list(r) for r in mat_identity(n1)]:
        raise RuntimeError("Gram-Schmidt failed to reach the identity Gram matrix")
    return W


def lang_decompose(tower: FieldTower, H: Matrix) -> Matrix:
    """T with T conj(T)^t = H, for invertible Hermitian H; verified."""
    if not is_hermitian(tower, H):
        raise ValueError("matrix is not Hermitian")
    if mat_det(tower.fq2, H) == 0:
        raise SingularMatrixError("matrix is singular")
    W = gram_schmidt_against_form(tower, H)
    T = mat_inv(tower.fq2, W)
    if lang_map(tower, T) != mat_from_rows(H):
        raise RuntimeError("Lang decomposition failed verification")
    return T
