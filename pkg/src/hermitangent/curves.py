"""Rational normal curves and total tangency to Hermitian hypersurfaces.

A curve is the image of the degree-n Veronese map
phi0([s:t]) = [s^n : s^(n-1) t : ... : t^n] composed with an invertible
matrix M acting on the right.  Parameters [alpha:beta] are stored as
normalized pairs of F_{q^2} encodings: (1, t) for affine t and (0, 1)
for infinity.  Tangency is certified through the pullback of the form
along the parameterization: the curve is totally tangent iff the
pullback is c * h^n for a squarefree h of homogeneous degree q+1 that
splits over F_{q^2}, and the q+1 roots form a Baer subset of P^1.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .fields import FieldTower
from .linalg import (
    HermitianVariety,
    Matrix,
    Point,
    SingularMatrixError,
    canonical_proj,
    mat_det,
    mat_identity,
    mat_inv,
    mat_mul,
    normalize_point,
    vec_mat,
)
from .polys import HomogPoly, homog_roots_analysis, nth_power_decompose, poly_mul, poly_pow

Param = tuple[int, int]


class ZeroPullbackError(ValueError):
    """The pullback vanishes identically: the curve lies inside the variety."""


def normalize_param(tower: FieldTower, param) -> Param:
    a, b = param
    if a:
        return (1, tower.fq2.div(b, a))
    if b:
        return (0, 1)
    raise ValueError("zero parameter pair")


def phi0(tower: FieldTower, param, n: int) -> Point:
    """[alpha^n : alpha^(n-1) beta : ... : beta^n], normalized."""
    a, b = normalize_param(tower, param)
    K = tower.fq2
    if a == 0:
        return (0,) * n + (1,)
    out, acc = [], 1
    for _ in range(n + 1):
        out.append(acc)
        acc = K.mul(acc, b)
    return tuple(out)


def canonical_matrix_B(tower: FieldTower, n: int) -> Matrix:
    """Anti-diagonal matrix with entries binom(n,i) (-1)^i at (i, n-i).

    Raises when a binomial coefficient vanishes mod p, which makes the
    matrix singular; this rules out n = 0 mod p and Lucas-type pairs
    such as p = 3, n = 4.
    """
    if n < 2:
        raise ValueError("curve degree must be at least 2")
    K = tower.fq2
    B = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        c = math.comb(n, i) % tower.p
        if c == 0:
            raise SingularMatrixError(
                f"binom({n},{i}) = {math.comb(n, i)} vanishes mod {tower.p}; "
                "the anti-diagonal form is singular")
        B[i][n - i] = K.neg(c) if i % 2 else c
    return tuple(tuple(row) for row in B)


def _phi_table(tower: FieldTower, n: int) -> np.ndarray:
    """phi0 of every parameter in tower.param_list order, one row each."""
    tbl = tower._phi_cache.get(n)
    if tbl is None:
        tbl = np.array([phi0(tower, pr, n) for pr in tower.param_list],
                       dtype=np.int64)
        tower._phi_cache[n] = tbl
    return tbl


def _code_powers(tower: FieldTower, n: int) -> np.ndarray:
    pw = tower._pt_cache.get(n)
    if pw is None:
        pw = tower.fq2.order ** np.arange(n + 1, dtype=np.int64)
        tower._pt_cache[n] = pw
    return pw


def _rows_times_matrix(K, rows: np.ndarray, M: Matrix) -> np.ndarray:
    logs = K.np_log[rows]
    out = np.empty_like(rows)
    for j in range(len(M[0])):
        acc = np.zeros(len(rows), dtype=np.int64)
        for k in range(len(M)):
            c = M[k][j]
            if c:
                acc = K.np_add[acc, K.np_exp_ext[logs[:, k] + K.np_log[c]]]
        out[:, j] = acc
    return out


def _normalize_rows(K, pts: np.ndarray) -> np.ndarray:
    lead_col = (pts != 0).argmax(axis=1)
    lead = pts[np.arange(len(pts)), lead_col]
    scale_log = K.np_log[K.np_inv[lead]]
    return K.np_exp_ext[K.np_log[pts] + scale_log[:, None]].astype(np.int64)


class RationalNormalCurve:
    """Image of phi0 under the right action of an invertible matrix M."""

    __slots__ = ("tower", "n", "M", "_codes", "_key")

    def __init__(self, tower: FieldTower, n: int, M: Matrix | None = None,
                 check: bool = True):
        self.tower = tower
        self.n = n
        self.M = mat_identity(n + 1) if M is None else tuple(tuple(r) for r in M)
        if check and mat_det(tower.fq2, self.M) == 0:
            raise SingularMatrixError("curve matrix is singular")
        self._codes = None
        self._key = None

    @classmethod
    def canonical(cls, tower: FieldTower, n: int) -> "RationalNormalCurve":
        return cls(tower, n, check=False)

    def point(self, param) -> Point:
        v = vec_mat(self.tower.fq2, phi0(self.tower, param, self.n), self.M)
        return normalize_point(self.tower.fq2, v)

    def points(self) -> list[Point]:
        """One point per parameter, in tower.param_list order."""
        K = self.tower.fq2
        rows = _rows_times_matrix(K, _phi_table(self.tower, self.n), self.M)
        return [tuple(r) for r in _normalize_rows(K, rows).tolist()]

    def _point_codes(self) -> np.ndarray:
        if self._codes is None:
            K = self.tower.fq2
            rows = _rows_times_matrix(K, _phi_table(self.tower, self.n), self.M)
            norm = _normalize_rows(K, rows)
            self._codes = norm @ _code_powers(self.tower, self.n)
        return self._codes

    def key(self) -> bytes:
        """Digest of the sorted F_{q^2}-point set; equal iff same curve."""
        if self._key is None:
            codes = np.sort(self._point_codes())
            self._key = hashlib.blake2b(codes.tobytes(), digest_size=16).digest()
        return self._key

    def transform(self, U: Matrix) -> "RationalNormalCurve":
        return RationalNormalCurve(self.tower, self.n,
                                   mat_mul(self.tower.fq2, self.M, U),
                                   check=False)

    def param_of_point(self) -> dict[Point, Param]:
        return {pt: pr for pr, pt in zip(self.tower.param_list, self.points())}

    def __repr__(self):
        return f"RationalNormalCurve(n={self.n}, q={self.tower.q})"


def curve_point_set(curve: RationalNormalCurve) -> tuple[Point, ...]:
    """All q^2+1 points, sorted as in the key digest."""
    return tuple(sorted(curve.points(), key=lambda pt: tuple(reversed(pt))))


@dataclass(frozen=True)
class MarkedCurve:
    curve: RationalNormalCurve
    marks: tuple[Point, Point, Point]

    def __post_init__(self):
        if len(set(self.marks)) != 3:
            raise ValueError("marks must be pairwise distinct")
        on_curve = set(self.curve.points())
        if any(m not in on_curve for m in self.marks):
            raise ValueError("marks must lie on the curve")


def canonical_marks(curve: RationalNormalCurve) -> tuple[Point, Point, Point]:
    """Images of the parameters 0, 1, infinity."""
    return (curve.point((1, 0)), curve.point((1, 1)), curve.point((0, 1)))


# pullback and tangency -------------------------------------------------------

def pullback(curve: RationalNormalCurve, X: HermitianVariety) -> HomogPoly:
    """f_A restricted to the curve, as a binary form of degree n(q+1).

    Substitutes y = phi0(s, t) M into sum a_ij y_i y_j^q, using that the
    q-power of a form in (s, t) only Frobenius-twists coefficients and
    stretches exponents by q.
    """
    tower, K = curve.tower, curve.tower.fq2
    if len(X.A) != curve.n + 1:
        raise ValueError("curve and variety dimensions differ")
    n, q = curve.n, tower.q
    add, mul, frob = K.add, K.mul, tower.frob
    M, A = curve.M, X.A
    N = n * (q + 1)
    out = [0] * (N + 1)
    for j in range(n + 1):
        u = [0] * (n + 1)
        for i in range(n + 1):
            a = A[i][j]
            if a:
                for k in range(n + 1):
                    u[k] = add(u[k], mul(a, M[k][i]))
        for k in range(n + 1):
            cq = frob[M[k][j]]
            if cq:
                base = q * k
                for d in range(n + 1):
                    if u[d]:
                        out[base + d] = add(out[base + d], mul(cq, u[d]))
    if not any(out):
        raise ZeroPullbackError("pullback vanishes identically")
    return HomogPoly(tuple(out), N)


def canonical_pullback_target(tower: FieldTower, n: int) -> HomogPoly:
    """(t^q - t)^n as a binary form of degree n(q+1)."""
    K = tower.fq2
    base = [0] * (tower.q + 1)
    base[1] = K.neg(1)
    base[tower.q] = 1
    return HomogPoly(poly_pow(K, tuple(base), n), n * (tower.q + 1))


@dataclass(frozen=True)
class TangencyCertificate:
    """Witness that a curve is totally tangent: pullback = scalar * h^n
    with the q+1 roots of h forming a Baer subset."""

    parameters: tuple[Param, ...]
    multiplicity: int
    scalar: int
    baer_witness: Matrix

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class TangencyFailure:
    reason: str

    def __bool__(self) -> bool:
        return False


def total_tangency_check(curve: RationalNormalCurve, X: HermitianVariety):
    """TangencyCertificate, or TangencyFailure naming the first violation.

    Failure reasons, in check order: not_nth_power, not_squarefree,
    does_not_split, wrong_root_count, not_baer.  A curve contained in X
    raises ZeroPullbackError instead.
    """
    tower = curve.tower
    K, q, n = tower.fq2, tower.q, curve.n
    hp = pullback(curve, X)
    dec = nth_power_decompose(K, hp.coeffs, n)
    if dec is None:
        return TangencyFailure("not_nth_power")
    c, h = dec
    roots, why = homog_roots_analysis(K, HomogPoly(h, q + 1))
    if roots is None:
        return TangencyFailure(why)
    if len(roots) != q + 1:
        return TangencyFailure("wrong_root_count")
    witness = baer_check(tower, roots)
    if witness is None:
        return TangencyFailure("not_baer")
    return TangencyCertificate(tuple(roots), n, c, witness)


# Moebius maps on P^1 ---------------------------------------------------------

def mobius_apply(tower: FieldTower, g: Matrix, param) -> Param:
    return normalize_param(tower, vec_mat(tower.fq2, tuple(param), g))


def mobius_from_frame(tower: FieldTower, p0: Param, p1: Param, p2: Param) -> Matrix:
    """The Moebius map sending 0, 1, infinity to the given parameters."""
    K = tower.fq2
    lam = vec_mat(K, p1, mat_inv(K, (tuple(p0), tuple(p2))))
    if not (lam[0] and lam[1]):
        raise ValueError("parameters are not pairwise distinct")
    return canonical_proj(K, (
        (K.mul(lam[0], p0[0]), K.mul(lam[0], p0[1])),
        (K.mul(lam[1], p2[0]), K.mul(lam[1], p2[1]))))


def mobius_sending_to_frame(tower: FieldTower, p0, p1, p2) -> Matrix:
    """The Moebius map sending the given parameters to 0, 1, infinity."""
    K = tower.fq2
    return canonical_proj(K, mat_inv(K, mobius_from_frame(tower, p0, p1, p2)))


def baer_check(tower: FieldTower, params):
    """Moebius witness carrying the q+1 parameters onto F_q u {inf}, or None.

    The witness is pinned by sending the first three parameters to
    0, 1, infinity; the set is Baer iff that map sends every parameter
    into F_q u {inf}.
    """
    K = tower.fq2
    params = [normalize_param(tower, pr) for pr in params]
    if len(params) != tower.q + 1:
        raise ValueError(f"expected {tower.q + 1} parameters, got {len(params)}")
    if len(set(params)) != len(params):
        raise ValueError("parameters must be distinct")
    G = mobius_sending_to_frame(tower, params[0], params[1], params[2])
    seen = set()
    for pr in params:
        w = mobius_apply(tower, G, pr)
        if w[0] and not tower.in_fq[w[1]]:
            return None
        seen.add(w)
    assert len(seen) == tower.q + 1
    return G


def mobius_to_ambient(tower: FieldTower, g: Matrix, n: int) -> Matrix:
    """The (n+1) x (n+1) matrix S with phi0(param . g) = phi0(param) . S.

    Column j holds the coefficients of (a s + c t)^(n-j) (b s + d t)^j
    in the monomial basis s^(n-k) t^k, for g = ((a, b), (c, d)).
    """
    K = tower.fq2
    if mat_det(K, g) == 0:
        raise SingularMatrixError("Moebius matrix is singular")
    (a, b), (c, d) = g
    cols = []
    for j in range(n + 1):
        f = poly_mul(K, poly_pow(K, (a, c), n - j), poly_pow(K, (b, d), j))
        cols.append(list(f) + [0] * (n + 1 - len(f)))
    return tuple(tuple(cols[j][k] for j in range(n + 1)) for k in range(n + 1))
