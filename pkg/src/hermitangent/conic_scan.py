"""Exhaustive scan of plane conics, an oracle independent of the orbit.

Every rational normal curve in P^2 is a smooth conic, so in odd
characteristic the full set of totally tangent curves can be recovered
by enumerating all symmetric 3x3 classes up to scalar.  The scan runs a
vectorized counting filter first: a point P of X is a tangency point of
the conic C iff P lies on C and the conic gradient C P^t is parallel to
the variety gradient A sigma(P)^t, all of which are F_p-linear
conditions on the entries of C.  A smooth conic is totally tangent iff
it satisfies these conditions at exactly q+1 points of X (tangencies
use up the full intersection degree 2(q+1), leaving no transversal
points), so counting condition hits never discards a true curve.
Survivors then pass through the exact certificate check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import RationalNormalCurve, ZeroPullbackError, total_tangency_check
from .fields import CapExceededError, FieldTower
from .linalg import HermitianVariety, Matrix, all_projective_points, mat_det
from .orbit import DEFAULT_MATRIX_CAP

_SLOTS = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


@dataclass(frozen=True)
class ConicScanResult:
    keys: frozenset
    candidates_total: int
    scanned: int
    filtered: int
    singular_discarded: int
    tangent_count: int
    shards: int
    shard_index: int


def _conic_matrix(slot_vals) -> Matrix:
    C = [[0] * 3 for _ in range(3)]
    for (i, j), v in zip(_SLOTS, slot_vals):
        C[i][j] = v
        C[j][i] = v
    return tuple(tuple(r) for r in C)


def _quad(K, C, v):
    acc = 0
    for i in range(3):
        if v[i]:
            row = 0
            for j in range(3):
                row = K.add(row, K.mul(C[i][j], v[j]))
            acc = K.add(acc, K.mul(v[i], row))
    return acc


def _bil(K, C, u, v):
    acc = 0
    for i in range(3):
        if u[i]:
            row = 0
            for j in range(3):
                row = K.add(row, K.mul(C[i][j], v[j]))
            acc = K.add(acc, K.mul(u[i], row))
    return acc


def conic_parameterize(tower: FieldTower, C: Matrix) -> Matrix:
    """Curve matrix M with phi0 . M parameterizing the smooth conic C.

    Stereographic projection from a rational point p of the conic: the
    direction d = alpha r + beta s meets the conic again at
    Q(d) p - 2 B(p,d) d, quadratic in (alpha, beta); its three
    coefficient vectors are the rows of M.
    """
    K = tower.fq2
    p_pt = next(P for P in all_projective_points(tower, 2)
                if _quad(K, C, P) == 0)
    lead = next(i for i, x in enumerate(p_pt) if x)
    r, s = (tuple(1 if k == idx else 0 for k in range(3))
            for idx in range(3) if idx != lead)
    a2 = K.mul(2, _bil(K, C, p_pt, r))
    b2 = K.mul(2, _bil(K, C, p_pt, s))
    g2 = K.mul(2, _bil(K, C, r, s))

    def lincomb(*terms):
        out = [0, 0, 0]
        for c, vec in terms:
            for t in range(3):
                out[t] = K.add(out[t], K.mul(c, vec[t]))
        return tuple(out)

    neg = K.neg
    M = (lincomb((_quad(K, C, r), p_pt), (neg(a2), r)),
         lincomb((g2, p_pt), (neg(a2), s), (neg(b2), r)),
         lincomb((_quad(K, C, s), p_pt), (neg(b2), s)))
    if mat_det(K, M) == 0:
        raise ValueError("conic parameterization is degenerate")
    curve = RationalNormalCurve(tower, 2, M, check=False)
    for pr in ((1, 0), (1, 1), (0, 1)):
        if _quad(K, C, curve.point(pr)):
            raise RuntimeError("parameterization left the conic")
    return M


def _condition_rows(X: HermitianVariety):
    """F_p-linear condition block for every point of X.

    Per point: membership in the conic plus two cross-product components
    of (C P^t) x (A sigma(P)^t) chosen at the first nonzero gradient
    coordinate, which together are exact for parallelism.
    """
    tower = X.tower
    K = tower.fq2
    p, d = tower.p, 2 * tower.nu
    pts = X.points()
    gpow = [p ** t for t in range(d)]
    rows = []
    for P in pts:
        npv = []
        for i in range(3):
            acc = 0
            for j in range(3):
                acc = K.add(acc, K.mul(X.A[i][j], tower.frob[P[j]]))
            npv.append(acc)
        i0 = next(i for i, x in enumerate(npv) if x)
        mem = []
        cp = [[0] * 6 for _ in range(3)]
        for sidx, (i, j) in enumerate(_SLOTS):
            if i == j:
                mem.append(K.mul(P[i], P[i]))
                cp[i][sidx] = P[i]
            else:
                mem.append(K.mul(2, K.mul(P[i], P[j])))
                cp[i][sidx] = P[j]
                cp[j][sidx] = P[i]
        conds = [mem]
        for jj in range(3):
            if jj != i0:
                conds.append([
                    K.sub(K.mul(npv[i0], cp[jj][sidx]),
                          K.mul(npv[jj], cp[i0][sidx]))
                    for sidx in range(6)])
        for cond in conds:
            for r in range(d):
                rows.append([
                    K.coeffs(K.mul(w, gpow[t]))[r]
                    for w in cond for t in range(d)])
    return np.array(rows, dtype=np.float32), len(pts), 3 * d


def brute_force_conic_scan(X: HermitianVariety, shards: int = 1,
                           shard_index: int = 0,
                           cap: int = DEFAULT_MATRIX_CAP,
                           chunk_size: int = 1 << 15,
                           progress=None) -> ConicScanResult:
    """Keys of every conic totally tangent to X, by exhaustive search."""
    tower = X.tower
    K = tower.fq2
    if len(X.A) != 3:
        raise ValueError("the conic scan is specific to n = 2")
    if tower.p == 2:
        raise ValueError("the conic scan needs odd characteristic")
    if tower.q > 7:
        raise ValueError("the conic scan is capped at q = 7")
    if not (shards >= 1 and 0 <= shard_index < shards):
        raise ValueError("bad shard configuration")
    m, p, q = K.order, tower.p, tower.q
    d = 2 * tower.nu
    total = (m ** 6 - 1) // (m - 1)
    if total > cap:
        raise CapExceededError(
            f"{total} conic classes exceed the cap {cap}")

    W, npts, rows_per_pt = _condition_rows(X)
    Wt = W.T.copy()
    target = q + 1

    keys = set()
    scanned = filtered = singular = tangent = 0
    chunk_counter = -1
    n_chunks = sum(-(-(m ** (5 - lead)) // chunk_size) for lead in range(6))
    for lead in range(6):
        f = 5 - lead
        block = m ** f
        radix = [m ** (f - 1 - t) for t in range(f)]
        for start in range(0, block, chunk_size):
            chunk_counter += 1
            if chunk_counter % shards != shard_index:
                continue
            end = min(start + chunk_size, block)
            ar = np.arange(start, end, dtype=np.int64)
            scanned += len(ar)
            Xd = np.zeros((len(ar), 6 * d), dtype=np.float32)
            Xd[:, lead * d] = 1.0
            for t in range(f):
                vals = (ar // radix[t]) % m
                for dg in range(d):
                    Xd[:, (lead + 1 + t) * d + dg] = (vals // p ** dg) % p
            V = Xd @ Wt
            per_pt = np.remainder(V, p).reshape(len(ar), npts, rows_per_pt)
            T = (per_pt.sum(axis=2) == 0).sum(axis=1)
            for h in np.nonzero(T == target)[0]:
                filtered += 1
                idx = int(ar[h])
                vals6 = [0] * lead + [1] + [(idx // radix[t]) % m
                                            for t in range(f)]
                C = _conic_matrix(vals6)
                if mat_det(K, C) == 0:
                    singular += 1
                    continue
                M = conic_parameterize(tower, C)
                curve = RationalNormalCurve(tower, 2, M, check=False)
                try:
                    cert = total_tangency_check(curve, X)
                except ZeroPullbackError:
                    continue
                if cert:
                    tangent += 1
                    keys.add(curve.key())
            if progress is not None:
                progress(chunk_counter + 1, n_chunks)
    return ConicScanResult(frozenset(keys), total, scanned, filtered,
                           singular, tangent, shards, shard_index)
