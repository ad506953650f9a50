import random

import numpy as np
import pytest

from hermitangent import (
    HermitianVariety,
    RationalNormalCurve,
    canonical_matrix_B,
    hermitian_rescale,
)
from hermitangent.conic_scan import (
    _SLOTS,
    _bil,
    _condition_rows,
    _conic_matrix,
    _quad,
    brute_force_conic_scan,
    conic_parameterize,
)
from hermitangent.fields import CapExceededError
from hermitangent.linalg import all_projective_points, mat_det

rng = random.Random(31)


def canonical_X(tower):
    B = canonical_matrix_B(tower, 2)
    _, H = hermitian_rescale(tower, B)
    return HermitianVariety(tower, H)


def direct_conditions(tower, A, P, slot_vals):
    """Membership and the two gradient cross components, evaluated directly."""
    K = tower.fq2
    C = _conic_matrix(slot_vals)
    member = _quad(K, C, P)
    npv = []
    for i in range(3):
        acc = 0
        for j in range(3):
            acc = K.add(acc, K.mul(A[i][j], tower.frob[P[j]]))
        npv.append(acc)
    i0 = next(i for i, x in enumerate(npv) if x)
    grad = []
    for i in range(3):
        acc = 0
        for j in range(3):
            acc = K.add(acc, K.mul(C[i][j], P[j]))
        grad.append(acc)
    crosses = [K.sub(K.mul(npv[i0], grad[jj]), K.mul(npv[jj], grad[i0]))
               for jj in range(3) if jj != i0]
    return member, crosses


def test_condition_rows_match_direct_evaluation(t5):
    # the float32 digit GEMM must agree with exact field arithmetic
    X = canonical_X(t5)
    tower = t5
    K, p, d = t5.fq2, t5.p, 2 * t5.nu
    W, npts, rows_per_pt = _condition_rows(X)
    assert npts == len(X.points())
    assert rows_per_pt == 3 * d
    for _ in range(60):
        slot_vals = tuple(rng.randrange(K.order) for _ in range(6))
        xd = []
        for v in slot_vals:
            xd.extend(K.coeffs(v))
        xd = np.array(xd, dtype=np.float32)
        V = xd @ W.T
        residues = np.remainder(V, p).reshape(npts, rows_per_pt)
        gemm_pass = residues.sum(axis=1) == 0
        for k, P in enumerate(X.points()):
            member, crosses = direct_conditions(tower, X.A, P, slot_vals)
            want = member == 0 and all(c == 0 for c in crosses)
            assert bool(gemm_pass[k]) == want


def test_gradient_conditions_detect_tangency(t5):
    # for the Veronese conic x0 x2 = x1^2 the conditions hold exactly at
    # the q + 1 tangency points of the canonical pair
    K = t5.fq2
    X = canonical_X(t5)
    half = K.inv(2)
    slot_vals = (0, 0, half, K.neg(1), 0, 0)  # x0 x2 - x1^2
    curve = RationalNormalCurve.canonical(t5, 2)
    conic_pts = {P for P in all_projective_points(t5, 2)
                 if _quad(K, _conic_matrix(slot_vals), P) == 0}
    assert set(curve.points()) == conic_pts
    hits = 0
    for P in X.points():
        member, crosses = direct_conditions(t5, X.A, P, slot_vals)
        if member == 0 and all(c == 0 for c in crosses):
            hits += 1
    assert hits == t5.q + 1


def test_conic_matrix_is_symmetric(t5):
    vals = tuple(rng.randrange(t5.q2) for _ in range(6))
    C = _conic_matrix(vals)
    for i in range(3):
        for j in range(3):
            assert C[i][j] == C[j][i]
    for sidx, (i, j) in enumerate(_SLOTS):
        assert C[i][j] == vals[sidx]


def test_conic_parameterize_covers_conic(t5):
    K = t5.fq2
    half = K.inv(2)
    C = _conic_matrix((0, 0, half, K.neg(1), 0, 0))
    assert mat_det(K, C) != 0
    M = conic_parameterize(t5, C)
    curve = RationalNormalCurve(t5, 2, M)
    conic_pts = {P for P in all_projective_points(t5, 2)
                 if _quad(K, C, P) == 0}
    assert set(curve.points()) == conic_pts
    assert len(conic_pts) == K.order + 1


def test_conic_parameterize_random_smooth(t5):
    K = t5.fq2
    found = 0
    while found < 10:
        vals = tuple(rng.randrange(K.order) for _ in range(6))
        C = _conic_matrix(vals)
        if mat_det(K, C) == 0:
            continue
        M = conic_parameterize(t5, C)
        curve = RationalNormalCurve(t5, 2, M)
        for P in curve.points():
            assert _quad(K, C, P) == 0
        found += 1


def test_conic_parameterize_rejects_singular(t5):
    C = _conic_matrix((1, 0, 0, 0, 0, 0))
    with pytest.raises(ValueError):
        conic_parameterize(t5, C)


def test_scan_shard_slices_are_consistent(t5):
    X = canonical_X(t5)
    shards = 256
    total_scanned = 0
    keys = set()
    for idx in (0, 101, 255):
        scan = brute_force_conic_scan(X, shards=shards, shard_index=idx)
        assert scan.candidates_total == (t5.q2 ** 6 - 1) // (t5.q2 - 1)
        assert scan.shards == shards and scan.shard_index == idx
        total_scanned += scan.scanned
        keys |= set(scan.keys)
        assert scan.tangent_count == len(scan.keys)
    assert total_scanned < scan.candidates_total


def test_scan_preconditions(t5, t2, t9):
    with pytest.raises(CapExceededError):
        brute_force_conic_scan(canonical_X(t5), cap=1000)
    B = canonical_matrix_B(t9, 2)
    _, H = hermitian_rescale(t9, B)
    X9 = HermitianVariety(t9, H)
    with pytest.raises(ValueError):
        brute_force_conic_scan(X9)  # q = 9 > 7
