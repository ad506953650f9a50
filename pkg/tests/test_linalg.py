import itertools
import random

import pytest

from hermitangent import (
    HermitianVariety,
    SingularMatrixError,
    fermat_matrix,
    gram_schmidt_against_form,
    hermitian_rescale,
    is_hermitian,
    lang_decompose,
    lang_map,
    transform_variety,
)
from hermitangent.linalg import (
    all_projective_points,
    canonical_proj,
    conj_transpose,
    eval_form,
    mat_det,
    mat_identity,
    mat_inv,
    mat_mul,
    mat_scale,
    normalize_point,
    point_code,
    point_from_code,
    proj_equal,
    vec_mat,
)
from hermitangent.orbit import random_hermitian_invertible, random_invertible

rng = random.Random(5)


def rand_matrix(K, size):
    return tuple(tuple(rng.randrange(K.order) for _ in range(size))
                 for _ in range(size))


def det_by_permutations(K, A):
    """Leibniz expansion; independent of the elimination code."""
    size = len(A)
    total = 0
    for perm in itertools.permutations(range(size)):
        sign = 1
        for i in range(size):
            for j in range(i + 1, size):
                if perm[i] > perm[j]:
                    sign = -sign
        term = 1
        for i in range(size):
            term = K.mul(term, A[i][perm[i]])
        total = K.add(total, term if sign > 0 else K.neg(term))
    return total


def test_det_matches_leibniz(t5):
    K = t5.fq2
    for size in (2, 3, 4):
        for _ in range(30):
            A = rand_matrix(K, size)
            assert mat_det(K, A) == det_by_permutations(K, A)


def test_inverse_roundtrip(t5, t8):
    for tower in (t5, t8):
        K = tower.fq2
        ident = mat_identity(3)
        for _ in range(40):
            A = random_invertible(tower.fq2, 3, rng)
            Ai = mat_inv(K, A)
            assert mat_mul(K, A, Ai) == ident
            assert mat_mul(K, Ai, A) == ident


def test_inverse_of_singular_raises(t5):
    K = t5.fq2
    row = (1, 2, 3)
    A = (row, tuple(K.mul(2, x) for x in row), (0, 1, 1))
    assert mat_det(K, A) == 0
    with pytest.raises(SingularMatrixError):
        mat_inv(K, A)


def test_det_is_multiplicative(t5):
    K = t5.fq2
    for _ in range(30):
        A, B = rand_matrix(K, 3), rand_matrix(K, 3)
        assert mat_det(K, mat_mul(K, A, B)) == K.mul(mat_det(K, A), mat_det(K, B))


def test_point_code_roundtrip(t5):
    K = t5.fq2
    pts = list(all_projective_points(t5, 2))
    assert len(pts) == K.order ** 2 + K.order + 1
    for P in pts:
        assert point_from_code(K, point_code(K, P), 2) == P
        assert normalize_point(K, P) == P
    codes = [point_code(K, P) for P in pts]
    assert len(set(codes)) == len(pts)


def test_lang_map_is_hermitian(t5, t8):
    # 1000 random T across both towers
    for tower in (t5, t8):
        K = tower.fq2
        size = 3 if tower is t5 else 4
        for _ in range(500):
            T = rand_matrix(K, size)
            assert is_hermitian(tower, lang_map(tower, T))


def test_lang_decompose_roundtrip(t5, t8):
    # 200 random invertible Hermitian H per tower
    for tower, size in ((t5, 3), (t8, 4)):
        for _ in range(200):
            H = random_hermitian_invertible(tower, size, rng)
            T = lang_decompose(tower, H)
            assert lang_map(tower, T) == H


def test_lang_decompose_rejects_bad_input(t5):
    K = t5.fq2
    with pytest.raises(ValueError):
        lang_decompose(t5, ((0, 1), (2, 0)))  # not Hermitian
    zero = ((0, 0), (0, 0))
    with pytest.raises(ValueError):
        lang_decompose(t5, zero)


def test_gram_schmidt_produces_unitary_basis(t5, t9):
    for tower in (t5, t9):
        K = tower.fq2
        ident = mat_identity(3)
        for _ in range(50):
            H = random_hermitian_invertible(tower, 3, rng)
            W = gram_schmidt_against_form(tower, H)
            assert mat_mul(K, W, mat_mul(K, H, conj_transpose(tower, W))) == ident


def test_hermitian_rescale_finds_hermitian_multiple(t5, t7):
    for tower in (t5, t7):
        K = tower.fq2
        for _ in range(50):
            H = random_hermitian_invertible(tower, 3, rng)
            # scale by a random nonzero constant, possibly leaving Hermitian-land
            u = rng.randrange(1, K.order)
            A = mat_scale(K, u, H)
            res = hermitian_rescale(tower, A)
            if is_hermitian(tower, A) or K.mul(u, tower.frob[K.inv(u)]) == 1:
                assert res is not None
                c, H2 = res
                assert is_hermitian(tower, H2)
                assert H2 == mat_scale(K, c, A)


def test_hermitian_rescale_failure(t5):
    # A and conj(A)^T not proportional: no scalar multiple is Hermitian
    A = ((1, 2, 0), (0, 1, 0), (0, 0, 1))
    assert hermitian_rescale(t5, A) is None


def test_fermat_point_count(t5):
    X = HermitianVariety(t5, fermat_matrix(3))
    assert len(X.points()) == t5.q ** 3 + 1


def test_variety_eval_and_contains(t5):
    K = t5.fq2
    X = HermitianVariety(t5, fermat_matrix(3))
    for P in list(all_projective_points(t5, 2))[:100]:
        manual = 0
        for i in range(3):
            for j in range(3):
                manual = K.add(manual, K.mul(X.A[i][j],
                               K.mul(P[i], t5.frob[P[j]])))
        assert (manual == 0) == X.contains(P)
    with pytest.raises(ValueError):
        X.eval((1, 0))


def test_variety_requires_hermitian_when_checked(t5):
    with pytest.raises(ValueError):
        HermitianVariety(t5, ((0, 1, 0), (0, 0, 0), (0, 0, 1)))


def test_transform_variety_membership(t5):
    K = t5.fq2
    X = HermitianVariety(t5, fermat_matrix(3))
    for _ in range(20):
        T = random_invertible(t5.fq2, 3, rng)
        X2 = transform_variety(X, T)
        for P in X.points()[:30]:
            Q = normalize_point(K, vec_mat(K, P, T))
            assert X2.eval(Q) == 0
        # right action: transforming twice composes
        S = random_invertible(t5.fq2, 3, rng)
        once = transform_variety(transform_variety(X, T), S)
        both = transform_variety(X, mat_mul(K, T, S))
        assert once.A == both.A


def test_canonical_proj(t5):
    K = t5.fq2
    A = ((0, 3, 1), (2, 0, 0), (0, 0, 4))
    C = canonical_proj(K, A)
    flat = [x for row in C for x in row]
    lead = next(x for x in flat if x)
    assert lead == 1
    assert proj_equal(K, A, C)
    assert proj_equal(K, A, mat_scale(K, 2, A))


def test_eval_form_matches_variety(t5):
    K = t5.fq2
    A = fermat_matrix(3)
    X = HermitianVariety(t5, A)
    for _ in range(50):
        P = tuple(rng.randrange(K.order) for _ in range(3))
        if P == (0, 0, 0):
            continue
        assert eval_form(t5, A, P) == X.eval(P)
