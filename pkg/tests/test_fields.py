import random

import numpy as np
import pytest

from hermitangent import CapExceededError, make_field_tower
from hermitangent.fields import GaloisField, is_prime, smallest_irreducible


def exhaustive_axioms(K):
    """Direct check of the field axioms; feasible up to order 81."""
    m = K.order
    els = range(m)
    for a in els:
        assert K.add(a, 0) == a
        assert K.mul(a, 1) == a
        assert K.add(a, K.neg(a)) == 0
        if a:
            assert K.mul(a, K.inv(a)) == 1
        for b in els:
            assert K.add(a, b) == K.add(b, a)
            assert K.mul(a, b) == K.mul(b, a)
            for c in els:
                assert K.add(K.add(a, b), c) == K.add(a, K.add(b, c))
                assert K.mul(K.mul(a, b), c) == K.mul(a, K.mul(b, c))
                assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))


@pytest.mark.parametrize("p,deg", [(2, 1), (5, 1), (2, 2), (3, 2), (5, 2), (7, 2), (3, 4)])
def test_field_axioms_exhaustive(p, deg):
    exhaustive_axioms(GaloisField(p, deg))


def test_modulus_is_irreducible():
    for p, d in [(2, 2), (2, 6), (3, 2), (5, 2), (7, 2), (3, 4)]:
        mod = smallest_irreducible(p, d)
        K = GaloisField(p, 1) if d == 1 else GaloisField(p, d, mod)
        # no roots in the prime field
        Kp = GaloisField(p, 1)
        for x in range(p):
            val = 0
            for c in reversed(mod):
                val = Kp.add(Kp.mul(val, x), c)
            assert val != 0


def test_primality_helper():
    assert [n for n in range(2, 30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert not is_prime(1)


def test_frobenius_fixed_field(t5, t9, t8):
    for tower in (t5, t9, t8):
        fixed = [x for x in range(tower.q2) if tower.frob[x] == x]
        assert len(fixed) == tower.q
        assert sorted(fixed) == sorted(tower.embed_table)


def test_frobenius_is_involution_and_additive(t5, t9):
    for tower in (t5, t9):
        K = tower.fq2
        for x in range(tower.q2):
            assert tower.frob[tower.frob[x]] == x
            assert tower.frob[x] == K.pow_int(x, tower.q)
        for _ in range(200):
            a, b = random.randrange(tower.q2), random.randrange(tower.q2)
            assert tower.frob[K.add(a, b)] == K.add(tower.frob[a], tower.frob[b])
            assert tower.frob[K.mul(a, b)] == K.mul(tower.frob[a], tower.frob[b])


def test_norm_fibers(t5, t7, t8):
    for tower in (t5, t7, t8):
        K = tower.fq2
        fibers = {}
        for x in range(1, tower.q2):
            fibers.setdefault(K.mul(x, tower.frob[x]), []).append(x)
        # the norm is onto F_q^x and every fiber has q+1 elements
        assert len(fibers) == tower.q - 1
        for val, pre in fibers.items():
            assert tower.embed_inv[val] > 0
            assert len(pre) == tower.q + 1


def test_solve_norm_table(t5, t8):
    for tower in (t5, t8):
        K = tower.fq2
        for a in range(1, tower.q):
            x = tower.solve_norm_table[a]
            assert K.mul(x, tower.frob[x]) == tower.embed_table[a]


def test_embedding_is_a_field_map(t9):
    Kq, K2 = t9.fq, t9.fq2
    emb = t9.embed_table
    for a in range(t9.q):
        for b in range(t9.q):
            assert emb[Kq.add(a, b)] == K2.add(emb[a], emb[b])
            assert emb[Kq.mul(a, b)] == K2.mul(emb[a], emb[b])
    assert emb[0] == 0 and emb[1] == 1
    for a in range(t9.q):
        assert t9.embed_inv[emb[a]] == a


def test_trace_lands_in_fq(t5, t9):
    for tower in (t5, t9):
        K = tower.fq2
        for x in range(tower.q2):
            tr = tower.trace[x]
            assert tr == K.add(x, tower.frob[x])
            assert tower.in_fq[tr]


def test_numpy_mirrors_match_scalar_ops(t5, t9):
    rng = random.Random(1)
    for tower in (t5, t9):
        K = tower.fq2
        xs = np.array([rng.randrange(tower.q2) for _ in range(500)], dtype=np.int64)
        ys = np.array([rng.randrange(tower.q2) for _ in range(500)], dtype=np.int64)
        assert tower.np_frob[xs].tolist() == [tower.frob[int(x)] for x in xs]
        assert tower.np_in_fq[xs].tolist() == [tower.in_fq[int(x)] for x in xs]
        if K.np_add is not None:
            assert K.np_add[xs, ys].tolist() == [K.add(int(a), int(b)) for a, b in zip(xs, ys)]
        logs = K.np_log[xs] + K.np_log[ys]
        prods = K.np_exp_ext[logs]
        assert prods.tolist() == [K.mul(int(a), int(b)) for a, b in zip(xs, ys)]
        nz = xs[xs != 0]
        assert K.np_inv[nz].tolist() == [K.inv(int(x)) for x in nz]
        assert K.np_neg[xs].tolist() == [K.neg(int(x)) for x in xs]


def test_element_wrapper_arithmetic(t5):
    a = t5.element("q2", 7)
    b = t5.element("q2", 12)
    K = t5.fq2
    assert (a + b).idx == K.add(7, 12)
    assert (a * b).idx == K.mul(7, 12)
    assert (a - b).idx == K.sub(7, 12)
    assert (a / b).idx == K.div(7, 12)
    assert (-a).idx == K.neg(7)
    assert (a ** 3).idx == K.pow_int(7, 3)
    assert t5.frobenius_q(a).idx == t5.frob[7]
    assert t5.norm(a).idx == t5.embed_inv[K.mul(7, t5.frob[7])]


def test_solve_norm_equation_element_api(t5):
    for a in range(1, 5):
        el = t5.element("q", a)
        x = t5.solve_norm_equation(el)
        assert t5.norm(x) == el
    with pytest.raises(ValueError):
        t5.solve_norm_equation(t5.element("q", 0))


def test_element_cap():
    with pytest.raises(CapExceededError):
        make_field_tower(2, 11, cap_elements=1000)


def test_param_list_shape(t5):
    assert len(t5.param_list) == t5.q2 + 1
    assert t5.param_list[-1] == (0, 1)
    assert all(pr[0] == 1 for pr in t5.param_list[:-1])
