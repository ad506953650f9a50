"""Univariate polynomial algebra over a GaloisField.

A polynomial is a tuple of encoded coefficients, low degree first, with
no trailing zeros; () is the zero polynomial.  Homogeneous forms in two
variables [s:t] are a dehomogenized tuple plus a declared total degree
(HomogPoly); the multiplicity of the root at infinity [0:1] is the
degree deficit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fields import GaloisField


def poly_trim(f: Sequence[int]) -> tuple[int, ...]:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return tuple(f)


def poly_deg(f: Sequence[int]) -> int:
    """Degree, -1 for the zero polynomial."""
    return len(f) - 1


def poly_add(K: GaloisField, f, g):
    add = K.add
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = add(out[i], c)
    return poly_trim(out)


def poly_neg(K: GaloisField, f):
    return tuple(K.neg(c) for c in f)


def poly_sub(K: GaloisField, f, g):
    return poly_add(K, f, poly_neg(K, g))


def poly_scale(K: GaloisField, f, c: int):
    if c == 0:
        return ()
    mul = K.mul
    return tuple(mul(x, c) for x in f)


def poly_mul(K: GaloisField, f, g):
    if not f or not g:
        return ()
    add, mul = K.add, K.mul
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = add(out[i + j], mul(a, b))
    return poly_trim(out)


def poly_divmod(K: GaloisField, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    dg = len(g) - 1
    if len(f) - 1 < dg:
        return (), poly_trim(f)
    add, mul, neg = K.add, K.mul, K.neg
    ilead = K.inv(g[-1])
    quo = [0] * (len(f) - dg)
    for k in range(len(f) - 1, dg - 1, -1):
        c = f[k]
        if c:
            c = mul(c, ilead)
            quo[k - dg] = c
            for i in range(dg + 1):
                f[k - dg + i] = add(f[k - dg + i], neg(mul(c, g[i])))
    return poly_trim(quo), poly_trim(f[:dg])


def poly_mod(K: GaloisField, f, g):
    return poly_divmod(K, f, g)[1]


def poly_monic(K: GaloisField, f):
    if not f:
        return ()
    return poly_scale(K, f, K.inv(f[-1]))


def poly_gcd(K: GaloisField, f, g):
    """Monic gcd; gcd(f, 0) = monic f; both zero is an error."""
    f, g = poly_trim(f), poly_trim(g)
    if not f and not g:
        raise ValueError("gcd of two zero polynomials")
    while g:
        f, g = g, poly_mod(K, f, g)
    return poly_monic(K, f)


def poly_derivative(K: GaloisField, f):
    mul = K.mul
    return poly_trim([mul(c, i % K.p) for i, c in enumerate(f)][1:])


def poly_eval(K: GaloisField, f, x: int) -> int:
    acc = 0
    add, mul = K.add, K.mul
    for c in reversed(f):
        acc = add(mul(acc, x), c)
    return acc


def poly_pow(K: GaloisField, f, e: int):
    r = (1,)
    while e:
        if e & 1:
            r = poly_mul(K, r, f)
        f = poly_mul(K, f, f)
        e >>= 1
    return r


def poly_mulmod(K: GaloisField, f, g, m):
    return poly_mod(K, poly_mul(K, f, g), m)


def poly_powmod(K: GaloisField, f, e: int, m):
    r = poly_mod(K, (1,), m)
    f = poly_mod(K, f, m)
    while e:
        if e & 1:
            r = poly_mulmod(K, r, f, m)
        f = poly_mulmod(K, f, f, m)
        e >>= 1
    return r


def eval_on_all(K: GaloisField, f) -> np.ndarray:
    """Values of f at every field element, indexed by element encoding."""
    if K.np_add is None:
        raise RuntimeError("field too large for vectorized evaluation")
    m = K.order
    if not f:
        return np.zeros(m, dtype=np.int32)
    logs, expe, addt = K.np_log, K.np_exp_ext, K.np_add
    acc = np.full(m, f[-1], dtype=np.int32)
    for c in reversed(f[:-1]):
        acc = expe[logs[acc] + logs]  # acc * x elementwise
        if c:
            acc = addt[acc, c]
    return acc


def roots_in_field(K: GaloisField, f) -> list[int]:
    """All x with f(x) = 0, by exhaustive vectorized evaluation."""
    return np.nonzero(eval_on_all(K, f) == 0)[0].tolist()


def is_squarefree(K: GaloisField, f) -> bool:
    f = poly_trim(f)
    if not f:
        raise ValueError("zero polynomial")
    if len(f) <= 2:
        return True
    return poly_deg(poly_gcd(K, f, poly_derivative(K, f))) == 0


def splits_in_field(K: GaloisField, f) -> bool:
    """True iff f divides x^|K| - x, i.e. all roots lie in K and are simple
    up to squarefreeness (tested separately)."""
    f = poly_trim(f)
    if poly_deg(f) <= 0:
        return True
    xq = poly_powmod(K, (0, 1), K.order, f)
    return poly_mod(K, poly_sub(K, xq, (0, 1)), f) == ()


@dataclass(frozen=True)
class HomogPoly:
    """A binary form of the given total degree, stored dehomogenized in t.

    coeffs are the coefficients of f(1, t); degree - deg(coeffs) is the
    multiplicity of the root at infinity [0:1].
    """

    coeffs: tuple[int, ...]
    degree: int

    def __post_init__(self):
        object.__setattr__(self, "coeffs", poly_trim(self.coeffs))
        if poly_deg(self.coeffs) > self.degree:
            raise ValueError("declared degree below the affine degree")

    @property
    def deficit(self) -> int:
        return self.degree - poly_deg(self.coeffs)


def nth_power_decompose(K: GaloisField, P, n: int):
    """Write P = c * h**n with h monic squarefree; None if impossible.

    Requires n >= 1 not divisible by the characteristic.  The candidate h
    is the squarefree part P / gcd(P, P') and the decomposition is
    verified by re-expansion before it is returned.
    """
    P = poly_trim(P)
    if not P:
        raise ValueError("zero polynomial")
    if n < 1:
        raise ValueError("n must be positive")
    if n % K.p == 0:
        raise ValueError("n must be invertible in the field")
    d = poly_deg(P)
    if d % n:
        return None
    if d == 0:
        return P[0], (1,)
    g = poly_gcd(K, P, poly_derivative(K, P))
    h, r = poly_divmod(K, P, g)
    if r:
        return None
    h = poly_monic(K, h)
    if poly_deg(h) * n != d:
        return None
    c = P[-1]
    if poly_scale(K, poly_pow(K, h, n), c) != P:
        return None
    return c, h


def homog_roots_analysis(K: GaloisField, hp: HomogPoly):
    """(sorted simple roots, None) or (None, failure reason).

    Roots are projective parameters [alpha:beta], normalized so the first
    nonzero coordinate is 1, sorted lexicographically on the coefficient
    vectors of the affine values with [0:1] last.  Fails unless hp is
    squarefree as a binary form and splits over K.
    """
    h = poly_trim(hp.coeffs)
    if not h and hp.degree == 0:
        raise ValueError("zero polynomial")
    if hp.deficit >= 2:
        return None, "not_squarefree"
    if not h:
        # degree 1 form s: the single root at infinity
        return [(0, 1)], None
    if not is_squarefree(K, h):
        return None, "not_squarefree"
    if not splits_in_field(K, h):
        return None, "does_not_split"
    affine = roots_in_field(K, h)
    if len(affine) != poly_deg(h):
        return None, "does_not_split"
    affine.sort(key=K.coeffs)
    params = [(1, t) for t in affine]
    if hp.deficit == 1:
        params.append((0, 1))
    return params, None


def distinct_roots_in_fq2(K: GaloisField, hp: HomogPoly):
    """All roots if every root is simple and lies in P^1(K), else None."""
    roots, _ = homog_roots_analysis(K, hp)
    return roots


def poly_from_roots(K: GaloisField, affine_roots) -> tuple[int, ...]:
    """Monic product of (t - r) over the given affine roots."""
    out = (1,)
    for r in affine_roots:
        out = poly_mul(K, out, (K.neg(r), 1))
    return out
