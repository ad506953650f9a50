"""Arithmetic for the tower F_p < F_q < F_{q^2} used throughout the package.

An element of F_{p^d} is stored as an integer in range(p**d): the base-p
digits of the integer, least significant first, are the coefficients of
the element on the polynomial basis 1, x, ..., x^(d-1) of
F_p[x]/(modulus).  Small integers 0..p-1 therefore denote the prime
subfield constants in every field of the tower.

Scalar operations go through flat lookup tables (discrete log / antilog
for multiplication, a full addition table for small orders), which keeps
the enumeration loops in the other modules fast.  Each field also
carries numpy mirrors of its tables for the vectorized cores.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

import numpy as np

DEFAULT_ELEMENT_CAP = 2 ** 20

# full order x order addition tables only below this order; larger fields
# fall back to per-operation digit arithmetic
_ADD_TABLE_LIMIT = 2048


class CapExceededError(RuntimeError):
    """A requested enumeration is larger than the configured cap."""


class FieldMismatchError(ValueError):
    """Operands of a field operation live in different fields."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# dense polynomials over F_p (coefficient lists, low degree first); these
# private helpers only bootstrap the field tables

def _ptrim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(p: int, a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(p: int, a: Sequence[int], m: Sequence[int]) -> list[int]:
    """Remainder of a modulo the monic polynomial m."""
    a = list(a)
    dm = len(m) - 1
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k] % p
        if c:
            for i in range(dm):
                a[k - dm + i] = (a[k - dm + i] - c * m[i]) % p
        a[k] = 0
    return _ptrim(a[:dm])


def _is_irreducible(p: int, poly: Sequence[int]) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    d = len(poly) - 1
    if d <= 0:
        return False
    for e in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=e):
            if not _pmod(p, poly, list(tail) + [1]):
                return False
    return True


def smallest_irreducible(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree d over F_p.

    Coefficient vectors are ordered low degree first with representatives
    0..p-1, so the scan below visits candidates in lexicographic order.
    """
    for tail in itertools.product(range(p), repeat=d):
        cand = list(tail) + [1]
        if _is_irreducible(p, cand):
            return tuple(cand)
    raise RuntimeError(f"no irreducible of degree {d} over F_{p}")  # unreachable


class GaloisField:
    """F_{p^deg} on the basis 1, x, ..., x^(deg-1) modulo an irreducible."""

    def __init__(self, p: int, deg: int, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if deg < 1:
            raise ValueError("degree must be positive")
        self.p = int(p)
        self.deg = int(deg)
        self.order = self.p ** self.deg
        if modulus is None:
            modulus = smallest_irreducible(self.p, self.deg)
        modulus = tuple(int(c) % self.p for c in modulus)
        if len(modulus) != self.deg + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree deg")
        if not _is_irreducible(self.p, modulus):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus
        self._build_tables()

    # encoding -------------------------------------------------------------

    def coeffs(self, x: int) -> tuple[int, ...]:
        """Coefficient vector of x, low degree first, length deg."""
        out = []
        for _ in range(self.deg):
            out.append(x % self.p)
            x //= self.p
        return tuple(out)

    def from_coeffs(self, cs: Sequence[int]) -> int:
        if len(cs) > self.deg:
            raise ValueError("coefficient vector too long")
        x = 0
        for c in reversed([int(c) % self.p for c in cs]):
            x = x * self.p + c
        return x

    def elements_lex(self) -> Iterator[int]:
        """All elements ordered lexicographically by coefficient vector."""
        for cs in itertools.product(range(self.p), repeat=self.deg):
            yield self.from_coeffs(cs)

    # table construction ----------------------------------------------------

    def _raw_mul(self, x: int, y: int) -> int:
        prod = _pmul(self.p, list(self.coeffs(x)), list(self.coeffs(y)))
        return self.from_coeffs(_pmod(self.p, prod, self.modulus))

    def _raw_pow(self, x: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._raw_mul(r, x)
            x = self._raw_mul(x, x)
            e >>= 1
        return r

    def _find_generator(self) -> int:
        m = self.order
        if m == 2:
            return 1
        facs = prime_factors(m - 1)
        for g in range(2, m):
            if all(self._raw_pow(g, (m - 1) // f) != 1 for f in facs):
                return g
        raise RuntimeError("no multiplicative generator found")  # unreachable

    def _build_tables(self) -> None:
        p, m = self.p, self.order
        g = self._find_generator()
        exp = [1] * (m - 1)
        for i in range(1, m - 1):
            exp[i] = self._raw_mul(exp[i - 1], g)
        if len(set(exp)) != m - 1:
            raise RuntimeError("generator has wrong order")
        # log of zero is a sentinel pointing into the zero pad of exp_ext,
        # so mul needs no branch: any product with 0 lands on a stored 0
        log = [2 * m - 2] * m
        for i, v in enumerate(exp):
            log[v] = i
        exp_ext = [0] * (4 * m)
        for s in range(max(2 * m - 3, 1)):
            exp_ext[s] = exp[s % (m - 1)]
        self.generator = g
        self._exp = exp
        self._log = log
        self._exp_ext = exp_ext
        self._neg = [self.from_coeffs([(p - c) % p for c in self.coeffs(x)])
                     for x in range(m)]
        inv = [0] * m
        for i, v in enumerate(exp):
            inv[v] = exp[(m - 1 - i) % (m - 1)]
        self._inv = inv
        if m <= _ADD_TABLE_LIMIT:
            idx = np.arange(m, dtype=np.int64)
            add_np = np.zeros((m, m), dtype=np.int64)
            t = idx.copy()
            w = 1
            for _ in range(self.deg):
                d = t % p
                add_np += ((d[:, None] + d[None, :]) % p) * w
                t //= p
                w *= p
            self._add = add_np.tolist()
            self.np_add = add_np.astype(np.int32)
        else:
            self._add = None
            self.np_add = None
        self.np_log = np.array(log, dtype=np.int64)
        self.np_exp_ext = np.array(exp_ext, dtype=np.int32)
        self.np_inv = np.array(inv, dtype=np.int32)
        self.np_neg = np.array(self._neg, dtype=np.int32)

    # scalar operations ------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        t = self._add
        if t is not None:
            return t[a][b]
        return self.from_coeffs([(x + y) % self.p
                                 for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        return self._exp_ext[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of zero field element")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow_int(self, x: int, e: int) -> int:
        """x**e by exponent arithmetic on the discrete log."""
        if x == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("inversion of zero field element")
            return 0
        return self._exp[(self._log[x] * e) % (self.order - 1)]


class FieldElement:
    """An element of one level of a FieldTower.

    Thin wrapper over the integer encoding; arithmetic checks that both
    operands belong to the same field object and refuses silent mixing.
    Plain python ints coerce as prime subfield constants.
    """

    __slots__ = ("field", "idx")

    def __init__(self, field: GaloisField, idx: int):
        if not 0 <= idx < field.order:
            raise ValueError("element index out of range")
        self.field = field
        self.idx = idx

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldMismatchError(
                    "operands live in different fields; embed explicitly first")
            return other
        if isinstance(other, int):
            return FieldElement(self.field, other % self.field.p)
        return NotImplemented

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.idx)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.add(self.idx, o.idx))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.sub(self.idx, o.idx))

    def __rsub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.sub(o.idx, self.idx))

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.mul(self.idx, o.idx))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.div(self.idx, o.idx))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.idx))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow_int(self.idx, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.idx))

    def __bool__(self):
        return self.idx != 0

    def __eq__(self, other):
        if isinstance(other, int):
            other = FieldElement(self.field, other % self.field.p)
        return (isinstance(other, FieldElement)
                and other.field is self.field and other.idx == self.idx)

    def __hash__(self):
        return hash((id(self.field), self.idx))

    def __repr__(self):
        return f"FieldElement{self.coeffs}@F{self.field.order}"


def _horner(K: GaloisField, coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = K.add(K.mul(acc, x), c % K.p if c < K.p else c)
    return acc


class FieldTower:
    """F_p < F_q = F_{p^nu} < F_{q^2}, with Frobenius, norm and embedding.

    Both extensions are presented over F_p with the lexicographically
    smallest monic irreducible modulus.  The embedding F_q -> F_{q^2}
    sends the generator of F_q to the smallest root of modulus_q inside
    F_{q^2}; its image is checked to be exactly the fixed field of the
    q-power Frobenius.
    """

    def __init__(self, p: int, nu: int, cap_elements: int = DEFAULT_ELEMENT_CAP):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if nu < 1:
            raise ValueError("nu must be >= 1")
        if p ** (2 * nu) > cap_elements:
            raise CapExceededError(
                f"|F_q2| = {p ** (2 * nu)} exceeds the element cap {cap_elements}")
        self.p = p
        self.nu = nu
        self.q = p ** nu
        self.q2 = self.q ** 2
        self.cap_elements = cap_elements
        self.fq = GaloisField(p, nu)
        self.fq2 = GaloisField(p, 2 * nu)
        self.fp = self.fq if nu == 1 else GaloisField(p, 1)
        self.modulus_q = self.fq.modulus
        self.modulus_q2 = self.fq2.modulus
        self._levels = {"p": self.fp, "q": self.fq, "q2": self.fq2}
        self._build_maps()
        self._phi_cache: dict[int, np.ndarray] = {}
        self._pt_cache: dict[int, list] = {}

    def _build_maps(self) -> None:
        K = self.fq2
        m, q = K.order, self.q
        frob = [K.pow_int(x, q) for x in range(m)]
        self.frob = frob
        self.np_frob = np.array(frob, dtype=np.int32)

        root = next(x for x in range(m) if _horner(K, self.modulus_q, x) == 0)
        rp = [1]
        for _ in range(self.nu - 1):
            rp.append(K.mul(rp[-1], root))
        embed = []
        for a in range(q):
            acc = 0
            for c, rk in zip(self.fq.coeffs(a), rp):
                acc = K.add(acc, K.mul(c, rk))
            embed.append(acc)
        self.embed_table = embed
        self.np_embed = np.array(embed, dtype=np.int32)
        embed_inv = [-1] * m
        for a, v in enumerate(embed):
            embed_inv[v] = a
        self.embed_inv = embed_inv

        fixed = {x for x in range(m) if frob[x] == x}
        if set(embed) != fixed or len(fixed) != q:
            raise RuntimeError("embedded subfield differs from the Frobenius fixed field")
        pairs = (itertools.product(range(q), repeat=2) if q <= 256
                 else ((i * 97 % q, i * 89 % q) for i in range(1000)))
        for a, b in pairs:
            if embed[self.fq.add(a, b)] != K.add(embed[a], embed[b]):
                raise RuntimeError("embedding fails additivity")
            if embed[self.fq.mul(a, b)] != K.mul(embed[a], embed[b]):
                raise RuntimeError("embedding fails multiplicativity")

        self.in_fq = [frob[x] == x for x in range(m)]
        self.np_in_fq = np.array(self.in_fq)
        norm2 = [K.mul(x, frob[x]) for x in range(m)]
        self.norm_fq2 = norm2
        norm_q = [embed_inv[v] for v in norm2]
        if any(v < 0 for v in norm_q):
            raise RuntimeError("norm value escaped the embedded subfield")
        self.norm_fq = norm_q
        solve = [-1] * q
        for x in range(m):
            a = norm_q[x]
            if solve[a] < 0:
                solve[a] = x
        if any(v < 0 for v in solve):
            raise RuntimeError("norm is not surjective onto F_q")
        self.solve_norm_table = solve
        self.trace = [K.add(x, frob[x]) for x in range(m)]
        # projective parameters [alpha:beta], affine ones first, infinity last
        self.param_list: list[tuple[int, int]] = [(1, t) for t in range(m)] + [(0, 1)]

    # element-level public interface ----------------------------------------

    def field(self, level: str) -> GaloisField:
        try:
            return self._levels[level]
        except KeyError:
            raise ValueError(f"unknown tower level {level!r}") from None

    def element(self, level: str, value) -> FieldElement:
        F = self.field(level)
        if isinstance(value, int):
            return FieldElement(F, value)
        return FieldElement(F, F.from_coeffs(value))

    def enumerate_field(self, level: str) -> Iterator[FieldElement]:
        """Elements of one level, lexicographic on coefficient vectors."""
        F = self.field(level)
        for x in F.elements_lex():
            yield FieldElement(F, x)

    def _expect(self, x: FieldElement, F: GaloisField, what: str) -> None:
        if not isinstance(x, FieldElement) or x.field is not F:
            raise FieldMismatchError(f"{what} expects an element of that level")

    def frobenius_q(self, x: FieldElement) -> FieldElement:
        self._expect(x, self.fq2, "frobenius_q on F_q2")
        return FieldElement(self.fq2, self.frob[x.idx])

    def norm(self, x: FieldElement) -> FieldElement:
        """x * x^q, landing in F_q."""
        self._expect(x, self.fq2, "norm on F_q2")
        return FieldElement(self.fq, self.norm_fq[x.idx])

    def solve_norm_equation(self, a: FieldElement) -> FieldElement:
        """Smallest x in F_{q^2} with x^(q+1) = a; a must be nonzero in F_q."""
        self._expect(a, self.fq, "solve_norm_equation over F_q")
        if a.idx == 0:
            raise ValueError("norm equation needs a nonzero right hand side")
        return FieldElement(self.fq2, self.solve_norm_table[a.idx])

    def embed(self, x: FieldElement) -> FieldElement:
        """The inclusion F_q -> F_{q^2}."""
        self._expect(x, self.fq, "embed from F_q")
        return FieldElement(self.fq2, self.embed_table[x.idx])


def make_field_tower(p: int, nu: int,
                     cap_elements: int = DEFAULT_ELEMENT_CAP) -> FieldTower:
    """Build the tower F_p < F_{p^nu} < F_{p^(2 nu)}."""
    return FieldTower(p, nu, cap_elements)
