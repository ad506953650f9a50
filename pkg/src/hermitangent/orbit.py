"""Unitary-group action on totally tangent curves.

The group elements are matrices preserving a Hermitian form, handled
projectively throughout: orbits deduplicate curves by point-set key and
group closures deduplicate matrices by canonical projective
representative.  Generation is randomized and certified a posteriori:
sampled unitaries generate the full projective unitary group exactly
when orbit size times stabilizer order equals the closed-form group
order.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass

from .curves import (
    MarkedCurve,
    RationalNormalCurve,
    ZeroPullbackError,
    _normalize_rows,
    _phi_table,
    _rows_times_matrix,
    canonical_marks,
    mobius_apply,
    mobius_from_frame,
    total_tangency_check,
)
from .fields import CapExceededError, FieldTower, prime_factors
from .linalg import (
    HermitianVariety,
    Matrix,
    canonical_proj,
    conj_transpose,
    eval_form,
    gram_schmidt_against_form,
    mat_det,
    mat_identity,
    mat_inv,
    mat_mul,
    transform_variety,
)

DEFAULT_MATRIX_CAP = 2 ** 24


# group orders ----------------------------------------------------------------

def order_pgl2(q: int) -> int:
    """|PGL_2(F_q)| = q (q^2 - 1)."""
    if q < 2 or len(prime_factors(q)) != 1:
        raise ValueError(f"{q} is not a prime power")
    return q * (q * q - 1)


def order_gu(m: int, q: int) -> int:
    """|GU_m(F_{q^2})| = q^(m(m-1)/2) prod_{i=1..m} (q^i - (-1)^i)."""
    out = q ** (m * (m - 1) // 2)
    for i in range(1, m + 1):
        out *= q ** i - (-1) ** i
    return out


def order_pgu(m: int, q: int) -> int:
    return order_gu(m, q) // (q + 1)


@dataclass(frozen=True)
class GroupOrderTable:
    q: int
    n: int
    pgu_order: int
    pgl2_q_order: int
    predicted_count: int

    @classmethod
    def for_curves(cls, n: int, q: int) -> "GroupOrderTable":
        pgu = order_pgu(n + 1, q)
        pgl2 = order_pgl2(q)
        if pgu % pgl2:
            raise ValueError("stabilizer order does not divide the group order")
        return cls(q, n, pgu, pgl2, pgu // pgl2)


# randomized element generation ------------------------------------------------

def random_invertible(K, size: int, rng: random.Random, max_tries: int = 64) -> Matrix:
    for _ in range(max_tries):
        M = tuple(tuple(rng.randrange(K.order) for _ in range(size))
                  for _ in range(size))
        if mat_det(K, M):
            return M
    raise RuntimeError("failed to sample an invertible matrix")


def random_hermitian_invertible(tower: FieldTower, size: int, rng: random.Random,
                                max_tries: int = 256) -> Matrix:
    K = tower.fq2
    for _ in range(max_tries):
        H = [[0] * size for _ in range(size)]
        for i in range(size):
            H[i][i] = tower.embed_table[rng.randrange(tower.q)]
            for j in range(i + 1, size):
                H[i][j] = rng.randrange(K.order)
                H[j][i] = tower.frob[H[i][j]]
        H = tuple(tuple(r) for r in H)
        if mat_det(K, H):
            return H
    raise RuntimeError("failed to sample an invertible Hermitian matrix")


def random_unitary(tower: FieldTower, A: Matrix, rng: random.Random) -> Matrix:
    """A random U with U A conj(U)^t = A, verified before return.

    Both factors come from Hermitian Gram-Schmidt against A: the fixed
    basis gives W0 with W0 A conj(W0)^t = I, a random basis gives W1
    with the same property, and U = W1^-1 W0 preserves A.
    """
    K = tower.fq2
    W0 = gram_schmidt_against_form(tower, A)
    W1 = gram_schmidt_against_form(tower, A, random_invertible(K, len(A), rng))
    U = mat_mul(K, mat_inv(K, W1), W0)
    if mat_mul(K, U, mat_mul(K, A, conj_transpose(tower, U))) != tuple(map(tuple, A)):
        raise RuntimeError("sampled matrix fails the unitarity verification")
    return U


def mulclose_projective(K, gens, cap: int = 2_000_000) -> set[Matrix]:
    """Closure of the generated projective matrix group."""
    ident = mat_identity(len(gens[0])) if gens else ()
    gens = [g for g in (canonical_proj(K, g) for g in gens) if g != ident]
    elems = {ident} | set(gens)
    frontier = list(elems)
    while frontier:
        fresh = []
        for a in frontier:
            for g in gens:
                prod = canonical_proj(K, mat_mul(K, a, g))
                if prod not in elems:
                    elems.add(prod)
                    fresh.append(prod)
                    if len(elems) > cap:
                        raise CapExceededError("group closure exceeds the cap")
        frontier = fresh
    return elems


# orbit enumeration -------------------------------------------------------------

@dataclass(frozen=True)
class OrbitResult:
    keys: frozenset
    transversal: tuple[Matrix, ...]
    stabilizer_elements: tuple[Matrix, ...]
    stabilizer_order: int
    generator_count_used: int

    @property
    def orbit_size(self) -> int:
        return len(self.keys)


def orbit_enumerate(X: HermitianVariety, seed_curve: RationalNormalCurve,
                    generators, cap: int = DEFAULT_MATRIX_CAP) -> OrbitResult:
    """Breadth-first orbit of the seed curve with Schreier stabilizer.

    The transversal entry for each orbit member maps the seed onto it;
    non-tree BFS edges yield Schreier generators, whose projective
    closure is the full stabilizer of the seed inside the generated
    group, so orbit size times stabilizer order equals the order of the
    group the generators span.
    """
    K = X.tower.fq2
    generators = [tuple(map(tuple, g)) for g in generators]
    for g in generators:
        if transform_variety(X, g) != X:
            raise ValueError("generator does not preserve the variety")
    if not total_tangency_check(seed_curve, X):
        raise ValueError("seed curve is not totally tangent to the variety")

    ident = mat_identity(seed_curve.n + 1)
    index = {seed_curve.key(): 0}
    transversal = [ident]
    schreier = set()
    frontier = [0]
    mats = [seed_curve.M]
    while frontier:
        fresh = []
        for k in frontier:
            Tk = transversal[k]
            for U in generators:
                M2 = mat_mul(K, mats[k], U)
                key = RationalNormalCurve(X.tower, seed_curve.n, M2,
                                          check=False).key()
                hit = index.get(key)
                if hit is None:
                    if len(transversal) >= cap:
                        raise CapExceededError("orbit exceeds the matrix cap")
                    index[key] = len(transversal)
                    transversal.append(canonical_proj(K, mat_mul(K, Tk, U)))
                    mats.append(M2)
                    fresh.append(len(transversal) - 1)
                else:
                    s = canonical_proj(
                        K, mat_mul(K, mat_mul(K, Tk, U), mat_inv(K, transversal[hit])))
                    if s != ident:
                        schreier.add(s)
        frontier = fresh
    stab = mulclose_projective(K, sorted(schreier)) if schreier else {ident}
    return OrbitResult(frozenset(index), tuple(transversal),
                       tuple(sorted(stab)), len(stab), len(generators))


def certified_orbit(X: HermitianVariety, seed_curve: RationalNormalCurve,
                    rng: random.Random, initial_generators: int = 2,
                    max_generators: int = 10,
                    cap: int = DEFAULT_MATRIX_CAP):
    """(OrbitResult, generators) with the orbit-stabilizer product equal
    to the projective unitary group order; grows the generating set
    until the sampled subgroup is certified to be the whole group."""
    target = order_pgu(seed_curve.n + 1, X.tower.q)
    gens = [random_unitary(X.tower, X.A, rng) for _ in range(initial_generators)]
    while True:
        result = orbit_enumerate(X, seed_curve, gens, cap=cap)
        if result.orbit_size * result.stabilizer_order == target:
            return result, gens
        if len(gens) >= max_generators:
            raise RuntimeError(
                f"sampled {len(gens)} generators span a proper subgroup "
                f"({result.orbit_size} x {result.stabilizer_order} != {target})")
        gens.append(random_unitary(X.tower, X.A, rng))


# stabilizer structure -----------------------------------------------------------

@dataclass(frozen=True)
class PGL2Record:
    stabilizer_order: int
    image_order: int
    expected_order: int
    injective: bool
    homomorphism_ok: bool
    baer_set_preserved: bool
    witness_conjugates_rational: bool

    @property
    def certified(self) -> bool:
        return (self.injective and self.homomorphism_ok
                and self.baer_set_preserved and self.witness_conjugates_rational
                and self.image_order == self.expected_order
                and self.stabilizer_order == self.expected_order)


def stabilizer_as_pgl2(stab_elements, curve: RationalNormalCurve,
                       certificate) -> PGL2Record:
    """Certify that the stabilizer acts on curve parameters as PGL_2(F_q).

    Each stabilizer element induces a parameter permutation; the Moebius
    map through the images of 0, 1, infinity is verified against every
    parameter, the assignment is checked to be an injective homomorphism,
    and each image must preserve the tangency parameter set and conjugate
    into a matrix with F_q entries under the Baer witness.
    """
    tower = curve.tower
    K, q = tower.fq2, tower.q
    lookup = curve.param_of_point()
    params = tower.param_list
    inf_idx = len(params) - 1
    images = {}
    for S in stab_elements:
        MS = mat_mul(K, curve.M, S)
        rows = _normalize_rows(K, _rows_times_matrix(
            K, _phi_table(tower, curve.n), MS))
        imgs = [lookup.get(tuple(r)) for r in rows.tolist()]
        if None in imgs:
            raise ValueError("element does not stabilize the curve")
        g = mobius_from_frame(tower, imgs[0], imgs[1], imgs[inf_idx])
        if any(mobius_apply(tower, g, pr) != im for pr, im in zip(params, imgs)):
            raise ValueError("induced map is not a Moebius transformation")
        images[S] = g

    image_set = set(images.values())
    injective = len(image_set) == len(stab_elements)

    pairs = (itertools.product(stab_elements, repeat=2)
             if len(stab_elements) <= 400
             else zip(stab_elements, reversed(stab_elements)))
    hom_ok = all(
        images[canonical_proj(K, mat_mul(K, s1, s2))]
        == canonical_proj(K, mat_mul(K, images[s1], images[s2]))
        for s1, s2 in pairs)

    baer = set(certificate.parameters)
    baer_ok = all({mobius_apply(tower, g, pr) for pr in baer} == baer
                  for g in image_set)

    W = certificate.baer_witness
    Wi = mat_inv(K, W)
    rational = True
    for g in image_set:
        conj = canonical_proj(K, mat_mul(K, Wi, mat_mul(K, g, W)))
        if not all(tower.in_fq[x] for row in conj for x in row):
            rational = False
            break

    return PGL2Record(len(stab_elements), len(image_set), order_pgl2(q),
                      injective, hom_ok, baer_ok, rational)


# sweeps --------------------------------------------------------------------------

def _cert_shape_ok(cert, q: int, n: int) -> bool:
    return (len(cert.parameters) == q + 1
            and len(set(cert.parameters)) == q + 1
            and cert.multiplicity == n)


def sweep_orbit_tangency(X: HermitianVariety, seed_curve: RationalNormalCurve,
                         transversal, sample: int | None = None) -> dict:
    """Tangency-certify orbit members; returns counts and failure reasons.

    sample=None checks every member, an integer checks that many at
    evenly spaced transversal positions (deterministic).
    """
    q, n = X.tower.q, seed_curve.n
    total = len(transversal)
    if sample is None or sample >= total:
        idxs = range(total)
    else:
        step = max(1, total // sample)
        idxs = list(range(0, total, step))[:sample]
    reasons = Counter()
    checked = 0
    for i in idxs:
        checked += 1
        try:
            cert = total_tangency_check(seed_curve.transform(transversal[i]), X)
        except ZeroPullbackError:
            reasons["zero_pullback"] += 1
            continue
        if not cert:
            reasons[cert.reason] += 1
        elif not _cert_shape_ok(cert, q, n):
            reasons["malformed_certificate"] += 1
    return {"checked": checked, "failures": sum(reasons.values()),
            "reasons": dict(reasons)}


def random_translate_sweep(X: HermitianVariety, seed_curve: RationalNormalCurve,
                           count: int, rng: random.Random) -> dict:
    """Tangency-certify random unitary translates of the seed curve."""
    q, n = X.tower.q, seed_curve.n
    reasons = Counter()
    for _ in range(count):
        U = random_unitary(X.tower, X.A, rng)
        try:
            cert = total_tangency_check(seed_curve.transform(U), X)
        except ZeroPullbackError:
            reasons["zero_pullback"] += 1
            continue
        if not cert:
            reasons[cert.reason] += 1
        elif not _cert_shape_ok(cert, q, n):
            reasons["malformed_certificate"] += 1
    return {"checked": count, "failures": sum(reasons.values()),
            "reasons": dict(reasons)}


# incidence and the uniqueness scan ------------------------------------------------

@dataclass(frozen=True)
class IncidenceTriple:
    X: HermitianVariety
    marked: MarkedCurve

    def is_incident(self) -> bool:
        if any(self.X.eval(mk) for mk in self.marked.marks):
            return False
        try:
            return bool(total_tangency_check(self.marked.curve, self.X))
        except ZeroPullbackError:
            return False


@dataclass(frozen=True)
class UniquenessScanResult:
    survivors: tuple[Matrix, ...]
    space_size: int
    scanned: int
    membership_pass: int
    invertible_pass: int
    note: str = ""


def uniqueness_scan(tower: FieldTower, n: int, marks=None, shards: int = 1,
                    shard_index: int = 0,
                    cap: int = DEFAULT_MATRIX_CAP) -> UniquenessScanResult:
    """All invertible Hermitian A whose variety passes through the marks
    and is totally tangent to the canonical curve.

    Scans the whole Hermitian space (diagonal from F_q, upper triangle
    free, lower triangle forced by conjugation), q^((n+1)^2) matrices.
    With the canonical marks the two structural zeros f_A(P_0) = a_00 and
    f_A(P_inf) = a_nn prune the enumeration exactly.
    """
    K, q, m = tower.fq2, tower.q, tower.fq2.order
    size = n + 1
    space_size = q ** (size * size)
    if space_size > cap:
        raise CapExceededError(
            f"Hermitian space of size {space_size} exceeds the cap {cap}")
    if not (shards >= 1 and 0 <= shard_index < shards):
        raise ValueError("bad shard configuration")

    curve = RationalNormalCurve.canonical(tower, n)
    use_fast = marks is None
    if marks is None:
        marks = canonical_marks(curve)
    else:
        marks = tuple(tuple(mk) for mk in marks)
        on_curve = set(curve.points())
        if any(mk not in on_curve for mk in marks):
            return UniquenessScanResult((), space_size, 0, 0, 0,
                                        note="marks are not on the curve")
        use_fast = marks == canonical_marks(curve)

    add, frob, trace = K.add, tower.frob, tower.trace
    upper = [(i, j) for i in range(size) for j in range(i + 1, size)]
    diag_vals = [tower.embed_table[a] for a in range(q)]
    if use_fast:
        diag_slots = list(range(1, size - 1))
    else:
        diag_slots = list(range(size))

    survivors = []
    scanned = membership_pass = invertible_pass = 0
    counter = -1
    for diag_choice in itertools.product(diag_vals, repeat=len(diag_slots)):
        diag = [0] * size
        for slot, val in zip(diag_slots, diag_choice):
            diag[slot] = val
        for uvals in itertools.product(range(m), repeat=len(upper)):
            counter += 1
            if counter % shards != shard_index:
                continue
            scanned += 1
            if use_fast:
                total = 0
                for v in diag:
                    total = add(total, v)
                for u in uvals:
                    total = add(total, trace[u])
                if total:
                    continue
            A = [[0] * size for _ in range(size)]
            for i in range(size):
                A[i][i] = diag[i]
            for (i, j), u in zip(upper, uvals):
                A[i][j] = u
                A[j][i] = frob[u]
            A = tuple(tuple(r) for r in A)
            if not use_fast:
                if any(eval_form(tower, A, mk) for mk in marks):
                    continue
            membership_pass += 1
            if mat_det(K, A) == 0:
                continue
            invertible_pass += 1
            X = HermitianVariety(tower, A, check=False)
            try:
                cert = total_tangency_check(curve, X)
            except ZeroPullbackError:
                continue
            if cert:
                survivors.append(A)
    return UniquenessScanResult(tuple(survivors), space_size, scanned,
                                membership_pass, invertible_pass)
