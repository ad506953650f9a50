"""Command-line pipelines for verifying the tangent-curve classification.

Exit codes: 0 every executed clause passed, 1 a clause failed,
2 hypothesis or input violation, 3 a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time

from .conic_scan import brute_force_conic_scan
from .curves import (
    RationalNormalCurve,
    canonical_matrix_B,
    canonical_pullback_target,
    pullback,
    total_tangency_check,
)
from .fields import CapExceededError, DEFAULT_ELEMENT_CAP, make_field_tower
from .jsonio import (
    certificate_to_json,
    curve_record,
    matrix_from_json,
    matrix_to_json,
    read_bundle,
    report_digest,
    write_bundle,
)
from .linalg import (
    HermitianVariety,
    SingularMatrixError,
    hermitian_rescale,
    lang_decompose,
    lang_map,
    mat_scale,
    proj_equal,
)
from .orbit import (
    DEFAULT_MATRIX_CAP,
    GroupOrderTable,
    certified_orbit,
    random_hermitian_invertible,
    random_translate_sweep,
    stabilizer_as_pgl2,
    sweep_orbit_tangency,
    uniqueness_scan,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_HYPOTHESIS = 2
EXIT_CAP = 3

MODES = ("canonical", "tangency", "orbit", "conic-scan", "uniqueness",
         "full-theorem", "lang-solve", "field-info")


class HypothesisError(ValueError):
    """The requested run violates a hypothesis or input contract."""


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hermitangent",
        description="verify the classification of rational normal curves "
                    "totally tangent to a Hermitian hypersurface at small q")
    ap.add_argument("--p", type=int, help="field characteristic")
    ap.add_argument("--nu", type=int, default=1, help="q = p^nu")
    ap.add_argument("--n", type=int, default=2, help="curve degree / P^n")
    ap.add_argument("--mode", choices=MODES, required=True)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--shards", type=int, default=1)
    ap.add_argument("--shard-index", type=int, default=0)
    ap.add_argument("--out", help="report path (orbit mode also writes "
                                  "<out>.curves.jsonl)")
    ap.add_argument("--in", dest="infile",
                    help="input bundle (tangency) or matrix file (lang-solve)")
    ap.add_argument("--cap-elements", type=int, default=DEFAULT_ELEMENT_CAP)
    ap.add_argument("--cap-matrices", type=int, default=None,
                    help="candidate/orbit cap; default 2^24 or "
                         "HERMITANGENT_CAP_OVERRIDE")
    ap.add_argument("--verify-all-orbit", action="store_true",
                    help="tangency-check every orbit member instead of a "
                         "spot sample")
    return ap


def _default_matrix_cap() -> int:
    env = os.environ.get("HERMITANGENT_CAP_OVERRIDE")
    if not env:
        return DEFAULT_MATRIX_CAP
    try:
        return int(env)
    except ValueError:
        print("HERMITANGENT_CAP_OVERRIDE must be an integer, got %r" % env)
        raise SystemExit(2)


class _Timings:
    def __init__(self):
        self.stages = {}
        self._t0 = None
        self._name = None

    def start(self, name: str):
        self._name, self._t0 = name, time.perf_counter()

    def stop(self):
        self.stages[self._name] = round(time.perf_counter() - self._t0, 3)


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise HypothesisError(f"--{name} is required for this mode")


def _check_hypotheses(tower, n: int) -> None:
    if n % tower.p == 0:
        raise HypothesisError(
            f"n = {n} is divisible by the characteristic {tower.p}")
    if 2 * n > tower.q:
        raise HypothesisError(f"2n = {2 * n} exceeds q = {tower.q}")


def _canonical_pair(tower, n: int):
    """(B, hermitian rep H, X with A = H, canonical curve)."""
    B = canonical_matrix_B(tower, n)
    res = hermitian_rescale(tower, B)
    if res is None:
        raise SingularMatrixError("no Hermitian multiple of the canonical form")
    _, H = res
    X = HermitianVariety(tower, H)
    return B, H, X, RationalNormalCurve.canonical(tower, n)


def _sweep_booleans(sweep: dict) -> dict:
    reasons = sweep["reasons"]
    return {
        "all_tangent": not any(r in reasons for r in
                               ("not_nth_power", "not_squarefree",
                                "wrong_root_count", "zero_pullback",
                                "malformed_certificate")),
        "all_rational": "does_not_split" not in reasons,
        "all_baer": "not_baer" not in reasons,
    }


# mode implementations --------------------------------------------------------

def run_field_info(args, timings) -> tuple[dict, dict]:
    _require(args, "p")
    timings.start("tower")
    tower = make_field_tower(args.p, args.nu, args.cap_elements)
    timings.stop()
    table = GroupOrderTable.for_curves(args.n, tower.q)
    results = {
        "q": tower.q,
        "q2": tower.q2,
        "modulus_q": list(tower.modulus_q),
        "modulus_q2": list(tower.modulus_q2),
        "pgu_order": table.pgu_order,
        "pgl2_order": table.pgl2_q_order,
        "predicted_curve_count": table.predicted_count,
    }
    return results, {"tower_consistent": True}


def run_canonical(args, timings) -> tuple[dict, dict]:
    _require(args, "p")
    tower = make_field_tower(args.p, args.nu, args.cap_elements)
    timings.start("canonical_identity")
    B, _, _, curve = _canonical_pair(tower, args.n)
    X_B = HermitianVariety(tower, B)
    ok = pullback(curve, X_B) == canonical_pullback_target(tower, args.n)
    timings.stop()
    results = {
        "canonical_identity_ok": ok,
        "pullback_degree": args.n * (tower.q + 1),
        "form_matrix": matrix_to_json(tower.fq2, B),
    }
    return results, {"canonical_identity": ok}


def run_tangency(args, timings) -> tuple[dict, dict]:
    if args.infile:
        header, records = read_bundle(args.infile)
        tower = make_field_tower(header["p"], header["nu"], args.cap_elements)
        n = header["n"]
        A = matrix_from_json(tower.fq2, header["form_matrix"])
        X = HermitianVariety(tower, A)
        timings.start("bundle_verify")
        failures = 0
        for rec in records:
            M = matrix_from_json(tower.fq2, rec["curve_matrix"])
            curve = RationalNormalCurve(tower, n, M)
            cert = total_tangency_check(curve, X)
            if (not cert
                    or curve.key().hex() != rec["point_digest"]
                    or certificate_to_json(tower, cert) != rec["certificate"]):
                failures += 1
        timings.stop()
        results = {"records": len(records), "failures": failures}
        return results, {"all_certificates_valid": failures == 0}

    _require(args, "p")
    tower = make_field_tower(args.p, args.nu, args.cap_elements)
    timings.start("tangency")
    B, _, _, curve = _canonical_pair(tower, args.n)
    cert = total_tangency_check(curve, HermitianVariety(tower, B))
    timings.stop()
    results = {"form_matrix": matrix_to_json(tower.fq2, B)}
    if cert:
        results["certificate"] = certificate_to_json(tower, cert)
    else:
        results["failure_reason"] = cert.reason
    return results, {"certificate": bool(cert)}


def run_lang_solve(args, timings) -> tuple[dict, dict]:
    if args.infile:
        with open(args.infile, encoding="utf-8") as fh:
            doc = json.load(fh)
        tower = make_field_tower(doc["p"], doc.get("nu", 1), args.cap_elements)
        H = matrix_from_json(tower.fq2, doc["matrix"])
    else:
        _require(args, "p")
        tower = make_field_tower(args.p, args.nu, args.cap_elements)
        rng = random.Random(f"{args.seed}:lang")
        H = random_hermitian_invertible(tower, args.n + 1, rng)
    timings.start("lang_decompose")
    try:
        T = lang_decompose(tower, H)
    except ValueError as exc:
        raise HypothesisError(str(exc)) from exc
    timings.stop()
    verified = lang_map(tower, T) == H
    results = {
        "H": matrix_to_json(tower.fq2, H),
        "T": matrix_to_json(tower.fq2, T),
        "verified": verified,
    }
    return results, {"decomposition_verified": verified}


def _orbit_stage(args, tower, cap, timings):
    """Shared by orbit mode and full-theorem; returns results + clauses."""
    n = args.n
    B, H, X, curve = _canonical_pair(tower, n)
    table = GroupOrderTable.for_curves(n, tower.q)
    if table.predicted_count > cap:
        raise CapExceededError(
            f"predicted orbit size {table.predicted_count} exceeds the cap {cap}")
    cert = total_tangency_check(curve, X)
    if not cert:
        raise SingularMatrixError("canonical curve is not tangent; "
                                  "hypotheses violated upstream")

    timings.start("orbit")
    rng = random.Random(f"{args.seed}:orbit")
    result, gens = certified_orbit(X, curve, rng, cap=cap)
    timings.stop()

    timings.start("stabilizer_pgl2")
    pgl2 = stabilizer_as_pgl2(result.stabilizer_elements, curve, cert)
    timings.stop()

    timings.start("tangency_sweep")
    sample = None if args.verify_all_orbit else min(50, result.orbit_size)
    sweep = sweep_orbit_tangency(X, curve, result.transversal, sample=sample)
    timings.stop()

    product = result.orbit_size * result.stabilizer_order
    results = {
        "orbit_size": result.orbit_size,
        "stabilizer_order": result.stabilizer_order,
        "predicted_count": table.predicted_count,
        "pgu_order": table.pgu_order,
        "pgl2_order": table.pgl2_q_order,
        "orbit_stabilizer_product": product,
        "counts_match": result.orbit_size == table.predicted_count,
        "generators_used": result.generator_count_used,
        "pgl2_record": {
            "image_order": pgl2.image_order,
            "expected_order": pgl2.expected_order,
            "injective": pgl2.injective,
            "homomorphism_ok": pgl2.homomorphism_ok,
            "baer_set_preserved": pgl2.baer_set_preserved,
            "witness_conjugates_rational": pgl2.witness_conjugates_rational,
            "certified": pgl2.certified,
        },
        "tangency_sweep": sweep,
    }
    results.update(_sweep_booleans(sweep))
    clauses = {
        "counts_match": results["counts_match"],
        "orbit_stabilizer_product_matches": product == table.pgu_order,
        "stabilizer_is_pgl2": pgl2.certified,
        "tangency_sweep_clean": sweep["failures"] == 0,
    }
    return X, curve, result, results, clauses


def run_orbit(args, timings) -> tuple[dict, dict]:
    _require(args, "p")
    tower = make_field_tower(args.p, args.nu, args.cap_elements)
    _check_hypotheses(tower, args.n)
    cap = args.cap_matrices
    X, curve, result, results, clauses = _orbit_stage(args, tower, cap, timings)
    if args.out:
        timings.start("bundle")
        def records():
            for T in result.transversal:
                member = curve.transform(T)
                cert = total_tangency_check(member, X)
                if not cert:
                    raise RuntimeError("orbit member lost its certificate")
                yield curve_record(tower, member, cert)
        count = write_bundle(args.out + ".curves.jsonl", tower, args.n,
                             X.A, records())
        timings.stop()
        results["bundle_records"] = count
    return results, clauses


def run_conic_scan(args, timings) -> tuple[dict, dict]:
    _require(args, "p")
    tower = make_field_tower(args.p, args.nu, args.cap_elements)
    _check_hypotheses(tower, args.n)
    if args.n != 2:
        raise HypothesisError("the conic scan is specific to n = 2")
    if tower.p == 2:
        raise HypothesisError("the conic scan needs odd characteristic")
    if tower.q > 7:
        raise HypothesisError("the conic scan is capped at q = 7")
    _, _, X, _ = _canonical_pair(tower, args.n)
    table = GroupOrderTable.for_curves(args.n, tower.q)
    timings.start("conic_scan")
    scan = brute_force_conic_scan(X, shards=args.shards,
                                  shard_index=args.shard_index,
                                  cap=args.cap_matrices)
    timings.stop()
    results = {
        "candidates_total": scan.candidates_total,
        "scanned": scan.scanned,
        "filtered": scan.filtered,
        "singular_discarded": scan.singular_discarded,
        "tangent_count": scan.tangent_count,
        "distinct_curves": len(scan.keys),
        "predicted_count": table.predicted_count,
        "keys_digest": _keys_digest(scan.keys),
        "shards": args.shards,
        "shard_index": args.shard_index,
    }
    clauses = {}
    if args.shards == 1:
        clauses["count_matches_prediction"] = (
            len(scan.keys) == table.predicted_count)
    return results, clauses


def _keys_digest(keys) -> str:
    import hashlib
    h = hashlib.sha256()
    for k in sorted(keys):
        h.update(k)
    return h.hexdigest()


def run_uniqueness(args, timings) -> tuple[dict, dict]:
    _require(args, "p")
    tower = make_field_tower(args.p, args.nu, args.cap_elements)
    _check_hypotheses(tower, args.n)
    K = tower.fq2
    B, H, _, _ = _canonical_pair(tower, args.n)
    timings.start("uniqueness_scan")
    scan = uniqueness_scan(tower, args.n, shards=args.shards,
                           shard_index=args.shard_index,
                           cap=args.cap_matrices)
    timings.stop()
    survivors = scan.survivors
    expected = {mat_scale(K, tower.embed_table[c], H)
                for c in range(1, tower.q)}
    results = {
        "space_size": scan.space_size,
        "scanned": scan.scanned,
        "membership_pass": scan.membership_pass,
        "invertible_pass": scan.invertible_pass,
        "survivor_count": len(survivors),
        "survivors": [matrix_to_json(K, A) for A in survivors],
        "shards": args.shards,
        "shard_index": args.shard_index,
    }
    clauses = {
        "all_survivors_projectively_canonical": all(
            proj_equal(K, A, B) for A in survivors),
    }
    if args.shards == 1:
        clauses["survivors_are_the_hermitian_multiples"] = (
            set(survivors) == expected)
    return results, clauses


def run_full_theorem(args, timings) -> tuple[dict, dict]:
    _require(args, "p")
    tower = make_field_tower(args.p, args.nu, args.cap_elements)
    _check_hypotheses(tower, args.n)
    n, q = args.n, tower.q
    cap = args.cap_matrices
    K = tower.fq2
    skipped = {}
    clauses = {}

    timings.start("canonical_identity")
    B, H, X, curve = _canonical_pair(tower, n)
    X_B = HermitianVariety(tower, B)
    identity_ok = pullback(curve, X_B) == canonical_pullback_target(tower, n)
    timings.stop()
    clauses["canonical_identity"] = identity_ok

    table = GroupOrderTable.for_curves(n, q)
    results = {
        "canonical_identity_ok": identity_ok,
        "predicted_count": table.predicted_count,
        "pgu_order": table.pgu_order,
        "pgl2_order": table.pgl2_q_order,
        "seed": args.seed,
    }

    orbit_keys = None
    if table.predicted_count <= cap:
        _, _, orbit_result, orbit_results, orbit_clauses = _orbit_stage(
            args, tower, cap, timings)
        results.update(orbit_results)
        clauses.update(orbit_clauses)
        orbit_keys = orbit_result.keys
    else:
        skipped["orbit"] = (f"predicted orbit size {table.predicted_count} "
                            f"exceeds the cap {cap}")
        timings.start("translate_sweep")
        cert = total_tangency_check(curve, X)
        clauses["canonical_certificate"] = bool(cert)
        rng = random.Random(f"{args.seed}:translates")
        sweep = random_translate_sweep(X, curve, 1000, rng)
        timings.stop()
        results["translate_sweep"] = sweep
        results.update(_sweep_booleans(sweep))
        results["orbit_size"] = None
        results["stabilizer_order"] = None
        results["counts_match"] = None
        clauses["translate_sweep_clean"] = sweep["failures"] == 0

    m = tower.q2
    conic_feasible = (n == 2 and tower.p != 2 and q <= 7
                      and (m ** 6 - 1) // (m - 1) <= cap
                      and orbit_keys is not None)
    if conic_feasible:
        timings.start("conic_scan")
        scan = brute_force_conic_scan(X, cap=cap)
        timings.stop()
        results["conic_scan"] = {
            "candidates_total": scan.candidates_total,
            "filtered": scan.filtered,
            "distinct_curves": len(scan.keys),
        }
        clauses["conic_scan_matches_orbit"] = scan.keys == orbit_keys
    elif n == 2:
        skipped["conic_scan"] = "candidate count exceeds the cap" \
            if tower.p != 2 and q <= 7 else "outside the scan's (p, q) range"

    space = q ** ((n + 1) ** 2)
    if space <= cap:
        timings.start("uniqueness_scan")
        scan = uniqueness_scan(tower, n, cap=cap)
        timings.stop()
        expected = {mat_scale(K, tower.embed_table[c], H)
                    for c in range(1, q)}
        results["uniqueness_survivors"] = len(scan.survivors)
        clauses["uniqueness_unique_projective_point"] = (
            set(scan.survivors) == expected)
    else:
        skipped["uniqueness_scan"] = (f"Hermitian space of size {space} "
                                      f"exceeds the cap {cap}")
        results["uniqueness_survivors"] = None

    if skipped:
        results["skipped"] = skipped
    return results, clauses


_RUNNERS = {
    "field-info": run_field_info,
    "canonical": run_canonical,
    "tangency": run_tangency,
    "lang-solve": run_lang_solve,
    "orbit": run_orbit,
    "conic-scan": run_conic_scan,
    "uniqueness": run_uniqueness,
    "full-theorem": run_full_theorem,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.cap_matrices is None:
        args.cap_matrices = _default_matrix_cap()
    if args.shards < 1 or not (0 <= args.shard_index < args.shards):
        print("bad shard configuration", file=sys.stderr)
        return EXIT_HYPOTHESIS

    config = {
        "p": args.p, "nu": args.nu, "n": args.n, "mode": args.mode,
        "seed": args.seed, "shards": args.shards,
        "shard_index": args.shard_index,
        "cap_elements": args.cap_elements,
        "cap_matrices": args.cap_matrices,
        "verify_all_orbit": args.verify_all_orbit,
    }
    timings = _Timings()
    try:
        results, clauses = _RUNNERS[args.mode](args, timings)
        code = EXIT_OK if all(clauses.values()) else EXIT_CHECK_FAILED
        report = {"config": config, "results": results, "clauses": clauses,
                  "timings": timings.stages}
    except HypothesisError as exc:
        report = {"config": config,
                  "error": {"kind": "hypothesis_violation", "message": str(exc)}}
        code = EXIT_HYPOTHESIS
    except SingularMatrixError as exc:
        report = {"config": config,
                  "error": {"kind": "singular_form", "message": str(exc)}}
        code = EXIT_HYPOTHESIS
    except CapExceededError as exc:
        report = {"config": config,
                  "error": {"kind": "cap_exceeded", "message": str(exc)}}
        code = EXIT_CAP
    report["report_digest"] = report_digest(report)
    text = json.dumps(report, sort_keys=True, indent=2)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
