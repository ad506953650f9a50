"""JSON encoding for matrices, certificates, bundles and reports.

Field elements travel as base-p coefficient vectors so files stay
readable and independent of the internal integer encoding.  Reports
carry volatile timings; report_digest hashes the report with timings
stripped, which is the byte-stable identity of a run.
"""

from __future__ import annotations

import hashlib
import json

from .curves import TangencyCertificate
from .fields import FieldTower, GaloisField


def elem_to_json(K: GaloisField, x: int) -> list[int]:
    return list(K.coeffs(x))


def elem_from_json(K: GaloisField, digits) -> int:
    return K.from_coeffs(digits)


def matrix_to_json(K: GaloisField, M) -> list:
    return [[elem_to_json(K, x) for x in row] for row in M]


def matrix_from_json(K: GaloisField, rows):
    return tuple(tuple(elem_from_json(K, x) for x in row) for row in rows)


def param_to_json(K: GaloisField, pr) -> list:
    return [elem_to_json(K, pr[0]), elem_to_json(K, pr[1])]


def param_from_json(K: GaloisField, obj):
    return (elem_from_json(K, obj[0]), elem_from_json(K, obj[1]))


def certificate_to_json(tower: FieldTower, cert: TangencyCertificate) -> dict:
    K = tower.fq2
    return {
        "parameters": [param_to_json(K, pr) for pr in cert.parameters],
        "multiplicity": cert.multiplicity,
        "scalar": elem_to_json(K, cert.scalar),
        "baer_witness": matrix_to_json(K, cert.baer_witness),
    }


def certificate_from_json(tower: FieldTower, obj: dict) -> TangencyCertificate:
    K = tower.fq2
    return TangencyCertificate(
        parameters=tuple(param_from_json(K, pr) for pr in obj["parameters"]),
        multiplicity=obj["multiplicity"],
        scalar=elem_from_json(K, obj["scalar"]),
        baer_witness=matrix_from_json(K, obj["baer_witness"]),
    )


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def report_digest(report: dict) -> str:
    """sha256 of the report without its volatile timing section."""
    stripped = {k: v for k, v in report.items()
                if k not in ("timings", "report_digest")}
    return hashlib.sha256(canonical_dumps(stripped).encode()).hexdigest()


BUNDLE_KIND = "hermitangent-bundle"


def write_bundle(path, tower: FieldTower, n: int, form_matrix, records) -> int:
    """One JSON line per curve after a header line; returns record count."""
    K = tower.fq2
    header = {"kind": BUNDLE_KIND, "p": tower.p, "nu": tower.nu, "n": n,
              "form_matrix": matrix_to_json(K, form_matrix)}
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_dumps(header) + "\n")
        for rec in records:
            fh.write(canonical_dumps(rec) + "\n")
            count += 1
    return count


def read_bundle(path):
    with open(path, encoding="utf-8") as fh:
        lines = [json.loads(line) for line in fh if line.strip()]
    if not lines or lines[0].get("kind") != BUNDLE_KIND:
        raise ValueError("not a certificate bundle")
    return lines[0], lines[1:]


def curve_record(tower: FieldTower, curve, cert) -> dict:
    return {
        "curve_matrix": matrix_to_json(tower.fq2, curve.M),
        "point_digest": curve.key().hex(),
        "certificate": certificate_to_json(tower, cert),
    }
