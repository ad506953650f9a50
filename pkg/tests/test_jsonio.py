import json
import random

import pytest

from hermitangent import (
    HermitianVariety,
    RationalNormalCurve,
    canonical_matrix_B,
    hermitian_rescale,
    total_tangency_check,
)
from hermitangent.jsonio import (
    BUNDLE_KIND,
    canonical_dumps,
    certificate_from_json,
    certificate_to_json,
    curve_record,
    elem_from_json,
    elem_to_json,
    matrix_from_json,
    matrix_to_json,
    read_bundle,
    report_digest,
    write_bundle,
)

rng = random.Random(17)


def test_element_roundtrip(t5, t9):
    for tower in (t5, t9):
        K = tower.fq2
        for x in range(K.order):
            doc = elem_to_json(K, x)
            assert elem_from_json(K, doc) == x
        # coefficient vectors, not raw indices, so they are p-readable
        assert elem_to_json(K, 0) == [0] * (2 * tower.nu)


def test_matrix_roundtrip(t5):
    K = t5.fq2
    M = tuple(tuple(rng.randrange(K.order) for _ in range(3)) for _ in range(3))
    doc = matrix_to_json(K, M)
    assert matrix_from_json(K, doc) == M
    text = json.dumps(doc)
    assert matrix_from_json(K, json.loads(text)) == M


def test_certificate_roundtrip(t5):
    B = canonical_matrix_B(t5, 2)
    _, H = hermitian_rescale(t5, B)
    X = HermitianVariety(t5, H)
    cert = total_tangency_check(RationalNormalCurve.canonical(t5, 2), X)
    doc = certificate_to_json(t5, cert)
    back = certificate_from_json(t5, doc)
    assert back == cert


def test_canonical_dumps_is_order_insensitive():
    a = canonical_dumps({"b": 1, "a": [2, 3]})
    b = canonical_dumps({"a": [2, 3], "b": 1})
    assert a == b
    assert " " not in a


def test_report_digest_ignores_timings_only():
    base = {"config": {"p": 5}, "results": {"x": 1}}
    with_t = dict(base, timings={"stage": 1.23})
    other = dict(base, results={"x": 2})
    d0 = report_digest(base)
    assert report_digest(with_t) == d0
    assert report_digest(dict(base, report_digest="abc")) == d0
    assert report_digest(other) != d0


def test_bundle_roundtrip(t5, tmp_path):
    B = canonical_matrix_B(t5, 2)
    _, H = hermitian_rescale(t5, B)
    X = HermitianVariety(t5, H)
    curve = RationalNormalCurve.canonical(t5, 2)
    cert = total_tangency_check(curve, X)
    rec = curve_record(t5, curve, cert)
    assert rec["point_digest"] == curve.key().hex()
    path = tmp_path / "bundle.jsonl"
    count = write_bundle(str(path), t5, 2, H, [rec, rec])
    assert count == 2
    header, records = read_bundle(str(path))
    assert header["kind"] == BUNDLE_KIND
    assert (header["p"], header["nu"], header["n"]) == (5, 1, 2)
    assert matrix_from_json(t5.fq2, header["form_matrix"]) == H
    assert records == [rec, rec]


def test_bundle_rejects_wrong_kind(t5, tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"kind": "something-else"}\n')
    with pytest.raises(ValueError):
        read_bundle(str(path))


def test_empty_bundle(t5, tmp_path):
    B = canonical_matrix_B(t5, 2)
    _, H = hermitian_rescale(t5, B)
    path = tmp_path / "empty.jsonl"
    assert write_bundle(str(path), t5, 2, H, []) == 0
    header, records = read_bundle(str(path))
    assert records == []
