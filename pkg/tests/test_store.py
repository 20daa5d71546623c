"""
Test the exemplar store.
Purpose: Verify index building, the SEMB byte layout, manifest validation and save/load round trips.
"""
import json

import numpy as np
import pytest

from src.errors import (
    DimensionError,
    DuplicateIdError,
    EmptyIndexError,
    FormatError,
    IoError,
    ValidationError,
    ZeroNormError,
)
from src.store import (
    Label,
    build_index,
    decode_blob,
    encode_blob,
    load_index,
    read_manifest,
    sarcastic_exemplars,
    save_index,
    write_blob,
)
from src.store.blob import HEADER_SIZE

SINGLE_RECORD_BLOB = bytes.fromhex("53454D42" "01000000" "01000000" "02000000" "0000803F" "00000040")


@pytest.fixture
def small_index(make_record):
    return build_index(
        [
            make_record("u1", [1.0, 0.0, 0.5], text="Oh great, another meeting."),
            make_record("u2", [0.0, 1.0, -0.25], label=Label.NON_SARCASTIC, audio_path="wav/u2.wav"),
            make_record("u3", [0.6, 0.8, 0.1]),
        ]
    )


def test_build_index_contract_cases(make_record):
    with pytest.raises(EmptyIndexError):
        build_index([])
    with pytest.raises(DimensionError):
        build_index([make_record("a", [1.0, 2.0]), make_record("b", [1.0, 2.0, 3.0])])
    with pytest.raises(DuplicateIdError):
        build_index([make_record("a", [1.0, 2.0]), make_record("a", [2.0, 1.0])])


def test_build_index_singleton_preserves_order(make_record, small_index):
    index = build_index([make_record("only", [1.0, 2.0])])
    assert (index.dim, index.count) == (2, 1)
    assert small_index.ids() == ["u1", "u2", "u3"]


def test_record_rejects_zero_norm_and_unknown_label(make_record):
    with pytest.raises(ZeroNormError):
        make_record("z", [0.0, 0.0])
    with pytest.raises(ValidationError):
        make_record("bad", [1.0], label="ironic")


def test_sarcastic_exemplars_filters_labels(small_index):
    assert [r.id for r in sarcastic_exemplars(small_index.records)] == ["u1", "u3"]


def test_single_record_byte_layout(make_record):
    index = build_index([make_record("a", [1.0, 2.0])])
    assert encode_blob(index.embeddings) == SINGLE_RECORD_BLOB
    np.testing.assert_array_equal(decode_blob(SINGLE_RECORD_BLOB), [[1.0, 2.0]])


def test_every_single_header_byte_corruption_is_rejected():
    for position in range(HEADER_SIZE):
        for value in range(256):
            if value == SINGLE_RECORD_BLOB[position]:
                continue
            corrupted = bytearray(SINGLE_RECORD_BLOB)
            corrupted[position] = value
            with pytest.raises(FormatError):
                decode_blob(bytes(corrupted))


def test_truncated_blob_is_rejected():
    with pytest.raises(FormatError):
        decode_blob(SINGLE_RECORD_BLOB[:10])
    with pytest.raises(FormatError):
        decode_blob(SINGLE_RECORD_BLOB[:-1])


def test_save_load_round_trip_is_exact(tmp_path, small_index):
    manifest, blob = tmp_path / "index.json", tmp_path / "index.semb"
    save_index(small_index, manifest, blob)
    loaded = load_index(manifest, blob)
    assert loaded == small_index
    for before, after in zip(small_index.records, loaded.records):
        assert before.embedding.tobytes() == after.embedding.tobytes()


def test_rewriting_same_index_is_byte_identical(tmp_path, small_index):
    save_index(small_index, tmp_path / "a.json", tmp_path / "a.semb")
    save_index(small_index, tmp_path / "b.json", tmp_path / "b.semb")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert (tmp_path / "a.semb").read_bytes() == (tmp_path / "b.semb").read_bytes()


def test_manifest_omits_absent_optional_fields(tmp_path, small_index):
    save_index(small_index, tmp_path / "index.json", tmp_path / "index.semb")
    records = json.loads((tmp_path / "index.json").read_text())["records"]
    assert records[0] == {
        "id": "u1",
        "label": "sarcastic",
        "text": "Oh great, another meeting.",
        "row": 0,
    }
    assert "text" not in records[1]


def test_save_to_unwritable_path(tmp_path, small_index):
    with pytest.raises(IoError):
        save_index(small_index, tmp_path / "missing" / "i.json", tmp_path / "missing" / "i.semb")


def test_load_rejects_bad_magic(tmp_path, small_index):
    manifest, blob = tmp_path / "index.json", tmp_path / "index.semb"
    save_index(small_index, manifest, blob)
    raw = bytearray(blob.read_bytes())
    raw[0:1] = b"X"
    blob.write_bytes(bytes(raw))
    with pytest.raises(FormatError):
        load_index(manifest, blob)


def _write_manifest(path, records, dim=2):
    path.write_text(json.dumps({"version": 1, "dim": dim, "count": len(records), "records": records}))


def test_load_rejects_count_mismatch(tmp_path):
    manifest, blob = tmp_path / "m.json", tmp_path / "b.semb"
    _write_manifest(
        manifest,
        [
            {"id": "a", "label": "sarcastic", "row": 0},
            {"id": "b", "label": "sarcastic", "row": 1},
        ],
    )
    write_blob(blob, [[1.0, 2.0]])
    with pytest.raises(FormatError):
        load_index(manifest, blob)


def test_load_maps_manifest_rows(tmp_path):
    manifest, blob = tmp_path / "m.json", tmp_path / "b.semb"
    _write_manifest(
        manifest,
        [
            {"id": "a", "label": "sarcastic", "row": 1},
            {"id": "b", "label": "non_sarcastic", "row": 0},
        ],
    )
    write_blob(blob, [[1.0, 0.0], [0.0, 3.0]])
    index = load_index(manifest, blob)
    assert index.ids() == ["a", "b"]
    np.testing.assert_array_equal(index.embeddings, [[0.0, 3.0], [1.0, 0.0]])


@pytest.mark.parametrize(
    "records, rows",
    [
        ([{"id": "a", "label": "sarcastic", "row": 0}, {"id": "a", "label": "sarcastic", "row": 1}], [[1.0, 0.0], [0.0, 1.0]]),
        ([{"id": "a", "label": "sarcastic", "row": 0}, {"id": "b", "label": "sarcastic", "row": 0}], [[1.0, 0.0], [0.0, 1.0]]),
        ([{"id": "a", "label": "sarcastic", "row": 0}], [[0.0, 0.0]]),
        ([{"id": "a", "label": "angry", "row": 0}], [[1.0, 0.0]]),
    ],
    ids=["duplicate-id", "row-reused", "zero-norm", "unknown-label"],
)
def test_load_rejects_invariant_violations(tmp_path, records, rows):
    manifest, blob = tmp_path / "m.json", tmp_path / "b.semb"
    _write_manifest(manifest, records)
    write_blob(blob, rows)
    with pytest.raises(ValidationError):
        load_index(manifest, blob)


def test_read_manifest_rejects_garbage_and_wrong_version(tmp_path):
    path = tmp_path / "m.json"
    path.write_text("{not json")
    with pytest.raises(FormatError):
        read_manifest(path)
    path.write_text(json.dumps({"version": 2, "dim": 2, "count": 1, "records": [{"id": "a", "label": "sarcastic", "row": 0}]}))
    with pytest.raises(FormatError):
        read_manifest(path)
