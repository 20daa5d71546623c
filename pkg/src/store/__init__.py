from src.store.blob import decode_blob, encode_blob, read_blob, write_blob
from src.store.models import ExemplarIndex, Label, UtteranceRecord
from src.store.operations import (
    build_index,
    load_index,
    read_manifest,
    sarcastic_exemplars,
    save_index,
)

__all__ = [
    "ExemplarIndex",
    "Label",
    "UtteranceRecord",
    "build_index",
    "decode_blob",
    "encode_blob",
    "load_index",
    "read_blob",
    "read_manifest",
    "sarcastic_exemplars",
    "save_index",
    "write_blob",
]
