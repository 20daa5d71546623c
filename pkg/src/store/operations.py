"""
Exemplar index operations.
Purpose: Build, validate, persist and load the sarcastic-exemplar database with a bit-exact on-disk format.
"""
from pathlib import Path
from typing import Iterable, List, Sequence, Union

import numpy as np
from pydantic import ValidationError as PydanticValidationError
import structlog

from src.errors import (
    DimensionError,
    DuplicateIdError,
    EmptyIndexError,
    FormatError,
    IoError,
    ToolkitError,
    ValidationError,
)
from src.store.blob import read_blob, write_blob
from src.store.models import (
    FORMAT_VERSION,
    ExemplarIndex,
    IndexManifest,
    Label,
    ManifestRecord,
    UtteranceRecord,
)

logger = structlog.get_logger()

PathLike = Union[str, Path]


def build_index(records: Sequence[UtteranceRecord]) -> ExemplarIndex:
    """
    Build an index from records, preserving their order.
    Purpose: Enforce non-emptiness, a single embedding dim, and unique ids.
    """
    records = tuple(records)
    if not records:
        raise EmptyIndexError("cannot build an index from zero records")

    dim = records[0].dim
    seen = set()
    for record in records:
        if record.dim != dim:
            raise DimensionError(f"record {record.id} has dim {record.dim}, index dim is {dim}")
        if record.id in seen:
            raise DuplicateIdError(f"duplicate record id {record.id}")
        seen.add(record.id)

    index = ExemplarIndex(dim=dim, records=records)
    logger.info("index_built", count=index.count, dim=dim)
    return index


def sarcastic_exemplars(records: Iterable[UtteranceRecord]) -> List[UtteranceRecord]:
    """Keep only sarcastic records; the retrieval database holds sarcastic utterances"""
    return [r for r in records if r.label is Label.SARCASTIC]


def index_manifest(index: ExemplarIndex) -> IndexManifest:
    return IndexManifest(
        version=index.version,
        dim=index.dim,
        count=index.count,
        records=[
            ManifestRecord(
                id=r.id,
                label=r.label,
                text=r.text,
                audio_path=r.audio_path,
                row=row,
            )
            for row, r in enumerate(index.records)
        ],
    )


def write_manifest(path: PathLike, manifest: IndexManifest) -> None:
    text = manifest.model_dump_json(indent=2, exclude_none=True) + "\n"
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise IoError(f"cannot write manifest {path}: {e}") from e


def read_manifest(path: PathLike) -> IndexManifest:
    """Parse and schema-check a manifest file"""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise IoError(f"cannot read manifest {path}: {e}") from e
    try:
        manifest = IndexManifest.model_validate_json(text)
    except PydanticValidationError as e:
        if any(err["type"] == "json_invalid" for err in e.errors()):
            raise FormatError(f"manifest {path} is not valid JSON") from e
        raise ValidationError(f"manifest {path} failed validation: {e}") from e
    if manifest.version != FORMAT_VERSION:
        raise FormatError(f"unsupported manifest version {manifest.version}")
    if manifest.count != len(manifest.records):
        raise FormatError(
            f"manifest declares {manifest.count} records but lists {len(manifest.records)}"
        )
    return manifest


def save_index(index: ExemplarIndex, manifest_path: PathLike, blob_path: PathLike) -> None:
    """Write the manifest (JSON) and blob (SEMB) for an index"""
    write_blob(blob_path, index.embeddings)
    write_manifest(manifest_path, index_manifest(index))
    logger.info(
        "index_saved",
        manifest=str(manifest_path),
        blob=str(blob_path),
        count=index.count,
    )


def assemble_index(manifest: IndexManifest, embeddings: np.ndarray) -> ExemplarIndex:
    """
    Join manifest records with blob rows.
    Purpose: Cross-check manifest against blob and re-validate every type invariant.
    """
    count, dim = embeddings.shape
    if count != manifest.count:
        raise FormatError(f"manifest count {manifest.count} but blob holds {count} embeddings")
    if dim != manifest.dim:
        raise FormatError(f"manifest dim {manifest.dim} but blob dim is {dim}")

    rows = [r.row for r in manifest.records]
    if sorted(rows) != list(range(count)):
        raise ValidationError("manifest rows are not a permutation of the blob rows")

    try:
        records = [
            UtteranceRecord(
                id=r.id,
                label=r.label,
                embedding=embeddings[r.row],
                text=r.text,
                audio_path=r.audio_path,
            )
            for r in manifest.records
        ]
        return build_index(records)
    except ValidationError:
        raise
    except ToolkitError as e:
        raise ValidationError(f"{type(e).__name__}: {e}") from e


def load_index(manifest_path: PathLike, blob_path: PathLike) -> ExemplarIndex:
    """Load and validate an index written by save_index (or by an external producer)"""
    manifest = read_manifest(manifest_path)
    embeddings = read_blob(blob_path)
    index = assemble_index(manifest, embeddings)
    logger.info("index_loaded", manifest=str(manifest_path), count=index.count, dim=index.dim)
    return index

