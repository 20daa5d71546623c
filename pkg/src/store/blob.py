"""
SEMB binary blob codec.
Purpose: Bit-exact little-endian storage for any row-major float matrix (embeddings, frame features, parameters).

Layout: b"SEMB" | u32 version | u32 count | u32 dim | count*dim f32, record-major.
"""
from pathlib import Path
from typing import Any, Union

import numpy as np
from numpy.typing import NDArray
import structlog

from src.errors import FormatError, IoError, ValidationError
from src.store.models import FORMAT_VERSION

logger = structlog.get_logger()

MAGIC = b"SEMB"
HEADER_SIZE = 16
_HEADER_DTYPE = np.dtype("<u4")
_VALUE_DTYPE = np.dtype("<f4")


def encode_blob(values: Any) -> bytes:
    """Encode a 2-D matrix (or a vector, as one row) into blob bytes"""
    matrix = np.array(values, dtype=np.float64, ndmin=2)
    if matrix.ndim != 2 or matrix.shape[0] == 0 or matrix.shape[1] == 0:
        raise ValidationError(f"blob payload must be a non-empty matrix, got shape {matrix.shape}")
    payload = matrix.astype(_VALUE_DTYPE)
    if not np.all(np.isfinite(payload)):
        raise ValidationError("blob payload has non-finite entries at float32 width")
    count, dim = payload.shape
    header = np.array([FORMAT_VERSION, count, dim], dtype=_HEADER_DTYPE)
    return MAGIC + header.tobytes() + np.ascontiguousarray(payload).tobytes()


def decode_blob(raw: bytes) -> NDArray[np.float32]:
    """
    Decode blob bytes into a (count, dim) float32 array.
    Purpose: Reject any header or size inconsistency before touching the payload.
    """
    if len(raw) < HEADER_SIZE:
        raise FormatError(f"blob too short for a header ({len(raw)} bytes)")
    if raw[:4] != MAGIC:
        raise FormatError(f"bad blob magic {raw[:4]!r}")
    version, count, dim = (int(x) for x in np.frombuffer(raw[4:HEADER_SIZE], dtype=_HEADER_DTYPE))
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported blob version {version}")
    if count == 0 or dim == 0:
        raise FormatError(f"blob declares empty shape ({count}, {dim})")
    expected = count * dim * _VALUE_DTYPE.itemsize
    if len(raw) - HEADER_SIZE != expected:
        raise FormatError(
            f"blob payload is {len(raw) - HEADER_SIZE} bytes, header implies {expected}"
        )
    values = np.frombuffer(raw, dtype=_VALUE_DTYPE, offset=HEADER_SIZE).reshape(count, dim)
    if not np.all(np.isfinite(values)):
        raise ValidationError("blob payload has non-finite entries")
    return values.astype(np.float32)


def write_blob(path: Union[str, Path], values: Any) -> None:
    """Write a matrix to a blob file"""
    raw = encode_blob(values)
    try:
        Path(path).write_bytes(raw)
    except OSError as e:
        raise IoError(f"cannot write blob {path}: {e}") from e
    logger.debug("blob_written", path=str(path), size=len(raw))


def read_blob(path: Union[str, Path]) -> NDArray[np.float32]:
    """Read a blob file into a (count, dim) float32 array"""
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise IoError(f"cannot read blob {path}: {e}") from e
    return decode_blob(raw)
