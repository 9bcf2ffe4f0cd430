"""Binary tensor container.

Layout (all integers little-endian):

    bytes 0-3    magic "TNSR"
    bytes 4-7    format version, uint32, currently 1
    byte  8      dtype code, uint8: 1 = float64, 2 = float32
    byte  9      number of modes, uint8
    bytes 10-11  reserved, written as zero
    then         ndims extents, uint64 each
    then         prod(dims) payload values, first index varying fastest

float32 payloads are widened to float64 on load; float64 round trips are
bit-exact.
"""

import struct
from pathlib import Path

import numpy as np

__all__ = ["TensorFileError", "read_tensor", "write_tensor"]

MAGIC = b"TNSR"
VERSION = 1
_HEADER = struct.Struct("<4sIBB2s")
_DTYPES = {1: np.dtype("<f8"), 2: np.dtype("<f4")}
_CODES = {"float64": 1, "float32": 2}


class TensorFileError(ValueError):
    """Raised for malformed tensor files: bad magic, version, dtype, or length."""


def write_tensor(path, array, dtype: str = "float64") -> None:
    """Write ``array`` to ``path``; ``dtype`` selects the payload precision."""
    array = np.asarray(array, dtype=np.float64)
    if array.ndim < 1 or array.ndim > 255:
        raise ValueError("tensor must have between 1 and 255 modes")
    if any(d < 1 for d in array.shape):
        raise ValueError("every extent must be positive")
    try:
        code = _CODES[dtype]
    except KeyError:
        raise ValueError(f"unsupported dtype {dtype!r}") from None
    payload = array.ravel(order="F").astype(_DTYPES[code])
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, code, array.ndim, b"\x00\x00"))
        fh.write(np.asarray(array.shape, dtype="<u8").tobytes())
        fh.write(payload.tobytes())


def read_tensor(path) -> np.ndarray:
    """Load a tensor written by :func:`write_tensor` as float64."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise TensorFileError("file too short for a tensor header")
    magic, version, code, ndims, _reserved = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise TensorFileError(f"bad magic {magic!r}")
    if version != VERSION:
        raise TensorFileError(f"unsupported version {version}")
    if code not in _DTYPES:
        raise TensorFileError(f"unknown dtype code {code}")
    if ndims < 1:
        raise TensorFileError("tensor must have at least one mode")
    offset = _HEADER.size
    dims_end = offset + 8 * ndims
    if len(data) < dims_end:
        raise TensorFileError("file truncated in the extents block")
    dims = np.frombuffer(data, dtype="<u8", count=ndims, offset=offset)
    if np.any(dims == 0):
        raise TensorFileError("zero extent in tensor header")
    shape = tuple(int(d) for d in dims)
    count = 1
    for d in shape:
        count *= d
    expected = dims_end + count * _DTYPES[code].itemsize
    if len(data) != expected:
        raise TensorFileError(
            f"payload length mismatch: file has {len(data) - dims_end} bytes, "
            f"expected {expected - dims_end}"
        )
    payload = np.frombuffer(data, dtype=_DTYPES[code], count=count, offset=dims_end)
    return payload.astype(np.float64).reshape(shape, order="F")
