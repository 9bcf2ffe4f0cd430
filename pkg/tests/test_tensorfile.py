import struct

import numpy as np
import pytest

from tensorcur import TensorFileError, read_tensor, write_tensor


def test_round_trip_bit_exact_random_shapes(tmp_path):
    rng = np.random.default_rng(0)
    for i in range(30):
        n = int(rng.integers(1, 5))
        dims = tuple(int(d) for d in rng.integers(1, 7, size=n))
        t = rng.standard_normal(dims)
        path = tmp_path / f"t{i}.tnsr"
        write_tensor(path, t)
        back = read_tensor(path)
        assert back.shape == t.shape
        assert np.array_equal(back, t)  # bit-exact for float64 payloads


def test_payload_is_first_index_fastest(tmp_path):
    t = np.reshape(np.arange(1.0, 9.0), (2, 2, 2), order="F")
    path = tmp_path / "cube.tnsr"
    write_tensor(path, t)
    raw = path.read_bytes()
    header = 12 + 8 * 3
    payload = np.frombuffer(raw[header:], dtype="<f8")
    assert payload.tolist() == [1, 2, 3, 4, 5, 6, 7, 8]


def test_float32_payload_widens_on_load(tmp_path):
    rng = np.random.default_rng(1)
    t = rng.standard_normal((3, 4))
    path = tmp_path / "single.tnsr"
    write_tensor(path, t, dtype="float32")
    back = read_tensor(path)
    assert back.dtype == np.float64
    assert np.array_equal(back, t.astype(np.float32).astype(np.float64))


def test_header_fields(tmp_path):
    path = tmp_path / "h.tnsr"
    write_tensor(path, np.ones((2, 3)))
    magic, version, code, ndims, reserved = struct.unpack_from("<4sIBB2s", path.read_bytes())
    assert magic == b"TNSR"
    assert version == 1
    assert code == 1
    assert ndims == 2
    assert reserved == b"\x00\x00"


def _valid_bytes():
    import io

    t = np.arange(6.0).reshape(2, 3)
    buf = io.BytesIO()
    buf.write(struct.pack("<4sIBB2s", b"TNSR", 1, 1, 2, b"\x00\x00"))
    buf.write(np.asarray([2, 3], dtype="<u8").tobytes())
    buf.write(t.ravel(order="F").astype("<f8").tobytes())
    return bytearray(buf.getvalue())


@pytest.mark.parametrize(
    "mutate,message",
    [
        (lambda b: b.__setitem__(slice(0, 4), b"XNSR"), "magic"),
        (lambda b: b.__setitem__(4, 9), "version"),
        (lambda b: b.__setitem__(8, 7), "dtype"),
        (lambda b: b.extend(b"\x00" * 4), "length"),
        (lambda b: b.__delitem__(slice(-8, None)), "length"),
    ],
)
def test_malformed_files_are_rejected(tmp_path, mutate, message):
    data = _valid_bytes()
    mutate(data)
    path = tmp_path / "bad.tnsr"
    path.write_bytes(bytes(data))
    with pytest.raises(TensorFileError):
        read_tensor(path)


def test_zero_extent_rejected(tmp_path):
    data = _valid_bytes()
    data[12:20] = np.asarray([0], dtype="<u8").tobytes()
    path = tmp_path / "zero.tnsr"
    path.write_bytes(bytes(data))
    with pytest.raises(TensorFileError):
        read_tensor(path)


def test_truncated_header_rejected(tmp_path):
    path = tmp_path / "short.tnsr"
    path.write_bytes(b"TNSR\x01")
    with pytest.raises(TensorFileError):
        read_tensor(path)


def test_unknown_write_dtype():
    with pytest.raises(ValueError):
        write_tensor("/dev/null", np.ones(2), dtype="float16")
