"""Sensor-side sign encoding and the packed ``.1bm`` wire format.

Layout of a packed record::

    {"m":...,"n":...,"norm_x":"<8 hex digits>","seed":...,"source_id":...}\\n
    <ceil(m/8) payload bytes>

``norm_x`` is the big-endian bit pattern of the IEEE-754 single-precision
value.  Sign ``b[i] = +1`` is bit 1; bit ``i % 8`` of byte ``i // 8``, least
significant bit first.  Unused high bits of the last byte must be zero.
"""
import json
import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import FormatError, InvalidArgumentError
from .transform import check_seed

__all__ = ["SignMeasurements", "sign_fn", "signs", "encode", "pack", "unpack", "payload_size"]

HEADER_KEYS = frozenset({"n", "m", "seed", "norm_x", "source_id"})
_F32_MAX = float(np.finfo(np.float32).max)


def sign_fn(y):
    """+1 for ``y >= 0``, -1 otherwise (so the sign of zero is +1)."""
    y = float(y)
    if not math.isfinite(y):
        raise InvalidArgumentError(f"sign of non-finite value {y!r}")
    return 1 if y >= 0 else -1


def signs(y):
    """Vectorized :func:`sign_fn` returning an int8 array."""
    return np.where(np.asarray(y) >= 0, 1, -1).astype(np.int8)


def _to_f32(value):
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise InvalidArgumentError(f"norm_x must be finite and >= 0, got {value!r}")
    if value > _F32_MAX:
        raise InvalidArgumentError(f"norm_x {value!r} overflows single precision")
    return float(np.float32(value))


@dataclass(frozen=True, eq=False)
class SignMeasurements:
    """Sign vector ``b`` plus the norm side channel.

    ``norm_x`` is held at single precision, the precision it travels with.
    """

    b: np.ndarray
    norm_x: float
    n: int
    m: int
    seed: int
    source_id: str | None = None

    def __post_init__(self):
        b = np.asarray(self.b)
        if b.ndim != 1 or not np.all((b == 1) | (b == -1)):
            raise InvalidArgumentError("b must be a 1-d vector of +1/-1")
        b = b.astype(np.int8)
        b.setflags(write=False)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "norm_x", _to_f32(self.norm_x))
        if self.m != b.shape[0]:
            raise InvalidArgumentError(f"m={self.m} but b has {b.shape[0]} entries")
        if self.n < 1 or self.m < 1:
            raise InvalidArgumentError("n and m must be >= 1")
        check_seed(self.seed)
        if self.source_id is not None and not isinstance(self.source_id, str):
            raise InvalidArgumentError("source_id must be a string or None")

    def __eq__(self, other):
        if not isinstance(other, SignMeasurements):
            return NotImplemented
        return (
            np.array_equal(self.b, other.b)
            and self.norm_x == other.norm_x
            and (self.n, self.m, self.seed, self.source_id)
            == (other.n, other.m, other.seed, other.source_id)
        )

    __hash__ = None


def encode(x, ensemble, source_id=None):
    """Compute ``b = sign(phi @ x)`` and ``norm_x = ||x||_2``.

    Works from ``phi`` directly so the sensor never needs the basis.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != ensemble.n:
        raise InvalidArgumentError(f"reading has shape {x.shape}, ensemble expects ({ensemble.n},)")
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError("reading contains non-finite values")
    return SignMeasurements(
        b=signs(ensemble.phi @ x),
        norm_x=float(np.linalg.norm(x)),
        n=ensemble.n,
        m=ensemble.m,
        seed=ensemble.seed,
        source_id=source_id,
    )


def payload_size(m):
    return (m + 7) // 8


def pack(sm):
    header = {
        "n": sm.n,
        "m": sm.m,
        "seed": sm.seed,
        "norm_x": struct.pack(">f", sm.norm_x).hex(),
        "source_id": sm.source_id,
    }
    line = json.dumps(header, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    bits = np.packbits(sm.b > 0, bitorder="little")
    return line.encode("utf-8") + b"\n" + bits.tobytes()


def _header_int(header, key, minimum):
    value = header[key]
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise FormatError(f"header field {key!r} is not a valid integer: {value!r}")
    return value


def unpack(data):
    """Inverse of :func:`pack`; raises :class:`FormatError` on malformed input."""
    data = bytes(data)
    cut = data.find(b"\n")
    if cut < 0:
        raise FormatError("missing header terminator")
    try:
        header = json.loads(data[:cut].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"malformed header: {exc}") from None
    if not isinstance(header, dict) or set(header) != HEADER_KEYS:
        raise FormatError(f"header keys must be exactly {sorted(HEADER_KEYS)}")
    n = _header_int(header, "n", 1)
    m = _header_int(header, "m", 1)
    seed = _header_int(header, "seed", 0)
    if seed > 2**64 - 1:
        raise FormatError("seed exceeds 64 bits")
    raw_norm = header["norm_x"]
    if not isinstance(raw_norm, str) or len(raw_norm) != 8:
        raise FormatError("norm_x must be 8 hex digits")
    try:
        (norm_x,) = struct.unpack(">f", bytes.fromhex(raw_norm))
    except ValueError:
        raise FormatError("norm_x must be 8 hex digits") from None
    if not math.isfinite(norm_x) or norm_x < 0 or math.copysign(1.0, norm_x) < 0:
        raise FormatError(f"norm_x {norm_x!r} is not a finite non-negative value")
    source_id = header["source_id"]
    if source_id is not None and not isinstance(source_id, str):
        raise FormatError("source_id must be a string or null")

    payload = data[cut + 1:]
    expected = payload_size(m)
    if len(payload) < expected:
        raise FormatError(f"truncated payload: {len(payload)} of {expected} bytes")
    if len(payload) > expected:
        raise FormatError(f"{len(payload) - expected} trailing bytes after payload")
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), bitorder="little")
    if np.any(bits[m:]):
        raise FormatError("nonzero pad bits")
    b = np.where(bits[:m] == 1, 1, -1).astype(np.int8)
    return SignMeasurements(b=b, norm_x=norm_x, n=n, m=m, seed=seed, source_id=source_id)
