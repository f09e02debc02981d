"""Length-prefixed binary framing for the two wire messages.

Frame layout:

    tag(1 byte: 0x01 round 1, 0x02 round 2)
    count(4-byte big-endian number of integers)
    count * integer

where an integer is encoded as ``len(4-byte big-endian byte count)`` followed
by its magnitude, big-endian with no leading zero byte (0 encodes as len 0).
Round 1 carries p, alpha, C_1..C_m in that order (count = m + 2); round 2
carries just D. Encoding and decoding round-trip bit-exactly.
"""

from __future__ import annotations

from typing import Callable

from .protocol import Round1Msg, Round2Msg

TAG_ROUND1 = 0x01
TAG_ROUND2 = 0x02


class FramingError(ValueError):
    """Malformed or truncated frame; the message carries the byte position."""


def _encode_int(x: int) -> bytes:
    if x < 0:
        raise FramingError(f"cannot encode negative integer {x}")
    mag = x.to_bytes((x.bit_length() + 7) // 8, "big") if x else b""
    return len(mag).to_bytes(4, "big") + mag


def encode_message(msg: Round1Msg | Round2Msg) -> bytes:
    """Serialize a protocol message into one frame."""
    if isinstance(msg, Round1Msg):
        payload = (msg.p, msg.alpha, *msg.C)
        tag = TAG_ROUND1
    elif isinstance(msg, Round2Msg):
        payload = (msg.D,)
        tag = TAG_ROUND2
    else:
        raise FramingError(f"not a wire message: {type(msg).__name__}")
    parts = [bytes([tag]), len(payload).to_bytes(4, "big")]
    parts.extend(_encode_int(x) for x in payload)
    return b"".join(parts)


def read_message(read_exact: Callable[[int], bytes]) -> Round1Msg | Round2Msg:
    """Parse one frame from a byte source.

    ``read_exact(k)`` must return exactly k bytes or raise; byte-stream
    adapters built on sockets or buffers plug in here.
    """
    tag = read_exact(1)[0]
    if tag not in (TAG_ROUND1, TAG_ROUND2):
        raise FramingError(f"unknown message tag 0x{tag:02x} at offset 0")
    count = int.from_bytes(read_exact(4), "big")
    values = []
    for _ in range(count):
        length = int.from_bytes(read_exact(4), "big")
        mag = read_exact(length) if length else b""
        if length and mag[0] == 0:
            raise FramingError("leading zero byte in integer magnitude")
        values.append(int.from_bytes(mag, "big") if mag else 0)
    if tag == TAG_ROUND1:
        if count < 2:
            raise FramingError(f"round 1 frame needs >= 2 integers, got {count}")
        return Round1Msg(p=values[0], alpha=values[1], C=tuple(values[2:]))
    if count != 1:
        raise FramingError(f"round 2 frame needs exactly 1 integer, got {count}")
    return Round2Msg(D=values[0])


def decode_message(data: bytes) -> Round1Msg | Round2Msg:
    """Parse one frame from a complete buffer; trailing bytes are an error."""
    pos = 0

    def read_exact(k: int) -> bytes:
        nonlocal pos
        if pos + k > len(data):
            raise FramingError(
                f"truncated frame at offset {pos}: "
                f"need {k} bytes, have {len(data) - pos}"
            )
        chunk = data[pos : pos + k]
        pos += k
        return chunk

    msg = read_message(read_exact)
    if pos != len(data):
        raise FramingError(f"{len(data) - pos} trailing bytes after offset {pos}")
    return msg
