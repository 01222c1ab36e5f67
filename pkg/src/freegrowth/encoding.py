"""Canonical byte encoding of element payloads.

Payloads are nested structures of ints and tuples.  The encoding is
injective by construction (type tags plus explicit lengths), so byte
equality is payload equality and byte order gives a stable, reproducible
ordering for sets and reports.
"""

from __future__ import annotations


def canonical_encode(payload) -> bytes:
    """Injective, deterministic byte encoding of a payload."""
    out = bytearray()
    _encode_into(payload, out)
    return bytes(out)


def _encode_into(obj, out: bytearray) -> None:
    if isinstance(obj, bool):  # bools are ints; payloads never contain them
        raise TypeError("bool is not a valid payload")
    if isinstance(obj, int):
        out += b"i%d;" % obj
    elif isinstance(obj, tuple):
        out += b"t%d:" % len(obj)
        for item in obj:
            _encode_into(item, out)
    else:
        raise TypeError(f"unencodable payload component: {obj!r}")


def canonical_decode(data: bytes):
    """Inverse of :func:`canonical_encode`."""
    payload, pos = _decode_from(data, 0)
    if pos != len(data):
        raise ValueError("trailing bytes after payload")
    return payload


def _decode_from(data: bytes, pos: int):
    tag = data[pos : pos + 1]
    if tag == b"i":
        end = data.index(b";", pos)
        return int(data[pos + 1 : end]), end + 1
    if tag == b"t":
        end = data.index(b":", pos)
        count = int(data[pos + 1 : end])
        pos = end + 1
        items = []
        for _ in range(count):
            item, pos = _decode_from(data, pos)
            items.append(item)
        return tuple(items), pos
    raise ValueError(f"bad tag {tag!r} at offset {pos}")
