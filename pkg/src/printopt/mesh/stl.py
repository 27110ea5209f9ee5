"""STL reading and writing.

Handles both binary and ASCII variants. Vertices are deduplicated with an
exact-coordinate keying so shared corners collapse into an indexed mesh.
"""

from __future__ import annotations

import os
import struct
from io import BufferedIOBase

import numpy as np

from ..errors import STLParseError
from .core import TriangleMesh, build_mesh

_HEADER_LEN = 80
_RECORD = struct.Struct("<12fH")


def parse_mesh(source: str | os.PathLike | bytes | BufferedIOBase, name: str = "") -> TriangleMesh:
    """Parse an STL file, path, bytes blob, or binary stream."""
    if isinstance(source, bytes):
        data = source
        if not name:
            name = "<bytes>"
    elif hasattr(source, "read"):
        data = source.read()
        if not name:
            name = getattr(source, "name", "<stream>")
    else:
        with open(source, "rb") as fh:
            data = fh.read()
        if not name:
            name = os.path.basename(os.fspath(source))
    if len(data) < 5:
        raise STLParseError("file too short to be STL", offset=0)
    if _looks_ascii(data):
        tris = _parse_ascii(data)
    else:
        tris = _parse_binary(data)
    return _index_triangles(tris, name=name)


def _looks_ascii(data: bytes) -> bool:
    # A binary file whose header happens to start with "solid" is a known
    # hazard; require an ASCII "facet" token to appear early as well.
    head = data[:512].lstrip()
    if not head.lower().startswith(b"solid"):
        return False
    return b"facet" in data[:1024].lower() or data.rstrip().lower().endswith(b"endsolid") or len(data) < _HEADER_LEN + 4


def _parse_binary(data: bytes) -> np.ndarray:
    if len(data) < _HEADER_LEN + 4:
        raise STLParseError("binary STL truncated before the facet count", offset=len(data))
    (count,) = struct.unpack_from("<I", data, _HEADER_LEN)
    expected = _HEADER_LEN + 4 + count * _RECORD.size
    if len(data) < expected:
        raise STLParseError(
            f"binary STL truncated: header promises {count} facets", offset=len(data)
        )
    if count == 0:
        raise STLParseError("binary STL declares zero facets", offset=_HEADER_LEN)
    raw = np.frombuffer(
        data, dtype=np.uint8, count=count * _RECORD.size, offset=_HEADER_LEN + 4
    )
    records = raw.reshape(count, _RECORD.size)
    floats = records[:, :48].copy().view("<f4").reshape(count, 12)
    tris = floats[:, 3:12].astype(np.float64).reshape(count, 3, 3)
    if not np.isfinite(tris).all():
        bad = int(np.nonzero(~np.isfinite(tris).all(axis=(1, 2)))[0][0])
        raise STLParseError(
            f"facet {bad} contains non-finite coordinates",
            offset=_HEADER_LEN + 4 + bad * _RECORD.size,
        )
    return tris


def _parse_ascii(data: bytes) -> np.ndarray:
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise STLParseError("ASCII STL contains non-ASCII bytes", offset=exc.start) from None
    tris: list[list[float]] = []
    current: list[float] = []
    offset = 0
    for line in text.splitlines(keepends=True):
        stripped = line.strip()
        if stripped.startswith("vertex"):
            parts = stripped.split()
            if len(parts) != 4:
                raise STLParseError("malformed vertex line", offset=offset)
            try:
                current.extend(float(p) for p in parts[1:])
            except ValueError:
                raise STLParseError("non-numeric vertex coordinate", offset=offset) from None
        elif stripped.startswith("endfacet"):
            if len(current) != 9:
                raise STLParseError(
                    f"facet has {len(current) // 3} vertices, expected 3", offset=offset
                )
            tris.append(current)
            current = []
        offset += len(line)
    if current:
        raise STLParseError("unterminated facet at end of file", offset=len(data))
    if not tris:
        raise STLParseError("ASCII STL contains no facets", offset=0)
    arr = np.array(tris, dtype=np.float64).reshape(len(tris), 3, 3)
    if not np.isfinite(arr).all():
        raise STLParseError("ASCII STL contains non-finite coordinates", offset=0)
    return arr


def _index_triangles(tris: np.ndarray, name: str) -> TriangleMesh:
    flat = tris.reshape(-1, 3)
    vertices, inverse = np.unique(flat, axis=0, return_inverse=True)
    triangles = inverse.reshape(-1, 3).astype(np.int32)
    return build_mesh(vertices, triangles, name=name)


def write_binary(mesh: TriangleMesh, path: str | os.PathLike, header: str = "printopt") -> None:
    """Write a mesh as binary STL (recomputed normals, float32 records)."""
    corners = mesh.face_corners().astype(np.float32)
    normals = mesh.normals.astype(np.float32)
    count = len(corners)
    buf = bytearray()
    buf += header.encode("ascii")[:_HEADER_LEN].ljust(_HEADER_LEN, b"\0")
    buf += struct.pack("<I", count)
    record = np.zeros((count, 50), dtype=np.uint8)
    payload = np.concatenate([normals, corners.reshape(count, 9)], axis=1).astype("<f4")
    record[:, :48] = payload.view(np.uint8).reshape(count, 48)
    buf += record.tobytes()
    with open(path, "wb") as fh:
        fh.write(buf)
