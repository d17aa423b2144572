"""graph6 serialisation (short form, up to 62 vertices).

The order byte is chr(n + 63); edge bits follow the upper triangle
column by column, packed big-endian into 6-bit groups offset by 63.
"""
from __future__ import annotations

from .graphs import Graph, from_edges

_HEADER = ">>graph6<<"


def encode(g: Graph) -> str:
    if g.n > 62:
        raise ValueError("graph6 short form stops at 62 vertices")
    out = [chr(g.n + 63)]
    bit_acc = 0
    nbits = 0
    for v in range(1, g.n):
        for u in range(v):
            bit_acc = bit_acc << 1 | (g.adj[u] >> v & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(bit_acc + 63))
                bit_acc, nbits = 0, 0
    if nbits:
        out.append(chr((bit_acc << (6 - nbits)) + 63))
    return "".join(out)


def decode(text: str) -> Graph:
    s = text.strip()
    if s.startswith(_HEADER):
        s = s[len(_HEADER):]
    if not s:
        raise ValueError("empty graph6 string")
    n = ord(s[0]) - 63
    if not 0 <= n <= 62:
        raise ValueError(f"unsupported graph6 order byte {s[0]!r}")
    need = (n * (n - 1) // 2 + 5) // 6
    data = s[1:]
    if len(data) != need:
        raise ValueError(f"graph6 body has {len(data)} bytes, expected {need}")
    bits = 0
    for ch in data:
        val = ord(ch) - 63
        if not 0 <= val < 64:
            raise ValueError(f"byte {ch!r} outside graph6 range")
        bits = bits << 6 | val
    total = len(data) * 6
    edges = []
    idx = 0
    for v in range(1, n):
        for u in range(v):
            if bits >> (total - 1 - idx) & 1:
                edges.append((u, v))
            idx += 1
    return from_edges(n, edges)


def write_file(graphs, path) -> None:
    with open(path, "w") as fh:
        for g in graphs:
            fh.write(encode(g) + "\n")


def read_file(path) -> list[Graph]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                out.append(decode(line))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return out
