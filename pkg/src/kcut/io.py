"""Reading and writing the plain-text graph format.

The first non-comment line is ``n m`` (optionally ``n m k``), followed by
``m`` lines ``u v w`` with 0-based ids and positive integer weights. Blank
lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

from typing import TextIO

from .graph import GraphError, KCutError, WeightedGraph, build_graph


class ParseError(KCutError):
    def __init__(self, message: str, line: int | None = None, source: str = "<input>"):
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)
        self.line = line


def _ints(text: str, line: int, source: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split()]
    except ValueError:
        raise ParseError(f"expected integers, got {text.strip()!r}", line, source) from None


def parse_text(text: str, source: str = "<input>") -> tuple[WeightedGraph, int | None]:
    header = None
    edges = []
    edge_lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        nums = _ints(stripped, lineno, source)
        if header is None:
            if len(nums) not in (2, 3):
                raise ParseError("header must be 'n m' or 'n m k'", lineno, source)
            header = nums
            continue
        if len(nums) != 3:
            raise ParseError("edge lines must be 'u v w'", lineno, source)
        u, v, w = nums
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno, source)
        n = header[0]
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex out of range 0..{n - 1}", lineno, source)
        if w < 1:
            raise ParseError(f"weight must be a positive integer, got {w}", lineno, source)
        edges.append((u, v, w))
        edge_lines.append(lineno)
    if header is None:
        raise ParseError("missing 'n m' header", None, source)
    n, m = header[0], header[1]
    if n < 1:
        raise ParseError("n must be positive", None, source)
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges but {len(edges)} were given", None, source)
    try:
        G = build_graph(n, edges)
    except GraphError as exc:
        raise ParseError(str(exc), None, source) from None
    k = header[2] if len(header) == 3 else None
    return G, k


def parse_instance(path: str) -> tuple[WeightedGraph, int | None]:
    """Graph and optional ``k`` from a file; errors name the offending line."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read file ({exc.strerror})", None, path) from None
    return parse_text(text, path)


def write_graph(fh: TextIO, G: WeightedGraph, k: int | None = None, comment: str | None = None) -> None:
    if comment:
        fh.write(f"# {comment}\n")
    fh.write(f"{G.n} {G.m}" + (f" {k}" if k is not None else "") + "\n")
    for u, v, w in G.edges:
        fh.write(f"{u} {v} {w}\n")
