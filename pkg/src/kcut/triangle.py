"""Tripartite auxiliary graphs and minimum-weight triangle search."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any, Sequence

import numpy as np

from ._backend import kernels

BLOCK_CELLS = 1 << 21


@dataclass(frozen=True, eq=False)
class TripartiteAux:
    """Three node parts with dense weight/mask matrices between consecutive parts.

    ``w12[i, j]`` is the weight of the edge between node ``i`` of part 1 and
    node ``j`` of part 2 and exists only where ``m12`` is set; likewise for
    ``w23`` (part 2 to part 3) and ``w31`` (part 3 to part 1).
    """

    parts: tuple[Sequence[Any], Sequence[Any], Sequence[Any]]
    w12: np.ndarray
    w23: np.ndarray
    w31: np.ndarray
    m12: np.ndarray
    m23: np.ndarray
    m31: np.ndarray
    cap: int | None = None

    @property
    def sizes(self) -> tuple[int, int, int]:
        return tuple(len(p) for p in self.parts)  # type: ignore[return-value]

    def edge_count(self) -> int:
        return int(self.m12.sum() + self.m23.sum() + self.m31.sum())

    def weight(self, i: int, j: int, l: int) -> int | None:
        """Total weight of triangle ``(i, j, l)`` or ``None`` if an edge is missing."""
        if not (self.m12[i, j] and self.m23[j, l] and self.m31[l, i]):
            return None
        return int(self.w12[i, j] + self.w23[j, l] + self.w31[l, i])


def make_aux(parts, w12, w23, w31, m12=None, m23=None, m31=None, cap=None) -> TripartiteAux:
    def prep(w):
        return np.ascontiguousarray(np.asarray(w, dtype=np.int64))

    def mask(m, w):
        if m is None:
            return np.ones(w.shape, dtype=np.uint8)
        return np.ascontiguousarray(np.asarray(m, dtype=np.uint8))

    w12, w23, w31 = prep(w12), prep(w23), prep(w31)
    a, b, c = (len(p) for p in parts)
    if w12.shape != (a, b) or w23.shape != (b, c) or w31.shape != (c, a):
        raise ValueError("weight matrix shapes do not match part sizes")
    return TripartiteAux(tuple(parts), w12, w23, w31, mask(m12, w12), mask(m23, w23), mask(m31, w31), cap)


def _blocked(H: TripartiteAux):
    a, b, c = H.sizes
    if a == 0 or b == 0 or c == 0:
        return None
    big = 3 * int(max(np.abs(H.w12).max(initial=0), np.abs(H.w23).max(initial=0), np.abs(H.w31).max(initial=0))) + 1
    w13 = H.w31.T
    m13 = H.m31.T.astype(bool)
    m12 = H.m12.astype(bool)
    m23 = H.m23.astype(bool)
    rows = max(1, BLOCK_CELLS // max(1, b * c))
    best = None
    for start in range(0, a, rows):
        stop = min(a, start + rows)
        total = H.w12[start:stop, :, None] + H.w23[None, :, :] + w13[start:stop, None, :]
        valid = m12[start:stop, :, None] & m23[None, :, :] & m13[start:stop, None, :]
        if not valid.any():
            continue
        total = np.where(valid, total, big)
        flat = int(np.argmin(total))
        value = int(total.flat[flat])
        if value >= big:
            continue
        if best is None or value < best[0]:
            i, rem = divmod(flat, b * c)
            j, l = divmod(rem, c)
            best = (value, start + i, j, l)
    return best


def min_weight_triangle(H: TripartiteAux, strategy: str = "naive"):
    """Minimum-weight triangle as ``((i, j, l), value)`` or ``None``.

    Ties are broken towards the lexicographically smallest ``(i, j, l)``.
    ``strategy`` selects the scan: ``"naive"`` (triple loop, compiled when
    available) or ``"blocked"`` (vectorised min over row blocks).
    """
    if strategy == "naive":
        res = kernels.triangle_min(H.w12, H.w23, H.w31, H.m12, H.m23, H.m31)
    elif strategy == "blocked":
        res = _blocked(H)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if res is None:
        return None
    value, i, j, l = res
    return (i, j, l), value


def cap_aux_weights(H: TripartiteAux, cap: int | float | None) -> TripartiteAux:
    """Drop every edge heavier than ``cap`` (``None`` or ``inf`` keeps all)."""
    if cap is None or cap == float("inf"):
        return H
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    return replace(
        H,
        m12=(H.m12.astype(bool) & (H.w12 <= cap)).astype(np.uint8),
        m23=(H.m23.astype(bool) & (H.w23 <= cap)).astype(np.uint8),
        m31=(H.m31.astype(bool) & (H.w31 <= cap)).astype(np.uint8),
        cap=int(cap),
    )
