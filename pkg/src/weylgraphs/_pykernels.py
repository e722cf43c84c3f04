"""Pure-Python implementations of the hot kernels.

These define the reference semantics; ``_ckernels`` must agree exactly.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def canon_search(n: int, mat: list[list[int]], colors: list[int]) -> tuple[list[int], int]:
    """Lexicographically least encoding over colour-respecting orderings.

    Vertices are placed into positions ``0..n-1``; position ``d`` may only
    receive a vertex whose colour equals ``sorted(colors)[d]``.  Placing the
    vertex at position ``d`` emits ``M[d][d]`` and then ``M[j][d], M[d][j]``
    for every earlier position ``j``.  Returns the least emitted sequence and
    the number of orderings that produce it.
    """
    need = sorted(colors)
    total = n * n
    seq = [0] * total
    best: list[int] | None = None
    count = 0
    placed = [0] * n
    used = [False] * n
    less = [False] * (n + 1)

    def rec(d: int, off: int) -> None:
        nonlocal best, count
        if d == n:
            if best is None or less[d]:
                best = seq[:]
                count = 1
                for i in range(n + 1):
                    less[i] = False
            else:
                count += 1
            return
        for v in range(n):
            if used[v] or colors[v] != need[d]:
                continue
            row = mat[v]
            k = off
            seq[k] = row[v]
            k += 1
            for j in range(d):
                w = placed[j]
                seq[k] = mat[w][v]
                seq[k + 1] = row[w]
                k += 2
            state = less[d]
            if best is not None and not state:
                worse = False
                for i in range(off, k):
                    if seq[i] != best[i]:
                        if seq[i] < best[i]:
                            state = True
                        else:
                            worse = True
                        break
                if worse:
                    continue
            less[d + 1] = state
            used[v] = True
            placed[d] = v
            rec(d + 1, k)
            used[v] = False

    rec(0, 0)
    return (best if best is not None else []), count


def mul2(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    """Truncated product of two bivariate coefficient arrays."""
    out = np.zeros((a.shape[0], a.shape[1]), dtype=np.complex128)
    for i in range(order + 1):
        for j in range(order + 1 - i):
            c = a[i, j]
            if c == 0:
                continue
            for p in range(order + 1 - i - j):
                out[i + p, j : order + 1 - i - p] += c * b[p, : order + 1 - i - j - p]
    return out
