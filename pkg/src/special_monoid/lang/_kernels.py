"""CYK inner loops.

Two interchangeable implementations of the same recognizer over integer
CNF tables.  The numba one keeps each chart cell as a bitset of
nonterminals; the numpy one keeps boolean rows and vectorizes over split
points and rules.  Set ``SPECIAL_MONOID_NO_NUMBA=1`` to force numpy.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and os.environ.get("SPECIAL_MONOID_NO_NUMBA", "") in ("", "0")


def cyk_numpy(codes, n_nt, start, uptr, uheads, rules):
    n = len(codes)
    table = np.zeros((n, n + 1, n_nt), dtype=bool)
    for i in range(n):
        t = codes[i]
        table[i, 1, uheads[uptr[t]:uptr[t + 1]]] = True
    if len(rules) == 0:
        return bool(n == 1 and table[0, 1, start])
    A, B, C = rules[:, 0], rules[:, 1], rules[:, 2]
    for length in range(2, n + 1):
        ks = np.arange(1, length)
        for i in range(n - length + 1):
            left = table[i, ks][:, B]
            right = table[i + ks, length - ks][:, C]
            hit = (left & right).any(axis=0)
            if hit.any():
                table[i, length, A[hit]] = True
    return bool(table[0, n, start])


if numba is not None:
    _DEBRUIJN = np.array([
        0, 1, 48, 2, 57, 49, 28, 3, 61, 58, 50, 42, 38, 29, 17, 4,
        62, 55, 59, 36, 53, 51, 43, 22, 45, 39, 33, 30, 24, 18, 12, 5,
        63, 47, 56, 27, 60, 41, 37, 16, 54, 35, 52, 21, 44, 32, 23, 11,
        46, 26, 40, 15, 34, 20, 31, 10, 25, 14, 19, 9, 13, 8, 7, 6], dtype=np.int64)

    @numba.njit(cache=True)
    def _cyk_bits(codes, n_nt, start, uptr, uheads, rule_ptr, rule_c, rule_a, debruijn):
        n = codes.shape[0]
        words = (n_nt + 63) // 64
        table = np.zeros((n, n + 1, words), dtype=np.uint64)
        filled = np.zeros((n, n + 1), dtype=np.bool_)
        one = np.uint64(1)
        magic = np.uint64(0x03F79D71B4CB0A89)
        for i in range(n):
            t = codes[i]
            for j in range(uptr[t], uptr[t + 1]):
                h = uheads[j]
                table[i, 1, h >> 6] |= one << np.uint64(h & 63)
                filled[i, 1] = True
        for length in range(2, n + 1):
            for i in range(n - length + 1):
                for k in range(1, length):
                    if not filled[i, k] or not filled[i + k, length - k]:
                        continue
                    for w in range(words):
                        x = table[i, k, w]
                        while x != 0:
                            low = x & (~x + one)
                            b = w * 64 + debruijn[np.int64((low * magic) >> np.uint64(58))]
                            x ^= low
                            for r in range(rule_ptr[b], rule_ptr[b + 1]):
                                c = rule_c[r]
                                if (table[i + k, length - k, c >> 6] >> np.uint64(c & 63)) & one:
                                    a = rule_a[r]
                                    table[i, length, a >> 6] |= one << np.uint64(a & 63)
                                    filled[i, length] = True
        return (table[0, n, start >> 6] >> np.uint64(start & 63)) & one == one


def cyk_run(codes, tables, force: str | None = None) -> bool:
    """Dispatch on ``force`` (``"numba"``/``"numpy"``) or the module default."""
    codes = np.asarray(codes, dtype=np.int64)
    use_numba = USE_NUMBA if force is None else force == "numba"
    if use_numba and numba is not None:
        return bool(_cyk_bits(codes, tables.n_nonterminals, tables.start, tables.unary_ptr,
                              tables.unary_heads, tables.rule_ptr, tables.rule_c, tables.rule_a,
                              _DEBRUIJN))
    return cyk_numpy(codes, tables.n_nonterminals, tables.start, tables.unary_ptr,
                     tables.unary_heads, tables.rules)
