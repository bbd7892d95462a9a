"""Numba-accelerated kernel for the canonical-code minimisation.

Pure machinery: mirrors code._min_code_py exactly and is cross-checked
against it in the tests.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np
from numba import njit

_PERM_ARRAYS = {}


def _perm_array(ncol):
    try:
        return _PERM_ARRAYS[ncol]
    except KeyError:
        arr = np.array(list(permutations(range(ncol))), dtype=np.int32)
        _PERM_ARRAYS[ncol] = arr
        return arr


@njit(cache=True)
def _kernel(match, order, perms):  # pragma: no cover - exercised via wrapper
    ncol = match.shape[0]
    nperm = perms.shape[0]
    length = ncol * order
    best = np.empty(length, np.int32)
    cand = np.empty(length, np.int32)
    num = np.empty(order + 1, np.int32)
    old = np.empty(order + 1, np.int32)
    have = False
    best_root = 0
    best_perm = 0
    for root in range(1, order + 1):
        for pidx in range(nperm):
            for i in range(order + 1):
                num[i] = 0
            num[root] = 1
            old[1] = root
            nxt = 2
            cur = 1
            while nxt <= order:
                v = old[cur]
                advanced = False
                for k in range(ncol):
                    w = match[perms[pidx, k], v]
                    if num[w] == 0:
                        num[w] = nxt
                        old[nxt] = w
                        nxt += 1
                        advanced = True
                        break
                if not advanced:
                    cur += 1
                    if cur >= nxt:
                        return best, -1, -1  # disconnected
            if not have:
                idx = 0
                for k in range(ncol):
                    c = perms[pidx, k]
                    for nv in range(1, order + 1):
                        best[idx] = num[match[c, old[nv]]]
                        idx += 1
                have = True
                best_root = root
                best_perm = pidx
            else:
                idx = 0
                better = False
                worse = False
                for k in range(ncol):
                    c = perms[pidx, k]
                    for nv in range(1, order + 1):
                        val = num[match[c, old[nv]]]
                        if not better:
                            b = best[idx]
                            if val > b:
                                worse = True
                                break
                            if val < b:
                                better = True
                        cand[idx] = val
                        idx += 1
                    if worse:
                        break
                if better:
                    for i in range(length):
                        best[i] = cand[i]
                    best_root = root
                    best_perm = pidx
    return best, best_root, best_perm


def min_code_seq(matchings, order, ncol):
    match = np.empty((ncol, order + 1), dtype=np.int32)
    for c in range(ncol):
        match[c, :] = matchings[c]
    perms = _perm_array(ncol)
    best, root, pidx = _kernel(match, order, perms)
    if root < 0:
        from .errors import Disconnected

        raise Disconnected("rooted numbering did not cover the graph")
    return [int(x) for x in best], int(root), tuple(int(x) for x in perms[pidx])
