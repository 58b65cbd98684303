"""Hot integer kernels with an optional numba-compiled fast path.

Every function here is written in njit-compatible style (plain loops over
int64 numpy arrays, no Python containers) and compiled with numba unless the
environment variable ``ORDERLEVEL_NO_NUMBA`` is set to a non-empty value
other than "0", in which case the same source runs as pure Python/numpy.
``benchmarks/bench_kernels.py`` times both paths; when compiled, the original
Python callable stays reachable as ``fn.py_func``.

Node convention for digraph kernels: indices follow the bounded poset, so
node 0 is the bottom and node n-1 the top; the scan source is always node 0,
from which every node is reachable along up-edges.
"""

from __future__ import annotations

import os

import numpy as np

_INF = 1 << 40

_FORCE_PURE = os.environ.get("ORDERLEVEL_NO_NUMBA", "") not in ("", "0")
USE_NUMBA = False
if not _FORCE_PURE:
    try:
        from numba import njit as _njit

        USE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False


def kernel_mode() -> str:
    return "numba" if USE_NUMBA else "pure"


def _compile(fn):
    if USE_NUMBA:
        return _njit(cache=True, nogil=True)(fn)
    return fn


# -- Bellman-Ford ----------------------------------------------------------


def _bellman_ford_arrays(n_nodes, eu, ev, ew, source):
    """Relaxation with predecessors; exact int64 distances.

    Returns (dist, pred, head) where head is the target of an edge that still
    relaxes after n_nodes rounds (-1 when distances converged, i.e. no
    negative cycle reachable from the source).  Unreachable nodes keep the
    sentinel distance 1 << 40.
    """
    dist = np.full(n_nodes, _INF, dtype=np.int64)
    pred = np.full(n_nodes, -1, dtype=np.int64)
    dist[source] = 0
    m = eu.shape[0]
    for _ in range(n_nodes):
        changed = False
        for t in range(m):
            a = eu[t]
            if dist[a] >= _INF:
                continue
            b = ev[t]
            nd = dist[a] + ew[t]
            if nd < dist[b]:
                dist[b] = nd
                pred[b] = a
                changed = True
        if not changed:
            return dist, pred, np.int64(-1)
    for t in range(m):
        a = eu[t]
        if dist[a] < _INF and dist[a] + ew[t] < dist[ev[t]]:
            return dist, pred, ev[t]
    return dist, pred, np.int64(-1)


bellman_ford_arrays = _compile(_bellman_ford_arrays)


def _neg_cycle_masked(n_nodes, up_u, up_v, dn_u, dn_v, mask, dist):
    """Negative-cycle test for the digraph with all up-edges (weight -1) and
    the down-edges selected by the bitmask (weight +1).  dist is scratch."""
    for k in range(n_nodes):
        dist[k] = _INF
    dist[0] = 0
    mu = up_u.shape[0]
    md = dn_u.shape[0]
    for _ in range(n_nodes):
        changed = False
        for t in range(mu):
            a = up_u[t]
            if dist[a] >= _INF:
                continue
            b = up_v[t]
            if dist[a] - 1 < dist[b]:
                dist[b] = dist[a] - 1
                changed = True
        for t in range(md):
            if (mask >> t) & 1:
                a = dn_u[t]
                if dist[a] >= _INF:
                    continue
                b = dn_v[t]
                if dist[a] + 1 < dist[b]:
                    dist[b] = dist[a] + 1
                    changed = True
        if not changed:
            return False
    for t in range(mu):
        a = up_u[t]
        if dist[a] < _INF and dist[a] - 1 < dist[up_v[t]]:
            return True
    for t in range(md):
        if (mask >> t) & 1:
            a = dn_u[t]
            if dist[a] < _INF and dist[a] + 1 < dist[dn_v[t]]:
                return True
    return False


neg_cycle_masked = _compile(_neg_cycle_masked)


def _subset_scan(n_nodes, up_u, up_v, dn_u, dn_v, lmask, start, stop):
    """Scan subset bitmasks in [start, stop) in increasing order.

    Returns the first mask S whose selected-down-edge digraph has no negative
    cycle while the same digraph with the longest-chain down-edges (lmask)
    added does have one; -1 when no mask in the range triggers.
    """
    dist = np.empty(n_nodes, dtype=np.int64)
    for mask in range(start, stop):
        if mask & lmask == lmask:
            # augmentation adds nothing, so the implication cannot fail
            continue
        if neg_cycle_masked(n_nodes, up_u, up_v, dn_u, dn_v, mask, dist):
            continue
        if neg_cycle_masked(n_nodes, up_u, up_v, dn_u, dn_v, mask | lmask, dist):
            return mask
    return -1


subset_scan = _compile(_subset_scan)


# -- strict order-preserving map enumeration --------------------------------
#
# Elements are given in topological positions 0..n-1; preds in CSR layout
# (pred_ptr, pred_idx) refer to positions.  height[k] is the least admissible
# value; up_slack[k] the longest strict chain strictly above the element, so
# values live in [height[k], m - up_slack[k]] given the assigned predecessors.


def _strict_maps_count(n, m, height, up_slack, pred_ptr, pred_idx):
    if n == 0:
        return 1
    cur = np.empty(n, dtype=np.int64)
    hi_arr = np.empty(n, dtype=np.int64)
    count = 0
    k = 0
    cur[0] = height[0]
    hi_arr[0] = m - up_slack[0]
    while k >= 0:
        if cur[k] > hi_arr[k]:
            k -= 1
            if k >= 0:
                cur[k] += 1
            continue
        if k == n - 1:
            count += hi_arr[k] - cur[k] + 1
            cur[k] = hi_arr[k] + 1
            continue
        k += 1
        lo = height[k]
        for t in range(pred_ptr[k], pred_ptr[k + 1]):
            p = pred_idx[t]
            if cur[p] + 1 > lo:
                lo = cur[p] + 1
        cur[k] = lo
        hi_arr[k] = m - up_slack[k]
    return count


strict_maps_count = _compile(_strict_maps_count)


def _strict_maps_fill(n, m, height, up_slack, pred_ptr, pred_idx, out):
    """Write every strict map into out (rows; columns are topo positions)."""
    if n == 0:
        return 0
    cur = np.empty(n, dtype=np.int64)
    hi_arr = np.empty(n, dtype=np.int64)
    row = 0
    k = 0
    cur[0] = height[0]
    hi_arr[0] = m - up_slack[0]
    while k >= 0:
        if cur[k] > hi_arr[k]:
            k -= 1
            if k >= 0:
                cur[k] += 1
            continue
        if k == n - 1:
            for v in range(cur[k], hi_arr[k] + 1):
                for c in range(n - 1):
                    out[row, c] = cur[c]
                out[row, n - 1] = v
                row += 1
            cur[k] = hi_arr[k] + 1
            continue
        k += 1
        lo = height[k]
        for t in range(pred_ptr[k], pred_ptr[k + 1]):
            p = pred_idx[t]
            if cur[p] + 1 > lo:
                lo = cur[p] + 1
        cur[k] = lo
        hi_arr[k] = m - up_slack[k]
    return row


strict_maps_fill = _compile(_strict_maps_fill)


def _weak_maps_count(n, m, pred_ptr, pred_idx):
    """Count order-preserving maps into [1, m] by leaf enumeration.

    Exponential in the output count; kept as the independent oracle for the
    transfer-matrix counter and for small direct evaluations.
    """
    if n == 0:
        return 1
    if m <= 0:
        return 0
    cur = np.empty(n, dtype=np.int64)
    hi_arr = np.empty(n, dtype=np.int64)
    count = 0
    k = 0
    cur[0] = 1
    hi_arr[0] = m
    while k >= 0:
        if cur[k] > hi_arr[k]:
            k -= 1
            if k >= 0:
                cur[k] += 1
            continue
        if k == n - 1:
            count += hi_arr[k] - cur[k] + 1
            cur[k] = hi_arr[k] + 1
            continue
        k += 1
        lo = 1
        for t in range(pred_ptr[k], pred_ptr[k + 1]):
            p = pred_idx[t]
            if cur[p] > lo:
                lo = cur[p]
        cur[k] = lo
        hi_arr[k] = m
    return count


weak_maps_count = _compile(_weak_maps_count)


# -- decomposition search ----------------------------------------------------


def _first_nondecomposable(xs, ys, gap, cov_a, cov_b):
    """Index of the first row of xs with no row y of ys such that x - y is a
    lattice point of the gap-th dilate (coordinates in [0, gap], weakly
    monotone along the covers); -1 when every row decomposes."""
    d = xs.shape[1]
    ne = cov_a.shape[0]
    for i in range(xs.shape[0]):
        found = False
        for j in range(ys.shape[0]):
            good = True
            for c in range(d):
                t = xs[i, c] - ys[j, c]
                if t < 0 or t > gap:
                    good = False
                    break
            if good:
                for e in range(ne):
                    da = xs[i, cov_a[e]] - ys[j, cov_a[e]]
                    db = xs[i, cov_b[e]] - ys[j, cov_b[e]]
                    if da > db:
                        good = False
                        break
            if good:
                found = True
                break
        if not found:
            return i
    return -1


first_nondecomposable = _compile(_first_nondecomposable)


def _scan_nondecomposable(
    n, m, height, up_slack, pred_ptr, pred_idx, ys, gap, cov_a, cov_b, out_row
):
    """Fused strict-map enumeration plus decomposition test.

    Enumerates the strict maps into [1, m] exactly as _strict_maps_fill does
    (columns are topo positions, ys and covers likewise) without materializing
    them, testing each against the candidate rows ys.  Returns the leaf index
    of the first map x such that no y has x - y in the gap-th dilate, filling
    out_row with x; -1 when every map decomposes.
    """
    if n == 0:
        return -1
    cur = np.empty(n, dtype=np.int64)
    hi_arr = np.empty(n, dtype=np.int64)
    ne = cov_a.shape[0]
    leaf = 0
    k = 0
    cur[0] = height[0]
    hi_arr[0] = m - up_slack[0]
    while k >= 0:
        if cur[k] > hi_arr[k]:
            k -= 1
            if k >= 0:
                cur[k] += 1
            continue
        if k == n - 1:
            for v in range(cur[k], hi_arr[k] + 1):
                cur[n - 1] = v
                found = False
                for j in range(ys.shape[0]):
                    good = True
                    for c in range(n):
                        t = cur[c] - ys[j, c]
                        if t < 0 or t > gap:
                            good = False
                            break
                    if good:
                        for e in range(ne):
                            da = cur[cov_a[e]] - ys[j, cov_a[e]]
                            db = cur[cov_b[e]] - ys[j, cov_b[e]]
                            if da > db:
                                good = False
                                break
                    if good:
                        found = True
                        break
                if not found:
                    for c in range(n):
                        out_row[c] = cur[c]
                    return leaf
                leaf += 1
            cur[n - 1] = hi_arr[n - 1] + 1
            continue
        k += 1
        lo = height[k]
        for t in range(pred_ptr[k], pred_ptr[k + 1]):
            p = pred_idx[t]
            if cur[p] + 1 > lo:
                lo = cur[p] + 1
        cur[k] = lo
        hi_arr[k] = m - up_slack[k]
    return -1


scan_nondecomposable = _compile(_scan_nondecomposable)


# -- alcoved lattice enumeration ---------------------------------------------
#
# M is the tightened (n x n) bound matrix over coordinates z_0..z_{n-1} with
# z_0 = 0 and z_i - z_j <= M[i, j].  Because M is shortest-path closed, the
# coordinate window at each level is never empty, so the walk never dead-ends
# and runs in output-linear time.


def _alcoved_count(mat):
    n = mat.shape[0]
    if n == 1:
        return 1
    z = np.zeros(n, dtype=np.int64)
    hi_arr = np.zeros(n, dtype=np.int64)
    count = 0
    k = 1
    z[1] = -mat[0, 1]
    hi_arr[1] = mat[1, 0]
    while k >= 1:
        if z[k] > hi_arr[k]:
            k -= 1
            if k >= 1:
                z[k] += 1
            continue
        if k == n - 1:
            count += hi_arr[k] - z[k] + 1
            z[k] = hi_arr[k] + 1
            continue
        k += 1
        lo = -mat[0, k]
        hi = mat[k, 0]
        for j in range(1, k):
            a = z[j] - mat[j, k]
            if a > lo:
                lo = a
            b = z[j] + mat[k, j]
            if b < hi:
                hi = b
        z[k] = lo
        hi_arr[k] = hi
    return count


alcoved_count = _compile(_alcoved_count)


def _alcoved_fill(mat, out):
    n = mat.shape[0]
    if n == 1:
        return 0
    z = np.zeros(n, dtype=np.int64)
    hi_arr = np.zeros(n, dtype=np.int64)
    row = 0
    k = 1
    z[1] = -mat[0, 1]
    hi_arr[1] = mat[1, 0]
    while k >= 1:
        if z[k] > hi_arr[k]:
            k -= 1
            if k >= 1:
                z[k] += 1
            continue
        if k == n - 1:
            for v in range(z[k], hi_arr[k] + 1):
                for c in range(1, n - 1):
                    out[row, c - 1] = z[c]
                out[row, n - 2] = v
                row += 1
            z[k] = hi_arr[k] + 1
            continue
        k += 1
        lo = -mat[0, k]
        hi = mat[k, 0]
        for j in range(1, k):
            a = z[j] - mat[j, k]
            if a > lo:
                lo = a
            b = z[j] + mat[k, j]
            if b < hi:
                hi = b
        z[k] = lo
        hi_arr[k] = hi
    return row


alcoved_fill = _compile(_alcoved_fill)


def _floyd_warshall(mat):
    """In-place all-pairs tightening; returns False when a negative cycle
    (infeasible system) is found.  _INF entries mean 'no constraint'."""
    n = mat.shape[0]
    for k in range(n):
        for i in range(n):
            if mat[i, k] >= _INF:
                continue
            for j in range(n):
                if mat[k, j] >= _INF:
                    continue
                s = mat[i, k] + mat[k, j]
                if s < mat[i, j]:
                    mat[i, j] = s
    for i in range(n):
        if mat[i, i] < 0:
            return False
    return True


floyd_warshall = _compile(_floyd_warshall)

INF = _INF
