# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense float transportation simplex.

Hot path for large float-mode problems.  Same contract as the pure
fallback (_core_py.solve_dense): balanced float supplies/demands, finite
costs, returns (plan, pivot count).

Entering cells come from a wraparound block search over the reduced costs
(best candidate within the first block containing one); after a long
degenerate stall the rule drops to least-index to rule out cycling.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

KERNEL_NAME = "compiled"


def solve_dense(a_in, b_in, C_in, double tol):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a = np.ascontiguousarray(a_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] b = np.ascontiguousarray(b_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] C = np.ascontiguousarray(C_in, dtype=np.float64)
    cdef Py_ssize_t n = C.shape[0]
    cdef Py_ssize_t m = C.shape[1]
    cdef Py_ssize_t nb = n + m - 1
    cdef Py_ssize_t nodes = n + m

    cdef cnp.ndarray[cnp.int64_t, ndim=1] bi = np.empty(nb, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] bj = np.empty(nb, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bf = np.empty(nb, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] basic_at = np.full((n, m), -1, dtype=np.int64)

    cdef cnp.ndarray[cnp.float64_t, ndim=1] supply = a.copy()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] demand = b.copy()

    # north-west corner start
    cdef Py_ssize_t i = 0, j = 0, k = 0
    cdef double q
    while True:
        q = supply[i] if supply[i] < demand[j] else demand[j]
        bi[k] = i
        bj[k] = j
        bf[k] = q
        basic_at[i, j] = k
        k += 1
        supply[i] -= q
        demand[j] -= q
        if i == n - 1 and j == m - 1:
            break
        if supply[i] <= 0 and i < n - 1:
            i += 1
        elif demand[j] <= 0 and j < m - 1:
            j += 1
        elif i < n - 1:
            i += 1
        else:
            j += 1

    # scratch arrays reused across pivots
    cdef cnp.ndarray[cnp.float64_t, ndim=1] u = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v = np.empty(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] seen = np.empty(nodes, dtype=np.uint8)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] deg = np.empty(nodes, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] off = np.empty(nodes + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] adj_cell = np.empty(2 * nb, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] fill = np.empty(nodes, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] stack = np.empty(nodes, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] parent_cell = np.empty(nodes, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] parent_node = np.empty(nodes, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] path = np.empty(nodes, dtype=np.int64)

    cdef Py_ssize_t total_arcs = n * m
    cdef Py_ssize_t block = <Py_ssize_t>(total_arcs ** 0.5)
    if block < 64:
        block = 64

    cdef Py_ssize_t iterations = 0, stall = 0
    cdef Py_ssize_t max_iter = 20000 + 200 * nodes
    cdef bint bland = 0

    cdef Py_ssize_t t, node, nxt, cell, top, scanned, pos, start_pos
    cdef Py_ssize_t ei, ej, best, path_len, leave, li, lj
    cdef double rc, best_rc, theta, f
    cdef Py_ssize_t scan_pos = 0
    cdef int sign

    while True:
        # adjacency of the basis tree (counting-sort layout)
        for node in range(nodes):
            deg[node] = 0
        for t in range(nb):
            deg[bi[t]] += 1
            deg[n + bj[t]] += 1
        off[0] = 0
        for node in range(nodes):
            off[node + 1] = off[node] + deg[node]
            fill[node] = off[node]
        for t in range(nb):
            adj_cell[fill[bi[t]]] = t
            fill[bi[t]] += 1
            adj_cell[fill[n + bj[t]]] = t
            fill[n + bj[t]] += 1

        # duals by tree traversal from row 0
        for node in range(nodes):
            seen[node] = 0
        u[0] = 0.0
        seen[0] = 1
        stack[0] = 0
        top = 1
        while top > 0:
            top -= 1
            node = stack[top]
            for t in range(off[node], off[node + 1]):
                cell = adj_cell[t]
                nxt = (n + bj[cell]) if node < n else bi[cell]
                if not seen[nxt]:
                    seen[nxt] = 1
                    if nxt < n:
                        u[nxt] = C[bi[cell], bj[cell]] - v[bj[cell]]
                    else:
                        v[nxt - n] = C[bi[cell], bj[cell]] - u[bi[cell]]
                    stack[top] = nxt
                    top += 1

        # entering arc
        ei = -1
        ej = -1
        if bland:
            for pos in range(total_arcs):
                i = pos // m
                j = pos - i * m
                if basic_at[i, j] >= 0:
                    continue
                rc = C[i, j] - u[i] - v[j]
                if rc < -tol:
                    ei = i
                    ej = j
                    break
        else:
            best_rc = -tol
            scanned = 0
            start_pos = scan_pos
            while scanned < total_arcs:
                pos = scan_pos
                # one block
                for t in range(block):
                    if scanned >= total_arcs:
                        break
                    i = pos // m
                    j = pos - i * m
                    if basic_at[i, j] < 0:
                        rc = C[i, j] - u[i] - v[j]
                        if rc < best_rc:
                            best_rc = rc
                            ei = i
                            ej = j
                    pos += 1
                    if pos == total_arcs:
                        pos = 0
                    scanned += 1
                scan_pos = pos
                if ei >= 0:
                    break
        if ei < 0:
            break

        iterations += 1
        if iterations > max_iter:
            raise RuntimeError("float simplex exceeded pivot limit")

        # cycle: tree path from row node ei to column node n + ej
        for node in range(nodes):
            seen[node] = 0
        seen[ei] = 1
        parent_node[ei] = -1
        stack[0] = ei
        top = 1
        while top > 0:
            top -= 1
            node = stack[top]
            if node == n + ej:
                break
            for t in range(off[node], off[node + 1]):
                cell = adj_cell[t]
                nxt = (n + bj[cell]) if node < n else bi[cell]
                if not seen[nxt]:
                    seen[nxt] = 1
                    parent_node[nxt] = node
                    parent_cell[nxt] = cell
                    stack[top] = nxt
                    top += 1

        path_len = 0
        node = n + ej
        while parent_node[node] >= 0:
            path[path_len] = parent_cell[node]
            path_len += 1
            node = parent_node[node]

        # theta and leaving arc (least index on ties)
        theta = -1.0
        leave = -1
        sign = -1
        for t in range(path_len):
            cell = path[t]
            if sign < 0:
                f = bf[cell]
                if leave < 0 or f < theta or (
                    f == theta
                    and (bi[cell] < bi[leave] or (bi[cell] == bi[leave] and bj[cell] < bj[leave]))
                ):
                    theta = f
                    leave = cell
            sign = -sign

        sign = -1
        for t in range(path_len):
            cell = path[t]
            bf[cell] += sign * theta
            sign = -sign

        li = bi[leave]
        lj = bj[leave]
        basic_at[li, lj] = -1
        basic_at[ei, ej] = leave
        bi[leave] = ei
        bj[leave] = ej
        bf[leave] = theta

        if theta <= tol:
            stall += 1
            if stall > 3 * nodes:
                bland = 1
        else:
            stall = 0

    X = np.zeros((n, m), dtype=np.float64)
    for t in range(nb):
        X[bi[t], bj[t]] = bf[t]
    return X, int(iterations)
