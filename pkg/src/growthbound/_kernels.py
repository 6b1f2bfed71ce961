"""Hot loops: suffix scans, state enumeration, edge construction, power
iteration, SCC and brute-force counting.

Every kernel exists twice. ``*_nb`` functions are numba-compiled loops; the
``*_np`` functions are vectorized numpy (or plain Python where no vectorized
form exists). ``growthbound._accel.use_numba`` picks one at the call sites.
Words are ``uint8`` arrays; state sets are C-contiguous ``(n, order)`` uint8
matrices sorted lexicographically.
"""

import numpy as np

from growthbound._accel import njit

EPS = np.finfo(np.float64).eps


# --------------------------------------------------------------------------
# suffix scan


def _suffix_period(word, length, flen, m):
    # flen[p] is nondecreasing in p, so stop at the first length overshoot.
    for p in range(1, m + 1):
        f = flen[p]
        if f > length:
            return 0
        start = length - f
        ok = True
        for i in range(start, length - p):
            if word[i] != word[i + p]:
                ok = False
                break
        if ok:
            return p
    return 0


suffix_period_py = _suffix_period
suffix_period_nb = njit(_suffix_period)


def _forbidden_suffix_rows(words, flen, m):
    """Boolean mask: row ends with a forbidden power of period <= m."""
    n, length = words.shape
    bad = np.zeros(n, dtype=bool)
    for p in range(1, m + 1):
        f = flen[p]
        if f > length:
            break
        seg = words[:, length - f:]
        if f - p > 0:
            bad |= np.all(seg[:, : f - p] == seg[:, p:], axis=1)
        else:
            bad[:] = True
    return bad


# --------------------------------------------------------------------------
# state enumeration


@njit
def _enumerate_states_nb(k, order, flen, m, symmetric, state_cap):
    cap = 1024
    out = np.empty((cap, max(order, 1)), dtype=np.uint8)
    n = 0
    word = np.zeros(order + 1, dtype=np.uint8)
    nxt = np.zeros(order + 1, dtype=np.int64)
    mx = np.full(order + 1, -1, dtype=np.int64)
    depth = 0
    while depth >= 0:
        if depth == order:
            if n >= state_cap:
                return out[:n, :order].copy(), n + 1, True
            if n == cap:
                bigger = np.empty((cap * 2, max(order, 1)), dtype=np.uint8)
                bigger[:cap] = out
                out = bigger
                cap *= 2
            for i in range(order):
                out[n, i] = word[i]
            n += 1
            depth -= 1
            continue
        c = nxt[depth]
        limit = k
        if symmetric and mx[depth] + 2 < k:
            limit = mx[depth] + 2
        if c >= limit:
            depth -= 1
            continue
        nxt[depth] = c + 1
        word[depth] = c
        if suffix_period_nb(word, depth + 1, flen, m) == 0:
            mx[depth + 1] = max(mx[depth], c)
            depth += 1
            nxt[depth] = 0
    return out[:n, :order].copy(), n, False


def _enumerate_states_np(k, order, flen, m, symmetric, state_cap):
    words = np.zeros((1, 0), dtype=np.uint8)
    mx = np.full(1, -1, dtype=np.int64)
    letters = np.arange(k, dtype=np.uint8)
    for length in range(order):
        n = words.shape[0]
        cand = np.empty((n * k, length + 1), dtype=np.uint8)
        cand[:, :length] = np.repeat(words, k, axis=0)
        cand[:, length] = np.tile(letters, n)
        cmx = np.repeat(mx, k)
        keep = ~_forbidden_suffix_rows(cand, flen, m)
        if symmetric:
            keep &= cand[:, length].astype(np.int64) <= cmx + 1
        words = cand[keep]
        mx = np.maximum(cmx[keep], words[:, length].astype(np.int64))
        if words.shape[0] == 0:
            break
    if words.shape[1] != order:
        words = np.zeros((0, order), dtype=np.uint8)
    n = words.shape[0]
    if n > state_cap:
        return words[:state_cap], n, True
    return np.ascontiguousarray(words), n, False


# --------------------------------------------------------------------------
# canonical relabelling


@njit
def _canonicalize_inplace_nb(word, length, k, remap):
    for c in range(k):
        remap[c] = -1
    nxt = 0
    for i in range(length):
        c = word[i]
        if remap[c] < 0:
            remap[c] = nxt
            nxt += 1
        word[i] = remap[c]


def canonicalize_rows_np(words, k):
    """First-occurrence relabelling of every row."""
    n, length = words.shape
    if n == 0 or length == 0:
        return words.copy()
    onehot = words[:, :, None] == np.arange(k, dtype=words.dtype)[None, None, :]
    present = onehot.any(axis=1)
    first = np.where(present, onehot.argmax(axis=1), length)
    # rank of letter x = number of letters whose first occurrence precedes it
    rank = (first[:, None, :] < first[:, :, None]).sum(axis=2)
    return np.take_along_axis(rank, words.astype(np.int64), axis=1).astype(np.uint8)


# --------------------------------------------------------------------------
# edges


@njit
def _row_search_nb(states, key):
    lo = 0
    hi = states.shape[0]
    width = states.shape[1]
    while lo < hi:
        mid = (lo + hi) >> 1
        cmp = 0
        for i in range(width):
            a = states[mid, i]
            b = key[i]
            if a != b:
                cmp = -1 if a < b else 1
                break
        if cmp == 0:
            return mid
        if cmp < 0:
            lo = mid + 1
        else:
            hi = mid
    return -1


@njit
def _build_edges_nb(states, k, flen, m, symmetric):
    n, order = states.shape
    src = np.empty(n * k, dtype=np.int64)
    dst = np.empty(n * k, dtype=np.int64)
    wt = np.empty(n * k, dtype=np.int64)
    ext = np.empty(order + 1, dtype=np.uint8)
    succ = np.empty(max(order, 1), dtype=np.uint8)
    remap = np.empty(k, dtype=np.int64)
    row_dst = np.empty(k, dtype=np.int64)
    row_wt = np.empty(k, dtype=np.int64)
    e = 0
    for u in range(n):
        for i in range(order):
            ext[i] = states[u, i]
        cnt = 0
        for c in range(k):
            ext[order] = c
            if suffix_period_nb(ext, order + 1, flen, m) != 0:
                continue
            for i in range(order):
                succ[i] = ext[i + 1]
            if symmetric:
                _canonicalize_inplace_nb(succ, order, k, remap)
            v = _row_search_nb(states, succ[:order])
            if v < 0:
                return src[:0].copy(), dst[:0].copy(), wt[:0].copy(), u
            merged = False
            for j in range(cnt):
                if row_dst[j] == v:
                    row_wt[j] += 1
                    merged = True
                    break
            if not merged:
                row_dst[cnt] = v
                row_wt[cnt] = 1
                cnt += 1
        # insertion sort by destination
        for a in range(1, cnt):
            dv = row_dst[a]
            dw = row_wt[a]
            b = a - 1
            while b >= 0 and row_dst[b] > dv:
                row_dst[b + 1] = row_dst[b]
                row_wt[b + 1] = row_wt[b]
                b -= 1
            row_dst[b + 1] = dv
            row_wt[b + 1] = dw
        for j in range(cnt):
            src[e] = u
            dst[e] = row_dst[j]
            wt[e] = row_wt[j]
            e += 1
    return src[:e].copy(), dst[:e].copy(), wt[:e].copy(), -1


def _void_rows(a):
    a = np.ascontiguousarray(a)
    return a.view(np.dtype((np.void, max(a.shape[1], 1)))).ravel()


def _build_edges_np(states, k, flen, m, symmetric):
    n, order = states.shape
    if n == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty, -1
    ext = np.empty((n * k, order + 1), dtype=np.uint8)
    ext[:, :order] = np.repeat(states, k, axis=0)
    ext[:, order] = np.tile(np.arange(k, dtype=np.uint8), n)
    src = np.repeat(np.arange(n, dtype=np.int64), k)
    keep = ~_forbidden_suffix_rows(ext, flen, m)
    ext, src = ext[keep], src[keep]
    succ = ext[:, 1:]
    if symmetric:
        succ = canonicalize_rows_np(succ, k)
    if order == 0:
        dst = np.zeros(len(src), dtype=np.int64)
    else:
        table = _void_rows(states)
        keys = _void_rows(succ)
        dst = np.searchsorted(table, keys).astype(np.int64)
        found = (dst < n) & (table[np.minimum(dst, n - 1)] == keys)
        if not found.all():
            bad = int(src[~found][0])
            return src[:0], dst[:0], dst[:0], bad
    pair, wt = np.unique(src * n + dst, return_counts=True)
    return pair // n, pair % n, wt.astype(np.int64), -1


# --------------------------------------------------------------------------
# certified power iteration on (A + I)


@njit
def _power_iterate_nb(indptr, indices, weights, precision, max_iters):
    n = indptr.shape[0] - 1
    v = np.ones(n)
    y = np.empty(n)
    best_lo = 0.0
    best_hi = np.inf
    it = 0
    while it < max_iters:
        it += 1
        rmin = np.inf
        rmax = 0.0
        ymax = 0.0
        positive = True
        for i in range(n):
            s = v[i]
            for t in range(indptr[i], indptr[i + 1]):
                s += weights[t] * v[indices[t]]
            y[i] = s
            if v[i] > 0.0:
                slack = 4.0 * EPS * (2.0 * (indptr[i + 1] - indptr[i]) + 2.0)
                r = s / v[i]
                lo_i = r * (1.0 - slack)
                hi_i = r * (1.0 + slack)
                if lo_i < rmin:
                    rmin = lo_i
                if hi_i > rmax:
                    rmax = hi_i
            else:
                positive = False
            if s > ymax:
                ymax = s
        if positive:
            lo = np.nextafter(np.nextafter(rmin, -np.inf) - 1.0, -np.inf)
            hi = np.nextafter(np.nextafter(rmax, np.inf) - 1.0, np.inf)
            if lo > best_lo:
                best_lo = lo
            if hi < best_hi:
                best_hi = hi
            if best_hi - best_lo <= precision:
                return best_lo, best_hi, it, True, v
        if ymax <= 0.0:
            break
        for i in range(n):
            v[i] = y[i] / ymax
    return best_lo, best_hi, it, False, v


def _power_iterate_np(indptr, indices, weights, precision, max_iters):
    n = indptr.shape[0] - 1
    deg = np.diff(indptr)
    rows = np.repeat(np.arange(n), deg)
    w = weights.astype(np.float64)
    slack = 4.0 * EPS * (2.0 * deg + 2.0)
    v = np.ones(n)
    best_lo, best_hi = 0.0, np.inf
    it = 0
    while it < max_iters:
        it += 1
        y = v + np.bincount(rows, weights=w * v[indices], minlength=n)
        if np.all(v > 0.0):
            r = y / v
            lo = np.nextafter(np.nextafter((r * (1.0 - slack)).min(), -np.inf) - 1.0, -np.inf)
            hi = np.nextafter(np.nextafter((r * (1.0 + slack)).max(), np.inf) - 1.0, np.inf)
            best_lo = max(best_lo, float(lo))
            best_hi = min(best_hi, float(hi))
            if best_hi - best_lo <= precision:
                return best_lo, best_hi, it, True, v
        ymax = y.max()
        if ymax <= 0.0:
            break
        v = y / ymax
    return best_lo, best_hi, it, False, v


# --------------------------------------------------------------------------
# strongly connected components


@njit
def _tarjan_nb(indptr, indices):
    """Iterative Tarjan; returns raw component labels in completion order."""
    n = indptr.shape[0] - 1
    index = np.full(n, -1, dtype=np.int64)
    low = np.zeros(n, dtype=np.int64)
    onstack = np.zeros(n, dtype=np.bool_)
    comp = np.full(n, -1, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    call = np.empty(n, dtype=np.int64)
    edge_pos = np.empty(n, dtype=np.int64)
    sp = 0
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        cp = 0
        call[0] = root
        edge_pos[0] = indptr[root]
        index[root] = counter
        low[root] = counter
        counter += 1
        stack[sp] = root
        sp += 1
        onstack[root] = True
        while cp >= 0:
            v = call[cp]
            t = edge_pos[cp]
            if t < indptr[v + 1]:
                edge_pos[cp] = t + 1
                w = indices[t]
                if index[w] < 0:
                    index[w] = counter
                    low[w] = counter
                    counter += 1
                    stack[sp] = w
                    sp += 1
                    onstack[w] = True
                    cp += 1
                    call[cp] = w
                    edge_pos[cp] = indptr[w]
                elif onstack[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                if low[v] == index[v]:
                    while True:
                        sp -= 1
                        w = stack[sp]
                        onstack[w] = False
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
                cp -= 1
                if cp >= 0:
                    parent = call[cp]
                    if low[v] < low[parent]:
                        low[parent] = low[v]
    return comp, ncomp


def _scc_np(indptr, indices):
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components

    n = indptr.shape[0] - 1
    data = np.ones(len(indices), dtype=np.int8)
    mat = csr_matrix((data, indices, indptr), shape=(n, n))
    ncomp, labels = connected_components(mat, directed=True, connection="strong")
    return labels.astype(np.int64), int(ncomp)


# --------------------------------------------------------------------------
# brute-force counting


def _brute_count(k, n_max, flen, m, node_budget):
    counts = np.zeros(n_max + 1, dtype=np.int64)
    counts[0] = 1
    if n_max == 0:
        return counts, 0, False
    word = np.zeros(n_max, dtype=np.uint8)
    nxt = np.zeros(n_max + 1, dtype=np.int64)
    depth = 0
    nodes = 0
    while depth >= 0:
        c = nxt[depth]
        if depth == n_max or c >= k:
            depth -= 1
            continue
        nxt[depth] = c + 1
        word[depth] = c
        if _suffix_period(word, depth + 1, flen, min(m, depth + 1)) == 0:
            counts[depth + 1] += 1
            nodes += 1
            if nodes > node_budget:
                return counts, nodes, True
            depth += 1
            nxt[depth] = 0
    return counts, nodes, False


brute_count_py = _brute_count


@njit
def _brute_count_nb(k, n_max, flen, m, node_budget):
    counts = np.zeros(n_max + 1, dtype=np.int64)
    counts[0] = 1
    if n_max == 0:
        return counts, 0, False
    word = np.zeros(n_max, dtype=np.uint8)
    nxt = np.zeros(n_max + 1, dtype=np.int64)
    depth = 0
    nodes = 0
    while depth >= 0:
        c = nxt[depth]
        if depth == n_max or c >= k:
            depth -= 1
            continue
        nxt[depth] = c + 1
        word[depth] = c
        if suffix_period_nb(word, depth + 1, flen, min(m, depth + 1)) == 0:
            counts[depth + 1] += 1
            nodes += 1
            if nodes > node_budget:
                return counts, nodes, True
            depth += 1
            nxt[depth] = 0
    return counts, nodes, False
