"""Hot loops: counter-based sampling, CSR assembly and Hopcroft-Karp.

Each kernel has a numba-compiled loop form and a numpy form; ``_accel``
decides which one the public names below point to.

Random stream: draw ``k`` (k = 0, 1, ...) of the stream seeded with ``seed`` is
``mix64(seed + (k + 1) * GAMMA) >> 11``, a 53-bit integer ``m`` read as the
uniform real ``m / 2**53``. That is exactly the k-th output of SplitMix64. A
graph on ``n`` nodes uses draws ``0 .. n-1`` for the coordinates and draw
``n + p`` for the p-th pair ``(i, j)``, ``i < j``, in lexicographic order.
Comparisons against rational breakpoints and probabilities are done on the
integer ``m`` with precomputed ceilings, so they are exact.
"""
import numpy as np

from ._accel import HAVE_NUMBA, jit

GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1
MANTISSA_BITS = 53


def mix64(z: int) -> int:
    """SplitMix64 finalizer on Python ints (a bijection of 64-bit words)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def draws_numpy(seed: int, start: int, count: int) -> np.ndarray:
    """53-bit draws ``start .. start+count-1`` as int64."""
    k = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(seed & MASK64) + k * np.uint64(GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(64 - MANTISSA_BITS)).astype(np.int64)


@jit
def _draw(seed, k):
    z = seed + np.uint64(k + 1) * np.uint64(GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    z = z ^ (z >> np.uint64(31))
    return np.int64(z >> np.uint64(64 - MANTISSA_BITS))


if not HAVE_NUMBA:
    # un-jitted loops would trip numpy's uint64 overflow warnings; wrap on Python ints
    def _draw(seed, k):  # noqa: F811
        return mix64(int(seed) + (k + 1) * GAMMA) >> (64 - MANTISSA_BITS)


@jit
def _coords_loop(seed, n, block_thr):
    mant = np.empty(n, np.int64)
    blocks = np.empty(n, np.int64)
    for v in range(n):
        m = _draw(seed, v)
        b = 0
        for t in block_thr:
            if t <= m:
                b += 1
        mant[v] = m
        blocks[v] = b
    return mant, blocks


@jit
def _sample_loop(seed, n, block_thr, prob_thr):
    mant, blocks = _coords_loop(seed, n, block_thr)
    npairs = n * (n - 1) // 2
    ei = np.empty(npairs, np.int64)
    ej = np.empty(npairs, np.int64)
    m = 0
    k = n
    for i in range(n):
        row = prob_thr[blocks[i]]
        for j in range(i + 1, n):
            if _draw(seed, k) < row[blocks[j]]:
                ei[m] = i
                ej[m] = j
                m += 1
            k += 1
    return mant, blocks, ei[:m].copy(), ej[:m].copy()


def _coords_numpy(seed, n, block_thr):
    mant = draws_numpy(int(seed), 0, n)
    blocks = np.searchsorted(block_thr, mant, side="right").astype(np.int64)
    return mant, blocks


def _sample_numpy(seed, n, block_thr, prob_thr):
    mant, blocks = _coords_numpy(seed, n, block_thr)
    ei, ej = np.triu_indices(n, 1)
    u = draws_numpy(int(seed), n, ei.size)
    keep = u < prob_thr[blocks[ei], blocks[ej]]
    return mant, blocks, ei[keep].astype(np.int64), ej[keep].astype(np.int64)


@jit
def _csr_loop(n, ei, ej):
    deg = np.zeros(n + 1, np.int64)
    for k in range(ei.size):
        deg[ei[k] + 1] += 1
        deg[ej[k] + 1] += 1
    indptr = np.cumsum(deg)
    fill = indptr[:-1].copy()
    indices = np.empty(2 * ei.size, np.int64)
    # lexicographic edge order leaves every neighbour list ascending
    for k in range(ei.size):
        a = ei[k]
        b = ej[k]
        indices[fill[a]] = b
        fill[a] += 1
        indices[fill[b]] = a
        fill[b] += 1
    return indptr, indices


def _csr_numpy(n, ei, ej):
    src = np.concatenate([ei, ej])
    dst = np.concatenate([ej, ei])
    order = np.lexsort((dst, src))
    indptr = np.zeros(n + 1, np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, dst[order].astype(np.int64)


def _hk_match_py(n, indptr, indices):
    """Hopcroft-Karp on the bipartite graph left i -- right j for each arc i->j.

    Neighbours are scanned in stored (ascending) order and free left vertices in
    ascending index, so the matching is a deterministic function of the input.
    Returns ``(match_left, size)``.
    """
    inf = n + 1
    match_l = np.full(n, -1, np.int64)
    match_r = np.full(n, -1, np.int64)
    dist = np.zeros(n, np.int64)
    queue = np.zeros(n, np.int64)
    ptr = np.zeros(n, np.int64)
    stack = np.zeros(n + 1, np.int64)
    via = np.zeros(n + 1, np.int64)
    size = 0
    while True:
        head = 0
        tail = 0
        for u in range(n):
            if match_l[u] == -1:
                dist[u] = 0
                queue[tail] = u
                tail += 1
            else:
                dist[u] = inf
        dist_free = inf
        while head < tail:
            u = queue[head]
            head += 1
            if dist[u] < dist_free:
                for k in range(indptr[u], indptr[u + 1]):
                    w = match_r[indices[k]]
                    if w == -1:
                        if dist_free == inf:
                            dist_free = dist[u] + 1
                    elif dist[w] == inf:
                        dist[w] = dist[u] + 1
                        queue[tail] = w
                        tail += 1
        if dist_free == inf:
            break
        for u in range(n):
            ptr[u] = indptr[u]
        for root in range(n):
            if match_l[root] != -1:
                continue
            depth = 0
            stack[0] = root
            found = False
            while depth >= 0 and not found:
                x = stack[depth]
                advanced = False
                while ptr[x] < indptr[x + 1]:
                    v = indices[ptr[x]]
                    ptr[x] += 1
                    w = match_r[v]
                    if w == -1:
                        if dist_free == dist[x] + 1:
                            via[depth] = v
                            found = True
                            break
                    elif dist[w] == dist[x] + 1:
                        via[depth] = v
                        depth += 1
                        stack[depth] = w
                        advanced = True
                        break
                if found or advanced:
                    continue
                dist[x] = inf
                depth -= 1
            if found:
                for lvl in range(depth + 1):
                    a = stack[lvl]
                    b = via[lvl]
                    match_l[a] = b
                    match_r[b] = a
                size += 1
    return match_l, size


_hk_match_jit = jit(_hk_match_py)


def _trial_py(seed, n, block_thr, prob_thr):
    _, _, ei, ej = _sample_numpy(seed, n, block_thr, prob_thr)
    indptr, indices = _csr_numpy(n, ei, ej)
    return _hk_match_py(n, indptr, indices)[1] == n


@jit
def _trial_loop(seed, n, block_thr, prob_thr):
    _, _, ei, ej = _sample_loop(seed, n, block_thr, prob_thr)
    indptr, indices = _csr_loop(n, ei, ej)
    return _hk_match_jit(n, indptr, indices)[1] == n


if HAVE_NUMBA:
    coords_kernel = _coords_loop
    sample_kernel = _sample_loop
    csr_kernel = _csr_loop
    hk_match = _hk_match_jit
    trial_kernel = _trial_loop
else:
    coords_kernel = _coords_numpy
    sample_kernel = _sample_numpy
    csr_kernel = _csr_numpy
    hk_match = _hk_match_py
    trial_kernel = _trial_py


def as_seed(seed: int):
    """Normalize a Python int to the kernels' uint64 seed argument."""
    return np.uint64(int(seed) & MASK64)
