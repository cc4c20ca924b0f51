# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled belief BFS over fixed-width uint64 bitsets.

Beliefs live in one growable buffer in discovery order, which doubles as
the BFS queue.  The visited set is an open-addressing table of buffer
indices keyed by a 64-bit hash, confirmed by a full word comparison.
"""
from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t
from libc.stdlib cimport calloc, free, malloc, realloc
from libc.string cimport memcmp, memset

cdef enum:
    C_UNSAT = 0
    C_SAT = 1
    C_CAPPED = 2

SAT, UNSAT, CAPPED = C_SAT, C_UNSAT, C_CAPPED


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef inline uint64_t _hash(const uint64_t* w, Py_ssize_t n) noexcept nogil:
    cdef uint64_t h = 0x9E3779B97F4A7C15ULL
    cdef Py_ssize_t i
    for i in range(n):
        h ^= w[i] + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)
        h *= 0xBF58476D1CE4E5B9ULL
        h ^= h >> 31
    return h


cdef struct Store:
    uint64_t* words
    uint64_t* hashes
    int64_t* parent
    int32_t* via
    Py_ssize_t size
    Py_ssize_t capacity
    Py_ssize_t width
    int64_t* table
    Py_ssize_t table_size


cdef int _grow(Store* st) noexcept nogil:
    cdef Py_ssize_t cap = st.capacity * 2
    cdef void* p
    p = realloc(st.words, cap * st.width * sizeof(uint64_t))
    if p == NULL:
        return -1
    st.words = <uint64_t*>p
    p = realloc(st.hashes, cap * sizeof(uint64_t))
    if p == NULL:
        return -1
    st.hashes = <uint64_t*>p
    p = realloc(st.parent, cap * sizeof(int64_t))
    if p == NULL:
        return -1
    st.parent = <int64_t*>p
    p = realloc(st.via, cap * sizeof(int32_t))
    if p == NULL:
        return -1
    st.via = <int32_t*>p
    st.capacity = cap
    return 0


cdef int _rehash(Store* st) noexcept nogil:
    cdef Py_ssize_t size = st.table_size * 2
    cdef int64_t* table = <int64_t*>malloc(size * sizeof(int64_t))
    cdef Py_ssize_t i, slot
    if table == NULL:
        return -1
    for i in range(size):
        table[i] = -1
    for i in range(st.size):
        slot = st.hashes[i] & (size - 1)
        while table[slot] >= 0:
            slot = (slot + 1) & (size - 1)
        table[slot] = i
    free(st.table)
    st.table = table
    st.table_size = size
    return 0


cdef Py_ssize_t _find_or_insert(Store* st, const uint64_t* b, uint64_t h) noexcept nogil:
    """Index of ``b`` if already stored, else -1 after inserting it; -2 on allocation failure."""
    cdef Py_ssize_t slot = h & (st.table_size - 1)
    cdef int64_t j
    while True:
        j = st.table[slot]
        if j < 0:
            break
        if st.hashes[j] == h and memcmp(st.words + j * st.width, b, st.width * sizeof(uint64_t)) == 0:
            return j
        slot = (slot + 1) & (st.table_size - 1)
    if st.size == st.capacity and _grow(st) != 0:
        return -2
    cdef Py_ssize_t k
    for k in range(st.width):
        st.words[st.size * st.width + k] = b[k]
    st.hashes[st.size] = h
    st.table[slot] = st.size
    st.size += 1
    if st.size * 2 > st.table_size and _rehash(st) != 0:
        return -2
    return -1


def belief_bfs(int n_states, int n_actions, int init,
               const uint8_t[::1] app, const int64_t[::1] offsets,
               const int32_t[::1] targets, const uint8_t[::1] goal, long long cap):
    cdef Py_ssize_t W = (n_states + 63) // 64
    cdef Py_ssize_t s, a, k, w, t, head, found
    cdef Py_ssize_t peak = 1
    cdef int status = C_UNSAT
    cdef Py_ssize_t last = -1
    cdef uint64_t x
    cdef uint64_t* app_mask = <uint64_t*>calloc(max(n_actions, 1) * W, sizeof(uint64_t))
    cdef uint64_t* goal_mask = <uint64_t*>calloc(W, sizeof(uint64_t))
    cdef uint64_t* nb = <uint64_t*>calloc(W, sizeof(uint64_t))
    cdef int32_t* members = <int32_t*>malloc(max(n_states, 1) * sizeof(int32_t))
    cdef Py_ssize_t n_members
    cdef const uint64_t* b
    cdef Store st
    st.width = W
    st.capacity = 1024
    st.size = 0
    st.words = <uint64_t*>malloc(st.capacity * W * sizeof(uint64_t))
    st.hashes = <uint64_t*>malloc(st.capacity * sizeof(uint64_t))
    st.parent = <int64_t*>malloc(st.capacity * sizeof(int64_t))
    st.via = <int32_t*>malloc(st.capacity * sizeof(int32_t))
    st.table_size = 4096
    st.table = <int64_t*>malloc(st.table_size * sizeof(int64_t))
    if (app_mask == NULL or goal_mask == NULL or nb == NULL or members == NULL or st.words == NULL
            or st.hashes == NULL or st.parent == NULL or st.via == NULL or st.table == NULL):
        _release(&st, app_mask, goal_mask, nb, members)
        raise MemoryError()
    memset(st.table, 0xFF, st.table_size * sizeof(int64_t))

    try:
        with nogil:
            for s in range(n_states):
                if goal[s]:
                    goal_mask[s >> 6] |= (<uint64_t>1) << (s & 63)
                for a in range(n_actions):
                    if app[s * n_actions + a]:
                        app_mask[a * W + (s >> 6)] |= (<uint64_t>1) << (s & 63)
            memset(nb, 0, W * sizeof(uint64_t))
            nb[init >> 6] = (<uint64_t>1) << (init & 63)
            found = _find_or_insert(&st, nb, _hash(nb, W))
            st.parent[0] = -1
            st.via[0] = -1
        if found == -2:
            raise MemoryError()
        if _subset(nb, goal_mask, W):
            return SAT, [], 1, peak
        head = 0
        with nogil:
            while head < st.size:
                b = st.words + head * W
                head += 1
                n_members = 0
                for w in range(W):
                    x = b[w]
                    while x:
                        members[n_members] = <int32_t>(w * 64 + _ctz(x))
                        n_members += 1
                        x &= x - 1
                for a in range(n_actions):
                    if not _subset(b, app_mask + a * W, W):
                        continue
                    memset(nb, 0, W * sizeof(uint64_t))
                    for k in range(n_members):
                        s = members[k] * n_actions + a
                        for t in range(offsets[s], offsets[s + 1]):
                            nb[targets[t] >> 6] |= (<uint64_t>1) << (targets[t] & 63)
                    found = _find_or_insert(&st, nb, _hash(nb, W))
                    if found == -2:
                        break
                    if found >= 0:
                        continue
                    # the buffer may have moved during insertion
                    b = st.words + (head - 1) * W
                    st.parent[st.size - 1] = head - 1
                    st.via[st.size - 1] = <int32_t>a
                    if st.size - head > peak:
                        peak = st.size - head
                    if _subset(nb, goal_mask, W):
                        status = C_SAT
                        last = st.size - 1
                        break
                    if st.size > cap:
                        status = C_CAPPED
                        break
                if found == -2 or status != C_UNSAT:
                    break
        if found == -2:
            raise MemoryError()
        plan = None
        if status == C_SAT:
            plan = []
            i = last
            while st.parent[i] >= 0:
                plan.append(st.via[i])
                i = st.parent[i]
            plan.reverse()
        return status, plan, st.size, peak
    finally:
        _release(&st, app_mask, goal_mask, nb, members)


cdef inline int _ctz(uint64_t x) noexcept nogil:
    return __builtin_ctzll(x)


cdef inline bint _subset(const uint64_t* b, const uint64_t* m, Py_ssize_t W) noexcept nogil:
    cdef Py_ssize_t w
    for w in range(W):
        if b[w] & ~m[w]:
            return False
    return True


cdef void _release(Store* st, uint64_t* app_mask, uint64_t* goal_mask, uint64_t* nb, int32_t* members) noexcept:
    free(st.words)
    free(st.hashes)
    free(st.parent)
    free(st.via)
    free(st.table)
    free(app_mask)
    free(goal_mask)
    free(nb)
    free(members)
