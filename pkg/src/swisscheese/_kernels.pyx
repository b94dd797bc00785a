# distutils: language = c++
"""Compiled elimination kernels (int64 with overflow detection).

Same contracts as ``_kernels_py``.  Any intermediate value that leaves the
int64 range raises ``OverflowError``; ``swisscheese.kernels`` then reruns the
pure-Python version, so results are always exact.
"""
from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map
from libcpp.unordered_set cimport unordered_set
from libcpp.utility cimport pair

ctypedef long long i64
ctypedef pair[i64, i64] entry
ctypedef vector[entry] column


cdef extern from *:
    """
    static inline int sc_mul_ovf(long long a, long long b, long long* r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int sc_sub_ovf(long long a, long long b, long long* r) {
        return __builtin_sub_overflow(a, b, r);
    }
    static inline int sc_add_ovf(long long a, long long b, long long* r) {
        return __builtin_add_overflow(a, b, r);
    }
    """
    int sc_mul_ovf(i64 a, i64 b, i64* r) nogil
    int sc_sub_ovf(i64 a, i64 b, i64* r) nogil
    int sc_add_ovf(i64 a, i64 b, i64* r) nogil


cdef inline i64 _gcd(i64 a, i64 b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef void _make_primitive(column& col) nogil:
    cdef i64 g = 0
    cdef size_t i
    for i in range(col.size()):
        g = _gcd(g, col[i].second)
        if g == 1:
            return
    if g > 1:
        for i in range(col.size()):
            col[i].second = col[i].second // g


cdef column _load(object raw) except *:
    cdef column col
    cdef i64 r, v
    for r, v in sorted(raw):
        if v != 0:
            col.push_back(entry(r, v))
    return col


cdef int _combine(const column& c, const column& p, i64 a, i64 b, column& out) nogil:
    # out = b*c - a*p, both sorted by row; returns 1 on overflow
    cdef size_t i = 0, j = 0
    cdef i64 x, y, w
    out.clear()
    while i < c.size() or j < p.size():
        if j >= p.size() or (i < c.size() and c[i].first < p[j].first):
            if sc_mul_ovf(b, c[i].second, &x):
                return 1
            out.push_back(entry(c[i].first, x))
            i += 1
        elif i >= c.size() or p[j].first < c[i].first:
            if sc_mul_ovf(a, p[j].second, &y):
                return 1
            out.push_back(entry(p[j].first, -y))
            j += 1
        else:
            if sc_mul_ovf(b, c[i].second, &x) or sc_mul_ovf(a, p[j].second, &y):
                return 1
            if sc_sub_ovf(x, y, &w):
                return 1
            if w != 0:
                out.push_back(entry(c[i].first, w))
            i += 1
            j += 1
    return 0


def rank_int(columns):
    cdef vector[column] pivots
    cdef unordered_map[i64, size_t] where
    cdef column col, tmp
    cdef i64 low, a, b
    cdef int ovf
    for raw in columns:
        col = _load(raw)
        ovf = 0
        with nogil:
            while not col.empty():
                low = col.back().first
                if where.count(low) == 0:
                    _make_primitive(col)
                    where[low] = pivots.size()
                    pivots.push_back(col)
                    break
                a = col.back().second
                b = pivots[where[low]].back().second
                if _combine(col, pivots[where[low]], a, b, tmp):
                    ovf = 1
                    break
                _make_primitive(tmp)
                col.swap(tmp)
        if ovf:
            raise OverflowError("int64 overflow in rank kernel")
    return pivots.size()


def echelon_lower_bound(columns):
    cdef unordered_set[i64] taken
    cdef i64 low, r
    for raw in columns:
        low = -1
        for r, v in raw:
            if v != 0 and r > low:
                low = r
        if low >= 0 and taken.count(low) == 0:
            taken.insert(low)
    return taken.size()


def first_nonzero_product(left, right):
    cdef vector[column] lcols
    cdef unordered_map[i64, i64] acc
    cdef column rcol
    cdef size_t t, idx
    cdef i64 x, y
    cdef Py_ssize_t j
    for raw in left:
        lcols.push_back(_load(raw))
    j = 0
    for raw in right:
        rcol = _load(raw)
        acc.clear()
        for t in range(rcol.size()):
            idx = <size_t> rcol[t].first
            for e in lcols[idx]:
                if sc_mul_ovf(rcol[t].second, e.second, &x):
                    raise OverflowError("int64 overflow in product kernel")
                y = acc[e.first]
                if sc_add_ovf(y, x, &y):
                    raise OverflowError("int64 overflow in product kernel")
                acc[e.first] = y
        for kv in acc:
            if kv.second != 0:
                return j
        j += 1
    return -1
