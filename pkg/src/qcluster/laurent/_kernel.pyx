# cython: language_level=3
"""Compiled term-arithmetic kernels for the plain-integer ring.

Same contract as qcluster.laurent._kernel_py (which see): dicts of packed
exponent key -> nonzero int coefficient.  Keys and coefficients stay Python
ints (arbitrary precision), the win is the compiled merge loops.
"""

import heapq

IMPL = "cython"

cdef object FIELD_MASK = (1 << 32) - 1
cdef object OFFSET = 1 << 30
cdef int FIELD_BITS = 32


def add_terms(dict a, dict b):
    if len(a) < len(b):
        a, b = b, a
    cdef dict out = dict(a)
    cdef object k, c, s
    for k, c in b.items():
        s = out.get(k)
        if s is None:
            out[k] = c
        else:
            s = s + c
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def neg_terms(dict a):
    cdef dict out = {}
    cdef object k, c
    for k, c in a.items():
        out[k] = -c
    return out


def scale_terms(dict a, object c):
    cdef dict out = {}
    cdef object k, v
    if not c:
        return out
    for k, v in a.items():
        out[k] = c * v
    return out


def mul_monomial(dict a, object key, object coeff, object base):
    cdef object shift = key - base
    cdef dict out = {}
    cdef object k, c
    for k, c in a.items():
        out[k + shift] = c * coeff
    return out


def mul_terms(dict a, dict b, object base):
    if not a or not b:
        return {}
    if len(a) == 1:
        for k0, c0 in a.items():
            return mul_monomial(b, k0, c0, base)
    if len(b) == 1:
        for k0, c0 in b.items():
            return mul_monomial(a, k0, c0, base)
    if len(a) > len(b):
        a, b = b, a
    cdef dict out = {}
    cdef list items_b = list(b.items())
    cdef object ka, ca, kb, cb, k, s
    cdef Py_ssize_t i, nb = len(items_b)
    for ka, ca in a.items():
        ka = ka - base
        for i in range(nb):
            kb, cb = <tuple>items_b[i]
            k = ka + kb
            s = out.get(k)
            if s is None:
                out[k] = ca * cb
            else:
                s = s + ca * cb
                if s:
                    out[k] = s
                else:
                    del out[k]
    return out


def sqr_terms(dict a, object base):
    cdef list items = list(a.items())
    cdef dict out = {}
    cdef Py_ssize_t i, j, n = len(items)
    cdef object ka, ca, kb, cb, kas, k, s, cc
    for i in range(n):
        ka, ca = <tuple>items[i]
        kas = ka - base
        k = kas + ka
        s = out.get(k)
        if s is None:
            out[k] = ca * ca
        else:
            s = s + ca * ca
            if s:
                out[k] = s
            else:
                del out[k]
        cc = ca + ca
        for j in range(i + 1, n):
            kb, cb = <tuple>items[j]
            k = kas + kb
            s = out.get(k)
            if s is None:
                out[k] = cc * cb
            else:
                s = s + cc * cb
                if s:
                    out[k] = s
                else:
                    del out[k]
    return out


def _min_key(dict terms, int nvars):
    cdef list mins = [None] * nvars
    cdef object k, f, m
    cdef int i
    for k in terms:
        for i in range(nvars):
            f = (k >> (FIELD_BITS * i)) & FIELD_MASK
            m = mins[i]
            if m is None or f < m:
                mins[i] = f
    cdef object key = 0
    for i in range(nvars):
        key = key | (<object>mins[i] << (FIELD_BITS * i))
    return key


def div_terms(dict num, dict den, int nvars, object base):
    """Exact division; None when no exact quotient exists."""
    if not den:
        raise ZeroDivisionError("division by zero polynomial")
    if not num:
        return {}
    cdef object num_min = _min_key(num, nvars)
    cdef object den_min = _min_key(den, nvars)
    cdef object num_shift = base - num_min
    cdef dict rem = {}
    cdef object k, c
    for k, c in num.items():
        rem[k + num_shift] = c
    cdef object den_shift = base - den_min
    cdef list dens = []
    for k, c in den.items():
        dens.append((k + den_shift, c))
    cdef tuple lead_pair = max(dens)
    cdef object den_lead = lead_pair[0]
    cdef object den_lc = lead_pair[1]
    cdef list den_rest = [p for p in dens if (<tuple>p)[0] != den_lead]

    cdef dict quo = {}
    cdef list heap = [-k for k in rem]
    heapq.heapify(heap)
    cdef object lead, lc, qk, qc, shift, kk, s
    cdef int i
    cdef Py_ssize_t j, nrest = len(den_rest)
    while heap:
        lead = -heapq.heappop(heap)
        lc = rem.get(lead)
        if lc is None:
            continue
        qk = lead - den_lead + base
        for i in range(nvars):
            if ((qk >> (FIELD_BITS * i)) & FIELD_MASK) < OFFSET:
                return None
        if lc % den_lc:
            return None
        qc = lc // den_lc
        quo[qk] = qc
        del rem[lead]
        shift = qk - base
        for j in range(nrest):
            k, c = <tuple>den_rest[j]
            kk = k + shift
            s = rem.get(kk)
            if s is None:
                rem[kk] = -qc * c
                heapq.heappush(heap, -kk)
            else:
                s = s - qc * c
                if s:
                    rem[kk] = s
                else:
                    del rem[kk]
    if rem:
        return None
    cdef object back = num_min - den_min
    if back:
        out = {}
        for k, c in quo.items():
            out[k + back] = c
        return out
    return quo


def pow_terms(dict a, object n, object base):
    if n == 0:
        return {base: 1}
    result = None
    sq = a
    while True:
        if n & 1:
            result = sq if result is None else mul_terms(result, sq, base)
        n >>= 1
        if not n:
            return result
        sq = sqr_terms(sq, base)
