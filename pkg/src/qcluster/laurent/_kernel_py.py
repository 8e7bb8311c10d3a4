"""Pure-Python term-arithmetic kernels.

Terms are dicts mapping packed exponent keys (see _packing) to nonzero
coefficients: plain ints for the ZZ ring, (re, im) int pairs for ZZ[i].
Every function returns a fresh canonical dict (no zero coefficients).

The compiled extension qcluster.laurent._kernel implements the same API for
the ZZ ring; this module is the fallback and the only implementation of the
Gaussian (_g) variants.
"""

import heapq

from ._packing import FIELD_BITS, FIELD_MASK, OFFSET

IMPL = "python"


def add_terms(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        else:
            del out[k]
    return out


def neg_terms(a):
    return {k: -c for k, c in a.items()}


def scale_terms(a, c):
    if not c:
        return {}
    return {k: c * v for k, v in a.items()}


def mul_monomial(a, key, coeff, base):
    shift = key - base
    return {k + shift: c * coeff for k, c in a.items()}


def mul_terms(a, b, base):
    if not a or not b:
        return {}
    if len(a) == 1:
        (k, c), = a.items()
        return mul_monomial(b, k, c, base)
    if len(b) == 1:
        (k, c), = b.items()
        return mul_monomial(a, k, c, base)
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    items_b = list(b.items())
    for ka, ca in a.items():
        ka -= base
        for kb, cb in items_b:
            k = ka + kb
            s = get(k, 0) + ca * cb
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def sqr_terms(a, base):
    """Square of a term dict; diagonal terms once, cross terms doubled."""
    items = list(a.items())
    out = {}
    get = out.get
    n = len(items)
    for i in range(n):
        ka, ca = items[i]
        kas = ka - base
        k = kas + ka
        s = get(k, 0) + ca * ca
        if s:
            out[k] = s
        else:
            del out[k]
        cc = ca + ca
        for j in range(i + 1, n):
            kb, cb = items[j]
            k = kas + kb
            s = get(k, 0) + cc * cb
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def _min_key(terms, nvars):
    """Packed key of the componentwise minimum exponent vector."""
    mins = [None] * nvars
    for k in terms:
        for i in range(nvars):
            f = (k >> (FIELD_BITS * i)) & FIELD_MASK
            m = mins[i]
            if m is None or f < m:
                mins[i] = f
    key = 0
    for i in range(nvars):
        key |= mins[i] << (FIELD_BITS * i)
    return key


def div_terms(num, den, nvars, base):
    """Exact division of Laurent term dicts; None when no exact quotient exists.

    Both operands are shifted so that every per-variable minimum exponent is
    zero (minima are additive over products in an integral domain, so an
    exact Laurent quotient exists iff the shifted plain-polynomial quotient
    does).  The shifted division is greedy elimination on the packed-key
    order, which is a multiplicative well-order on nonnegative vectors, so it
    terminates; each produced term must divide exactly coefficient-wise.
    """
    if not den:
        raise ZeroDivisionError("division by zero polynomial")
    if not num:
        return {}
    num_min = _min_key(num, nvars)
    den_min = _min_key(den, nvars)
    num_shift = base - num_min
    rem = {k + num_shift: c for k, c in num.items()}
    den_shift = base - den_min
    dens = [(k + den_shift, c) for k, c in den.items()]
    den_lead, den_lc = max(dens)
    den_rest = [(k, c) for k, c in dens if k != den_lead]

    quo = {}
    heap = [-k for k in rem]
    heapq.heapify(heap)
    zero_floor = base  # all fields must stay >= OFFSET, i.e. exponents >= 0
    while heap:
        lead = -heapq.heappop(heap)
        lc = rem.get(lead)
        if lc is None:
            continue  # stale heap entry
        qk = lead - den_lead + zero_floor
        # the quotient term must be a genuine monomial (no negative fields)
        for i in range(nvars):
            if ((qk >> (FIELD_BITS * i)) & FIELD_MASK) < OFFSET:
                return None
        if lc % den_lc:
            return None
        qc = lc // den_lc
        quo[qk] = qc
        del rem[lead]
        shift = qk - zero_floor
        for k, c in den_rest:
            kk = k + shift
            s = rem.get(kk, 0) - qc * c
            if s:
                if kk not in rem:
                    heapq.heappush(heap, -kk)
                rem[kk] = s
            elif kk in rem:
                del rem[kk]
    if rem:
        return None
    # undo the shifts: quotient of originals = shifted quotient * x^(num_min - den_min)
    back = num_min - den_min
    if back:
        quo = {k + back: c for k, c in quo.items()}
    return quo


def pow_terms(a, n, base):
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


# --- Gaussian-integer (ZZ[i]) variants: coefficients are (re, im) pairs. ---


def gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def gadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def gdiv_exact(a, b):
    """a / b in ZZ[i], or None if not exact."""
    n = b[0] * b[0] + b[1] * b[1]
    re = a[0] * b[0] + a[1] * b[1]
    im = a[1] * b[0] - a[0] * b[1]
    if re % n or im % n:
        return None
    return (re // n, im // n)


_GZERO = (0, 0)


def add_terms_g(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for k, c in b.items():
        s = gadd(out.get(k, _GZERO), c)
        if s[0] or s[1]:
            out[k] = s
        else:
            del out[k]
    return out


def neg_terms_g(a):
    return {k: (-c[0], -c[1]) for k, c in a.items()}


def scale_terms_g(a, c):
    if not (c[0] or c[1]):
        return {}
    return {k: gmul(c, v) for k, v in a.items()}


def mul_monomial_g(a, key, coeff, base):
    shift = key - base
    return {k + shift: gmul(c, coeff) for k, c in a.items()}


def mul_terms_g(a, b, base):
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    items_b = list(b.items())
    for ka, ca in a.items():
        ka -= base
        for kb, cb in items_b:
            k = ka + kb
            s = gadd(get(k, _GZERO), gmul(ca, cb))
            if s[0] or s[1]:
                out[k] = s
            else:
                del out[k]
    return out


def div_terms_g(num, den, nvars, base):
    if not den:
        raise ZeroDivisionError("division by zero polynomial")
    if not num:
        return {}
    num_min = _min_key(num, nvars)
    den_min = _min_key(den, nvars)
    rem = {k + base - num_min: c for k, c in num.items()}
    dens = [(k + base - den_min, c) for k, c in den.items()]
    den_lead, den_lc = max(dens)
    den_rest = [(k, c) for k, c in dens if k != den_lead]

    quo = {}
    heap = [-k for k in rem]
    heapq.heapify(heap)
    while heap:
        lead = -heapq.heappop(heap)
        lc = rem.get(lead)
        if lc is None:
            continue
        qk = lead - den_lead + base
        for i in range(nvars):
            if ((qk >> (FIELD_BITS * i)) & FIELD_MASK) < OFFSET:
                return None
        qc = gdiv_exact(lc, den_lc)
        if qc is None:
            return None
        quo[qk] = qc
        del rem[lead]
        shift = qk - base
        for k, c in den_rest:
            kk = k + shift
            p = gmul(qc, c)
            s = (rem.get(kk, _GZERO)[0] - p[0], rem.get(kk, _GZERO)[1] - p[1])
            if s[0] or s[1]:
                if kk not in rem:
                    heapq.heappush(heap, -kk)
                rem[kk] = s
            elif kk in rem:
                del rem[kk]
    if rem:
        return None
    back = num_min - den_min
    if back:
        quo = {k + back: c for k, c in quo.items()}
    return quo


def sqr_terms_g(a, base):
    items = list(a.items())
    out = {}
    get = out.get
    n = len(items)
    for i in range(n):
        ka, ca = items[i]
        kas = ka - base
        k = kas + ka
        s = gadd(get(k, _GZERO), gmul(ca, ca))
        if s[0] or s[1]:
            out[k] = s
        else:
            del out[k]
        cc = (ca[0] + ca[0], ca[1] + ca[1])
        for j in range(i + 1, n):
            kb, cb = items[j]
            k = kas + kb
            s = gadd(get(k, _GZERO), gmul(cc, cb))
            if s[0] or s[1]:
                out[k] = s
            else:
                del out[k]
    return out


def pow_terms_g(a, n, base):
    if n == 0:
        return {base: (1, 0)}
    result = None
    sq = a
    while True:
        if n & 1:
            result = sq if result is None else mul_terms_g(result, sq, base)
        n >>= 1
        if not n:
            return result
        sq = sqr_terms_g(sq, base)
