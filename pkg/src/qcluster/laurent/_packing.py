"""Packed exponent-vector keys.

An exponent vector (e_0, ..., e_{n-1}) with e_i in ZZ is stored as a single
integer: variable i occupies a 32-bit field holding e_i + OFFSET.  Monomial
multiplication is then one big-int addition (minus the constant base), and
dict lookups hash a small int instead of a tuple.

Field arithmetic never carries as long as every participating exponent stays
below EXP_LIMIT in absolute value; callers enforce that bound *before*
operating (see LaurentPoly.max_abs), so a corrupted key is impossible.
"""

FIELD_BITS = 32
FIELD_MASK = (1 << FIELD_BITS) - 1
OFFSET = 1 << 30
# One mul adds two in-range exponents, so the per-operand bound is half of
# what a field can absorb on top of OFFSET.
EXP_LIMIT = 1 << 29


def base_key(nvars: int) -> int:
    """Packed representation of the zero exponent vector."""
    b = 0
    for i in range(nvars):
        b |= OFFSET << (FIELD_BITS * i)
    return b


def pack(exps, nvars: int) -> int:
    if len(exps) != nvars:
        raise ValueError(f"expected {nvars} exponents, got {len(exps)}")
    k = 0
    for i, e in enumerate(exps):
        if not -EXP_LIMIT < e < EXP_LIMIT:
            from ..errors import ExponentOverflow

            raise ExponentOverflow(f"exponent {e} outside ±{EXP_LIMIT}")
        k |= (e + OFFSET) << (FIELD_BITS * i)
    return k


def unpack(key: int, nvars: int) -> tuple:
    return tuple(((key >> (FIELD_BITS * i)) & FIELD_MASK) - OFFSET for i in range(nvars))


def exponent(key: int, i: int) -> int:
    return ((key >> (FIELD_BITS * i)) & FIELD_MASK) - OFFSET
