"""Tiny exact integer-matrix helpers (tuples of tuples)."""


def mat_neg(M):
    return tuple(tuple(-v for v in row) for row in M)


def mat_add(M, N):
    return tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(M, N))


def mat_sub(M, N):
    return tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(M, N))


def mat_transpose(M):
    return tuple(tuple(M[i][j] for i in range(len(M))) for j in range(len(M[0])))


def mat_zero(n, m=None):
    m = n if m is None else m
    return tuple((0,) * m for _ in range(n))


def mat_eq(M, N):
    return all(tuple(r1) == tuple(r2) for r1, r2 in zip(M, N)) and len(M) == len(N)


def mat_block(tl, tr, bl, br):
    """Stack four blocks into one matrix."""
    top = [tuple(r1) + tuple(r2) for r1, r2 in zip(tl, tr)]
    bottom = [tuple(r1) + tuple(r2) for r1, r2 in zip(bl, br)]
    return tuple(top + bottom)
