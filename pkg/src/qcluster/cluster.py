"""Cluster seeds and mutations, with optional frozen coefficient rows.

A seed is (x, B): n cluster variables (exact Laurent polynomials in the
initial variables) and a skew-symmetric n x n integer exchange matrix.  The
augmented form stacks m extra frozen rows under B; the frozen values enter
exchange binomials through those rows but never mutate themselves.

mutate() implements the exchange

    x_k -> x_k^{-1} ( prod_j x_j^{[B_jk]_+} + prod_j x_j^{[-B_jk]_+} )

with the product running over mutable and frozen rows alike, and the matrix
rule B_ij -> -B_ij (i=k or j=k), else B_ij + sgn(B_ik)[B_ik B_kj]_+, applied
to the frozen rows as well.  The division is exact by the Laurent phenomenon;
if it ever fails, NotDivisible propagates with the failing index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import IndexOutOfRange, NonCommutingSet, NotDivisible
from .laurent import LaurentPoly


def _pos(v: int) -> int:
    return v if v > 0 else 0


@dataclass(frozen=True)
class Seed:
    n: int
    x: tuple  # n LaurentPoly
    B: tuple  # n x n tuple of tuples
    frozen_rows: Optional[tuple] = None  # m x n
    frozen_values: Optional[tuple] = None  # m LaurentPoly

    def __post_init__(self):
        if len(self.x) != self.n or len(self.B) != self.n:
            raise ValueError("seed dimensions disagree")
        if (self.frozen_rows is None) != (self.frozen_values is None):
            raise ValueError("frozen rows and values must come together")

    @property
    def m(self) -> int:
        return 0 if self.frozen_rows is None else len(self.frozen_rows)

    def b(self, i: int, j: int) -> int:
        """Entry of the full augmented column stack, 1-based; rows i > n are frozen."""
        if i <= self.n:
            return self.B[i - 1][j - 1]
        return self.frozen_rows[i - self.n - 1][j - 1]

    def to_json(self):
        data = {
            "n": self.n,
            "B": [list(r) for r in self.B],
            "x": [p.to_json() for p in self.x],
        }
        if self.frozen_rows is not None:
            data["frozen_rows"] = [list(r) for r in self.frozen_rows]
            data["frozen_values"] = [p.to_json() for p in self.frozen_values]
        return data

    @classmethod
    def from_json(cls, data):
        fr = data.get("frozen_rows")
        return cls(
            n=data["n"],
            x=tuple(LaurentPoly.from_json(t) for t in data["x"]),
            B=tuple(tuple(r) for r in data["B"]),
            frozen_rows=None if fr is None else tuple(tuple(r) for r in fr),
            frozen_values=None
            if fr is None
            else tuple(LaurentPoly.from_json(t) for t in data["frozen_values"]),
        )


def check_skew(seed: Seed) -> bool:
    B = seed.B
    n = seed.n
    return all(B[i][j] == -B[j][i] for i in range(n) for j in range(n))


def seed_equal(s1: Seed, s2: Seed) -> bool:
    """Exact structural equality (canonical variables and matrices)."""
    return (
        s1.n == s2.n
        and s1.B == s2.B
        and s1.x == s2.x
        and s1.frozen_rows == s2.frozen_rows
        and s1.frozen_values == s2.frozen_values
    )


def mutate_matrix(B, k: int, frozen_rows=None):
    """Matrix half of the mutation at 1-based index k; variables untouched.

    Returns (B', frozen_rows').  Cheap, used for matrix-only schedule checks.
    """
    n = len(B)
    if not 1 <= k <= n:
        raise IndexOutOfRange(f"mutation index {k} outside 1..{n}")
    kk = k - 1
    col_k = [B[i][kk] for i in range(n)]
    row_k = B[kk]

    def new_row(row, bik):
        out = []
        for j in range(n):
            if j == kk:
                out.append(-row[j])
            else:
                bkj = row_k[j]
                if bik > 0 and bkj > 0:
                    out.append(row[j] + bik * bkj)
                elif bik < 0 and bkj < 0:
                    out.append(row[j] - bik * bkj)
                else:
                    out.append(row[j])
        return tuple(out)

    Bp = []
    for i in range(n):
        if i == kk:
            Bp.append(tuple(-v for v in row_k))
        else:
            Bp.append(new_row(B[i], col_k[i]))
    frp = None
    if frozen_rows is not None:
        frp = tuple(new_row(row, row[kk]) for row in frozen_rows)
    return tuple(Bp), frp


def mutate(seed: Seed, k: int) -> Seed:
    """Mutation at 1-based index k; involutive: mutate(mutate(s,k),k) == s."""
    n = seed.n
    if not 1 <= k <= n:
        raise IndexOutOfRange(f"mutation index {k} outside 1..{n}")
    kk = k - 1
    ring = seed.x[0].ring
    nvars = seed.x[0].nvars
    plus = LaurentPoly.const(nvars, 1, ring)
    minus = plus
    for j in range(n):
        e = seed.B[j][kk]
        if e > 0:
            plus = plus * seed.x[j] ** e
        elif e < 0:
            minus = minus * seed.x[j] ** (-e)
    if seed.frozen_rows is not None:
        for f, row in enumerate(seed.frozen_rows):
            e = row[kk]
            if e > 0:
                plus = plus * seed.frozen_values[f] ** e
            elif e < 0:
                minus = minus * seed.frozen_values[f] ** (-e)
    try:
        new_xk = (plus + minus).exact_div(seed.x[kk])
    except NotDivisible as exc:
        raise NotDivisible(f"exchange at index {k} not a Laurent polynomial: {exc}") from exc
    x = list(seed.x)
    x[kk] = new_xk
    Bp, frp = mutate_matrix(seed.B, k, seed.frozen_rows)
    return Seed(n=n, x=tuple(x), B=Bp, frozen_rows=frp, frozen_values=seed.frozen_values)


def compound_mutate(seed: Seed, index_set) -> Seed:
    """Simultaneous mutation of a pairwise-commuting index set (B_ij = 0 on it).

    Equals sequential mutation in any order; as a regression tripwire the
    matrix result is recomputed in reversed order and compared.  Raises
    NonCommutingSet when the commutation precondition fails.
    """
    idx = sorted(set(index_set))
    for i in idx:
        if not 1 <= i <= seed.n:
            raise IndexOutOfRange(f"mutation index {i} outside 1..{seed.n}")
    for a in idx:
        for b in idx:
            if a != b and seed.B[a - 1][b - 1] != 0:
                raise NonCommutingSet(f"B[{a}][{b}] = {seed.B[a - 1][b - 1]} != 0")
    out = seed
    for i in idx:
        out = mutate(out, i)
    # order-independence tripwire on the cheap (matrix) half
    B2, fr2 = seed.B, seed.frozen_rows
    for i in reversed(idx):
        B2, fr2 = mutate_matrix(B2, i, fr2)
    if B2 != out.B or fr2 != out.frozen_rows:
        raise NonCommutingSet(f"mutation order changed the matrix on {idx}")
    return out
