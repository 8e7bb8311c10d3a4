"""Cartan matrices, symmetrizers and root-length data for the finite types.

Node numbering follows the usual Bourbaki conventions with the double edge
placed as in the walk diagrams used downstream: B_r has its short root at
node r, C_r its long root at node r, F4 carries the arrow 2=>3 (so 3, 4 are
short), and G2 has its short root at node 2.  Entry convention:
C[a][b] = 2(alpha_a, alpha_b)/(alpha_a, alpha_a), so short-root *rows* carry
the -2 / -3 entries and C·diag(t) is symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidType

SIMPLY_LACED = {"A", "D", "E"}


@dataclass(frozen=True)
class CartanData:
    type_label: str
    rank: int
    C: tuple  # rank x rank tuple of tuples
    t: tuple  # symmetrizers, C·diag(t) symmetric
    short_roots: frozenset = field(compare=False)
    long_roots: frozenset = field(compare=False)
    neighbors: dict = field(compare=False, hash=False)

    @property
    def name(self) -> str:
        return f"{self.type_label}{self.rank}"

    @property
    def simply_laced(self) -> bool:
        return self.type_label in SIMPLY_LACED

    def c(self, a: int, b: int) -> int:
        """Cartan entry, 1-based node indices."""
        return self.C[a - 1][b - 1]

    def to_json(self):
        return {
            "type": self.type_label,
            "rank": self.rank,
            "C": [list(row) for row in self.C],
            "t": list(self.t),
        }


def _adjacency(label: str, rank: int):
    """Dynkin edges as a set of unordered 1-based pairs."""
    edges = {(i, i + 1) for i in range(1, rank)}
    if label == "D":
        edges.discard((rank - 1, rank))
        edges.add((rank - 2, rank))
    elif label == "E":
        # path 1-3-4-5-...-rank with node 2 hanging off node 4
        edges = {(1, 3), (2, 4)} | {(i, i + 1) for i in range(3, rank)}
    return edges


def build_cartan(type_label: str, rank: int) -> CartanData:
    """Construct the Cartan data for one finite type; raises InvalidType."""
    label = type_label.upper()
    ok = (
        (label == "A" and rank >= 1)
        or (label in ("B", "C") and rank >= 2)
        or (label == "D" and rank >= 4)
        or (label == "E" and rank in (6, 7, 8))
        or (label == "F" and rank == 4)
        or (label == "G" and rank == 2)
    )
    if not ok:
        raise InvalidType(f"unsupported finite type {type_label}{rank}")

    t = [1] * rank
    if label == "B":
        t[rank - 1] = 2
    elif label == "C":
        for a in range(rank - 1):
            t[a] = 2
    elif label == "F":
        t[2] = t[3] = 2
    elif label == "G":
        t[1] = 3

    C = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for i, j in _adjacency(label, rank):
        a, b = i - 1, j - 1
        # short-root rows see long neighbors with entry -t_short
        C[a][b] = -t[a] if t[a] > t[b] else -1
        C[b][a] = -t[b] if t[b] > t[a] else -1

    neighbors = {
        a: frozenset(b for b in range(1, rank + 1) if b != a and C[a - 1][b - 1] != 0)
        for a in range(1, rank + 1)
    }
    tmax = max(t)
    short = frozenset(a for a in range(1, rank + 1) if tmax > 1 and t[a - 1] == tmax)
    long_ = frozenset(range(1, rank + 1)) - short
    return CartanData(
        type_label=label,
        rank=rank,
        C=tuple(tuple(row) for row in C),
        t=tuple(t),
        short_roots=short,
        long_roots=long_,
        neighbors=neighbors,
    )


def parse_algebra(name: str) -> CartanData:
    """Parse labels like 'A1', 'b3', 'G2'."""
    name = name.strip()
    if len(name) < 2 or name[0].upper() not in "ABCDEFG":
        raise InvalidType(f"cannot parse algebra name {name!r}")
    try:
        rank = int(name[1:])
    except ValueError:
        raise InvalidType(f"cannot parse algebra name {name!r}") from None
    return build_cartan(name[0], rank)


def from_json(data) -> CartanData:
    cd = build_cartan(data["type"], data["rank"])
    if [list(r) for r in cd.C] != data["C"] or list(cd.t) != data["t"]:
        raise InvalidType("serialized Cartan data disagrees with the built-in tables")
    return cd


def index_sets(cd: CartanData) -> dict:
    """The six index sets on {1,..,2r} used by the walk schedules.

    Pi = {1..r}, Pi' = {r+1..2r}; Pi_lt / Pi_gt split Pi into short / long
    roots, and the primed versions are shifted by the rank.
    """
    r = cd.rank
    return {
        "Pi": frozenset(range(1, r + 1)),
        "Pi_prime": frozenset(range(r + 1, 2 * r + 1)),
        "Pi_lt": cd.short_roots,
        "Pi_gt": cd.long_roots,
        "Pi_lt_prime": frozenset(a + r for a in cd.short_roots),
        "Pi_gt_prime": frozenset(a + r for a in cd.long_roots),
    }
