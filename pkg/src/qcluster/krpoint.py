"""Kirillov-Reshetikhin point specialization and the polynomiality machinery.

At the origin seed the level-0 generators b (indices 0..r-1) play the role of
the eliminable block: mutating a level-1 slot alpha+r produces
N_alpha(b) / a_alpha, where N_alpha is an exchange binomial in the b's alone.
The KR point is the evaluation of b at a root of N (b_alpha = 1 in the plain
system, b_alpha = eps_alpha in the normalized one); there every cluster
variable of the full mutation tree collapses to an honest polynomial in the
a's, and for Laurent terms with negative a-exponents the b-coefficient must
carry the matching power of N as a factor.  All of that is checked here by
exact arithmetic.
"""

from __future__ import annotations

import random

from .cartan import CartanData
from .cluster import Seed, mutate
from .errors import DivisibilityFailure, PolynomialityFailure
from .laurent import LaurentPoly
from .qsystem import build_seed, epsilon_values, exchange_matrix


def a_indices(cd: CartanData):
    """0-based generator slots of the level-1 variables."""
    return tuple(range(cd.rank, 2 * cd.rank))


def b_indices(cd: CartanData):
    return tuple(range(cd.rank))


def specialize_kr(p: LaurentPoly, cd: CartanData, *, normalized: bool = False) -> LaurentPoly:
    """Evaluate the level-0 generators at the KR point, a's left formal.

    Plain mode sends every b_alpha to 1; normalized mode sends it to the
    fourth root of unity eps_alpha (the result ring is ZZ[i] whenever some
    eps is imaginary).  Substituted values are units, so this is total.
    """
    r = cd.rank
    if normalized:
        eps = epsilon_values(cd)
        ring = "Zi" if any(im for _, im in eps) else "Z"
        vals = eps if ring == "Zi" else tuple(re for re, _ in eps)
        images = {a: vals[a] for a in range(r)}
        return p.substitute(images, ring=ring)
    return p.substitute({a: 1 for a in range(r)})


def check_polynomiality(p: LaurentPoly, varset=None) -> bool:
    """True iff p carries no negative exponent on the listed variables (all by default)."""
    if varset is None:
        varset = range(p.nvars)
    return p.is_polynomial_in(varset)


def exchange_binomials(cd: CartanData, *, normalized: bool = True):
    """The binomials N_alpha(b) read off the level-1 columns of the seed matrix.

    N_alpha = prod_j b_j^{[B_{j,r+alpha}]_+} + sign * prod_j b_j^{[-B_{j,r+alpha}]_+},
    which is b_alpha^2 + sign * prod_{beta ~ alpha} b_beta^{|C_{alpha,beta}|};
    the sign is +1 for the normalized system and -1 for the plain one.
    """
    r = cd.rank
    B = exchange_matrix(cd)
    sign = 1 if normalized else -1
    out = []
    for a in range(r):
        plus = LaurentPoly.const(2 * r, 1, "Z")
        minus = LaurentPoly.const(2 * r, 1, "Z")
        for j in range(r):
            e = B[j][r + a]
            if e > 0:
                plus = plus * LaurentPoly.gen(2 * r, j, "Z") ** e
            elif e < 0:
                minus = minus * LaurentPoly.gen(2 * r, j, "Z") ** (-e)
        out.append(plus + sign * minus)
    return out


def divisibility_audit(p: LaurentPoly, cd: CartanData, *, normalized: bool = True) -> dict:
    """Factor-check the coefficient polynomials of the negative-a terms.

    Writes p = b^{-m} P with P polynomial in the b's, decomposes
    P = sum_n C_n(b) a^n, and verifies by exact division that each C_n with
    negative components n_j carries the factor prod N_j(b)^{-n_j}.  A failure
    would falsify the divisibility property and raises DivisibilityFailure.
    """
    r = cd.rank
    binomials = exchange_binomials(cd, normalized=normalized)
    mins = p.min_exponents()
    shift = tuple(-min(mins[i], 0) if i < r else 0 for i in range(p.nvars))
    P = p * LaurentPoly.monomial(p.nvars, shift, 1, "Z")
    by_a = {}
    for exps, c in P.items():
        n_vec = exps[r:]
        b_part = exps[:r] + (0,) * r
        acc = by_a.setdefault(n_vec, {})
        acc[b_part] = c
    report = {"terms": [], "ok": True}
    for n_vec in sorted(by_a):
        negs = [(j, -e) for j, e in enumerate(n_vec) if e < 0]
        if not negs:
            continue
        coeff_poly = LaurentPoly(p.nvars, by_a[n_vec], "Z")
        required = LaurentPoly.const(p.nvars, 1, "Z")
        for j, mult in negs:
            required = required * binomials[j] ** mult
        entry = {
            "term_exponents": list(n_vec),
            "required_factor_degrees": [[j + 1, m] for j, m in negs],
        }
        entry["pass"] = required.divides(coeff_poly)
        report["terms"].append(entry)
        if not entry["pass"]:
            report["ok"] = False
            raise DivisibilityFailure(
                f"coefficient of a^{n_vec} misses a factor prod N^{dict(negs)}"
            )
    return report


def random_mutation_paths(cd: CartanData, n_paths: int, max_len: int, rng_seed: int):
    """Seeded off-schedule mutation sample from the origin seed.

    Yields (path, final_seed); immediate backtracking is excluded (a repeat
    is the identity), everything else is fair game.  The rng seed is part of
    the report upstream so failures replay exactly.
    """
    rng = random.Random(rng_seed)
    n = 2 * cd.rank
    base = build_seed(cd)
    for _ in range(n_paths):
        length = rng.randint(1, max_len)
        seed = base
        path = []
        prev = None
        for _ in range(length):
            k = rng.randint(1, n)
            while k == prev:
                k = rng.randint(1, n)
            seed = mutate(seed, k)
            path.append(k)
            prev = k
        yield path, seed


def strong_laurent_sample(cd: CartanData, *, n_paths: int, max_len: int,
                          rng_seed: int) -> dict:
    """Off-graph Laurent + KR-polynomiality sample (the strong Laurent property).

    Every mutation along every sampled path must divide exactly (NotDivisible
    would propagate), and every produced variable, specialized at the KR
    point, must be a polynomial in the level-1 variables.
    """
    checked = 0
    for path, seed in random_mutation_paths(cd, n_paths, max_len, rng_seed):
        for x in seed.x:
            s = specialize_kr(x, cd, normalized=True)
            if not check_polynomiality(s, a_indices(cd)):
                raise PolynomialityFailure(
                    f"{cd.name}: path {path} produced a non-polynomial KR specialization"
                )
        checked += 1
    return {"type": cd.name, "paths": checked, "max_len": max_len,
            "rng_seed": rng_seed, "status": "ok"}
