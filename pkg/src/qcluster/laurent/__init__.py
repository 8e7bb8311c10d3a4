"""Exact sparse multivariate Laurent polynomials.

The coefficient ring is fixed per value: ``"Z"`` (plain integers) or ``"Zi"``
(Gaussian integers, stored as ``(re, im)`` pairs).  Values are immutable and
every operation returns a fresh canonical value, so they are safe to share.

Exponent vectors are packed into single integer keys (one 32-bit field per
generator); an upper bound on every |exponent| is carried along and checked
*before* each operation, so exponent overflow raises ExponentOverflow instead
of ever corrupting a key.  Coefficients are native Python ints and grow
without bound.

The hot kernels (plain-ring merge/multiply/exact-divide) come from the
compiled extension ``_kernel`` when it is available, with the pure-Python
``_kernel_py`` as fallback; set QCLUSTER_PURE=1 to force the fallback.
"""

from __future__ import annotations

import json
import os
from types import SimpleNamespace

from ..errors import (
    ArityMismatch,
    ExponentOverflow,
    NonInvertibleSubstitution,
    NotDivisible,
    RingMismatch,
)
from . import _kernel_py as _kg
from ._packing import EXP_LIMIT, OFFSET, base_key, exponent, pack, unpack

if os.environ.get("QCLUSTER_PURE") == "1":
    from . import _kernel_py as _kz
else:
    try:
        from . import _kernel as _kz  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as _kz

KERNEL_IMPL = _kz.IMPL

_OPS = {
    "Z": SimpleNamespace(
        add=_kz.add_terms,
        neg=_kz.neg_terms,
        scale=_kz.scale_terms,
        mul=_kz.mul_terms,
        div=_kz.div_terms,
        pow=_kz.pow_terms,
        one=1,
        coeff_neg=lambda c: -c,
    ),
    "Zi": SimpleNamespace(
        add=_kg.add_terms_g,
        neg=_kg.neg_terms_g,
        scale=_kg.scale_terms_g,
        mul=_kg.mul_terms_g,
        div=_kg.div_terms_g,
        pow=_kg.pow_terms_g,
        one=(1, 0),
        coeff_neg=lambda c: (-c[0], -c[1]),
    ),
}

_GAUSS_UNITS = {(1, 0), (-1, 0), (0, 1), (0, -1)}


def _coerce_coeff(c, ring):
    if ring == "Z":
        if isinstance(c, bool) or not isinstance(c, int):
            raise TypeError(f"plain-ring coefficient must be int, got {c!r}")
        return c
    if isinstance(c, int):
        return (c, 0)
    re, im = c
    return (int(re), int(im))


def _coeff_is_zero(c, ring):
    return c == 0 if ring == "Z" else (c[0] == 0 and c[1] == 0)


class LaurentPoly:
    __slots__ = ("nvars", "ring", "terms", "max_abs")

    def __init__(self, nvars: int, terms=None, ring: str = "Z"):
        """Build from a mapping of exponent tuples to coefficients."""
        if ring not in _OPS:
            raise ValueError(f"unknown ring {ring!r}")
        self.nvars = nvars
        self.ring = ring
        packed = {}
        hi = 0
        if terms:
            for exps, c in terms.items():
                c = _coerce_coeff(c, ring)
                if _coeff_is_zero(c, ring):
                    continue
                packed[pack(exps, nvars)] = c
                m = max(abs(e) for e in exps) if exps else 0
                if m > hi:
                    hi = m
        self.terms = packed
        self.max_abs = hi

    @classmethod
    def _raw(cls, nvars, ring, terms, max_abs):
        p = cls.__new__(cls)
        p.nvars = nvars
        p.ring = ring
        p.terms = terms
        p.max_abs = max_abs
        return p

    # --- constructors ---

    @classmethod
    def zero(cls, nvars, ring="Z"):
        return cls._raw(nvars, ring, {}, 0)

    @classmethod
    def const(cls, nvars, c, ring="Z"):
        c = _coerce_coeff(c, ring)
        if _coeff_is_zero(c, ring):
            return cls.zero(nvars, ring)
        return cls._raw(nvars, ring, {base_key(nvars): c}, 0)

    @classmethod
    def gen(cls, nvars, i, ring="Z"):
        """The i-th generator (0-based)."""
        if not 0 <= i < nvars:
            raise ArityMismatch(f"generator {i} out of range for {nvars} variables")
        key = base_key(nvars) + (1 << (32 * i))
        return cls._raw(nvars, ring, {key: _OPS[ring].one}, 1)

    @classmethod
    def monomial(cls, nvars, exps, c=1, ring="Z"):
        return cls(nvars, {tuple(exps): c}, ring)

    @classmethod
    def gens(cls, nvars, ring="Z"):
        return [cls.gen(nvars, i, ring) for i in range(nvars)]

    # --- basic predicates / views ---

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        """Iterate (exponent tuple, coefficient) in insertion order."""
        n = self.nvars
        for k, c in self.terms.items():
            yield unpack(k, n), c

    def sorted_terms(self):
        """Terms in descending graded-lex order (canonical)."""
        out = [(unpack(k, self.nvars), c) for k, c in self.terms.items()]
        out.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return out

    def coeff(self, exps):
        k = pack(tuple(exps), self.nvars)
        c = self.terms.get(k)
        if c is None:
            return 0 if self.ring == "Z" else (0, 0)
        return c

    def min_exponents(self):
        """Componentwise minimum exponent over the support (zeros if empty)."""
        n = self.nvars
        if not self.terms:
            return (0,) * n
        mins = [None] * n
        for k in self.terms:
            for i in range(n):
                e = exponent(k, i)
                if mins[i] is None or e < mins[i]:
                    mins[i] = e
        return tuple(mins)

    def max_exponents(self):
        n = self.nvars
        if not self.terms:
            return (0,) * n
        maxs = [None] * n
        for k in self.terms:
            for i in range(n):
                e = exponent(k, i)
                if maxs[i] is None or e > maxs[i]:
                    maxs[i] = e
        return tuple(maxs)

    def is_polynomial_in(self, varset) -> bool:
        """True iff no term carries a negative exponent on any listed variable."""
        vs = [v for v in varset if v < self.nvars]
        for k in self.terms:
            for i in vs:
                if exponent(k, i) < 0:
                    return False
        return True

    # --- ring coercion ---

    def to_ring(self, ring):
        if ring == self.ring:
            return self
        if self.ring == "Z" and ring == "Zi":
            return LaurentPoly._raw(
                self.nvars, "Zi", {k: (c, 0) for k, c in self.terms.items()}, self.max_abs
            )
        if self.ring == "Zi" and ring == "Z":
            out = {}
            for k, (re, im) in self.terms.items():
                if im:
                    raise RingMismatch("value has nonzero imaginary part")
                out[k] = re
            return LaurentPoly._raw(self.nvars, "Z", out, self.max_abs)
        raise ValueError(f"unknown ring {ring!r}")

    # --- arithmetic ---

    def _compat(self, other):
        if self.nvars != other.nvars:
            raise ArityMismatch(f"{self.nvars} != {other.nvars} variables")
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def _coerce_operand(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int) or (self.ring == "Zi" and isinstance(other, tuple)):
            return LaurentPoly.const(self.nvars, other, self.ring)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce_operand(other)
        if other is NotImplemented:
            return NotImplemented
        self._compat(other)
        terms = _OPS[self.ring].add(self.terms, other.terms)
        return LaurentPoly._raw(self.nvars, self.ring, terms, max(self.max_abs, other.max_abs))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(
            self.nvars, self.ring, _OPS[self.ring].neg(self.terms), self.max_abs
        )

    def __sub__(self, other):
        other = self._coerce_operand(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce_operand(other)
        if other is NotImplemented:
            return NotImplemented
        self._compat(other)
        bound = self.max_abs + other.max_abs
        if bound >= OFFSET:
            raise ExponentOverflow(f"exponent bound {bound} exceeds packed-field capacity")
        terms = _OPS[self.ring].mul(self.terms, other.terms, base_key(self.nvars))
        return LaurentPoly._raw(self.nvars, self.ring, terms, bound)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power; invert a unit monomial explicitly")
        if n * self.max_abs >= OFFSET:
            raise ExponentOverflow(f"exponent bound {n * self.max_abs} exceeds capacity")
        terms = _OPS[self.ring].pow(self.terms, n, base_key(self.nvars))
        return LaurentPoly._raw(self.nvars, self.ring, terms, n * self.max_abs)

    def exact_div(self, other):
        """Exact quotient self/other; raises NotDivisible when none exists.

        On cluster walks a NotDivisible here means a violated Laurent /
        Q-system identity, so callers never catch it silently.
        """
        other = self._coerce_operand(other)
        self._compat(other)
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        bound = self.max_abs + other.max_abs
        if bound >= OFFSET:
            raise ExponentOverflow(f"exponent bound {bound} exceeds packed-field capacity")
        quo = _OPS[self.ring].div(self.terms, other.terms, self.nvars, base_key(self.nvars))
        if quo is None:
            raise NotDivisible("no exact Laurent quotient")
        return LaurentPoly._raw(self.nvars, self.ring, quo, bound)

    def divides(self, other) -> bool:
        """True iff self divides other exactly."""
        try:
            other.exact_div(self)
            return True
        except NotDivisible:
            return False

    def _unit_inverse(self):
        """Inverse of a unit monomial (single term, unit coefficient)."""
        if len(self.terms) != 1:
            raise NonInvertibleSubstitution("image is not a monomial")
        ((k, c),) = self.terms.items()
        n = self.nvars
        base = base_key(n)
        inv_key = base - (k - base)
        if self.ring == "Z":
            if c not in (1, -1):
                raise NonInvertibleSubstitution(f"coefficient {c} is not a unit")
            inv_c = c
        else:
            if c not in _GAUSS_UNITS:
                raise NonInvertibleSubstitution(f"coefficient {c} is not a unit")
            # the four units are their own inverses except ±i, which swap
            inv_c = (c[0], -c[1])
        return LaurentPoly._raw(n, self.ring, {inv_key: inv_c}, self.max_abs)

    def substitute(self, images, nvars_out=None, ring=None):
        """Exact composition: replace generators by the given images.

        ``images`` maps 0-based generator indices to LaurentPoly values or
        constants.  Unmapped generators map to themselves (so ``nvars_out``
        must cover their indices).  A generator that occurs with a negative
        exponent must be sent to an invertible image (unit monomial),
        otherwise NonInvertibleSubstitution is raised.
        """
        n_out = self.nvars if nvars_out is None else nvars_out
        ring_out = ring
        if ring_out is None:
            ring_out = self.ring
            for im in images.values():
                if isinstance(im, LaurentPoly) and im.ring == "Zi":
                    ring_out = "Zi"
                elif isinstance(im, tuple):
                    ring_out = "Zi"
        imgs = {}
        for i, im in images.items():
            if not isinstance(im, LaurentPoly):
                im = LaurentPoly.const(n_out, im, ring_out)
            else:
                im = im.to_ring(ring_out)
            if im.nvars != n_out:
                raise ArityMismatch("image arity differs from output arity")
            imgs[i] = im
        mins = self.min_exponents()
        inverses = {}
        for i in range(self.nvars):
            if mins[i] < 0 and i in imgs:
                inverses[i] = imgs[i]._unit_inverse()
        one = LaurentPoly.const(n_out, 1, ring_out)
        pow_cache = {}

        def image_power(i, e):
            got = pow_cache.get((i, e))
            if got is not None:
                return got
            if i in imgs:
                p = (imgs[i] if e > 0 else inverses[i]) ** abs(e)
            else:
                if i >= n_out:
                    raise ArityMismatch(f"generator {i} has no image and no slot")
                p = LaurentPoly.monomial(n_out, tuple(e if j == i else 0 for j in range(n_out)), 1, ring_out)
            pow_cache[(i, e)] = p
            return p

        total = LaurentPoly.zero(n_out, ring_out)
        for exps, c in self.items():
            term = LaurentPoly.const(n_out, c, ring_out)
            for i, e in enumerate(exps):
                if e:
                    term = term * image_power(i, e)
            total = total + term
        return total

    # --- equality / hashing ---

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(self.nvars, other, self.ring)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, self.ring, frozenset(self.terms.items())))

    # --- serialization / rendering ---

    def to_json(self):
        terms = []
        for exps, c in self.sorted_terms():
            terms.append({"e": list(exps), "c": c if self.ring == "Z" else [c[0], c[1]]})
        return {"nvars": self.nvars, "ring": self.ring, "terms": terms}

    @classmethod
    def from_json(cls, data):
        ring = data.get("ring", "Z")
        terms = {}
        for t in data["terms"]:
            c = t["c"]
            terms[tuple(t["e"])] = tuple(c) if ring == "Zi" else c
        return cls(data["nvars"], terms, ring)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def loads(cls, s: str):
        return cls.from_json(json.loads(s))

    def render(self, names=None) -> str:
        """Human-readable form, graded-lex descending, e.g. ``x1^2 - x2``."""
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        pieces = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                f"{names[i]}^{e}" if e != 1 else names[i] for i, e in enumerate(exps) if e
            )
            if self.ring == "Z":
                sign = "-" if c < 0 else "+"
                mag = abs(c)
                cs = "" if (mag == 1 and mono) else str(mag)
            else:
                re, im = c
                if im == 0:
                    sign = "-" if re < 0 else "+"
                    mag = abs(re)
                    cs = "" if (mag == 1 and mono) else str(mag)
                elif re == 0:
                    sign = "-" if im < 0 else "+"
                    mag = abs(im)
                    cs = "i" if mag == 1 else f"{mag}i"
                else:
                    sign = "+"
                    cs = f"({re}{im:+d}i)"
            body = cs if not mono else (f"{cs}*{mono}" if cs else mono)
            pieces.append((sign, body))
        sign0, body0 = pieces[0]
        out = ("-" if sign0 == "-" else "") + body0
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPoly({self.nvars}, {self.ring}: {self.render()})"


# --- functional aliases matching the operation surface ---


def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def power(p: LaurentPoly, n: int) -> LaurentPoly:
    return p**n


def exact_div(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p.exact_div(q)


def substitute(p: LaurentPoly, images, nvars_out=None, ring=None) -> LaurentPoly:
    return p.substitute(images, nvars_out=nvars_out, ring=ring)


def is_polynomial_in(p: LaurentPoly, varset) -> bool:
    return p.is_polynomial_in(varset)


def min_exponents(p: LaurentPoly):
    return p.min_exponents()
