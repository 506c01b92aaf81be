"""Exact sparse multivariate polynomial and Laurent polynomial arithmetic.

Coefficients are arbitrary-precision rationals (``_backend.RAT``), always
in lowest terms.  A polynomial in ``n`` variables is a mapping from a
packed exponent key to a nonzero coefficient.  Exponent vectors are
packed into one int, 16 bits per variable with a +2**15 bias, first
variable in the most significant field.  Properties the rest of the
package relies on:

  * integer order on keys == descending lexicographic order on vectors,
  * monomial product == key addition minus the ring's zero key,
  * ``key & ring.mask == ring.mask`` iff every exponent is >= 0.

Laurent polynomials (negative exponents) share the representation;
``Polynomial`` is one class for both, and the operations that require a
genuine polynomial check :meth:`Polynomial.is_polynomial` and raise
:class:`NotPolynomial`.  Per-variable exponents must stay below 2**14 in
absolute value; everything built here stays below a few hundred.
"""

from __future__ import annotations

import json
import re
from functools import lru_cache
from math import gcd
from typing import Iterable, Iterator, Mapping, Sequence

from coxops._backend import RAT, kernels

FIELD_BITS = 16
BIAS = 1 << 15
EXP_LIMIT = 1 << 14

_kadd = kernels.kadd
_ksub = kernels.ksub
_kscale = kernels.kscale
_kmul = kernels.kmul
_kmul_mono = kernels.kmul_mono
_kdivexact = kernels.kdivexact


class NotDivisible(ArithmeticError):
    """Exact polynomial division failed (also the membership-failure signal)."""


class NotPolynomial(ValueError):
    """A Laurent value was coerced to a polynomial but has negative exponents."""


class PolyRing:
    """Descriptor of a polynomial/Laurent ring: variable count, names, packing."""

    __slots__ = ("nvars", "names", "zero_key", "mask", "_shifts")

    def __init__(self, nvars: int, names: Sequence[str] | None = None):
        if nvars < 1:
            raise ValueError("ring needs at least one variable")
        if names is None:
            names = tuple(f"x{i + 1}" for i in range(nvars))
        else:
            names = tuple(names)
            if len(names) != nvars:
                raise ValueError("name count does not match variable count")
        self.nvars = nvars
        self.names = names
        self._shifts = tuple(FIELD_BITS * (nvars - 1 - i) for i in range(nvars))
        self.zero_key = sum(BIAS << s for s in self._shifts)
        self.mask = self.zero_key  # per-field high bit == the bias bit

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, PolyRing) and self.nvars == other.nvars and self.names == other.names

    def __hash__(self):
        return hash((self.nvars, self.names))

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)})"

    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise ValueError(f"expected {self.nvars} exponents, got {len(exps)}")
        key = 0
        for e, s in zip(exps, self._shifts):
            if not -EXP_LIMIT < e < EXP_LIMIT:
                raise ValueError(f"exponent {e} out of supported range")
            key += (e + BIAS) << s
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        return tuple(((key >> s) & 0xFFFF) - BIAS for s in self._shifts)

    def key_degree(self, key: int) -> int:
        total = 0
        for s in self._shifts:
            total += (key >> s) & 0xFFFF
        return total - self.nvars * BIAS

    # -- constructors -------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {self.zero_key: RAT(1)})

    def const(self, c) -> "Polynomial":
        c = RAT(c)
        return Polynomial(self, {self.zero_key: c} if c else {})

    def var(self, i: int, power: int = 1) -> "Polynomial":
        exps = [0] * self.nvars
        exps[i] = power
        return Polynomial(self, {self.pack(exps): RAT(1)})

    def monomial(self, exps: Sequence[int], coef=1) -> "Polynomial":
        coef = RAT(coef)
        return Polynomial(self, {self.pack(exps): coef} if coef else {})

    def from_terms(self, terms: Mapping[Sequence[int], object]) -> "Polynomial":
        out: dict = {}
        for exps, c in terms.items():
            c = RAT(c)
            if not c:
                continue
            k = self.pack(exps)
            c = out.get(k, RAT(0)) + c
            if c:
                out[k] = c
            else:
                out.pop(k, None)
        return Polynomial(self, out)

    def parse(self, text: str) -> "Polynomial":
        return _parse(self, text)


@lru_cache(maxsize=None)
def xring(nvars: int) -> PolyRing:
    """The ring Q[x1..xn] (shared instance)."""
    return PolyRing(nvars)


@lru_cache(maxsize=None)
def tring(nvars: int) -> PolyRing:
    """The ring Q[t1..tn, t1^-1..] used for the symmetric-function layer."""
    return PolyRing(nvars, tuple(f"t{i + 1}" for i in range(nvars)))


class Polynomial:
    """Immutable-by-convention sparse (Laurent) polynomial."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- basic queries -------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def is_polynomial(self) -> bool:
        m = self.ring.mask
        return all(k & m == m for k in self.terms)

    def require_polynomial(self) -> "Polynomial":
        if not self.is_polynomial:
            raise NotPolynomial(f"negative exponents in {self}")
        return self

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring.zero_key in self.terms)

    def constant_value(self):
        if not self.terms:
            return RAT(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms[self.ring.zero_key]

    def degree(self) -> int:
        """Total degree (signed for Laurent).  The zero polynomial has none."""
        if not self.terms:
            raise ValueError("the zero polynomial has no degree")
        kd = self.ring.key_degree
        return max(kd(k) for k in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        kd = self.ring.key_degree
        it = iter(self.terms)
        d = kd(next(it))
        return all(kd(k) == d for k in it)

    def min_exps(self) -> tuple[int, ...]:
        """Per-variable minimum exponent over all terms (zero poly -> zeros)."""
        if not self.terms:
            return (0,) * self.ring.nvars
        mins = [EXP_LIMIT] * self.ring.nvars
        for k in self.terms:
            for i, s in enumerate(self.ring._shifts):
                e = ((k >> s) & 0xFFFF) - BIAS
                if e < mins[i]:
                    mins[i] = e
        return tuple(mins)

    def iter_terms(self) -> Iterator[tuple[tuple[int, ...], object]]:
        """(exponent vector, coefficient) pairs in descending lex order."""
        unpack = self.ring.unpack
        for k in sorted(self.terms, reverse=True):
            yield unpack(k), self.terms[k]

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(self.ring.pack(exps), RAT(0))

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        if isinstance(other, (int, type(RAT(0)))):
            return self.ring.const(other)
        return None

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {k: -v for k, v in self.terms.items()})

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Polynomial(self.ring, _kadd(self.terms, other.terms))

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Polynomial(self.ring, _ksub(self.terms, other.terms))

    def __rsub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Polynomial(self.ring, _ksub(other.terms, self.terms))

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return Polynomial(self.ring, _kmul(self.terms, other.terms, self.ring.zero_key))
        if isinstance(other, (int, type(RAT(0)))):
            return Polynomial(self.ring, _kscale(self.terms, RAT(other)))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            if len(self.terms) == 1:
                return self.mono_inverse() ** (-n)
            raise ValueError("negative powers only for monomials")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __truediv__(self, other) -> "Polynomial":
        if isinstance(other, (int, type(RAT(0)))):
            if not other:
                raise ZeroDivisionError("division by zero")
            return Polynomial(self.ring, _kscale(self.terms, 1 / RAT(other)))
        return NotImplemented

    def mul_monomial(self, exps: Sequence[int], coef=1) -> "Polynomial":
        shift = self.ring.pack(exps) - self.ring.zero_key
        return Polynomial(self.ring, _kmul_mono(self.terms, shift, RAT(coef)))

    def mono_inverse(self) -> "Polynomial":
        """Inverse of a single-term (monomial) polynomial, in the Laurent ring."""
        if len(self.terms) != 1:
            raise ValueError("only monomials are invertible")
        ((k, v),) = self.terms.items()
        return Polynomial(self.ring, {2 * self.ring.zero_key - k: 1 / v})

    def dilate(self, factor: int) -> "Polynomial":
        """Substitute every variable v -> v**factor (exponent scaling)."""
        ring = self.ring
        out = {}
        for k, v in self.terms.items():
            out[ring.pack([e * factor for e in ring.unpack(k)])] = v
        return Polynomial(ring, out)

    def permute_vars(self, perm: Sequence[int]) -> "Polynomial":
        """Rename variables: old index i becomes perm[i]."""
        ring = self.ring
        shifts = ring._shifts
        out = {}
        for k, v in self.terms.items():
            nk = 0
            for i, s in enumerate(shifts):
                nk += ((k >> s) & 0xFFFF) << shifts[perm[i]]
            out[nk] = v
        return Polynomial(ring, out)

    def derive(self, orders: Sequence[int]) -> "Polynomial":
        """Formal partial derivative d^orders (one order per variable)."""
        ring = self.ring
        shift = ring.pack(orders) - ring.zero_key
        out = {}
        for k, v in self.terms.items():
            m = 1
            for o, s in zip(orders, ring._shifts):
                if not o:
                    continue
                e = ((k >> s) & 0xFFFF) - BIAS
                for j in range(o):
                    m *= e - j
                if not m:
                    break
            if not m:
                continue
            out[k - shift] = v * m
        return Polynomial(ring, out)

    # -- division ------------------------------------------------------

    def exact_div(self, den: "Polynomial") -> "Polynomial":
        """Exact quotient self/den; raises NotDivisible if it does not exist.

        Polynomial inputs use polynomial-ring divisibility.  Laurent
        inputs divide in the Laurent ring (monomials are units there):
        both operands are shifted into the nonnegative orthant, divided,
        and the quotient is shifted back.
        """
        den = self._coerce(den)
        if den is None or not den.terms:
            raise ZeroDivisionError("division by zero polynomial")
        if not self.terms:
            return self.ring.zero()
        ring = self.ring
        mn = self.min_exps()
        md = den.min_exps()
        num_t, den_t = self.terms, den.terms
        back = None
        if any(e < 0 for e in mn) or any(e < 0 for e in md):
            num_t = _kmul_mono(num_t, ring.zero_key - ring.pack(mn), RAT(1))
            den_t = _kmul_mono(den_t, ring.zero_key - ring.pack(md), RAT(1))
            back = ring.pack([a - b for a, b in zip(mn, md)]) - ring.zero_key
        quo = _kdivexact(num_t, den_t, ring.zero_key, ring.mask)
        if quo is None:
            raise NotDivisible("inexact polynomial division")
        if back:
            quo = _kmul_mono(quo, back, RAT(1))
        return Polynomial(ring, quo)

    def divides_into(self, num: "Polynomial") -> bool:
        try:
            num.exact_div(self)
            return True
        except NotDivisible:
            return False

    # -- substitution ----------------------------------------------------

    def substitute(self, values: Sequence["Polynomial"],
                   require_polynomial: bool = False) -> "Polynomial":
        """Evaluate at ``values`` (one per variable of self's ring).

        Negative exponents of self require the corresponding value to be
        a monomial (result stays Laurent); ``require_polynomial`` then
        additionally rejects any Laurent result.
        """
        if len(values) != self.ring.nvars:
            raise ValueError("one substitution value per variable required")
        target = values[0].ring if values else self.ring
        for v in values:
            if v.ring != target:
                raise ValueError("substitution values from different rings")
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, e: int) -> Polynomial:
            got = powers.get((i, e))
            if got is None:
                got = values[i] ** e if e >= 0 else values[i].mono_inverse() ** (-e)
                powers[(i, e)] = got
            return got

        acc: dict = {}
        for k, c in self.terms.items():
            term = Polynomial(target, {target.zero_key: RAT(c)})
            for i, s in enumerate(self.ring._shifts):
                e = ((k >> s) & 0xFFFF) - BIAS
                if e:
                    term = term * power(i, e)
            acc = _kadd(acc, term.terms)
        out = Polynomial(target, acc)
        if require_polynomial:
            out.require_polynomial()
        return out

    # -- rendering -------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = self.ring.names
        parts = []
        for exps, c in self.iter_terms():
            factors = []
            for n, e in zip(names, exps):
                if e == 1:
                    factors.append(n)
                elif e:
                    factors.append(f"{n}^{e}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(str(c) + "*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"<{self}>"

    def to_json(self) -> dict:
        return {
            "vars": self.ring.nvars,
            "terms": [{"exp": list(e), "coef": str(c)} for e, c in self.iter_terms()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def poly_from_json(obj: dict, ring: PolyRing | None = None) -> Polynomial:
    if ring is None:
        ring = xring(int(obj["vars"]))
    elif ring.nvars != int(obj["vars"]):
        raise ValueError("variable count mismatch in polynomial JSON")
    out: dict = {}
    for t in obj["terms"]:
        c = RAT(t["coef"])
        if not c:
            continue
        k = ring.pack(t["exp"])
        c = out.get(k, RAT(0)) + c
        if c:
            out[k] = c
        else:
            out.pop(k, None)
    return Polynomial(ring, out)


# -- the spec'd operation surface ------------------------------------------


def add(a: Polynomial, b: Polynomial) -> Polynomial:
    return a + b


def mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b


def exact_divide(a: Polynomial, b: Polynomial) -> Polynomial:
    return a.exact_div(b)


def is_divisible_by(a: Polynomial, b: Polynomial) -> bool:
    if not b:
        raise ZeroDivisionError("divisibility by zero polynomial")
    return b.divides_into(a)


def substitute(f: Polynomial, values: Sequence[Polynomial],
               require_polynomial: bool = False) -> Polynomial:
    return f.substitute(values, require_polynomial=require_polynomial)


def degree(f: Polynomial) -> int:
    return f.degree()


def is_homogeneous(f: Polynomial) -> bool:
    return f.is_homogeneous()


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*((?:[+-]\s*)*)((?:[^+-]|(?<=\^)-)+)")
_FACTOR = re.compile(r"^(?P<name>[A-Za-z]\w*?)(?P<idx>\d+)?(?:\^(?P<pow>-?\d+))?$")


def _parse(ring: PolyRing, text: str) -> Polynomial:
    """Inverse of ``str``: sums of 'coef*name^exp*...' terms.

    Accepts both the canonical rendering ("a + -2*b") and plain "a - 2*b".
    """
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial text")
    if text == "0":
        return ring.zero()
    name_index = {n: i for i, n in enumerate(ring.names)}
    out: dict = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or not m.group(2).strip():
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        signs, body = m.group(1), m.group(2).strip()
        if not signs.strip() and not first:
            raise ValueError(f"missing +/- before {body!r}")
        pos = m.end()
        first = False
        coef = RAT(-1 if signs.count("-") % 2 else 1)
        exps = [0] * ring.nvars
        for factor in body.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"empty factor in {body!r}")
            fm = _FACTOR.match(factor)
            if fm and fm.group("name") + (fm.group("idx") or "") in name_index:
                i = name_index[fm.group("name") + (fm.group("idx") or "")]
                exps[i] += int(fm.group("pow") or 1)
            else:
                coef = coef * RAT(factor)
        if coef:
            k = ring.pack(exps)
            c = out.get(k, RAT(0)) + coef
            if c:
                out[k] = c
            else:
                out.pop(k, None)
    return Polynomial(ring, out)


# -- small rational helpers used by the matrix layer -------------------------


def rat_content(coeffs: Iterable) -> object:
    """gcd of rationals: gcd of numerators over lcm of denominators."""
    num = 0
    den = 1
    for c in coeffs:
        num = gcd(num, int(c.numerator))
        den = den * int(c.denominator) // gcd(den, int(c.denominator))
    return RAT(num, den) if num else RAT(0)
