"""Pure-Python kernels for sparse term-dict arithmetic.

A polynomial is a dict mapping a packed exponent key (int) to a nonzero
rational coefficient.  ``off`` is the key of the all-zero exponent
vector, so monomial products are ``ka + kb - off``.  ``mask`` carries the
per-field high bit of the packing; after a key subtraction,
``key & mask == mask`` holds iff no exponent field went negative, which
is the monomial-divisibility test used by ``kdivexact``.

Every function is pure: argument dicts are never mutated.  The Cython
module ``coxops._speedups`` implements the same interface.
"""

from __future__ import annotations

from heapq import heapify, heappop, heappush

KERNEL_NAME = "pure"


def kadd(a: dict, b: dict) -> dict:
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    get = out.get
    for k, v in b.items():
        w = get(k)
        if w is None:
            out[k] = v
        else:
            w = w + v
            if w:
                out[k] = w
            else:
                del out[k]
    return out


def ksub(a: dict, b: dict) -> dict:
    out = dict(a)
    get = out.get
    for k, v in b.items():
        w = get(k)
        if w is None:
            out[k] = -v
        else:
            w = w - v
            if w:
                out[k] = w
            else:
                del out[k]
    return out


def kscale(a: dict, c) -> dict:
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def kmul_mono(a: dict, shift: int, c) -> dict:
    """a * (monomial with key offset ``shift`` = key - off) * c."""
    if not c:
        return {}
    if c == 1:
        return {k + shift: v for k, v in a.items()}
    return {k + shift: v * c for k, v in a.items()}


def kmul(a: dict, b: dict, off: int) -> dict:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    if len(a) == 1:
        ((k, v),) = a.items()
        return kmul_mono(b, k - off, v)
    out: dict = {}
    get = out.get
    bi = list(b.items())
    for ka, va in a.items():
        ka -= off
        for kb, vb in bi:
            kk = ka + kb
            w = get(kk)
            out[kk] = va * vb if w is None else w + va * vb
    return {k: v for k, v in out.items() if v}


def kfma(acc: dict, a: dict, b: dict, off: int, negate: bool) -> dict:
    """acc +/- a*b, mutating and returning ``acc`` (not zero-pruned)."""
    if not a or not b:
        return acc
    if len(a) > len(b):
        a, b = b, a
    get = acc.get
    bi = list(b.items())
    if negate:
        for ka, va in a.items():
            ka -= off
            for kb, vb in bi:
                kk = ka + kb
                w = get(kk)
                acc[kk] = -va * vb if w is None else w - va * vb
    else:
        for ka, va in a.items():
            ka -= off
            for kb, vb in bi:
                kk = ka + kb
                w = get(kk)
                acc[kk] = va * vb if w is None else w + va * vb
    return acc


def kdivexact(num: dict, den: dict, off: int, mask: int):
    """Exact quotient num/den over nonnegative exponents, else None.

    Leading-term elimination under the descending-key (lex) order.  The
    order is multiplicative, so when the division is exact every leading
    term of the running remainder is divisible by lead(den); the first
    failure of the mask test proves inexactness.
    """
    if not num:
        return {}
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    if len(den) == 1:
        ((dk, dv),) = den.items()
        shift = dk - off
        out = {}
        for k, v in num.items():
            k -= shift
            if k & mask != mask:
                return None
            out[k] = v / dv
        return out
    dlead = max(den)
    dlv = den[dlead]
    dtail = [(k - dlead, v) for k, v in den.items() if k != dlead]
    rem = dict(num)
    quo: dict = {}
    heap = [-k for k in rem]
    heapify(heap)
    while heap:
        k = -heappop(heap)
        v = rem.get(k)
        if v is None:
            continue
        del rem[k]
        qk = k - dlead + off
        if qk & mask != mask:
            return None
        qv = v / dlv
        quo[qk] = qv
        for dk, dv in dtail:
            nk = k + dk
            w = rem.get(nk)
            if w is None:
                rem[nk] = -qv * dv
                heappush(heap, -nk)
            else:
                w = w - qv * dv
                if w:
                    rem[nk] = w
                else:
                    del rem[nk]
    if rem:
        return None
    return quo


def kbareiss(aij: dict, piv: dict, aik: dict, akj: dict, prev: dict | None,
             off: int, mask: int) -> dict:
    """One fraction-free elimination update: (aij*piv - aik*akj) / prev.

    ``prev`` is the previous pivot (None on the first step).  The
    division is exact by the Sylvester minor identity; a failure means
    the caller fed entries that are not minors of one matrix.
    """
    acc = kfma({}, aij, piv, off, False)
    acc = kfma(acc, aik, akj, off, True)
    acc = {k: v for k, v in acc.items() if v}
    if prev is None or not acc:
        return acc
    out = kdivexact(acc, prev, off, mask)
    if out is None:
        raise ArithmeticError("fraction-free elimination: inexact division")
    return out
