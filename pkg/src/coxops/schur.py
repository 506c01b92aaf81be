"""Partition boxes, selector sets, and the three Schur-type families.

``enumerate_lambda(l, m)`` is the box of partitions with at most m parts,
each at most l-m, in descending lexicographic order; ``enumerate_z`` is
the set of strictly increasing m-element selectors from 1..l in
increasing order.  The map ``selector_to_partition`` is the
order-reversing bijection between the two.

Three symmetric families in t_1..t_m are built from the type-A Schur
polynomial (bialternant quotient of alternant determinants):

  kind A: s_lam
  kind B: t_1...t_m * s_lam(t_1^2, ..., t_m^2)
  kind D: (t_1...t_m)^-1 * s_lam(t_1^2, ..., t_m^2)     (Laurent)

Kinds B and D are produced through these factored forms; ``schur_raw``
recomputes them as explicit ratios of determinants in odd/even powers
and exists only to cross-check, together with the independent
semistandard-tableau oracle for kind A.
"""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Sequence

from coxops.polylinalg import PolyMatrix, determinant, selectors
from coxops.polyring import Polynomial, PolyRing, exact_divide, tring, xring

KINDS = ("A", "B", "D")

Partition = tuple[int, ...]


def enumerate_lambda(l: int, m: int) -> list[Partition]:
    """All partitions l-m >= lam_1 >= ... >= lam_m >= 0, descending lex."""
    if m < 1 or l < m:
        raise ValueError(f"need l >= m >= 1, got l={l}, m={m}")
    out: list[Partition] = []

    def rec(prefix: tuple[int, ...], top: int) -> None:
        if len(prefix) == m:
            out.append(prefix)
            return
        for v in range(top, -1, -1):
            rec(prefix + (v,), v)

    rec((), l - m)
    return out


def enumerate_z(l: int, m: int) -> list[tuple[int, ...]]:
    """Strictly increasing m-selectors from 1..l, increasing lex order."""
    if m < 1 or l < m:
        raise ValueError(f"need l >= m >= 1, got l={l}, m={m}")
    return selectors(l, m)


def selector_to_partition(mu: Sequence[int], l: int, m: int) -> Partition:
    """The order-reversing bijection from selectors to the partition box."""
    return tuple(l - m + (j + 1) - mu_j for j, mu_j in enumerate(mu))


def is_valid_partition(lam: Sequence[int], l: int, m: int) -> bool:
    lam = tuple(lam)
    if len(lam) != m or any(v < 0 for v in lam):
        return False
    if any(a < b for a, b in zip(lam, lam[1:])):
        return False
    return not lam or lam[0] <= l - m


def _check_partition(lam: Sequence[int], m: int) -> Partition:
    lam = tuple(lam)
    if len(lam) != m:
        raise ValueError(f"partition {lam} does not have {m} parts")
    if any(v < 0 for v in lam) or any(a < b for a, b in zip(lam, lam[1:])):
        raise ValueError(f"{lam} is not a partition")
    return lam


def _alternant(ring: PolyRing, powers: Sequence[int]) -> Polynomial:
    """det(t_i ** powers[j]) over the m-variable ring."""
    m = ring.nvars
    rows = [[ring.var(i, p) if p else ring.one() for p in powers] for i in range(m)]
    return determinant(PolyMatrix(ring, rows))


def schur_a(lam: Sequence[int], m: int) -> Polynomial:
    """Type-A Schur polynomial in t_1..t_m as a bialternant quotient."""
    lam = _check_partition(lam, m)
    ring = tring(m)
    num = _alternant(ring, [lam[j] + m - (j + 1) for j in range(m)])
    den = _alternant(ring, [m - (j + 1) for j in range(m)])
    return exact_divide(num, den)


def schur(kind: str, lam: Sequence[int], m: int) -> Polynomial:
    """The kind A/B/D family member for lam (B/D via the factored forms)."""
    if kind == "A":
        return schur_a(lam, m)
    base = schur_a(lam, m).dilate(2)
    if kind == "B":
        return base.mul_monomial([1] * m)
    if kind == "D":
        return base.mul_monomial([-1] * m)
    raise ValueError(f"unknown kind {kind!r}")


def schur_raw(kind: str, lam: Sequence[int], m: int) -> Polynomial:
    """Direct determinant-ratio construction (test path, not production).

    For kind D the numerator's odd powers 2(lam_j+m-j)-1 include -1 when
    lam_m = 0; scaling each row by t_i clears them, at the cost of one
    factor t_1...t_m that is divided back out in the Laurent ring.
    """
    lam = _check_partition(lam, m)
    ring = tring(m)
    if kind == "A":
        return schur_a(lam, m)
    den = _alternant(ring, [2 * (m - (j + 1)) for j in range(m)])
    if kind == "B":
        num = _alternant(ring, [2 * (lam[j] + m - (j + 1)) + 1 for j in range(m)])
        return exact_divide(num, den)
    if kind == "D":
        num = _alternant(ring, [2 * (lam[j] + m - (j + 1)) for j in range(m)])
        return exact_divide(num, den).mul_monomial([-1] * m)
    raise ValueError(f"unknown kind {kind!r}")


def schur_degree(kind: str, lam: Sequence[int], m: int) -> int:
    """Homogeneous degree: |lam|, 2|lam|+m, 2|lam|-m for kinds A, B, D."""
    w = sum(lam)
    if kind == "A":
        return w
    if kind == "B":
        return 2 * w + m
    if kind == "D":
        return 2 * w - m
    raise ValueError(f"unknown kind {kind!r}")


def schur_ssyt_oracle(lam: Sequence[int], m: int) -> Polynomial:
    """Type-A Schur polynomial as the generating sum over semistandard
    tableaux of shape lam with entries in 1..m (independent of the
    bialternant path)."""
    lam = _check_partition(lam, m)
    ring = tring(m)
    shape = [v for v in lam if v > 0]
    if not shape:
        return ring.one()
    cells = [(r, c) for r, row_len in enumerate(shape) for c in range(row_len)]
    tableau = [[0] * row_len for row_len in shape]
    acc = ring.zero()

    def place(idx: int, weight: list[int]) -> None:
        nonlocal acc
        if idx == len(cells):
            acc = acc + ring.monomial(weight)
            return
        r, c = cells[idx]
        lo = tableau[r][c - 1] if c else 1
        if r:
            lo = max(lo, tableau[r - 1][c] + 1)
        for v in range(lo, m + 1):
            tableau[r][c] = v
            weight[v - 1] += 1
            place(idx + 1, weight)
            weight[v - 1] -= 1
        tableau[r][c] = 0

    place(0, [0] * m)
    return acc


def x_alpha(alpha: Sequence[int], squared: bool = False) -> list[Polynomial]:
    """The substitution vector for a multi-index: x_i (or x_i^2), each
    repeated alpha_i times; length is the order |alpha|."""
    ring = xring(len(alpha))
    out: list[Polynomial] = []
    for i, a in enumerate(alpha):
        if a < 0:
            raise ValueError("negative multi-index entry")
        out.extend([ring.var(i, 2 if squared else 1)] * a)
    return out


def schur_at(kind: str, lam: Sequence[int], alpha: Sequence[int]) -> Polynomial:
    """s_lam evaluated at the x_alpha vector (Laurent result for kind D)."""
    m = sum(alpha)
    return schur(kind, lam, m).substitute(x_alpha(alpha))


def schur_matrix(kind: str, l: int, m: int) -> PolyMatrix:
    """The square matrix (s_lam(x_mu)), rows lam descending, columns mu
    increasing.  For kind D each column is scaled by x_mu1*...*x_mum so
    that the entries are polynomials; the determinant then carries an
    extra factor (x_1...x_l)**binom(l-1, m-1)."""
    ring = xring(l)
    lams = enumerate_lambda(l, m)
    mus = enumerate_z(l, m)
    rows = []
    for lam in lams:
        s = schur(kind, lam, m)
        row = []
        for mu in mus:
            vals = [ring.var(i - 1) for i in mu]
            v = s.substitute(vals)
            if kind == "D":
                v = v.mul_monomial([1 if (i + 1) in mu else 0 for i in range(l)])
            row.append(v.require_polynomial())
        rows.append(row)
    return PolyMatrix(ring, rows)


def _difference_product(ring: PolyRing, squared: bool) -> Polynomial:
    l = ring.nvars
    out = ring.one()
    for i, j in combinations(range(l), 2):
        if squared:
            out = out * (ring.var(i, 2) - ring.var(j, 2))
        else:
            out = out * (ring.var(i) - ring.var(j))
    return out


def schur_identity_rhs(kind: str, l: int, m: int) -> Polynomial:
    """Exact right side of the determinant identity for ``schur_matrix``
    (for kind D: after the column clearing described there)."""
    ring = xring(l)
    e = comb(l - 2, m - 1)
    if kind == "A":
        return _difference_product(ring, False) ** e
    if kind == "B":
        return _difference_product(ring, True) ** e * ring.monomial([comb(l - 1, m - 1)] * l)
    if kind == "D":
        return _difference_product(ring, True) ** e
    raise ValueError(f"unknown kind {kind!r}")


def verify_schur_det_identity(kind: str, l: int, m: int) -> tuple[bool, int]:
    """Check det(schur_matrix) against the closed-form product, up to a
    global sign; returns (holds, sign).  The row/column orders fix the
    sign only implicitly, so it is reported rather than asserted."""
    det = determinant(schur_matrix(kind, l, m))
    rhs = schur_identity_rhs(kind, l, m)
    if det == rhs:
        return True, 1
    if det == -rhs:
        return True, -1
    return False, 0
