"""Exact linear algebra over polynomial rings.

Determinants use Laplace peeling of rows/columns with a single nonzero
entry, monomial and rational content extraction, and fraction-free
(Bareiss) elimination with sparsity-driven full pivoting on whatever
dense block remains.  Everything is exact: divisions inside the
elimination are guaranteed by the Sylvester minor identity and failures
raise instead of degrading.
"""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Sequence

from coxops._backend import RAT, kernels
from coxops.polyring import Polynomial, PolyRing, rat_content

_kbareiss = kernels.kbareiss
_kmul = kernels.kmul
_kmul_mono = kernels.kmul_mono


class PolyMatrix:
    """Rectangular matrix with Polynomial entries over one ring."""

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring: PolyRing, rows: Sequence[Sequence[Polynomial]]):
        self.ring = ring
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged rows")
            for e in r:
                if e.ring != ring:
                    raise ValueError("entry from a different ring")

    @classmethod
    def identity(cls, ring: PolyRing, n: int) -> "PolyMatrix":
        one, zero = ring.one(), ring.zero()
        return cls(ring, [[one if i == j else zero for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.ring == other.ring
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and all(a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))
        )

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.ring, [list(c) for c in zip(*self.rows)])

    def matmul(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch in matrix product")
        cols = other.transpose().rows
        return PolyMatrix(
            self.ring,
            [[sum((a * b for a, b in zip(row, col)), self.ring.zero()) for col in cols]
             for row in self.rows],
        )

    def scale_entry_counts(self) -> int:
        return sum(len(e) for r in self.rows for e in r)

    def to_json(self) -> dict:
        return {
            "rows": self.nrows,
            "cols": self.ncols,
            "entries": [[e.to_json() for e in r] for r in self.rows],
        }

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows)


def matrix_from_json(obj: dict, ring: PolyRing) -> PolyMatrix:
    from coxops.polyring import poly_from_json

    rows = [[poly_from_json(e, ring) for e in r] for r in obj["entries"]]
    m = PolyMatrix(ring, rows)
    if m.nrows != obj["rows"] or m.ncols != obj["cols"]:
        raise ValueError("matrix JSON shape mismatch")
    return m


def selectors(n: int, m: int) -> list[tuple[int, ...]]:
    """All strictly increasing m-tuples from 1..n, in increasing lex order."""
    if m < 1 or m > n:
        raise ValueError(f"selector size {m} out of range 1..{n}")
    return [tuple(c) for c in combinations(range(1, n + 1), m)]


def submatrix(a: PolyMatrix, mu: Sequence[int], nu: Sequence[int]) -> PolyMatrix:
    """Selection a[mu, nu] with 1-based strictly increasing selectors."""
    for sel, bound in ((mu, a.nrows), (nu, a.ncols)):
        if any(not 1 <= s <= bound for s in sel):
            raise ValueError(f"selector {sel} out of range")
        if any(s2 <= s1 for s1, s2 in zip(sel, sel[1:])):
            raise ValueError(f"selector {sel} not strictly increasing")
    return PolyMatrix(a.ring, [[a.rows[i - 1][j - 1] for j in nu] for i in mu])


# -- determinants -------------------------------------------------------------


def _laplace_dp_terms(ring: PolyRing, work: list[list[dict]]) -> dict:
    """Division-free determinant by dynamic programming over column subsets.

    Level k holds the minors of the first k (reordered) rows on every
    k-subset of columns.  Each update multiplies a running minor by a
    single matrix entry, so the cost tracks the entry sizes instead of
    the (much larger) products of two minors that fraction-free
    elimination forms.  Wins for small-entry polynomial matrices up to
    n ~ 16; the subset table is exponential beyond that.
    """
    n = len(work)
    off = ring.zero_key
    kfma = kernels.kfma
    # Small rows first keeps the early levels (which have the most
    # subsets alive) populated with the smallest minors.
    order = sorted(range(n), key=lambda i: (sum(len(e) for e in work[i]),))
    row_sign = _permutation_sign(order)
    prev: dict[int, dict] = {0: {off: RAT(1)}}
    for k in range(1, n + 1):
        row = work[order[k - 1]]
        nxt: dict[int, dict] = {}
        for mask, minor in prev.items():
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    continue
                e = row[j]
                if not e:
                    continue
                child = mask | bit
                rank = (child & (bit - 1)).bit_count() + 1
                acc = nxt.get(child)
                if acc is None:
                    acc = {}
                    nxt[child] = acc
                kfma(acc, minor, e, off, (k + rank) % 2 != 0)
        prev = {}
        for mask, acc in nxt.items():
            acc = {key: v for key, v in acc.items() if v}
            if acc:
                prev[mask] = acc
    out = prev.get((1 << n) - 1, {})
    if row_sign < 0:
        out = {key: -v for key, v in out.items()}
    return out


def _permutation_sign(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        clen = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def _bareiss_terms(ring: PolyRing, work: list[list[dict]]) -> dict:
    """Fraction-free elimination with sparsity-first full pivoting.

    Every division is exact (entries are minors of the input); used for
    constant matrices and as the fallback when the subset DP would need
    too large a table.
    """
    k = len(work)
    off = ring.zero_key
    mask = ring.mask
    sign = 1
    prev: dict | None = None
    for step in range(k - 1):
        best = None
        for i in range(step, k):
            rn = sum(1 for j in range(step, k) if work[i][j])
            if rn == 0:
                return {}
            for j in range(step, k):
                e = work[i][j]
                if not e:
                    continue
                cn = sum(1 for r in range(step, k) if work[r][j])
                score = ((rn - 1) * (cn - 1), len(e), i, j)
                if best is None or score < best:
                    best = score
        if best is None:
            return {}
        _, _, pi, pj = best
        if pi != step:
            work[step], work[pi] = work[pi], work[step]
            sign = -sign
        if pj != step:
            for r in work:
                r[step], r[pj] = r[pj], r[step]
            sign = -sign
        piv = work[step][step]
        for i in range(step + 1, k):
            aik = work[i][step]
            row = work[i]
            prow = work[step]
            for j in range(step + 1, k):
                row[j] = _kbareiss(row[j], piv, aik, prow[j], prev, off, mask)
            row[step] = {}
        prev = piv
    out = work[k - 1][k - 1]
    if sign < 0 and out:
        out = {key: -v for key, v in out.items()}
    return out


# Column-subset DP beats elimination while the subset table stays small.
_DP_MAX_SIZE = 17


def _det_terms(ring: PolyRing, grid: list[list[dict]]) -> dict:
    """Determinant of a square array of term dicts (may be Laurent)."""
    n = len(grid)
    if n == 0:
        return {ring.zero_key: RAT(1)}
    off = ring.zero_key

    sign = 1
    factors: list[dict] = []  # peeled entries, multiplied in at the end
    mono_shift = 0  # accumulated monomial factor as a key offset
    scalar = RAT(1)

    rows = list(range(n))
    cols = list(range(n))
    g = grid

    # Peel rows/columns with at most one nonzero entry (Laplace steps).
    changed = True
    while changed and rows:
        changed = False
        for axis in (0, 1):
            idxs, others = (rows, cols) if axis == 0 else (cols, rows)
            for pos, i in enumerate(idxs):
                nz = []
                for qos, j in enumerate(others):
                    e = g[i][j] if axis == 0 else g[j][i]
                    if e:
                        nz.append((qos, e))
                        if len(nz) > 1:
                            break
                if not nz:
                    return {}
                if len(nz) == 1:
                    qos, e = nz[0]
                    factors.append(e)
                    if (pos + qos) % 2:
                        sign = -sign
                    del idxs[pos]
                    del others[qos]
                    changed = True
                    break
            if changed:
                break
    if not rows:
        out = {off: RAT(sign)}
        for f in factors:
            out = _kmul(out, f, off)
        return out

    # Content extraction: per-row/column rational content and monomial
    # content (per-variable minimum exponent; also normalizes Laurent
    # entries into the polynomial orthant for the elimination below).
    work = [[g[i][j] for j in cols] for i in rows]
    k = len(work)
    nv = ring.nvars

    def extract(lines: list[list[dict]]) -> None:
        nonlocal scalar, mono_shift
        for line in lines:
            coeffs = [v for e in line for v in e.values()]
            c = rat_content(coeffs)
            mins = [min(((key >> s) & 0xFFFF) for e in line for key in e)
                    for s in ring._shifts]
            shift = sum((m - (1 << 15)) << s for m, s in zip(mins, ring._shifts))
            if c != 1 or shift:
                inv = 1 / c
                for e in line:
                    moved = {key - shift: v * inv for key, v in e.items()}
                    e.clear()
                    e.update(moved)
                scalar *= c
                mono_shift += shift

    # operate on rows, then on columns (via transpose view)
    work = [[dict(e) for e in r] for r in work]
    extract(work)
    wt = [[work[i][j] for i in range(k)] for j in range(k)]
    extract(wt)

    nonconstant = any(key != off for row in work for e in row for key in e)
    if nonconstant and k <= _DP_MAX_SIZE:
        out = _laplace_dp_terms(ring, work)
    else:
        out = _bareiss_terms(ring, work)
    if not out:
        return {}
    if scalar != 1 or mono_shift:
        out = _kmul_mono(out, mono_shift, scalar)
    if sign < 0:
        out = {key: -v for key, v in out.items()}
    for f in factors:
        out = _kmul(out, f, off)
    return out


def determinant(a: PolyMatrix) -> Polynomial:
    if not a.is_square():
        raise ValueError("determinant of a non-square matrix")
    grid = [[e.terms for e in row] for row in a.rows]
    return Polynomial(a.ring, _det_terms(a.ring, grid))


def cofactor_determinant(a: PolyMatrix) -> Polynomial:
    """Reference determinant by first-row cofactor expansion (tests)."""
    if not a.is_square():
        raise ValueError("determinant of a non-square matrix")
    ring = a.ring

    def rec(rows: tuple[int, ...], cols: tuple[int, ...]) -> Polynomial:
        if not rows:
            return ring.one()
        i = rows[0]
        total = ring.zero()
        for pos, j in enumerate(cols):
            e = a.rows[i][j]
            if not e:
                continue
            minor = rec(rows[1:], cols[:pos] + cols[pos + 1:])
            total = total + e * minor if pos % 2 == 0 else total - e * minor
        return total

    n = a.nrows
    return rec(tuple(range(n)), tuple(range(n)))


def compound_matrix(a: PolyMatrix, m: int) -> PolyMatrix:
    """Matrix of all m x m minors, rows/columns ordered by increasing selectors."""
    if not a.is_square():
        raise ValueError("compound of a non-square matrix")
    sel = selectors(a.nrows, m)
    return PolyMatrix(
        a.ring,
        [[determinant(submatrix(a, mu, nu)) for nu in sel] for mu in sel],
    )


def verify_cauchy_sylvester(a: PolyMatrix, m: int) -> bool:
    """det of the m-th compound equals det(a)**binom(n-1, m-1), exactly."""
    n = a.nrows
    lhs = determinant(compound_matrix(a, m))
    rhs = determinant(a) ** comb(n - 1, m - 1)
    return lhs == rhs
