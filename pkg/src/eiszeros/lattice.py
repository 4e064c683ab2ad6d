"""Covolume, slope, minimal-covolume invariants, canonical polygon, stability.

Bases are stored exactly: every float is a binary rational, so Gram matrices
and candidate norms live in Fraction arithmetic and the degenerate flat
polygons (Z^n) come out exactly flat.  Enumeration runs on an LLL-reduced
copy in floats; only winners are re-measured exactly.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .options import RankError, ScaleError

_ON_SEGMENT_TOL = 1e-9


@dataclass(frozen=True)
class LatticeBasis:
    """r x n full-row-rank matrix of basis row vectors, entries Fractions."""

    rows: tuple

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise ValueError("empty basis")
        n = len(self.rows[0])
        if any(len(r) != n for r in self.rows):
            raise ValueError("ragged basis rows")
        if len(self.rows) > n:
            raise ValueError("more rows than columns cannot be independent")

    @classmethod
    def from_rows(cls, rows) -> "LatticeBasis":
        return cls(tuple(tuple(Fraction(x) for x in row) for row in rows))

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows[0])

    def as_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.rows])

    def scaled(self, factor) -> "LatticeBasis":
        f = Fraction(factor)
        return LatticeBasis(tuple(tuple(f * x for x in row) for row in self.rows))


def parse_basis_text(text: str) -> LatticeBasis:
    """Rows of whitespace-separated decimals or rationals 'p/q', one per line."""
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        row = []
        for token in line.split():
            if "/" in token:
                row.append(Fraction(token))
            else:
                row.append(Fraction(token) if "." not in token and "e" not in token.lower()
                           else Fraction(float(token)))
        rows.append(row)
    if not rows:
        raise ValueError("no basis rows found")
    return LatticeBasis.from_rows(rows)


def _gram_exact(rows) -> list:
    return [[sum(a * b for a, b in zip(u, v)) for v in rows] for u in rows]


def _det_exact(m) -> Fraction:
    """Fraction determinant by elimination (small matrices)."""
    a = [row[:] for row in m]
    k = len(a)
    det = Fraction(1)
    for i in range(k):
        piv = None
        for j in range(i, k):
            if a[j][i] != 0:
                piv = j
                break
        if piv is None:
            return Fraction(0)
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            det = -det
        det *= a[i][i]
        inv = 1 / a[i][i]
        for j in range(i + 1, k):
            if a[j][i] != 0:
                factor = a[j][i] * inv
                a[j] = [x - factor * y for x, y in zip(a[j], a[i])]
    return det


def gram_det(basis: LatticeBasis) -> Fraction:
    return _det_exact(_gram_exact(basis.rows))


def _check_rank(basis: LatticeBasis) -> Fraction:
    g2 = gram_det(basis)
    scale = 1.0
    for row in basis.rows:
        scale *= float(sum(x * x for x in row))
    if float(g2) <= 1e-10 * max(scale, 1e-300):
        raise RankError("basis is rank deficient (Gram determinant ~ 0)")
    return g2


def covolume(basis: LatticeBasis) -> float:
    """Vol(L) = |det(V V^T)|^(1/2)."""
    return math.sqrt(float(_check_rank(basis)))


def slope(basis: LatticeBasis) -> float:
    """s(L) = log(Vol(L)) / rank(L)."""
    return 0.5 * math.log(float(_check_rank(basis))) / basis.rank


def _lll_reduce(v: np.ndarray, delta: float = 0.99):
    """Floating LLL on rows; returns (reduced rows, integer transform U)."""
    b = v.astype(float).copy()
    m = len(b)
    u = np.eye(m, dtype=object)
    for i in range(m):
        for j in range(m):
            u[i][j] = int(u[i][j])

    def gso(bb):
        star = bb.copy()
        mu = np.zeros((m, m))
        for i in range(m):
            for j in range(i):
                denom = star[j] @ star[j]
                mu[i, j] = (bb[i] @ star[j]) / denom if denom > 0 else 0.0
                star[i] = star[i] - mu[i, j] * star[j]
        return star, mu

    star, mu = gso(b)
    k = 1
    guard = 0
    while k < m and guard < 10000:
        guard += 1
        for j in range(k - 1, -1, -1):
            q = round(mu[k, j])
            if q != 0:
                b[k] -= q * b[j]
                u[k] = [a - q * c for a, c in zip(u[k], u[j])]
                star, mu = gso(b)
        lhs = star[k] @ star[k]
        rhs = (delta - mu[k, k - 1] ** 2) * (star[k - 1] @ star[k - 1])
        if lhs >= rhs:
            k += 1
        else:
            b[[k - 1, k]] = b[[k, k - 1]]
            u[[k - 1, k]] = u[[k, k - 1]]
            star, mu = gso(b)
            k = max(k - 1, 1)
    return b, u


def _exact_norm2(coeff, gram) -> Fraction:
    acc = Fraction(0)
    k = len(coeff)
    for i in range(k):
        ci = coeff[i]
        if ci == 0:
            continue
        for j in range(k):
            if coeff[j] != 0:
                acc += ci * coeff[j] * gram[i][j]
    return acc


def _short_vectors(basis: LatticeBasis, radius: float) -> list:
    """All nonzero lattice vectors with |x| <= radius, one per +/- pair,
    as (float norm^2, integer coefficient tuple w.r.t. the input rows)."""
    v = basis.as_float()
    b_red, u = _lll_reduce(v)
    binv = np.linalg.inv(b_red)
    bounds = [int(math.floor(radius * np.linalg.norm(binv[:, i]) + 1e-9)) + 1
              for i in range(len(b_red))]
    gram_f = v @ v.T
    out = []
    r2 = radius * radius * (1.0 + 1e-9)
    for cp in itertools.product(*[range(-c, c + 1) for c in bounds]):
        if all(x == 0 for x in cp):
            continue
        first = next(x for x in cp if x != 0)
        if first < 0:
            continue  # dedupe +/- pairs
        coeff = tuple(int(sum(cp[i] * u[i][j] for i in range(len(cp))))
                      for j in range(len(cp)))
        n2 = float(np.array(coeff) @ gram_f @ np.array(coeff))
        if n2 <= r2:
            out.append((n2, coeff))
    out.sort(key=lambda t: t[0])
    return out


def _lambda1_sq(basis: LatticeBasis) -> Fraction:
    """Exact squared length of a shortest nonzero vector."""
    v = basis.as_float()
    b_red, _ = _lll_reduce(v)
    r0 = min(np.linalg.norm(row) for row in b_red)
    cands = _short_vectors(basis, float(r0))
    if not cands:
        raise RankError("no lattice vectors found below the reduced-row bound")
    gram = _gram_exact(basis.rows)
    best_f = cands[0][0]
    exact = [
        _exact_norm2(c, gram) for n2, c in cands if n2 <= best_f * (1.0 + 1e-9)
    ]
    return min(exact)


def _inverse_exact(rows) -> list:
    """Fraction inverse of a square matrix given as rows."""
    k = len(rows)
    a = [list(r) + [Fraction(int(i == j)) for j in range(k)] for i, r in enumerate(rows)]
    for i in range(k):
        piv = next((j for j in range(i, k) if a[j][i] != 0), None)
        if piv is None:
            raise RankError("singular matrix in exact inverse")
        a[i], a[piv] = a[piv], a[i]
        inv = 1 / a[i][i]
        a[i] = [x * inv for x in a[i]]
        for j in range(k):
            if j != i and a[j][i] != 0:
                factor = a[j][i]
                a[j] = [x - factor * y for x, y in zip(a[j], a[i])]
    return [row[k:] for row in a]


def kappa_r(basis: LatticeBasis, r: int) -> float:
    """kappa_r(L): minimal covolume of a rank-r sublattice (n <= 4).

    r = 1 and r = n-1 go through shortest-vector enumeration (the latter in
    the dual); r = n is Vol(L); the one remaining case (r = 2, n = 4)
    enumerates vector pairs inside a Minkowski search radius.
    """
    n = basis.rank
    if basis.dim != n:
        raise ValueError("kappa_r expects a full-rank square basis")
    if n > 4:
        raise ScaleError(f"kappa_r enumeration supports n <= 4, got {n}")
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r = {r}")
    vol2 = _check_rank(basis)
    if r == n:
        return math.sqrt(float(vol2))
    if r == 1:
        return math.sqrt(float(_lambda1_sq(basis)))
    if r == n - 1:
        dual = LatticeBasis(
            tuple(tuple(row) for row in zip(*_inverse_exact([list(x) for x in basis.rows])))
        )
        return math.sqrt(float(vol2 * _lambda1_sq(dual)))
    # r = 2, n = 4: pairs of short vectors
    lam1 = math.sqrt(float(_lambda1_sq(basis)))
    v = basis.as_float()
    b_red, _ = _lll_reduce(v)
    rows_sorted = sorted(b_red, key=np.linalg.norm)
    g2 = np.array(rows_sorted[:2]) @ np.array(rows_sorted[:2]).T
    u0 = math.sqrt(max(float(np.linalg.det(g2)), 1e-300))
    radius = (4.0 / math.pi) * u0 / lam1
    cands = _short_vectors(basis, radius * (1.0 + 1e-9))
    gram = _gram_exact(basis.rows)
    best = None
    for i in range(len(cands)):
        for j in range(i + 1, len(cands)):
            c1 = np.array(cands[i][1])
            c2 = np.array(cands[j][1])
            g11, g22 = cands[i][0], cands[j][0]
            g12 = float(c1 @ (np.array([[float(x) for x in row] for row in gram]) @ c2))
            d = g11 * g22 - g12 * g12
            if d > 1e-12 and (best is None or d < best[0] * (1.0 + 1e-9)):
                exact = (
                    _exact_norm2(cands[i][1], gram) * _exact_norm2(cands[j][1], gram)
                    - _exact_cross(cands[i][1], cands[j][1], gram) ** 2
                )
                if exact > 0 and (best is None or exact < best[1]):
                    best = (d, exact)
    if best is None:
        raise RankError("no independent pair found in the search radius")
    return math.sqrt(float(best[1]))


def _exact_cross(c1, c2, gram) -> Fraction:
    acc = Fraction(0)
    for i, a in enumerate(c1):
        if a == 0:
            continue
        for j, b in enumerate(c2):
            if b != 0:
                acc += a * b * gram[i][j]
    return acc


@dataclass(frozen=True)
class CanonicalPolygon:
    """Lower convex hull of (0,0) and {(r, log kappa_r(L))}, classified.

    The plotted value at rank r is log kappa_r (so the endpoint is
    log Vol(L) and homothety L -> lambda L shears every value by
    r log lambda, leaving the classification untouched).
    """

    points: tuple  # all plotted points (r, log kappa_r), r = 0..n
    vertices: tuple  # hull vertices only
    classification: str  # "stable" | "semistable" | "unstable"


def canonical_polygon(basis: LatticeBasis) -> CanonicalPolygon:
    """Grayson's canonical polygon with the Stuhler classification.

    semistable: the hull is the single segment (0,0)-(n, log Vol(L));
    stable: additionally no intermediate point touches that segment;
    unstable: some point dips below the segment.
    """
    n = basis.rank
    s_vals = [0.0]
    for r in range(1, n + 1):
        s_vals.append(math.log(kappa_r(basis, r)))
    points = tuple((r, s_vals[r]) for r in range(n + 1))
    tol = _ON_SEGMENT_TOL * max(1.0, max(abs(v) for v in s_vals))
    chord = lambda r: r * s_vals[n] / n
    below = any(s_vals[r] < chord(r) - tol for r in range(1, n))
    on_chord = any(abs(s_vals[r] - chord(r)) <= tol for r in range(1, n))
    if below:
        classification = "unstable"
    elif on_chord:
        classification = "semistable"
    else:
        classification = "stable"
    # lower hull, dropping interior collinear points
    hull = [points[0]]
    for p in points[1:]:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            cross = (x2 - x1) * (p[1] - y1) - (p[0] - x1) * (y2 - y1)
            if cross <= tol * (p[0] - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return CanonicalPolygon(points=points, vertices=tuple(hull), classification=classification)


@dataclass(frozen=True)
class Rank2Classification:
    reduced_z: complex
    classification: str  # "semistable" | "unstable"
    stable: bool


def classify_rank2_point(z: complex) -> Rank2Classification:
    """Reduce z to the fundamental domain and classify L_z = Z[1, z].

    Semistable iff the reduced height satisfies y <= 1 (stable flag for the
    strict hull, y < 1).
    """
    z = complex(z)
    if not z.imag > 0.0:
        raise ValueError(f"classify_rank2_point requires Im z > 0, got {z}")
    for _ in range(10000):
        x = z.real - math.floor(z.real + 0.5)
        if x == -0.5:
            x = 0.5
        z = complex(x, z.imag)
        if abs(z) < 1.0 - 1e-15:
            z = -1.0 / z
        else:
            break
    y = z.imag
    semistable = y <= 1.0 + 1e-12
    return Rank2Classification(
        reduced_z=z,
        classification="semistable" if semistable else "unstable",
        stable=bool(y < 1.0 - _ON_SEGMENT_TOL),
    )


# ---------------------------------------------------------------------------
# integer lattice helpers (exact) for the submultiplicativity check


def _hnf_with_transform(a: list):
    """Row-style HNF over Z: returns (H, U) with U unimodular and U A = H;
    zero rows of H sink to the bottom."""
    h = [row[:] for row in a]
    m = len(h)
    n = len(h[0]) if m else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    pivot_row = 0
    for col in range(n):
        # find a nonzero entry at/below pivot_row
        nz = [i for i in range(pivot_row, m) if h[i][col] != 0]
        if not nz:
            continue
        # euclidean reduction within the column
        while len(nz) > 1:
            nz.sort(key=lambda i: abs(h[i][col]))
            i0 = nz[0]
            for i in nz[1:]:
                q = h[i][col] // h[i0][col]
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[i0])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[i0])]
            nz = [i for i in nz if h[i][col] != 0]
        i0 = nz[0]
        if i0 != pivot_row:
            h[i0], h[pivot_row] = h[pivot_row], h[i0]
            u[i0], u[pivot_row] = u[pivot_row], u[i0]
        if h[pivot_row][col] < 0:
            h[pivot_row] = [-x for x in h[pivot_row]]
            u[pivot_row] = [-x for x in u[pivot_row]]
        for i in range(pivot_row):
            q = h[i][col] // h[pivot_row][col]
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[pivot_row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[pivot_row])]
        pivot_row += 1
        if pivot_row == m:
            break
    return h, u


def _nonzero_rows(m: list) -> list:
    return [row for row in m if any(x != 0 for x in row)]


def _coeff_vol2(coeff_rows: list, gram) -> Fraction:
    """Squared covolume of the sublattice with integer coefficient rows."""
    if not coeff_rows:
        return Fraction(1)
    g = [
        [
            sum(
                Fraction(a) * Fraction(b) * gram[i][j]
                for i, a in enumerate(u)
                for j, b in enumerate(v)
                if a != 0 and b != 0
            )
            for v in coeff_rows
        ]
        for u in coeff_rows
    ]
    return _det_exact(g)


def _lattice_sum(rows1: list, rows2: list) -> list:
    h, _ = _hnf_with_transform(rows1 + rows2)
    return _nonzero_rows(h)


def _lattice_intersection(rows1: list, rows2: list) -> list:
    """Basis of the intersection of two integer coefficient lattices."""
    r1 = len(rows1)
    stacked = rows1 + rows2
    h, u = _hnf_with_transform(stacked)
    out = []
    for hrow, urow in zip(h, u):
        if any(x != 0 for x in hrow):
            continue
        a = urow[:r1]
        vec = [sum(a[i] * rows1[i][j] for i in range(r1)) for j in range(len(rows1[0]))]
        if any(x != 0 for x in vec):
            out.append(vec)
    reduced, _ = _hnf_with_transform(out) if out else ([], [])
    return _nonzero_rows(reduced)


@dataclass(frozen=True)
class SubmultReport:
    trials: int
    violations: int
    worst_ratio: float  # max of Vol(cap)Vol(sum) / (Vol1 Vol2); <= 1 when clean


def submultiplicativity_check(
    basis: LatticeBasis, trials: int, seed: int = 0
) -> SubmultReport:
    """Check Vol(L1 cap L2) Vol(L1 + L2) <= Vol(L1) Vol(L2) on random
    sublattice pairs of the given lattice (n <= 3), in exact arithmetic."""
    n = basis.rank
    if basis.dim != n:
        raise ValueError("submultiplicativity_check expects a square basis")
    if n > 3:
        raise ScaleError(f"submultiplicativity_check supports n <= 3, got {n}")
    _check_rank(basis)
    gram = _gram_exact(basis.rows)
    rng = random.Random(seed)
    violations = 0
    worst = 0.0
    done = 0
    while done < trials:
        r1 = rng.randint(1, n)
        r2 = rng.randint(1, n)
        m1 = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(r1)]
        m2 = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(r2)]
        m1 = _nonzero_rows(_hnf_with_transform(m1)[0])
        m2 = _nonzero_rows(_hnf_with_transform(m2)[0])
        if len(m1) != r1 or len(m2) != r2:
            continue  # rank-deficient draw, resample
        done += 1
        inter = _lattice_intersection(m1, m2)
        total = _lattice_sum(m1, m2)
        lhs2 = _coeff_vol2(inter, gram) * _coeff_vol2(total, gram)
        rhs2 = _coeff_vol2(m1, gram) * _coeff_vol2(m2, gram)
        ratio = math.sqrt(float(lhs2) / float(rhs2)) if rhs2 > 0 else math.inf
        worst = max(worst, ratio)
        if lhs2 > rhs2:
            violations += 1
    return SubmultReport(trials=trials, violations=violations, worst_ratio=worst)
