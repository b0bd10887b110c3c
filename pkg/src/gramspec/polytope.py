"""Lattice polytopes: Newton polytopes, 2-normality, volumes, rank intervals.

All hull computations are exact.  Points live in ambient Z^n; internally a
polytope is projected onto a saturated basis of the integer lattice of its
affine span, where the hull is full-dimensional and facet inequalities have
integer coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb, isqrt

from .errors import GramspecError
from .exactla import (coords_in_basis, is_saturated, lattice_basis, primitive_vector,
                      rational_nullspace, rational_rank, rref)
from .poly import Polynomial, monomial_key

Point = tuple[int, ...]


# ---------------------------------------------------------------------------
# Exact LP feasibility (convex hull membership for arbitrary point sets)
# ---------------------------------------------------------------------------


def in_convex_hull(target, generators) -> bool:
    """Exact test: is target a convex combination of the generators?

    Phase-1 simplex over Fraction with Bland's rule; no tolerances anywhere.
    """
    gens = [tuple(g) for g in generators]
    if not gens:
        return False
    t = tuple(target)
    m = len(t) + 1
    k = len(gens)
    A = [[Fraction(g[i]) for g in gens] for i in range(len(t))]
    A.append([Fraction(1)] * k)
    b = [Fraction(x) for x in t] + [Fraction(1)]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
    # tableau with artificial variables k..k+m-1
    T = [A[i][:] + [Fraction(int(j == i)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [k + i for i in range(m)]
    ncols = k + m
    reduced = [(Fraction(0) if j < k else Fraction(1)) - sum(T[i][j] for i in range(m))
               for j in range(ncols)]
    while True:
        enter = next((j for j in range(ncols) if reduced[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            raise AssertionError("phase-1 LP cannot be unbounded")
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [a - f * p for a, p in zip(T[i], T[leave])]
        f = reduced[enter]
        if f:
            reduced = [a - f * p for a, p in zip(reduced, T[leave][:-1])]
        basis[leave] = enter
    artificial_sum = sum(T[i][-1] for i in range(m) if basis[i] >= k)
    return artificial_sum == 0


def _extreme_points(points: list[Point]) -> list[Point]:
    out = []
    for i, p in enumerate(points):
        others = points[:i] + points[i + 1:]
        if not in_convex_hull(p, others):
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# Projected hull structure
# ---------------------------------------------------------------------------


def _span_data(points: list[Point]):
    """Saturated integer basis of the affine span's lattice, plus projections.

    Returns (origin, basis_rows, projected_points) with every input point
    written as origin + sum coords[i] * basis_rows[i], coords integer.
    """
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    diffs = [d for d in diffs if any(d)]
    if not diffs:
        return p0, [], [() for _ in points]
    basis = lattice_basis(diffs)
    # saturate: integer kernel of the span equations equals the saturation
    equations = rational_nullspace([[Fraction(x) for x in row] for row in basis])
    if equations:
        eq_int = [primitive_vector(e) for e in equations]
        sat = _integer_kernel(eq_int)
    else:
        n = len(p0)
        sat = [[int(i == j) for j in range(n)] for i in range(n)]
    projected = []
    for p in points:
        coords = coords_in_basis(sat, [Fraction(a - b) for a, b in zip(p, p0)])
        if any(c.denominator != 1 for c in coords):
            raise AssertionError("saturated basis must give integer coordinates")
        projected.append(tuple(int(c) for c in coords))
    return p0, sat, projected


def _integer_kernel(rows: list[list[int]]) -> list[list[int]]:
    """Basis of the integer kernel {x in Z^n : rows @ x = 0} (saturated)."""
    if not rows:
        return []
    n = len(rows[0])
    M = [list(r) for r in rows]
    U = [[int(i == j) for j in range(n)] for i in range(n)]  # column op tracker
    m = len(M)
    row = 0
    col = 0
    pivot_cols = []
    while row < m and col < n:
        while True:
            nz = [j for j in range(col, n) if M[row][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(M[row][j]))
            if j0 != col:
                for r in M:
                    r[col], r[j0] = r[j0], r[col]
                for r in U:
                    r[col], r[j0] = r[j0], r[col]
            done = True
            for j in range(col + 1, n):
                if M[row][j] != 0:
                    f = M[row][j] // M[row][col]
                    for r in M:
                        r[j] -= f * r[col]
                    for r in U:
                        r[j] -= f * r[col]
                    if M[row][j] != 0:
                        done = False
            if done:
                break
        if M[row][col] != 0:
            pivot_cols.append(col)
            col += 1
        row += 1
    free = [j for j in range(n) if j not in pivot_cols]
    # columns of U over free positions where M-column vanished entirely
    kernel = []
    for j in range(n):
        if all(M[i][j] == 0 for i in range(m)):
            kernel.append([U[i][j] for i in range(n)])
    return kernel


def _facets(vertices: list[Point], dim: int) -> list[tuple[tuple[int, ...], int]]:
    """Facet inequalities a . y <= b of a full-dimensional projected hull."""
    if dim == 0:
        return []
    seen = set()
    out = []
    for subset in combinations(range(len(vertices)), dim):
        pts = [vertices[i] for i in subset]
        diffs = [[Fraction(a - b) for a, b in zip(p, pts[0])] for p in pts[1:]]
        diffs = [d for d in diffs if any(d)]
        if diffs and rational_rank(diffs) != dim - 1:
            continue
        normals = rational_nullspace(diffs) if diffs else \
            [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
        if len(normals) != 1:
            continue
        a = primitive_vector(normals[0])
        b = sum(x * y for x, y in zip(a, pts[0]))
        vals = [sum(x * y for x, y in zip(a, v)) for v in vertices]
        if all(v <= b for v in vals):
            pass
        elif all(v >= b for v in vals):
            a = [-x for x in a]
            b = -b
        else:
            continue
        key = (tuple(a), b)
        if key not in seen:
            seen.add(key)
            out.append((tuple(a), b))
    return out


def _bbox_lattice_points(vertices: list[Point], facets) -> list[Point]:
    dim = len(vertices[0]) if vertices else 0
    if dim == 0:
        return [()]
    lo = [min(v[i] for v in vertices) for i in range(dim)]
    hi = [max(v[i] for v in vertices) for i in range(dim)]
    pts = []
    for cand in product(*[range(lo[i], hi[i] + 1) for i in range(dim)]):
        if all(sum(a * c for a, c in zip(normal, cand)) <= b for normal, b in facets):
            pts.append(cand)
    return pts


class LatticePolytope:
    """Convex hull of integer points, with exact lattice-point enumeration."""

    def __init__(self, vertices, lattice_points, dim, _internal=None):
        self.vertices: tuple[Point, ...] = tuple(tuple(v) for v in vertices)
        self.lattice_points: tuple[Point, ...] = tuple(tuple(p) for p in lattice_points)
        self.dim: int = dim
        self._internal = _internal  # (origin, basis, projected vertices, facets)

    @classmethod
    def from_points(cls, points) -> "LatticePolytope":
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise ValueError("need at least one point")
        origin, basis, projected = _span_data(pts)
        dim = len(basis)
        proj_vertices = _extreme_points(sorted(set(projected)))
        facets = _facets(proj_vertices, dim)
        proj_lattice = _bbox_lattice_points(proj_vertices, facets)
        to_ambient = lambda y: tuple(o + sum(c * basis[i][k] for i, c in enumerate(y))
                                     for k, o in enumerate(origin))
        lattice_points = sorted((to_ambient(y) for y in proj_lattice), key=monomial_key)
        vertex_set = {to_ambient(y) for y in proj_vertices}
        vertices = sorted(vertex_set, key=monomial_key)
        return cls(vertices, lattice_points, dim,
                   _internal=(origin, basis, proj_vertices, facets))

    @property
    def n_ambient(self) -> int:
        return len(self.vertices[0])

    @property
    def n_lattice_points(self) -> int:
        return len(self.lattice_points)

    def contains(self, point) -> bool:
        """Exact membership of an arbitrary integer point."""
        p = tuple(int(x) for x in point)
        origin, basis, _, facets = self._internal
        delta = [Fraction(a - b) for a, b in zip(p, origin)]
        if not basis:
            return all(d == 0 for d in delta)
        try:
            coords = coords_in_basis(basis, delta)
        except ValueError:
            return False
        if any(c.denominator != 1 for c in coords):
            return False
        y = tuple(int(c) for c in coords)
        return all(sum(a * c for a, c in zip(normal, y)) <= b for normal, b in facets)

    def scaled(self, k: int) -> "LatticePolytope":
        return LatticePolytope.from_points([tuple(k * x for x in v) for v in self.vertices])

    def __eq__(self, other):
        if not isinstance(other, LatticePolytope):
            return NotImplemented
        return set(self.vertices) == set(other.vertices)

    def __repr__(self):
        return (f"LatticePolytope(dim={self.dim}, vertices={len(self.vertices)}, "
                f"lattice_points={self.n_lattice_points})")

    # -- triangulation / volume ------------------------------------------

    def triangulation(self, apex_index: int = 0) -> list[tuple[Point, ...]]:
        """Fan triangulation (projected coordinates) from a chosen vertex."""
        _, _, proj_vertices, facets = self._internal
        return _triangulate(proj_vertices, facets, self.dim, apex_index)


def _triangulate(vertices: list[Point], facets, dim: int, apex_index: int = 0):
    if dim == 0:
        return [tuple(vertices)]
    if len(vertices) == dim + 1:
        return [tuple(vertices)]
    apex = vertices[apex_index % len(vertices)]
    simplices = []
    for normal, b in facets:
        if sum(a * c for a, c in zip(normal, apex)) == b:
            continue
        on_facet = [v for v in vertices
                    if sum(a * c for a, c in zip(normal, v)) == b]
        for sub in _triangulate_lower(on_facet):
            simplices.append((apex,) + sub)
    return simplices


def _triangulate_lower(points: list[Point]):
    """Triangulate a lower-dimensional face given its vertices (ambient coords)."""
    pts = sorted(set(points))
    origin, basis, projected = _span_data(pts)
    dim = len(basis)
    proj_vertices = _extreme_points(sorted(set(projected)))
    facets = _facets(proj_vertices, dim)
    back = {}
    for p, y in zip(pts, projected):
        back[y] = p
    return [tuple(back[y] for y in simplex)
            for simplex in _triangulate(proj_vertices, facets, dim)]


def _simplex_volume(simplex) -> int:
    """|det| of edge vectors of a full-dimensional lattice simplex."""
    base = simplex[0]
    rows = [[Fraction(a - b) for a, b in zip(p, base)] for p in simplex[1:]]
    n = len(rows)
    det = Fraction(1)
    M = [row[:] for row in rows]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    assert det.denominator == 1
    return abs(int(det))


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def newton_polytope(f: Polynomial) -> LatticePolytope:
    """Convex hull of the exponent vectors of f (f must be nonzero)."""
    if f.is_zero:
        raise ValueError("the zero polynomial has no Newton polytope")
    return LatticePolytope.from_points(f.support)


def half_polytope(Q: LatticePolytope) -> LatticePolytope:
    """Integer hull of (1/2) Q; the default Gram basis polytope for f with new(f) = Q.

    A point y lies in (1/2) Q exactly when 2y lies in Q, so the scan stays
    in integer arithmetic.
    """
    lo = [min(v[i] for v in Q.vertices) for i in range(Q.n_ambient)]
    hi = [max(v[i] for v in Q.vertices) for i in range(Q.n_ambient)]
    candidates = []
    ranges = [range(-(-l // 2), h // 2 + 1) for l, h in zip(lo, hi)]
    for cand in product(*ranges):
        if Q.contains(tuple(2 * x for x in cand)):
            candidates.append(cand)
    if not candidates:
        raise GramspecError("half polytope contains no lattice points")
    return LatticePolytope.from_points(candidates)


def is_two_normal(P: LatticePolytope) -> tuple[bool, Point | None]:
    """Check that every lattice point of 2P is a sum of two lattice points of P.

    Returns (True, None) or (False, witness).
    """
    pts = P.lattice_points
    sums = set()
    for i, p in enumerate(pts):
        for q in pts[i:]:
            sums.add(tuple(a + b for a, b in zip(p, q)))
    doubled = P.scaled(2)
    for beta in doubled.lattice_points:
        if beta not in sums:
            return False, beta
    return True, None


def normalized_volume(P: LatticePolytope, apex_index: int = 0) -> int:
    """Lattice-normalized volume (n! times Euclidean volume in the span lattice).

    Computed by exact fan triangulation; a 0-dimensional polytope has volume 1.
    """
    if P.dim == 0:
        return 1
    total = 0
    for simplex in P.triangulation(apex_index=apex_index):
        total += _simplex_volume(simplex)
    return total


@dataclass(frozen=True)
class ToricProfile:
    """Degree data of the projective toric variety attached to a polytope."""

    N: int                      # number of lattice points
    dim: int                    # dimension of the polytope / variety
    codim: int                  # N - 1 - dim
    degree: int                 # lattice-normalized volume
    epsilon: int                # degree - codim - 1 (quadratic deficiency)
    classification: str         # minimal-degree | almost-minimal-degree | other | degenerate
    predicted_generic_length: int | None
    spanning: bool
    two_normal: bool

    def to_dict(self) -> dict:
        return {
            "N": self.N, "dim": self.dim, "codim": self.codim,
            "degree": self.degree, "epsilon": self.epsilon,
            "classification": self.classification,
            "predicted_generic_length": self.predicted_generic_length,
            "spanning": self.spanning, "two_normal": self.two_normal,
        }


def toric_profile(P: LatticePolytope) -> ToricProfile:
    """Classify P by quadratic deficiency and predict the generic SOS length.

    Predictions (dim+1 for deficiency 0, dim+2 for deficiency 1) are only
    asserted when the lattice points span their lattice and P is 2-normal.
    """
    pts = P.lattice_points
    p0 = pts[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    diffs = [d for d in diffs if any(d)]
    spanning = is_saturated(diffs) if diffs else True
    normal2, _ = is_two_normal(P)
    N = P.n_lattice_points
    n = P.dim
    codim = N - 1 - n
    degree = normalized_volume(P)
    epsilon = degree - codim - 1
    if not spanning:
        classification = "degenerate"
    elif epsilon == 0:
        classification = "minimal-degree"
    elif epsilon == 1:
        classification = "almost-minimal-degree"
    else:
        classification = "other"
    predicted = None
    if spanning and normal2:
        if epsilon == 0:
            predicted = n + 1
        elif epsilon == 1:
            predicted = n + 2
    return ToricProfile(N, n, codim, degree, epsilon, classification, predicted,
                        spanning, normal2)


def pataki_interval(N: int, m: int) -> tuple[int, int]:
    """Rank interval for extreme points of a generic m-dimensional section of Sym_N.

    Convention: m is the DIMENSION of the affine space (the codimension is
    N(N+1)/2 - m).  Returns (r_min, r_max) with
    r_min = min{r : m >= C(N-r+1, 2)} and r_max = max{r : C(r+1,2) + m <= C(N+1,2)}.
    """
    if not 0 <= m <= N * (N + 1) // 2:
        raise ValueError(f"m={m} outside [0, N(N+1)/2]")
    r_min = next((r for r in range(N + 1) if m >= comb(N - r + 1, 2)), None)
    r_max = max((r for r in range(N + 1) if comb(r + 1, 2) + m <= comb(N + 1, 2)),
                default=None)
    if r_min is None or r_max is None or r_min > r_max:
        raise ValueError(f"empty Pataki interval for N={N}, m={m}")
    return r_min, r_max


def hermitian_pataki_interval(N: int, c: int) -> tuple[int, int]:
    """Rank interval for extreme points of a generic section of Herm_N.

    Convention: c is the CODIMENSION of the affine space in Herm_N (real
    dimension N^2).  Ranks r satisfy (N-r)^2 + c <= N^2 and r^2 <= c.
    """
    if not 0 <= c <= N * N:
        raise ValueError(f"c={c} outside [0, N^2]")
    ranks = [r for r in range(N + 1) if (N - r) ** 2 + c <= N * N and r * r <= c]
    if not ranks:
        raise ValueError(f"empty Hermitian Pataki interval for N={N}, c={c}")
    return min(ranks), max(ranks)


# -- convenient polytope constructors ---------------------------------------


def simplex(n: int, scale: int = 1) -> LatticePolytope:
    """The scaled standard simplex scale * conv{0, e_1, ..., e_n} in Z^n."""
    verts = [tuple(0 for _ in range(n))]
    for i in range(n):
        v = [0] * n
        v[i] = scale
        verts.append(tuple(v))
    return LatticePolytope.from_points(verts)


def segment(d: int) -> LatticePolytope:
    """The segment [0, d] in Z^1 (binary forms of degree 2d use segment(d))."""
    return LatticePolytope.from_points([(0,), (d,)])


def cayley(degrees: list[int]) -> LatticePolytope:
    """Cayley polytope of segments [0, d_i]: conv of union of [0,d_i] x e_i."""
    m = len(degrees)
    verts = []
    for i, d in enumerate(degrees):
        e = [0] * m
        e[i] = 1
        verts.append(tuple([0] + e))
        verts.append(tuple([d] + e))
    return LatticePolytope.from_points(verts)


def box_product(P: LatticePolytope, d: int) -> LatticePolytope:
    """P x [0, d]: append one coordinate running over {0, ..., d}."""
    verts = []
    for v in P.vertices:
        verts.append(v + (0,))
        verts.append(v + (d,))
    return LatticePolytope.from_points(verts)
