"""Closed-form geometry of binary-sextic Gram spectrahedra.

The Gram matrices of a sextic (in the signed-binomial coefficient convention)
form a 3-parameter pencil whose determinant cuts out a Kummer quartic
surface.  Its projective dual is again a Kummer surface with an explicit
equation F = W^2 F2 + 2 W F1 + F0 in the dual coordinates (X, Y, Z, W);
linear optimization over the spectrahedron reduces to the quadratic formula
in W plus a small linear-algebra recovery of the optimizer.

The 25 coefficient expressions of F are transcribed once, locked by the
affine-chart fixture check and by per-coefficient unit tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

import numpy as np

from .config import Config, DEFAULT
from .errors import NumericalFailure
from .matrices import is_psd, numerical_rank, sym
from .poly import BinaryForm, Polynomial
from .sdp import solve_affine

_EXACT_TYPES = (int, Fraction)


@dataclass(frozen=True)
class SexticCoeffs:
    """Coefficients a0..a6 of f = a6 s^6 - 6 a5 s^5 t + 15 a4 s^4 t^2
    - 20 a3 s^3 t^3 + 15 a2 s^2 t^4 - 6 a1 s t^5 + a0 t^6."""

    a: tuple

    def __init__(self, a0, a1, a2, a3, a4, a5, a6):
        object.__setattr__(self, "a", (a0, a1, a2, a3, a4, a5, a6))

    @property
    def exact(self) -> bool:
        return all(isinstance(v, _EXACT_TYPES) for v in self.a)

    @classmethod
    def from_form(cls, f: BinaryForm) -> "SexticCoeffs":
        if f.degree != 6:
            raise ValueError("need a sextic")
        c = f.coeffs
        if all(isinstance(v, _EXACT_TYPES) for v in c):
            vals = (Fraction(c[0]), Fraction(-c[1], 6), Fraction(c[2], 15),
                    Fraction(-c[3], 20), Fraction(c[4], 15), Fraction(-c[5], 6),
                    Fraction(c[6]))
        else:
            vals = (c[0], -c[1] / 6, c[2] / 15, -c[3] / 20, c[4] / 15, -c[5] / 6, c[6])
        return cls(*vals)

    def to_form(self) -> BinaryForm:
        a0, a1, a2, a3, a4, a5, a6 = self.a
        return BinaryForm(6, [a0, -6 * a1, 15 * a2, -20 * a3, 15 * a4, -6 * a5, a6])

    def floats(self) -> tuple[float, ...]:
        return tuple(float(v) for v in self.a)


def gram_parametrization(a: SexticCoeffs, x: float, y: float, z: float) -> np.ndarray:
    """The 4x4 Gram matrix of the sextic at kernel coordinates (x, y, z)."""
    a0, a1, a2, a3, a4, a5, a6 = a.floats()
    return np.array([
        [a6, -3 * a5, 3 * a4 + z, -a3 - y],
        [-3 * a5, 9 * a4 - 2 * z, -9 * a3 + y, 3 * a2 + x],
        [3 * a4 + z, -9 * a3 + y, 9 * a2 - 2 * x, -3 * a1],
        [-a3 - y, 3 * a2 + x, -3 * a1, a0],
    ])


# kernel directions of the pencil (partial derivatives in x, y, z)
_BX = np.zeros((4, 4)); _BX[1, 3] = _BX[3, 1] = 1.0; _BX[2, 2] = -2.0
_BY = np.zeros((4, 4)); _BY[0, 3] = _BY[3, 0] = -1.0; _BY[1, 2] = _BY[2, 1] = 1.0
_BZ = np.zeros((4, 4)); _BZ[0, 2] = _BZ[2, 0] = 1.0; _BZ[1, 1] = -2.0
PENCIL_DIRECTIONS = (_BX, _BY, _BZ)


def symbolic_gram_matrix(a: SexticCoeffs, homogenize: bool = False):
    """Entries of the pencil as polynomials in (x, y, z) or (x, y, z, w)."""
    mode = "rational" if a.exact else "float"
    n = 4 if homogenize else 3
    a0, a1, a2, a3, a4, a5, a6 = a.a

    def lin(const, cx=0, cy=0, cz=0):
        terms = {}
        if homogenize:
            if const != 0:
                terms[(0, 0, 0, 1)] = const
            for c, pos in ((cx, 0), (cy, 1), (cz, 2)):
                if c != 0:
                    e = [0, 0, 0, 0]
                    e[pos] = 1
                    terms[tuple(e)] = c
        else:
            if const != 0:
                terms[(0, 0, 0)] = const
            for c, pos in ((cx, 0), (cy, 1), (cz, 2)):
                if c != 0:
                    e = [0, 0, 0]
                    e[pos] = 1
                    terms[tuple(e)] = c
        return Polynomial(terms, n, mode)

    return [
        [lin(a6), lin(-3 * a5), lin(3 * a4, cz=1), lin(-a3, cy=-1)],
        [lin(-3 * a5), lin(9 * a4, cz=-2), lin(-9 * a3, cy=1), lin(3 * a2, cx=1)],
        [lin(3 * a4, cz=1), lin(-9 * a3, cy=1), lin(9 * a2, cx=-2), lin(-3 * a1)],
        [lin(-a3, cy=-1), lin(3 * a2, cx=1), lin(-3 * a1), lin(a0)],
    ]


def determinant_polynomial(a: SexticCoeffs, homogenize: bool = False) -> Polynomial:
    """det of the pencil as an exact polynomial in (x, y, z[, w])."""
    M = symbolic_gram_matrix(a, homogenize=homogenize)
    return _det4(M)


def _det4(M) -> Polynomial:
    # cofactor expansion along the first row
    def det3(rows, cols):
        (i1, i2, i3), (j1, j2, j3) = rows, cols
        return (M[i1][j1] * (M[i2][j2] * M[i3][j3] - M[i2][j3] * M[i3][j2])
                - M[i1][j2] * (M[i2][j1] * M[i3][j3] - M[i2][j3] * M[i3][j1])
                + M[i1][j3] * (M[i2][j1] * M[i3][j2] - M[i2][j2] * M[i3][j1]))

    total = None
    sign = 1
    for j in range(4):
        cols = [c for c in range(4) if c != j]
        term = M[0][j] * det3((1, 2, 3), tuple(cols))
        term = term if sign > 0 else -term
        total = term if total is None else total + term
        sign = -sign
    return total


@dataclass
class DualKummer:
    """The dual Kummer surface F = W^2 F2 + 2 W F1 + F0 in coordinates (X, Y, Z, W)."""

    F2: Polynomial
    F1: Polynomial
    F0: Polynomial

    def coefficients_at(self, c) -> tuple[float, float, float]:
        return (float(self.F2.eval(c)), float(self.F1.eval(c)), float(self.F0.eval(c)))

    def eval(self, X, Y, Z, W):
        p = (X, Y, Z)
        return self.F2.eval(p) * W * W + 2 * W * self.F1.eval(p) + self.F0.eval(p)

    def restrict_to_chart(self, w_poly: Polynomial) -> Polynomial:
        """F with W replaced by a polynomial in (X, Y, Z)."""
        return self.F2 * w_poly * w_poly + 2 * w_poly * self.F1 + self.F0


def dual_kummer(a: SexticCoeffs) -> DualKummer:
    """Explicit equation of the surface dual to the pencil determinant."""
    a0, a1, a2, a3, a4, a5, a6 = a.a
    mode = "rational" if a.exact else "float"

    F2 = Polynomial({(0, 2, 0): -1, (1, 0, 1): 4}, 3, mode)
    F1 = Polynomial({
        (3, 0, 0): a0,
        (2, 1, 0): 3 * a1,
        (1, 2, 0): 3 * a2,
        (0, 3, 0): a3,
        (2, 0, 1): 3 * a2,
        (1, 1, 1): 6 * a3,
        (0, 2, 1): 3 * a4,
        (1, 0, 2): 3 * a4,
        (0, 1, 2): 3 * a5,
        (0, 0, 3): a6,
    }, 3, mode)
    F0 = Polynomial({
        (4, 0, 0): 9 * (a0 * a2 - a1 * a1),
        (3, 1, 0): 18 * (a0 * a3 - a1 * a2),
        (2, 2, 0): 3 * (5 * a0 * a4 - 2 * a1 * a3 - 3 * a2 * a2),
        (1, 3, 0): 6 * (a0 * a5 - a2 * a3),
        (0, 4, 0): a0 * a6 - a3 * a3,
        (3, 0, 1): 6 * (-a0 * a4 + 10 * a1 * a3 - 9 * a2 * a2),
        (2, 1, 1): 6 * (-a0 * a5 + 12 * a1 * a4 - 11 * a2 * a3),
        (1, 2, 1): 2 * (-a0 * a6 + 18 * a1 * a5 - 9 * a2 * a4 - 8 * a3 * a3),
        (0, 3, 1): 6 * (a1 * a6 - a3 * a4),
        (0, 0, 4): 9 * (a4 * a6 - a5 * a5),
        (2, 0, 2): a0 * a6 - 18 * a1 * a5 + 117 * a2 * a4 - 100 * a3 * a3,
        (1, 1, 2): 6 * (-a1 * a6 + 12 * a2 * a5 - 11 * a3 * a4),
        (0, 2, 2): 3 * (5 * a2 * a6 - 2 * a3 * a5 - 3 * a4 * a4),
        (1, 0, 3): 6 * (-a2 * a6 + 10 * a3 * a5 - 9 * a4 * a4),
        (0, 1, 3): 18 * (a3 * a6 - a4 * a5),
    }, 3, mode)
    return DualKummer(F2, F1, F0)


# ---------------------------------------------------------------------------
# Closed-form linear optimization
# ---------------------------------------------------------------------------


_MINOR_ROWS = np.array([[r for r in range(4) if r != i] for i in range(4)])
_MINOR_SIGNS = np.array([[(-1.0) ** (i + j) for j in range(4)] for i in range(4)])


def _adjugate4(M: np.ndarray) -> np.ndarray:
    minors = np.empty((4, 4, 3, 3))
    for i in range(4):
        rows = _MINOR_ROWS[i]
        for j in range(4):
            minors[i, j] = M[np.ix_(rows, _MINOR_ROWS[j])]
    return (_MINOR_SIGNS * np.linalg.det(minors)).T


def _plane_basis(c: np.ndarray):
    c = np.asarray(c, dtype=float)
    n2 = float(c @ c)
    q, _ = np.linalg.qr(np.column_stack([c, np.eye(3)]))
    return c / n2, q[:, 1], q[:, 2]


def _newton_tangency(a: SexticCoeffs, c: np.ndarray, value: float,
                     start: np.ndarray | None = None) -> np.ndarray | None:
    """Critical point of det on the plane c . p = value, via damped Newton.

    Works for indefinite critical matrices too (no PSD assumption).
    """
    p_base, q1, q2 = _plane_basis(np.asarray(c, dtype=float))
    p0 = value * p_base
    B1 = sum(q1[i] * B for i, B in enumerate(PENCIL_DIRECTIONS))
    B2 = sum(q2[i] * B for i, B in enumerate(PENCIL_DIRECTIONS))

    def matrix(ab):
        p = p0 + ab[0] * q1 + ab[1] * q2
        return gram_parametrization(a, *p)

    def grad(ab):
        adj = _adjugate4(matrix(ab))
        return np.array([np.sum(adj * B1.T), np.sum(adj * B2.T)])

    scale = max(1.0, max(abs(v) for v in a.floats()), abs(value)) ** 3
    starts = []
    if start is not None:
        ab0 = np.array([q1 @ (start - p0), q2 @ (start - p0)])
        starts.append(ab0)
    R = 2.0 * max(1.0, abs(value), *[abs(v) for v in a.floats()])
    for s in np.linspace(-R, R, 5):
        for t in np.linspace(-R, R, 5):
            starts.append(np.array([s, t]))

    det_scale = max(1.0, abs(np.linalg.det(gram_parametrization(a, 0, 0, 0))))
    best = None
    best_det = np.inf
    for ab in starts:
        ab = ab.astype(float).copy()
        ok = False
        for _ in range(60):
            g = grad(ab)
            if np.linalg.norm(g) <= 1e-11 * scale:
                ok = True
                break
            h = 1e-6 * max(1.0, np.linalg.norm(ab))
            J = np.column_stack([(grad(ab + np.array([h, 0])) - grad(ab - np.array([h, 0]))) / (2 * h),
                                 (grad(ab + np.array([0, h])) - grad(ab - np.array([0, h]))) / (2 * h)])
            try:
                step = np.linalg.solve(J, -g)
            except np.linalg.LinAlgError:
                break
            if np.linalg.norm(step) > 10 * R:
                break
            lam = 1.0
            base = np.linalg.norm(g)
            for _ in range(25):
                cand = ab + lam * step
                if np.linalg.norm(grad(cand)) < base:
                    break
                lam *= 0.5
            ab = ab + lam * step
        if ok:
            d = abs(np.linalg.det(matrix(ab)))
            if d < best_det:
                best_det = d
                best = ab
            if d <= 1e-10 * det_scale:
                break  # tangency found to high accuracy; skip remaining starts
    if best is None or best_det > 1e-6 * det_scale:
        return None
    return p0 + best[0] * q1 + best[1] * q2


@dataclass
class CriticalPoint:
    value: float
    xyz: np.ndarray
    matrix: np.ndarray
    psd: bool
    rank: int


@dataclass
class ClosedFormResult:
    """Outcome of closed-form linear optimization over a sextic Gram spectrahedron."""

    objective: tuple
    discriminant: float
    critical_values: tuple[float, float] | None   # rank-3 pair, None if complex
    rank3: list[CriticalPoint]
    vertex_values: list[tuple[float, np.ndarray]]         # 4 real rank-2 vertices
    complex_vertex_values: list[complex]                  # remaining 6 nodes
    maximum: CriticalPoint
    minimum: CriticalPoint


def _xyz_from_matrix(a: SexticCoeffs, M: np.ndarray):
    a0, a1, a2, a3, a4, a5, a6 = a.a
    x = M[1, 3] - 3 * float(a2)
    y = -float(a3) - M[0, 3]
    z = M[0, 2] - 3 * float(a4)
    return np.array([x, y, z]) if not np.iscomplexobj(M) else np.array([x, y, z], dtype=complex)


def optimize_closed_form(a: SexticCoeffs, c, config: Config = DEFAULT) -> ClosedFormResult:
    """Critical values of c . (x, y, z) over the spectrahedron, in closed form.

    The two rank-3 critical values are the roots in W of
    F2(c) W^2 + 2 F1(c) W + F0(c) = 0; the corresponding matrices are
    recovered by the tangency (KKT) conditions on the objective plane.  The
    declared optimum compares them against the ten rank-2 node values.
    """
    from .binary import kummer_nodes  # deferred: binary imports gram machinery

    cvec = np.asarray([float(v) for v in c], dtype=float)
    dk = dual_kummer(a)
    F2c, F1c, F0c = dk.coefficients_at(tuple(cvec))
    if F2c == 0:
        raise ValueError("degenerate objective: F2(c) = 0")
    disc = F1c * F1c - F2c * F0c
    crit_vals = None
    if disc >= 0:
        rt = sqrt(disc)
        crit_vals = ((-F1c + rt) / F2c, (-F1c - rt) / F2c)

    # SDP starting points for the tangency recovery
    M0 = gram_parametrization(a, 0.0, 0.0, 0.0)
    sdp_points = []
    for sign in (1.0, -1.0):
        try:
            sol = solve_affine(M0, list(PENCIL_DIRECTIONS), sign * cvec, config)
            sdp_points.append(sol.point)
        except Exception:
            pass

    rank3: list[CriticalPoint] = []
    if crit_vals is not None:
        for v in crit_vals:
            start = None
            for X in sdp_points:
                xyz = _xyz_from_matrix(a, X)
                if abs(cvec @ xyz - v) < 1e-6 * (1 + abs(v)):
                    start = xyz
                    break
            p = _newton_tangency(a, cvec, v, start=start)
            if p is None:
                raise NumericalFailure(f"could not recover the critical point at value {v}")
            M = gram_parametrization(a, *p)
            rank3.append(CriticalPoint(v, p, M,
                                       is_psd(M, config.tolerances.psd_tol),
                                       numerical_rank(M, config.tolerances.rank_tol)))

    nodes = kummer_nodes(a.to_form())
    vertex_values: list[tuple[float, np.ndarray]] = []
    complex_values: list[complex] = []
    for node in nodes.rank2:
        xyz = _xyz_from_matrix(a, node.matrix)
        val = complex(cvec @ xyz)
        if node.psd:
            vertex_values.append((val.real, node.matrix))
        else:
            complex_values.append(val)

    candidates: list[CriticalPoint] = [cp for cp in rank3 if cp.psd]
    for val, M in vertex_values:
        candidates.append(CriticalPoint(val, _xyz_from_matrix(a, M).real, M, True, 2))
    if not candidates:
        raise NumericalFailure("no feasible candidate; is the sextic positive?")
    maximum = max(candidates, key=lambda cp: cp.value)
    minimum = min(candidates, key=lambda cp: cp.value)
    return ClosedFormResult(tuple(cvec), disc, crit_vals, rank3,
                            vertex_values, complex_values, maximum, minimum)


# ---------------------------------------------------------------------------
# Affine chart fixture
# ---------------------------------------------------------------------------

CHART_W = {"const": 1, "X": -1, "Y": Fraction(1, 5), "Z": 1}
CHART_SUBST = {
    "x": {"const": 1, "X": 1, "Y": 1, "Z": 1},
    "y": {"const": Fraction(-1, 5), "X": 1, "Y": 1, "Z": -1},
    "z": {"const": -1, "X": 1, "Y": -1, "Z": -3},
}


def _linear_poly(spec: dict, mode: str) -> Polynomial:
    terms = {}
    if spec.get("const", 0) != 0:
        terms[(0, 0, 0)] = spec["const"]
    for name, e in (("X", (1, 0, 0)), ("Y", (0, 1, 0)), ("Z", (0, 0, 1))):
        if spec.get(name, 0) != 0:
            terms[e] = spec[name]
    return Polynomial(terms, 3, mode)


def chart_check(a: SexticCoeffs, tol: float = 1e-9):
    """Verify that F restricted to the chart X - Y/5 - Z + W = 1 is a scalar
    multiple of the pencil determinant under x = X+Y+Z+1, y = X+Y-Z-1/5,
    z = X-Y-3Z-1.  Returns the scalar; raises on non-proportionality.

    Exact coefficients give an exact rational comparison.
    """
    mode = "rational" if a.exact else "float"
    w_poly = _linear_poly(CHART_W, mode)
    subst = [_linear_poly(CHART_SUBST[k], mode) for k in ("x", "y", "z")]
    det_poly = determinant_polynomial(a)
    if det_poly.is_zero:
        raise ValueError("pencil determinant is identically zero")
    composed = det_poly.eval(subst)            # polynomial in (X, Y, Z)
    restricted = dual_kummer(a).restrict_to_chart(w_poly)
    lead = restricted.support[0]
    denom = restricted.coefficient(lead)
    if denom == 0:
        raise ValueError("restricted dual surface vanished; transcription bug")
    lam = composed.coefficient(lead) / denom
    diff = composed - restricted.scale(lam)
    if mode == "rational":
        if not diff.is_zero:
            raise ValueError("chart restriction is not proportional to the determinant")
        return lam
    rel = diff.max_norm() / max(composed.max_norm(), 1e-300)
    if rel > tol:
        raise ValueError(f"chart residual {rel:.2e} exceeds {tol}")
    return lam


# ---------------------------------------------------------------------------
# Surface sampling
# ---------------------------------------------------------------------------


@dataclass
class SurfaceMesh:
    name: str
    vertices: np.ndarray   # (k, 3) float
    faces: np.ndarray      # (m, 3) int, zero-based


def _eig_min_field(a: SexticCoeffs, xs, ys, zs) -> np.ndarray:
    M0 = gram_parametrization(a, 0.0, 0.0, 0.0)
    field = np.empty((len(xs), len(ys), len(zs)))
    Yg, Zg = np.meshgrid(ys, zs, indexing="ij")
    for i, xv in enumerate(xs):
        Ms = (M0[None, None] + xv * _BX[None, None]
              + Yg[..., None, None] * _BY + Zg[..., None, None] * _BZ)
        field[i] = np.linalg.eigvalsh(Ms)[..., 0]
    return field


def spectrahedron_box(a: SexticCoeffs, config: Config = DEFAULT, pad: float = 0.15):
    """Axis-aligned bounding box of the spectrahedron via six support solves."""
    M0 = gram_parametrization(a, 0.0, 0.0, 0.0)
    lo, hi = np.empty(3), np.empty(3)
    for i in range(3):
        e = np.zeros(3)
        e[i] = 1.0
        hi[i] = solve_affine(M0, list(PENCIL_DIRECTIONS), e, config).objective_value
        lo[i] = -solve_affine(M0, list(PENCIL_DIRECTIONS), -e, config).objective_value
    mid = (lo + hi) / 2
    half = (hi - lo) / 2
    half = half * (1 + pad) + 0.05 * max(1.0, float(np.max(np.abs(hi - lo))))
    return mid - half, mid + half


def sample_surface(a: SexticCoeffs, resolution: int = 48,
                   dual_radius: float | None = None,
                   config: Config = DEFAULT) -> list[SurfaceMesh]:
    """Meshes of the PSD boundary {lambda_min = 0} and the dual surface {F = 0}.

    The primal mesh is restricted to the boundary of the spectrahedron by
    construction (marching cubes on the smallest-eigenvalue field).
    """
    from skimage.measure import marching_cubes

    lo, hi = spectrahedron_box(a, config)
    xs, ys, zs = (np.linspace(lo[i], hi[i], resolution) for i in range(3))
    field = _eig_min_field(a, xs, ys, zs)
    meshes = []
    spacing = tuple((hi[i] - lo[i]) / (resolution - 1) for i in range(3))
    try:
        verts, faces, _, _ = marching_cubes(field, level=0.0, spacing=spacing)
        verts = verts + lo[None, :]
        meshes.append(SurfaceMesh("gram_spectrahedron_boundary", verts, faces))
    except (ValueError, RuntimeError) as exc:
        raise NumericalFailure(f"primal surface extraction failed: {exc}") from exc

    R = dual_radius if dual_radius is not None else 2.5 * max(1.0, *[abs(v) for v in a.floats()])
    gs = np.linspace(-R, R, resolution)
    Xg, Yg, Zg = np.meshgrid(gs, gs, gs, indexing="ij")
    dk = dual_kummer(a)
    dual_field = np.zeros_like(Xg)
    for poly, wpow in ((dk.F2, 2), (dk.F1, 1), (dk.F0, 0)):
        part = np.zeros_like(Xg)
        for e, coef in poly.terms.items():
            part += float(coef) * Xg ** e[0] * Yg ** e[1] * Zg ** e[2]
        dual_field += part * (2.0 if wpow == 1 else 1.0)  # W = 1 on this chart
    try:
        verts, faces, _, _ = marching_cubes(dual_field, level=0.0,
                                            spacing=(gs[1] - gs[0],) * 3)
        verts = verts - R
        meshes.append(SurfaceMesh("dual_kummer", verts, faces))
    except (ValueError, RuntimeError):
        pass  # a dual chart may miss the zero level; primal mesh already emitted
    return meshes
