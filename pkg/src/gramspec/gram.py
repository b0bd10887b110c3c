"""Gram spaces, sum-of-squares extraction, rational certificates, Hurwitz identities.

The affine space of Gram matrices of f over a basis polytope P is stored as a
particular matrix G0 plus an integer basis of the kernel of the Gram map,
built combinatorially from the groups of index pairs (i, j) whose monomials
multiply to the same monomial.  The construction is exact in both scalar
modes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .config import Config, DEFAULT
from .errors import NewtonPolytopeViolation, NotPSD, ScalarModeError
from .exactla import exact_ldlt, four_rational_squares
from .matrices import exact_to_float, sym
from .poly import Exponent, Polynomial, monomial_key
from .polytope import LatticePolytope, half_polytope, newton_polytope

PairGroup = list[tuple[int, int]]


@dataclass
class GramSpace:
    """Affine space of Gram matrices of f over the monomials of polytope P."""

    polytope: LatticePolytope
    monomials: tuple[Exponent, ...]
    f: Polynomial
    G0: np.ndarray                              # particular Gram matrix (float mirror)
    G0_exact: list[list[Fraction]] | None       # exact particular (rational mode)
    kernel_basis: list[np.ndarray]              # integer-valued float matrices
    pair_groups: dict[Exponent, PairGroup] = field(repr=False)

    @property
    def N(self) -> int:
        return len(self.monomials)

    @property
    def m(self) -> int:
        return len(self.kernel_basis)

    @property
    def mode(self) -> str:
        return self.f.mode

    def point(self, x) -> np.ndarray:
        """G0 + sum x_i B_i as a float matrix."""
        M = self.G0.copy()
        for xi, B in zip(np.atleast_1d(np.asarray(x, dtype=float)), self.kernel_basis):
            M += xi * B
        return M

    def coordinates(self, A: np.ndarray) -> np.ndarray:
        """Least-squares kernel coordinates of A - G0 (exact when A lies in G(f))."""
        if self.m == 0:
            return np.zeros(0)
        D = (np.asarray(A, dtype=float) - self.G0).reshape(-1)
        B = np.stack([Bi.reshape(-1) for Bi in self.kernel_basis], axis=1)
        sol, *_ = np.linalg.lstsq(B, D, rcond=None)
        return sol


def _pair_groups(monomials: tuple[Exponent, ...]) -> dict[Exponent, PairGroup]:
    groups: dict[Exponent, PairGroup] = {}
    for i, mi in enumerate(monomials):
        for j in range(i, len(monomials)):
            beta = tuple(a + b for a, b in zip(mi, monomials[j]))
            groups.setdefault(beta, []).append((i, j))
    return {b: sorted(groups[b]) for b in sorted(groups, key=monomial_key)}


def gram_space(f: Polynomial, P: LatticePolytope | None = None) -> GramSpace:
    """Build G(f): particular solution plus an exact kernel basis.

    The particular matrix distributes each coefficient of f equally over the
    index pairs that hit the monomial.  Raises NewtonPolytopeViolation when a
    monomial of f is not a sum of two lattice points of P.
    """
    if f.is_zero:
        raise ValueError("cannot build a Gram space for the zero polynomial")
    if f.mode == "complex":
        raise ScalarModeError("Gram spaces need real (rational or float) input")
    if P is None:
        P = half_polytope(newton_polytope(f))
    monomials = tuple(P.lattice_points)
    N = len(monomials)
    groups = _pair_groups(monomials)
    for exp in f.support:
        if exp not in groups:
            raise NewtonPolytopeViolation(exp)

    rational = f.mode == "rational"
    G0_exact = [[Fraction(0)] * N for _ in range(N)] if rational else None
    G0 = np.zeros((N, N))
    for exp in f.support:
        pairs = groups[exp]
        k = len(pairs)
        coef = f.coefficient(exp)
        share = (Fraction(coef) / k) if rational else float(coef) / k
        for (i, j) in pairs:
            if i == j:
                if rational:
                    G0_exact[i][i] += share
                G0[i, i] += float(share)
            else:
                half = share / 2
                if rational:
                    G0_exact[i][j] += half
                    G0_exact[j][i] += half
                G0[i, j] += float(half)
                G0[j, i] += float(half)

    kernel: list[np.ndarray] = []
    for beta, pairs in groups.items():
        if len(pairs) < 2:
            continue
        q = pairs[0]
        wq = 1 if q[0] == q[1] else 2
        for p in pairs[1:]:
            wp = 1 if p[0] == p[1] else 2
            B = np.zeros((N, N))
            _add_sym(B, p, wq)
            _add_sym(B, q, -wp)
            g = gcd(wq, wp)
            kernel.append(B / g)
    return GramSpace(P, monomials, f, G0, G0_exact, kernel, groups)


def _add_sym(B: np.ndarray, pair: tuple[int, int], val: float) -> None:
    i, j = pair
    if i == j:
        B[i, i] += val
    else:
        B[i, j] += val
        B[j, i] += val


def gram_apply(space: GramSpace, A) -> Polynomial:
    """Expand m_P^T A m_P; exact for Fraction matrices, complex allowed."""
    if isinstance(A, np.ndarray):
        if A.shape != (space.N, space.N):
            raise ValueError(f"matrix shape {A.shape} does not match N={space.N}")
        mode = "complex" if np.iscomplexobj(A) else "float"
        terms = {}
        for beta, pairs in space.pair_groups.items():
            total = 0j if mode == "complex" else 0.0
            for (i, j) in pairs:
                total = total + (A[i, j] if i == j else A[i, j] + A[j, i])
            if total != 0:
                terms[beta] = total
        return Polynomial(terms, space.f.nvars, mode)
    # exact rational matrix as nested lists
    n = len(A)
    if n != space.N or any(len(row) != n for row in A):
        raise ValueError("matrix size does not match the Gram space")
    terms = {}
    for beta, pairs in space.pair_groups.items():
        total = Fraction(0)
        for (i, j) in pairs:
            total += A[i][j] if i == j else A[i][j] + A[j][i]
        if total != 0:
            terms[beta] = total
    return Polynomial(terms, space.f.nvars, "rational")


@dataclass
class SosCertificate:
    """A declared identity f = sum p_i^2 (or sum p_i conj(p_i) in hermitian mode)."""

    summands: list[Polynomial]
    mode: str                     # real | rational | hermitian
    residual: object              # Fraction(0) in rational mode, float otherwise
    source_rank: int

    def __len__(self) -> int:
        return len(self.summands)

    def reconstruct(self) -> Polynomial:
        if not self.summands:
            raise ValueError("empty certificate")
        first = self.summands[0]
        if self.mode == "hermitian":
            total = Polynomial.zero(first.nvars, "complex")
            for p in self.summands:
                total = total + p.to_complex() * p.to_complex().conjugate()
            return total
        total = Polynomial.zero(first.nvars, first.mode)
        for p in self.summands:
            total = total + p * p
        return total

    def residual_against(self, f: Polynomial) -> float:
        recon = self.reconstruct()
        if self.mode == "rational":
            diff = f - recon
            return 0.0 if diff.is_zero else float(diff.max_norm())
        target = f.to_complex() if recon.mode == "complex" else f.to_float()
        if recon.mode == "complex" and target.mode != "complex":
            target = target.to_complex()
        return float((target - recon).max_norm())


def extract_sos(space: GramSpace, A, config: Config = DEFAULT) -> SosCertificate:
    """Eigenvalue factorization of a PSD Gram matrix into squares.

    Eigenvalues below rank_tol * lambda_max are clipped to zero; the summand
    count equals the resulting numerical rank.
    """
    M = sym(np.asarray(A, dtype=float) if isinstance(A, np.ndarray)
            else exact_to_float(A))
    w, V = np.linalg.eigh(M)
    top = float(w[-1]) if w.size else 0.0
    if top <= 0 and float(w[0]) < 0:
        raise NotPSD("matrix has no positive eigenvalue")
    if float(w[0]) < -config.tolerances.psd_tol * max(top, 1e-12):
        raise NotPSD(f"lambda_min = {w[0]:.3e} below tolerance")
    keep = w > config.tolerances.rank_tol * max(top, 0.0)
    summands = []
    for lam, v in zip(w[keep], V[:, keep].T):
        coeffs = np.sqrt(lam) * v
        terms = {m: c for m, c in zip(space.monomials, coeffs) if c != 0.0}
        summands.append(Polynomial(terms, space.f.nvars, "float"))
    cert = SosCertificate(summands, "real", 0.0, int(np.sum(keep)))
    cert.residual = cert.residual_against(space.f)
    return cert


def rational_sos(space: GramSpace, A: list[list[Fraction]]) -> SosCertificate:
    """Exact rational certificate from a rational PSD Gram matrix.

    Diagonalizes A = P^T L D L^T P over Q, writes each positive diagonal
    entry as a sum of four rational squares, and emits at most 4 rank(A)
    summands with residual exactly zero.
    """
    if space.mode != "rational":
        raise ScalarModeError("rational_sos needs a rational-mode Gram space")
    exact = [[Fraction(x) for x in row] for row in A]
    check = gram_apply(space, exact)
    if check != space.f:
        diff = check - space.f
        raise ValueError(f"matrix is not a Gram matrix of f (first offending "
                         f"monomial {diff.support[0]})")
    perm, L, D, rank = exact_ldlt(exact)  # raises NotPSD exactly
    summands: list[Polynomial] = []
    for i in range(rank):
        g_terms: dict[Exponent, Fraction] = {}
        for j in range(len(exact)):
            lj = L[j][i]
            if lj:
                mono = space.monomials[perm[j]]
                g_terms[mono] = g_terms.get(mono, Fraction(0)) + lj
        g = Polynomial(g_terms, space.f.nvars, "rational")
        for w in four_rational_squares(D[i]):
            if w != 0:
                summands.append(g.scale(w))
    cert = SosCertificate(summands, "rational", Fraction(0), rank)
    recon = cert.reconstruct()
    if recon != space.f:
        raise AssertionError("exact reconstruction failed; diagonalization bug")
    return cert


def round_to_rational_gram(space: GramSpace, x, max_denominator: int = 10**6):
    """Exact rational Gram matrix from rounded kernel coordinates.

    The result lies in G(f) by construction (G0 is exact, the kernel basis is
    integer); positive semidefiniteness is NOT guaranteed and should be
    checked with exact_ldlt / rational_sos.
    """
    if space.mode != "rational":
        raise ScalarModeError("rounding needs a rational-mode Gram space")
    coords = [Fraction(float(v)).limit_denominator(max_denominator)
              for v in np.atleast_1d(np.asarray(x, dtype=float))]
    if len(coords) != space.m:
        raise ValueError(f"need {space.m} coordinates")
    N = space.N
    A = [[Fraction(v) for v in row] for row in space.G0_exact]
    for t, B in zip(coords, space.kernel_basis):
        for i in range(N):
            for j in range(N):
                bij = int(B[i, j])
                if bij:
                    A[i][j] += t * bij
    return A


# ---------------------------------------------------------------------------
# Hurwitz identities: (x_1^2+...+x_r^2)(y_1^2+...+y_r^2) as a sum of r squares
# ---------------------------------------------------------------------------


def norm_product_form(r: int, s: int) -> Polynomial:
    """The biquadratic form (sum x_i^2)(sum y_j^2) in r + s variables."""
    n = r + s
    xs = sum((Polynomial.variable(i, n) ** 2 for i in range(r)),
             Polynomial.zero(n))
    ys = sum((Polynomial.variable(r + j, n) ** 2 for j in range(s)),
             Polynomial.zero(n))
    return xs * ys


def _cd_conj(a: list[Polynomial]) -> list[Polynomial]:
    if len(a) == 1:
        return a
    h = len(a) // 2
    return _cd_conj(a[:h]) + [-c for c in a[h:]]


def _cd_mul(a: list[Polynomial], b: list[Polynomial]) -> list[Polynomial]:
    """Cayley-Dickson product; norm-multiplicative for lengths 1, 2, 4, 8."""
    if len(a) == 1:
        return [a[0] * b[0]]
    h = len(a) // 2
    a1, a2 = a[:h], a[h:]
    c1, c2 = b[:h], b[h:]
    left = [p - q for p, q in zip(_cd_mul(a1, c1), _cd_mul(_cd_conj(c2), a2))]
    right = [p + q for p, q in zip(_cd_mul(c2, a1), _cd_mul(a2, _cd_conj(c1)))]
    return left + right


def hurwitz_sos(r: int) -> SosCertificate:
    """Exact bilinear identity writing norm_product_form(r, r) as r squares.

    Built from the multiplication of complexes, quaternions, or octonions;
    only r in {1, 2, 4, 8} is norm-multiplicative.
    """
    if r not in (1, 2, 4, 8):
        raise ValueError(f"no normed bilinear identity implemented for r={r}")
    n = 2 * r
    x = [Polynomial.variable(i, n) for i in range(r)]
    y = [Polynomial.variable(r + i, n) for i in range(r)]
    z = _cd_mul(x, y)
    cert = SosCertificate(z, "rational", Fraction(0), r)
    if cert.reconstruct() != norm_product_form(r, r):
        raise AssertionError("Cayley-Dickson identity failed to verify")
    return cert
