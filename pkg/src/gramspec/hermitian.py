"""Hermitian Gram spectrahedra: certificates with complex summands.

A Hermitian square p conj(p) equals Re(p)^2 + Im(p)^2, so a real polynomial
is a Hermitian sum of squares exactly when it is a real one, at roughly half
the length.  Hermitian Gram matrices of f form an affine space of real
codimension dim R[x]_{2P}; solving happens on the real 2N x 2N realification
[[Re, -Im], [Im, Re]].
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import ceil, log2, sqrt

import numpy as np

from .config import Config, DEFAULT
from .errors import Infeasible, ScalarModeError
from .gram import GramSpace, SosCertificate, gram_space
from .matrices import herm, numerical_rank, realify, unrealify
from .poly import BinaryForm, Polynomial, positive_form_root_pairs
from .sdp import SdpSolution, low_rank_fit, solve_affine


@dataclass
class HermCertificate:
    """A declared identity f = sum_i p_i conj(p_i) with complex p_i."""

    summands: list[Polynomial]
    residual: float

    def __len__(self) -> int:
        return len(self.summands)

    def reconstruct(self) -> Polynomial:
        total = Polynomial.zero(self.summands[0].nvars, "complex")
        for p in self.summands:
            q = p.to_complex()
            total = total + q * q.conjugate()
        return total

    def residual_against(self, f: Polynomial) -> float:
        return float((f.to_complex() - self.reconstruct()).max_norm())


def real_to_hermitian(cert: SosCertificate) -> HermCertificate:
    """Pair consecutive real summands into p + i q; an odd tail stays real.

    Length drops from r to ceil(r / 2).
    """
    if cert.mode == "hermitian":
        raise ScalarModeError("certificate is already Hermitian")
    out: list[Polynomial] = []
    ps = cert.summands
    for k in range(len(ps) // 2):
        a = ps[2 * k].to_complex()
        b = ps[2 * k + 1].to_complex()
        out.append(a + b.scale(1j))
    if len(ps) % 2:
        out.append(ps[-1].to_complex())
    hc = HermCertificate(out, 0.0)
    target = SosCertificate(ps, cert.mode if cert.mode != "rational" else "rational",
                            0.0, cert.source_rank).reconstruct()
    hc.residual = hc.residual_against(target.to_float() if target.mode == "rational" else target)
    return hc


def hermitian_to_real(cert: HermCertificate) -> SosCertificate:
    """Split each Hermitian summand into real and imaginary parts.

    Identically-zero imaginary parts are dropped, so a real summand
    contributes length 1, not 2.
    """
    out: list[Polynomial] = []
    for p in cert.summands:
        re, im = p.real_part(), p.imag_part()
        if not re.is_zero:
            out.append(re)
        if not im.is_zero:
            out.append(im)
    sc = SosCertificate(out, "real", 0.0, len(out))
    sc.residual = float((sc.reconstruct() - cert.reconstruct().real_part()).max_norm())
    return sc


# ---------------------------------------------------------------------------
# Hermitian Gram spaces via realification
# ---------------------------------------------------------------------------


@dataclass
class HermGramSpace:
    """Affine space of Hermitian Gram matrices of f over polytope monomials.

    The Hermitian part that touches f is the real symmetric Gram space; the
    imaginary part is an arbitrary real antisymmetric matrix.  Solving runs
    on the 2N x 2N realification.
    """

    real_space: GramSpace
    antisym_basis: list[np.ndarray]

    @property
    def N(self) -> int:
        return self.real_space.N

    @property
    def codimension(self) -> int:
        """Real codimension of the affine space inside Herm_N."""
        return len(self.real_space.pair_groups)

    @property
    def real_dimension(self) -> int:
        return self.real_space.m + len(self.antisym_basis)

    def realified_system(self) -> tuple[np.ndarray, list[np.ndarray]]:
        N = self.N
        G0 = np.block([[self.real_space.G0, np.zeros((N, N))],
                       [np.zeros((N, N)), self.real_space.G0]])
        basis = [np.block([[B, np.zeros((N, N))], [np.zeros((N, N)), B]])
                 for B in self.real_space.kernel_basis]
        for C in self.antisym_basis:
            basis.append(np.block([[np.zeros((N, N)), -C], [C, np.zeros((N, N))]]))
        return G0, basis


def herm_gram_space(f: Polynomial, P=None) -> HermGramSpace:
    """Hermitian analog of the Gram space; codimension = number of achievable
    monomials of 2P (the dimension of the polynomial space the Gram map hits)."""
    rs = gram_space(f, P)
    N = rs.N
    antisym = []
    for i in range(N):
        for j in range(i + 1, N):
            C = np.zeros((N, N))
            C[i, j] = 1.0
            C[j, i] = -1.0
            antisym.append(C)
    return HermGramSpace(rs, antisym)


def herm_solve(hspace: HermGramSpace, objective: np.ndarray | None = None,
               config: Config = DEFAULT) -> tuple[np.ndarray, SdpSolution]:
    """Feasibility / linear optimization over the Hermitian Gram spectrahedron.

    Returns (A, solution) with A the Hermitian point; ranks over C are half
    the realified ranks.
    """
    G0, basis = hspace.realified_system()
    if objective is None:
        from .sdp import _phase1  # shared engine
        margin, x, Z, status, iters, hist = _phase1(G0, basis, config)
        scale = 1.0 + float(np.abs(G0).max())
        X = G0 + sum(xi * B for xi, B in zip(x, basis))
        if margin < -config.solver.feas_tol * scale:
            raise Infeasible("Hermitian Gram spectrahedron is empty")
        A = herm(unrealify(X))
        sol = SdpSolution(X, "optimal", margin,
                          numerical_rank(A, config.tolerances.rank_tol),
                          0.0, np.asarray(x), iterations=iters, gap_history=hist)
        return A, sol
    sol = solve_affine(G0, basis, np.asarray(objective, dtype=float), config)
    A = herm(unrealify(sol.point))
    sol.numerical_rank = numerical_rank(A, config.tolerances.rank_tol)
    return A, sol


def herm_minimize_rank(hspace: HermGramSpace, trials: int = 10,
                       config: Config = DEFAULT) -> tuple[np.ndarray, int]:
    """Best-effort minimum Hermitian rank via stacked low-rank factorization.

    A real 2k x N factor stack (Cr; Ci) gives the Hermitian matrix
    A = (Cr + i Ci)* (Cr + i Ci) of rank at most k with the same Gram image.
    """
    A0, sol = herm_solve(hspace, None, config)
    best = (A0, numerical_rank(A0, config.tolerances.rank_tol))
    rng = np.random.default_rng(config.seed)
    for k in range(1, best[1]):
        C = low_rank_fit(hspace.real_space, 2 * k, rng,
                         restarts=max(4, trials), config=config)
        if C is not None:
            Cc = C[:k] + 1j * C[k:]
            A = herm(Cc.conj().T @ Cc)
            return A, numerical_rank(A, config.tolerances.rank_tol)
    return best


# ---------------------------------------------------------------------------
# Rank-one enumeration and low-rank sums for binary forms
# ---------------------------------------------------------------------------


@dataclass
class HermRankOne:
    matrix: np.ndarray        # v v*, Hermitian rank one
    vector: np.ndarray
    polynomial: Polynomial    # p with p conj(p) = f
    mask: int                 # bit j = 1 picks conj(u_j) for pair j


def _factor_coeffs(ws: list[complex], lead_sqrt: float) -> np.ndarray:
    coeffs = np.array([lead_sqrt + 0j])
    for w in ws:
        new = np.zeros(len(coeffs) + 1, dtype=complex)
        new[1:] += coeffs
        new[:-1] -= w * coeffs
        coeffs = new
    return coeffs


def _vector_from_ascending(space: GramSpace, asc: np.ndarray) -> np.ndarray:
    d = len(asc) - 1
    lookup = {m: k for k, m in enumerate(space.monomials)}
    v = np.zeros(space.N, dtype=complex)
    for i, cc in enumerate(asc):
        v[lookup[(i, d - i)]] = cc
    return v


def enumerate_herm_rank1(f: BinaryForm) -> list[HermRankOne]:
    """All 2^d rank-one Hermitian Gram matrices of a positive binary form.

    No conjugation quotient here, unlike the real rank-2 count 2^(d-1).
    """
    ups = positive_form_root_pairs(f)
    d = len(ups)
    lead_sqrt = sqrt(float(f.coeffs[-1]))
    space = gram_space(f.to_polynomial("float"))
    out = []
    for mask in range(2 ** d):
        ws = [ups[j].conjugate() if (mask >> j) & 1 else ups[j] for j in range(d)]
        asc = _factor_coeffs(ws, lead_sqrt)
        v = _vector_from_ascending(space, asc)
        p = Polynomial({m: c for m, c in zip(space.monomials, v) if c != 0},
                       2, "complex")
        out.append(HermRankOne(np.outer(v, v.conj()), v, p, mask))
    return out


def gcd_degree_over_flips(masks: list[int], d: int) -> int:
    """Largest common root count of {q_k}, q_k in {p_k, conj(p_k)}.

    Works combinatorially on the choice masks; brute force over flips.
    """
    best = 0
    s = len(masks)
    for flips in range(2 ** s):
        chosen = [m ^ (-(flips >> k & 1) & (2 ** d - 1)) for k, m in enumerate(masks)]
        common = 0
        for j in range(d):
            bits = {(c >> j) & 1 for c in chosen}
            if len(bits) == 1:
                common += 1
        best = max(best, common)
    return best


@dataclass
class LowRankSum:
    """s rank-one Hermitian Gram matrices with a low-rank sum."""

    rank_ones: list[np.ndarray]
    polynomials: list[Polynomial]
    sum_matrix: np.ndarray
    sum_rank: int
    rank_bound: int                 # ceil(log2 s) + 1
    shared_factor: Polynomial       # the common complex factor g
    real_rank2: list[np.ndarray]    # (v v* + conj)/2, rank-2 members of GS(f)
    real_sum_rank: int


def low_rank_sum(f: BinaryForm, s: int, config: Config = DEFAULT) -> LowRankSum:
    """Choose s rank-one Hermitian Gram matrices whose sum has rank at most
    ceil(log2 s) + 1 by factoring f = g conj(g) h with deg h = 2 ceil(log2 s).

    The e conjugate pairs with the largest imaginary parts go into h (a
    conditioning choice; any split is valid).
    """
    d = f.degree // 2
    if not 2 <= s <= 2 ** d:
        raise ValueError(f"s must lie in [2, 2^{d}]")
    e = ceil(log2(s))
    ups = positive_form_root_pairs(f)
    order = sorted(range(d), key=lambda j: -abs(ups[j].imag))
    h_pairs = sorted(order[:e])
    g_pairs = sorted(order[e:])
    lead = float(f.coeffs[-1])

    h_asc = _factor_coeffs([w for j in h_pairs for w in (ups[j], ups[j].conjugate())], 1.0)
    h_form = BinaryForm(2 * e, [c.real for c in h_asc])
    g_asc = _factor_coeffs([ups[j] for j in g_pairs], sqrt(lead))

    space_f = gram_space(f.to_polynomial("float"))
    space_h = gram_space(h_form.to_polynomial("float"))
    g_poly = Polynomial({(i, d - e - i): c for i, c in enumerate(g_asc) if c != 0},
                        2, "complex")

    # push-forward matrix U with m_P^T U = g * m_Q^T
    U = np.zeros((space_f.N, space_h.N), dtype=complex)
    lookup = {m: k for k, m in enumerate(space_f.monomials)}
    for col, mono in enumerate(space_h.monomials):
        i_q = mono[0]  # exponent of s in the h-basis monomial
        for i, cc in enumerate(g_asc):
            U[lookup[(i + i_q, d - i_q - i)], col] = cc

    ones = enumerate_herm_rank1(h_form)[:s]
    rank_ones = []
    polys = []
    for r1 in ones:
        v = U @ r1.vector
        rank_ones.append(np.outer(v, v.conj()))
        polys.append(Polynomial({m: c for m, c in zip(space_f.monomials, v) if c != 0},
                                2, "complex"))
    S = herm(sum(rank_ones))
    real2 = [np.real(A + A.conj().T) / 2 for A in rank_ones]
    Sr = sum(real2)
    tol = config.tolerances.rank_tol
    return LowRankSum(rank_ones, polys, S, numerical_rank(S, tol), e + 1,
                      g_poly, real2, numerical_rank(Sr, tol))
