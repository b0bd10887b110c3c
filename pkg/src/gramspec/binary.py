"""Exact enumeration of rank-2 Gram matrices of positive binary forms.

A representation f = (p + iq)(p - iq) of a positive binary form of degree 2d
splits the 2d roots into two blocks of size d; conjugation acting on the
blocks sorts the rank-2 Gram matrices into real PSD (blocks swapped), real
indefinite (blocks fixed, d even), and genuinely complex ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb, sqrt

import numpy as np

from .errors import ScalarModeError
from .gram import GramSpace, gram_space
from .poly import BinaryForm, Polynomial, positive_form_root_pairs


@dataclass(frozen=True)
class RootPartition:
    """A block of d root indices (the complement is the other block).

    Indices refer to the expanded root list [u_0, conj(u_0), u_1, ...]: index
    2j is the upper-half-plane root of pair j, index 2j+1 its conjugate.
    """

    block: tuple[int, ...]
    kind: str  # conjugate-swapped | conjugate-fixed | complex

    def __post_init__(self):
        if self.kind not in ("conjugate-swapped", "conjugate-fixed", "complex"):
            raise ValueError(f"unknown partition kind {self.kind!r}")


@dataclass
class RankTwoGram:
    """A rank-2 Gram matrix with its generating root partition.

    For psd matrices f = summands[0]^2 + summands[1]^2; for real indefinite
    and complex ones f = summands[0]^2 - summands[1]^2 (signature (1, 1)).
    """

    matrix: np.ndarray
    partition: RootPartition
    psd: bool
    summands: tuple[Polynomial, Polynomial]


def _expand_linear_factors(ws: list[complex], lead_sqrt: float) -> np.ndarray:
    """Ascending (in s) coefficients of lead_sqrt * prod (s - w t)."""
    coeffs = np.array([lead_sqrt + 0j])
    for w in ws:
        new = np.zeros(len(coeffs) + 1, dtype=complex)
        new[1:] += coeffs
        new[:-1] -= w * coeffs
        coeffs = new
    return coeffs


def _coeff_vector(space: GramSpace, ascending: np.ndarray) -> np.ndarray:
    """Map ascending-in-s coefficients of a degree-d form onto m_P order."""
    d = len(ascending) - 1
    out = np.zeros(space.N, dtype=ascending.dtype)
    lookup = {mono: k for k, mono in enumerate(space.monomials)}
    for i, c in enumerate(ascending):
        out[lookup[(i, d - i)]] = c
    return out


def _form_space(f: BinaryForm) -> GramSpace:
    return gram_space(f.to_polynomial("float"))


def _poly_from_vector(space: GramSpace, vec: np.ndarray, mode: str) -> Polynomial:
    terms = {m: v for m, v in zip(space.monomials, vec) if v != 0}
    return Polynomial(terms, 2, mode)


def _block_kind(block: frozenset[int], d: int) -> str:
    conj_block = frozenset(i ^ 1 for i in block)
    if conj_block == block:
        return "conjugate-fixed"
    complement = frozenset(range(2 * d)) - block
    if conj_block == complement:
        return "conjugate-swapped"
    return "complex"


def enumerate_rank2(f: BinaryForm, which: str = "psd"):
    """Rank-2 Gram matrices of a positive binary form with distinct roots.

    which: "psd" (the 2^(d-1) PSD ones), "real" (plus the C(d, d/2)/2
    indefinite ones for even d), "all" (every complex partition,
    C(2d, d)/2 matrices), or "complex-count" (counts only, no matrices).

    Returns (matrices, counts) where counts has the exact predicted numbers.
    """
    if which not in ("psd", "real", "all", "complex-count"):
        raise ValueError(f"unknown selector {which!r}")
    d = f.degree // 2
    counts = {
        "psd": 2 ** (d - 1),
        "indefinite": comb(d, d // 2) // 2 if d % 2 == 0 else 0,
        "complex": comb(2 * d, d) // 2,
    }
    if which == "complex-count":
        return [], counts
    ups = positive_form_root_pairs(f)          # raises RealRoot / RepeatedRoot
    lead = float(f.coeffs[-1])
    lead_sqrt = sqrt(lead)
    space = _form_space(f)
    roots_expanded = []
    for u in ups:
        roots_expanded.extend([u, u.conjugate()])

    out: list[RankTwoGram] = []
    if which in ("psd", "real"):
        for mask in range(2 ** (d - 1)):
            chosen = [0]
            for j in range(1, d):
                chosen.append(2 * j + ((mask >> (j - 1)) & 1))
            block = tuple(chosen)
            g = _expand_linear_factors([roots_expanded[i] for i in block], lead_sqrt)
            v = _coeff_vector(space, g)
            p, q = v.real, v.imag
            A = np.outer(p, p) + np.outer(q, q)
            out.append(RankTwoGram(A, RootPartition(block, "conjugate-swapped"), True,
                                   (_poly_from_vector(space, p, "float"),
                                    _poly_from_vector(space, q, "float"))))
        if which == "real" and d % 2 == 0:
            for pair_block in combinations(range(1, d), d // 2 - 1):
                pairs = (0,) + pair_block
                block = tuple(sorted(i for j in pairs for i in (2 * j, 2 * j + 1)))
                ws_g = [roots_expanded[i] for i in block]
                ws_h = [roots_expanded[i] for i in range(2 * d) if i not in block]
                g = _expand_linear_factors(ws_g, lead_sqrt).real
                h = _expand_linear_factors(ws_h, lead_sqrt).real
                p = _coeff_vector(space, (g + h) / 2)
                q = _coeff_vector(space, (g - h) / 2)
                A = np.outer(p, p) - np.outer(q, q)
                out.append(RankTwoGram(A, RootPartition(block, "conjugate-fixed"), False,
                                       (_poly_from_vector(space, p, "float"),
                                        _poly_from_vector(space, q, "float"))))
        return out, counts

    # which == "all": every partition with root 0 in the first block
    for rest in combinations(range(1, 2 * d), d - 1):
        block = (0,) + rest
        kind = _block_kind(frozenset(block), d)
        ws_g = [roots_expanded[i] for i in block]
        ws_h = [roots_expanded[i] for i in range(2 * d) if i not in block]
        g = _expand_linear_factors(ws_g, lead_sqrt)
        h = _expand_linear_factors(ws_h, lead_sqrt)
        if kind == "conjugate-swapped":
            v = _coeff_vector(space, g)
            p, q = v.real, v.imag
            A = np.outer(p, p) + np.outer(q, q)
            summands = (_poly_from_vector(space, p, "float"),
                        _poly_from_vector(space, q, "float"))
            psd = True
        else:
            p = _coeff_vector(space, (g + h) / 2)
            q = _coeff_vector(space, (g - h) / 2)
            if kind == "conjugate-fixed":
                p, q = p.real, q.real
            A = np.outer(p, p) - np.outer(q, q)
            summands = (_poly_from_vector(space, p,
                                          "float" if kind == "conjugate-fixed" else "complex"),
                        _poly_from_vector(space, q,
                                          "float" if kind == "conjugate-fixed" else "complex"))
            psd = False
        out.append(RankTwoGram(A, RootPartition(block, kind), psd, summands))
    return out, counts


@dataclass
class KummerNodes:
    """Node data of the quartic surface bounding a sextic Gram spectrahedron."""

    rank3_nodes: list[np.ndarray]   # six projective points (u^2, u, 1, 0)
    rank2: list[RankTwoGram]        # ten rank-2 Gram matrices (4 real PSD + 6 complex)


def kummer_nodes(f: BinaryForm) -> KummerNodes:
    """All sixteen nodes of the Kummer surface attached to a positive sextic.

    Six rank-3 nodes sit at infinity, one for each root; the remaining ten
    nodes are the rank-2 Gram matrices from the complex root partitions.
    """
    if f.degree != 6:
        raise ValueError("Kummer nodes are specific to sextics (degree 6)")
    ups = positive_form_root_pairs(f)
    roots = []
    for u in ups:
        roots.extend([u, u.conjugate()])
    nodes = [np.array([u * u, u, 1.0, 0.0], dtype=complex) for u in roots]
    rank2, _ = enumerate_rank2(f, "all")
    return KummerNodes(nodes, rank2)
