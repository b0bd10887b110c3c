"""Sparse multivariate polynomials and complex root finding for binary forms.

Polynomials are maps from exponent vectors to coefficients in one of three
scalar modes: exact rationals (``fractions.Fraction``), 64-bit floats, or
complex floats.  Arithmetic never mixes modes; rational arithmetic is exact.

The monomial order used everywhere in the package is graded lexicographic
with higher total degree first (ties broken by the lexicographically larger
exponent vector).  All matrix indexing derives from this order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import NvarsMismatch, RealRoot, ScalarModeError

Exponent = tuple[int, ...]

MODES = ("rational", "float", "complex")


def monomial_key(exp: Iterable[int]) -> tuple:
    """Sort key for the global monomial order (graded lex, big monomials first)."""
    e = tuple(exp)
    return (-sum(e), tuple(-c for c in e))


def _coerce(value, mode: str):
    if mode == "rational":
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        raise ScalarModeError(f"rational mode needs int or Fraction, got {type(value).__name__}")
    if mode == "float":
        if isinstance(value, complex):
            raise ScalarModeError("complex coefficient in float mode")
        return float(value)
    if mode == "complex":
        return complex(value)
    raise ScalarModeError(f"unknown scalar mode {mode!r}")


class Polynomial:
    """Immutable sparse polynomial: exponent vector -> coefficient.

    Zero coefficients are never stored; all exponent vectors have length
    ``nvars`` and nonnegative integer entries.
    """

    __slots__ = ("_terms", "_nvars", "_mode")

    def __init__(self, terms: Mapping[Exponent, object], nvars: int, mode: str = "rational"):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        if mode not in MODES:
            raise ScalarModeError(f"unknown scalar mode {mode!r}")
        clean: dict[Exponent, object] = {}
        for exp, coef in terms.items():
            e = tuple(int(k) for k in exp)
            if len(e) != nvars:
                raise NvarsMismatch(f"exponent {e} has length {len(e)}, expected {nvars}")
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent in {e}")
            c = _coerce(coef, mode)
            if c != 0:
                clean[e] = clean.get(e, _coerce(0, mode)) + c
                if clean[e] == 0:
                    del clean[e]
        self._terms = clean
        self._nvars = nvars
        self._mode = mode

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, mode: str = "rational") -> "Polynomial":
        return cls({}, nvars, mode)

    @classmethod
    def constant(cls, value, nvars: int, mode: str = "rational") -> "Polynomial":
        return cls({(0,) * nvars: value}, nvars, mode)

    @classmethod
    def variable(cls, index: int, nvars: int, mode: str = "rational") -> "Polynomial":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for nvars={nvars}")
        exp = [0] * nvars
        exp[index] = 1
        return cls({tuple(exp): 1}, nvars, mode)

    @classmethod
    def monomial(cls, exp: Iterable[int], coef, mode: str = "rational") -> "Polynomial":
        e = tuple(exp)
        return cls({e: coef}, len(e), mode)

    # -- basic queries -----------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, object]:
        return MappingProxyType(self._terms)

    @property
    def nvars(self) -> int:
        return self._nvars

    @property
    def mode(self) -> str:
        return self._mode

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def support(self) -> list[Exponent]:
        """Exponent vectors with nonzero coefficient, in the global order."""
        return sorted(self._terms, key=monomial_key)

    @property
    def total_degree(self) -> int:
        if not self._terms:
            return 0
        return max(sum(e) for e in self._terms)

    def coefficient(self, exp: Iterable[int]):
        return self._terms.get(tuple(exp), _coerce(0, self._mode))

    def max_norm(self) -> float:
        """Largest coefficient magnitude (0.0 for the zero polynomial)."""
        if not self._terms:
            return 0.0
        return max(abs(c) for c in self._terms.values())

    # -- arithmetic --------------------------------------------------------

    def _check_compatible(self, other: "Polynomial") -> None:
        if self._nvars != other._nvars:
            raise NvarsMismatch(f"nvars {self._nvars} != {other._nvars}")
        if self._mode != other._mode:
            raise ScalarModeError(f"mixed scalar modes {self._mode!r} and {other._mode!r}")

    def __add__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other, self._nvars, self._mode)
        self._check_compatible(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, _coerce(0, self._mode)) + c
        return Polynomial(out, self._nvars, self._mode)

    def __radd__(self, other) -> "Polynomial":
        return self + other

    def __neg__(self) -> "Polynomial":
        return Polynomial({e: -c for e, c in self._terms.items()}, self._nvars, self._mode)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check_compatible(other)
        out: dict[Exponent, object] = {}
        zero = _coerce(0, self._mode)
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, zero) + c1 * c2
        return Polynomial(out, self._nvars, self._mode)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, scalar) -> "Polynomial":
        c = _coerce(scalar, self._mode)
        return Polynomial({e: c * v for e, v in self._terms.items()}, self._nvars, self._mode)

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1, self._nvars, self._mode)
        for _ in range(k):
            result = result * self
        return result

    def __call__(self, point) -> object:
        return self.eval(point)

    def eval(self, point):
        """Evaluate at a point (exact in rational mode with rational inputs)."""
        pt = tuple(point)
        if len(pt) != self._nvars:
            raise NvarsMismatch(f"point has length {len(pt)}, expected {self._nvars}")
        total = _coerce(0, self._mode) if self._mode != "complex" else 0j
        for e, c in self._terms.items():
            term = c
            for x, k in zip(pt, e):
                if k:
                    term = term * x ** k
            total = total + term
        return total

    # -- complex structure -------------------------------------------------

    def conjugate(self) -> "Polynomial":
        """Coefficient-wise complex conjugation (identity on real modes)."""
        if self._mode != "complex":
            return self
        return Polynomial({e: c.conjugate() for e, c in self._terms.items()},
                          self._nvars, "complex")

    def real_part(self) -> "Polynomial":
        if self._mode != "complex":
            return self
        return Polynomial({e: c.real for e, c in self._terms.items()}, self._nvars, "float")

    def imag_part(self) -> "Polynomial":
        if self._mode != "complex":
            return Polynomial.zero(self._nvars, "float")
        return Polynomial({e: c.imag for e, c in self._terms.items()}, self._nvars, "float")

    # -- mode conversion ---------------------------------------------------

    def to_float(self) -> "Polynomial":
        if self._mode == "float":
            return self
        if self._mode == "complex":
            raise ScalarModeError("cannot narrow complex polynomial to float; take real_part")
        return Polynomial({e: float(c) for e, c in self._terms.items()}, self._nvars, "float")

    def to_complex(self) -> "Polynomial":
        if self._mode == "complex":
            return self
        return Polynomial({e: complex(c) for e, c in self._terms.items()},
                          self._nvars, "complex")

    # -- comparison and display --------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self._nvars == other._nvars and self._mode == other._mode
                and self._terms == other._terms)

    def __hash__(self):
        return hash((self._nvars, self._mode, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return f"Polynomial(0, nvars={self._nvars}, mode={self._mode})"
        bits = []
        for e in self.support[:8]:
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}"
                            for i, k in enumerate(e) if k) or "1"
            bits.append(f"{self._terms[e]}*{mono}")
        tail = " + ..." if len(self._terms) > 8 else ""
        return f"Polynomial({' + '.join(bits)}{tail}, mode={self._mode})"


# ---------------------------------------------------------------------------
# Binary forms and root finding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous binary form of even degree 2d in variables (s, t).

    ``coeffs[i]`` is the raw coefficient of ``s^i t^(degree-i)``.
    """

    degree: int
    coeffs: tuple

    def __init__(self, degree: int, coeffs: Iterable):
        cs = tuple(coeffs)
        if degree < 2 or degree % 2:
            raise ValueError("binary form degree must be an even integer >= 2")
        if len(cs) != degree + 1:
            raise ValueError(f"need {degree + 1} coefficients, got {len(cs)}")
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", cs)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "BinaryForm":
        """Build from a homogeneous 2-variable polynomial (vars = (s, t))."""
        if p.nvars != 2:
            raise NvarsMismatch("binary form needs a 2-variable polynomial")
        deg = p.total_degree
        coeffs = [0] * (deg + 1)
        for (i, j), c in p.terms.items():
            if i + j != deg:
                raise ValueError("polynomial is not homogeneous")
            coeffs[i] = c
        return cls(deg, coeffs)

    @classmethod
    def from_conjugate_root_pairs(cls, pairs: Iterable[complex], lead: float = 1.0) -> "BinaryForm":
        """Positive form lead * prod (s - u t)(s - conj(u) t) over the given u."""
        us = list(pairs)
        coeffs = np.array([1.0 + 0j])
        for u in us:
            for w in (complex(u), complex(u).conjugate()):
                # multiply by (s - w t): ascending-in-s convolution
                new = np.zeros(len(coeffs) + 1, dtype=complex)
                new[1:] += coeffs
                new[:-1] -= w * coeffs
                coeffs = new
        vals = [float(lead) * c.real for c in coeffs]
        return cls(2 * len(us), vals)

    def to_polynomial(self, mode: str = "float") -> Polynomial:
        deg = self.degree
        return Polynomial({(i, deg - i): c for i, c in enumerate(self.coeffs) if c != 0},
                          2, mode)

    def eval(self, s, t):
        total = 0.0
        for i, c in enumerate(self.coeffs):
            if c:
                total += c * s ** i * t ** (self.degree - i)
        return total

    def roots(self, cluster_tol: float = 1e-6, pair_tol: float = 1e-7) -> "RootList":
        """Roots of f(x, 1), conjugate-paired, with degree drop at infinity."""
        if self.is_zero:
            raise ValueError("the zero form has no well-defined roots")
        coeffs = [float(c) for c in self.coeffs]
        raw, at_inf = complex_roots(coeffs)
        return _assemble_rootlist(raw, at_inf, self.degree, real_input=True,
                                  cluster_tol=cluster_tol, pair_tol=pair_tol)


@dataclass(frozen=True)
class RootList:
    """Complex roots with multiplicities, plus the multiplicity at infinity."""

    roots: tuple            # ((complex value, multiplicity), ...)
    roots_at_infinity: int
    degree: int

    def expanded(self) -> list[complex]:
        out = []
        for u, mult in self.roots:
            out.extend([u] * mult)
        return out

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.roots) + self.roots_at_infinity

    def min_pairwise_distance(self) -> float:
        vals = [u for u, _ in self.roots]
        if len(vals) < 2:
            return float("inf")
        return min(abs(a - b) for i, a in enumerate(vals) for b in vals[i + 1:])

    def scale(self) -> float:
        vals = [abs(u) for u, _ in self.roots]
        return max(vals) if vals else 1.0


def companion_matrix(monic_ascending: np.ndarray) -> np.ndarray:
    """Companion matrix of a monic polynomial given by ascending coefficients."""
    k = len(monic_ascending) - 1
    C = np.zeros((k, k), dtype=complex)
    if k > 1:
        C[1:, :-1] = np.eye(k - 1)
    C[:, -1] = -np.asarray(monic_ascending[:-1], dtype=complex)
    return C


def complex_roots(coeffs_ascending) -> tuple[np.ndarray, int]:
    """All complex roots of sum c_i x^i via companion-matrix eigenvalues.

    Returns (roots, degree_drop) where degree_drop counts vanishing leading
    coefficients relative to len(coeffs) - 1.
    """
    cs = np.asarray(coeffs_ascending, dtype=complex)
    if cs.size == 0 or np.all(cs == 0):
        raise ValueError("zero polynomial")
    nominal = cs.size - 1
    top = cs.size - 1
    while top > 0 and cs[top] == 0:
        top -= 1
    drop = nominal - top
    if top == 0:
        return np.array([], dtype=complex), drop
    monic = cs[: top + 1] / cs[top]
    eigs = np.linalg.eigvals(companion_matrix(monic))
    return eigs, drop


def _cluster(points: np.ndarray, tol: float) -> list[tuple[complex, int]]:
    """Greedy clustering of near-coincident roots; returns (mean, size) pairs."""
    remaining = list(points)
    clusters: list[tuple[complex, int]] = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        changed = True
        while changed:
            changed = False
            center = sum(members) / len(members)
            for p in list(remaining):
                if abs(p - center) <= tol:
                    members.append(p)
                    remaining.remove(p)
                    changed = True
        clusters.append((sum(members) / len(members), len(members)))
    return clusters


def _assemble_rootlist(raw: np.ndarray, at_inf: int, degree: int, real_input: bool,
                       cluster_tol: float, pair_tol: float) -> RootList:
    scale = max(1.0, float(np.max(np.abs(raw))) if raw.size else 1.0)
    clusters = _cluster(raw, cluster_tol * scale)
    if real_input:
        clusters = _conjugate_symmetrize(clusters, pair_tol * scale)
    clusters.sort(key=lambda um: (um[0].real, um[0].imag))
    return RootList(tuple(clusters), at_inf, degree)


def _conjugate_symmetrize(clusters: list[tuple[complex, int]], tol: float):
    """Snap near-real roots to the real axis and average conjugate pairs.

    Raises if a genuinely complex root of a real polynomial has no partner.
    """
    reals = []
    upper = []
    lower = []
    for u, m in clusters:
        if abs(u.imag) <= tol:
            reals.append((complex(u.real, 0.0), m))
        elif u.imag > 0:
            upper.append((u, m))
        else:
            lower.append((u, m))
    paired = []
    for u, m in upper:
        best = None
        best_dist = None
        for i, (v, mv) in enumerate(lower):
            d = abs(u - v.conjugate())
            if best_dist is None or d < best_dist:
                best, best_dist = i, d
        if best is None or best_dist > tol or lower[best][1] != m:
            raise ValueError("unpaired complex root for a real-coefficient form")
        v, _ = lower.pop(best)
        w = (u + v.conjugate()) / 2
        paired.append((w, m))
        paired.append((w.conjugate(), m))
    if lower:
        raise ValueError("unpaired complex root for a real-coefficient form")
    return reals + paired


def positive_form_root_pairs(f: BinaryForm, config=None) -> list[complex]:
    """Upper-half-plane roots of a strictly positive binary form with distinct roots.

    Raises RealRoot / RepeatedRoot when the preconditions fail.  The returned
    list has length d = degree/2 and is sorted deterministically.
    """
    from .errors import RepeatedRoot  # local import keeps module load cheap

    rl = f.roots()
    scale = rl.scale()
    if rl.roots_at_infinity > 0:
        raise RealRoot("form vanishes at (1:0)")
    if float(f.coeffs[-1]) < 0:
        raise RealRoot("negative leading coefficient; form is not positive")
    for u, m in rl.roots:
        if u.imag == 0:
            raise RealRoot(f"real root at {u.real}")
        if m > 1:
            raise RepeatedRoot(f"root {u} has multiplicity {m}")
    if rl.min_pairwise_distance() <= 1e-6 * scale:
        raise RepeatedRoot("roots closer than 1e-6 * scale")
    ups = sorted((u for u, _ in rl.roots if u.imag > 0), key=lambda z: (z.real, z.imag))
    return ups
