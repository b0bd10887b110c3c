import numpy as np
import pytest

from gramspec import BinaryForm, LatticePolytope, Polynomial, SexticCoeffs

# binary sextic with palindromic coefficients whose spectrahedron has the
# +-sqrt(5) optimal values; used across the kummer / binary / sdp tests
REFERENCE_SEXTIC = (1, -2, 5, -4, 5, -2, 1)

# positive ternary quartic whose Gram spectrahedron is a line segment with no
# rational point; its sum-of-two-squares identities live over Q(sqrt(-beta))
# with beta a root of t^3 - 4t - 1
SEGMENT_QUARTIC_TERMS = {
    (4, 0, 0): 1, (1, 3, 0): 1, (0, 4, 0): 1, (2, 1, 1): -3, (1, 2, 1): -4,
    (2, 0, 2): 2, (1, 0, 3): 1, (0, 1, 3): 1, (0, 0, 4): 1,
}


@pytest.fixture
def ref_sextic() -> BinaryForm:
    return BinaryForm(6, REFERENCE_SEXTIC)


@pytest.fixture
def ref_sextic_coeffs(ref_sextic) -> SexticCoeffs:
    return SexticCoeffs.from_form(ref_sextic)


@pytest.fixture
def segment_quartic() -> Polynomial:
    return Polynomial(SEGMENT_QUARTIC_TERMS, 3, "rational")


def random_positive_form(rng: np.random.Generator, d: int, spread: float = 2.0,
                         min_imag: float = 0.25) -> BinaryForm:
    """Positive binary form of degree 2d with well-separated conjugate pairs."""
    while True:
        pairs = [complex(rng.uniform(-spread, spread), rng.uniform(min_imag, spread))
                 for _ in range(d)]
        ok = all(abs(pairs[i] - pairs[j]) > 0.2 and abs(pairs[i] - pairs[j].conjugate()) > 0.2
                 for i in range(d) for j in range(i + 1, d))
        if ok:
            return BinaryForm.from_conjugate_root_pairs(pairs, lead=rng.uniform(0.5, 2.0))


def random_interior_sos(P: LatticePolytope, rng: np.random.Generator,
                        shift: float = 0.3) -> Polynomial:
    """Interior point of the SOS cone over 2P: Gram image of C^T C + shift I."""
    mons = P.lattice_points
    N = len(mons)
    C = rng.integers(-2, 3, size=(N, N)).astype(float)
    A = C.T @ C + shift * np.eye(N)
    terms: dict = {}
    for i in range(N):
        for j in range(N):
            key = tuple(a + b for a, b in zip(mons[i], mons[j]))
            terms[key] = terms.get(key, 0.0) + A[i, j]
    return Polynomial(terms, len(mons[0]), "float")


def gram_residual(space, A, f=None) -> float:
    """Max-norm residual of m^T A m against f (defaults to the space's f)."""
    from gramspec import gram_apply

    target = (f if f is not None else space.f)
    recon = gram_apply(space, A)
    if recon.mode == "complex":
        return float((recon - target.to_complex()).max_norm())
    return float((recon.to_float() - target.to_float()).max_norm())
