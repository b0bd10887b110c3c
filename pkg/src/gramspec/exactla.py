"""Exact linear algebra over the rationals and integers.

Everything here works on plain Python lists of ``Fraction`` / ``int``; sizes
are desk scale (dimensions well under a hundred), so clarity wins over
asymptotics.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from .errors import NotPSD


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (matrix, pivot column indices)."""
    M = [[Fraction(x) for x in row] for row in rows]
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if pivot_row is None:
            continue
        M[r], M[pivot_row] = M[pivot_row], M[r]
        inv = M[r][c]
        M[r] = [x / inv for x in M[r]]
        for i in range(nrows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return M, pivots


def rational_rank(rows: list[list[Fraction]]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def rational_nullspace(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """Basis of the right nullspace of the given matrix, exact."""
    if not rows:
        return []
    ncols = len(rows[0])
    R, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fc]
        basis.append(v)
    return basis


def exact_ldlt(A: list[list[Fraction]]):
    """Pivoted LDL^T of a rational symmetric PSD matrix.

    Returns (perm, L, D, rank) with P A P^T = L D L^T, L unit lower
    triangular and D diagonal with D[i] > 0 exactly for i < rank.
    Raises NotPSD as soon as positive semidefiniteness fails (exact test).
    """
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    for i in range(n):
        for j in range(n):
            if M[i][j] != M[j][i]:
                raise ValueError("matrix is not symmetric")
    L = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    D = [Fraction(0)] * n
    perm = list(range(n))
    rank = 0
    for k in range(n):
        piv = max(range(k, n), key=lambda i: M[i][i])
        if M[piv][piv] < 0:
            raise NotPSD(f"negative diagonal pivot {M[piv][piv]}")
        if M[piv][piv] == 0:
            # PSD forces the whole remaining block to vanish
            for i in range(k, n):
                if M[i][i] < 0:
                    raise NotPSD(f"negative diagonal {M[i][i]}")
                for j in range(k, n):
                    if M[i][j] != 0:
                        raise NotPSD("zero diagonal with nonzero off-diagonal entry")
            break
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            for row in M:
                row[k], row[piv] = row[piv], row[k]
            perm[k], perm[piv] = perm[piv], perm[k]
            for j in range(k):
                L[k][j], L[piv][j] = L[piv][j], L[k][j]
        d = M[k][k]
        D[k] = d
        rank += 1
        for i in range(k + 1, n):
            L[i][k] = M[i][k] / d
        for i in range(k + 1, n):
            if M[i][k] == 0:
                continue
            for j in range(k + 1, n):
                M[i][j] -= L[i][k] * d * L[j][k]
            M[i][k] = Fraction(0)
            M[k][i] = Fraction(0)
    return perm, L, D, rank


def is_psd_exact(A: list[list[Fraction]]) -> bool:
    try:
        exact_ldlt(A)
        return True
    except NotPSD:
        return False


def four_squares(n: int) -> tuple[int, int, int, int]:
    """Write a nonnegative integer as a sum of four integer squares.

    Descending search with full backtracking; the first candidate almost
    always works, so this is fast at desk scale.
    """
    if n < 0:
        raise ValueError("need a nonnegative integer")
    if n == 0:
        return (0, 0, 0, 0)
    # peel factors of 4 to keep the search small
    shift = 0
    while n % 4 == 0:
        n //= 4
        shift += 1
    scale = 2 ** shift
    for a in range(isqrt(n), -1, -1):
        r1 = n - a * a
        for b in range(isqrt(r1), -1, -1):
            r2 = r1 - b * b
            c = isqrt(r2)
            while c * c * 2 >= r2:
                d2 = r2 - c * c
                d = isqrt(d2)
                if d * d == d2:
                    return (a * scale, b * scale, c * scale, d * scale)
                c -= 1
                if c < 0:
                    break
    raise AssertionError("unreachable: every nonnegative integer is a sum of four squares")


def four_rational_squares(q: Fraction) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Write a nonnegative rational as a sum of four rational squares.

    Uses q = (num * den) / den^2, so the integer search runs on num * den.
    """
    q = Fraction(q)
    if q < 0:
        raise ValueError("need a nonnegative rational")
    a, b, c, d = four_squares(q.numerator * q.denominator)
    den = q.denominator
    return (Fraction(a, den), Fraction(b, den), Fraction(c, den), Fraction(d, den))


def lattice_basis(rows: list[list[int]]) -> list[list[int]]:
    """Echelon basis (row HNF style) of the integer row lattice."""
    M = [list(map(int, r)) for r in rows if any(r)]
    basis: list[list[int]] = []
    ncols = len(rows[0]) if rows else 0
    col = 0
    while M and col < ncols:
        nonzero = [r for r in M if r[col] != 0]
        if not nonzero:
            col += 1
            continue
        # euclidean reduction in this column
        while True:
            nonzero.sort(key=lambda r: abs(r[col]))
            p = nonzero[0]
            done = True
            for r in nonzero[1:]:
                f = r[col] // p[col]
                for j in range(ncols):
                    r[j] -= f * p[j]
                if r[col] != 0:
                    done = False
            nonzero = [p] + [r for r in nonzero[1:] if any(r)]
            if done or len(nonzero) == 1:
                break
        p = nonzero[0]
        if p[col] < 0:
            p = [-x for x in p]
        basis.append(p)
        M = [r for r in M if r is not nonzero[0] and any(r)]
        # eliminate this column from the rest (over Z, partial: keep lattice)
        for r in M:
            if r[col] != 0:
                f = r[col] // p[col]
                for j in range(ncols):
                    r[j] -= f * p[j]
        M = [r for r in M if any(r)]
        col += 1
    return basis


def smith_invariants(rows: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of the Smith normal form of an integer matrix."""
    M = [list(map(int, r)) for r in rows]
    if not M or not M[0]:
        return []
    nr, nc = len(M), len(M[0])
    invariants: list[int] = []
    top = 0
    while top < min(nr, nc):
        # find smallest nonzero entry in the remaining block
        best = None
        for i in range(top, nr):
            for j in range(top, nc):
                if M[i][j] != 0 and (best is None or abs(M[i][j]) < abs(M[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        M[top], M[bi] = M[bi], M[top]
        for row in M:
            row[top], row[bj] = row[bj], row[top]
        # clear row and column; restart if remainders appear
        dirty = False
        for i in range(top + 1, nr):
            if M[i][top]:
                f = M[i][top] // M[top][top]
                for j in range(top, nc):
                    M[i][j] -= f * M[top][j]
                if M[i][top]:
                    dirty = True
        for j in range(top + 1, nc):
            if M[top][j]:
                f = M[top][j] // M[top][top]
                for i in range(top, nr):
                    M[i][j] -= f * M[i][top]
                if M[top][j]:
                    dirty = True
        if dirty:
            continue
        # entry must divide the rest of the block for true SNF
        pivot = abs(M[top][top])
        offender = None
        for i in range(top + 1, nr):
            for j in range(top + 1, nc):
                if M[i][j] % pivot:
                    offender = i
                    break
            if offender:
                break
        if offender is not None:
            for j in range(top, nc):
                M[top][j] += M[offender][j]
            continue
        invariants.append(pivot)
        top += 1
    return invariants


def is_saturated(rows: list[list[int]]) -> bool:
    """True when the row lattice equals its saturation in Z^n."""
    return all(d == 1 for d in smith_invariants(rows))


def coords_in_basis(basis: list[list[int]], vec: list[Fraction]) -> list[Fraction]:
    """Solve sum_i x_i basis[i] = vec exactly (raises if inconsistent)."""
    if not basis:
        if any(Fraction(x) != 0 for x in vec):
            raise ValueError("vector outside the span of an empty basis")
        return []
    ncols = len(basis[0])
    aug = [[Fraction(basis[i][j]) for i in range(len(basis))] + [Fraction(vec[j])]
           for j in range(ncols)]
    R, pivots = rref(aug)
    k = len(basis)
    if k in pivots:
        raise ValueError("vector outside the span of the basis")
    x = [Fraction(0)] * k
    for r, pc in enumerate(pivots):
        x[pc] = R[r][k]
    return x


def primitive_vector(v: list[Fraction]) -> list[int]:
    """Scale a rational vector to a primitive integer vector (gcd 1)."""
    from math import lcm

    denom = 1
    for x in v:
        denom = lcm(denom, Fraction(x).denominator)
    ints = [int(Fraction(x) * denom) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return [0] * len(ints)
    return [x // g for x in ints]
