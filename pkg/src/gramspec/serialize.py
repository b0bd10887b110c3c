"""JSON schemas for polynomials, polytopes, matrices, and certificates.

Rational numbers travel as decimal strings ("num/den" or "num") so no
precision is lost; float mode uses plain JSON numbers.  Matrix payloads carry
the monomial order tag ("grlex", enumerated with higher degree first).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .gram import SosCertificate
from .hermitian import HermCertificate
from .poly import Polynomial
from .polytope import LatticePolytope

ORDER_TAG = "grlex"


def _frac_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def poly_to_dict(p: Polynomial) -> dict:
    terms = []
    for e in p.support:
        c = p.coefficient(e)
        if p.mode == "rational":
            terms.append({"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)})
        elif p.mode == "float":
            terms.append({"exp": list(e), "coef": float(c)})
        else:
            terms.append({"exp": list(e), "re": c.real, "im": c.imag})
    return {"nvars": p.nvars, "terms": terms}


def poly_from_dict(data: dict) -> Polynomial:
    nvars = int(data["nvars"])
    terms = data.get("terms", [])
    if not terms:
        return Polynomial.zero(nvars, "rational")
    first = terms[0]
    if "num" in first:
        mode = "rational"
        parse = lambda t: Fraction(int(t["num"]), int(t["den"]))
    elif "re" in first:
        mode = "complex"
        parse = lambda t: complex(float(t["re"]), float(t.get("im", 0.0)))
    else:
        mode = "float"
        parse = lambda t: float(t["coef"])
    return Polynomial({tuple(t["exp"]): parse(t) for t in terms}, nvars, mode)


def polytope_to_dict(P: LatticePolytope) -> dict:
    return {"vertices": [list(v) for v in P.vertices]}


def polytope_from_dict(data: dict) -> LatticePolytope:
    return LatticePolytope.from_points(data["vertices"])


def matrix_to_dict(A, order: str = ORDER_TAG) -> dict:
    if isinstance(A, np.ndarray):
        if np.iscomplexobj(A):
            return {"n": A.shape[0], "order": order,
                    "re": np.real(A).tolist(), "im": np.imag(A).tolist()}
        return {"n": A.shape[0], "order": order, "entries": A.tolist()}
    return {"n": len(A), "order": order,
            "entries": [[_frac_str(x) for x in row] for row in A]}


def matrix_from_dict(data: dict):
    if "re" in data:
        return np.array(data["re"], dtype=float) + 1j * np.array(data["im"], dtype=float)
    entries = data["entries"]
    if entries and isinstance(entries[0][0], str):
        return [[Fraction(x) for x in row] for row in entries]
    return np.array(entries, dtype=float)


def certificate_to_dict(cert: SosCertificate | HermCertificate) -> dict:
    if isinstance(cert, HermCertificate):
        return {"mode": "hermitian",
                "summands": [poly_to_dict(p) for p in cert.summands],
                "residual": float(cert.residual)}
    residual = (_frac_str(cert.residual) if isinstance(cert.residual, Fraction)
                else float(cert.residual))
    return {"mode": cert.mode,
            "summands": [poly_to_dict(p) for p in cert.summands],
            "residual": residual,
            "source_rank": cert.source_rank}


def meshes_to_obj(meshes, path: str) -> None:
    """Write surface meshes as named objects in a single OBJ file."""
    offset = 0
    lines = []
    for mesh in meshes:
        lines.append(f"o {mesh.name}")
        for v in mesh.vertices:
            lines.append(f"v {v[0]:.9g} {v[1]:.9g} {v[2]:.9g}")
        for f in mesh.faces:
            lines.append(f"f {f[0] + 1 + offset} {f[1] + 1 + offset} {f[2] + 1 + offset}")
        offset += len(mesh.vertices)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
