"""Matrix-valued polynomial differential forms on R^d.

A PolyMatrixForm stores, for each strictly increasing wedge index tuple
I = (i_1 < ... < i_p), an m x m matrix of Poly coefficients: the form
sum_I  M_I(x) dx_I.  The matrix factor lives inside the form, so the
Koszul sign of the product of (form (x) matrix) elements is produced
automatically by reordering wedge factors.

This module is the coefficient DGA for all the Hochschild complexes:
wedge product, exterior derivative, curvature dA + A^A, graded bracket,
and pointwise evaluation against tangent vectors.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np

from .poly import Poly, parse_poly


def merge_sign(I, J):
    """Sign of dx_I ^ dx_J -> dx_{sorted(I+J)}; 0 if indices repeat."""
    if set(I) & set(J):
        return 0, ()
    merged = tuple(sorted(I + J))
    # count transpositions: pairs (i in I, j in J) with j < i
    inv = sum(1 for i in I for j in J if j < i)
    return (-1) ** (inv & 1), merged


def _mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _mat_is_zero(mat):
    return all(p.is_zero() for row in mat for p in row)


class PolyMatrixForm:
    """Element of Omega(R^d) tensor Mat_m with polynomial coefficients."""

    __slots__ = ("dim", "msize", "terms", "_key")

    def __init__(self, dim, msize, terms=None):
        self.dim = dim
        self.msize = msize
        self.terms = {}
        if terms:
            for idx, mat in terms.items():
                idx = tuple(idx)
                if any(i < 1 or i > dim for i in idx) or list(idx) != sorted(set(idx)):
                    raise ValueError(f"bad wedge index tuple {idx}")
                if not _mat_is_zero(mat):
                    self.terms[idx] = tuple(tuple(row) for row in mat)
        self._key = None

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(dim, msize):
        return PolyMatrixForm(dim, msize)

    @staticmethod
    def unit(dim, msize):
        """The unit: identity matrix as a 0-form."""
        one = Poly.const(dim, 1)
        zero = Poly.zero(dim)
        mat = tuple(
            tuple(one if i == j else zero for j in range(msize)) for i in range(msize)
        )
        return PolyMatrixForm(dim, msize, {(): mat})

    @staticmethod
    def from_scalar(dim, msize, poly, idx=()):
        """poly * Id * dx_idx."""
        zero = Poly.zero(dim)
        mat = tuple(
            tuple(poly if i == j else zero for j in range(msize)) for i in range(msize)
        )
        return PolyMatrixForm(dim, msize, {tuple(idx): mat})

    @staticmethod
    def single(dim, msize, idx, i, j, poly):
        """poly * E_ij * dx_idx with 0-based matrix indices."""
        zero = Poly.zero(dim)
        mat = tuple(
            tuple(poly if (r, c) == (i, j) else zero for c in range(msize))
            for r in range(msize)
        )
        return PolyMatrixForm(dim, msize, {tuple(idx): mat})

    def _zero_mat(self):
        z = Poly.zero(self.dim)
        return tuple(tuple(z for _ in range(self.msize)) for _ in range(self.msize))

    # -- structure -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def degrees(self):
        return sorted({len(idx) for idx in self.terms})

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    @property
    def degree(self):
        """Degree of a homogeneous form; zero form reports 0."""
        degs = self.degrees()
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError("form is not homogeneous")
        return degs[0]

    def homogeneous_part(self, p):
        return PolyMatrixForm(
            self.dim, self.msize, {i: m for i, m in self.terms.items() if len(i) == p}
        )

    def key(self):
        if self._key is None:
            self._key = (
                self.dim,
                self.msize,
                tuple(
                    (idx, tuple(tuple(p.key() for p in row) for row in mat))
                    for idx, mat in sorted(self.terms.items())
                ),
            )
        return self._key

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrixForm)
            and self.dim == other.dim
            and self.msize == other.msize
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if not self.terms:
            return "PolyMatrixForm(0)"
        names = [f"x{i+1}" for i in range(self.dim)]
        bits = []
        for idx, mat in sorted(self.terms.items()):
            dx = "^".join(f"dx{i}" for i in idx) or "1"
            entries = "; ".join(
                ", ".join(p.format(names) for p in row) for row in mat
            )
            bits.append(f"[{entries}] {dx}")
        return "PolyMatrixForm(" + " + ".join(bits) + ")"

    # -- linear operations -----------------------------------------------------

    def _check(self, other):
        if self.dim != other.dim or self.msize != other.msize:
            raise ValueError("dimension or matrix size mismatch")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for idx, mat in other.terms.items():
            if idx in out:
                s = _mat_add(out[idx], mat)
                if _mat_is_zero(s):
                    del out[idx]
                else:
                    out[idx] = s
            else:
                out[idx] = mat
        f = PolyMatrixForm(self.dim, self.msize)
        f.terms = out
        return f

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return PolyMatrixForm(self.dim, self.msize)
        f = PolyMatrixForm(self.dim, self.msize)
        f.terms = {
            idx: tuple(tuple(p * c for p in row) for row in mat)
            for idx, mat in self.terms.items()
        }
        return f

    # -- DGA operations ----------------------------------------------------------

    def wedge(self, other):
        self._check(other)
        m = self.msize
        acc = {}
        for idx1, mat1 in self.terms.items():
            for idx2, mat2 in other.terms.items():
                sign, merged = merge_sign(idx1, idx2)
                if sign == 0:
                    continue
                prod = [[Poly.zero(self.dim) for _ in range(m)] for _ in range(m)]
                for i in range(m):
                    for k in range(m):
                        p = mat1[i][k]
                        if p.is_zero():
                            continue
                        for j in range(m):
                            q = mat2[k][j]
                            if not q.is_zero():
                                prod[i][j] = prod[i][j] + p * q
                if sign < 0:
                    prod = [[-p for p in row] for row in prod]
                mat = tuple(tuple(row) for row in prod)
                if merged in acc:
                    s = _mat_add(acc[merged], mat)
                    if _mat_is_zero(s):
                        del acc[merged]
                    else:
                        acc[merged] = s
                elif not _mat_is_zero(mat):
                    acc[merged] = mat
        f = PolyMatrixForm(self.dim, self.msize)
        f.terms = acc
        return f

    def exterior_d(self):
        acc = PolyMatrixForm(self.dim, self.msize)
        for idx, mat in self.terms.items():
            for v in range(1, self.dim + 1):
                if v in idx:
                    continue
                dmat = tuple(tuple(p.partial(v - 1) for p in row) for row in mat)
                if _mat_is_zero(dmat):
                    continue
                # dx_v ^ dx_idx: move dx_v past the indices smaller than v
                sign = (-1) ** sum(1 for i in idx if i < v)
                merged = tuple(sorted(idx + (v,)))
                term = PolyMatrixForm(self.dim, self.msize)
                term.terms = {merged: dmat if sign > 0 else tuple(tuple(-p for p in row) for row in dmat)}
                acc = acc + term
        return acc

    def d(self):
        return self.exterior_d()

    def mul(self, other):
        return self.wedge(other)

    def unit_like(self):
        return PolyMatrixForm.unit(self.dim, self.msize)

    # -- evaluation ----------------------------------------------------------------

    def evaluate(self, point, tangents):
        """Pair the degree-len(tangents) part with tangent vectors (floats).

        Multilinear and alternating in the tangents; matrix returned as an
        m x m numpy array.
        """
        p = len(tangents)
        out = np.zeros((self.msize, self.msize))
        T = [np.asarray(t, dtype=float) for t in tangents]
        if any(len(t) != self.dim for t in T):
            raise ValueError("tangent dimension mismatch")
        for idx, mat in self.terms.items():
            if len(idx) != p:
                continue
            if p:
                minor = np.array([[T[b][i - 1] for b in range(p)] for i in idx])
                det = float(np.linalg.det(minor)) if p > 1 else float(minor[0][0])
            else:
                det = 1.0
            if det == 0.0:
                continue
            vals = np.array(
                [[mat[i][j].eval_float(point) for j in range(self.msize)] for i in range(self.msize)]
            )
            out += det * vals
        return out

    def evaluate_exact(self, point, tangents):
        """Exact version of evaluate at rational points/tangents."""
        p = len(tangents)
        m = self.msize
        out = [[Fraction(0)] * m for _ in range(m)]
        for idx, mat in self.terms.items():
            if len(idx) != p:
                continue
            det = _exact_det([[Fraction(tangents[b][i - 1]) for b in range(p)] for i in idx])
            if not det:
                continue
            for i in range(m):
                for j in range(m):
                    v = mat[i][j].eval_exact(point)
                    if v:
                        out[i][j] += det * v
        return tuple(tuple(row) for row in out)


def _exact_det(rows):
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(n):
        if rows[0][j]:
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            total += (-1) ** j * rows[0][j] * _exact_det(minor)
    return total


def wedge(a, b):
    return a.wedge(b)


def exterior_d(a):
    return a.exterior_d()


def curvature(A):
    """R := dA + A ^ A for a degree-1 connection element."""
    if not A.is_zero() and A.degree != 1:
        raise ValueError("connection form must be homogeneous of degree 1")
    return A.exterior_d() + A.wedge(A)


def graded_bracket(A, x):
    """Graded commutator [A, x] = A^x - (-1)^{|x|} x^A for degree-1 A.

    Extended additively over the homogeneous parts of x.
    """
    if not A.is_zero() and A.degree != 1:
        raise ValueError("bracket requires a degree-1 first argument")
    out = PolyMatrixForm.zero(x.dim, x.msize)
    for p in x.degrees():
        xp = x.homogeneous_part(p)
        out = out + A.wedge(xp) - xp.wedge(A).scale((-1) ** p)
    return out


# -- form literals (config and golden-file format) ------------------------------


def form_to_literal(form):
    names = [f"x{i+1}" for i in range(form.dim)]
    return {
        "dim": form.dim,
        "matrix_size": form.msize,
        "terms": [
            {
                "dx": list(idx),
                "coeff": [[p.format(names) for p in row] for row in mat],
            }
            for idx, mat in sorted(form.terms.items())
        ],
    }


def form_from_literal(lit):
    dim = int(lit["dim"])
    msize = int(lit["matrix_size"])
    names = [f"x{i+1}" for i in range(dim)]
    terms = {}
    for t in lit.get("terms", []):
        idx = tuple(int(i) for i in t["dx"])
        mat = tuple(
            tuple(parse_poly(s, names) for s in row) for row in t["coeff"]
        )
        if len(mat) != msize or any(len(r) != msize for r in mat):
            raise ValueError("coefficient matrix shape mismatch")
        if idx in terms:
            raise ValueError(f"duplicate dx tuple {idx}")
        if not _mat_is_zero(mat):
            terms[idx] = mat
    return PolyMatrixForm(dim, msize, terms)


def random_form(rng, dim, msize, degree, max_power=2, nterms=2, max_coeff=4):
    """Seeded random homogeneous form; used by the exact property suites."""
    f = PolyMatrixForm.zero(dim, msize)
    idxs = list(combinations(range(1, dim + 1), degree))
    for _ in range(nterms):
        idx = idxs[rng.randrange(len(idxs))]
        exp = tuple(rng.randrange(max_power + 1) for _ in range(dim))
        c = Fraction(rng.randrange(-max_coeff, max_coeff + 1))
        if not c:
            c = Fraction(1)
        i = rng.randrange(msize)
        j = rng.randrange(msize)
        f = f + PolyMatrixForm.single(dim, msize, idx, i, j, Poly(dim, {exp: c}))
    return f
