"""Basis atoms for the coefficient algebras of the Hochschild complexes.

Chains need exact, canonical equality in tensor powers of the
coefficient DGA, so tensor slots hold *basis elements* with all scalar
content pulled into the chain coefficient.  For matrix-valued polynomial
forms the basis is

    x^e . E_ij . dx_I          (one exponent vector, one matrix unit,
                                one increasing wedge tuple)

together with a formal unit symbol 1.  Products of atoms are again a
single atom up to sign (or zero), and d maps an atom to a short list of
atoms, so operations return small linear combinations [(coeff, atom)].

Keeping 1 as its own basis element makes the coefficient algebra the
span of {1} + atoms, an associative unital DGA in its own right; the
complexes are defined over any such algebra, and evaluation sends 1 to
the identity matrix, so the numeric layer is unaffected.
"""

from __future__ import annotations

from fractions import Fraction

from .forms import PolyMatrixForm, merge_sign
from .poly import Poly


class FormAtom:
    """x^exp E_(i,j) dx_idx, or the formal unit (pos is None)."""

    __slots__ = ("dim", "msize", "idx", "pos", "exp", "_key", "_form")

    def __init__(self, dim, msize, idx=(), pos=None, exp=None):
        self.dim = dim
        self.msize = msize
        self.idx = tuple(idx)
        self.pos = pos
        self.exp = (0,) * dim if exp is None and pos is not None else (
            tuple(exp) if exp is not None else None
        )
        self._key = None
        self._form = None

    @property
    def is_unit(self):
        return self.pos is None

    @property
    def degree(self):
        return len(self.idx)

    def is_zero(self):
        return False  # zero never appears as an atom

    def key(self):
        if self._key is None:
            pos = (-1, -1) if self.pos is None else self.pos
            exp = () if self.exp is None else self.exp
            self._key = (self.dim, self.msize, self.idx, pos, exp)
        return self._key

    def __eq__(self, other):
        return isinstance(other, FormAtom) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def unit_like(self):
        return FormAtom(self.dim, self.msize)

    def d(self):
        """Exterior derivative as [(coeff, atom)]."""
        if self.is_unit:
            return []
        out = []
        for v in range(1, self.dim + 1):
            if v in self.idx or not self.exp[v - 1]:
                continue
            e = list(self.exp)
            c = Fraction(e[v - 1])
            e[v - 1] -= 1
            sign = (-1) ** sum(1 for i in self.idx if i < v)
            out.append(
                (c * sign, FormAtom(self.dim, self.msize, tuple(sorted(self.idx + (v,))),
                                    self.pos, tuple(e)))
            )
        return out

    def mul(self, other):
        """Product as [(coeff, atom)]; empty when it vanishes."""
        if self.is_unit:
            return [(Fraction(1), other)]
        if other.is_unit:
            return [(Fraction(1), self)]
        if self.pos[1] != other.pos[0]:
            return []
        sign, merged = merge_sign(self.idx, other.idx)
        if sign == 0:
            return []
        exp = tuple(a + b for a, b in zip(self.exp, other.exp))
        atom = FormAtom(self.dim, self.msize, merged, (self.pos[0], other.pos[1]), exp)
        return [(Fraction(sign), atom)]

    def form(self):
        """The atom as a PolyMatrixForm, for numeric evaluation."""
        if self._form is None:
            if self.is_unit:
                self._form = PolyMatrixForm.unit(self.dim, self.msize)
            else:
                self._form = PolyMatrixForm.single(
                    self.dim, self.msize, self.idx, self.pos[0], self.pos[1],
                    Poly(self.dim, {self.exp: Fraction(1)}),
                )
        return self._form

    def __repr__(self):
        if self.is_unit:
            return "FormAtom(1)"
        return f"FormAtom(E{self.pos} x^{self.exp} dx{self.idx})"


def expand_form(f):
    """A PolyMatrixForm as [(coeff, FormAtom)]; the exact unit becomes 1."""
    if f == PolyMatrixForm.unit(f.dim, f.msize):
        return [(Fraction(1), FormAtom(f.dim, f.msize))]
    out = []
    for idx, mat in sorted(f.terms.items()):
        for i in range(f.msize):
            for j in range(f.msize):
                p = mat[i][j]
                for exp, c in sorted(p.terms.items()):
                    out.append((c, FormAtom(f.dim, f.msize, idx, (i, j), exp)))
    return out


def expand_entry(e):
    """Uniform expansion: forms expand, atoms pass through."""
    if isinstance(e, PolyMatrixForm):
        return expand_form(e)
    return [(Fraction(1), e)]


def fold_product(factors):
    """Ordered product of a list of atoms as [(coeff, atom)]."""
    acc = [(Fraction(1), factors[0])]
    for f in factors[1:]:
        nxt = []
        for c, a in acc:
            for c2, a2 in a.mul(f):
                nxt.append((c * c2, a2))
        acc = nxt
        if not acc:
            break
    return acc


class SplitAtom:
    """c (x) M with a scalar-form atom c and a normalized rational matrix M.

    The matrix is scaled so its first nonzero entry is 1 (the scale lives
    in the chain coefficient); the identity paired with the formal unit
    scalar plays the role of 1.
    """

    __slots__ = ("scalar", "mat", "_key")

    def __init__(self, scalar, mat):
        if scalar.msize != 1:
            raise ValueError("split atoms need a scalar (matrix size 1) form part")
        self.scalar = scalar
        self.mat = tuple(tuple(Fraction(v) for v in row) for row in mat)
        self._key = None

    @staticmethod
    def normalized(scalar, mat):
        """[(coeff, SplitAtom)] with the matrix scale extracted; [] if zero."""
        scale = None
        for row in mat:
            for v in row:
                if v:
                    scale = Fraction(v)
                    break
            if scale is not None:
                break
        if scale is None:
            return []
        mat = tuple(tuple(Fraction(v) / scale for v in row) for row in mat)
        return [(scale, SplitAtom(scalar, mat))]

    @property
    def degree(self):
        return self.scalar.degree

    @property
    def is_unit(self):
        return self.scalar.is_unit and self._is_identity()

    def _is_identity(self):
        size = len(self.mat)
        return all(
            self.mat[i][j] == (1 if i == j else 0)
            for i in range(size)
            for j in range(size)
        )

    def is_zero(self):
        return False

    def key(self):
        if self._key is None:
            self._key = ("split", self.scalar.key(), self.mat)
        return self._key

    def unit_like(self):
        size = len(self.mat)
        ident = tuple(
            tuple(Fraction(1 if i == j else 0) for j in range(size)) for i in range(size)
        )
        return SplitAtom(self.scalar.unit_like(), ident)

    def d(self):
        return [(c, SplitAtom(a, self.mat)) for c, a in self.scalar.d()]

    def mul(self, other):
        size = len(self.mat)
        prod = tuple(
            tuple(
                sum(self.mat[i][k] * other.mat[k][j] for k in range(size))
                for j in range(size)
            )
            for i in range(size)
        )
        out = []
        for c, a in self.scalar.mul(other.scalar):
            for c2, atom in SplitAtom.normalized(a, prod):
                out.append((c * c2, atom))
        return out

    def scalar_only(self):
        return SplitAtom(self.scalar, self.unit_like().mat)

    def mat_part(self):
        return self.mat

    def __repr__(self):
        return f"SplitAtom({self.scalar!r}, {self.mat})"


def split_entry(scalar_form, mat):
    """[(coeff, SplitAtom)] from a scalar PolyMatrixForm and a matrix."""
    out = []
    for c, atom in expand_form(scalar_form):
        for c2, s in SplitAtom.normalized(atom, mat):
            out.append((c * c2, s))
    return out
