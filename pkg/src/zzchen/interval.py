"""The interval Hochschild complex and the column-collapse maps.

Monomials are words (w_0, w_1, ..., w_n, w_{n+1}) of basis atoms; the
differential is D = d + b with the same Stokes-convention signs as the
zigzag complex: d carries (-1)^(n + beta), and b_i multiplies slots i
and i+1 with sign (-1)^(n+i) for i = 0..n (zero when n = 0; the b sign
carries the n from the fiber dimension so that the collapse below is a
chain map).

Col multiplies each zigzag column down to one interval slot (left
endpoints, the n columns in spatial order, right endpoints) with the
Koszul sign of the reordering; it is a chain and algebra map for
commutative coefficients.  Col_Mat does the same on split coefficients
(commutative scalar (x) associative matrix), pushing every matrix factor
into the last slot in traversal order.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .chains import Chain, apply_linear
from .entries import SplitAtom, expand_entry
from .zigzag import ZigzagMonomial, _fold, _prefix_signs, shuffles


class IntervalMonomial:
    __slots__ = ("slots", "_key")

    def __init__(self, slots):
        slots = tuple(slots)
        if len(slots) < 2:
            raise ValueError("interval monomial needs two endpoint slots")
        self.slots = slots
        self._key = None

    @property
    def n(self):
        return len(self.slots) - 2

    def total_degree(self):
        return sum(e.degree for e in self.slots)

    def shifted_degree(self):
        return self.total_degree() - self.n

    def is_zero(self):
        return False

    def key(self):
        if self._key is None:
            self._key = ("iv", self.n, tuple(e.key() for e in self.slots))
        return self._key

    def __repr__(self):
        return f"IntervalMonomial(n={self.n})"


def interval_chain(*slots, coeff=1):
    """Build a chain from form-valued slots, expanding over the basis."""
    expansions = [expand_entry(s) for s in slots]
    out = Chain()
    for combo in product(*expansions):
        c = Fraction(coeff)
        for cc, _ in combo:
            c *= cc
        out.add_term(c, IntervalMonomial(tuple(a for _, a in combo)))
    return out


def interval_D(chain):
    def on_monomial(mono):
        out = Chain()
        slots = mono.slots
        n = mono.n
        nsign = -1 if n & 1 else 1
        signs = _prefix_signs(slots)
        for i, e in enumerate(slots):
            for c, a in e.d():
                out.add_term(
                    nsign * signs[i] * c,
                    IntervalMonomial(slots[:i] + (a,) + slots[i + 1:]),
                )
        if n >= 1:
            for i in range(n + 1):
                sign = (-1) ** ((n + i) & 1)
                for c, a in slots[i].mul(slots[i + 1]):
                    out.add_term(
                        sign * c, IntervalMonomial(slots[:i] + (a,) + slots[i + 2:])
                    )
        return out

    return apply_linear(on_monomial, chain)


def _interval_shuffle(x, y, with_matrix):
    out = Chain()
    for cx, mx in x:
        for cy, my in y:
            n, m = mx.n, my.n
            xs = list(mx.slots)
            ys = list(my.slots)
            xdeg = [e.degree for e in xs]
            ydeg = [e.degree for e in ys]
            if with_matrix:
                mat = mx.slots[0].mat_part()
                for e in list(mx.slots[1:]) + list(my.slots):
                    mat = _mat_mul(mat, e.mat_part())
                norm = SplitAtom.normalized(mx.slots[0].scalar.unit_like(), mat)
                xs = [e.scalar_only() for e in xs]
                ys = [e.scalar_only() for e in ys]
            # zigzag global factor plus the Koszul sign of the reordering
            base = (sum(xdeg) + n) * m + ydeg[0] * (sum(xdeg[1:-1]) + xdeg[-1]) \
                + xdeg[-1] * sum(ydeg[1:-1])
            for s in shuffles(n, m):
                e = base + s.parity
                for i in range(n):
                    for j in range(m):
                        if s.second[j] < s.first[i]:
                            e += xdeg[1 + i] * ydeg[1 + j]
                sign = -1 if e & 1 else 1
                interior = [None] * (n + m)
                for j in range(n):
                    interior[s.first[j] - 1] = xs[1 + j]
                for j in range(m):
                    interior[s.second[j] - 1] = ys[1 + j]
                for cl, left in xs[0].mul(ys[0]):
                    for cr, right in xs[-1].mul(ys[-1]):
                        coeff = cx * cy * cl * cr * sign
                        slots = [left] + interior + [right]
                        if with_matrix:
                            for cm, matom in norm:
                                for c2, merged in slots[-1].mul(matom):
                                    out.add_term(
                                        coeff * cm * c2,
                                        IntervalMonomial(slots[:-1] + [merged]),
                                    )
                        else:
                            out.add_term(coeff, IntervalMonomial(slots))
    return out


def interval_shuffle_comm(x, y):
    """Shuffle product on CH^I for commutative (matrix size 1) coefficients."""
    for chain in (x, y):
        for _, mono in chain:
            e = mono.slots[0]
            if getattr(e, "msize", 1) != 1:
                raise ValueError("commutative interval shuffle needs matrix size 1")
    return _interval_shuffle(x, y, with_matrix=False)


def interval_shuffle_mat(x, y):
    """Shuffle on CH^I(C (x) B): scalars shuffle, matrix parts collect last."""
    return _interval_shuffle(x, y, with_matrix=True)


def _mat_mul(a, b):
    size = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(size)) for j in range(size))
        for i in range(size)
    )


# -- collapse maps -----------------------------------------------------------------


def _collapse_layout(mono):
    """Source traversal index -> (target block, within-block rank).

    Target blocks: 0 = left endpoints, p = column p (odd rows top to
    bottom, then even rows), n+1 = right endpoints.
    """
    n, k = mono.n, mono.k
    order = {0: (0, 0)}
    pos = 1
    for i in range(1, k + 1):
        for q in range(1, n + 1):
            col = q if i % 2 else n + 1 - q
            rank = (i - 1) // 2 if i % 2 else (k + i) // 2
            order[pos] = (col, rank)
            pos += 1
        order[pos] = (n + 1, (i - 1) // 2) if i % 2 else (0, i // 2)
        pos += 1
    return order


def _koszul_reorder_sign(entries, order):
    sign = 1
    ranks = [order[i] for i in range(len(entries))]
    for a in range(len(entries)):
        if not entries[a].degree & 1:
            continue
        for b in range(a + 1, len(entries)):
            if ranks[a] > ranks[b] and entries[b].degree & 1:
                sign = -sign
    return sign


def _collapse_monomial(mono):
    """[(coeff, IntervalMonomial)] for one zigzag word."""
    entries = mono.entries()
    order = _collapse_layout(mono)
    sign = _koszul_reorder_sign(entries, order)
    n = mono.n
    blocks = [[] for _ in range(n + 2)]
    for i in sorted(range(len(entries)), key=lambda i: order[i]):
        blocks[order[i][0]].append(entries[i])
    unit = mono.xL.unit_like()
    slot_opts = []
    for block in blocks:
        slot_opts.append(_fold([unit] + block))
    out = []
    for combo in product(*slot_opts):
        c = Fraction(sign)
        for cc, _ in combo:
            c *= cc
        out.append((c, IntervalMonomial(tuple(a for _, a in combo))))
    return out


def collapse(chain):
    """Col: CH^ZZ -> CH^I for commutative (matrix size 1) coefficients."""

    def on_monomial(mono):
        if getattr(mono.xL, "msize", 1) != 1:
            raise ValueError("collapse requires commutative (matrix size 1) entries")
        out = Chain()
        for c, m in _collapse_monomial(mono):
            out.add_term(c, m)
        return out

    return apply_linear(on_monomial, chain)


def collapse_mat(chain):
    """Col_Mat: CH^ZZ(C (x) B) -> CH^I(C (x) B).

    Scalar parts collapse exactly like Col; the matrix parts multiply in
    traversal order into the final slot.
    """

    def on_monomial(mono):
        entries = mono.entries()
        if not all(isinstance(e, SplitAtom) for e in entries):
            raise ValueError("collapse_mat requires split (scalar, matrix) entries")
        mat = entries[0].mat_part()
        for e in entries[1:]:
            mat = _mat_mul(mat, e.mat_part())
        stripped = ZigzagMonomial(
            mono.xL.scalar_only(),
            [
                (tuple(c.scalar_only() for c in cells), end.scalar_only())
                for cells, end in mono.rows
            ],
        )
        out = Chain()
        for c, m in _collapse_monomial(stripped):
            for cm, final in SplitAtom.normalized(m.slots[-1].scalar, mat):
                out.add_term(c * cm, IntervalMonomial(m.slots[:-1] + (final,)))
        return out

    return apply_linear(on_monomial, chain)
