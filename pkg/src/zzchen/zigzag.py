"""The one-dimensional zigzag Hochschild complex.

A zigzag monomial is a word

    xL (x) (x_(1,1) ... x_(1,n) x_1^R) (x) ... (x) (x_(k,1) ... x_(k,n) x_k^L)

with k even.  Odd rows are "zigs" traversing the interval left to right,
even rows are "zags" traversing right to left; the tensor order of each
row follows the traversal, so on a zag the tensor slot q sits at spatial
column n+1-q.  Entries are basis atoms of the coefficient DGA (see
entries.py); chains over such words have exact, decidable equality.

The differential is D = d + b: d applies the coefficient differential
entrywise with sign (-1)^(n + beta), beta the total degree of the
preceding entries, and b_p collapses spatial columns p and p+1 (p = 0 is
the left edge, p = n the right edge) with sign (-1)^(n+p), multiplying
colliding entries in traversal order.

The shuffle product stacks the second monomial's rows under the first,
spreads both column sets over n+m slots by an (n, m)-shuffle inserting
units (spatial placement preserved on zags via the reversed shuffle),
and glues x_k^L with y^L; the sign of a summand is
(-1)^((|x| + n) m + N(sigma)).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

from .chains import Chain, apply_linear
from .entries import expand_entry


class ZigzagMonomial:
    """Immutable zigzag word of basis atoms; rows are (cells, endpoint)."""

    __slots__ = ("xL", "rows", "_key")

    def __init__(self, xL, rows=()):
        rows = tuple((tuple(cells), end) for cells, end in rows)
        if len(rows) % 2:
            raise ValueError("row count k must be even")
        if rows:
            n = len(rows[0][0])
            if any(len(cells) != n for cells, _ in rows):
                raise ValueError("rows must share the column count")
        self.xL = xL
        self.rows = rows
        self._key = None

    @property
    def k(self):
        return len(self.rows)

    @property
    def n(self):
        return len(self.rows[0][0]) if self.rows else 0

    def entries(self):
        """All entries in traversal (tensor word) order."""
        out = [self.xL]
        for cells, end in self.rows:
            out.extend(cells)
            out.append(end)
        return out

    def total_degree(self):
        return sum(e.degree for e in self.entries())

    def shifted_degree(self):
        return self.total_degree() - self.n

    def is_zero(self):
        return False

    def key(self):
        if self._key is None:
            self._key = ("zz", self.n, self.k, tuple(e.key() for e in self.entries()))
        return self._key

    def __repr__(self):
        return f"ZigzagMonomial(n={self.n}, k={self.k})"

    @staticmethod
    def unit_like(entry):
        """The shuffle unit (n = 0, k = 0, xL = 1) over entry's algebra."""
        return ZigzagMonomial(entry.unit_like())


def zigzag_chain(xL, rows=(), coeff=1):
    """Build a chain from form-valued (or atom-valued) slots, expanding
    each slot over the coefficient-algebra basis."""
    slot_expansions = [expand_entry(xL)]
    layout = []
    for cells, end in rows:
        layout.append(len(cells))
        for c in cells:
            slot_expansions.append(expand_entry(c))
        slot_expansions.append(expand_entry(end))
    out = Chain()
    for combo in product(*slot_expansions):
        c = Fraction(coeff)
        for cc, _ in combo:
            c *= cc
        atoms = [a for _, a in combo]
        pos = 1
        new_rows = []
        for ncells in layout:
            new_rows.append((tuple(atoms[pos: pos + ncells]), atoms[pos + ncells]))
            pos += ncells + 1
        out.add_term(c, ZigzagMonomial(atoms[0], new_rows))
    return out


def unit_chain(like):
    """The shuffle unit as a chain; `like` supplies the algebra."""
    entry = expand_entry(like)[0][1]
    return Chain.of(ZigzagMonomial.unit_like(entry))


def _prefix_signs(entries):
    """(-1)^beta per position, beta = sum of earlier entry degrees."""
    signs = []
    parity = 0
    for e in entries:
        signs.append(-1 if parity & 1 else 1)
        parity += e.degree
    return signs


def _entrywise(mono, op):
    """Apply op(entry) -> [(coeff, atom)] at each slot with (-1)^(n+beta)."""
    out = Chain()
    n = mono.n
    entries = mono.entries()
    signs = _prefix_signs(entries)
    nsign = -1 if n & 1 else 1
    for c, a in op(entries[0], 0, len(entries)):
        out.add_term(nsign * signs[0] * c, ZigzagMonomial(a, mono.rows))
    pos = 1
    for r, (cells, end) in enumerate(mono.rows):
        for col in range(n):
            for c, a in op(cells[col], pos, len(entries)):
                new_cells = cells[:col] + (a,) + cells[col + 1:]
                new_rows = mono.rows[:r] + ((new_cells, end),) + mono.rows[r + 1:]
                out.add_term(nsign * signs[pos] * c, ZigzagMonomial(mono.xL, new_rows))
            pos += 1
        for c, a in op(end, pos, len(entries)):
            new_rows = mono.rows[:r] + ((cells, a),) + mono.rows[r + 1:]
            out.add_term(nsign * signs[pos] * c, ZigzagMonomial(mono.xL, new_rows))
        pos += 1
    return out


def zz_d(chain):
    """Entrywise coefficient differential with (-1)^(n+beta) signs."""
    return apply_linear(lambda m: _entrywise(m, lambda e, pos, total: e.d()), chain)


def _collapse_terms(mono, p):
    """b_p as [(coeff, monomial)]: spatial columns p and p+1 identified."""
    n, k = mono.n, mono.k
    rows = mono.rows

    def build(parts):
        """parts: list per row of (cells, [(c, end)] options) plus xL options."""
        xL_opts, row_parts = parts
        out = []
        for cx, xL in xL_opts:
            for combo in product(*[opts for _, opts in row_parts]):
                coeff = cx
                new_rows = []
                for (cells, _), (ce, end) in zip(row_parts, combo):
                    coeff = coeff * ce
                    new_rows.append((cells, end))
                out.append((coeff, ZigzagMonomial(xL, new_rows)))
        return out

    if p == 0:
        xL_opts = mono.xL.mul(rows[0][0][0])
        row_parts = []
        for i in range(1, k + 1):
            cells, end = rows[i - 1]
            if i % 2:
                row_parts.append((cells[1:], [(Fraction(1), end)]))
            else:
                factors = [cells[n - 1], end]
                if i < k:
                    factors.append(rows[i][0][0])
                opts = _fold(factors)
                row_parts.append((cells[: n - 1], opts))
        return build((xL_opts, row_parts))
    if p == n:
        xL_opts = [(Fraction(1), mono.xL)]
        row_parts = []
        for i in range(1, k + 1):
            cells, end = rows[i - 1]
            if i % 2:
                opts = _fold([cells[n - 1], end, rows[i][0][0]])
                row_parts.append((cells[: n - 1], opts))
            else:
                row_parts.append((cells[1:], [(Fraction(1), end)]))
        return build((xL_opts, row_parts))
    # interior: zig slots (p, p+1), zag slots (n-p, n-p+1), traversal order
    out = [(Fraction(1), mono.xL, [])]
    new_rows_fixed = []
    opts_per_row = []
    for i in range(1, k + 1):
        cells, end = rows[i - 1]
        q = p if i % 2 else n - p
        merged = _fold([cells[q - 1], cells[q]])
        opts_per_row.append((cells[: q - 1], cells[q + 1:], end, merged))
    result = []
    for combo in product(*[m for *_, m in opts_per_row]):
        coeff = Fraction(1)
        new_rows = []
        for (pre, post, end, _), (cm, atom) in zip(opts_per_row, combo):
            coeff *= cm
            new_rows.append((pre + (atom,) + post, end))
        result.append((coeff, ZigzagMonomial(mono.xL, new_rows)))
    return result


def _fold(factors):
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


def zz_b(chain, sign_tweak=None):
    """Column-collapse part of D; zero on chains with n = 0."""

    def on_monomial(mono):
        out = Chain()
        n = mono.n
        if n == 0:
            return out
        for p in range(n + 1):
            sign = (-1) ** ((n + p) & 1)
            if sign_tweak is not None:
                sign *= sign_tweak(p, n)
            for c, m in _collapse_terms(mono, p):
                out.add_term(sign * c, m)
        return out

    return apply_linear(on_monomial, chain)


def zz_D(chain):
    return zz_d(chain) + zz_b(chain)


# -- shuffles ------------------------------------------------------------------


class Shuffle:
    """(n, m)-shuffle sigma with sigma(1..n) and sigma(n+1..n+m) increasing."""

    __slots__ = ("n", "m", "first", "second", "parity")

    def __init__(self, n, m, first_positions):
        self.n = n
        self.m = m
        self.first = tuple(first_positions)
        second = tuple(sorted(set(range(1, n + m + 1)) - set(self.first)))
        self.second = second
        # N(sigma) mod 2: inversions between the two increasing blocks
        inv = sum(1 for a in self.first for b in second if b < a)
        self.parity = inv & 1

    def sign(self, reversed_=False):
        """sgn(sigma), or sgn(sigma^Sh) = (-1)^(nm) sgn(sigma) if reversed_."""
        s = -1 if self.parity else 1
        if reversed_ and (self.n * self.m) & 1:
            s = -s
        return s

    def __repr__(self):
        return f"Shuffle(n={self.n}, m={self.m}, first={self.first})"


def shuffles(n, m):
    return [Shuffle(n, m, pos) for pos in combinations(range(1, n + m + 1), n)]


def shuffle_sign(s, reversed_=False):
    return s.sign(reversed_)


def _shuffled_row(cells, end, is_zig, own_positions, total, unit):
    """Spread a row's cells over `total` spatial columns at own_positions."""
    n = len(cells)
    spatial = [unit] * total
    for j in range(n):
        own_col = j + 1 if is_zig else n - j
        spatial[own_positions[own_col - 1] - 1] = cells[j]
    if is_zig:
        return tuple(spatial), end
    return tuple(reversed(spatial)), end


def zz_shuffle(x, y):
    """The shuffle product on zigzag chains."""
    out = Chain()
    for cx, mx in x:
        for cy, my in y:
            coeff = cx * cy
            n, m = mx.n, my.n
            degx = mx.total_degree()
            base_sign = -1 if ((degx + n) * m) & 1 else 1
            unit = mx.xL.unit_like()
            for s in shuffles(n, m):
                sign = base_sign * (-1 if s.parity else 1)
                rows = []
                for i in range(1, mx.k + 1):
                    cells, end = mx.rows[i - 1]
                    rows.append(_shuffled_row(cells, end, i % 2 == 1, s.first, n + m, unit))
                for j in range(1, my.k + 1):
                    cells, end = my.rows[j - 1]
                    rows.append(_shuffled_row(cells, end, j % 2 == 1, s.second, n + m, unit))
                if mx.k == 0:
                    for cg, glue in mx.xL.mul(my.xL):
                        out.add_term(coeff * sign * cg, ZigzagMonomial(glue, rows))
                else:
                    cells, end = rows[mx.k - 1]
                    for cg, glue in end.mul(my.xL):
                        glued = list(rows)
                        glued[mx.k - 1] = (cells, glue)
                        out.add_term(coeff * sign * cg, ZigzagMonomial(mx.xL, glued))
    return out
