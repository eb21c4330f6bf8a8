"""The rectangular (2-d) zigzag complex, plain and curved.

A rectangular monomial is a stack of m+2 zigzag blocks sharing the same
column count n (blocks with no strands are bare elements).  The plain
differential is D = d + b + star: d acts entrywise with sign
(-1)^(n+m+beta), b_p collapses spatial columns p, p+1 across every block
simultaneously with sign (-1)^(m+n+p), and star_r concatenates adjacent
blocks r, r+1 with sign (-1)^(m+r), multiplying the glued endpoints.

The curved differential D = nabla + b + c + star twists d by a
connection (A on the right of the very first element, on the left of
the very last, graded commutator in between: transport also runs along
the left vertical edge, so interior block endpoints see A on both
sides).  c inserts a single curvature factor R either horizontally (one
new column across all blocks, R in exactly one row) or vertically (a
new bare block R between adjacent blocks); its residual sign freedom is
fixed by the exhaustive D^2 = 0 search in search_rect_conventions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .chains import Chain, apply_linear
from .curved import CurvedContext, DEFAULT_CONVENTION, insert_column
from .zigzag import ZigzagMonomial, _collapse_terms, _prefix_signs, zigzag_chain


class RectMonomial:
    """m+2 zigzag blocks over a shared column count n."""

    __slots__ = ("ncols", "blocks", "_key")

    def __init__(self, ncols, blocks):
        blocks = tuple(blocks)
        if len(blocks) < 2:
            raise ValueError("need at least the two edge blocks")
        for blk in blocks:
            if blk.k and blk.n != ncols:
                raise ValueError("strand blocks must share the column count")
        if ncols and all(blk.k == 0 for blk in blocks):
            raise ValueError("columns require at least one strand")
        self.ncols = ncols
        self.blocks = blocks
        self._key = None

    @property
    def n(self):
        return self.ncols

    @property
    def m(self):
        return len(self.blocks) - 2

    def entries(self):
        out = []
        for blk in self.blocks:
            out.extend(blk.entries())
        return out

    def total_degree(self):
        return sum(e.degree for e in self.entries())

    def shifted_degree(self):
        return self.total_degree() - self.ncols - self.m

    def is_zero(self):
        return False

    def key(self):
        if self._key is None:
            self._key = (
                "rect",
                self.ncols,
                tuple((blk.k, blk.key()) for blk in self.blocks),
            )
        return self._key

    def __repr__(self):
        ks = tuple(blk.k for blk in self.blocks)
        return f"RectMonomial(n={self.ncols}, k={ks})"


def rect_chain(ncols, block_specs, coeff=1):
    """Build a chain from form-valued block specs [(xL, rows), ...]."""
    block_chains = [zigzag_chain(xL, rows) for xL, rows in block_specs]
    out = Chain()
    for combo in product(*[list(bc) for bc in block_chains]):
        c = Fraction(coeff)
        for cc, _ in combo:
            c *= cc
        out.add_term(c, RectMonomial(ncols, tuple(m for _, m in combo)))
    return out


def star(a, b):
    """Concatenation of two blocks as [(coeff, ZigzagMonomial)]."""
    if a.k and b.k and a.n != b.n:
        raise ValueError("star requires matching column counts")
    if a.k == 0:
        return [(c, ZigzagMonomial(glue, b.rows)) for c, glue in a.xL.mul(b.xL)]
    cells, end = a.rows[-1]
    return [
        (c, ZigzagMonomial(a.xL, a.rows[:-1] + ((cells, glue),) + b.rows))
        for c, glue in end.mul(b.xL)
    ]


def _replace_entry(mono, pos, value):
    """New block with the traversal-position entry replaced."""
    if pos == 0:
        return ZigzagMonomial(value, mono.rows)
    n = mono.n
    pos -= 1
    r, within = divmod(pos, n + 1)
    cells, end = mono.rows[r]
    if within == n:
        new_row = (cells, value)
    else:
        new_row = (cells[:within] + (value,) + cells[within + 1:], end)
    return ZigzagMonomial(mono.xL, mono.rows[:r] + (new_row,) + mono.rows[r + 1:])


def _rect_entrywise(mono, entry_op):
    """Apply entry_op(entry, pos, total) -> [(coeff, atom)] with signs."""
    out = Chain()
    entries = mono.entries()
    signs = _prefix_signs(entries)
    shift_sign = -1 if (mono.ncols + mono.m) & 1 else 1
    total = len(entries)
    pos = 0
    for bi, blk in enumerate(mono.blocks):
        blk_len = (mono.ncols + 1) * blk.k + 1
        for local in range(blk_len):
            for c, atom in entry_op(entries[pos], pos, total):
                new_blk = _replace_entry(blk, local, atom)
                out.add_term(
                    shift_sign * signs[pos] * c,
                    RectMonomial(
                        mono.ncols,
                        mono.blocks[:bi] + (new_blk,) + mono.blocks[bi + 1:],
                    ),
                )
            pos += 1
    return out


def rect_d(chain):
    return apply_linear(
        lambda mono: _rect_entrywise(mono, lambda e, pos, total: e.d()), chain
    )


def rect_b(chain):
    def on_monomial(mono):
        out = Chain()
        n = mono.ncols
        if n == 0:
            return out
        m = mono.m
        for p in range(n + 1):
            sign = (-1) ** ((m + n + p) & 1)
            block_opts = [
                _collapse_terms(blk, p) if blk.k else [(Fraction(1), blk)]
                for blk in mono.blocks
            ]
            for combo in product(*block_opts):
                c = Fraction(sign)
                for cc, _ in combo:
                    c *= cc
                out.add_term(c, RectMonomial(n - 1, tuple(b for _, b in combo)))
        return out

    return apply_linear(on_monomial, chain)


def rect_star(chain):
    """Adjacent-block concatenations; zero on m = 0 (a point has no faces)."""

    def on_monomial(mono):
        out = Chain()
        m = mono.m
        if m == 0:
            return out
        for r in range(m + 1):
            sign = (-1) ** ((m + r) & 1)
            for c, joined in star(mono.blocks[r], mono.blocks[r + 1]):
                blocks = mono.blocks[:r] + (joined,) + mono.blocks[r + 2:]
                ncols = mono.ncols if any(b.k for b in blocks) else 0
                out.add_term(sign * c, RectMonomial(ncols, blocks))
        return out

    return apply_linear(on_monomial, chain)


def rect_D(chain):
    return rect_d(chain) + rect_b(chain) + rect_star(chain)


# -- curved version -----------------------------------------------------------------


@dataclass(frozen=True)
class RectSignConvention:
    """Extra sign freedom of the 2-d c component, fixed by the D^2 search.

    Horizontal R insertion at spatial column v carries
    (-1)^(v + h_n*n + h_m*m + h_1) besides the 1-d row alternation;
    vertical R insertion between blocks r, r+1 carries
    (-1)^(r + v_m*m + v_1).
    """

    h_n: int = 1
    h_m: int = 1
    h_1: int = 0
    v_m: int = 1
    v_1: int = 1


DEFAULT_RECT_CONVENTION = RectSignConvention()


def rect_nabla(ctx, chain):
    def on_monomial(mono):
        def op(entry, pos, total):
            role = "first" if pos == 0 else ("last" if pos == total - 1 else "mid")
            return ctx.nabla_entry(entry, role)

        return _rect_entrywise(mono, op)

    return apply_linear(on_monomial, chain)


def rect_c(ctx, chain, rect_conv=DEFAULT_RECT_CONVENTION):
    if ctx.flat:
        return Chain()
    conv = ctx.convention

    def on_monomial(mono):
        out = Chain()
        n, m = mono.ncols, mono.m
        unit = mono.blocks[0].xL.unit_like()
        if any(blk.k for blk in mono.blocks):
            for v in range(1, n + 2):
                base = conv.eps_c * (-1) ** (
                    (v + rect_conv.h_n * n + rect_conv.h_m * m + rect_conv.h_1) & 1
                )
                row_offset = 0
                for bi, blk in enumerate(mono.blocks):
                    for i in range(1, blk.k + 1):
                        sign = base
                        if conv.row_alternation and (i - 1) & 1:
                            sign = -sign
                        for cR, aR in ctx.R_atoms:
                            new_blocks = tuple(
                                insert_column(
                                    b, v, unit,
                                    special_row=i if bj == bi else None,
                                    special=aR,
                                    zag_special_spatial=conv.zag_R_spatial,
                                )
                                if b.k
                                else b
                                for bj, b in enumerate(mono.blocks)
                            )
                            out.add_term(sign * cR, RectMonomial(n + 1, new_blocks))
                    row_offset += blk.k
        for r in range(m + 1):
            sign = conv.eps_c * (-1) ** ((r + rect_conv.v_m * m + rect_conv.v_1) & 1)
            for cR, aR in ctx.R_atoms:
                blocks = mono.blocks[: r + 1] + (ZigzagMonomial(aR),) + mono.blocks[r + 1:]
                out.add_term(sign * cR, RectMonomial(n, blocks))
        return out

    return apply_linear(on_monomial, chain)


def rect_curved_D(ctx, chain, rect_conv=DEFAULT_RECT_CONVENTION):
    return (
        rect_nabla(ctx, chain)
        + rect_b(chain)
        + rect_c(ctx, chain, rect_conv)
        + rect_star(chain)
    )


def rect_sub_identity_residuals(ctx, chain, rect_conv=DEFAULT_RECT_CONVENTION):
    b, s, d = rect_b, rect_star, rect_d
    nab = lambda c: rect_nabla(ctx, c)
    cc = lambda c: rect_c(ctx, c, rect_conv)
    return {
        "star d + d star": s(d(chain)) + d(s(chain)),
        "star^2": s(s(chain)),
        "star b + b star": s(b(chain)) + b(s(chain)),
        "b^2": b(b(chain)),
        "nabla b + b nabla": nab(b(chain)) + b(nab(chain)),
        "star nabla + nabla star": s(nab(chain)) + nab(s(chain)),
        "c^2": cc(cc(chain)),
        # the curvature terms cancel only jointly: vertical R insertions
        # talk to both nabla (Bianchi across blocks) and star
        "nabla^2 + {c,b} + {c,nabla} + {c,star}": (
            nab(nab(chain)) + cc(b(chain)) + b(cc(chain))
            + nab(cc(chain)) + cc(nab(chain)) + cc(s(chain)) + s(cc(chain))
        ),
    }


def rect_D2(ctx, chain, rect_conv=DEFAULT_RECT_CONVENTION):
    return rect_curved_D(ctx, rect_curved_D(ctx, chain, rect_conv), rect_conv)


def all_rect_conventions():
    return [
        RectSignConvention(h_n, h_m, h_1, v_m, v_1)
        for h_n in (0, 1)
        for h_m in (0, 1)
        for h_1 in (0, 1)
        for v_m in (0, 1)
        for v_1 in (0, 1)
    ]


def search_rect_conventions(A, test_chains, base_convention=DEFAULT_CONVENTION):
    """Rect c-sign candidates for which rect_curved_D^2 vanishes exactly."""
    ctx = CurvedContext(A, base_convention)
    winners = []
    for rc in all_rect_conventions():
        ok = True
        for chain in test_chains:
            if not rect_D2(ctx, chain, rc).is_zero():
                ok = False
                break
        if ok:
            winners.append(rc)
    return winners
