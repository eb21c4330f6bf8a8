"""The curved zigzag differential D = nabla + b + c for a connection A.

nabla twists the entrywise differential by A: interior entries get the
graded commutator d + [A, -]; the very first element (xL) sees A only on
its right and the very last (x_k^L) only on its left (a bare element,
k = 0, has no insertion gaps and keeps the plain differential).  The c
component shuffles one new column into the word consisting of units
except for a single curvature factor R = dA + A^A placed in one row.

Residual sign freedoms (the endpoint A-term signs, the global c sign,
the per-row alternation of c, and whether the R insertion position
reverses on zags) are not pinned down by the defining text; they are
resolved by an exhaustive search over the finite convention space,
selecting the unique convention for which the sub-identities

    b^2 = 0,  c^2 = 0,  nabla b + b nabla = 0,
    nabla c + c nabla = 0,  nabla^2 + c b + b c = 0

all hold exactly.  The winner is frozen as DEFAULT_CONVENTION.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chains import Chain, apply_linear
from .entries import expand_form
from .forms import curvature
from .zigzag import ZigzagMonomial, _entrywise, zz_b


@dataclass(frozen=True)
class SignConvention:
    """Endpoint/c sign choices; search_conventions is the arbiter."""

    eps_R: int = -1          # sign of the (-1)^|x| x.A term at xL
    eps_L: int = 1           # sign of the A.x term at x_k^L
    eps_c: int = 1           # global sign of the c component
    row_alternation: bool = True   # c row signs alternate (-1)^(i-1)
    zag_R_spatial: bool = True     # R lands at the shared spatial column on zags


DEFAULT_CONVENTION = SignConvention()


class CurvedContext:
    """Fixed degree-1 connection element with cached curvature."""

    def __init__(self, A, convention=DEFAULT_CONVENTION):
        if not A.is_zero() and A.degree != 1:
            raise ValueError("connection element must be homogeneous of degree 1")
        self.A = A
        self.R = curvature(A)
        self.convention = convention
        self.flat = self.R.is_zero()
        self.A_atoms = expand_form(A) if not A.is_zero() else []
        self.R_atoms = expand_form(self.R) if not self.flat else []

    def nabla_entry(self, x, role):
        """Role-appropriate covariant differential as [(coeff, atom)].

        role: "first" (A on the right only), "last" (A on the left only),
        "mid" (graded commutator), "bare" (no gaps touch this entry).
        """
        out = list(x.d())
        if role == "bare" or not self.A_atoms:
            return out
        deg_sign = (-1) ** (x.degree & 1)
        if role in ("mid", "first"):
            s = Fraction(-deg_sign if role == "mid" else self.convention.eps_R * deg_sign)
            for cA, aA in self.A_atoms:
                for c2, prod in x.mul(aA):
                    out.append((s * cA * c2, prod))
        if role in ("mid", "last"):
            s = Fraction(1 if role == "mid" else self.convention.eps_L)
            for cA, aA in self.A_atoms:
                for c2, prod in aA.mul(x):
                    out.append((s * cA * c2, prod))
        return out


def nabla_component(ctx, chain):
    """The nabla part of the curved differential, with d-part bookkeeping."""

    def on_monomial(mono):
        bare = mono.k == 0

        def op(entry, pos, total):
            if bare:
                role = "bare"
            elif pos == 0:
                role = "first"
            elif pos == total - 1:
                role = "last"
            else:
                role = "mid"
            return ctx.nabla_entry(entry, role)

        return _entrywise(mono, op)

    return apply_linear(on_monomial, chain)


def insert_column(mono, spatial, fill, special_row=None, special=None,
                  zag_special_spatial=True):
    """Insert one new column at the given spatial position (1..n+1).

    Every row receives `fill` at that column except `special_row`
    (1-based), which receives `special`.  With zag_special_spatial=False
    the special entry lands at tensor slot `spatial` even on zag rows
    (the literal reading rejected by the identity search).
    """
    n = mono.n
    new_rows = []
    for i in range(1, mono.k + 1):
        cells, end = mono.rows[i - 1]
        entry = special if i == special_row else fill
        if i % 2 or (i == special_row and not zag_special_spatial):
            slot = spatial
        else:
            slot = n + 2 - spatial
        new_cells = cells[: slot - 1] + (entry,) + cells[slot - 1:]
        new_rows.append((new_cells, end))
    return ZigzagMonomial(mono.xL, new_rows)


def c_component(ctx, chain):
    """Shuffle one curvature factor R into each row at each new column."""
    if ctx.flat:
        return Chain()
    conv = ctx.convention

    def on_monomial(mono):
        out = Chain()
        if mono.k == 0:
            return out
        n = mono.n
        unit = mono.xL.unit_like()
        for v in range(1, n + 2):
            vsign = conv.eps_c * (-1) ** ((n + v) & 1)
            for i in range(1, mono.k + 1):
                sign = vsign
                if conv.row_alternation and (i - 1) & 1:
                    sign = -sign
                for cR, aR in ctx.R_atoms:
                    out.add_term(
                        sign * cR,
                        insert_column(mono, v, unit, special_row=i, special=aR,
                                      zag_special_spatial=conv.zag_R_spatial),
                    )
        return out

    return apply_linear(on_monomial, chain)


def curved_D(ctx, chain):
    return nabla_component(ctx, chain) + zz_b(chain) + c_component(ctx, chain)


# -- convention search -----------------------------------------------------------


def sub_identity_residuals(ctx, chain):
    """Residual chains of the five sub-identities on a test chain."""
    nab = lambda c: nabla_component(ctx, c)
    cc = lambda c: c_component(ctx, c)
    return {
        "b^2": zz_b(zz_b(chain)),
        "c^2": cc(cc(chain)),
        "nabla b + b nabla": nab(zz_b(chain)) + zz_b(nab(chain)),
        "nabla c + c nabla": nab(cc(chain)) + cc(nab(chain)),
        "nabla^2 + cb + bc": nab(nab(chain)) + cc(zz_b(chain)) + zz_b(cc(chain)),
    }


def all_conventions():
    return [
        SignConvention(eps_R, eps_L, eps_c, alt, zspatial)
        for eps_R in (1, -1)
        for eps_L in (1, -1)
        for eps_c in (1, -1)
        for alt in (True, False)
        for zspatial in (True, False)
    ]


def search_conventions(A, test_chains):
    """Return the conventions for which every sub-identity vanishes exactly."""
    winners = []
    for conv in all_conventions():
        ctx = CurvedContext(A, conv)
        ok = True
        for chain in test_chains:
            for residual in sub_identity_residuals(ctx, chain).values():
                if not residual.is_zero():
                    ok = False
                    break
            if not ok:
                break
        if ok:
            winners.append(conv)
    return winners
