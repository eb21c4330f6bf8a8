"""Numeric realization of the evaluation/iterated-integral maps.

Forms on path or bigon space are represented through their values: a
chain c with shifted degree p is evaluated at a parameter point u0
against p parameter directions, integrating the pullback over the time
simplex by iterated Gauss-Legendre quadrature.

Conventions (frozen; the chain-map tests are the guard): the pullback of
a tensor word is the wedge of the entry pullbacks in traversal order,
and the fiber block is extracted first, i.e. the value is the
coefficient of dt_1 ^ ... ^ dt_n (^ ds_1 ^ ... ^ ds_m) ^ dirs in that
order.  Quadrature nodes are enumerated lexicographically, so results
are bit-identical across runs.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from .quadrature import gauss_legendre_01, simplex_nodes
from .zigzag import zz_D


# -- exterior algebra on evaluated components -----------------------------------


def _merge(t1, t2):
    """Merge two ascending index tuples; (0, None) on repeats."""
    if not t1:
        return 1, t2
    if not t2:
        return 1, t1
    if set(t1) & set(t2):
        return 0, None
    inv = 0
    for a in t1:
        for b in t2:
            if b < a:
                inv += 1
    return (-1) ** (inv & 1), tuple(sorted(t1 + t2))


def wedge_values(f, g):
    """Wedge of index-tuple -> matrix dictionaries (matrix product order f.g)."""
    out = {}
    for t1, m1 in f.items():
        for t2, m2 in g.items():
            sign, merged = _merge(t1, t2)
            if sign == 0:
                continue
            val = (m1 @ m2) if sign > 0 else -(m1 @ m2)
            if merged in out:
                out[merged] = out[merged] + val
            else:
                out[merged] = val
    return out


@lru_cache(maxsize=None)
def _compiled(form):
    """Sparse per-term float evaluators; keyed on the immutable form."""
    terms = []
    for idx, mat in sorted(form.terms.items()):
        cells = []
        for i in range(form.msize):
            for j in range(form.msize):
                if not mat[i][j].is_zero():
                    cells.append((i, j, mat[i][j].float_evaluator()))
        terms.append((idx, cells))
    return form.msize, terms


def evaluate_compiled(form, point, tangents):
    """Fast pointwise pairing of a homogeneous part with tangents."""
    msize, terms = _compiled(form)
    p = len(tangents)
    out = np.zeros((msize, msize))
    for idx, cells in terms:
        if len(idx) != p:
            continue
        if p == 0:
            det = 1.0
        elif p == 1:
            det = tangents[0][idx[0] - 1]
        elif p == 2:
            a, b = idx[0] - 1, idx[1] - 1
            det = tangents[0][a] * tangents[1][b] - tangents[0][b] * tangents[1][a]
        else:
            minor = np.array([[t[i - 1] for t in tangents] for i in idx])
            det = float(np.linalg.det(minor))
        if det:
            for i, j, ev in cells:
                out[i, j] += det * ev(point)
    return out


def pullback_values(form, point, rows):
    """Pull a form back along a map with the given differential rows.

    rows: list of (basis_index, image vector in R^d) for the nonzero
    columns of the differential.  Returns {basis index tuple: matrix}.
    """
    msize, terms = _compiled(form)
    out = {}
    for idx, cells in terms:
        p = len(idx)
        if p == 0:
            key_iter = [((), 1.0)]
        else:
            if len(rows) < p:
                continue
            key_iter = []
            for combo in combinations(range(len(rows)), p):
                if p == 1:
                    det = rows[combo[0]][1][idx[0] - 1]
                elif p == 2:
                    va, vb = rows[combo[0]][1], rows[combo[1]][1]
                    a, b = idx[0] - 1, idx[1] - 1
                    det = va[a] * vb[b] - va[b] * vb[a]
                else:
                    minor = np.array([[rows[c][1][i - 1] for c in combo] for i in idx])
                    det = float(np.linalg.det(minor))
                if det:
                    key_iter.append((tuple(rows[c][0] for c in combo), det))
        if not key_iter:
            continue
        mat = np.zeros((msize, msize))
        nonzero = False
        for i, j, ev in cells:
            v = ev(point)
            if v:
                mat[i, j] = v
                nonzero = True
        if not nonzero:
            continue
        for key, det in key_iter:
            if key in out:
                out[key] = out[key] + det * mat
            else:
                out[key] = det * mat
    return out


def value_wedge(values_a, p, values_b, q):
    """Wedge of two evaluated forms given as direction-callables.

    values_a(dirs_subset) and values_b(dirs_subset) return matrices;
    used to check the algebra-map property against It(x (.) y).
    """

    def combined(dirs):
        if len(dirs) != p + q:
            raise ValueError("direction count mismatch")
        total = None
        for combo in combinations(range(p + q), p):
            rest = [i for i in range(p + q) if i not in combo]
            sign = (-1) ** (sum(combo) - (p * (p - 1)) // 2)
            term = sign * (values_a([dirs[i] for i in combo]) @ values_b([dirs[i] for i in rest]))
            total = term if total is None else total + term
        return total

    return combined


# -- zigzag evaluation -----------------------------------------------------------


def _zz_slots(mono):
    """Traversal entries with their column: 0=left end, 1..n, n+1=right end."""
    n = mono.n
    slots = [(mono.xL, 0)]
    for i in range(1, mono.k + 1):
        cells, end = mono.rows[i - 1]
        for q in range(1, n + 1):
            slots.append((cells[q - 1], q if i % 2 else n + 1 - q))
        slots.append((end, n + 1 if i % 2 else 0))
    return slots


def _check_chain_degree(chain, p, what):
    degs = {mono.shifted_degree() for _, mono in chain}
    if degs and degs != {p}:
        raise ValueError(f"{what}: chain shifted degree {degs} != len(dirs) {p}")


def it_zz(chain, fam, spec, u0, dirs):
    """Evaluate the zigzag iterated integral at u0 against parameter dirs."""
    u0 = tuple(u0)
    dirs = [tuple(d) for d in dirs]
    p = len(dirs)
    _check_chain_degree(chain, p, "it_zz")
    msize = None
    total = None
    for coeff, mono in chain:
        msize = getattr(mono.xL, "msize", 1)
        val = _it_zz_monomial(mono, fam, spec, u0, dirs)
        total = float(coeff) * val if total is None else total + float(coeff) * val
    if total is None:
        total = np.zeros((1, 1)) if msize is None else np.zeros((msize, msize))
    return total


def _it_zz_monomial(mono, fam, spec, u0, dirs):
    n = mono.n
    p = len(dirs)
    slots = _zz_slots(mono)
    msize = mono.xL.msize
    full = tuple(range(n + p))
    acc = np.zeros((msize, msize))
    dir_rows_cache = {}

    def dir_rows(t):
        if t not in dir_rows_cache:
            dir_rows_cache[t] = [
                (n + a, fam.du(u0, t, dirs[a])) for a in range(p)
            ]
        return dir_rows_cache[t]

    for ts, weight in simplex_nodes(n, spec.points_per_axis):
        value = None
        for entry, col in slots:
            if col == 0:
                t = 0.0
            elif col == n + 1:
                t = 1.0
            else:
                t = ts[col - 1]
            rows = []
            if 1 <= col <= n:
                rows.append((col - 1, fam.velocity(u0, t)))
            rows.extend(dir_rows(t))
            pv = pullback_values(entry.form(), fam.point(u0, t), rows)
            value = pv if value is None else wedge_values(value, pv)
            if not value:
                break
        if value:
            term = value.get(full)
            if term is not None:
                acc = acc + weight * term
        dir_rows_cache.clear()
    return acc


def it_zz_callable(chain, fam, spec):
    """(u0, dirs) -> value; convenience for residual computations."""

    def ev(u0, dirs):
        return it_zz(chain, fam, spec, u0, dirs)

    return ev


# -- interval evaluation ---------------------------------------------------------


def it_interval(chain, fam, spec, u0, dirs):
    """Iterated integral on the interval Hochschild complex."""
    u0 = tuple(u0)
    dirs = [tuple(d) for d in dirs]
    p = len(dirs)
    _check_chain_degree(chain, p, "it_interval")
    total = None
    for coeff, mono in chain:
        n = mono.n
        msize = mono.slots[0].msize
        full = tuple(range(n + p))
        acc = np.zeros((msize, msize))
        for ts, weight in simplex_nodes(n, spec.points_per_axis):
            value = None
            for i, entry in enumerate(mono.slots):
                if i == 0:
                    t = 0.0
                elif i == n + 1:
                    t = 1.0
                else:
                    t = ts[i - 1]
                rows = []
                if 1 <= i <= n:
                    rows.append((i - 1, fam.velocity(u0, t)))
                rows.extend((n + a, fam.du(u0, t, dirs[a])) for a in range(p))
                pv = pullback_values(entry.form(), fam.point(u0, t), rows)
                value = pv if value is None else wedge_values(value, pv)
                if not value:
                    break
            if value:
                term = value.get(full)
                if term is not None:
                    acc = acc + weight * term
        total = float(coeff) * acc if total is None else total + float(coeff) * acc
    if total is None:
        total = np.zeros((1, 1))
    return total


# -- rectangular evaluation ------------------------------------------------------


def _rect_slots(mono):
    """(entry, column, level) with column as in _zz_slots and level 0..m+1."""
    out = []
    for j, blk in enumerate(mono.blocks):
        n = mono.ncols
        out.append((blk.xL, 0, j))
        for i in range(1, blk.k + 1):
            cells, end = blk.rows[i - 1]
            for q in range(1, n + 1):
                out.append((cells[q - 1], q if i % 2 else n + 1 - q, j))
            out.append((end, n + 1 if i % 2 else 0, j))
    return out


def it_rect(chain, fam, spec, u0, dirs):
    """2-d iterated integral over the product of ordered simplices."""
    u0 = tuple(u0)
    dirs = [tuple(d) for d in dirs]
    p = len(dirs)
    _check_chain_degree(chain, p, "it_rect")
    total = None
    for coeff, mono in chain:
        val = _it_rect_monomial(mono, fam, spec, u0, dirs)
        total = float(coeff) * val if total is None else total + float(coeff) * val
    if total is None:
        total = np.zeros((1, 1))
    return total


def _it_rect_monomial(mono, fam, spec, u0, dirs):
    n, m = mono.ncols, mono.m
    p = len(dirs)
    slots = _rect_slots(mono)
    msize = mono.blocks[0].xL.msize
    full = tuple(range(n + m + p))
    acc = np.zeros((msize, msize))
    g = spec.points_per_axis
    for ss, ws in simplex_nodes(m, g):
        levels = (0.0,) + ss + (1.0,)
        for ts, wt in simplex_nodes(n, g):
            value = None
            for entry, col, j in slots:
                s = levels[j]
                if col == 0:
                    t = 0.0
                elif col == n + 1:
                    t = 1.0
                else:
                    t = ts[col - 1]
                rows = []
                if 1 <= col <= n:
                    rows.append((col - 1, fam.dt(u0, t, s)))
                if 1 <= j <= m:
                    rows.append((n + j - 1, fam.ds(u0, t, s)))
                rows.extend(
                    (n + m + a, fam.du(u0, t, s, dirs[a])) for a in range(p)
                )
                pv = pullback_values(entry.form(), fam.point(u0, t, s), rows)
                value = pv if value is None else wedge_values(value, pv)
                if not value:
                    break
            if value:
                term = value.get(full)
                if term is not None:
                    acc = acc + ws * wt * term
    return acc


# -- de Rham differential on the parameter box ------------------------------------


def d_param(g, u0, dirs, h):
    """Finite-difference exterior derivative of an evaluated form.

    g(u, dirs_subset) evaluates the p-form; the returned value pairs the
    (p+1)-form dg with `dirs` using central differences, O(h^2).
    """
    if h <= 0:
        raise ValueError("h must be positive")
    u0 = np.asarray(u0, dtype=float)
    total = None
    for a in range(len(dirs)):
        rest = [dirs[b] for b in range(len(dirs)) if b != a]
        shift = h * np.asarray(dirs[a], dtype=float)
        diff = (g(u0 + shift, rest) - g(u0 - shift, rest)) / (2.0 * h)
        term = ((-1) ** a) * diff
        total = term if total is None else total + term
    return total


def chain_map_residual(chain, fam, spec, samples):
    """max over samples of || d_param(It(c)) - It(zz_D(c)) ||_inf."""
    Dc = zz_D(chain)
    worst = 0.0
    for u0, dirs in samples:
        lhs = d_param(
            lambda u, sub: it_zz(chain, fam, spec, u, sub), u0, dirs, spec.fd_step
        )
        rhs = it_zz(Dc, fam, spec, u0, dirs)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))) if lhs is not None else 0.0)
    return worst


def algebra_map_residual(x, y, fam, spec, samples):
    """max over samples of || It(x (.) y) - It(x) ^ It(y) ||_inf."""
    from .zigzag import zz_shuffle

    prod = zz_shuffle(x, y)
    px = {mono.shifted_degree() for _, mono in x}
    py = {mono.shifted_degree() for _, mono in y}
    p = px.pop() if px else 0
    q = py.pop() if py else 0
    worst = 0.0
    for u0, dirs in samples:
        lhs = it_zz(prod, fam, spec, u0, dirs)
        wedge_fn = value_wedge(
            lambda sub: it_zz(x, fam, spec, u0, sub),
            p,
            lambda sub: it_zz(y, fam, spec, u0, sub),
            q,
        )
        rhs = wedge_fn(dirs)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
