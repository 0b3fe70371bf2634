"""Shared test helpers: random graded modules/maps and a brute-force oracle.

The oracle works degree by degree with dense linear algebra over the exact
coefficient field and never touches the Groebner engine, so it can serve as
an independent check of normal forms, syzygies and Hilbert data.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from stablehom.fmod import (
    FreeMap,
    FreeModule,
    ModMap,
    Presentation,
    hom_generators,
    presentation_from_matrix,
)
from stablehom.poly import Poly, mono_mul
from stablehom.ring import RingCtx

# ---------------------------------------------------------------------------
# brute-force linear algebra oracle
# ---------------------------------------------------------------------------


def monomials_of_degree(ctx: RingCtx, d: int):
    """All exponent tuples of weighted degree d."""
    n = ctx.nvars
    w = ctx.weights
    out = []

    def rec(i, rem, acc):
        if i == n - 1:
            if rem % w[i] == 0:
                out.append(tuple(acc + [rem // w[i]]))
            return
        for e in range(rem // w[i] + 1):
            rec(i + 1, rem - e * w[i], acc + [e])

    if d < 0:
        return []
    rec(0, d, [])
    return out


def _rref(rows, field):
    """Row-reduce a list of coefficient lists in place; returns pivot count."""
    if not rows:
        return 0, rows
    ncols = len(rows[0])
    mat = [list(r) for r in rows]
    pivots = 0
    col = 0
    for col in range(ncols):
        piv = None
        for r in range(pivots, len(mat)):
            if not field.is_zero(mat[r][col]):
                piv = r
                break
        if piv is None:
            continue
        mat[pivots], mat[piv] = mat[piv], mat[pivots]
        inv = field.inv(mat[pivots][col])
        mat[pivots] = [field.mul(v, inv) for v in mat[pivots]]
        for r in range(len(mat)):
            if r != pivots and not field.is_zero(mat[r][col]):
                c = mat[r][col]
                mat[r] = [field.sub(a, field.mul(c, b)) for a, b in zip(mat[r], mat[pivots])]
        pivots += 1
        if pivots == len(mat):
            break
    return pivots, mat


def free_basis(ctx: RingCtx, twists, d: int):
    """Basis terms (pos, mono) of the degree-d piece of the free module."""
    out = []
    for p, t in enumerate(twists):
        for m in monomials_of_degree(ctx, d - t):
            out.append((p, m))
    return out


def span_dim(ctx: RingCtx, twists, vectors, d: int) -> int:
    """dim_k of the degree-d piece of  <vectors>_R + I*F  inside F_d (over P)."""
    basis = free_basis(ctx, twists, d)
    index = {t: i for i, t in enumerate(basis)}
    rows = []

    def add_vec(vec):
        row = [ctx.field.from_int(0)] * len(basis)
        for (p, m), c in vec.items():
            row[index[(p, m)]] = ctx.field.add(row[index[(p, m)]], c)
        rows.append(row)

    for vec in vectors:
        if not vec:
            continue
        vdeg = None
        for (p, m), _c in vec.items():
            vdeg = ctx.order.degree(m) + twists[p]
            break
        rem = d - vdeg
        if rem < 0:
            continue
        for mono in monomials_of_degree(ctx, rem):
            add_vec({(p, mono_mul(m, mono)): c for (p, m), c in vec.items()})
    for g in ctx.ideal:
        gdeg = ctx.poly_degree(g)
        for p, t in enumerate(twists):
            rem = d - t - gdeg
            for mono in monomials_of_degree(ctx, rem) if rem >= 0 else []:
                add_vec({(p, mono_mul(m, mono)): c for m, c in g.terms.items()})
    pivots, _ = _rref(rows, ctx.field)
    return pivots


def quotient_dim(ctx: RingCtx, twists, vectors, d: int) -> int:
    """dim_k of (F/(vectors + I*F))_d."""
    total = len(free_basis(ctx, twists, d))
    return total - span_dim(ctx, twists, vectors, d)


def module_hilbert(P: Presentation, d: int) -> int:
    cols = [
        {(i, m): c for i, p in enumerate(P.pres.column(j)) for m, c in p.terms.items()}
        for j in range(P.pres.source.rank)
    ]
    return quotient_dim(P.ctx, P.gens.twists, cols, d)


def syzygy_dim_bruteforce(ctx: RingCtx, twists, columns, D: int) -> int:
    """dim_k of the degree-D piece of the syzygy module of ``columns`` over R.

    Solves the linear system sum_j a_j col_j = 0 in F/(I*F) with unknown
    homogeneous coefficient vectors of the appropriate degrees.
    """
    col_deg = []
    for col in columns:
        cdeg = None
        for (p, m), _c in col.items():
            cdeg = ctx.order.degree(m) + twists[p]
            break
        col_deg.append(cdeg)
    unknowns = []  # (j, mono)
    for j, cd in enumerate(col_deg):
        if cd is None:
            continue
        for mono in monomials_of_degree(ctx, D - cd):
            unknowns.append((j, mono))
    if not unknowns:
        return 0
    target_basis = free_basis(ctx, twists, D)
    tindex = {t: i for i, t in enumerate(target_basis)}
    # quotient by (I*F)_D: build a projector via rref of the ideal span
    ideal_rows = []
    for g in ctx.ideal:
        gdeg = ctx.poly_degree(g)
        for p, t in enumerate(twists):
            rem = D - t - gdeg
            for mono in monomials_of_degree(ctx, rem) if rem >= 0 else []:
                row = [ctx.field.from_int(0)] * len(target_basis)
                for m, c in g.terms.items():
                    row[tindex[(p, mono_mul(m, mono))]] = c
                ideal_rows.append(row)
    _p, ideal_rref = _rref(ideal_rows, ctx.field)
    ideal_rref = [r for r in ideal_rref if any(not ctx.field.is_zero(v) for v in r)]

    def reduce_row(row):
        row = list(row)
        for red in ideal_rref:
            lead = next(i for i, v in enumerate(red) if not ctx.field.is_zero(v))
            if not ctx.field.is_zero(row[lead]):
                c = row[lead]
                row = [ctx.field.sub(a, ctx.field.mul(c, b)) for a, b in zip(row, red)]
        return row

    # matrix of the evaluation map unknowns -> F_D / (I F)_D
    rows = []
    for (j, mono) in unknowns:
        row = [ctx.field.from_int(0)] * len(target_basis)
        for (p, m), c in columns[j].items():
            idx = tindex[(p, mono_mul(m, mono))]
            row[idx] = ctx.field.add(row[idx], c)
        rows.append(reduce_row(row))
    rank, _ = _rref(rows, ctx.field)
    # tuples with every coordinate inside the ideal are zero as R-syzygies
    ideal_part = 0
    for cd in col_deg:
        if cd is None:
            continue
        e = D - cd
        if e >= 0:
            ideal_part += span_dim(ctx, (0,), [], e)
    return len(unknowns) - rank - ideal_part


# ---------------------------------------------------------------------------
# randomized modules and maps
# ---------------------------------------------------------------------------


def random_homog_poly(ctx: RingCtx, deg: int, rng: random.Random, density=0.7) -> Poly:
    if deg < 0:
        return ctx.zero()
    monos = monomials_of_degree(ctx, deg)
    terms = {}
    for m in monos:
        if rng.random() < density:
            c = rng.choice([-2, -1, 1, 2])
            terms[m] = ctx.field.from_int(c)
    return ctx.reduce(Poly(ctx.field, ctx.nvars, terms))


def random_module(ctx: RingCtx, rng: random.Random) -> Presentation:
    ngen = rng.choice([1, 1, 2])
    twists = tuple(rng.choice([0, 0, 1]) for _ in range(ngen))
    nrel = rng.choice([1, 1, 2, 2, 3])
    cols = []
    for _ in range(nrel):
        cdeg = max(twists) + rng.choice([1, 1, 2])
        col = [random_homog_poly(ctx, cdeg - t, rng) for t in twists]
        cols.append(col)
    return presentation_from_matrix(ctx, twists, cols)


def scale_freemap_by_mono(h: FreeMap, mono, e: int) -> FreeMap:
    ctx = h.ctx
    rows = [[p.mul_term(mono, ctx.field.from_int(1)) for p in row] for row in h.rows]
    src = FreeModule(ctx, tuple(t + e for t in h.source.twists))
    return FreeMap(src, h.target, [[ctx.reduce(p) for p in row] for row in rows], check=False, reduce=False)


def random_map(A: Presentation, B: Presentation, rng: random.Random):
    """A random degree-0 map A.twist(d) -> B, or None when Hom is trivial."""
    gens = hom_generators(A, B)
    if not gens:
        return None
    ctx = A.ctx
    pool = list(gens)
    for h, d in gens:
        for i in range(ctx.nvars):
            mono = tuple(1 if j == i else 0 for j in range(ctx.nvars))
            pool.append((scale_freemap_by_mono(h, mono, ctx.weights[i]), d + ctx.weights[i]))
    degrees = sorted({d for _h, d in pool})
    d = rng.choice(degrees[: max(1, len(degrees) - 1)])
    bucket = [h for h, dd in pool if dd == d]
    src = A.twist(d)
    acc = None
    for h in bucket:
        c = rng.choice([0, 0, 1, 1, -1, 2])
        if c == 0:
            continue
        hm = FreeMap(src.gens, B.gens, [[p.scale(ctx.field.from_int(c)) for p in row] for row in h.rows], check=False, reduce=False)
        acc = hm if acc is None else acc.add(hm)
    if acc is None or acc.is_zero():
        h = rng.choice(bucket)
        acc = FreeMap(src.gens, B.gens, h.rows, check=False, reduce=False)
    return ModMap(src, B, acc, validate=True)
