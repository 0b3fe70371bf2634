"""Graded free modules, presented modules, and the functor toolbox.

Modules are always presented objects: a ``Presentation`` is the cokernel of a
homogeneous matrix between twisted free modules.  Minimal presentations,
minimal free resolutions, duals, transpose, syzygy modules and Ext are all
computed through the Groebner engine of the ambient ring context.

Twist convention: ``FreeModule.twists[i]`` is the degree of the i-th
generator, and entry (i, j) of a ``FreeMap`` is homogeneous of degree
``source.twists[j] - target.twists[i]`` (or zero).
"""

from __future__ import annotations

from .errors import IllDefinedMap, InhomogeneousEntry, RankMismatch, StablehomError
from .gb import vec_from_polys, vec_to_polys
from .poly import mono_mul
from .poly import Poly
from .ring import RingCtx


class FreeModule:
    __slots__ = ("ctx", "twists")

    def __init__(self, ctx: RingCtx, twists):
        self.ctx = ctx
        self.twists = tuple(twists)

    @property
    def rank(self) -> int:
        return len(self.twists)

    def dual(self) -> "FreeModule":
        return FreeModule(self.ctx, tuple(-t for t in self.twists))

    def shift(self, d: int) -> "FreeModule":
        return FreeModule(self.ctx, tuple(t + d for t in self.twists))

    def __eq__(self, other):
        return isinstance(other, FreeModule) and self.ctx is other.ctx and self.twists == other.twists

    def __hash__(self):
        return hash((id(self.ctx), self.twists))

    def __repr__(self):
        return f"F{list(self.twists)}"


class FreeMap:
    """Homogeneous map of free modules, entries reduced modulo the ring ideal."""

    __slots__ = ("source", "target", "rows")

    def __init__(self, source: FreeModule, target: FreeModule, rows, check: bool = True, reduce: bool = True):
        self.source = source
        self.target = target
        ctx = source.ctx
        if ctx is not target.ctx:
            raise StablehomError("free modules over different rings")
        mat = []
        for i in range(target.rank):
            row = list(rows[i]) if i < len(rows) else []
            if len(row) != source.rank:
                raise RankMismatch(
                    f"row {i} has {len(row)} entries, expected {source.rank}"
                )
            if reduce:
                row = [ctx.reduce(p) for p in row]
            mat.append(tuple(row))
        if len(rows) != target.rank:
            raise RankMismatch(f"{len(rows)} rows, expected {target.rank}")
        self.rows = tuple(mat)
        if check:
            self._check_degrees()

    def _check_degrees(self) -> None:
        ctx = self.source.ctx
        for i in range(self.target.rank):
            for j in range(self.source.rank):
                p = self.rows[i][j]
                if p.is_zero:
                    continue
                want = self.source.twists[j] - self.target.twists[i]
                if not ctx.is_homogeneous(p) or ctx.poly_degree(p) != want:
                    raise InhomogeneousEntry(
                        f"entry ({i},{j}) must be homogeneous of degree {want}",
                        row=i,
                        col=j,
                    )

    @property
    def ctx(self) -> RingCtx:
        return self.source.ctx

    def entry(self, i: int, j: int) -> Poly:
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [self.rows[i][j] for i in range(self.target.rank)]

    def columns_vec(self) -> list:
        return [vec_from_polys(self.column(j), self.target.rank) for j in range(self.source.rank)]

    def row(self, i: int) -> list:
        return list(self.rows[i])

    def is_zero(self) -> bool:
        return all(p.is_zero for row in self.rows for p in row)

    def dual(self) -> "FreeMap":
        rows = [
            [self.rows[i][j] for i in range(self.target.rank)]
            for j in range(self.source.rank)
        ]
        return FreeMap(self.target.dual(), self.source.dual(), rows, check=False, reduce=False)

    def shift(self, d: int) -> "FreeMap":
        return FreeMap(self.source.shift(d), self.target.shift(d), self.rows, check=False, reduce=False)

    def neg(self) -> "FreeMap":
        return FreeMap(self.source, self.target, [[-p for p in row] for row in self.rows], check=False, reduce=False)

    def add(self, other: "FreeMap") -> "FreeMap":
        if self.source != other.source or self.target != other.target:
            raise RankMismatch("shape mismatch in map sum")
        rows = [
            [self.rows[i][j] + other.rows[i][j] for j in range(self.source.rank)]
            for i in range(self.target.rank)
        ]
        return FreeMap(self.source, self.target, rows, check=False, reduce=False)

    def sub(self, other: "FreeMap") -> "FreeMap":
        return self.add(other.neg())

    def key(self) -> tuple:
        return (
            self.source.twists,
            self.target.twists,
            tuple(tuple(p.key() for p in row) for row in self.rows),
        )

    def __repr__(self):
        ctx = self.ctx
        body = "; ".join(
            ", ".join(ctx.show(p) for p in row) for row in self.rows
        )
        return f"[{body}]"


def identity_map(F: FreeModule) -> FreeMap:
    ctx = F.ctx
    one = ctx.one()
    zero = ctx.zero()
    rows = [[one if i == j else zero for j in range(F.rank)] for i in range(F.rank)]
    return FreeMap(F, F, rows, check=False, reduce=False)


def zero_map(source: FreeModule, target: FreeModule) -> FreeMap:
    z = source.ctx.zero()
    rows = [[z] * source.rank for _ in range(target.rank)]
    return FreeMap(source, target, rows, check=False, reduce=False)


def compose(g: FreeMap, f: FreeMap) -> FreeMap:
    """g o f for f: A -> B, g: B -> C."""
    if f.target != g.source:
        raise RankMismatch("composition shape mismatch")
    ctx = f.ctx
    zero = ctx.zero()
    rows = []
    for i in range(g.target.rank):
        row = []
        for j in range(f.source.rank):
            acc = zero
            for k in range(g.source.rank):
                gik = g.rows[i][k]
                fkj = f.rows[k][j]
                if gik.is_zero or fkj.is_zero:
                    continue
                acc = acc + gik * fkj
            row.append(ctx.reduce(acc))
        rows.append(row)
    return FreeMap(f.source, g.target, rows, check=False, reduce=False)


def hstack(a: FreeMap, b: FreeMap) -> FreeMap:
    """[a | b] : A + B -> C for maps with a common target."""
    if a.target != b.target:
        raise RankMismatch("hstack target mismatch")
    src = FreeModule(a.ctx, a.source.twists + b.source.twists)
    rows = [list(a.rows[i]) + list(b.rows[i]) for i in range(a.target.rank)]
    return FreeMap(src, a.target, rows, check=False, reduce=False)


def vstack(a: FreeMap, b: FreeMap) -> FreeMap:
    """[a ; b] : A -> C + D for maps with a common source."""
    if a.source != b.source:
        raise RankMismatch("vstack source mismatch")
    tgt = FreeModule(a.ctx, a.target.twists + b.target.twists)
    rows = [list(r) for r in a.rows] + [list(r) for r in b.rows]
    return FreeMap(a.source, tgt, rows, check=False, reduce=False)


def block_map(blocks, source: FreeModule, target: FreeModule) -> FreeMap:
    """Assemble from a 2D grid of optional FreeMaps (None = zero block)."""
    ctx = source.ctx
    zero = ctx.zero()
    rows = [[zero] * source.rank for _ in range(target.rank)]
    roff = 0
    for brow in blocks:
        rheight = None
        coff = 0
        for blk in brow:
            if blk is None:
                raise StablehomError("block grid requires explicit shapes; use maps")
            for i in range(blk.target.rank):
                for j in range(blk.source.rank):
                    rows[roff + i][coff + j] = blk.rows[i][j]
            rheight = blk.target.rank
            coff += blk.source.rank
        roff += rheight
    return FreeMap(source, target, rows, check=False, reduce=False)


# ---------------------------------------------------------------------------
# Presented modules
# ---------------------------------------------------------------------------


class Presentation:
    """A finitely presented graded module: the cokernel of ``pres``."""

    __slots__ = ("pres", "minimal", "_key")

    def __init__(self, pres: FreeMap, minimal: bool = False):
        self.pres = pres
        self.minimal = minimal
        self._key = None

    @property
    def ctx(self) -> RingCtx:
        return self.pres.ctx

    @property
    def gens(self) -> FreeModule:
        return self.pres.target

    @property
    def rank0(self) -> int:
        return self.pres.target.rank

    def key(self) -> tuple:
        if self._key is None:
            self._key = self.pres.key()
        return self._key

    def twist(self, d: int) -> "Presentation":
        return Presentation(self.pres.shift(d), minimal=self.minimal)

    def entries_in_irrelevant_ideal(self) -> bool:
        f = self.ctx.field
        for row in self.pres.rows:
            for p in row:
                if not f.is_zero(p.constant_coeff()):
                    return False
        return True

    def __repr__(self):
        return f"coker{self.pres!r}"


def free_presentation(ctx: RingCtx, twists) -> Presentation:
    F = FreeModule(ctx, twists)
    return Presentation(FreeMap(FreeModule(ctx, ()), F, [[] for _ in range(F.rank)], check=False, reduce=False), minimal=True)


def zero_presentation(ctx: RingCtx) -> Presentation:
    return free_presentation(ctx, ())


def presentation_from_matrix(ctx, gen_twists, rel_columns) -> Presentation:
    """rel_columns: list of relation vectors (length = #gens) of Polys."""
    rels = list(rel_columns)
    gens = FreeModule(ctx, gen_twists)
    col_twists = []
    for col in rels:
        deg = None
        for i, p in enumerate(col):
            if p.is_zero:
                continue
            d = ctx.poly_degree(p) + gen_twists[i]
            deg = d if deg is None else deg
        col_twists.append(deg if deg is not None else 0)
    src = FreeModule(ctx, col_twists)
    rows = [[rels[j][i] for j in range(len(rels))] for i in range(gens.rank)]
    return Presentation(FreeMap(src, gens, rows))


# ---------------------------------------------------------------------------
# Minimization and minimal generators
# ---------------------------------------------------------------------------


class MinimizeResult:
    """Minimal presentation plus base-change data.

    ``to_min`` expresses old generators in the surviving ones; ``from_min``
    is the section picking the survivors.  to_min o from_min = id exactly.
    """

    __slots__ = ("presentation", "to_min", "from_min", "syzygy_candidates")

    def __init__(self, presentation, to_min, from_min, syzygy_candidates):
        self.presentation = presentation
        self.to_min = to_min
        self.from_min = from_min
        self.syzygy_candidates = syzygy_candidates


def _reduce_vec(ctx: RingCtx, vec: dict) -> dict:
    by_pos: dict = {}
    for (p, m), c in vec.items():
        by_pos.setdefault(p, {})[m] = c
    out = {}
    for p, terms in by_pos.items():
        red = ctx.reduce(Poly(ctx.field, ctx.nvars, terms))
        for m, c in red.terms.items():
            out[(p, m)] = c
    return out


def _vec_coord(ctx: RingCtx, vec: dict, pos: int) -> Poly:
    terms = {m: c for (p, m), c in vec.items() if p == pos}
    return Poly(ctx.field, ctx.nvars, terms)


def _vec_sub_polymult(ctx: RingCtx, a: dict, q: Poly, b: dict) -> dict:
    """a - q * b over the free module, reduced mod I."""
    field = ctx.field
    out = dict(a)
    for (p, m), c in b.items():
        for mq, cq in q.terms.items():
            t = (p, mono_mul(m, mq))
            val = field.mul(c, cq)
            cur = out.get(t)
            if cur is None:
                out[t] = field.neg(val)
            else:
                s = field.sub(cur, val)
                if field.is_zero(s):
                    del out[t]
                else:
                    out[t] = s
    return _reduce_vec(ctx, out)


def minimal_generators(ctx: RingCtx, twists, vectors):
    """Prune a homogeneous generating set to a minimal one.

    Returns (kept_indices, kept_vectors, next_candidates) where
    next_candidates generate the syzygies of the kept vectors (coordinates
    indexed by kept order).  One Groebner run; redundant generators are
    eliminated through unit entries of the syzygies.
    """
    vecs = [_reduce_vec(ctx, v) for v in vectors]
    alive = [j for j, v in enumerate(vecs) if v]
    zero_mono = (0,) * ctx.nvars
    live_vecs = [vecs[j] for j in alive]
    eng = ctx.engine(twists, live_vecs)
    Z = [_reduce_vec(ctx, z) for z in eng.syzygies()]
    # positions in Z refer to live_vecs indices
    pos_alive = list(range(len(live_vecs)))
    while True:
        hit = None
        for zi, z in enumerate(Z):
            for p in pos_alive:
                c = z.get((p, zero_mono))
                if c is not None and not ctx.field.is_zero(c):
                    hit = (zi, p, c)
                    break
            if hit:
                break
        if hit is None:
            break
        zi, p, u = hit
        z = Z.pop(zi)
        uinv = ctx.field.inv(u)
        newZ = []
        for z2 in Z:
            coord = _vec_coord(ctx, z2, p)
            if not coord.is_zero:
                z2 = _vec_sub_polymult(ctx, z2, coord.scale(uinv), z)
            z2 = {t: c for t, c in z2.items() if t[0] != p}
            if z2:
                newZ.append(z2)
        Z = newZ
        pos_alive.remove(p)
    kept = [alive[p] for p in pos_alive]
    kept_vecs = [vecs[j] for j in kept]
    # reindex syzygy coordinates to kept order
    remap = {p: i for i, p in enumerate(pos_alive)}
    nextZ = [{(remap[p], m): c for (p, m), c in z.items()} for z in Z]
    return kept, kept_vecs, nextZ


def minimize(P: Presentation) -> MinimizeResult:
    """Minimal presentation of an isomorphic module, with base change.

    Unit entries are eliminated by row/column operations, zero and redundant
    relation columns are dropped; the result has all entries in the
    irrelevant ideal and relations that minimally generate.
    """
    ctx = P.ctx
    cached = ctx._minimize_cache.get(P.key())
    if cached is not None:
        return cached
    field = ctx.field
    mat = [[ctx.reduce(p) for p in row] for row in P.pres.rows]
    gen_tw = list(P.gens.twists)
    col_tw = list(P.pres.source.twists)
    old_rank = len(gen_tw)
    old_twists = tuple(gen_tw)
    surv = list(range(old_rank))
    E = [[ctx.one() if i == j else ctx.zero() for j in range(old_rank)] for i in range(old_rank)]

    while True:
        unit = None
        for i in range(len(gen_tw)):
            for j in range(len(col_tw)):
                p = mat[i][j]
                if not p.is_zero and p.is_constant():
                    unit = (i, j, p.constant_coeff())
                    break
            if unit:
                break
        if unit is None:
            break
        i, j, u = unit
        uinv = field.inv(u)
        piv_col = [mat[k][j] for k in range(len(gen_tw))]
        for j2 in range(len(col_tw)):
            if j2 == j:
                continue
            factor = mat[i][j2].scale(uinv)
            if factor.is_zero:
                continue
            for k in range(len(gen_tw)):
                if k == i:
                    continue
                mat[k][j2] = ctx.reduce(mat[k][j2] - factor * piv_col[k])
        for c in range(old_rank):
            coeff = E[i][c]
            if coeff.is_zero:
                continue
            scaled = coeff.scale(field.neg(uinv))
            for k in range(len(gen_tw)):
                if k == i:
                    continue
                E[k][c] = ctx.reduce(E[k][c] + scaled * piv_col[k])
        del mat[i]
        del E[i]
        del gen_tw[i]
        del surv[i]
        for row in mat:
            del row[j]
        del col_tw[j]

    gens = FreeModule(ctx, gen_tw)
    columns = [
        vec_from_polys([mat[i][j] for i in range(len(gen_tw))], len(gen_tw))
        for j in range(len(col_tw))
    ]
    kept_cols, kept_vecs, nextZ = minimal_generators(ctx, tuple(gen_tw), columns)
    new_col_tw = [col_tw[j] for j in kept_cols]
    src = FreeModule(ctx, new_col_tw)
    rows = [[ctx.zero()] * len(kept_cols) for _ in range(len(gen_tw))]
    for jj, vec in enumerate(kept_vecs):
        for (p, m), c in vec.items():
            rows[p][jj] = rows[p][jj] + Poly(field, ctx.nvars, {m: c})
    pres = Presentation(FreeMap(src, gens, rows, check=False, reduce=False), minimal=True)

    old_free = FreeModule(ctx, old_twists)
    to_min = FreeMap(old_free, gens, E, check=False, reduce=False)
    sect = [[ctx.one() if surv[j] == i else ctx.zero() for j in range(len(gen_tw))] for i in range(old_rank)]
    from_min = FreeMap(gens, old_free, sect, check=False, reduce=False)
    result = MinimizeResult(pres, to_min, from_min, nextZ)
    ctx._minimize_cache[P.key()] = result
    return result


def is_zero_module(P: Presentation) -> bool:
    return minimize(P).presentation.rank0 == 0


# ---------------------------------------------------------------------------
# Minimal free resolutions
# ---------------------------------------------------------------------------


class ResolutionChain:
    """Incrementally extended minimal free resolution of a module."""

    def __init__(self, ctx: RingCtx, mres: MinimizeResult):
        self.ctx = ctx
        self.min = mres
        P = mres.presentation
        self.terms = [P.gens, P.pres.source]
        self.diffs = [P.pres]  # diffs[k] : F^{-(k+1)} -> F^{-k}
        self._candidates = mres.syzygy_candidates

    def extend_to(self, length: int) -> None:
        while len(self.diffs) < length:
            self._step()

    def _step(self) -> None:
        ctx = self.ctx
        last = self.diffs[-1]
        src = last.source
        if self._candidates is None:
            cands = [_reduce_vec(ctx, z) for z in ctx.engine_for_matrix(last).syzygies()]
        else:
            cands = self._candidates
        kept, kept_vecs, nextZ = minimal_generators(ctx, src.twists, cands)
        col_tw = []
        for vec in kept_vecs:
            d = None
            for (p, m), _c in vec.items():
                d = ctx.order.degree(m) + src.twists[p]
                break
            col_tw.append(d if d is not None else 0)
        new_src = FreeModule(ctx, col_tw)
        rows = [[ctx.zero()] * len(kept_vecs) for _ in range(src.rank)]
        for jj, vec in enumerate(kept_vecs):
            for (p, m), c in vec.items():
                rows[p][jj] = rows[p][jj] + Poly(ctx.field, ctx.nvars, {m: c})
        d = FreeMap(new_src, src, rows, check=False, reduce=False)
        self.diffs.append(d)
        self.terms.append(new_src)
        self._candidates = nextZ

    def term(self, k: int) -> FreeModule:
        """F^{-k}."""
        return self.terms[k]

    def diff(self, k: int) -> FreeMap:
        """d^{-k} : F^{-k} -> F^{-k+1}, k >= 1."""
        return self.diffs[k - 1]


def resolution_chain(P: Presentation, length: int) -> ResolutionChain:
    ctx = P.ctx
    mres = minimize(P)
    key = mres.presentation.key()
    chain = ctx._resolution_cache.get(key)
    if chain is None:
        chain = ResolutionChain(ctx, mres)
        ctx._resolution_cache[key] = chain
    chain.extend_to(max(length, 1))
    return chain


def resolve(P: Presentation, length: int):
    """Minimal free resolution as a Complex on window [-length, 0]."""
    from .complexes import Complex

    chain = resolution_chain(P, max(length, 1))
    terms = {}
    diffs = {}
    for k in range(length + 1):
        terms[-k] = chain.term(k)
    for k in range(1, length + 1):
        diffs[-k] = chain.diff(k)
    return Complex(P.ctx, -length, 0, terms, diffs, zero_above=True)


def betti_table(P: Presentation, length: int) -> list:
    """[(homological degree, internal degree, rank)] of the minimal resolution."""
    chain = resolution_chain(P, max(length, 1))
    out = []
    for k in range(length + 1):
        tw = chain.term(k).twists
        counts: dict = {}
        for t in tw:
            counts[t] = counts.get(t, 0) + 1
        for t in sorted(counts):
            out.append((k, t, counts[t]))
    return out


# ---------------------------------------------------------------------------
# Duals, transpose, syzygies, Ext
# ---------------------------------------------------------------------------


def dual_map(f: FreeMap) -> FreeMap:
    return f.dual()


def transpose(P: Presentation) -> Presentation:
    """Cokernel of the dual of a minimal presentation, returned minimal."""
    mres = minimize(P)
    tr = Presentation(mres.presentation.pres.dual())
    return minimize(tr).presentation


def syzygy(P: Presentation, n: int) -> Presentation:
    """The n-th syzygy module, presented by (n+1)-st resolution differential."""
    if n < 0:
        raise StablehomError("syzygy index must be non-negative")
    if n == 0:
        return minimize(P).presentation
    chain = resolution_chain(P, n + 1)
    return Presentation(chain.diff(n + 1), minimal=True)


# ---------------------------------------------------------------------------
# Subquotients (kernels, homology, Ext)
# ---------------------------------------------------------------------------


class Subquotient:
    """A subquotient <gens>/<modded> of a free module, as a Presentation.

    Keeps the ambient data needed to express ambient vectors in the
    presented generators.
    """

    __slots__ = ("ctx", "ambient", "pres", "gen_vectors", "_raw_gens", "_modded", "_to_min")

    def __init__(self, ctx, ambient, pres, gen_vectors, raw_gens, modded, to_min):
        self.ctx = ctx
        self.ambient = ambient
        self.pres = pres
        self.gen_vectors = gen_vectors
        self._raw_gens = raw_gens
        self._modded = modded
        self._to_min = to_min

    def express(self, vec: dict):
        """Coefficients over pres generators for an ambient vector, or None."""
        eng = self.ctx.engine(self.ambient.twists, self._raw_gens + self._modded)
        lift = eng.lift(_reduce_vec(self.ctx, vec))
        if lift is None:
            return None
        raw = [self.ctx.reduce(p) for p in lift[: len(self._raw_gens)]]
        out = []
        for i in range(self._to_min.target.rank):
            acc = self.ctx.zero()
            for j, c in enumerate(raw):
                if not c.is_zero and not self._to_min.rows[i][j].is_zero:
                    acc = acc + self._to_min.rows[i][j] * c
            out.append(self.ctx.reduce(acc))
        return out


def subquotient(ctx: RingCtx, ambient: FreeModule, sub_gens, modded) -> Subquotient:
    """Present <sub_gens>/<modded>; requires modded inside <sub_gens>."""
    raw = [v for v in (_reduce_vec(ctx, v) for v in sub_gens) if v]
    mod = [v for v in (_reduce_vec(ctx, v) for v in modded) if v]
    gen_tw = []
    for v in raw:
        (p, m) = next(iter(v))
        gen_tw.append(ctx.order.degree(m) + ambient.twists[p])
    eng = ctx.engine(ambient.twists, raw + mod)
    rels = []
    for z in eng.syzygies():
        z = _reduce_vec(ctx, z)
        col = {}
        for (p, m), c in z.items():
            if p < len(raw):
                col[(p, m)] = c
        rels.append(col)
    cols = []
    col_tw = []
    for z in rels:
        if not z:
            continue
        cols.append(z)
        (p, m) = next(iter(z))
        col_tw.append(ctx.order.degree(m) + gen_tw[p])
    gens = FreeModule(ctx, gen_tw)
    rows = [[ctx.zero()] * len(cols) for _ in range(len(raw))]
    for jj, vec in enumerate(cols):
        for (p, m), c in vec.items():
            rows[p][jj] = rows[p][jj] + Poly(ctx.field, ctx.nvars, {m: c})
    pres0 = Presentation(FreeMap(FreeModule(ctx, col_tw), gens, rows, check=False, reduce=False))
    mres = minimize(pres0)
    # surviving generators of the minimized presentation, as ambient vectors
    kept_vectors = []
    for j in range(mres.presentation.rank0):
        col = mres.from_min.column(j)
        acc: dict = {}
        for i, c in enumerate(col):
            if c.is_zero:
                continue
            for t, cv in raw[i].items():
                for mq, cq in c.terms.items():
                    tt = (t[0], mono_mul(t[1], mq))
                    cur = acc.get(tt)
                    val = ctx.field.mul(cv, cq)
                    if cur is None:
                        acc[tt] = val
                    else:
                        s = ctx.field.add(cur, val)
                        if ctx.field.is_zero(s):
                            del acc[tt]
                        else:
                            acc[tt] = s
        kept_vectors.append(_reduce_vec(ctx, acc))
    return Subquotient(ctx, ambient, mres.presentation, kept_vectors, raw, mod, mres.to_min)


def kernel_of_freemap(d: FreeMap) -> Subquotient:
    """ker(d) as a presented submodule of d.source."""
    ctx = d.ctx
    cands = [_reduce_vec(ctx, z) for z in ctx.engine_for_matrix(d).syzygies()]
    return subquotient(ctx, d.source, cands, [])


class ExtResult:
    __slots__ = ("index", "presentation")

    def __init__(self, index: int, presentation: Presentation):
        self.index = index
        self.presentation = presentation


def ext(P: Presentation, i: int) -> ExtResult:
    """Ext^i(M, R) as cohomology of the dualized minimal resolution."""
    if i < 0:
        raise StablehomError("ext index must be non-negative")
    chain = resolution_chain(P, i + 1)
    d_in = chain.diff(i + 1).dual()  # (F^{-i})* -> (F^{-i-1})*
    ctx = P.ctx
    cands = [_reduce_vec(ctx, z) for z in ctx.engine_for_matrix(d_in).syzygies()]
    modded = []
    if i >= 1:
        d_prev = chain.diff(i).dual()  # (F^{-i+1})* -> (F^{-i})*
        modded = d_prev.columns_vec()
    sq = subquotient(ctx, d_in.source, cands, modded)
    return ExtResult(i, sq.pres)


class DualModule:
    """M* = Hom(M, R) presented as a kernel, with evaluation data."""

    __slots__ = ("base", "sq")

    def __init__(self, base: Presentation, sq: Subquotient):
        self.base = base
        self.sq = sq

    @property
    def pres(self) -> Presentation:
        return self.sq.pres


def dual_module(P: Presentation) -> DualModule:
    return DualModule(P, kernel_of_freemap(P.pres.dual()))


# ---------------------------------------------------------------------------
# Module maps
# ---------------------------------------------------------------------------


class ModMap:
    """Degree-0 map of presented modules, given on generators."""

    __slots__ = ("source", "target", "mat", "certificate")

    def __init__(self, source: Presentation, target: Presentation, mat: FreeMap, validate: bool = True):
        if mat.source != source.gens or mat.target != target.gens:
            raise RankMismatch("generator matrix shape does not match presentations")
        self.source = source
        self.target = target
        self.mat = mat
        self.certificate = None
        if validate:
            self.certificate = validate_map(self)

    @property
    def ctx(self) -> RingCtx:
        return self.source.ctx

    def is_zero_morphism(self) -> bool:
        eng = self.ctx.engine_for_matrix(self.target.pres)
        return all(eng.contains(vec) for vec in self.mat.columns_vec())

    def __repr__(self):
        return f"ModMap{self.mat!r}"


def validate_map(f: ModMap):
    """Certify that the generator matrix carries source relations into target
    relations; raises IllDefinedMap with the offending relation index."""
    ctx = f.ctx
    carried = compose(f.mat, f.source.pres)
    eng = ctx.engine_for_matrix(f.target.pres)
    cert = []
    for j in range(carried.source.rank):
        vec = vec_from_polys(carried.column(j), carried.target.rank)
        lift = eng.lift(vec)
        if lift is None:
            raise IllDefinedMap(
                f"relation {j} is not carried into target relations", relation_index=j
            )
        cert.append([ctx.reduce(p) for p in lift])
    return cert


def identity_modmap(P: Presentation) -> ModMap:
    return ModMap(P, P, identity_map(P.gens), validate=False)


def zero_modmap(A: Presentation, B: Presentation) -> ModMap:
    return ModMap(A, B, zero_map(A.gens, B.gens), validate=False)


def modmap_compose(g: ModMap, f: ModMap) -> ModMap:
    if g.source is not f.target and g.source.key() != f.target.key():
        raise RankMismatch("modmap composition mismatch")
    return ModMap(f.source, g.target, compose(g.mat, f.mat), validate=False)


def modmap_sub(f: ModMap, g: ModMap) -> ModMap:
    return ModMap(f.source, f.target, f.mat.sub(g.mat), validate=False)


def kernel(f: ModMap):
    """Kernel of a module map as (Subquotient, inclusion ModMap)."""
    ctx = f.ctx
    big = hstack(f.mat, f.target.pres)
    eng = ctx.engine_for_matrix(big)
    rA0 = f.source.rank0
    cands = []
    for z in eng.syzygies():
        z = _reduce_vec(ctx, z)
        u = {t: c for t, c in z.items() if t[0] < rA0}
        if u:
            cands.append(u)
    sq = subquotient(ctx, f.source.gens, cands, f.source.pres.columns_vec())
    rows = [[ctx.zero()] * len(sq.gen_vectors) for _ in range(rA0)]
    for jj, vec in enumerate(sq.gen_vectors):
        for (p, m), c in vec.items():
            rows[p][jj] = rows[p][jj] + Poly(ctx.field, ctx.nvars, {m: c})
    incl = ModMap(sq.pres, f.source, FreeMap(sq.pres.gens, f.source.gens, rows, check=False, reduce=False), validate=False)
    return sq, incl


def cokernel(f: ModMap):
    """Cokernel as (Presentation, projection ModMap)."""
    pres0 = Presentation(hstack(f.mat, f.target.pres))
    mres = minimize(pres0)
    proj = ModMap(f.target, mres.presentation, mres.to_min, validate=False)
    return mres.presentation, proj


def direct_sum(A: Presentation, B: Presentation):
    """A + B with the four structure maps."""
    ctx = A.ctx
    gens = FreeModule(ctx, A.gens.twists + B.gens.twists)
    src = FreeModule(ctx, A.pres.source.twists + B.pres.source.twists)
    z = ctx.zero()
    rows = []
    for i in range(A.rank0):
        rows.append(list(A.pres.rows[i]) + [z] * B.pres.source.rank)
    for i in range(B.rank0):
        rows.append([z] * A.pres.source.rank + list(B.pres.rows[i]))
    S = Presentation(FreeMap(src, gens, rows, check=False, reduce=False), minimal=A.minimal and B.minimal)
    injA = ModMap(A, S, vstack(identity_map(A.gens), zero_map(A.gens, B.gens)), validate=False)
    injB = ModMap(B, S, vstack(zero_map(B.gens, A.gens), identity_map(B.gens)), validate=False)
    projA = ModMap(S, A, hstack(identity_map(A.gens), zero_map(B.gens, A.gens)), validate=False)
    projB = ModMap(S, B, hstack(zero_map(A.gens, B.gens), identity_map(B.gens)), validate=False)
    return S, injA, injB, projA, projB


# ---------------------------------------------------------------------------
# Free summands
# ---------------------------------------------------------------------------


class StripResult:
    __slots__ = ("presentation", "proj", "incl", "stripped_twists", "free_proj")

    def __init__(self, presentation, proj, incl, stripped_twists, free_proj):
        self.presentation = presentation
        self.proj = proj
        self.incl = incl
        self.stripped_twists = stripped_twists
        self.free_proj = free_proj


def strip_free_summands(P: Presentation) -> StripResult:
    """Split off free direct summands: P = result + R(-d_1) + ...

    Returns the stripped module with the stable isomorphism pair
    proj : P -> P_str and incl : P_str -> P (proj o incl = id), plus the
    complementary split projection free_proj : P -> R(-d_1) + ... so that
    (proj, free_proj) is an isomorphism onto P_str + frees.
    """
    ctx = P.ctx
    mres = minimize(P)
    cur = mres.presentation
    proj = ModMap(P, cur, mres.to_min, validate=False)
    incl = ModMap(cur, P, mres.from_min, validate=False)
    stripped = []
    sigma_rows = []
    zero_mono = (0,) * ctx.nvars
    while cur.rank0 > 0:
        # redundant rows of the relation matrix = free summands
        ncols = cur.pres.source.rank
        row_twists = tuple(-t for t in cur.pres.source.twists)
        row_vecs = []
        for i in range(cur.rank0):
            row_vecs.append(vec_from_polys(list(cur.pres.rows[i]), ncols))
        eng = ctx.engine(row_twists, row_vecs)
        dep = None
        for z in eng.syzygies():
            z = _reduce_vec(ctx, z)
            for i in range(cur.rank0):
                c = z.get((i, zero_mono))
                if c is not None and not ctx.field.is_zero(c):
                    dep = (z, i, c)
                    break
            if dep:
                break
        if dep is None:
            break
        z, i, u = dep
        uinv = ctx.field.inv(u)
        # row_i = sum_j a_j row_j with a_j = -z_j / u
        a = {}
        for j in range(cur.rank0):
            if j == i:
                continue
            coord = _vec_coord(ctx, z, j)
            if not coord.is_zero:
                a[j] = ctx.reduce(coord.scale(ctx.field.neg(uinv)))
        new_tw = [t for k, t in enumerate(cur.gens.twists) if k != i]
        new_gens = FreeModule(ctx, new_tw)
        rows = []
        for k in range(cur.rank0):
            if k != i:
                rows.append(list(cur.pres.rows[k]))
        nxt = Presentation(FreeMap(cur.pres.source, new_gens, rows, check=False, reduce=False))
        # proj: e_k -> e'_k, e_i -> 0 ; incl: e'_k -> e_k + a_k e_i
        zpoly = ctx.zero()
        pr_rows = []
        for k2, k in enumerate([k for k in range(cur.rank0) if k != i]):
            row = [zpoly] * cur.rank0
            row[k] = ctx.one()
            pr_rows.append(row)
        pr = FreeMap(cur.gens, new_gens, pr_rows, check=False, reduce=False)
        in_rows = []
        keep = [k for k in range(cur.rank0) if k != i]
        for k in range(cur.rank0):
            row = []
            for j2, k2 in enumerate(keep):
                if k == k2:
                    row.append(ctx.one())
                elif k == i:
                    row.append(a.get(k2, zpoly))
                else:
                    row.append(zpoly)
            in_rows.append(row)
        inc = FreeMap(new_gens, cur.gens, in_rows, check=False, reduce=False)
        # complementary split functional: sigma = u^{-1} z as a row on cur.gens
        lam = [_vec_coord(ctx, z, j).scale(uinv) for j in range(cur.rank0)]
        sig_cur = FreeMap(cur.gens, FreeModule(ctx, (cur.gens.twists[i],)), [lam], check=False, reduce=False)
        sigma_rows.append(compose(sig_cur, proj.mat))
        stripped.append(cur.gens.twists[i])
        nxt_min = minimize(nxt)
        proj = ModMap(P, nxt_min.presentation, compose(nxt_min.to_min, compose(pr, proj.mat)), validate=False)
        incl = ModMap(nxt_min.presentation, P, compose(incl.mat, compose(inc, nxt_min.from_min)), validate=False)
        cur = nxt_min.presentation
    free_part = free_presentation(ctx, tuple(stripped))
    if stripped:
        rows = [list(r.rows[0]) for r in sigma_rows]
        fp_mat = FreeMap(P.gens, free_part.gens, rows, check=False, reduce=False)
    else:
        fp_mat = zero_map(P.gens, free_part.gens)
    free_proj = ModMap(P, free_part, fp_mat, validate=False)
    return StripResult(cur, proj, incl, tuple(stripped), free_proj)


# ---------------------------------------------------------------------------
# Hom modules and stable vanishing
# ---------------------------------------------------------------------------


def _hom_twists(A: Presentation, B: Presentation):
    rB = B.rank0
    tw = []
    for j in range(A.rank0):
        for i in range(rB):
            tw.append(B.gens.twists[i] - A.gens.twists[j])
    return tuple(tw)


def _vec_of_freemap(h: FreeMap, rB: int) -> dict:
    out = {}
    for i in range(h.target.rank):
        for j in range(h.source.rank):
            for m, c in h.rows[i][j].terms.items():
                out[(j * rB + i, m)] = c
    return out


def _freemap_of_vec(ctx, vec, A: Presentation, B: Presentation, shift: int) -> FreeMap:
    rB = B.rank0
    rows = [[ctx.zero()] * A.rank0 for _ in range(rB)]
    for (p, m), c in vec.items():
        j, i = divmod(p, rB)
        rows[i][j] = rows[i][j] + Poly(ctx.field, ctx.nvars, {m: c})
    src = FreeModule(ctx, tuple(t + shift for t in A.gens.twists))
    return FreeMap(src, B.gens, [[ctx.reduce(p) for p in row] for row in rows], check=False, reduce=False)


def _phi_columns(A: Presentation, B: Presentation):
    """Columns of h -> h . rel_A in the vectorized hom spaces."""
    ctx = A.ctx
    rB = B.rank0
    rA1 = A.pres.source.rank
    cols = []
    for j in range(A.rank0):
        for i in range(rB):
            col = {}
            for c in range(rA1):
                p = A.pres.rows[j][c]
                for m, cv in p.terms.items():
                    col[(c * rB + i, m)] = cv
            cols.append(col)
    return cols


def _smear_columns(A_rank_cols, B: Presentation, rB: int):
    """Vectors rel_B-column placed in each source slot of a hom space."""
    ctx = B.ctx
    cols = []
    for c in range(A_rank_cols):
        for d in range(B.pres.source.rank):
            col = {}
            for i in range(rB):
                p = B.pres.rows[i][d]
                for m, cv in p.terms.items():
                    col[(c * rB + i, m)] = cv
            cols.append(col)
    return cols


def hom_generators(A: Presentation, B: Presentation):
    """Homogeneous generators of Hom(A, B) as (FreeMap, degree) pairs.

    The FreeMap is a generator matrix from A.gens (shifted by the degree) to
    B.gens; together with the shift it defines a degree-0 ModMap from
    A.twist(degree) to B.
    """
    ctx = A.ctx
    rB = B.rank0
    rA1 = A.pres.source.rank
    tw2 = []
    for c in range(rA1):
        for i in range(rB):
            tw2.append(B.gens.twists[i] - A.pres.source.twists[c])
    phi = _phi_columns(A, B)
    smear = _smear_columns(rA1, B, rB)
    eng = ctx.engine(tuple(tw2), [_reduce_vec(ctx, c) for c in phi + smear])
    tw1 = _hom_twists(A, B)
    out = []
    nphi = len(phi)
    for z in eng.syzygies():
        z = _reduce_vec(ctx, z)
        hv = {t: c for t, c in z.items() if t[0] < nphi}
        if not hv:
            continue
        (p, m) = next(iter(hv))
        deg = ctx.order.degree(m) + tw1[p]
        h = _freemap_of_vec(ctx, hv, A, B, deg)
        out.append((h, deg))
    return out


def stable_hom_is_zero(f: ModMap) -> bool:
    """True iff f factors through a projective module.

    Tested as: the generator matrix is congruent, modulo smears by target
    relations, to a matrix that kills the source relations exactly (a lift
    through the projective cover of the target).
    """
    A, B = f.source, f.target
    ctx = f.ctx
    rB = B.rank0
    if rB == 0 or A.rank0 == 0:
        return True
    rA1 = A.pres.source.rank
    tw2 = []
    for c in range(rA1):
        for i in range(rB):
            tw2.append(B.gens.twists[i] - A.pres.source.twists[c])
    phi = [_reduce_vec(ctx, c) for c in _phi_columns(A, B)]
    eng_phi = ctx.engine(tuple(tw2), phi)
    strict = []
    for z in eng_phi.syzygies():
        z = _reduce_vec(ctx, z)
        if z:
            strict.append(z)
    smears = [_reduce_vec(ctx, c) for c in _smear_columns(A.rank0, B, rB)]
    tw1 = _hom_twists(A, B)
    eng = ctx.engine(tuple(tw1), strict + smears)
    return eng.contains(_vec_of_freemap(f.mat, rB))


def dual_of_modmap(g: ModMap, dual_target: DualModule, dual_source: DualModule) -> ModMap:
    """Hom(g, R) : target* -> source* for g : X -> Y.

    ``dual_target`` is Y*, ``dual_source`` is X*.
    """
    ctx = g.ctx
    gt = g.mat.dual()
    cols = []
    for k, kappa in enumerate(dual_target.sq.gen_vectors):
        vec = {}
        for (p, m), c in kappa.items():
            for (pp, mm), cc in vec_from_polys(gt.column(p), gt.target.rank).items():
                t = (pp, mono_mul(m, mm))
                cur = vec.get(t)
                val = ctx.field.mul(c, cc)
                if cur is None:
                    vec[t] = val
                else:
                    s = ctx.field.add(cur, val)
                    if ctx.field.is_zero(s):
                        del vec[t]
                    else:
                        vec[t] = s
        expr = dual_source.sq.express(vec)
        if expr is None:
            raise StablehomError("dual map image escapes the dual module")
        cols.append(expr)
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(dual_source.pres.rank0)]
    mat = FreeMap(dual_target.pres.gens, dual_source.pres.gens, rows, check=False, reduce=False)
    return ModMap(dual_target.pres, dual_source.pres, mat, validate=False)


def natural_double_dual(P: Presentation):
    """The canonical map M -> M**, with the two dual-module datasets."""
    ctx = P.ctx
    DM = dual_module(P)
    DDM = dual_module(DM.pres)
    cols = []
    for j in range(P.rank0):
        ev = {}
        for k, kappa in enumerate(DM.sq.gen_vectors):
            coord = _vec_coord(ctx, kappa, j)
            if not coord.is_zero:
                for m, c in coord.terms.items():
                    ev[(k, m)] = c
        expr = DDM.sq.express(ev)
        if expr is None:
            raise StablehomError("evaluation map escapes the double dual")
        cols.append(expr)
    rows = [[cols[j][i] for j in range(P.rank0)] for i in range(DDM.pres.rank0)]
    mat = FreeMap(P.gens, DDM.pres.gens, rows, check=False, reduce=False)
    return ModMap(P, DDM.pres, mat, validate=False), DM, DDM
