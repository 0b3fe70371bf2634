"""Stable-category computations for maps of presented modules.

Core constructions: two-sided standard resolutions glued from a minimal free
resolution and the dual of a minimal resolution of the transpose; chain-map
lifts; mapping cones; the monomorphism-representation test (vanishing of the
cone cohomology in degree -1); the canonical perfect short exact sequence of
a representable map; pseudo-kernels and pseudo-cokernels; torsionless tests
and the full equivalence report.
"""

from __future__ import annotations

from .complexes import ChainMap, Complex, cone, homology
from .errors import NotAComplex, NotRbm, StablehomError
from .fmod import (
    FreeMap,
    FreeModule,
    ModMap,
    Presentation,
    betti_table,
    compose,
    direct_sum,
    dual_module,
    dual_of_modmap,
    ext,
    free_presentation,
    hstack,
    identity_modmap,
    is_zero_module,
    kernel,
    cokernel,
    minimal_generators,
    minimize,
    modmap_compose,
    modmap_sub,
    natural_double_dual,
    resolution_chain,
    stable_hom_is_zero,
    strip_free_summands,
    subquotient,
    syzygy,
    transpose,
    vec_from_polys,
    vstack,
    zero_map,
    _reduce_vec,
)
from .poly import Poly


# ---------------------------------------------------------------------------
# Standard resolutions
# ---------------------------------------------------------------------------


class StandardResolution:
    """Two-sided complex of frees attached to a module.

    Degrees <= 0 hold a minimal free resolution of the module with free
    summands split off (they are invisible in the stable category and would
    obstruct the dual-exactness condition); degrees >= 1 hold the dual of a
    minimal resolution of the transpose, glued so the composite vanishes.
    ``module`` is the stripped representative the complex actually resolves;
    ``proj``/``incl`` connect it to the original presentation.
    """

    def __init__(self, orig, module, cx, chain, tr_pres, tr_chain, strip):
        self.orig = orig
        self.module = module
        self.cx = cx
        self.chain = chain
        self.tr_pres = tr_pres
        self.tr_chain = tr_chain
        self.strip = strip
        self.proj = strip.proj
        self.incl = strip.incl

    @property
    def complex(self) -> Complex:
        return self.cx


def standard_resolution(A: Presentation, window=(-2, 1)) -> StandardResolution:
    lo, hi = window
    if lo > 0 or hi < 1:
        raise StablehomError("standard resolution window must contain [0, 1]")
    ctx = A.ctx
    strip = strip_free_summands(A)
    Astr = strip.presentation
    chain = resolution_chain(Astr, max(1, -lo))
    tr_pres = Presentation(chain.diff(1).dual())
    tr_chain = resolution_chain(tr_pres, hi + 1)
    if tr_chain.term(0).rank != tr_pres.rank0:
        raise StablehomError("transpose presentation unexpectedly non-minimal")

    terms = {}
    diffs = {}
    for n in range(lo, 1):
        terms[n] = chain.term(-n)
    for n in range(1, hi + 1):
        terms[n] = tr_chain.term(n + 1).dual()
    for n in range(lo, 0):
        diffs[n] = chain.diff(-n)
    for n in range(0, hi):
        diffs[n] = tr_chain.diff(n + 2).dual()
    cx = Complex(ctx, lo, hi, terms, diffs, check=True)
    return StandardResolution(A, Astr, cx, chain, tr_pres, tr_chain, strip)


def _lift_matrix_through(d: FreeMap, M: FreeMap) -> FreeMap:
    """X with d o X = M modulo the ring ideal; raises when no preimage exists."""
    ctx = d.ctx
    eng = ctx.engine_for_matrix(d)
    cols = []
    for j in range(M.source.rank):
        vec = vec_from_polys(M.column(j), M.target.rank)
        lift = eng.lift(vec)
        if lift is None:
            raise StablehomError("chain-map lift does not exist")
        cols.append([ctx.reduce(p) for p in lift])
    rows = [[cols[j][i] for j in range(M.source.rank)] for i in range(d.source.rank)]
    return FreeMap(M.source, d.source, rows, check=False, reduce=False)


def lift_chain_map(f: ModMap, FA: StandardResolution, FB: StandardResolution) -> ChainMap:
    """Chain map between standard resolutions inducing f in degree 0."""
    lo = max(FA.cx.lo, FB.cx.lo)
    hi = min(FA.cx.hi, FB.cx.hi)
    h0 = compose(FB.proj.mat, compose(f.mat, FA.incl.mat))
    comps = {0: h0}
    for n in range(-1, lo - 1, -1):
        rhs = compose(comps[n + 1], FA.cx.diffs[n])
        comps[n] = _lift_matrix_through(FB.cx.diffs[n], rhs)
    # transpose side: lift Tr f down the resolutions of the transposes
    g = {0: comps[-1].dual(), -1: comps[0].dual()}
    for k in range(2, hi + 2):
        rhs = compose(g[-k + 1], FB.tr_chain.diff(k))
        g[-k] = _lift_matrix_through(FA.tr_chain.diff(k), rhs)
    for n in range(1, hi + 1):
        comps[n] = g[-n - 1].dual()
    return ChainMap(FA.cx, FB.cx, comps, check=True)


def _cone_data(f: ModMap, window=(-2, 1)):
    FA = standard_resolution(f.source, window)
    FB = standard_resolution(f.target, window)
    ch = lift_chain_map(f, FA, FB)
    return FA, FB, ch, cone(ch)


# ---------------------------------------------------------------------------
# Pseudo-kernel / pseudo-cokernel
# ---------------------------------------------------------------------------


class PseudoKernelResult:
    __slots__ = ("pseudo_ker", "n_f", "pseudo_coker", "c_f", "ker_certificate", "coker_certificate")

    def __init__(self, pseudo_ker, n_f, pseudo_coker, c_f, ker_certificate, coker_certificate):
        self.pseudo_ker = pseudo_ker
        self.n_f = n_f
        self.pseudo_coker = pseudo_coker
        self.c_f = c_f
        self.ker_certificate = ker_certificate
        self.coker_certificate = coker_certificate


def pseudo_kernel_cokernel(f: ModMap, window=(-2, 1), _data=None) -> PseudoKernelResult:
    """Cokernels of the cone differentials in degrees -2 and -1, with the
    structure maps to the source and from the target."""
    FA, FB, ch, C = _data if _data is not None else _cone_data(f, window)

    pk_raw = Presentation(C.diffs[-2])
    pk_strip = strip_free_summands(pk_raw)
    pk = pk_strip.presentation
    # n_f: project the cone degree -1 term onto the source block
    proj1 = hstack(
        identityish(FA.cx.terms[0]),
        zero_map(FB.cx.terms[-1], FA.cx.terms[0]),
    )
    n_mat = compose(FA.incl.mat, compose(proj1, pk_strip.incl.mat))
    n_f = ModMap(pk, f.source, n_mat, validate=True)

    pc_raw = Presentation(C.diffs[-1])
    pc_strip = strip_free_summands(pc_raw)
    pc = pc_strip.presentation
    inj2 = vstack(zero_map(FB.cx.terms[0], FA.cx.terms[1]), identityish(FB.cx.terms[0]))
    c_mat = compose(pc_strip.proj.mat, compose(inj2, FB.proj.mat))
    c_f = ModMap(f.target, pc, c_mat, validate=True)

    cert_k = stable_hom_is_zero(modmap_compose(f, n_f))
    cert_c = stable_hom_is_zero(modmap_compose(c_f, f))
    return PseudoKernelResult(pk, n_f, pc, c_f, cert_k, cert_c)


def identityish(F: FreeModule) -> FreeMap:
    from .fmod import identity_map

    return identity_map(F)


# ---------------------------------------------------------------------------
# Short exact sequences and perfect exactness
# ---------------------------------------------------------------------------


def _middle_exact(inj: ModMap, surj: ModMap) -> bool:
    """im(inj) = ker(surj) inside the shared middle module."""
    ctx = inj.ctx
    mid = inj.target
    big = hstack(surj.mat, surj.target.pres)
    eng = ctx.engine_for_matrix(big)
    r0 = mid.rank0
    ker_gens = []
    for z in eng.syzygies():
        z = _reduce_vec(ctx, z)
        u = {t: c for t, c in z.items() if t[0] < r0}
        if u:
            ker_gens.append(u)
    rel = mid.pres.columns_vec()
    left = ctx.engine(mid.gens.twists, ker_gens + rel)
    right = ctx.engine(mid.gens.twists, inj.mat.columns_vec() + rel)
    return left.f_basis() == right.f_basis()


def check_short_exact(inj: ModMap, surj: ModMap) -> bool:
    """Literal exactness of 0 -> A -> B -> C -> 0."""
    comp = modmap_compose(surj, inj)
    if not comp.is_zero_morphism():
        raise NotAComplex("composite of the two maps is not zero")
    K, _ = kernel(inj)
    if K.pres.rank0 != 0:
        return False
    Cok, _ = cokernel(surj)
    if Cok.rank0 != 0:
        return False
    return _middle_exact(inj, surj)


def is_perfect_exact(inj: ModMap, surj: ModMap) -> bool:
    """Exactness of the sequence and of its R-dual."""
    if not check_short_exact(inj, surj):
        return False
    DA = dual_module(inj.source)
    DM = dual_module(inj.target)
    DC = dual_module(surj.target)
    s_dual = dual_of_modmap(surj, DC, DM)  # C* -> Mid*
    i_dual = dual_of_modmap(inj, DM, DA)  # Mid* -> A*
    comp = modmap_compose(i_dual, s_dual)
    if not comp.is_zero_morphism():
        return False
    K, _ = kernel(s_dual)
    if K.pres.rank0 != 0:
        return False
    Cok, _ = cokernel(i_dual)
    if Cok.rank0 != 0:
        return False
    return _middle_exact(s_dual, i_dual)


class ThetaSequence:
    """The canonical perfect short exact sequence attached to a representable map."""

    __slots__ = ("source", "middle", "coker", "inj", "surj", "perfect_certificate")

    def __init__(self, source, middle, coker, inj, surj, perfect_certificate):
        self.source = source
        self.middle = middle
        self.coker = coker
        self.inj = inj
        self.surj = surj
        self.perfect_certificate = perfect_certificate


class RbmResult:
    __slots__ = ("value", "obstruction", "theta")

    def __init__(self, value, obstruction, theta=None):
        self.value = value
        self.obstruction = obstruction
        self.theta = theta


def is_rbm(f: ModMap, window=(-2, 1), attach_theta: bool = False) -> RbmResult:
    """True iff the degree -1 cone cohomology vanishes."""
    FA, FB, ch, C = _cone_data(f, window)
    H = homology(C, -1)
    ok = H.rank0 == 0
    th = None
    if ok and attach_theta:
        th = _theta_from_data(f, FA, FB, C)
    return RbmResult(ok, H, th)


def theta(f: ModMap, window=(-2, 1)) -> ThetaSequence:
    FA, FB, ch, C = _cone_data(f, window)
    H = homology(C, -1)
    if H.rank0 != 0:
        raise NotRbm(
            "map is not represented by monomorphisms; cone cohomology at -1 is nonzero",
            obstruction_betti=betti_table(H, 1),
        )
    return _theta_from_data(f, FA, FB, C)


def _theta_from_data(f: ModMap, FA, FB, C) -> ThetaSequence:
    ctx = f.ctx
    A, B = f.source, f.target
    # degree-1 term of the standard resolution of the honest A: the stripped
    # complex plus one trivial summand per split-off free generator
    FA1 = FA.cx.terms[1]
    eps_str = compose(FA.cx.diffs[0].neg(), FA.proj.mat)
    eps = vstack(eps_str, FA.strip.free_proj.mat)
    full_tw = FA1.twists + FA.strip.stripped_twists
    Ffree = free_presentation(ctx, full_tw)
    Mid, injB, injF, projB, projF = direct_sum(B, Ffree)
    inj = ModMap(A, Mid, vstack(f.mat, eps), validate=True)

    # third term: the honest cokernel of (f; eps) -- a representative of the
    # pseudo-cokernel carrying the induced surjection (c_f, pi)
    pc, surj = cokernel(inj)

    perfect = is_perfect_exact(inj, surj)
    return ThetaSequence(A, Mid, pc, inj, surj, perfect)


# ---------------------------------------------------------------------------
# Torsionless, the double-dual route, and psi
# ---------------------------------------------------------------------------


def torsionless(M: Presentation) -> bool:
    """Vanishing of Ext^1 of the transpose against the ring."""
    return is_zero_module(ext(transpose(M), 1).presentation)


def torsionless_both(M: Presentation):
    """(via Ext^1 of the transpose, via injectivity of M -> M**)."""
    via_ext = torsionless(M)
    phi, _DM, _DDM = natural_double_dual(M)
    K, _ = kernel(phi)
    via_embed = K.pres.rank0 == 0
    return via_ext, via_embed


def j2_and_psi(M: Presentation):
    """The double-corrected module J2(M) with its natural map to M.

    J2(M) is transpose(syzygy(transpose(syzygy(M, 1)), 1)); the map is built
    by lifting the identity through the dualized resolutions, so it restricts
    to the identity in the resolution degrees <= -1.
    """
    ctx = M.ctx
    mres = minimize(M)
    chain = resolution_chain(M, 2)
    d1 = chain.diff(1)
    d2 = chain.diff(2)
    e1 = d2.dual()  # (F1)* -> (F2)*
    cands = [_reduce_vec(ctx, z) for z in ctx.engine_for_matrix(e1).syzygies()]
    kept, kept_vecs, _nxt = minimal_generators(ctx, e1.source.twists, cands)
    col_tw = []
    for vec in kept_vecs:
        (p, m) = next(iter(vec))
        col_tw.append(ctx.order.degree(m) + e1.source.twists[p])
    G2 = FreeModule(ctx, col_tw)
    rows = [[ctx.zero()] * len(kept_vecs) for _ in range(e1.source.rank)]
    for jj, vec in enumerate(kept_vecs):
        for (p, m), c in vec.items():
            rows[p][jj] = rows[p][jj] + Poly(ctx.field, ctx.nvars, {m: c})
    e2 = FreeMap(G2, e1.source, rows, check=False, reduce=False)

    J2_raw = Presentation(e2.dual())
    j2m = minimize(J2_raw)
    X = _lift_matrix_through(e2, d1.dual())  # e2 . X = (d1)*
    psi_mat = compose(mres.from_min, compose(X.dual(), j2m.from_min))
    psi = ModMap(j2m.presentation, M, psi_mat, validate=True)
    return j2m.presentation, psi


def ext_dual_vanishes(M: Presentation) -> bool:
    E = ext(M, 1).presentation
    return is_zero_module(dual_module(E).pres)


# ---------------------------------------------------------------------------
# Epification and the kernel filtration
# ---------------------------------------------------------------------------


def epification(f: ModMap):
    """(f, rho'): A + G -> B with G a free cover of coker(f) lifted to B.

    The kernel of the result is a pseudo-kernel representative; for an
    epimorphism f the extra summand G is zero and the kernel is ker(f)
    itself.
    """
    ctx = f.ctx
    big = hstack(f.mat, f.target.pres)
    m = minimize(Presentation(big))
    C = m.presentation
    Gfree = free_presentation(ctx, C.gens.twists)
    # from_min picks representatives of the cokernel generators inside B
    rho = ModMap(Gfree, f.target, m.from_min, validate=False)
    S, injA, injG, projA, projG = direct_sum(f.source, Gfree)
    g = ModMap(S, f.target, hstack(f.mat, rho.mat), validate=False)
    return g, C, injA, projG


def kernel_filtration(f: ModMap):
    """The exact sequence 0 -> ker f -> K' -> Omega^1(coker f) -> 0.

    K' is the kernel of the epification of f (a pseudo-kernel
    representative).  Returns (left, mid, right, map1, map2) as presented
    modules and validated maps.
    """
    ctx = f.ctx
    g, C, injA, projG = epification(f)
    Ksq, Kincl = kernel(g)
    Kf, Kf_incl = kernel(f)

    # map1: ker f -> K', u |-> (u, 0)
    rA0 = f.source.rank0
    cols = []
    for vec in Kf.gen_vectors:
        amb = dict(vec)  # lives in F_A0; include into F_A0 ++ F_G
        expr = Ksq.express(amb)
        if expr is None:
            raise StablehomError("kernel inclusion failed to factor")
        cols.append(expr)
    rows1 = [[cols[j][i] for j in range(len(cols))] for i in range(Ksq.pres.rank0)]
    map1 = ModMap(Kf.pres, Ksq.pres, FreeMap(Kf.pres.gens, Ksq.pres.gens, rows1, check=False, reduce=False), validate=True)

    # map2: K' -> Omega^1(coker f): (a, g) |-> g in ker(G -> C)
    cover = ModMap(free_presentation(ctx, C.gens.twists), C, identityish(C.gens), validate=False)
    Wsq, Wincl = kernel(cover)
    cols2 = []
    for vec in Ksq.gen_vectors:
        gpart = {(p - rA0, m): c for (p, m), c in vec.items() if p >= rA0}
        expr = Wsq.express(gpart)
        if expr is None:
            raise StablehomError("syzygy projection failed to factor")
        cols2.append(expr)
    rows2 = [[cols2[j][i] for j in range(len(cols2))] for i in range(Wsq.pres.rank0)]
    map2 = ModMap(Ksq.pres, Wsq.pres, FreeMap(Ksq.pres.gens, Wsq.pres.gens, rows2, check=False, reduce=False), validate=True)
    return Kf.pres, Ksq.pres, Wsq.pres, map1, map2


# ---------------------------------------------------------------------------
# Stable isomorphism certificates and the report
# ---------------------------------------------------------------------------


def check_stable_iso_certificate(a: ModMap, a_inv: ModMap) -> bool:
    """Both composite defects factor through projectives."""
    if a.source.key() != a_inv.target.key() or a.target.key() != a_inv.source.key():
        raise StablehomError("certificate maps are not mutually composable")
    d1 = modmap_sub(modmap_compose(a, a_inv), identity_modmap(a.target))
    d2 = modmap_sub(modmap_compose(a_inv, a), identity_modmap(a.source))
    return stable_hom_is_zero(d1) and stable_hom_is_zero(d2)


def stripped_betti(P: Presentation, length: int) -> list:
    return betti_table(strip_free_summands(P).presentation, length)


class StableReport:
    __slots__ = (
        "rbm",
        "ker_torsionless",
        "pseudo_ker_torsionless",
        "h_minus1_vanishes",
        "syzygy_match",
        "gorenstein_fractions",
        "consistent",
        "theta",
        "obstruction",
    )

    def __init__(self, rbm, ker_torsionless, pseudo_ker_torsionless, h_minus1_vanishes,
                 syzygy_match, gorenstein_fractions, consistent, theta, obstruction):
        self.rbm = rbm
        self.ker_torsionless = ker_torsionless
        self.pseudo_ker_torsionless = pseudo_ker_torsionless
        self.h_minus1_vanishes = h_minus1_vanishes
        self.syzygy_match = syzygy_match
        self.gorenstein_fractions = gorenstein_fractions
        self.consistent = consistent
        self.theta = theta
        self.obstruction = obstruction

    def booleans(self):
        return {
            "rbm": self.rbm,
            "ker_torsionless": self.ker_torsionless,
            "pseudo_ker_torsionless": self.pseudo_ker_torsionless,
            "h_minus1_vanishes": self.h_minus1_vanishes,
            "syzygy_match": self.syzygy_match,
        }


def rbm_report(f: ModMap, window=(-2, 1), betti_length: int = 3, attach_theta: bool = True) -> StableReport:
    FA, FB, ch, C = _cone_data(f, window)
    H = homology(C, -1)
    rbm = H.rank0 == 0

    Kf, _ = kernel(f)
    ker_tl = torsionless(Kf.pres)

    pkr = pseudo_kernel_cokernel(f, window, _data=(FA, FB, ch, C))
    pk_tl = torsionless(pkr.pseudo_ker)

    omega = syzygy(pkr.pseudo_coker, 1)
    match = stripped_betti(omega, betti_length) == stripped_betti(pkr.pseudo_ker, betti_length)

    th = None
    if rbm and attach_theta:
        th = _theta_from_data(f, FA, FB, C)

    gf = f.ctx.gorenstein_fractions
    vals = [rbm, ker_tl, pk_tl, rbm, match]
    consistent = (len(set(vals)) == 1) if gf else True
    return StableReport(rbm, ker_tl, pk_tl, rbm, match, gf, consistent, th,
                        None if rbm else H)
