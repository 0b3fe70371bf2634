"""Bounded windows of cochain complexes of free modules.

A ``Complex`` stores terms and differentials on an explicit window
[lo, hi]; degrees outside the window are unknown unless a truncation has
certified them zero (``zero_below`` / ``zero_above``).  Requests that need
unavailable data raise ``WindowTooSmall``.
"""

from __future__ import annotations

from .errors import RankMismatch, StablehomError, WindowTooSmall
from .fmod import (
    FreeMap,
    FreeModule,
    Presentation,
    Subquotient,
    compose,
    is_zero_module,
    subquotient,
    zero_map,
    _reduce_vec,
)
from .ring import RingCtx


class Complex:
    def __init__(self, ctx: RingCtx, lo: int, hi: int, terms: dict, diffs: dict,
                 zero_below: bool = False, zero_above: bool = False, check: bool = True):
        if lo > hi:
            raise StablehomError("empty window")
        self.ctx = ctx
        self.lo = lo
        self.hi = hi
        self.terms = dict(terms)
        self.diffs = dict(diffs)
        self.zero_below = zero_below
        self.zero_above = zero_above
        for n in range(lo, hi + 1):
            if n not in self.terms:
                raise StablehomError(f"missing term in degree {n}")
        for n in range(lo, hi):
            if n not in self.diffs:
                self.diffs[n] = zero_map(self.terms[n], self.terms[n + 1])
        if check:
            self._check()

    def _check(self) -> None:
        for n in range(self.lo, self.hi):
            d = self.diffs[n]
            if d.source != self.terms[n] or d.target != self.terms[n + 1]:
                raise RankMismatch(f"differential at {n} has wrong shape")
        for n in range(self.lo, self.hi - 1):
            if not compose(self.diffs[n + 1], self.diffs[n]).is_zero():
                raise StablehomError(f"d o d != 0 at degree {n}")

    # -- access ---------------------------------------------------------------
    def term(self, n: int) -> FreeModule:
        if self.lo <= n <= self.hi:
            return self.terms[n]
        if (n > self.hi and self.zero_above) or (n < self.lo and self.zero_below):
            return FreeModule(self.ctx, ())
        raise WindowTooSmall(f"term {n} outside window [{self.lo}, {self.hi}]")

    def diff(self, n: int) -> FreeMap:
        if self.lo <= n < self.hi:
            return self.diffs[n]
        return zero_map(self.term(n), self.term(n + 1))

    def window(self):
        return (self.lo, self.hi)


def truncate(C: Complex, mode: str, n: int) -> Complex:
    """tau_{<=n} or tau_{>=n}; dropped terms become certified zero modules."""
    if mode not in ("le", "ge"):
        raise StablehomError("mode must be 'le' or 'ge'")
    zero = FreeModule(C.ctx, ())
    terms = {}
    diffs = {}
    for k in range(C.lo, C.hi + 1):
        keep = k <= n if mode == "le" else k >= n
        terms[k] = C.terms[k] if keep else zero
    for k in range(C.lo, C.hi):
        keep = (k + 1 <= n) if mode == "le" else (k >= n)
        if keep:
            diffs[k] = C.diffs[k]
    zb = C.zero_below or (mode == "ge" and n >= C.lo)
    za = C.zero_above or (mode == "le" and n <= C.hi)
    return Complex(C.ctx, C.lo, C.hi, terms, diffs, zero_below=zb, zero_above=za, check=False)


def shift(C: Complex, k: int) -> Complex:
    """C[k]: degree n term becomes the old degree n+k term (no sign changes)."""
    terms = {n - k: C.terms[n] for n in C.terms}
    diffs = {n - k: C.diffs[n] for n in C.diffs}
    return Complex(C.ctx, C.lo - k, C.hi - k, terms, diffs,
                   zero_below=C.zero_below, zero_above=C.zero_above, check=False)


def dual_complex(C: Complex) -> Complex:
    """Degree n term = (old term at -n)*, differential at n = (old d at -n-1)*."""
    terms = {}
    diffs = {}
    for k in range(C.lo, C.hi + 1):
        terms[-k] = C.terms[k].dual()
    for k in range(C.lo, C.hi):
        diffs[-k - 1] = C.diffs[k].dual()
    return Complex(C.ctx, -C.hi, -C.lo, terms, diffs,
                   zero_below=C.zero_above, zero_above=C.zero_below, check=False)


class ChainMap:
    def __init__(self, source: Complex, target: Complex, components: dict, check: bool = True):
        self.source = source
        self.target = target
        self.components = dict(components)
        self.lo = max(source.lo, target.lo)
        self.hi = min(source.hi, target.hi)
        if check:
            for n in range(self.lo, self.hi + 1):
                f = self.components.get(n)
                if f is None:
                    raise WindowTooSmall(f"missing component at degree {n}")
                if f.source != source.terms[n] or f.target != target.terms[n]:
                    raise RankMismatch(f"component {n} has wrong shape")
            for n in range(self.lo, self.hi):
                lhs = compose(target.diffs[n], self.components[n])
                rhs = compose(self.components[n + 1], source.diffs[n])
                if not lhs.sub(rhs).is_zero():
                    raise StablehomError(f"square at degree {n} does not commute")

    def component(self, n: int) -> FreeMap:
        if n in self.components:
            return self.components[n]
        return zero_map(self.source.term(n), self.target.term(n))


def cone(f: ChainMap) -> Complex:
    """Mapping cone: C(f)^n = A^{n+1} + B^n, d = [[-d_A, 0], [f, d_B]]."""
    A, B = f.source, f.target
    lo = max(A.lo - 1, B.lo)
    hi = min(A.hi - 1, B.hi)
    if lo > hi:
        raise WindowTooSmall("windows do not overlap enough for a cone")
    ctx = A.ctx
    terms = {}
    for n in range(lo, hi + 1):
        terms[n] = FreeModule(ctx, A.terms[n + 1].twists + B.terms[n].twists)
    diffs = {}
    for n in range(lo, hi):
        dA = A.diffs[n + 1]
        dB = B.diffs[n]
        fc = f.component(n + 1)
        rows = []
        for i in range(dA.target.rank):
            rows.append([-p for p in dA.rows[i]] + [ctx.zero()] * dB.source.rank)
        for i in range(dB.target.rank):
            rows.append(list(fc.rows[i]) + list(dB.rows[i]))
        diffs[n] = FreeMap(terms[n], terms[n + 1], rows, check=False, reduce=False)
    za = A.zero_above and B.zero_above
    zb = A.zero_below and B.zero_below
    return Complex(ctx, lo, hi, terms, diffs, zero_below=zb, zero_above=za, check=False)


def homology_subquotient(C: Complex, n: int) -> Subquotient:
    """ker(d^n)/im(d^{n-1}) as a subquotient of term n."""
    need = (n - 1, n, n + 1)
    for k in need:
        C.term(k)  # raises WindowTooSmall when unavailable
    ctx = C.ctx
    d_out = C.diff(n)
    d_in = C.diff(n - 1)
    if d_out.source.rank == 0:
        return subquotient(ctx, d_out.source, [], [])
    cands = [_reduce_vec(ctx, z) for z in ctx.engine_for_matrix(d_out).syzygies()]
    return subquotient(ctx, d_out.source, cands, d_in.columns_vec())


def homology(C: Complex, n: int) -> Presentation:
    """Minimized presentation of the homology at degree n."""
    return homology_subquotient(C, n).pres


def is_exact_everywhere(C: Complex, degrees) -> bool:
    """True iff homology vanishes at every degree in ``degrees``."""
    for n in degrees:
        if not is_zero_module(homology(C, n)):
            return False
    return True
