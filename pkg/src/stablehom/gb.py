"""Groebner-basis engine for submodules of free modules over a polynomial ring.

One engine instance fixes a free module F (rank ``fr``, generator degrees
``f_twists``) over k[x_1..x_n], a list of column vectors spanning a submodule,
and a list of ideal generators I.  Internally it runs Buchberger on the
augmented system  {(col_j, e_j)} u {(g * e_p, 0) : g in I}  inside
F + k[x]^m with a position-over-term order in which every F position
dominates every bookkeeping position.  That single computation yields

* canonical normal forms in F modulo <columns> + I*F,
* membership and preimage coefficients (``lift``),
* generators of the syzygy module of the columns over the quotient ring,

without a separate Schreyer pass: elements whose F part cancels are exactly
the syzygies, and their bookkeeping part is the certificate.

S-pairs between two bookkeeping-led elements are skipped; the standard
Schreyer argument shows the collected remainders still generate all syzygies.
"""

from __future__ import annotations

from fractions import Fraction
from heapq import heappop, heappush

from .errors import RankMismatch, ResourceLimitExceeded
from .poly import MonomialOrder, Poly, mono_div, mono_lcm, mono_mul
from .scalars import Field, RationalField

# A vector in a free module is a dict {(position, monomial): coeff}.


def vec_is_homogeneous(vec: dict, order: MonomialOrder, twists) -> bool:
    degs = {order.degree(m) + twists[p] for (p, m) in vec}
    return len(degs) <= 1


def vec_degree(vec: dict, order: MonomialOrder, twists):
    if not vec:
        return None
    return max(order.degree(m) + twists[p] for (p, m) in vec)


def vec_from_polys(polys, fr: int) -> dict:
    """Column of polynomials (length fr) -> sparse vector."""
    out = {}
    for p, poly in enumerate(polys):
        for m, c in poly.terms.items():
            out[(p, m)] = c
    return out


def vec_to_polys(vec: dict, fr: int, field: Field, nvars: int) -> list:
    cols = [dict() for _ in range(fr)]
    for (p, m), c in vec.items():
        cols[p][m] = c
    return [Poly(field, nvars, t) for t in cols]


class _Elem:
    __slots__ = ("f", "tail", "lead", "lead_coeff")

    def __init__(self, f: dict, tail: dict, lead, lead_coeff):
        self.f = f
        self.tail = tail
        self.lead = lead  # (pos, mono) of the F part; None when f == {}
        self.lead_coeff = lead_coeff


class GroebnerBasis:
    """Reduced Groebner basis of a submodule of a free module (no quotient)."""

    def __init__(self, generators, order: MonomialOrder, fr: int, reduced: bool = True):
        self.generators = generators  # list of vectors, monic, sorted by lead
        self.order = order
        self.fr = fr
        self.reduced = reduced


class SubmoduleEngine:
    def __init__(
        self,
        field: Field,
        nvars: int,
        order: MonomialOrder,
        fr: int,
        f_twists,
        columns,
        ideal,
        max_degree: int | None = None,
    ):
        self.field = field
        self.nvars = nvars
        self.order = order
        self.fr = fr
        self.m = len(columns)
        self.max_degree = max_degree
        self._rational = isinstance(field, RationalField)

        self.twists = list(f_twists)
        for col in columns:
            d = vec_degree(col, order, f_twists)
            self.twists.append(d if d is not None else 0)

        self.elems: list[_Elem] = []
        self.bucket: dict[int, list[int]] = {}
        self.syz: list[dict] = []  # tail dicts of F-cancelled elements
        self._pairs: list = []

        gens: list[_Elem] = []
        for j, col in enumerate(columns):
            gens.append(self._make(dict(col), {(j, (0,) * nvars): field.from_int(1)}))
        for g in ideal:
            for p in range(fr):
                gens.append(self._make({(p, m): c for m, c in g.terms.items()}, {}))
        self._run(gens)

    # -- term order over combined positions ---------------------------------
    def _tkey(self, term):
        p, m = term
        return (-p, self.order.key(m))

    def _flead(self, f: dict):
        if not f:
            return None
        return max(f, key=self._tkey)

    def _make(self, f: dict, tail: dict) -> _Elem:
        lead = self._flead(f)
        return _Elem(f, tail, lead, f[lead] if lead is not None else None)

    # -- scaling -------------------------------------------------------------
    def _normalize(self, e: _Elem) -> _Elem:
        if e.lead is None:
            return e
        field = self.field
        if self._rational:
            nums = []
            dens = []
            for c in list(e.f.values()) + list(e.tail.values()):
                nums.append(c.numerator)
                dens.append(c.denominator)
            from math import gcd, lcm

            g = 0
            for n in nums:
                g = gcd(g, n)
            l = 1
            for d in dens:
                l = lcm(l, d)
            scale = Fraction(l, g if g else 1)
            if e.lead_coeff < 0:
                scale = -scale
        else:
            scale = field.inv(e.lead_coeff)
        if scale == field.from_int(1):
            return e
        f = {t: field.mul(c, scale) for t, c in e.f.items()}
        tail = {t: field.mul(c, scale) for t, c in e.tail.items()}
        return _Elem(f, tail, e.lead, f[e.lead])

    # -- reduction -----------------------------------------------------------
    def _axpy(self, dst: dict, src: dict, mono, c) -> None:
        """dst += c * x^mono * src, in place."""
        field = self.field
        for (p, m), cb in src.items():
            t = (p, mono_mul(m, mono))
            cur = dst.get(t)
            val = field.mul(cb, c)
            if cur is None:
                dst[t] = val
            else:
                s = field.add(cur, val)
                if field.is_zero(s):
                    del dst[t]
                else:
                    dst[t] = s

    def _nf(self, f: dict, tail: dict | None):
        """Full normal form of (f, tail) against the F-led basis.

        Returns (f_remainder, tail_accum); tail is skipped when None.
        """
        field = self.field
        work = dict(f)
        rem: dict = {}
        tl = dict(tail) if tail is not None else None
        while work:
            t = max(work, key=self._tkey)
            p, m = t
            red = None
            for idx in self.bucket.get(p, ()):
                e = self.elems[idx]
                q = mono_div(m, e.lead[1])
                if q is not None:
                    red = (e, q)
                    break
            if red is None:
                rem[t] = work.pop(t)
                continue
            e, q = red
            c = field.neg(field.div(work[t], e.lead_coeff))
            self._axpy(work, e.f, q, c)
            if tl is not None and e.tail:
                self._axpy(tl, e.tail, q, c)
        return rem, tl

    # -- buchberger ----------------------------------------------------------
    def _push_pairs(self, idx: int) -> None:
        e = self.elems[idx]
        p, m = e.lead
        for jdx in self.bucket.get(p, ()):
            if jdx == idx:
                continue
            mu = mono_lcm(m, self.elems[jdx].lead[1])
            deg = self.order.degree(mu) + self.twists[p]
            heappush(self._pairs, (deg, jdx, idx))

    def _add(self, e: _Elem) -> None:
        idx = len(self.elems)
        self.elems.append(e)
        self._push_pairs(idx)
        self.bucket.setdefault(e.lead[0], []).append(idx)

    def _classify(self, f: dict, tail: dict) -> None:
        if not f:
            if tail:
                self.syz.append(tail)
            return
        self._add(self._normalize(self._make(f, tail)))

    def _run(self, gens) -> None:
        for g in gens:
            f, tail = self._nf(g.f, g.tail)
            self._classify(f, tail)
        while self._pairs:
            deg, i, j = heappop(self._pairs)
            if self.max_degree is not None and deg > self.max_degree:
                raise ResourceLimitExceeded(
                    f"S-pair degree {deg} exceeds cap {self.max_degree}", degree=deg
                )
            gi, gj = self.elems[i], self.elems[j]
            pi, mi = gi.lead
            pj, mj = gj.lead
            mu = mono_lcm(mi, mj)
            qi = mono_div(mu, mi)
            qj = mono_div(mu, mj)
            field = self.field
            f: dict = {}
            tail: dict = {}
            self._axpy(f, gi.f, qi, gj.lead_coeff)
            self._axpy(f, gj.f, qj, field.neg(gi.lead_coeff))
            self._axpy(tail, gi.tail, qi, gj.lead_coeff)
            self._axpy(tail, gj.tail, qj, field.neg(gi.lead_coeff))
            f, tail = self._nf(f, tail)
            self._classify(f, tail)
        self._finalize()

    def _finalize(self) -> None:
        """Inter-reduce to a reduced basis; demoted elements become syzygies."""
        order = sorted(range(len(self.elems)), key=lambda i: self._tkey(self.elems[i].lead))
        kept: list[int] = []
        for i in order:
            p, m = self.elems[i].lead
            if any(
                self.elems[j].lead[0] == p and mono_div(m, self.elems[j].lead[1]) is not None
                for j in kept
            ):
                continue
            kept.append(i)
        survivors = [self.elems[i] for i in kept]
        demoted = [self.elems[i] for i in range(len(self.elems)) if i not in set(kept)]

        self.elems = survivors
        self.bucket = {}
        for idx, e in enumerate(self.elems):
            self.bucket.setdefault(e.lead[0], []).append(idx)

        for e in demoted:
            f, tail = self._nf(e.f, e.tail)
            if not f and tail:
                self.syz.append(tail)
            # a nonzero F remainder cannot occur: kept leads generate the lead module

        # tail-reduction pass for canonical normal forms
        for idx, e in enumerate(self.elems):
            self.bucket[e.lead[0]].remove(idx)
            f, tail = self._nf(e.f, e.tail)
            ee = self._normalize(self._make(f, tail))
            self.elems[idx] = ee
            self.bucket[ee.lead[0]].append(idx)
            self.bucket[ee.lead[0]].sort()

    # -- public surface ------------------------------------------------------
    def nf(self, vec: dict) -> dict:
        """Canonical representative of vec modulo <columns> + I*F."""
        for (p, _m) in vec:
            if p >= self.fr:
                raise RankMismatch("vector does not live in the engine's free module")
        rem, _ = self._nf(vec, None)
        return rem

    def contains(self, vec: dict) -> bool:
        return not self.nf(vec)

    def lift(self, vec: dict):
        """Coefficients c with columns . c = vec modulo I*F, else None."""
        rem, tail = self._nf(vec, {})
        if rem:
            return None
        cols = [dict() for _ in range(self.m)]
        for (j, m), c in tail.items():
            cols[j][m] = self.field.neg(c)
        return [Poly(self.field, self.nvars, t) for t in cols]

    def syzygies(self) -> list:
        """Vectors over k[x]^m whose classes generate the syzygies of the columns."""
        out = []
        for tail in self.syz:
            out.append(dict(tail))
        return out

    def f_basis(self) -> list:
        """Monic reduced Groebner basis of the F-part module, canonically sorted."""
        out = []
        for e in sorted(self.elems, key=lambda e: self._tkey(e.lead)):
            inv = self.field.inv(e.lead_coeff)
            out.append({t: self.field.mul(c, inv) for t, c in e.f.items()})
        return out


def buchberger(vectors, order: MonomialOrder, fr: int, field: Field, nvars: int, f_twists=None):
    """Reduced Groebner basis of the submodule generated by ``vectors``.

    Works over the plain polynomial ring (no quotient).  ``vectors`` are
    sparse dicts; for ideals use fr=1.
    """
    vectors = [v for v in vectors if v]
    if f_twists is None:
        f_twists = (0,) * fr
    eng = SubmoduleEngine(field, nvars, order, fr, f_twists, vectors, [])
    return GroebnerBasis(eng.f_basis(), order, fr, reduced=True)


def normal_form(vec: dict, gb: GroebnerBasis, field: Field, nvars: int) -> dict:
    """Canonical normal form against a reduced basis (no quotient ring)."""
    for (p, _m) in vec:
        if p >= gb.fr:
            raise RankMismatch("vector rank exceeds basis rank")
    order = gb.order
    leads = []
    for g in gb.generators:
        t = max(g, key=lambda t: (-t[0], order.key(t[1])))
        leads.append((t, g))
    work = dict(vec)
    rem: dict = {}
    while work:
        t = max(work, key=lambda t: (-t[0], order.key(t[1])))
        p, m = t
        hit = None
        for (lt, g) in leads:
            if lt[0] == p:
                q = mono_div(m, lt[1])
                if q is not None:
                    hit = (g, lt, q)
                    break
        if hit is None:
            rem[t] = work.pop(t)
            continue
        g, lt, q = hit
        c = field.neg(field.div(work[t], g[lt]))
        for (pp, mm), cb in g.items():
            tt = (pp, mono_mul(mm, q))
            cur = work.get(tt)
            val = field.mul(cb, c)
            if cur is None:
                work[tt] = val
            else:
                s = field.add(cur, val)
                if field.is_zero(s):
                    del work[tt]
                else:
                    work[tt] = s
        work.pop(t, None)
    return rem
