"""Ambient graded quotient ring R = k[x_1..x_n]/I with homogeneous I.

The irrelevant ideal (x_1..x_n) is the unique graded maximal ideal, so every
finite graded module has an algorithmic projective cover; everything
downstream relies on that.  All module computations over R are run in the
polynomial ring with I-columns appended (see ``gb``) and read modulo I.
"""

from __future__ import annotations

import threading

from .errors import InhomogeneousIdeal, StablehomError
from .gb import SubmoduleEngine, vec_from_polys
from .poly import MonomialOrder, Poly, format_poly, parse_poly
from .scalars import GF, QQ, Field


class RingCtx:
    """Immutable ring context; caches engines, minimizations and resolutions."""

    def __init__(
        self,
        field: Field,
        var_names,
        ideal,
        order: MonomialOrder,
        gorenstein_fractions: bool = False,
        weights=None,
        max_degree: int | None = None,
    ):
        self.field = field
        self.vars = tuple(var_names)
        self.nvars = len(self.vars)
        self.weights = tuple(weights) if weights is not None else (1,) * self.nvars
        self.order = order
        self.ideal = tuple(ideal)
        self.gorenstein_fractions = gorenstein_fractions
        self.max_degree = max_degree
        self._lock = threading.RLock()
        self._engines: dict = {}
        self._minimize_cache: dict = {}
        self._resolution_cache: dict = {}
        self._ideal_engine = SubmoduleEngine(
            field, self.nvars, order, 1, (0,), [], list(self.ideal), max_degree
        )

    # -- basics --------------------------------------------------------------
    def zero(self) -> Poly:
        return Poly.zero(self.field, self.nvars)

    def one(self) -> Poly:
        return Poly.const(self.field, self.nvars, 1)

    def variable(self, i: int) -> Poly:
        return Poly.variable(self.field, self.nvars, i)

    def parse(self, text: str) -> Poly:
        return self.reduce(parse_poly(text, self.vars, self.field))

    def show(self, p: Poly) -> str:
        return format_poly(p, self.vars, self.order)

    def reduce(self, p: Poly) -> Poly:
        """Canonical representative of p + I."""
        if p.field != self.field or p.nvars != self.nvars:
            raise StablehomError("polynomial does not belong to this ring")
        if not self.ideal or p.is_zero:
            return p
        vec = {(0, m): c for m, c in p.terms.items()}
        rem = self._ideal_engine.nf(vec)
        return Poly(self.field, self.nvars, {m: c for (_p, m), c in rem.items()})

    def poly_degree(self, p: Poly):
        return p.degree(self.weights)

    def is_homogeneous(self, p: Poly) -> bool:
        return p.is_homogeneous(self.weights)

    # -- engines ---------------------------------------------------------------
    def engine(self, f_twists, columns) -> SubmoduleEngine:
        """Cached submodule engine for the given columns inside F(f_twists)."""
        key = (
            tuple(f_twists),
            tuple(
                tuple(sorted(((p, m, str(c)) for (p, m), c in col.items())))
                for col in columns
            ),
        )
        with self._lock:
            eng = self._engines.get(key)
            if eng is None:
                eng = SubmoduleEngine(
                    self.field,
                    self.nvars,
                    self.order,
                    len(f_twists),
                    tuple(f_twists),
                    [dict(c) for c in columns],
                    list(self.ideal),
                    self.max_degree,
                )
                self._engines[key] = eng
        return eng

    def engine_for_matrix(self, fmap) -> SubmoduleEngine:
        cols = [vec_from_polys(fmap.column(j), fmap.target.rank) for j in range(fmap.source.rank)]
        return self.engine(fmap.target.twists, cols)

    def descr(self) -> str:
        gens = ", ".join(self.show(g) for g in self.ideal)
        base = f"{self.field}[{', '.join(self.vars)}]"
        return f"{base}/({gens})" if gens else base


def make_ring(
    field_spec,
    var_names,
    ideal_texts,
    order_kind: str = "degrevlex",
    gorenstein_fractions: bool = False,
    weights=None,
    max_degree: int | None = None,
    priority=None,
) -> RingCtx:
    """Validated ring constructor.

    ``field_spec`` is a Field, "qq", or "gf:P".  Ideal generators may be
    polynomial text or Poly values; they must be homogeneous in the grading.
    """
    if isinstance(field_spec, Field):
        field = field_spec
    elif isinstance(field_spec, str):
        s = field_spec.lower()
        if s == "qq":
            field = QQ
        elif s.startswith("gf:"):
            field = GF(int(s[3:]))
        else:
            raise StablehomError(f"unknown field spec {field_spec!r}")
    else:
        raise StablehomError(f"unknown field spec {field_spec!r}")

    names = tuple(var_names)
    order = MonomialOrder(order_kind, len(names), priority=priority, weights=weights)
    w = order.weights
    gens = []
    for g in ideal_texts:
        p = g if isinstance(g, Poly) else parse_poly(g, names, field)
        if p.is_zero:
            continue
        if not p.is_homogeneous(w):
            raise InhomogeneousIdeal(f"ideal generator {g!r} is not homogeneous")
        gens.append(p)
    return RingCtx(
        field,
        names,
        gens,
        order,
        gorenstein_fractions=gorenstein_fractions,
        weights=w,
        max_degree=max_degree,
    )
