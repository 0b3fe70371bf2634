"""Curated ring gallery with trusted total-ring-of-fractions flags.

Regular rings, hypersurfaces and complete intersections get
``gorenstein_fractions=True``; the embedded-component example ring
k[x,y,z]/(xy, x^2) is the stock counterexample and gets ``False``.
"""

from __future__ import annotations

from .ring import RingCtx, make_ring

_SPECS = {
    "dual_numbers": (["x"], ["x^2"], True),
    "cubic_point": (["x"], ["x^3"], True),
    "axes": (["x", "y"], ["x*y"], True),
    "fat_point": (["x", "y"], ["x^2", "y^2"], True),
    "cone": (["x", "y", "z"], ["x^2-y*z"], True),
    "space": (["x", "y", "z"], [], True),
    "axes_embedded": (["x", "y", "z"], ["x*y", "x^2"], False),
}


def gallery_names():
    return tuple(_SPECS)


def gallery_ring(name: str, field="qq", max_degree=None) -> RingCtx:
    vars_, ideal, gor = _SPECS[name]
    return make_ring(field, vars_, ideal, gorenstein_fractions=gor, max_degree=max_degree)


def property_gallery(field="qq"):
    """The five small rings used by the randomized property suites."""
    return [gallery_ring(n, field) for n in ("dual_numbers", "cubic_point", "axes", "fat_point", "cone")]
