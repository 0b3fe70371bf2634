import random

import pytest

from stablehom.errors import InhomogeneousIdeal, NonPrimeModulus
from stablehom.ring import make_ring


def test_make_ring_axes():
    R = make_ring("qq", ["x", "y"], ["x*y"])
    assert len(R._ideal_engine.f_basis()) == 1
    assert R.descr() == "QQ[x, y]/(x*y)"


def test_make_ring_cone():
    R = make_ring("qq", ["x", "y", "z"], ["x^2-y*z"])
    assert R.reduce(R.parse("x^2")) == R.parse("y*z")


def test_make_ring_inhomogeneous():
    with pytest.raises(InhomogeneousIdeal):
        make_ring("qq", ["x", "y"], ["x + 1"])


def test_make_ring_nonprime():
    with pytest.raises(NonPrimeModulus):
        make_ring("gf:6", ["x"], [])


def test_reduce_examples():
    R = make_ring("qq", ["x", "y", "z"], ["x*y", "x^2"])
    assert R.reduce(R.parse("x^2*y + x")) == R.parse("x")
    assert R.reduce(R.zero()).is_zero


def test_reduce_idempotent_and_multiplicative():
    rng = random.Random(2)
    R = make_ring("qq", ["x", "y", "z"], ["x^2-y*z"])

    def rand():
        terms = {}
        for _ in range(rng.randrange(1, 4)):
            m = tuple(rng.randrange(3) for _ in range(3))
            terms[m] = R.field.from_int(rng.randrange(-2, 3))
        from stablehom.poly import Poly

        return Poly.from_terms(R.field, 3, terms.items())

    for _ in range(25):
        a, b = rand(), rand()
        ra, rb = R.reduce(a), R.reduce(b)
        assert R.reduce(ra) == ra
        assert R.reduce(a * b) == R.reduce(ra * rb)
        assert R.reduce(a + b) == R.reduce(ra + rb)


def test_weighted_grading():
    R = make_ring("qq", ["x", "y"], ["x^2 - y"], weights=(1, 2))
    assert R.is_homogeneous(R.parse("x^2 - y"))
    assert R.reduce(R.parse("x^2")) == R.parse("y")
