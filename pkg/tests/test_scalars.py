from fractions import Fraction

import pytest

from stablehom.errors import FieldMismatch, NonPrimeModulus
from stablehom.scalars import GF, QQ, Scalar, is_prime


def test_rational_canonical_form():
    a = Scalar.of(QQ, 6) / Scalar.of(QQ, 4)
    assert a.value == Fraction(3, 2)
    assert a.value.denominator > 0


def test_prime_field_range():
    F = GF(5)
    a = Scalar.of(F, 7)
    assert a.value == 2
    assert (a * Scalar.of(F, 3)).value == 1  # 6 mod 5


def test_prime_field_inverse():
    F = GF(32003)
    x = F.from_int(12345)
    assert F.mul(x, F.inv(x)) == 1


def test_nonprime_modulus_rejected():
    with pytest.raises(NonPrimeModulus):
        GF(4)
    with pytest.raises(NonPrimeModulus):
        GF(32001)  # 3 * 10667


def test_is_prime_small():
    primes = [2, 3, 5, 7, 11, 13, 32003]
    for p in primes:
        assert is_prime(p)
    for n in [0, 1, 4, 9, 15, 32001]:
        assert not is_prime(n)


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        Scalar.of(QQ, 1) + Scalar.of(GF(5), 1)


def test_field_arithmetic_axioms():
    F = GF(7)
    vals = [F.from_int(i) for i in range(7)]
    for a in vals:
        for b in vals:
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
            assert F.sub(a, b) == F.add(a, F.neg(b))
