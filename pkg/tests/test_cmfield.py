import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unitdist.cmfield import (
    CycloElement,
    RealQuadElement,
    conj,
    degree,
    embed,
    embedding_data,
    field_norm_to_Q,
    from_real,
    mul,
    num_places,
    real_norm_to_Q,
    relative_norm,
    to_real,
)

coord = st.integers(-20, 20)


@st.composite
def elements(draw, n=None):
    n = n or draw(st.sampled_from([4, 8, 12]))
    return CycloElement(n, tuple(draw(coord) for _ in range(degree(n))))


@st.composite
def triples(draw):
    n = draw(st.sampled_from([4, 8, 12]))
    return draw(elements(n)), draw(elements(n)), draw(elements(n))


def Z(n):
    return CycloElement.zeta(n)


def one(n):
    return CycloElement.from_int(n, 1)


def test_mul_examples():
    assert mul(CycloElement(4, (0, 1)), CycloElement(4, (0, 1))) == CycloElement(4, (-1, 0))
    assert Z(8) ** 4 == CycloElement.from_int(8, -1)
    assert Z(12) ** 6 == CycloElement.from_int(12, -1)
    assert Z(12) ** 12 == one(12) and Z(12) ** 4 != one(12)
    with pytest.raises(ValueError):
        mul(Z(4), Z(8))


def test_conj_examples():
    assert conj(CycloElement(4, (3, 7))) == CycloElement(4, (3, -7))
    assert conj(Z(8)) == -(Z(8) ** 3)
    assert mul(Z(12), conj(Z(12))) == one(12)


def test_relative_norm_examples():
    assert relative_norm(CycloElement(4, (1, 2))) == RealQuadElement(1, 5)
    assert relative_norm(one(8) + Z(8)) == RealQuadElement(2, 2, 1)
    for n in (4, 8, 12):
        assert relative_norm(one(n)) == RealQuadElement(real_subfield(n), 1)


def real_subfield(n):
    return {4: 1, 8: 2, 12: 3}[n]


def test_embed_examples():
    assert embed(Z(4), 0) == pytest.approx(1j, abs=1e-15)
    assert embed(Z(8), 0) == pytest.approx(cmath.exp(1j * math.pi / 4), abs=1e-15)
    data = embedding_data(12)
    assert len(data.zeta_images) == num_places(12) == 2
    assert all(abs(abs(z) - 1) < 1e-15 for z in data.zeta_images)
    assert data.sqrt_m_images[0] > 0 > data.sqrt_m_images[1]
    with pytest.raises(ValueError):
        embed(Z(4), 1)


def test_norm_examples():
    assert field_norm_to_Q(CycloElement(4, (1, 2))) == 5
    assert field_norm_to_Q(one(8) + Z(8)) == 2
    assert real_norm_to_Q(RealQuadElement(2, 2, 1)) == 2
    assert field_norm_to_Q(CycloElement(12, (0, 0, 0, 0))) == 0


def test_real_element_basics():
    a = RealQuadElement(3, Fraction(1, 2), 1)
    assert not a.is_totally_positive()
    assert RealQuadElement(3, 2, 1).is_totally_positive()
    assert RealQuadElement.from_dict(a.to_dict()) == a
    assert str(RealQuadElement(2, 2, -1)) == "2-1*sqrt(2)"
    with pytest.raises(ValueError):
        RealQuadElement(1, 1, 1)
    with pytest.raises(ValueError):
        RealQuadElement(5, 1, 1)


def test_from_real_to_real():
    for n, alpha in [(4, RealQuadElement(1, 7)), (8, RealQuadElement(2, 3, -2)), (12, RealQuadElement(3, -1, 5))]:
        b = from_real(alpha, n)
        assert conj(b) == b
        assert to_real(b) == alpha
    with pytest.raises(ArithmeticError):
        to_real(Z(8))
    with pytest.raises(ValueError):
        from_real(RealQuadElement(2, Fraction(1, 2)), 8)


def test_wrong_length_rejected():
    with pytest.raises(ValueError):
        CycloElement(8, (1, 2))
    with pytest.raises(ValueError):
        CycloElement(6, (1, 2))


@given(triples())
def test_ring_axioms(t):
    a, b, c = t
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + (-a) == CycloElement.from_int(a.n, 0)
    assert a * one(a.n) == a


@given(triples())
def test_conj_homomorphism(t):
    a, b, _ = t
    assert conj(a * b) == conj(a) * conj(b)
    assert conj(a + b) == conj(a) + conj(b)
    assert conj(conj(a)) == a


@given(triples())
def test_relative_norm_multiplicative(t):
    a, b, _ = t
    assert relative_norm(a * b) == relative_norm(a) * relative_norm(b)


@given(elements())
def test_tower_consistency(a):
    assert field_norm_to_Q(a) == real_norm_to_Q(relative_norm(a))


@given(elements())
def test_field_norm_against_embeddings(a):
    # |N_{K/Q}(a)| is the product over all complex embeddings
    n = a.n
    prod = 1.0
    for j in range(1, n):
        if math.gcd(j, n) == 1:
            z = cmath.exp(2j * math.pi * j / n)
            prod *= abs(sum(c * z**i for i, c in enumerate(a.coords)))
    assert prod == pytest.approx(field_norm_to_Q(a), rel=1e-9, abs=1e-6)


@given(triples())
def test_embed_multiplicative(t):
    a, b, _ = t
    for v in range(num_places(a.n)):
        lhs, rhs = embed(a * b, v), embed(a, v) * embed(b, v)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


@given(elements())
def test_embed_abs_squared_is_real_embedding_of_norm(a):
    alpha = relative_norm(a)
    for v in range(num_places(a.n)):
        lhs = abs(embed(a, v)) ** 2
        rhs = alpha.embed(v)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))
