"""Exact arithmetic in Z[zeta_n] for n in {4, 8, 12} and in the real subfield Q(sqrt m).

Elements of Z[zeta_n] are integer coordinate tuples in the power basis
1, zeta, zeta^2, ... reduced modulo the cyclotomic polynomial. The maximal real
subfield F is Q (n = 4), Q(sqrt 2) (n = 8) or Q(sqrt 3) (n = 12); its elements
are x + y sqrt(m) with rational x, y.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

# Phi_n as low-to-high coefficients, monic
CYCLOTOMIC = {
    4: (1, 0, 1),
    8: (1, 0, 0, 0, 1),
    12: (1, 0, -1, 0, 1),
}
REAL_SUBFIELD_M = {4: 1, 8: 2, 12: 3}
# sqrt(m) in power-basis coordinates: n=8: zeta - zeta^3; n=12: 2 zeta - zeta^3
SQRT_M = {4: (1, 0), 8: (0, 1, 0, -1), 12: (0, 2, 0, -1)}
# exponent j of the complex embedding zeta -> exp(2 pi i j / n), one per real place;
# the first sends sqrt(m) to +sqrt(m)
PLACE_EXPONENTS = {4: (1,), 8: (1, 3), 12: (1, 5)}


def _check_n(n: int) -> None:
    if n not in CYCLOTOMIC:
        raise ValueError(f"unsupported cyclotomic index n={n}; use 4, 8 or 12")


def degree(n: int) -> int:
    return len(CYCLOTOMIC[n]) - 1


def _reduce(poly: list[int], n: int) -> tuple[int, ...]:
    phi = CYCLOTOMIC[n]
    deg = len(phi) - 1
    poly = list(poly)
    for i in range(len(poly) - 1, deg - 1, -1):
        c = poly[i]
        if c:
            for j in range(deg + 1):
                poly[i - deg + j] -= c * phi[j]
    poly = poly[:deg] + [0] * max(0, deg - len(poly))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power(n: int, e: int) -> tuple[int, ...]:
    """zeta^e in coordinates."""
    return _reduce([0] * e + [1], n)


@dataclass(frozen=True)
class CycloElement:
    n: int
    coords: tuple[int, ...]

    def __post_init__(self):
        _check_n(self.n)
        coords = tuple(int(c) for c in self.coords)
        if len(coords) != degree(self.n):
            raise ValueError(f"need {degree(self.n)} coordinates for n={self.n}, got {len(coords)}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_int(cls, n: int, a: int) -> "CycloElement":
        return cls(n, (a,) + (0,) * (degree(n) - 1))

    @classmethod
    def zeta(cls, n: int) -> "CycloElement":
        return cls(n, _power(n, 1))

    def _same(self, other):
        if not isinstance(other, CycloElement):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"mixed cyclotomic fields: n={self.n} and n={other.n}")
        return other

    def __add__(self, other):
        other = self._same(other)
        return CycloElement(self.n, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        other = self._same(other)
        return CycloElement(self.n, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return CycloElement(self.n, tuple(-a for a in self.coords))

    def __mul__(self, other):
        return mul(self, other)

    def __pow__(self, e: int):
        out = CycloElement.from_int(self.n, 1)
        for _ in range(e):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not any(self.coords)


def mul(a: CycloElement, b: CycloElement) -> CycloElement:
    if a.n != b.n:
        raise ValueError(f"mixed cyclotomic fields: n={a.n} and n={b.n}")
    prod = [0] * (2 * len(a.coords) - 1)
    for i, x in enumerate(a.coords):
        if x:
            for j, y in enumerate(b.coords):
                prod[i + j] += x * y
    return CycloElement(a.n, _reduce(prod, a.n))


@lru_cache(maxsize=None)
def _conj_images(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(_power(n, (n - j) % n) for j in range(degree(n)))


def conj(a: CycloElement) -> CycloElement:
    """Complex conjugation zeta -> zeta^(n-1)."""
    out = [0] * degree(a.n)
    for c, img in zip(a.coords, _conj_images(a.n)):
        if c:
            for i, v in enumerate(img):
                out[i] += c * v
    return CycloElement(a.n, tuple(out))


@dataclass(frozen=True)
class RealQuadElement:
    """x + y sqrt(m); m = 1 stands for plain rationals (y = 0)."""

    m: int
    x: Fraction
    y: Fraction = Fraction(0)

    def __post_init__(self):
        if self.m not in (1, 2, 3):
            raise ValueError(f"m must be 1, 2 or 3, got {self.m}")
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        if self.m == 1 and self.y != 0:
            raise ValueError("y must vanish when m = 1")

    def _same(self, other):
        if not isinstance(other, RealQuadElement):
            return NotImplemented
        if other.m != self.m:
            raise ValueError(f"mixed real fields: m={self.m} and m={other.m}")
        return other

    def __add__(self, other):
        other = self._same(other)
        return RealQuadElement(self.m, self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        other = self._same(other)
        return RealQuadElement(self.m, self.x - other.x, self.y - other.y)

    def __mul__(self, other):
        other = self._same(other)
        return RealQuadElement(
            self.m,
            self.x * other.x + self.m * self.y * other.y,
            self.x * other.y + self.y * other.x,
        )

    @property
    def degree(self) -> int:
        return 1 if self.m == 1 else 2

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_totally_positive(self) -> bool:
        # x + y sqrt m > 0 and x - y sqrt m > 0  <=>  x > 0 and x^2 > m y^2
        return self.x > 0 and self.x * self.x > self.m * self.y * self.y

    def embed(self, place: int) -> float:
        """sigma_v(self); place 0 sends sqrt(m) to +sqrt(m), place 1 to -sqrt(m)."""
        if place not in range(self.degree):
            raise ValueError(f"place {place} out of range for m={self.m}")
        s = math.sqrt(self.m) if place == 0 else -math.sqrt(self.m)
        return float(self.x) + float(self.y) * s

    def to_dict(self) -> dict:
        return {"m": self.m, "x": str(self.x), "y": str(self.y)}

    @classmethod
    def from_dict(cls, doc: dict) -> "RealQuadElement":
        return cls(doc["m"], Fraction(doc["x"]), Fraction(doc["y"]))

    def __str__(self):
        if self.m == 1:
            return str(self.x)
        return f"{self.x}{'+' if self.y >= 0 else '-'}{abs(self.y)}*sqrt({self.m})"


def real_subfield_m(n: int) -> int:
    _check_n(n)
    return REAL_SUBFIELD_M[n]


def from_real(alpha: RealQuadElement, n: int) -> CycloElement:
    """Image of an integral element of F in Z[zeta_n]."""
    if alpha.m != real_subfield_m(n):
        raise ValueError(f"alpha lives in Q(sqrt {alpha.m}), not the real subfield for n={n}")
    if alpha.x.denominator != 1 or alpha.y.denominator != 1:
        raise ValueError("only integral elements embed in Z[zeta_n] coordinates")
    out = CycloElement.from_int(n, int(alpha.x))
    if alpha.y:
        out = out + CycloElement(n, tuple(int(alpha.y) * c for c in SQRT_M[n]))
    return out


def to_real(a: CycloElement) -> RealQuadElement:
    """Inverse of from_real on conj-fixed elements."""
    m = REAL_SUBFIELD_M[a.n]
    c = a.coords
    if a.n == 4:
        if c[1] != 0:
            raise ArithmeticError(f"{a} is not real")
        return RealQuadElement(1, c[0])
    if a.n == 8:
        x, y = c[0], c[1]
        ok = c[2] == 0 and c[3] == -y
    else:
        x, y = c[0], -c[3]
        ok = c[2] == 0 and c[1] == 2 * y
    if not ok:
        raise ArithmeticError(f"{a} does not lie in Q(sqrt {m})")
    return RealQuadElement(m, x, y)


def relative_norm(a: CycloElement) -> RealQuadElement:
    """beta * conj(beta), an element of F."""
    prod = mul(a, conj(a))
    if conj(prod) != prod:
        raise AssertionError(f"relative norm of {a} is not fixed by conjugation")
    return to_real(prod)


@dataclass(frozen=True)
class EmbeddingData:
    n: int
    sqrt_m_images: tuple[float, ...]
    zeta_images: tuple[complex, ...]


@lru_cache(maxsize=None)
def embedding_data(n: int) -> EmbeddingData:
    _check_n(n)
    m = REAL_SUBFIELD_M[n]
    zetas = tuple(cmath.exp(2j * math.pi * j / n) for j in PLACE_EXPONENTS[n])
    signs = (1.0, -1.0)[: len(zetas)]
    return EmbeddingData(n, tuple(s * math.sqrt(m) for s in signs), zetas)


def num_places(n: int) -> int:
    return degree(n) // 2


def embed(a: CycloElement, place: int) -> complex:
    data = embedding_data(a.n)
    if place not in range(len(data.zeta_images)):
        raise ValueError(f"place {place} out of range for n={a.n}")
    z = data.zeta_images[place]
    return sum(c * z**j for j, c in enumerate(a.coords))


def _bareiss_det(mat: list[list[int]]) -> int:
    m = [row[:] for row in mat]
    size = len(m)
    sign, prev = 1, 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def field_norm_to_Q(a: CycloElement) -> int:
    """|N_{K/Q}(a)| as the determinant of multiplication by a."""
    cols = [mul(a, CycloElement(a.n, _power(a.n, j))).coords for j in range(degree(a.n))]
    mat = [[cols[j][i] for j in range(len(cols))] for i in range(len(cols))]
    return abs(_bareiss_det(mat))


def real_norm_to_Q(alpha: RealQuadElement) -> Fraction:
    """|N_{F/Q}(alpha)|."""
    if alpha.m == 1:
        return abs(alpha.x)
    return abs(alpha.x * alpha.x - alpha.m * alpha.y * alpha.y)


def _check_sqrt_identification() -> None:
    for n, m in REAL_SUBFIELD_M.items():
        s = CycloElement(n, SQRT_M[n])
        if mul(s, s) != CycloElement.from_int(n, m):
            raise AssertionError(f"sqrt({m}) identification wrong for n={n}")
        if conj(s) != s:
            raise AssertionError(f"sqrt({m}) image not real for n={n}")


_check_sqrt_identification()
