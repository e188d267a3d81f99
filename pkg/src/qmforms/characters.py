"""Real Dirichlet characters, generalized Bernoulli numbers, twisted divisor sums.

Only real-valued characters are supported (values in {0, 1, -1}): principal
characters of any modulus and the quadratic (Legendre) character for an odd
prime modulus.  That keeps every coefficient field rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd

from .qseries import QSeries

__all__ = [
    "DirichletCharacter",
    "trivial_character",
    "principal_character",
    "quadratic_character",
    "make_character",
    "gen_bernoulli",
    "bernoulli",
    "sigma_twisted",
    "twist",
    "twisted_level",
]


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    values: tuple
    primitive: bool
    name: str

    def __call__(self, n: int) -> int:
        return self.values[n % self.modulus]

    @property
    def parity(self) -> int:
        """Value at -1: +1 for even characters, -1 for odd ones."""
        return self.values[-1 % self.modulus]

    def is_trivial(self) -> bool:
        return self.modulus == 1

    def __str__(self) -> str:
        return self.name

    def to_record(self) -> dict:
        return {"modulus": self.modulus, "values": list(self.values)}


@lru_cache(maxsize=None)
def trivial_character() -> DirichletCharacter:
    """The primitive character of modulus 1 (constant 1, including at 0)."""
    return DirichletCharacter(1, (1,), True, "one")


@lru_cache(maxsize=None)
def principal_character(n: int) -> DirichletCharacter:
    if n < 1:
        raise ValueError("modulus must be positive")
    if n == 1:
        return trivial_character()
    vals = tuple(1 if gcd(c, n) == 1 else 0 for c in range(n))
    return DirichletCharacter(n, vals, False, f"chi0_{n}")


def _is_odd_prime(m: int) -> bool:
    if m < 3 or m % 2 == 0:
        return False
    d = 3
    while d * d <= m:
        if m % d == 0:
            return False
        d += 2
    return True


@lru_cache(maxsize=None)
def quadratic_character(m: int) -> DirichletCharacter:
    """Legendre symbol character modulo an odd prime m."""
    if not _is_odd_prime(m):
        raise ValueError(f"unsupported modulus {m} for a quadratic character")
    vals = [0] * m
    for c in range(1, m):
        e = pow(c, (m - 1) // 2, m)
        vals[c] = 1 if e == 1 else -1
    return DirichletCharacter(m, tuple(vals), True, f"chi{m}")


def make_character(kind: str, modulus: int | None = None) -> DirichletCharacter:
    if kind == "trivial":
        return trivial_character()
    if kind == "principal":
        return principal_character(modulus)
    if kind == "quadratic":
        return quadratic_character(modulus)
    raise ValueError(f"unknown character kind {kind!r}")


def _series_divide(num, den, order):
    """Coefficientwise division of truncated power series over Q."""
    if den[0] == 0:
        raise ZeroDivisionError("denominator series has zero constant term")
    out = []
    for n in range(order + 1):
        s = num[n] if n < len(num) else Fraction(0)
        for k in range(1, n + 1):
            if k < len(den):
                s -= den[k] * out[n - k]
        out.append(s / den[0])
    return out


@lru_cache(maxsize=None)
def gen_bernoulli(chi: DirichletCharacter, k: int) -> Fraction:
    """Generalized Bernoulli number attached to chi, exact.

    Defined by sum_c chi(c) t e^{ct} / (e^{Mt} - 1); for the trivial
    character this is the classical Bernoulli number.
    """
    if k < 0:
        raise ValueError("index must be nonnegative")
    m = chi.modulus
    num = [Fraction(sum(chi(c) * c**j for c in range(m)), factorial(j)) for j in range(k + 1)]
    den = [Fraction(m ** (j + 1), factorial(j + 1)) for j in range(k + 1)]
    coeffs = _series_divide(num, den, k)
    return coeffs[k] * factorial(k)


def bernoulli(k: int) -> Fraction:
    """Classical Bernoulli number B_k."""
    return gen_bernoulli(trivial_character(), k)


def sigma_twisted(psi: DirichletCharacter, phi: DirichletCharacter, k: int, n: int) -> int:
    """Twisted divisor power sum over d | n of psi(n/d) phi(d) d**k; 0 for n <= 0."""
    if n <= 0:
        return 0
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            e = n // d
            total += psi(e) * phi(d) * d**k
            if e != d:
                total += psi(d) * phi(e) * e**k
        d += 1
    return total


def twist(f: QSeries, chi: DirichletCharacter) -> QSeries:
    """Coefficientwise multiplication by chi(n)."""
    vals = chi.values
    m = chi.modulus
    return QSeries([c * vals[n % m] if c else 0 for n, c in enumerate(f.coeffs)], f.prec, f.ext)


def twisted_level(level: int, chi: DirichletCharacter) -> int:
    m2 = chi.modulus * chi.modulus
    g = gcd(level, m2)
    return level // g * m2
