"""Exact arithmetic over Q and real quadratic extensions Q(t) with t**2 = p*t + q.

Scalars are Python ints, fractions.Fraction, or FieldElement.  A quadratic
field is fixed by the pair (p, q) of its defining polynomial X**2 - p*X - q;
two descriptors denote the same field only if (p, q) match literally.  All
values are immutable and all operations are pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

__all__ = [
    "FieldMismatch",
    "QuadExt",
    "FieldElement",
    "QuadraticFactor",
    "as_fraction",
    "fraction_sqrt",
    "conj",
    "trace",
    "norm",
    "quad_mul",
    "factor_small",
    "format_element",
    "parse_element",
    "poly_trim",
    "poly_degree",
    "poly_add",
    "poly_sub",
    "poly_scale",
    "poly_mul",
    "poly_eval",
    "poly_divmod",
]


class FieldMismatch(ValueError):
    """Operands live in different quadratic fields."""


def as_fraction(x):
    """Coerce an int or Fraction to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected a rational value, got {type(x).__name__}")


def fraction_sqrt(x):
    """Exact square root of a nonnegative rational, or None if not a square."""
    x = as_fraction(x)
    if x < 0:
        return None
    rn, rd = isqrt(x.numerator), isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def _fmt_frac(x) -> str:
    x = as_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class QuadExt:
    """Real quadratic field Q(t), t a root of X**2 - p*X - q."""

    p: Fraction
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", as_fraction(self.p))
        object.__setattr__(self, "q", as_fraction(self.q))
        d = self.disc
        if d <= 0:
            raise ValueError(f"descriptor {self} is not a real quadratic field")
        if fraction_sqrt(d) is not None:
            raise ValueError(f"X^2 - {self.p}X - {self.q} is reducible over Q")

    @property
    def disc(self) -> Fraction:
        return self.p * self.p + 4 * self.q

    def gen(self) -> "FieldElement":
        """The generator t with t**2 = p*t + q."""
        return FieldElement(0, 1, self)

    def __str__(self) -> str:
        return f"({_fmt_frac(self.p)},{_fmt_frac(self.q)})"


class FieldElement:
    """Value a + b*t in a quadratic extension; mixes freely with rationals."""

    __slots__ = ("a", "b", "ext")

    def __init__(self, a, b, ext: QuadExt):
        if not isinstance(ext, QuadExt):
            raise TypeError("ext must be a QuadExt descriptor")
        self.a = as_fraction(a)
        self.b = as_fraction(b)
        self.ext = ext

    # -- helpers ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.ext != self.ext:
                raise FieldMismatch(f"{self.ext} vs {other.ext}")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(other, 0, self.ext)
        return None

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def rational_value(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is not rational")
        return self.a

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.a + o.a, self.b + o.b, self.ext)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.a - o.a, self.b - o.b, self.ext)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(o.a - self.a, o.b - self.b, self.ext)

    def __neg__(self):
        return FieldElement(-self.a, -self.b, self.ext)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # (a1 + b1 t)(a2 + b2 t), reduced by t^2 = p t + q
        bb = self.b * o.b
        return FieldElement(
            self.a * o.a + bb * self.ext.q,
            self.a * o.b + self.b * o.a + bb * self.ext.p,
            self.ext,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        nrm = o.a * o.a + o.a * o.b * o.ext.p - o.b * o.b * o.ext.q
        if nrm == 0:
            raise ZeroDivisionError("division by zero field element")
        num = self * o.conj()
        return FieldElement(num.a / nrm, num.b / nrm, self.ext)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        acc = FieldElement(1, 0, self.ext)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    # -- structure -------------------------------------------------------

    def conj(self) -> "FieldElement":
        """Image under the nontrivial automorphism t -> p - t."""
        return FieldElement(self.a + self.b * self.ext.p, -self.b, self.ext)

    def trace(self) -> Fraction:
        return 2 * self.a + self.b * self.ext.p

    def norm(self) -> Fraction:
        return self.a * self.a + self.a * self.b * self.ext.p - self.b * self.b * self.ext.q

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if other.ext != self.ext:
                return self.b == 0 and other.b == 0 and self.a == other.a
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.ext))

    def __repr__(self):
        return format_element(self)


# -- module-level operations ----------------------------------------------


def quad_mul(x, y):
    """Product of two field elements sharing one descriptor."""
    if isinstance(x, FieldElement):
        return x * y
    if isinstance(y, FieldElement):
        return y * x
    return as_fraction(x) * as_fraction(y)


def conj(x):
    """Quadratic conjugate; rationals are fixed."""
    if isinstance(x, FieldElement):
        return x.conj()
    return x


def trace(x):
    """x + conj(x); always rational."""
    if isinstance(x, FieldElement):
        return x.trace()
    return 2 * x


def norm(x):
    """x * conj(x); always rational."""
    if isinstance(x, FieldElement):
        return x.norm()
    return x * x


# -- small polynomials over Q ----------------------------------------------
#
# Coefficient lists run low to high degree.


def poly_trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def poly_degree(cs) -> int:
    cs = poly_trim(cs)
    return len(cs) - 1 if cs else -1


def poly_add(a, b):
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def poly_sub(a, b):
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def poly_scale(a, c):
    return poly_trim([ci * c for ci in a])


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return poly_trim(out)


def poly_eval(cs, x):
    acc = 0
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def poly_divmod(a, b):
    """Exact polynomial division with remainder over Q."""
    a = [as_fraction(c) for c in poly_trim(a)]
    b = [as_fraction(c) for c in poly_trim(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = a[:]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / b[-1]
        q[shift] = f
        for i, bi in enumerate(b):
            r[shift + i] -= f * bi
        r = poly_trim(r)
    return poly_trim(q), r


# -- factorization of small characteristic polynomials ----------------------


@dataclass(frozen=True)
class QuadraticFactor:
    """Monic irreducible quadratic X**2 - p*X - q with reality flag."""

    p: Fraction
    q: Fraction
    totally_real: bool

    @property
    def disc(self) -> Fraction:
        return self.p * self.p + 4 * self.q

    def ext(self) -> QuadExt:
        if not self.totally_real:
            raise ValueError("factor is not totally real")
        return QuadExt(self.p, self.q)


def _int_divisors(n: int):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _rational_root(ints):
    """One rational root of an integer-coefficient polynomial, or None."""
    if ints[0] == 0:
        return Fraction(0)
    for r in _int_divisors(ints[0]):
        for s in _int_divisors(ints[-1]):
            for cand in (Fraction(r, s), Fraction(-r, s)):
                if poly_eval(ints, cand) == 0:
                    return cand
    return None


def factor_small(coeffs, max_degree: int = 5):
    """Factor a low-degree rational polynomial into linear and quadratic parts.

    Returns (roots, quadratics): rational roots with multiplicity, sorted in
    descending order, and irreducible monic quadratics as QuadraticFactor
    records.  Raises if the degree exceeds max_degree or an irreducible
    factor of degree > 2 remains after stripping rational roots.
    """
    cs = poly_trim([as_fraction(c) for c in coeffs])
    deg = len(cs) - 1
    if deg < 0:
        raise ValueError("zero polynomial")
    if deg > max_degree:
        raise ValueError(f"degree {deg} exceeds limit {max_degree}")
    roots = []
    work = cs[:]
    while poly_degree(work) >= 1:
        den = 1
        for c in work:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [int(c * den) for c in work]
        g = 0
        for c in ints:
            g = _gcd(g, abs(c))
        ints = [c // g for c in ints]
        r = _rational_root(ints)
        if r is None:
            break
        roots.append(r)
        work, rem = poly_divmod(work, [-r, Fraction(1)])
        assert not rem
    deg = poly_degree(work)
    quads = []
    if deg == 2:
        a2, a1, a0 = work[2], work[1], work[0]
        p = -a1 / a2
        q = -a0 / a2
        disc = p * p + 4 * q
        quads.append(QuadraticFactor(p, q, totally_real=disc > 0))
    elif deg > 0:
        raise ValueError(f"irreducible factor of degree {deg} over Q")
    return sorted(roots, reverse=True), quads


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# -- serialization -----------------------------------------------------------
#
# Field elements print as "a" or "a+b*t@(p,q)" with each part a lowest-terms
# fraction "num/den" (integers drop the "/den").

_FRAC = r"-?\d+(?:/\d+)?"
_ELEM_RE = re.compile(rf"^({_FRAC})\+({_FRAC})\*t@\(({_FRAC}),({_FRAC})\)$")


def format_element(x) -> str:
    if isinstance(x, FieldElement):
        if x.b == 0:
            return _fmt_frac(x.a)
        return f"{_fmt_frac(x.a)}+{_fmt_frac(x.b)}*t@{x.ext}"
    return _fmt_frac(x)


def parse_element(s: str):
    """Inverse of format_element; returns Fraction or FieldElement."""
    s = s.strip().replace(" ", "")
    m = _ELEM_RE.match(s)
    if m:
        a, b, p, q = (Fraction(g) for g in m.groups())
        return FieldElement(a, b, QuadExt(p, q))
    try:
        return Fraction(s)
    except ValueError:
        raise ValueError(f"cannot parse field element {s!r}") from None
