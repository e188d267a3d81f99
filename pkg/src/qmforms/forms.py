"""Named generators and exact echelon bases for spaces of modular forms.

The catalog covers Eisenstein series, the weight-2 combinations phi(a,b),
character Eisenstein series, eta-quotient cusp forms and the handful of
derived constructions (rescalings, products, a cube root, one Rankin-Cohen
bracket) the identity engine needs.  Space dimensions are pinned in a table
and every generator pool is rank-checked against it when echelonized.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import oracle
from .characters import (
    DirichletCharacter,
    bernoulli,
    gen_bernoulli,
    principal_character,
    quadratic_character,
    sigma_twisted,
    trivial_character,
    twist,
    twisted_level,
)
from .exactnum import format_element
from .qseries import QSeries, eta_quotient, one, rc_bracket1

__all__ = [
    "DEFAULT_PREC",
    "FormExpr",
    "SpaceBasis",
    "DIMENSIONS",
    "dimension",
    "eisenstein",
    "phi",
    "char_eisenstein",
    "named_form",
    "catalog_labels",
    "space_basis",
    "generator_pool",
    "evaluate",
    "parse_expr",
    "eta_expr",
    "eis",
    "eis_level",
    "phi_expr",
    "char_eis_expr",
    "rescale_expr",
    "derive_expr",
    "product_expr",
    "power_expr",
    "root_expr",
    "rc1_expr",
    "twist_expr",
    "scale_expr",
    "sum_expr",
    "named",
    "const_expr",
]

DEFAULT_PREC = 256


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# ---------------------------------------------------------------------------
# form expressions


@dataclass(frozen=True)
class FormExpr:
    """Symbolic description of a form with weight/depth/level metadata."""

    kind: str
    children: tuple
    params: tuple
    weight: int
    depth: int
    level: int

    def __str__(self) -> str:
        return expr_str(self)


def _check_meta(weight: int, depth: int, level: int):
    if depth < 0 or level < 1:
        raise ValueError("bad form metadata")
    if weight < 0 or weight % 2:
        raise ValueError(f"weight must be even and nonnegative, got {weight}")
    if 2 * depth > weight:
        raise ValueError(f"depth {depth} exceeds weight/2 for weight {weight}")


def _mk(kind, children=(), params=(), weight=0, depth=0, level=1) -> FormExpr:
    _check_meta(weight, depth, level)
    return FormExpr(kind, tuple(children), tuple(params), weight, depth, level)


def _eta_level(spec) -> int:
    """Smallest multiple L of lcm(d) with sum (L/d) r_d divisible by 24."""
    base = 1
    for d, _ in spec:
        base = _lcm(base, d)
    for k in range(1, 25):
        level = k * base
        if sum((level // d) * r for d, r in spec) % 24 == 0:
            return level
    return 24 * base


def eta_expr(spec, level: int | None = None) -> FormExpr:
    spec = tuple((int(d), int(r)) for d, r in spec)
    wt2 = sum(r for _, r in spec)
    if wt2 % 2:
        raise ValueError("eta quotient of half-integral weight")
    return _mk("eta", params=(spec,), weight=wt2 // 2, level=level or _eta_level(spec))


def eis(k: int) -> FormExpr:
    return _mk("eis", params=(k,), weight=k, depth=1 if k == 2 else 0, level=1)


def eis_level(k: int, n: int) -> FormExpr:
    if n == 1:
        return eis(k)
    return _mk("eis_level", params=(k, n), weight=k, depth=1 if k == 2 else 0, level=n)


def phi_expr(a: int, b: int) -> FormExpr:
    return _mk("phi", params=(a, b), weight=2, level=b)


def char_eis_expr(k: int, psi: DirichletCharacter, chi: DirichletCharacter, t: int) -> FormExpr:
    return _mk("char_eis", params=(k, psi, chi, t), weight=k,
               level=max(t * psi.modulus * chi.modulus, 1))


def rescale_expr(e: FormExpr, d: int) -> FormExpr:
    return _mk("rescale", (e,), (d,), e.weight, e.depth, e.level * d)


def derive_expr(e: FormExpr, i: int = 1) -> FormExpr:
    if i == 0:
        return e
    return _mk("derive", (e,), (i,), e.weight + 2 * i, e.depth + i, e.level)


def product_expr(*es: FormExpr) -> FormExpr:
    lvl = 1
    for e in es:
        lvl = _lcm(lvl, e.level)
    return _mk("product", es, (), sum(e.weight for e in es), sum(e.depth for e in es), lvl)


def power_expr(e: FormExpr, m: int) -> FormExpr:
    return _mk("power", (e,), (m,), e.weight * m, e.depth * m, e.level)


def root_expr(e: FormExpr, n: int) -> FormExpr:
    if e.weight % n:
        raise ValueError("weight not divisible by root order")
    if e.depth:
        raise ValueError("roots only of depth-0 forms")
    return _mk("root", (e,), (n,), e.weight // n, 0, e.level)


def rc1_expr(f: FormExpr, g: FormExpr) -> FormExpr:
    if f.depth or g.depth:
        raise ValueError("bracket arguments must be modular (depth 0)")
    return _mk("rc1", (f, g), (), f.weight + g.weight + 2, 0, _lcm(f.level, g.level))


def twist_expr(e: FormExpr, chi: DirichletCharacter) -> FormExpr:
    return _mk("twist", (e,), (chi,), e.weight, e.depth, twisted_level(e.level, chi))


def scale_expr(c, e: FormExpr) -> FormExpr:
    if isinstance(c, int):
        c = Fraction(c)
    return _mk("scale", (e,), (c,), e.weight, e.depth, e.level)


def sum_expr(*es: FormExpr) -> FormExpr:
    lvl = 1
    for e in es:
        lvl = _lcm(lvl, e.level)
    return _mk("sum", es, (), max(e.weight for e in es), max(e.depth for e in es), lvl)


def named(label: str, weight: int, depth: int, level: int) -> FormExpr:
    return _mk("named", params=(label,), weight=weight, depth=depth, level=level)


def const_expr(c) -> FormExpr:
    if isinstance(c, int):
        c = Fraction(c)
    return _mk("const", params=(c,))


def _paren(s: str) -> str:
    return f"({s})" if (" " in s or "+" in s[1:] or "-" in s[1:]) else s


def expr_str(e: FormExpr) -> str:
    k = e.kind
    if k == "eta":
        body = "*".join(f"{d}^{r}" if r != 1 else f"{d}" for d, r in e.params[0])
        return f"eta({body})"
    if k == "eis":
        return f"E({e.params[0]})"
    if k == "eis_level":
        return f"E({e.params[0]},{e.params[1]})"
    if k == "phi":
        return f"phi({e.params[0]},{e.params[1]})"
    if k == "char_eis":
        kk, psi, chi, t = e.params
        return f"chareis({kk},{psi},{chi},{t})"
    if k == "rescale":
        return f"rescale({e.children[0]},{e.params[0]})"
    if k == "derive":
        i = e.params[0]
        prefix = "D" if i == 1 else f"D^{i}"
        return f"{prefix}({e.children[0]})"
    if k == "product":
        return "*".join(_paren(str(c)) for c in e.children)
    if k == "power":
        return f"{_paren(str(e.children[0]))}^{e.params[0]}"
    if k == "root":
        return f"root({e.children[0]},{e.params[0]})"
    if k == "rc1":
        return f"rc1({e.children[0]},{e.children[1]})"
    if k == "twist":
        return f"twist({e.children[0]},{e.params[0]})"
    if k == "scale":
        return f"({format_element(e.params[0])})*{_paren(str(e.children[0]))}"
    if k == "sum":
        return " + ".join(_paren(str(c)) for c in e.children)
    if k == "named":
        return e.params[0]
    if k == "const":
        return format_element(e.params[0])
    raise ValueError(f"unknown expression kind {k!r}")


# ---------------------------------------------------------------------------
# basic series


def _tighten(f: QSeries) -> QSeries:
    cs = [c.numerator if isinstance(c, Fraction) and c.denominator == 1 else c for c in f.coeffs]
    return QSeries(cs, f.prec, f.ext)


def eisenstein(k: int, n: int = 1, prec: int = DEFAULT_PREC) -> QSeries:
    """E_k(n z) = 1 - (2k/B_k) sum sigma_{k-1}(m) q^{nm}."""
    if k < 2 or k % 2:
        raise ValueError(f"Eisenstein weight must be even and >= 2, got {k}")
    scale = -Fraction(2 * k) / bernoulli(k)
    if scale.denominator == 1:
        scale = scale.numerator
    sig = oracle.sigma_table(k - 1, prec // n)
    cs = [0] * (prec + 1)
    cs[0] = 1
    for m in range(1, prec // n + 1):
        cs[n * m] = scale * sig[m]
    return QSeries(cs, prec)


def phi(a: int, b: int, prec: int = DEFAULT_PREC) -> QSeries:
    """The weight-2 form (b E_2(bz) - a E_2(az)) / (b - a) for a | b, a < b."""
    if not (1 <= a < b and b % a == 0):
        raise ValueError(f"phi requires 1 <= a < b with a | b, got ({a},{b})")
    siga = oracle.sigma_table(1, prec // a)
    sigb = oracle.sigma_table(1, prec // b)
    den = b - a
    cs = [0] * (prec + 1)
    cs[0] = 1
    for m in range(1, prec + 1):
        s = 0
        if m % b == 0:
            s -= 24 * b * sigb[m // b]
        if m % a == 0:
            s += 24 * a * siga[m // a]
        if s:
            v = Fraction(s, den)
            cs[m] = v.numerator if v.denominator == 1 else v
    return QSeries(cs, prec)


def char_eisenstein(k: int, psi: DirichletCharacter, chi: DirichletCharacter, t: int = 1,
                    prec: int = DEFAULT_PREC) -> QSeries:
    """Character Eisenstein series, rescaled by z -> t z.

    The excluded (k, psi, chi) = (2, trivial, trivial) case with t > 1 returns
    E_2(z) - t E_2(tz); with t = 1 it is rejected.
    """
    if k < 2 or k % 2:
        raise ValueError("weight must be even and >= 2")
    if psi.parity * chi.parity != (1 if k % 2 == 0 else -1):
        raise ValueError("character parities incompatible with the weight")
    if k == 2 and psi.is_trivial() and chi.is_trivial():
        if t == 1:
            raise ValueError("the weight-2 trivial pair requires t > 1")
        e2 = eisenstein(2, 1, prec)
        return e2 - t * eisenstein(2, t, prec)
    bk = gen_bernoulli(chi, k)
    if bk == 0:
        raise ValueError("vanishing generalized Bernoulli number")
    scale = -Fraction(2 * k) / bk
    cs = [0] * (prec + 1)
    cs[0] = 1 if psi.is_trivial() else 0
    for m in range(1, prec // t + 1):
        s = sigma_twisted(psi, chi, k - 1, m)
        if s:
            v = scale * s
            cs[t * m] = v.numerator if v.denominator == 1 else v
    return QSeries(cs, prec)


# ---------------------------------------------------------------------------
# catalog of named constructions


def _cat_eta(label, spec, level=None):
    def build(prec):
        return eta_expr(spec, level), eta_quotient(spec, prec)

    return build


def _cat_delta_4_7(prec):
    parts = [((1, 16), (7, 8)), ((1, 12), (7, 12)), ((1, 8), (7, 16))]
    scalars = [1, 13, 49]
    s = None
    for c, spec in zip(scalars, parts):
        term = c * eta_quotient(spec, prec + 2)
        s = term if s is None else s + term
    expr = root_expr(
        sum_expr(
            eta_expr(parts[0]),
            scale_expr(13, eta_expr(parts[1])),
            scale_expr(49, eta_expr(parts[2])),
        ),
        3,
    )
    return expr, s.root(3).truncate(prec)


def _cat_delta_6_5(prec):
    e, s = named_form("delta_4_5", prec)
    return product_expr(e, phi_expr(1, 5)), _tighten(s * phi(1, 5, prec))


def _cat_rescale(label, base, d):
    def build(prec):
        e, s = named_form(base, prec)
        return rescale_expr(e, d), s.rescale(d).truncate(prec)

    return build


def _cat_f_6_10(prec):
    e, s = named_form("delta_4_5", prec)
    p = _tighten(3 * phi(1, 10, prec))
    return scale_expr(3, product_expr(e, phi_expr(1, 10))), s * p


def _cat_hecke(label, base, p, weight, level):
    def build(prec):
        _, s = named_form(base, p * prec)
        meta = named_form(base, 8)[0]
        return (
            named(label, meta.weight, meta.depth, level),
            s.hecke(p, weight, level),
        )

    return build


def _cat_f1_6_10(prec):
    e, s = named_form("delta_4_5", prec)
    return product_expr(e, phi_expr(1, 2)), _tighten(s * phi(1, 2, prec))


def _cat_g2_8_5(prec):
    e, s = named_form("delta_4_5", prec)
    p = phi(1, 5, prec)
    return product_expr(e, power_expr(phi_expr(1, 5), 2)), _tighten(s * (p * p))


def _cat_g3_8_5(prec):
    e4 = eisenstein(4, 1, prec)
    p = phi(1, 5, prec)
    br = rc_bracket1(e4, 4, p, 2)
    expr = scale_expr(Fraction(-1, 24), rc1_expr(eis(4), phi_expr(1, 5)))
    return expr, _tighten(Fraction(-1, 24) * br)


def _cat_c10(prec):
    # cuspidal projection of phi(1,5) * 9 phi(1,10): T_3 - (1 + 3^3) kills
    # the Eisenstein part of M_4(Gamma0(10)) and is invertible on cusp forms
    prod = _tighten(phi(1, 5, 3 * prec) * (9 * phi(1, 10, 3 * prec)))
    img = _tighten(prod.hecke(3, 4, 10) - 28 * prod.truncate(prec))
    return named("c10", 4, 0, 10), img


_CATALOG = {
    "delta": _cat_eta("delta", ((1, 24),)),
    "delta_4_5": _cat_eta("delta_4_5", ((1, 4), (5, 4))),
    "delta_4_6": _cat_eta("delta_4_6", ((1, 2), (2, 2), (3, 2), (6, 2))),
    "delta_4_7": _cat_delta_4_7,
    "delta_4_8": _cat_eta("delta_4_8", ((2, 4), (4, 4))),
    "delta_4_9": _cat_eta("delta_4_9", ((3, 8),)),
    "delta_8_2": _cat_eta("delta_8_2", ((1, 8), (2, 8))),
    "delta_2_11": _cat_eta("delta_2_11", ((1, 2), (11, 2))),
    "delta_2_14": _cat_eta("delta_2_14", ((1, 1), (2, 1), (7, 1), (14, 1))),
    "x10": _cat_eta("x10", ((2, 4), (10, 4))),
    "c10": _cat_c10,
    "delta_6_5": _cat_delta_6_5,
    "f_4_5_2": _cat_rescale("f_4_5_2", "delta_4_5", 2),
    "f_4_7_2": _cat_rescale("f_4_7_2", "delta_4_7", 2),
    "f_6_5_2": _cat_rescale("f_6_5_2", "delta_6_5", 2),
    "f1_4_11": _cat_eta("f1_4_11", ((1, 4), (11, 4))),
    "f2_4_11": _cat_hecke("f2_4_11", "f1_4_11", 2, 4, 11),
    "f_6_10": _cat_f_6_10,
    "f1_6_10": _cat_f1_6_10,
    "f2_6_10": _cat_hecke("f2_6_10", "f_6_10", 2, 6, 10),
    "g1_8_5": _cat_eta("g1_8_5", ((1, 8), (5, 8))),
    "g2_8_5": _cat_g2_8_5,
    "g3_8_5": _cat_g3_8_5,
}


def catalog_labels() -> list[str]:
    return sorted(_CATALOG)


@lru_cache(maxsize=None)
def named_form(label: str, prec: int = DEFAULT_PREC):
    """Catalog lookup; returns (FormExpr, QSeries) at the given precision."""
    try:
        builder = _CATALOG[label]
    except KeyError:
        raise KeyError(f"unknown form label {label!r}") from None
    expr, series = builder(prec)
    if series.prec != prec:
        series = series.truncate(prec)
    return expr, series


# ---------------------------------------------------------------------------
# dimensions and generator pools

# (weight, level) -> (dim M_k, dim of the cuspidal subspace); rank-checked on
# every pool construction.
DIMENSIONS = {
    (2, 1): (0, 0), (4, 1): (1, 0), (6, 1): (1, 0), (8, 1): (1, 0),
    (10, 1): (1, 0), (12, 1): (2, 1), (14, 1): (1, 0),
    (2, 2): (1, 0), (4, 2): (2, 0), (6, 2): (2, 0), (8, 2): (3, 1),
    (2, 3): (1, 0), (4, 3): (2, 0),
    (2, 4): (2, 0), (4, 4): (3, 0),
    (2, 5): (1, 0), (4, 5): (3, 1), (6, 5): (3, 1), (8, 5): (5, 3),
    (2, 6): (3, 0), (4, 6): (5, 1),
    (2, 7): (1, 0), (4, 7): (3, 1),
    (2, 8): (3, 0), (4, 8): (5, 1),
    (2, 9): (3, 0), (4, 9): (5, 1),
    (2, 10): (3, 0), (4, 10): (7, 3), (6, 10): (9, 5),
    (2, 11): (2, 1), (4, 11): (4, 2),
    (2, 13): (1, 0), (4, 13): (5, 3),
    (2, 14): (4, 1), (4, 14): (8, 4),
}


def dimension(weight: int, level: int, cuspidal: bool = False) -> int:
    try:
        full, cusp = DIMENSIONS[(weight, level)]
    except KeyError:
        raise KeyError(f"no dimension entry for weight {weight}, level {level}") from None
    return cusp if cuspidal else full


_WEIGHT2_POOLS = {
    1: [],
    2: [(1, 2)],
    3: [(1, 3)],
    4: [(1, 2), (1, 4)],
    5: [(1, 5)],
    6: [(1, 2), (1, 3), (3, 6)],
    7: [(1, 7)],
    8: [(1, 4), (1, 8), "phi_1_4_2"],
    9: [(1, 3), "phi_1_3_chi3", (1, 9)],
    10: [(1, 10), (1, 5), "phi_1_5_2"],
    11: [(1, 11), "delta_2_11"],
    13: [(1, 13)],
    14: [(1, 7), (1, 14), (2, 14), "delta_2_14"],
}

_CUSP_LABELS = {
    (12, 1): ["delta"],
    (8, 2): ["delta_8_2"],
    (4, 5): ["delta_4_5"],
    (4, 6): ["delta_4_6"],
    (4, 7): ["delta_4_7"],
    (4, 8): ["delta_4_8"],
    (4, 9): ["delta_4_9"],
    (4, 10): ["delta_4_5", "f_4_5_2", "c10"],
    (4, 11): ["f2_4_11", "f1_4_11"],
    (2, 11): ["delta_2_11"],
    (2, 14): ["delta_2_14"],
    (6, 5): ["delta_6_5"],
    (6, 10): ["delta_6_5", "f_6_5_2", "f_6_10", "f1_6_10", "f2_6_10"],
    (8, 5): ["g1_8_5", "g2_8_5", "g3_8_5"],
}


def _weight2_pool(level: int, prec: int):
    out = []
    for item in _WEIGHT2_POOLS[level]:
        if isinstance(item, tuple):
            a, b = item
            out.append((phi_expr(a, b), phi(a, b, prec)))
        elif item == "phi_1_4_2":
            out.append((rescale_expr(phi_expr(1, 4), 2), phi(1, 4, prec).rescale(2).truncate(prec)))
        elif item == "phi_1_5_2":
            out.append((rescale_expr(phi_expr(1, 5), 2), phi(1, 5, prec).rescale(2).truncate(prec)))
        elif item == "phi_1_3_chi3":
            chi3 = quadratic_character(3)
            out.append((twist_expr(phi_expr(1, 3), chi3), twist(phi(1, 3, prec), chi3)))
        else:
            out.append(named_form(item, prec))
    return out


def _eisenstein_pool(weight: int, level: int, prec: int):
    out = []
    for d in oracle.divisors(level):
        out.append((eis_level(weight, d), eisenstein(weight, d, prec)))
    if (weight, level) == (4, 9):
        chi3 = quadratic_character(3)
        out.insert(1, (twist_expr(eis(4), chi3), twist(eisenstein(4, 1, prec), chi3)))
    return out


def _primitive_scale(f: QSeries) -> QSeries:
    den = 1
    for c in f.coeffs:
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    return _tighten(f * den) if den != 1 else f


def _products_pool_13(prec: int):
    """Weight-4 level-13 generators built from weight-2 character series."""
    chi13 = quadratic_character(13)
    onec = trivial_character()
    p0 = phi(1, 13, prec)
    e1 = char_eis_expr(2, onec, chi13, 1)
    e2 = char_eis_expr(2, chi13, onec, 1)
    s1 = _primitive_scale(char_eisenstein(2, onec, chi13, 1, prec))
    s2 = _primitive_scale(char_eisenstein(2, chi13, onec, 1, prec))
    return [
        (power_expr(phi_expr(1, 13), 2), p0 * p0),
        (product_expr(e1, e2), s1 * s2),
        (power_expr(e1, 2), s1 * s1),
        (power_expr(e2, 2), s2 * s2),
    ]


def _cusp_pool_14(prec: int):
    d7 = named_form("delta_4_7", prec)
    f72 = named_form("f_4_7_2", prec)
    e214, s214 = named_form("delta_2_14", prec)
    p114 = phi(1, 14, prec)
    return [
        d7,
        f72,
        (power_expr(e214, 2), s214 * s214),
        (product_expr(e214, phi_expr(1, 14)), s214 * p114),
    ]


def _bootstrap_pool(weight: int, level: int, prec: int):
    """Spanning set for the full space, free of extracted newforms."""
    if weight == 2:
        return _weight2_pool(level, prec)
    pool = _eisenstein_pool(weight, level, prec)
    if (weight, level) == (4, 13):
        pool += _products_pool_13(prec)
    elif (weight, level) == (4, 14):
        pool += _cusp_pool_14(prec)
    else:
        pool += [named_form(lbl, prec) for lbl in _CUSP_LABELS.get((weight, level), [])]
    return pool


def _cusp_pool(weight: int, level: int, prec: int):
    if (weight, level) == (4, 14):
        return _cusp_pool_14(prec)
    if (weight, level) == (4, 13):
        # image of T_2 - (1 + 2^{k-1}), which kills the Eisenstein part and
        # is invertible on the cuspidal part
        lam = 1 + 2 ** (weight - 1)
        pool = _bootstrap_pool(weight, level, 2 * prec)
        out = []
        for i, (e, s) in enumerate(pool):
            img = s.hecke(2, weight, level) - lam * s.truncate(prec)
            out.append((named(f"t2proj_{weight}_{level}_{i}", weight, 0, level), img))
        return out
    labels = _CUSP_LABELS.get((weight, level))
    if labels is None:
        if dimension(weight, level, cuspidal=True) == 0:
            return []
        raise KeyError(f"no cusp pool for weight {weight}, level {level}")
    return [named_form(lbl, prec) for lbl in labels]


@dataclass(frozen=True)
class SpaceBasis:
    """Echelonized exact basis of a space of modular forms."""

    weight: int
    level: int
    cuspidal: bool
    elements: tuple
    pivots: tuple
    pool_exprs: tuple
    combos: tuple

    @property
    def prec(self) -> int:
        return self.elements[0][1].prec if self.elements else 0

    def series(self) -> list[QSeries]:
        return [s for _, s in self.elements]


def _combo_expr(combo, exprs) -> FormExpr:
    terms = []
    for c, e in zip(combo, exprs):
        if c == 0:
            continue
        terms.append(e if c == 1 else scale_expr(c, e))
    if not terms:
        raise ValueError("zero combination")
    return terms[0] if len(terms) == 1 else sum_expr(*terms)


def _echelonize(pool, expected_dim: int, what: str):
    if not pool:
        if expected_dim:
            raise ValueError(f"insufficient generator pool for {what}")
        return [], [], []
    prec = min(s.prec for _, s in pool)
    n = len(pool)
    rows = [list(s.coeffs[: prec + 1]) for _, s in pool]
    combos = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    pivots = []
    r = 0
    for col in range(prec + 1):
        pr = next((i for i in range(r, n) if rows[i][col] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        combos[r], combos[pr] = combos[pr], combos[r]
        inv = rows[r][col]
        if inv != 1:
            if isinstance(inv, int):
                inv = Fraction(inv)
            rows[r] = [x / inv if x else x for x in rows[r]]
            combos[r] = [x / inv for x in combos[r]]
        for i in range(n):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b if b else a for a, b in zip(rows[i], rows[r])]
                combos[i] = [a - f * b for a, b in zip(combos[i], combos[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    rank = len(pivots)
    if rank < expected_dim:
        raise ValueError(f"insufficient generator pool for {what}: rank {rank} < {expected_dim}")
    if rank > expected_dim:
        raise ValueError(f"dimension table violated for {what}: rank {rank} > {expected_dim}")
    return rows[:rank], pivots, combos[:rank]


@lru_cache(maxsize=None)
def space_basis(weight: int, level: int, cuspidal: bool = False,
                prec: int = DEFAULT_PREC) -> SpaceBasis:
    """Echelonized basis of M_k(Gamma0(N)) or its cuspidal subspace."""
    dim = dimension(weight, level, cuspidal)
    pool = _cusp_pool(weight, level, prec) if cuspidal else _bootstrap_pool(weight, level, prec)
    what = f"{'S' if cuspidal else 'M'}_{weight}(Gamma0({level}))"
    rows, pivots, combos = _echelonize(pool, dim, what)
    exprs = tuple(e for e, _ in pool)
    elements = []
    for row, combo in zip(rows, combos):
        series = QSeries([c.numerator if isinstance(c, Fraction) and c.denominator == 1 else c
                          for c in row])
        elements.append((_combo_expr(combo, exprs), series))
    return SpaceBasis(weight, level, cuspidal, tuple(elements), tuple(pivots),
                      exprs, tuple(tuple(c) for c in combos))


def generator_pool(weight: int, level: int, cuspidal: bool = False,
                   prec: int = DEFAULT_PREC, registry=None):
    """Generator lists in their catalog order, newforms included.

    This is the presentation basis used for reporting decompositions; it is
    rank-checked against the dimension table but not echelonized.
    """
    if cuspidal:
        pool = _cusp_pool(weight, level, prec)
    elif weight == 2:
        pool = _weight2_pool(level, prec)
    else:
        pool = _eisenstein_pool(weight, level, prec)
        key = (weight, level)
        if key in ((4, 10), (4, 11), (4, 13), (4, 14)):
            if registry is None:
                from .heckeeigen import registry as _registry

                registry = _registry(prec)
            nfs = registry.space_newforms(weight, level)
            if key == (4, 10):
                pool += [(named("nf_4_10_1", 4, 0, 10), nfs[0].series),
                         named_form("delta_4_5", prec), named_form("f_4_5_2", prec)]
            elif key == (4, 14):
                pool += [named_form("delta_4_7", prec), named_form("f_4_7_2", prec)]
                pool += [(named(f"nf_4_14_{i+1}", 4, 0, 14), nf.series) for i, nf in enumerate(nfs)]
            else:
                pool += [(named(f"nf_{weight}_{level}_{i+1}", weight, 0, level), nf.series)
                         for i, nf in enumerate(nfs)]
        else:
            pool += [named_form(lbl, prec) for lbl in _CUSP_LABELS.get((weight, level), [])]
    dim = dimension(weight, level, cuspidal)
    if len(pool) != dim:
        # pools are exact bases here, not just spanning sets
        raise ValueError(f"pool size {len(pool)} != dimension {dim}")
    return pool


# ---------------------------------------------------------------------------
# evaluation of expressions


def evaluate(expr: FormExpr, prec: int = DEFAULT_PREC) -> QSeries:
    k = expr.kind
    if k == "eta":
        return eta_quotient(expr.params[0], prec)
    if k == "eis":
        return eisenstein(expr.params[0], 1, prec)
    if k == "eis_level":
        return eisenstein(expr.params[0], expr.params[1], prec)
    if k == "phi":
        return phi(expr.params[0], expr.params[1], prec)
    if k == "char_eis":
        kk, psi, chi, t = expr.params
        return char_eisenstein(kk, psi, chi, t, prec)
    if k == "rescale":
        return evaluate(expr.children[0], prec).rescale(expr.params[0]).truncate(prec)
    if k == "derive":
        return evaluate(expr.children[0], prec).derive(expr.params[0])
    if k == "product":
        acc = one(prec)
        for c in expr.children:
            acc = acc * evaluate(c, prec)
        return acc
    if k == "power":
        return evaluate(expr.children[0], prec).power(expr.params[0])
    if k == "root":
        return evaluate(expr.children[0], prec).root(expr.params[0])
    if k == "rc1":
        f, g = expr.children
        return rc_bracket1(evaluate(f, prec), f.weight, evaluate(g, prec), g.weight)
    if k == "twist":
        return twist(evaluate(expr.children[0], prec), expr.params[0])
    if k == "scale":
        return _tighten(expr.params[0] * evaluate(expr.children[0], prec))
    if k == "sum":
        acc = None
        for c in expr.children:
            s = evaluate(c, prec)
            acc = s if acc is None else acc + s
        return acc
    if k == "named":
        return named_form(expr.params[0], prec)[1]
    if k == "const":
        return _tighten(expr.params[0] * one(prec))
    raise ValueError(f"cannot evaluate expression kind {k!r}")


# ---------------------------------------------------------------------------
# the textual expression language

_TOKEN_RE = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9.]*|\^|\*|\+|\-|/|\(|\)|,)")


def _tokenize(text: str):
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ValueError(f"cannot tokenize {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    out.append(None)
    return out


_CHAR_NAMES = {"one": trivial_character}


def _char_by_name(name: str) -> DirichletCharacter:
    if name == "one":
        return trivial_character()
    m = re.fullmatch(r"chi0_(\d+)", name)
    if m:
        return principal_character(int(m.group(1)))
    m = re.fullmatch(r"chi(\d+)", name)
    if m:
        return quadratic_character(int(m.group(1)))
    raise ValueError(f"unknown character {name!r}")


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, t):
        got = self.next()
        if got != t:
            raise ValueError(f"expected {t!r}, got {got!r}")

    def parse(self) -> FormExpr:
        e = self.expr()
        if self.peek() is not None:
            raise ValueError(f"trailing input at {self.peek()!r}")
        return e

    def expr(self) -> FormExpr:
        terms = [self.term()]
        while self.peek() in ("+", "-"):
            op = self.next()
            t = self.term()
            if op == "-":
                t = self._negate(t)
            terms.append(t)
        return terms[0] if len(terms) == 1 else sum_expr(*terms)

    @staticmethod
    def _negate(e: FormExpr) -> FormExpr:
        if e.kind == "const":
            return const_expr(-e.params[0])
        if e.kind == "scale":
            return scale_expr(-e.params[0], e.children[0])
        return scale_expr(-1, e)

    def term(self) -> FormExpr:
        coeff = Fraction(1)
        factors = []
        while True:
            sign = 1
            while self.peek() == "-":
                self.next()
                sign = -sign
            f = self.factor()
            if f.kind == "const":
                coeff *= sign * f.params[0]
            else:
                coeff *= sign
                factors.append(f)
            if self.peek() == "*":
                self.next()
                continue
            break
        if not factors:
            return const_expr(coeff)
        body = factors[0] if len(factors) == 1 else product_expr(*factors)
        return body if coeff == 1 else scale_expr(coeff, body)

    def factor(self) -> FormExpr:
        base = self.primary()
        if self.peek() == "^":
            self.next()
            m = int(self.next())
            if base.kind == "const":
                return const_expr(base.params[0] ** m)
            return power_expr(base, m)
        return base

    def primary(self) -> FormExpr:
        t = self.next()
        if t == "(":
            e = self.expr()
            self.expect(")")
            return e
        if t is None:
            raise ValueError("unexpected end of input")
        if t.isdigit():
            num = int(t)
            if self.peek() == "/":
                self.next()
                den = int(self.next())
                return const_expr(Fraction(num, den))
            return const_expr(Fraction(num))
        return self.call_or_name(t)

    def call_or_name(self, name: str) -> FormExpr:
        if name == "D":
            i = 1
            if self.peek() == "^":
                self.next()
                i = int(self.next())
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return derive_expr(e, i)
        if self.peek() != "(":
            if name in _CATALOG:
                expr, _ = named_form(name, 8)
                return expr
            raise ValueError(f"unknown name {name!r}")
        self.expect("(")
        if name == "eta":
            spec = self.eta_spec()
            self.expect(")")
            return eta_expr(spec)
        if name == "E":
            k = int(self.next())
            n = 1
            if self.peek() == ",":
                self.next()
                n = int(self.next())
            self.expect(")")
            return eis_level(k, n)
        if name == "phi":
            a = int(self.next())
            self.expect(",")
            b = int(self.next())
            self.expect(")")
            return phi_expr(a, b)
        if name == "twist":
            e = self.expr()
            self.expect(",")
            chi = _char_by_name(self.next())
            self.expect(")")
            return twist_expr(e, chi)
        if name == "rc1":
            f = self.expr()
            self.expect(",")
            g = self.expr()
            self.expect(")")
            return rc1_expr(f, g)
        if name == "rescale":
            e = self.expr()
            self.expect(",")
            d = int(self.next())
            self.expect(")")
            return rescale_expr(e, d)
        if name == "root":
            e = self.expr()
            self.expect(",")
            n = int(self.next())
            self.expect(")")
            return root_expr(e, n)
        if name == "chareis":
            k = int(self.next())
            self.expect(",")
            psi = _char_by_name(self.next())
            self.expect(",")
            chi = _char_by_name(self.next())
            self.expect(",")
            t = int(self.next())
            self.expect(")")
            return char_eis_expr(k, psi, chi, t)
        raise ValueError(f"unknown function {name!r}")

    def eta_spec(self):
        spec = []
        while True:
            d = int(self.next())
            r = 1
            if self.peek() == "^":
                self.next()
                nxt = self.next()
                if nxt == "-":
                    r = -int(self.next())
                else:
                    r = int(nxt)
            spec.append((d, r))
            if self.peek() == "*":
                self.next()
                continue
            return tuple(spec)


def parse_expr(text: str) -> FormExpr:
    """Parse the textual form language, e.g. "E(2)*E(2,3)" or "D^2(E(2))"."""
    return _Parser(text).parse()
