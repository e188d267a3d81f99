"""Exact decomposition of q-expansions in graded quasimodular bases.

A weight-k depth-graded basis is the union over i of D^i applied to a basis
of the weight k-2i modular forms, together with D^(k/2-1) E_2.  Solving is
exact Gaussian elimination on coefficient rows; every surplus coefficient up
to the target precision is then checked, and any mismatch is a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from . import forms, linalg
from .characters import bernoulli
from .qseries import PrecisionError, QSeries

__all__ = [
    "QMBasis",
    "Decomposition",
    "sturm_margin",
    "qm_basis",
    "named_qm_basis",
    "mixed_qm_basis",
    "decompose",
    "build_H",
    "build_lahiri",
]


def _mu(level: int) -> int:
    """Index of Gamma0(N) in the modular group."""
    out = level
    n = level
    p = 2
    while p * p <= n:
        if n % p == 0:
            out = out // p * (p + 1)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out = out // n * (n + 1)
    return out


def sturm_margin(weight: int, level: int) -> int:
    """Number of verified coefficients: well past the equality bound."""
    return max(64, ceil(Fraction(8 * weight * _mu(level), 12)))


@dataclass(frozen=True)
class QMBasis:
    """Ordered list of (FormExpr, QSeries) pairs spanning a solving space."""

    elements: tuple
    weights: tuple
    level: int

    def __len__(self):
        return len(self.elements)

    @property
    def max_weight(self) -> int:
        return max(self.weights)

    def series(self):
        return [s for _, s in self.elements]


@dataclass(frozen=True)
class Decomposition:
    basis: QMBasis
    coefficients: tuple
    verified_to: int

    def to_record(self) -> dict:
        from .exactnum import format_element

        return {
            "basis_exprs": [str(e) for e, _ in self.basis.elements],
            "coefficients": [format_element(c) for c in self.coefficients],
            "verified_to": self.verified_to,
        }

    def nonzero(self):
        return [(str(e[0]), c) for e, c in zip(self.basis.elements, self.coefficients) if c != 0]


def _graded_layers(weight: int, level: int, depth_cap: int, prec: int, pool_fn):
    if weight < 2 or weight % 2:
        raise ValueError("weight must be even and >= 2")
    elems = []
    weights = []
    for i in range(weight // 2):
        if i > depth_cap:
            break
        w = weight - 2 * i
        if forms.dimension(w, level) == 0:
            continue
        for expr, series in pool_fn(w, level, prec):
            elems.append((forms.derive_expr(expr, i), series.derive(i)))
            weights.append(weight)
    if weight // 2 <= depth_cap:
        e2 = forms.eisenstein(2, 1, prec).derive(weight // 2 - 1)
        elems.append((forms.derive_expr(forms.eis(2), weight // 2 - 1), e2))
        weights.append(weight)
    return QMBasis(tuple(elems), tuple(weights), level)


def qm_basis(weight: int, level: int, depth_cap: int | None = None,
             prec: int = forms.DEFAULT_PREC) -> QMBasis:
    """Graded basis built on the echelonized space bases."""
    if depth_cap is None:
        depth_cap = weight // 2

    def pool(w, n, p):
        return forms.space_basis(w, n, False, p).elements

    return _graded_layers(weight, level, depth_cap, prec, pool)


def named_qm_basis(weight: int, level: int, depth_cap: int | None = None,
                   prec: int = forms.DEFAULT_PREC, registry=None) -> QMBasis:
    """Graded basis over the named generator pools, for reporting."""
    if depth_cap is None:
        depth_cap = weight // 2

    def pool(w, n, p):
        return forms.generator_pool(w, n, False, p, registry)

    return _graded_layers(weight, level, depth_cap, prec, pool)


def mixed_qm_basis(weights, level: int, prec: int = forms.DEFAULT_PREC,
                   registry=None, named: bool = True) -> QMBasis:
    """Union of graded bases over several weights (ascending)."""
    elems = []
    wts = []
    for w in sorted(weights):
        if named:
            b = named_qm_basis(w, level, None, prec, registry)
        else:
            b = qm_basis(w, level, None, prec)
        elems.extend(b.elements)
        wts.extend(b.weights)
    return QMBasis(tuple(elems), tuple(wts), level)


def decompose(target: QSeries, basis: QMBasis) -> Decomposition:
    """Exact coordinates of the target in the basis, surplus-verified.

    Solves on the first full-rank set of coefficient rows (scanning exponents
    upward), then checks every remaining coefficient up to the common
    precision.  Raises on dependent bases, on inconsistency, and when the
    precision falls short of the verification margin.
    """
    ncols = len(basis)
    if ncols == 0:
        raise ValueError("empty basis")
    prec = min([target.prec] + [s.prec for s in basis.series()])
    margin = sturm_margin(basis.max_weight, basis.level)
    if prec < max(margin, 2 * ncols):
        raise PrecisionError(
            f"target precision {prec} below required margin {max(margin, 2 * ncols)}"
        )
    cols = basis.series()
    rows = []
    rhs = []
    pivots_found = 0
    aug = []
    for n in range(prec + 1):
        row = [linalg.promote(s.coeff(n)) for s in cols]
        aug.append((row, linalg.promote(target.coeff(n))))
        if pivots_found < ncols:
            rows.append(row)
            rhs.append(linalg.promote(target.coeff(n)))
            _, piv = linalg.rref(rows)
            if len(piv) < len(rows):
                rows.pop()
                rhs.pop()
            else:
                pivots_found += 1
        if pivots_found == ncols:
            break
    if pivots_found < ncols:
        raise ValueError("basis is linearly dependent on the available coefficients")
    sol = linalg.solve(rows, rhs)
    if sol is None:
        raise ValueError("inconsistent system on the solving rows")
    for n in range(prec + 1):
        row, t = aug[n] if n < len(aug) else (None, None)
        if row is None:
            row = [linalg.promote(s.coeff(n)) for s in cols]
            t = linalg.promote(target.coeff(n))
        val = 0
        for c, a in zip(sol, row):
            if c and a:
                val = val + c * a
        if val != t:
            raise ValueError(f"decomposition fails verification at exponent {n}")
    return Decomposition(basis, tuple(sol), prec)


def build_H(level: int, prec: int = forms.DEFAULT_PREC) -> QSeries:
    """The weight-4 product E_2(z) E_2(N z)."""
    return forms.eisenstein(2, 1, prec) * forms.eisenstein(2, level, prec)


def build_lahiri(avec, bvec, nvec, prec: int = forms.DEFAULT_PREC):
    """Product of shifted Eisenstein factors generating a Lahiri-type sum.

    Returns (series, normalization): the product of (E_{b+1,N} - 1) factors
    for the leading zero orders and D^a E_{b+1,N} for the rest, and the
    constant (-2)^r prod (b_j + 1) / B_{b_j+1} multiplying the sum's
    generating series.
    """
    r = len(avec)
    if not (r == len(bvec) == len(nvec)) or r < 1:
        raise ValueError("mismatched descriptor lengths")
    if list(avec) != sorted(avec):
        raise ValueError("exponents must be sorted ascending")
    acc = None
    normalization = Fraction((-2) ** r)
    for a, b, n in zip(avec, bvec, nvec):
        if b < 1 or b % 2 == 0:
            raise ValueError("sigma indices must be odd and positive")
        normalization *= Fraction(b + 1) / bernoulli(b + 1)
        e = forms.eisenstein(b + 1, n, prec)
        factor = (e - 1) if a == 0 else e.derive(a)
        acc = factor if acc is None else acc * factor
    return acc, normalization
