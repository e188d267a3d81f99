from fractions import Fraction

import pytest

from qmforms import forms, oracle
from qmforms.characters import quadratic_character, trivial_character
from qmforms.forms import (
    char_eisenstein,
    eisenstein,
    evaluate,
    named_form,
    parse_expr,
    phi,
    space_basis,
)

P = 64


def test_eisenstein_coefficients():
    assert eisenstein(4, 1, 8).coeff(1) == 240
    assert eisenstein(6, 1, 8).coeff(1) == -504
    e43 = eisenstein(4, 3, 8)
    assert e43.coeff(1) == 0 and e43.coeff(3) == 240
    with pytest.raises(ValueError):
        eisenstein(3, 1, 8)
    with pytest.raises(ValueError):
        eisenstein(0, 1, 8)


def test_phi_values():
    p13 = phi(1, 3, 8)
    assert p13.coeff(0) == 1 and p13.coeff(1) == 12
    assert phi(1, 2, 8).coeff(2) == 24
    with pytest.raises(ValueError):
        phi(2, 3, 8)
    with pytest.raises(ValueError):
        phi(1, 1, 8)


def test_char_eisenstein():
    one = trivial_character()
    chi13 = quadratic_character(13)
    # weight-2 trivial pair is the phi combination up to sign and scale
    e = char_eisenstein(2, one, one, 5, 32)
    expect = -4 * phi(1, 5, 32)
    assert e.coeff_list() == expect.coeff_list()
    with pytest.raises(ValueError):
        char_eisenstein(2, one, one, 1, 16)
    s1 = char_eisenstein(2, one, chi13, 1, 16)
    assert s1.coeff(0) == 1
    s2 = char_eisenstein(2, chi13, one, 1, 16)
    assert s2.coeff(0) == 0
    assert s2.coeff(1) == -24  # -4/B_2 times sigma^{chi,1}(1)
    with pytest.raises(ValueError):
        char_eisenstein(3, one, chi13, 1, 16)   # odd weight
    with pytest.raises(ValueError):
        char_eisenstein(2, one, quadratic_character(3), 1, 16)  # parity clash


def test_named_form_leading_terms():
    assert named_form("delta_4_9", 8)[1].valuation() == 1
    assert named_form("delta_2_14", 8)[1].valuation() == 1
    d45 = named_form("delta_4_5", 8)[1]
    assert d45.coeff(1) == 1 and d45.coeff(2) == -4
    with pytest.raises(KeyError):
        named_form("delta_3_3", 8)


def test_catalog_eta_specs_are_integral():
    for label in forms.catalog_labels():
        expr, _ = named_form(label, 8)
        if expr.kind == "eta":
            assert sum(d * r for d, r in expr.params[0]) % 24 == 0


def test_x10_degenerates_to_a_rescaling():
    # eta(2z)^4 eta(10z)^4 is exactly delta_4_5(2z), so it cannot extend the
    # level-10 cusp pool; c10 is the projector-built third generator
    x10 = named_form("x10", 32)[1]
    f452 = named_form("f_4_5_2", 32)[1]
    assert x10.coeff_list() == f452.coeff_list()
    c10 = named_form("c10", 32)[1]
    assert c10.coeff(0) == 0
    assert c10.coeff(1) != 0


def test_catalog_tables_match():
    checks = {
        "delta_4_7": "tau_4_7",
        "delta_2_11": "tau_2_11",
        "delta_2_14": "tau_2_14",
        "delta_6_5": "tau_6_5",
    }
    for label, table in checks.items():
        _, series = named_form(label, 24)
        for n, want in oracle.table_entries(table).items():
            assert series.coeff(n) == want


def test_space_dimensions():
    assert len(space_basis(4, 6, False, P).elements) == 5
    assert len(space_basis(2, 9, False, P).elements) == 3
    assert len(space_basis(4, 13, True, P).elements) == 3
    with pytest.raises(KeyError):
        space_basis(4, 12, False, P)


def test_echelon_property():
    sb = space_basis(4, 10, False, P)
    for i, (_, series) in enumerate(sb.elements):
        for j, piv in enumerate(sb.pivots):
            assert series.coeff(piv) == (1 if i == j else 0)


def test_echelon_unique_under_pool_permutation():
    from qmforms.forms import _bootstrap_pool, _echelonize

    pool = _bootstrap_pool(4, 6, P)
    rows1, piv1, _ = _echelonize(pool, 5, "test")
    rows2, piv2, _ = _echelonize(list(reversed(pool)), 5, "test")
    assert piv1 == piv2
    assert rows1 == rows2


def test_cusp_projection_level_13_kills_eisenstein():
    sc = space_basis(4, 13, True, P)
    for _, series in sc.elements:
        assert series.coeff(0) == 0
    # pivots 1..3 and echelon identity
    assert sc.pivots == (1, 2, 3)


def test_rankin_cohen_cusp_pool_combos():
    # the echelonized weight-8 level-5 basis in terms of the generator pool
    sb = space_basis(8, 5, True, P)
    want = [
        (Fraction(46, 25), Fraction(82, 25), Fraction(-3, 25)),
        (Fraction(47, 375), Fraction(-76, 375), Fraction(4, 375)),
        (Fraction(-41, 375), Fraction(-19, 750), Fraction(1, 750)),
    ]
    assert list(sb.combos) == [tuple(w) for w in want]


def test_weight6_level10_pool_combos():
    sb = space_basis(6, 10, True, P)
    want = [
        (Fraction(-4, 15), Fraction(31, 10), Fraction(15, 32), Fraction(1, 96), Fraction(3, 80)),
        (Fraction(1, 20), Fraction(6, 5), 0, 0, Fraction(1, 80)),
        (Fraction(-1, 30), Fraction(7, 10), Fraction(1, 32), Fraction(-1, 96), Fraction(1, 80)),
        (Fraction(-1, 40), Fraction(-1, 10), 0, 0, Fraction(-1, 160)),
        (Fraction(1, 75), Fraction(-11, 50), Fraction(-11, 800), Fraction(-1, 480), Fraction(-3, 400)),
    ]
    assert [tuple(c) for c in sb.combos] == [tuple(w) for w in want]


def test_weight4_level14_pool_combos():
    sb = space_basis(4, 14, True, P)
    want = [
        (Fraction(-11, 28), Fraction(-22, 7), Fraction(11, 7), Fraction(39, 28)),
        (Fraction(-13, 56), Fraction(1, 7), Fraction(3, 7), Fraction(13, 56)),
        (Fraction(13, 56), Fraction(19, 14), Fraction(-13, 14), Fraction(-13, 56)),
        (Fraction(-13, 56), Fraction(-6, 7), Fraction(3, 7), Fraction(13, 56)),
    ]
    assert [tuple(c) for c in sb.combos] == [tuple(w) for w in want]


def test_expression_metadata():
    e = parse_expr("E(2)*E(2,11)")
    assert (e.weight, e.depth, e.level) == (4, 2, 11)
    e = parse_expr("D^2(E(2))")
    assert (e.weight, e.depth) == (6, 3)
    e = parse_expr("twist(E(4),chi3)")
    assert e.level == 9
    e = parse_expr("rc1(E(4),phi(1,5))")
    assert (e.weight, e.depth, e.level) == (8, 0, 5)
    e = parse_expr("eta(1^4*11^4)")
    assert (e.weight, e.level) == (4, 11)
    e = parse_expr("eta(3^8)")
    assert e.level == 9
    e = parse_expr("rescale(delta_4_5,2)")
    assert e.level == 10


def test_depth_cap_enforced():
    # depth tracks products and derivatives, and stays within weight/2
    e = parse_expr("D(E(2))*D(E(2))*D(E(2))")
    assert (e.weight, e.depth) == (12, 6)
    from qmforms.forms import _mk

    with pytest.raises(ValueError):
        _mk("eis", params=(2,), weight=2, depth=2, level=1)


def test_parse_evaluate_consistency():
    for text in ["E(4,3)", "phi(1,5)", "delta_4_5", "eta(1^24)",
                 "(1/2)*(E(2)*twist(E(2),chi0_3) + E(2)*twist(E(2),chi3))"]:
        expr = parse_expr(text)
        series = evaluate(expr, 16)
        assert series.prec == 16


def test_parse_expr_matches_direct_series():
    e2 = eisenstein(2, 1, 16)
    h3 = evaluate(parse_expr("E(2)*E(2,3)"), 16)
    assert h3.coeff_list() == (e2 * eisenstein(2, 3, 16)).coeff_list()
    root = evaluate(parse_expr("root(eta(1^16*7^8) + 13*eta(1^12*7^12) + 49*eta(1^8*7^16),3)"), 12)
    assert root.coeff_list(5) == [0, 1, -1, -2, -7, 16]


def test_generator_pool_catalog_order(reg):
    pool = forms.generator_pool(4, 10, False, 128, reg)
    names = [str(e) for e, _ in pool]
    assert names[:4] == ["E(4)", "E(4,2)", "E(4,5)", "E(4,10)"]
    assert "nf_4_10_1" in names[4]
    assert len(pool) == 7
