from fractions import Fraction

import pytest

from grpcalc.betti_bounds import (FAIL, PASS, NonNormalTable, OrderDeclarationError, approx_sequence,
                                  betti_report, evaluation_injectivity_check, free_product_lower_bound,
                                  mod_p_bound, normal_generation_certificate, permutation_order, pi_image_check,
                                  relator_length_bound, torsion_bound, trivial_bound)
from grpcalc.chains import derived_p_chain
from grpcalc.config import load_presentation, parse_normal_generators
from grpcalc.coset_enum import enumerate_cosets
from grpcalc.words import NormalGeneratorSpec, Word, parse_words


def setup_module():
    print(f" == Setting up tests for {__name__}")


def teardown_module():
    print(f" == Tearing down tests for {__name__}")


def _spec(orders) -> NormalGeneratorSpec:
    return NormalGeneratorSpec(tuple(Word.generator(i) for i in range(len(orders))), tuple(orders))


def _approximants(name: str, p_: int, depth: int):
    p = load_presentation(name)
    return approx_sequence(p, derived_p_chain(p, p_, depth)).normalized


def test_approximants_of_free_groups():
    assert _approximants('f2', 2, 2) == (Fraction(5, 4), Fraction(129, 128))
    assert _approximants('f3', 2, 1) == (Fraction(17, 8),)


def test_approximants_of_z_and_d_infinity():
    assert _approximants('z', 2, 3) == (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8))
    assert _approximants('d_infinity', 2, 3) == (Fraction(1, 4), Fraction(1, 8), Fraction(1, 16))


def test_approximant_of_surface_group():
    assert _approximants('genus2', 2, 1) == (Fraction(17, 8),)


def test_free_approximants_exceed_trivial_bound():
    p = load_presentation('f2')
    report = approx_sequence(p, derived_p_chain(p, 2, 2))
    assert [c.verdict for c in report.checks] == [PASS, PASS]
    for value in report.normalized:
        assert value > report.bounds['trivial']


def test_trivial_bound():
    assert trivial_bound(1) == 0
    assert trivial_bound(2) == 1
    assert trivial_bound(5) == 4


def test_torsion_bound():
    assert torsion_bound(_spec((2, 3))) == Fraction(1, 6)
    assert torsion_bound(_spec((2, 2))) == 0
    assert torsion_bound(_spec((None,))) == 0
    assert torsion_bound(_spec((None, None))) == trivial_bound(2)
    assert torsion_bound(_spec((2, None))) < trivial_bound(2)


def test_mod_p_bound():
    assert mod_p_bound(load_presentation('f2'), 2) == 1
    assert mod_p_bound(load_presentation('z4'), 2) == 0
    assert mod_p_bound(load_presentation('s3'), 3) == -1


def test_free_product_lower_bound():
    assert free_product_lower_bound(2, [(Fraction(0), 2), (Fraction(0), 3)]) == Fraction(1, 6)
    assert free_product_lower_bound(2, [(Fraction(0), None), (Fraction(0), None)]) == 1
    assert free_product_lower_bound(1, [(Fraction(0), None)], [5]) == Fraction(-1, 5)


def test_relator_length_bound():
    assert relator_length_bound(2, load_presentation('abab')) == Fraction(3, 4)
    assert relator_length_bound(2, load_presentation('triangle_2_3_7')) == Fraction(1, 2)
    assert relator_length_bound(2, load_presentation('f2')) == 1


def test_pi_image_equality_cases():
    for name, orders, lhs in (('d_infinity', (2, 2), 1), ('z', (None,), 1), ('f2', (None, None), 5)):
        p = load_presentation(name)
        level = derived_p_chain(p, 2, 1).levels[0]
        checks = pi_image_check(p, _spec(orders), level.table)
        assert checks[0].lhs == checks[0].rhs == lhs
        assert all(c.verdict == PASS for c in checks)


def test_pi_image_rejects_wrong_order():
    p = load_presentation('z4')
    level = derived_p_chain(p, 2, 2).levels[1]
    with pytest.raises(OrderDeclarationError):
        pi_image_check(p, _spec((2,)), level.table)


def test_pi_image_rejects_non_normal_table():
    p = load_presentation('s3')
    t = enumerate_cosets(p, parse_words('a', p.generator_names))
    with pytest.raises(NonNormalTable):
        pi_image_check(p, _spec((2, 3)), t)


def test_permutation_order():
    p = load_presentation('a4')
    t = enumerate_cosets(p)
    assert permutation_order(t, Word.generator(0)) == 2
    assert permutation_order(t, Word.generator(1)) == 3
    assert permutation_order(t, parse_words('a*b', p.generator_names)[0]) == 3


def test_normal_generation_certificate():
    p = load_presentation('psl2z')
    assert normal_generation_certificate(p, _spec((2, 3)))
    assert normal_generation_certificate(p, NormalGeneratorSpec((Word.generator(0),), (2,))) is False
    z2 = load_presentation('z2')
    assert normal_generation_certificate(z2, NormalGeneratorSpec((Word.generator(0),), (None,))) is None


def test_single_normal_generator_of_modular_group():
    p = load_presentation('psl2z')
    ab, = parse_words('a*b', p.generator_names)
    single = NormalGeneratorSpec((ab,), (None,))
    assert normal_generation_certificate(p, single) is True
    # one normal generator of infinite order gives a weaker bound than the two torsion generators
    assert torsion_bound(single) == 0
    assert torsion_bound(single) < torsion_bound(_spec((2, 3))) == Fraction(1, 6)


def test_evaluation_injectivity():
    p = load_presentation('d_infinity')
    level = derived_p_chain(p, 2, 2).levels[1]
    check = evaluation_injectivity_check(p, _spec((2, 2)), level.table, normally_generates=True)
    assert check.verdict == PASS
    assert check.lhs == check.rhs == 2 * 8


def test_betti_report_for_d_infinity():
    p = load_presentation('d_infinity')
    report = betti_report(p, derived_p_chain(p, 2, 3), parse_normal_generators(None, p))
    assert report.bounds['torsion'] == 0
    assert report.notes['normal_generation'] == 'certified'
    assert report.violations == []
    data = report.to_dict()
    assert [a['normalized'] for a in data['approximants']] == ['1/4', '1/8', '1/16']
    assert data['bounds']['trivial'] == '1'
    assert all(c['pass'] for c in data['checks'])


def test_betti_report_for_corpus_never_fails():
    for name, p_, depth in (('z', 3, 2), ('f2', 2, 1), ('z2', 2, 2), ('genus2', 2, 1), ('abab', 2, 2),
                            ('z4', 2, 2)):
        p = load_presentation(name)
        report = betti_report(p, derived_p_chain(p, p_, depth), parse_normal_generators(None, p))
        assert not [c for c in report.checks if c.verdict == FAIL], name


def test_mod_p_bound_vacuous_note():
    p = load_presentation('s3')
    report = betti_report(p, derived_p_chain(p, 3, 1))
    assert report.notes['mod_p'].startswith('vacuous')
    assert report.chain.levels == ()
