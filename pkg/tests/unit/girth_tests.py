from fractions import Fraction

import pytest

from grpcalc.betti_bounds import FAIL, PASS, NonNormalTable
from grpcalc.chains import derived_p_chain
from grpcalc.config import load_presentation
from grpcalc.coset_enum import enumerate_cosets
from grpcalc.girth import girth_finite, girth_interval, ineq_consistency, z1_support_bound_check
from grpcalc.groupring import FiniteGroup
from grpcalc.utils import InputError
from grpcalc.words import parse_words

CORPUS_WITH_RELATORS = ('z2', 'genus2', 'z4', 'q8', 's3', 'triangle_2_3_7', 'psl2z', 'abab', 'd_infinity')


def setup_module():
    print(f" == Setting up tests for {__name__}")


def teardown_module():
    print(f" == Tearing down tests for {__name__}")


def test_girth_of_cyclic_groups():
    for n in range(2, 9):
        assert girth_finite(FiniteGroup.cyclic(n)) == n


def test_girth_from_coset_tables():
    assert girth_finite(enumerate_cosets(load_presentation('c5'))) == 5
    assert girth_finite(enumerate_cosets(load_presentation('s3'))) == 2
    s3 = FiniteGroup.from_coset_table(enumerate_cosets(load_presentation('s3')))
    assert girth_finite(s3) == 2
    assert girth_finite(FiniteGroup.from_coset_table(enumerate_cosets(load_presentation('c2xc2')))) == 2


def test_girth_of_z4_from_its_chain():
    p = load_presentation('z4')
    report = girth_interval(p, [derived_p_chain(p, 2, 2)], radius=6)
    assert (report.lower, report.upper, report.exact) == (4, 4, 4)
    assert not report.exhausted


def test_girth_of_triangle_group_from_finite_quotient():
    p = load_presentation('triangle_2_3_7')
    chains = [derived_p_chain(p, 2, 2), derived_p_chain(p, 3, 2)]
    assert all(not chain.levels for chain in chains)
    without = girth_interval(p, chains, radius=3)
    assert without.lower == 1
    quotient = enumerate_cosets(load_presentation('psl27'))
    report = girth_interval(p, chains, radius=3, quotients=[quotient])
    assert report.exact == 2
    assert report.witness == p.relators[0]


def test_girth_of_free_group_is_only_bounded_below():
    p = load_presentation('f2')
    report = girth_interval(p, [derived_p_chain(p, 2, 2)], radius=6)
    assert report.upper is None
    assert report.lower == 4
    assert len(report.candidate) == 4
    data = report.to_dict(p.generator_names)
    assert data['upper'] == 'inf'
    assert data['exact'] is None


def test_exhausted_radius_is_reported():
    p = load_presentation('f2')
    report = girth_interval(p, [derived_p_chain(p, 2, 2)], radius=2)
    assert report.exhausted
    assert report.to_dict(p.generator_names)['lower'] == '>= 3'


def test_lower_bound_never_regresses_with_more_levels():
    p = load_presentation('f2')
    shallow = girth_interval(p, [derived_p_chain(p, 2, 1)], radius=5)
    deep = girth_interval(p, [derived_p_chain(p, 2, 2)], radius=5)
    assert shallow.lower <= deep.lower


def test_quotient_must_be_an_action():
    p = load_presentation('z4')
    with pytest.raises(InputError):
        girth_interval(p, [], radius=2, quotients=[enumerate_cosets(load_presentation('c3'))])


def test_ineq_consistency_is_sharp_on_corpus():
    for name in CORPUS_WITH_RELATORS:
        p = load_presentation(name)
        report = girth_interval(p, [], radius=1)
        checks = ineq_consistency(p, report)
        assert checks[0].verdict == PASS, name
        assert checks[0].lhs == report.upper
    f2 = load_presentation('f2')
    assert ineq_consistency(f2, girth_interval(f2, [], radius=1))[0].verdict == PASS


def test_ineq_consistency_values():
    p = load_presentation('triangle_2_3_7')
    assert ineq_consistency(p, girth_interval(p, [], radius=1))[0].lhs == 2
    abab = load_presentation('abab')
    report = girth_interval(abab, [], radius=1)
    checks = ineq_consistency(abab, report, [Fraction(1, 2), Fraction(3, 2)])
    assert checks[0].lhs == 4
    assert [c.verdict for c in checks[1:]] == [PASS, 'inconclusive']


def test_z1_support_bound_equality_on_c2():
    p = load_presentation('c2')
    checks = z1_support_bound_check(p, enumerate_cosets(p))
    assert len(checks) == 1
    assert checks[0].lhs == checks[0].rhs == 1


def test_z1_support_bound_on_corpus_chains():
    for name, p_, depth in (('abab', 2, 2), ('d_infinity', 2, 3), ('genus2', 2, 1), ('z2', 2, 2), ('z4', 2, 2),
                            ('psl2z', 3, 1), ('f2', 2, 1)):
        p = load_presentation(name)
        for level in derived_p_chain(p, p_, depth).levels:
            assert all(c.verdict != FAIL for c in z1_support_bound_check(p, level.table)), name


def test_z1_support_bound_needs_normal_subgroup():
    p = load_presentation('s3')
    with pytest.raises(NonNormalTable):
        z1_support_bound_check(p, enumerate_cosets(p, parse_words('a', p.generator_names)))
