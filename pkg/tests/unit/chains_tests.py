import pytest

from grpcalc.chains import (IndexCapExceeded, Stabilized, chain_from_subgroups, derived_p_chain, mod_p_quotient_map,
                            step)
from grpcalc.config import load_presentation
from grpcalc.coset_enum import check_relators, is_normal, trace
from grpcalc.utils import NonPrimeError
from grpcalc.words import parse_words


def setup_module():
    print(f" == Setting up tests for {__name__}")


def teardown_module():
    print(f" == Tearing down tests for {__name__}")


def test_mod_p_quotient_dimensions():
    assert mod_p_quotient_map(load_presentation('f2'), 2).d == 2
    assert mod_p_quotient_map(load_presentation('z4'), 2).d == 1
    assert mod_p_quotient_map(load_presentation('s3'), 3).d == 0
    assert mod_p_quotient_map(load_presentation('s3'), 2).d == 1
    assert mod_p_quotient_map(load_presentation('psl2z'), 3).d == 1


def test_quotient_map_kills_relators():
    for name, p_ in (('q8', 2), ('d4', 2), ('genus2', 2), ('psl2z', 2), ('psl2z', 3)):
        p = load_presentation(name)
        quotient = mod_p_quotient_map(p, p_)
        for relator in p.relators:
            assert quotient.image_of(relator) == (0,) * quotient.d


def test_chain_indexes():
    assert derived_p_chain(load_presentation('z'), 2, 3).indexes == (2, 4, 8)
    assert derived_p_chain(load_presentation('f2'), 2, 2).indexes == (4, 128)
    assert derived_p_chain(load_presentation('f3'), 2, 1).indexes == (8,)
    assert derived_p_chain(load_presentation('d_infinity'), 2, 3).indexes == (4, 8, 16)
    assert derived_p_chain(load_presentation('genus2'), 2, 1).indexes == (16,)


def test_chain_of_finite_cyclic_group_stabilizes():
    chain = derived_p_chain(load_presentation('z4'), 2, 3)
    assert chain.indexes == (2, 4)
    assert chain.truncated == 'stabilized'
    s3 = derived_p_chain(load_presentation('s3'), 2, 3)
    assert s3.indexes == (2,)
    assert s3.truncated == 'stabilized'


def test_perfect_group_has_empty_chain():
    chain = derived_p_chain(load_presentation('triangle_2_3_7'), 2, 2)
    assert chain.levels == ()
    assert chain.truncated == 'stabilized'
    with pytest.raises(Stabilized):
        step(load_presentation('triangle_2_3_7'), 3)


def test_index_cap_truncates():
    chain = derived_p_chain(load_presentation('f2'), 2, 3, max_index=1000)
    assert chain.indexes == (4, 128)
    assert chain.truncated == 'index_cap'
    with pytest.raises(IndexCapExceeded):
        step(load_presentation('f2'), 2, max_index=3)


def test_levels_are_normal_nested_actions():
    p = load_presentation('d_infinity')
    chain = derived_p_chain(p, 2, 3)
    previous = None
    for level in chain.levels:
        assert check_relators(p, level.table)
        assert is_normal(level.table)
        if previous is not None:
            for w in level.presentation_of_H.inclusion:
                assert trace(previous, w, 0) == 0
        previous = level.table


def test_chain_to_dict():
    p = load_presentation('z')
    data = derived_p_chain(p, 3, 1).to_dict(p.generator_names)
    assert data['p'] == 3
    assert data['hypothesis'] == 'user-asserted'
    assert data['levels'][0]['index'] == 3
    assert data['levels'][0]['permutations'] == [[1, 2, 0]]


def test_rejects_non_prime():
    with pytest.raises(NonPrimeError):
        derived_p_chain(load_presentation('z'), 4)


def test_explicit_chain():
    p = load_presentation('z2')
    subgroups = [parse_words(text, p.generator_names) for text in ('a^2, b', 'a^4, b', 'a^4, b^2')]
    chain = chain_from_subgroups(p, subgroups)
    assert chain.indexes == (2, 4, 8)
    assert chain.p is None
    with pytest.raises(ValueError):
        chain_from_subgroups(p, [parse_words('a^2, b^2', p.generator_names),
                                 parse_words('a, b^4', p.generator_names)], max_cosets=1000)
