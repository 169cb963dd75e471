from fractions import Fraction

import pytest

from grpcalc.config import (RunConfig, corpus_names, load_presentation, parse_normal_generators, parse_orders,
                            parse_subgroups, parse_summands, resolve_input)
from grpcalc.utils import InputError, NonPrimeError


def setup_module():
    print(f" == Setting up tests for {__name__}")


def teardown_module():
    print(f" == Tearing down tests for {__name__}")


def test_run_config_validation():
    config = RunConfig('betti', p=3)
    assert (config.depth, config.seed, config.output_format) == (3, 42, 'json')
    with pytest.raises(NonPrimeError):
        RunConfig('betti', p=6)
    with pytest.raises(InputError):
        RunConfig('chain', max_index=0)
    with pytest.raises(InputError):
        RunConfig('parse', output_format='xml')


def test_parse_orders():
    assert parse_orders('2, 3,inf') == [2, 3, None]
    assert parse_orders('oo') == [None]
    with pytest.raises(InputError):
        parse_orders('2,0')
    with pytest.raises(InputError):
        parse_orders('two')


def test_parse_summands():
    assert parse_summands('0:2,1/2:inf') == [(Fraction(0), 2), (Fraction(1, 2), None)]
    with pytest.raises(InputError):
        parse_summands('0')


def test_default_normal_generators():
    spec = parse_normal_generators(None, load_presentation('psl2z'))
    assert spec.declared_orders == (2, 3)
    assert spec.k == 2
    assert parse_normal_generators('', load_presentation('f2')).declared_orders == (None, None)


def test_explicit_normal_generators():
    p = load_presentation('d_infinity')
    spec = parse_normal_generators('a:2,b*a', p)
    assert spec.declared_orders == (2, None)
    spec = parse_normal_generators('[a,b]:inf; b:2', p)
    assert spec.declared_orders == (None, 2)
    assert len(spec.elements[0]) == 4


def test_subgroups_and_corpus():
    p = load_presentation('s3')
    assert [len(level) for level in parse_subgroups(['a,b^-1*a*b', 'a'], p)] == [2, 1]
    names = corpus_names()
    assert {'f2', 'z', 'psl27', 'triangle_2_3_7'} <= set(names)
    assert resolve_input('s3.grp').endswith('s3.grp')
    with pytest.raises(InputError):
        resolve_input('not_a_group')
