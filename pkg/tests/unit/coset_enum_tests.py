import random

import pytest

from grpcalc.chains import derived_p_chain
from grpcalc.cohomology import abelianization_rank
from grpcalc.config import load_presentation
from grpcalc.coset_enum import (CosetLimitExceeded, CosetTable, MalformedTable, check_relators, enumerate_cosets,
                                is_normal, orbits, permutation_matrix, rewrite_subgroup, schreier_transversal,
                                standardize, trace)
from grpcalc.exact_linalg import IntegerMatrix
from grpcalc.words import Word, parse_presentation, parse_words


def setup_module():
    print(f" == Setting up tests for {__name__}")


def teardown_module():
    print(f" == Tearing down tests for {__name__}")


def _index(name: str, subgroup: str = '') -> int:
    p = load_presentation(name)
    return enumerate_cosets(p, parse_words(subgroup, p.generator_names)).size


def test_orders_of_finite_corpus_groups():
    expected = {'c2': 2, 'c3': 3, 'z4': 4, 'c5': 5, 'c6': 6, 'c8': 8, 'c2xc2': 4, 's3': 6, 'd4': 8, 'q8': 8,
                'a4': 12, 'psl27': 168}
    for name, order in expected.items():
        assert _index(name) == order, name


def test_subgroup_indexes():
    assert _index('s3', 'a') == 3
    assert _index('s3', 'b') == 2
    assert _index('a4', 'b') == 4
    assert _index('d_infinity', 'a*b') == 2
    assert _index('z2', 'a^2, b') == 2


def test_table_is_standardized_and_satisfies_relators():
    p = load_presentation('q8')
    t = enumerate_cosets(p)
    assert standardize(t) == t
    assert check_relators(p, t)
    assert t.is_transitive()
    assert len(orbits(t)) == 1


def test_cap_exceeded_on_infinite_index():
    with pytest.raises(CosetLimitExceeded) as e:
        enumerate_cosets(load_presentation('z'), (), max_cosets=50)
    assert e.value.exit_code == 2


def test_normality():
    p = load_presentation('s3')
    assert is_normal(enumerate_cosets(p, parse_words('b', p.generator_names)))
    assert not is_normal(enumerate_cosets(p, parse_words('a', p.generator_names)))
    assert is_normal(enumerate_cosets(p))


def test_trace_and_permutation_matrix():
    p = load_presentation('c3')
    t = enumerate_cosets(p)
    a = Word.generator(0)
    assert trace(t, Word.power(0, 3), 1) == 1
    m = permutation_matrix(t, 0)
    for c in range(3):
        assert m[trace(t, a, c), c] == 1


def test_from_permutations_validates():
    with pytest.raises(MalformedTable):
        CosetTable.from_permutations([[0, 0]])
    with pytest.raises(MalformedTable):
        CosetTable.from_permutations([[1, 0, 2]])
    t = CosetTable.from_permutations([[2, 0, 1]])
    assert t.action == ((1, 2, 0),)


def test_to_dict_round_trip():
    t = enumerate_cosets(load_presentation('d4'))
    assert CosetTable.from_dict(t.to_dict()).action == t.action


def test_schreier_transversal_represents_cosets():
    p = load_presentation('a4')
    t = enumerate_cosets(p)
    transversal, tree = schreier_transversal(t)
    assert len(tree) == t.size - 1
    for c, w in enumerate(transversal):
        assert trace(t, w, 0) == c


def test_rewrite_subgroup_of_s3():
    p = load_presentation('s3')
    t = enumerate_cosets(p, parse_words('b', p.generator_names))
    subgroup = rewrite_subgroup(p, t)
    assert subgroup.index == 2
    assert subgroup.presentation.k == 2 * 2 - 1
    assert subgroup.eliminated == 1
    for w in subgroup.inclusion:
        assert trace(t, w, 0) == 0


def test_rewrite_surface_group_generator_count():
    p = load_presentation('genus2')
    # the first derived 2-series term, kernel of the map onto (Z/2)^4
    level = derived_p_chain(p, 2, 1).levels[0]
    assert level.index_in_G == 16
    subgroup = rewrite_subgroup(p, level.table)
    assert subgroup.presentation.k == 1 + 16 * (4 - 1)
    assert subgroup.report()['schreier_generators'] == 64
    # a genus 17 surface group
    assert abelianization_rank(subgroup.presentation) == 34


def test_rewrite_infinite_cyclic_at_index_2():
    p = parse_presentation('gens: a;\nrels: ;')
    t = CosetTable.from_permutations([[1, 0]])
    subgroup = rewrite_subgroup(p, t)
    assert subgroup.presentation.k == 1
    assert subgroup.presentation.relators == ()
    assert subgroup.inclusion == (Word.power(0, 2),)


def _random_transitive_action(rng: random.Random, k: int, n: int) -> CosetTable:
    points = list(range(n))
    rng.shuffle(points)
    cycle = [0] * n
    for i, x in enumerate(points):
        cycle[x] = points[(i + 1) % n]
    permutations = [cycle]
    for _ in range(k - 1):
        perm = list(range(n))
        rng.shuffle(perm)
        permutations.append(perm)
    return CosetTable.from_permutations(permutations)


def test_nielsen_schreier_rank_in_free_groups():
    rng = random.Random('42:nielsen_schreier')
    for k in (1, 2, 3):
        p = parse_presentation(f'gens: {", ".join("abc"[:k])};\nrels: ;')
        for n in range(1, 17):
            t = _random_transitive_action(rng, k, n)
            subgroup = rewrite_subgroup(p, t)
            assert subgroup.presentation.k == 1 + n * (k - 1), (k, n)
            assert subgroup.eliminated == n - 1
            assert all(trace(t, w, 0) == 0 for w in subgroup.inclusion)


def test_permutation_matrices_are_orthogonal():
    for name in ('s3', 'q8', 'a4'):
        t = enumerate_cosets(load_presentation(name))
        identity = IntegerMatrix.identity(t.size)
        for g in range(t.k):
            m = permutation_matrix(t, g)
            assert m @ m.transpose() == identity
            assert m @ permutation_matrix(t, g, -1) == identity


def test_normality_from_the_action_alone():
    assert not is_normal(CosetTable.from_permutations([[1, 0, 2], [1, 2, 0]]))
    assert is_normal(CosetTable.from_permutations([[1, 2, 0]]))
    assert is_normal(CosetTable.from_permutations([[1, 0, 3, 2], [2, 3, 0, 1]]))
    assert is_normal(enumerate_cosets(load_presentation('a4')))


def test_lookahead_frees_cosets_for_further_definitions():
    # every generator first spans a 6-cycle, which a^5 then collapses; with room for 6 cosets each
    # generator needs the rows freed by the previous collapse
    two = parse_presentation('gens: a, b;\nrels: a^6, a^5, b^6, b^5;')
    assert enumerate_cosets(two, (), max_cosets=6).size == 1
    three = parse_presentation('gens: a, b, c;\nrels: a^6, a^5, b^6, b^5, c^6, c^5;')
    assert enumerate_cosets(three, (), max_cosets=6).size == 1
    with pytest.raises(CosetLimitExceeded):
        enumerate_cosets(three, (), max_cosets=2)
