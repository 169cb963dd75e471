from grpcalc.chains import derived_p_chain
from grpcalc.cohomology import (abelianization, abelianization_rank, coboundary_dim, cocycle_dim, h1_dim, h1_routes,
                                relation_matrix)
from grpcalc.config import load_presentation
from grpcalc.coset_enum import enumerate_cosets
from grpcalc.words import parse_words

# (presentation, prime, depth) giving at least twelve (presentation, level) pairs
SHAPIRO_CASES = (('z', 2, 3), ('f2', 2, 2), ('d_infinity', 2, 3), ('z2', 2, 2), ('genus2', 2, 1), ('z4', 2, 2),
                 ('abab', 2, 2), ('psl2z', 3, 1))


def setup_module():
    print(f" == Setting up tests for {__name__}")


def teardown_module():
    print(f" == Tearing down tests for {__name__}")


def test_abelianization_of_corpus_groups():
    assert abelianization(load_presentation('z2')) == (2, ())
    assert abelianization(load_presentation('q8')) == (0, (2, 2))
    assert abelianization(load_presentation('s3')) == (0, (2,))
    assert abelianization(load_presentation('psl2z')) == (0, (6,))
    assert abelianization(load_presentation('genus2')) == (4, ())
    assert abelianization(load_presentation('triangle_2_3_7')) == (0, ())
    assert abelianization_rank(load_presentation('f3')) == 3


def test_relation_matrix_shape():
    m = relation_matrix(load_presentation('s3'))
    assert (m.rows, m.cols) == (3, 2)


def test_trivial_subgroup_of_finite_group_has_no_h1():
    p = load_presentation('a4')
    t = enumerate_cosets(p)
    report = h1_dim(p, t)
    assert report.dim_H1 == 0
    assert report.dim_B1 == t.size - 1
    assert coboundary_dim(t) == 11


def test_cocycles_of_c2():
    p = load_presentation('c2')
    t = enumerate_cosets(p)
    assert cocycle_dim(p, t) == 1


def test_subgroup_of_z2():
    p = load_presentation('z2')
    t = enumerate_cosets(p, parse_words('a^2, b', p.generator_names))
    report = h1_dim(p, t)
    assert report.index == 2
    assert report.dim_H1 == 2


def test_surface_group_level_one():
    p = load_presentation('genus2')
    chain = derived_p_chain(p, 2, depth=1)
    level = chain.levels[0]
    report = h1_dim(p, level.table, level.presentation_of_H)
    assert report.index == 16
    assert report.dim_H1 == 34
    assert report.dim_H1_shapiro == 34
    assert h1_routes(p, level.table, level.presentation_of_H) == (34, 34)
    assert h1_routes(p, level.table) == (34, 34)


def test_shapiro_cross_check_on_corpus():
    pairs = 0
    for name, p_, depth in SHAPIRO_CASES:
        p = load_presentation(name)
        for level in derived_p_chain(p, p_, depth).levels:
            report = h1_dim(p, level.table, level.presentation_of_H)
            assert report.dim_H1 == report.abelianization_rank
            pairs += 1
    assert pairs >= 12
