"""Derived p-series chains H_{n+1} = [H_n, H_n] H_n^p, realized as G-actions on G/H_n.

Each step is a mod-p abelianization of the current subgroup presentation
followed by Reidemeister-Schreier, so no p-quotient machinery is needed.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .coset_enum import (DEFAULT_MAX_COSETS, CosetTable, SubgroupPresentation, enumerate_cosets, is_normal,
                         rewrite_subgroup, trace)
from .exact_linalg import rref_mod_p
from .utils import CapExceeded, GrpcalcError, InputError, require_prime
from .words import Presentation, Word, render_word

logger = logging.getLogger(__name__)

DEFAULT_DEPTH = 3
DEFAULT_MAX_INDEX = 10 ** 5


class IndexCapExceeded(CapExceeded):

    def __init__(self, index: int, max_index: int):
        super().__init__(f'Next chain level would have index {index} > cap {max_index}')
        self.index = index
        self.max_index = max_index


class Stabilized(GrpcalcError):
    """The next derived p-series term equals the current one (no mod-p quotient left)."""


@dataclass(frozen=True)
class QuotientMap:
    d: int
    images: Tuple[Tuple[int, ...], ...]
    p: int

    def image_of(self, w: Word) -> Tuple[int, ...]:
        vector = [0] * self.d
        for letter in w.letters:
            for m, x in enumerate(self.images[letter.index]):
                vector[m] += letter.sign * x
        return tuple(x % self.p for x in vector)


def mod_p_quotient_map(presentation: Presentation, p: int) -> QuotientMap:
    """The map G -> G/[G,G]G^p = (F_p)^d, given by generator images."""
    require_prime(p)
    rows = [r.exponent_sums(presentation.k) for r in presentation.relators]
    reduced, pivots = rref_mod_p(rows, p, presentation.k)
    free = [c for c in range(presentation.k) if c not in pivots]
    position = {c: m for m, c in enumerate(free)}
    pivot_row = {c: r for r, c in enumerate(pivots)}
    images = []
    for i in range(presentation.k):
        if i in position:
            images.append(tuple(int(m == position[i]) for m in range(len(free))))
        else:
            row = reduced[pivot_row[i]]
            images.append(tuple(int(-row[c]) % p for c in free))
    return QuotientMap(len(free), tuple(images), p)


@dataclass(frozen=True)
class ChainLevel:
    depth: int
    index_in_G: int
    table: CosetTable
    presentation_of_H: SubgroupPresentation
    d: int

    def to_dict(self, names: Sequence[str]) -> dict:
        return {'level': self.depth, 'index': self.index_in_G, 'd': self.d,
                'normal': is_normal(self.table),
                'permutations': [list(perm) for perm in self.table.action],
                'subgroup_generators': [render_word(w, names) for w in self.presentation_of_H.inclusion]}


@dataclass(frozen=True)
class Chain:
    p: Optional[int]
    levels: Tuple[ChainLevel, ...]
    truncated: Optional[str] = None
    hypothesis: str = field(default='user-asserted')

    @property
    def indexes(self) -> Tuple[int, ...]:
        return tuple(level.index_in_G for level in self.levels)

    def to_dict(self, names: Sequence[str]) -> dict:
        return {'p': self.p, 'truncated': self.truncated, 'hypothesis': self.hypothesis,
                'indexes': list(self.indexes), 'levels': [level.to_dict(names) for level in self.levels]}


def _extend(g: Presentation, table: CosetTable, subgroup: SubgroupPresentation, p: int,
            max_index: int, depth: int) -> ChainLevel:
    """G-action on the cosets of Phi(H) from the action on G/H and H's mod-p quotient map."""
    quotient = mod_p_quotient_map(subgroup.presentation, p)
    if quotient.d == 0:
        raise Stabilized(f'Subgroup of index {table.size} has no mod-{p} quotient')
    width = p ** quotient.d
    index = table.size * width
    if index > max_index:
        raise IndexCapExceeded(index, max_index)
    zero = (0,) * quotient.d
    generator_of = {pair: j for j, pair in enumerate(subgroup.schreier_generators)}
    shifts = []
    for gen in range(g.k):
        shifts.append([quotient.images[generator_of[(c, gen)]] if (c, gen) in generator_of else zero
                       for c in range(table.size)])

    def encode(c: int, vector: Sequence[int]) -> int:
        code = 0
        for x in vector:
            code = code * p + x
        return c * width + code

    def decode(code: int) -> Tuple[int, List[int]]:
        c, rest = divmod(code, width)
        vector = []
        for _ in range(quotient.d):
            rest, x = divmod(rest, p)
            vector.append(x)
        return c, vector[::-1]

    permutations = []
    for gen in range(g.k):
        perm = []
        for code in range(index):
            c, vector = decode(code)
            shifted = [(x + y) % p for x, y in zip(vector, shifts[gen][c])]
            perm.append(encode(table.action[gen][c], shifted))
        permutations.append(perm)
    new_table = CosetTable.from_permutations(permutations)
    presentation_of_H = rewrite_subgroup(g, new_table)
    new_table = CosetTable(new_table.action, presentation_of_H.inclusion)
    logger.info(f'Level {depth}: mod-{p} rank {quotient.d}, index {index}, '
                f'subgroup on {presentation_of_H.presentation.k} generators')
    return ChainLevel(depth, index, new_table, presentation_of_H, quotient.d)


def _base(g: Presentation) -> Tuple[CosetTable, SubgroupPresentation]:
    table = CosetTable(tuple((0,) for _ in range(g.k)))
    return table, rewrite_subgroup(g, table)


def step(g: Presentation, p: int, max_index: int = DEFAULT_MAX_INDEX) -> ChainLevel:
    """First derived p-series term K = [G,G]G^p as a level-1 chain entry."""
    require_prime(p)
    table, subgroup = _base(g)
    return _extend(g, table, subgroup, p, max_index, 1)


def derived_p_chain(g: Presentation, p: int, depth: int = DEFAULT_DEPTH,
                    max_index: int = DEFAULT_MAX_INDEX) -> Chain:
    if depth < 1:
        raise InputError('Chain depth must be at least 1')
    require_prime(p)
    table, subgroup = _base(g)
    levels: List[ChainLevel] = []
    truncated = 'depth'
    for n in range(1, depth + 1):
        try:
            level = _extend(g, table, subgroup, p, max_index, n)
        except Stabilized as e:
            logger.info(f'Chain stabilized after {len(levels)} levels: {e}')
            truncated = 'stabilized'
            break
        except IndexCapExceeded as e:
            logger.info(f'Chain truncated after {len(levels)} levels: {e}')
            truncated = 'index_cap'
            break
        levels.append(level)
        table, subgroup = level.table, level.presentation_of_H
    return Chain(p, tuple(levels), truncated)


def chain_from_subgroups(g: Presentation, subgroups: Sequence[Sequence[Word]],
                         max_cosets: int = DEFAULT_MAX_COSETS) -> Chain:
    """User supplied chain (e.g. congruence subgroups); each level enumerated by Todd-Coxeter."""
    levels: List[ChainLevel] = []
    previous: Optional[CosetTable] = None
    for n, generators in enumerate(subgroups, start=1):
        table = enumerate_cosets(g, generators, max_cosets)
        if previous is not None and any(trace(previous, w, 0) != 0 for w in generators):
            raise InputError(f'Subgroup at level {n} is not contained in the subgroup at level {n - 1}')
        presentation_of_H = rewrite_subgroup(g, table)
        if not is_normal(table):
            logger.warning(f'Subgroup at level {n} is not normal; per-level bound checks will refuse it')
        levels.append(ChainLevel(n, table.size, table, presentation_of_H, 0))
        previous = table
    return Chain(None, tuple(levels), 'depth')
