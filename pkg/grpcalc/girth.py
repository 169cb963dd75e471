"""Girth of marked groups: exact for finite groups, certified intervals for presented groups."""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .betti_bounds import FAIL, INCONCLUSIVE, PASS, Check, NonNormalTable, relator_length_bound
from .chains import Chain
from .cohomology import cocycle_dim
from .coset_enum import CosetTable, check_relators, is_normal
from .fox import evaluate, fox_derivative, support_size
from .groupring import FiniteGroup
from .utils import InputError, thread_pool
from .words import EMPTY_WORD, Letter, Presentation, Word, concat, cyclic_length, render_word

logger = logging.getLogger(__name__)

INEQ_NOTE = ('girth is bounded by the limit beta_1, not by any finite-level value; '
             'only the relator-level inequality and internal consistency are tested')


def _letters(k: int) -> List[Letter]:
    return [Letter(g, s) for g in range(k) for s in (1, -1)]


def girth_finite(group: Union[FiniteGroup, CosetTable], k: Optional[int] = None) -> Optional[int]:
    """Length of the shortest nonempty reduced word equal to the identity; None without generators.

    A CosetTable must be the regular action (trivial subgroup) of the marked group.
    """
    if isinstance(group, FiniteGroup):
        inverses = [group.inverse(g) for g in group.generators]

        def step(x: int, letter: Letter) -> int:
            g = group.generators[letter.index] if letter.sign > 0 else inverses[letter.index]
            return int(group.mul[x, g])
        k = len(group.generators) if k is None else k
    else:
        def step(x: int, letter: Letter) -> int:
            return group.image(x, letter)
        k = group.k if k is None else k
    if k == 0:
        return None
    letters = _letters(k)
    frontier: List[Tuple[int, Optional[Letter]]] = [(0, None)]
    seen = {(0, None)}
    length = 0
    while frontier:
        length += 1
        next_frontier = []
        for x, last in frontier:
            for letter in letters:
                if last is not None and letter == last.inverse():
                    continue
                y = step(x, letter)
                if y == 0:
                    return length
                state = (y, letter)
                if state not in seen:
                    seen.add(state)
                    next_frontier.append(state)
        frontier = next_frontier
    return None


@dataclass
class GirthReport:
    lower: int
    upper: Optional[int]
    radius: int
    exhausted: bool
    witness: Optional[Word] = None
    candidate: Optional[Word] = None
    certificate_quotients: List[Dict[str, object]] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)

    def __post_init__(self):
        if self.upper is not None and self.lower > self.upper:
            raise InputError(f'Girth lower bound {self.lower} exceeds upper bound {self.upper}')

    @property
    def exact(self) -> Optional[int]:
        return self.lower if self.upper is not None and self.lower == self.upper else None

    def to_dict(self, names: Sequence[str]) -> dict:
        return {'lower': self.lower if not self.exhausted else f'>= {self.lower}',
                'upper': self.upper if self.upper is not None else 'inf',
                'exact': self.exact,
                'radius': self.radius,
                'witness': render_word(self.witness, names) if self.witness is not None else None,
                'uncertified': render_word(self.candidate, names) if self.candidate is not None else None,
                'certificate_quotients': self.certificate_quotients,
                'checks': [c.to_dict() for c in self.checks],
                'note': INEQ_NOTE}


def _extend_states(args):
    tables, letters, images, last, word = args
    out = []
    for letter in letters:
        if last is not None and letter == last.inverse():
            continue
        moved = tuple(tuple(t.image(c, letter) for c in table_images) for t, table_images in zip(tables, images))
        out.append((moved, letter, concat(word, Word((letter,)))))
    return out


def _moves_something(images: Tuple[Tuple[int, ...], ...]) -> bool:
    return any(c != d for table_images in images for c, d in enumerate(table_images))


def girth_interval(p: Presentation, chains: Sequence[Chain] = (), radius: int = 6,
                   quotients: Sequence[CosetTable] = ()) -> GirthReport:
    """Lower bound from words moving a coset in some G-action, upper bound from relators."""
    if radius < 1:
        raise InputError('radius must be at least 1')
    tables: List[CosetTable] = []
    certificates: List[Dict[str, object]] = []
    for chain in chains:
        for level in chain.levels:
            tables.append(level.table)
            certificates.append({'source': f'chain p={chain.p}', 'level': level.depth, 'index': level.index_in_G})
    for n, table in enumerate(quotients, start=1):
        if table.k != p.k or not check_relators(p, table):
            raise InputError(f'Quotient table {n} is not an action of the presented group')
        tables.append(table)
        certificates.append({'source': f'quotient {n}', 'index': table.size})

    upper, witness = None, None
    for relator in p.relators:
        if relator and (upper is None or cyclic_length(relator) < upper):
            upper, witness = cyclic_length(relator), relator

    letters = _letters(p.k)
    identity = tuple(tuple(range(t.size)) for t in tables)
    frontier = [(identity, None, EMPTY_WORD)]
    seen = {(identity, None)}
    lower, candidate, exhausted = radius + 1, None, True
    with thread_pool() as executor:
        for length in range(1, radius + 1):
            batches = executor.map(_extend_states, [(tables, letters, images, last, word)
                                                    for images, last, word in frontier])
            next_frontier = []
            for batch in batches:
                for images, last, word in batch:
                    if not _moves_something(images) and candidate is None:
                        candidate = word
                    if (images, last) not in seen:
                        seen.add((images, last))
                        next_frontier.append((images, last, word))
            if candidate is not None:
                lower, exhausted = length, False
                break
            frontier = next_frontier
    logger.info(f'Girth interval [{lower}, {upper if upper is not None else "inf"}] from {len(tables)} quotients')
    return GirthReport(lower, upper, radius, exhausted, witness, candidate, certificates)


def ineq_consistency(p: Presentation, report: GirthReport,
                     approximants: Sequence[Fraction] = ()) -> List[Check]:
    """1/(k - 1 - relator_length_bound) equals the shortest relator length, which bounds the girth above."""
    bound = relator_length_bound(p.k, p)
    if report.upper is None:
        return [Check('ineq_consistency', None, bound, Fraction(p.k - 1), PASS, 'no relators: girth infinite')]
    lhs = 1 / (Fraction(p.k - 1) - bound)
    checks = [Check('ineq_consistency', None, lhs, Fraction(report.upper), PASS if lhs == report.upper else FAIL)]
    ceiling = Fraction(p.k - 1) - Fraction(1, report.upper)
    for level, value in enumerate(approximants, start=1):
        verdict = PASS if value <= ceiling else INCONCLUSIVE
        checks.append(Check('girth_ceiling', level, value, ceiling, verdict,
                            '' if verdict == PASS else 'inconclusive at finite level'))
    return checks


def z1_support_bound_check(p: Presentation, t: CosetTable) -> List[Check]:
    """dim Z^1(G, Q[G/H]) <= k N - N / |supp d_i(w)| for every relator w whose Fox image is nonzero."""
    if not is_normal(t):
        raise NonNormalTable(f'The subgroup of index {t.size} is not normal')
    n = t.size
    z1 = Fraction(cocycle_dim(p, t))
    checks = []
    for j, relator in enumerate(p.relators):
        for i in range(p.k):
            derivative = fox_derivative(relator, i)
            if not derivative or evaluate(derivative, t).is_zero():
                continue
            rhs = Fraction(p.k * n) - Fraction(n, support_size(derivative))
            verdict = PASS if z1 <= rhs else FAIL
            if verdict == FAIL:
                logger.error(f'Support bound fails for relator {j}, generator {i}: {z1} > {rhs}')
            checks.append(Check(f'z1_support[{j},{i}]', None, z1, rhs, verdict))
    if not checks:
        checks.append(Check('z1_support', None, z1, Fraction(p.k * n), PASS, 'every Fox image vanishes'))
    return checks
