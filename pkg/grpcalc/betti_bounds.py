"""Normalized first Betti numbers along chains and the closed-form upper and lower bounds for beta_1.

Nothing here claims a limit: a report carries the finite-level approximants, the
bound values, and per-level inequalities that hold at every finite level.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .chains import Chain, mod_p_quotient_map
from .cohomology import CohomologyReport, h1_dim
from .coset_enum import CosetLimitExceeded, CosetTable, enumerate_cosets, is_normal, trace
from .exact_linalg import rank_rational, vstack
from .fox import jacobian
from .utils import InputError, format_decimal, format_rational, is_prime_power, thread_pool
from .words import NormalGeneratorSpec, Presentation, Word, cyclic_length

logger = logging.getLogger(__name__)

PASS = 'pass'
FAIL = 'fail'
INCONCLUSIVE = 'inconclusive'

CERTIFICATE_MAX_COSETS = 10 ** 4


class OrderDeclarationError(InputError):
    """The image order of a normal generator does not divide its declared order."""


class NonNormalTable(InputError):
    pass


@dataclass(frozen=True)
class Approximant:
    level: int
    index: int
    h1: int

    @property
    def normalized(self) -> Fraction:
        return Fraction(self.h1, self.index)

    def to_dict(self, decimal: bool = False) -> dict:
        result = {'level': self.level, 'index': self.index, 'h1': self.h1,
                  'normalized': format_rational(self.normalized)}
        if decimal:
            result['normalized_decimal'] = format_decimal(self.normalized)
        return result


@dataclass(frozen=True)
class Check:
    name: str
    level: Optional[int]
    lhs: Fraction
    rhs: Fraction
    verdict: str
    note: str = ''

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        result = {'name': self.name, 'level': self.level, 'lhs': format_rational(self.lhs),
                  'rhs': format_rational(self.rhs), 'verdict': self.verdict, 'pass': self.passed}
        if self.note:
            result['note'] = self.note
        return result


@dataclass
class BettiReport:
    chain: Chain
    generator_names: Tuple[str, ...]
    approximants: List[Approximant] = field(default_factory=list)
    cohomology: List[CohomologyReport] = field(default_factory=list)
    bounds: Dict[str, Fraction] = field(default_factory=dict)
    notes: Dict[str, str] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)

    @property
    def normalized(self) -> Tuple[Fraction, ...]:
        return tuple(a.normalized for a in self.approximants)

    @property
    def violations(self) -> List[Check]:
        return [c for c in self.checks if c.verdict == FAIL]

    def to_dict(self, decimal: bool = False) -> dict:
        chain = {'p': self.chain.p, 'indexes': list(self.chain.indexes), 'truncated': self.chain.truncated,
                 'hypothesis': self.chain.hypothesis}
        result = {'chain': chain,
                  'label': 'approximants',
                  'approximants': [a.to_dict(decimal) for a in self.approximants],
                  'bounds': {name: format_rational(value) for name, value in sorted(self.bounds.items())},
                  'checks': [c.to_dict() for c in self.checks],
                  'violations': [c.to_dict() for c in self.violations]}
        if decimal:
            result['bounds_decimal'] = {name: format_decimal(value) for name, value in sorted(self.bounds.items())}
        if self.notes:
            result['notes'] = dict(sorted(self.notes.items()))
        return result


def _level_cohomology(args) -> CohomologyReport:
    p, level = args
    return h1_dim(p, level.table, level.presentation_of_H)


def approx_sequence(p: Presentation, chain: Chain) -> BettiReport:
    """dim H^1(G, Q[G/H_n]) / [G:H_n] for every chain level, both H^1 routes cross-checked."""
    with thread_pool() as executor:
        reports = list(executor.map(_level_cohomology, [(p, level) for level in chain.levels]))
    report = BettiReport(chain, p.generator_names)
    for level, cohomology in zip(chain.levels, reports):
        report.approximants.append(Approximant(level.depth, level.index_in_G, cohomology.dim_H1))
        report.cohomology.append(cohomology)
    report.bounds['trivial'] = trivial_bound(p.k)
    if not p.relators:
        for approximant in report.approximants:
            report.checks.append(free_approximant_check(p.k, approximant))
    return report


def trivial_bound(k: int) -> Fraction:
    if k < 1:
        raise InputError('At least one generator is needed')
    return Fraction(k - 1)


def torsion_bound(spec: NormalGeneratorSpec) -> Fraction:
    """k - 1 - sum 1/n_i, infinite orders contributing nothing."""
    return Fraction(spec.k - 1) - sum((Fraction(1, n) for n in spec.declared_orders if n is not None), Fraction(0))


def mod_p_rank(p: Presentation, prime: int) -> int:
    return mod_p_quotient_map(p, prime).d


def mod_p_bound(p: Presentation, prime: int) -> Fraction:
    """d - 1 with d = dim H^1(G; Z/p)."""
    return Fraction(mod_p_rank(p, prime) - 1)


def free_product_lower_bound(n: int, summands: Sequence[Tuple[Fraction, Optional[int]]],
                             relator_orders: Sequence[int] = ()) -> Fraction:
    """n - 1 + sum(beta_1(G_i) - 1/|G_i|) - sum 1/w_j; irredundancy of the presentation is up to the caller."""
    if n < 1:
        raise InputError('A free product needs at least one factor')
    value = Fraction(n - 1)
    for beta, order in summands:
        if order is not None and order < 1:
            raise InputError(f'Summand order must be positive, got {order}')
        value += Fraction(beta) - (Fraction(1, order) if order is not None else 0)
    for w in relator_orders:
        if w < 1:
            raise InputError(f'Relator orders must be positive, got {w}')
        value -= Fraction(1, w)
    return value


def relator_length_bound(k: int, p: Presentation) -> Fraction:
    """k - 1 - 1/l for the shortest cyclically reduced relator; k - 1 without relators."""
    lengths = [cyclic_length(r) for r in p.relators if r]
    if not lengths:
        logger.info('No relators: the relator length bound degenerates to k - 1')
        return trivial_bound(k)
    return Fraction(k - 1) - Fraction(1, min(lengths))


def free_approximant_check(k: int, approximant: Approximant) -> Check:
    """In F_k, an index N subgroup has rank 1 + N(k - 1)."""
    expected = Fraction(k - 1) + Fraction(1, approximant.index)
    verdict = PASS if approximant.normalized == expected else FAIL
    return Check('free_approximant', approximant.level, approximant.normalized, expected, verdict)


def permutation_order(t: CosetTable, w: Word) -> int:
    """Order of the permutation c -> c.w, from its cycle lengths."""
    seen = [False] * t.size
    order = 1
    for start in range(t.size):
        if seen[start]:
            continue
        length = 0
        c = start
        while not seen[c]:
            seen[c] = True
            c = trace(t, w, c)
            length += 1
        order = order * length // gcd(order, length)
    return order


def image_orders(spec: NormalGeneratorSpec, t: CosetTable) -> List[int]:
    orders = []
    for i, (w, declared) in enumerate(zip(spec.elements, spec.declared_orders)):
        m = permutation_order(t, w)
        if declared is not None and declared % m:
            raise OrderDeclarationError(f'Normal generator {i} acts with order {m} on {t.size} cosets, '
                                        f'which does not divide its declared order {declared}')
        orders.append(m)
    return orders


def normal_generation_certificate(p: Presentation, spec: NormalGeneratorSpec,
                                  max_cosets: int = CERTIFICATE_MAX_COSETS) -> Optional[bool]:
    """True if the elements normally generate G, False if they provably do not, None if undecided."""
    try:
        quotient = enumerate_cosets(p.with_relators(spec.elements), (), max_cosets)
    except CosetLimitExceeded:
        logger.info('Normal generation undecided: the quotient by the normal generators did not collapse')
        return None
    return quotient.size == 1


def _gated(t: CosetTable, normally_generates: Optional[bool]) -> bool:
    return bool(normally_generates) and is_prime_power(t.size)


def pi_image_check(p: Presentation, spec: NormalGeneratorSpec, t: CosetTable, h1: Optional[int] = None,
                   level: Optional[int] = None, normally_generates: Optional[bool] = None) -> List[Check]:
    """dim H^1(G, Q[G/H]) <= N sum(1 - 1/n_i) - N + 1 for normal H, plus the same with image orders."""
    if not is_normal(t):
        raise NonNormalTable(f'The subgroup of index {t.size} is not normal')
    m = image_orders(spec, t)
    if h1 is None:
        h1 = h1_dim(p, t).dim_H1
    n = t.size
    declared = sum((1 - (Fraction(1, o) if o is not None else 0) for o in spec.declared_orders), Fraction(0))
    sharp = sum((1 - Fraction(1, mi) if o is not None else Fraction(1)
                 for mi, o in zip(m, spec.declared_orders)), Fraction(0))
    checks = []
    for name, total in (('pi_image', declared), ('pi_image_sharp', sharp)):
        rhs = n * total - n + 1
        if h1 <= rhs:
            verdict, note = PASS, ''
        elif _gated(t, normally_generates):
            verdict, note = FAIL, ''
        else:
            verdict, note = INCONCLUSIVE, 'normal generation or prime-power index not certified'
        checks.append(Check(name, level, Fraction(h1), rhs, verdict, note))
    if checks[-1].verdict != PASS:
        logger.warning(f'pi_image inequality {checks[-1].verdict} at index {n}: {h1} > {checks[-1].rhs}')
    return checks


def evaluation_injectivity_check(p: Presentation, spec: NormalGeneratorSpec, t: CosetTable,
                                 level: Optional[int] = None,
                                 normally_generates: Optional[bool] = None) -> Check:
    """Z^1(G, Q[G/H]) -> Q[G/H]^k, z -> (z(g_i)), is injective iff rank [J; E] == k N."""
    kn = p.k * t.size
    stacked = vstack([jacobian(p, t), jacobian(p, t, spec.elements)], kn)
    rank = rank_rational(stacked)
    if rank == kn:
        verdict, note = PASS, ''
    elif _gated(t, normally_generates) and is_normal(t):
        verdict, note = FAIL, ''
    else:
        verdict, note = INCONCLUSIVE, 'normal generation or prime-power index not certified'
    return Check('evaluation_injectivity', level, Fraction(rank), Fraction(kn), verdict, note)


def _level_checks(args) -> List[Check]:
    p, spec, level, h1, normally_generates = args
    try:
        checks = pi_image_check(p, spec, level.table, h1, level.depth, normally_generates)
    except NonNormalTable as e:
        return [Check('pi_image', level.depth, Fraction(h1), Fraction(0), INCONCLUSIVE, str(e))]
    checks.append(evaluation_injectivity_check(p, spec, level.table, level.depth, normally_generates))
    return checks


def betti_report(p: Presentation, chain: Chain, spec: Optional[NormalGeneratorSpec] = None,
                 summands: Sequence[Tuple[Fraction, Optional[int]]] = (),
                 relator_orders: Sequence[int] = ()) -> BettiReport:
    """Approximants, every bound that applies, and the per-level inequality checks."""
    report = approx_sequence(p, chain)
    report.bounds['relator_length'] = relator_length_bound(p.k, p)
    if chain.p is not None:
        bound = mod_p_bound(p, chain.p)
        report.bounds['mod_p'] = bound
        if bound < 0:
            report.notes['mod_p'] = f'vacuous (G has no {chain.p}-quotient)'
    if summands:
        report.bounds['free_product_lower'] = free_product_lower_bound(len(summands), summands, relator_orders)
    if spec is not None:
        report.bounds['torsion'] = torsion_bound(spec)
        normally_generates = normal_generation_certificate(p, spec)
        report.notes['normal_generation'] = {True: 'certified', False: 'refuted', None: 'unknown'}[normally_generates]
        jobs = [(p, spec, level, a.h1, normally_generates) for level, a in zip(chain.levels, report.approximants)]
        with thread_pool() as executor:
            for checks in executor.map(_level_checks, jobs):
                report.checks.extend(checks)
    for check in report.violations:
        logger.error(f'Check {check.name} failed at level {check.level}: {check.lhs} > {check.rhs}')
    return report