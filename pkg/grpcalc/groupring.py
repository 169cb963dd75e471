"""Group rings of finite groups: left regular representation, the finite uncertainty
principle, and augmentation-ideal power chains over GF(p) and over Z."""
import itertools
import logging
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint

from .coset_enum import CosetTable
from .exact_linalg import (IntegerMatrix, _rref_array, hermite_normal_form, lattice_coordinates, rank_rational,
                           smith_normal_form)
from .utils import CapExceeded, InputError, InvariantViolation, require_prime, thread_pool

logger = logging.getLogger(__name__)


class ZeroElement(InputError):
    pass


class DepthExceeded(CapExceeded):

    def __init__(self, message: str, dims: Sequence[int]):
        super().__init__(f'{message}; dims so far {list(dims)}')
        self.dims = list(dims)


class PGroupMismatch(InvariantViolation):
    pass


class UncertaintyCounterexample(InvariantViolation):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Multiplication table with the identity at index 0; ``generators`` marks the group."""
    mul: np.ndarray
    generators: Tuple[int, ...] = ()
    provenance: str = 'table'

    @property
    def order(self) -> int:
        return int(self.mul.shape[0])

    def inverse(self, g: int) -> int:
        return int(np.nonzero(self.mul[g] == 0)[0][0])

    def to_dict(self) -> dict:
        return {'order': self.order, 'provenance': self.provenance, 'generators': list(self.generators),
                'mul': self.mul.tolist()}

    @classmethod
    def from_multiplication_table(cls, table: Sequence[Sequence[int]], generators: Sequence[int] = (),
                                  provenance: str = 'table', seed: int = 42, samples: int = 200) -> 'FiniteGroup':
        mul = np.array(table, dtype=np.int64)
        n = mul.shape[0]
        if mul.ndim != 2 or mul.shape != (n, n) or n == 0:
            raise InputError('A multiplication table is a non-empty square array')
        everything = np.arange(n)
        if not (np.array_equal(mul[0], everything) and np.array_equal(mul[:, 0], everything)):
            raise InputError('Element 0 must be the identity')
        for g in range(n):
            if not (np.array_equal(np.sort(mul[g]), everything) and np.array_equal(np.sort(mul[:, g]), everything)):
                raise InputError(f'Row or column {g} is not a permutation: inverses are not unique')
        rng = random.Random(seed)
        for _ in range(samples):
            a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            if mul[mul[a, b], c] != mul[a, mul[b, c]]:
                raise InputError(f'Multiplication is not associative on ({a}, {b}, {c})')
        return cls(mul, tuple(int(g) for g in generators), provenance)

    @classmethod
    def from_dict(cls, data: Mapping) -> 'FiniteGroup':
        return cls.from_multiplication_table(data['mul'], data.get('generators', ()), data.get('provenance', 'table'))

    @classmethod
    def from_coset_table(cls, t: CosetTable, provenance: str = 'coset table') -> 'FiniteGroup':
        """Permutation group generated by the table's generator permutations (orbit closure)."""
        identity = tuple(range(t.size))
        perms = [np.array(perm, dtype=np.int64) for perm in t.action]
        elements: List[Tuple[int, ...]] = [identity]
        index: Dict[Tuple[int, ...], int] = {identity: 0}
        queue = deque([identity])
        while queue:
            current = np.array(queue.popleft(), dtype=np.int64)
            for perm in perms:
                # apply current first, then the generator
                product = tuple(int(x) for x in perm[current])
                if product not in index:
                    index[product] = len(elements)
                    elements.append(product)
                    queue.append(product)
        arrays = np.array(elements, dtype=np.int64)
        n = len(elements)
        mul = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                mul[i, j] = index[tuple(int(x) for x in arrays[j][arrays[i]])]
        generators = tuple(index[tuple(int(x) for x in perm)] for perm in perms)
        return cls(mul, generators, provenance)

    @classmethod
    def cyclic(cls, n: int) -> 'FiniteGroup':
        return cls(np.array([[(i + j) % n for j in range(n)] for i in range(n)], dtype=np.int64),
                   (1 % n,), f'C{n}')


@dataclass(frozen=True)
class RingElement:
    """Exact rational combination of group elements, zero coefficients omitted."""
    coefficients: Tuple[Tuple[int, Fraction], ...] = field(default=())

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, object]) -> 'RingElement':
        items = sorted((int(g), Fraction(c)) for g, c in mapping.items())
        return cls(tuple((g, c) for g, c in items if c))

    @classmethod
    def delta(cls, g: int) -> 'RingElement':
        return cls.from_mapping({g: 1})

    @classmethod
    def orbit_sum(cls, G: FiniteGroup) -> 'RingElement':
        return cls.from_mapping({g: 1 for g in range(G.order)})

    def __bool__(self) -> bool:
        return bool(self.coefficients)

    @property
    def support(self) -> int:
        return len(self.coefficients)

    def to_dict(self) -> dict:
        return {str(g): str(c) for g, c in self.coefficients}


def left_multiplication_matrix(G: FiniteGroup, f: RingElement) -> List[List[Fraction]]:
    """Column h holds the coefficients of f*h."""
    n = G.order
    matrix = [[Fraction(0)] * n for _ in range(n)]
    for g, a in f.coefficients:
        row_of = G.mul[g]
        for h in range(n):
            matrix[int(row_of[h])][h] += a
    return matrix


@dataclass(frozen=True)
class UncertaintyVerdict:
    rank: int
    support: int
    order: int

    @property
    def passed(self) -> bool:
        return self.rank * self.support >= self.order

    @property
    def equality(self) -> bool:
        return self.rank * self.support == self.order

    def to_dict(self) -> dict:
        return {'rank': self.rank, 'support': self.support, 'order': self.order, 'pass': self.passed}


def uncertainty_check(G: FiniteGroup, f: RingElement) -> UncertaintyVerdict:
    """rank(lambda(f)) * |supp f| >= |G| for every nonzero f in Q[G]."""
    if not f:
        raise ZeroElement('The uncertainty principle concerns nonzero elements')
    rank = rank_rational(IntegerMatrix.from_rational_rows(left_multiplication_matrix(G, f)))
    verdict = UncertaintyVerdict(rank, f.support, G.order)
    if not verdict.passed:
        logger.error(f'Uncertainty counterexample: f = {f.to_dict()} in {G.to_dict()}')
    return verdict


def check_elements(G: FiniteGroup, elements: Sequence[RingElement]) -> List[UncertaintyVerdict]:
    """Runs uncertainty_check over many elements; the first failure is raised with f and G attached."""
    with thread_pool() as executor:
        verdicts = list(executor.map(lambda f: uncertainty_check(G, f), elements))
    for f, verdict in zip(elements, verdicts):
        if not verdict.passed:
            raise UncertaintyCounterexample(
                f'rank {verdict.rank} * support {verdict.support} < {verdict.order} for f = {f.to_dict()} '
                f'in group {G.to_dict()}')
    return verdicts


def l1_l2_check(f: RingElement) -> bool:
    """||f||_1^2 <= |supp f| * sum |a_g|^2."""
    l1 = sum(abs(c) for _, c in f.coefficients)
    l2 = sum(c * c for _, c in f.coefficients)
    return l1 * l1 <= f.support * l2


def exhaustive_elements(G: FiniteGroup, max_support: int, coefficients: Sequence[int]) -> Iterator[RingElement]:
    for size in range(1, max_support + 1):
        for support in itertools.combinations(range(G.order), size):
            for values in itertools.product(coefficients, repeat=size):
                yield RingElement.from_mapping(dict(zip(support, values)))


def random_element(G: FiniteGroup, rng: random.Random, max_support: Optional[int] = None,
                   coefficients: Sequence[int] = (-2, -1, 1, 2, 3)) -> RingElement:
    max_support = max_support or G.order
    size = rng.randint(1, min(max_support, G.order))
    support = rng.sample(range(G.order), size)
    return RingElement.from_mapping({g: rng.choice(coefficients) for g in support})


@dataclass(frozen=True)
class AugmentationChain:
    p: Optional[int]
    dims: Tuple[int, ...]
    outcome: str
    level: int

    @property
    def nilpotent(self) -> bool:
        return self.outcome == 'zero'

    def to_dict(self) -> dict:
        return {'p': self.p if self.p is not None else 'integer', 'dims': list(self.dims),
                'outcome': self.outcome, 'level': self.level}


def _augmentation_generators(G: FiniteGroup) -> np.ndarray:
    n = G.order
    rows = np.zeros((max(n - 1, 0), n), dtype=np.int64)
    for g in range(1, n):
        rows[g - 1, g] = 1
        rows[g - 1, 0] = -1
    return rows


def _times_generators(G: FiniteGroup, basis: np.ndarray) -> np.ndarray:
    """Rows (g - 1) * b for every g != e and every basis row b."""
    n = G.order
    products = []
    for g in range(1, n):
        shifted = np.zeros_like(basis)
        # (g * b)[g h] = b[h]
        shifted[:, G.mul[g]] = basis
        products.append(shifted - basis)
    if not products:
        return np.zeros((0, n), dtype=basis.dtype)
    return np.vstack(products)


def augmentation_powers_mod_p(G: FiniteGroup, p: int, max_depth: Optional[int] = None) -> AugmentationChain:
    """dims of omega^n over GF(p) until they vanish or repeat."""
    require_prime(p)
    if max_depth is None:
        max_depth = G.order + 1
    basis, _ = _rref_array(_augmentation_generators(G), p)
    dims = [basis.shape[0]]
    if dims[0] == 0:
        return AugmentationChain(p, tuple(dims), 'zero', 1)
    for level in range(2, max_depth + 1):
        basis, _ = _rref_array(_times_generators(G, basis), p)
        dim = basis.shape[0]
        if dim > dims[-1]:
            raise InvariantViolation(f'omega^{level} larger than omega^{level - 1}: {dims + [dim]}')
        if dim == dims[-1]:
            return AugmentationChain(p, tuple(dims), 'stabilized', level - 1)
        dims.append(dim)
        if dim == 0:
            return AugmentationChain(p, tuple(dims), 'zero', level)
    raise DepthExceeded(f'Augmentation powers neither vanished nor stabilized within depth {max_depth}', dims)


def p_group_verdict(G: FiniteGroup, p: int) -> bool:
    """omega is nilpotent over GF(p) iff G is a p-group; cross-checked against |G|."""
    chain = augmentation_powers_mod_p(G, p)
    by_order = set(factorint(G.order)) <= {p}
    if chain.nilpotent != by_order:
        raise PGroupMismatch(f'Augmentation ideal of a group of order {G.order} over GF({p}) gave '
                             f'{chain.outcome} but the order factorization says p-group={by_order}')
    return chain.nilpotent


@dataclass(frozen=True)
class IntegerAugmentationLevel:
    level: int
    rank: int
    divisors: Tuple[int, ...]
    basis: IntegerMatrix

    def to_dict(self) -> dict:
        return {'level': self.level, 'rank': self.rank, 'divisors': list(self.divisors)}


@dataclass(frozen=True)
class IntegerAugmentationChain:
    levels: Tuple[IntegerAugmentationLevel, ...]

    @property
    def suggestive(self) -> bool:
        """Rank stabilized with every successive index at least 2; evidence, not proof, of a trivial intersection."""
        if len(self.levels) < 2:
            return False
        last = self.levels[-1]
        if last.rank == 0:
            return True
        return all(level.rank == last.rank and any(d >= 2 for d in level.divisors) for level in self.levels[1:])

    def to_dict(self) -> dict:
        return {'levels': [level.to_dict() for level in self.levels], 'suggestive': self.suggestive,
                'note': 'exploratory; no verdict on the intersection of the powers'}


def augmentation_powers_integer(G: FiniteGroup, max_depth: int = 4) -> IntegerAugmentationChain:
    """Lattice bases of omega^n in Z[G] and the invariant factors of omega^n inside omega^(n-1)."""
    n = G.order
    generators = IntegerMatrix.from_rows(_augmentation_generators(G).tolist(), n)
    basis = hermite_normal_form(generators)
    levels = [IntegerAugmentationLevel(1, basis.rows, (), basis)]
    for level in range(2, max_depth + 1):
        if basis.rows == 0:
            levels.append(IntegerAugmentationLevel(level, 0, (), basis))
            continue
        products = _times_generators(G, np.array(basis.to_rows(), dtype=object))
        next_basis = hermite_normal_form(IntegerMatrix.from_rows(products.tolist(), n))
        coordinates = lattice_coordinates(basis, next_basis)
        divisors = smith_normal_form(coordinates).diagonal
        levels.append(IntegerAugmentationLevel(level, next_basis.rows, divisors, next_basis))
        basis = next_basis
    return IntegerAugmentationChain(tuple(levels))
