"""Fox free differential calculus on Z[F_k] and its evaluation through coset actions."""
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .coset_enum import CosetTable, trace
from .exact_linalg import IntegerMatrix, hstack, vstack
from .utils import InvariantViolation, thread_pool
from .words import EMPTY_WORD, Presentation, Word, concat

logger = logging.getLogger(__name__)


class FoxIdentityViolation(InvariantViolation):
    """The evaluated Fox derivatives of a word disagree with the fundamental identity."""


@dataclass(frozen=True)
class FreeRingElement:
    """Finitely supported integer combination of reduced words, kept in shortlex order."""
    terms: Tuple[Tuple[Word, int], ...] = ()

    @classmethod
    def from_counts(cls, counts: Mapping[Word, int]) -> 'FreeRingElement':
        items = [(w, c) for w, c in counts.items() if c]
        items.sort(key=lambda item: item[0].shortlex_key())
        return cls(tuple(items))

    @classmethod
    def of_word(cls, w: Word, coefficient: int = 1) -> 'FreeRingElement':
        return cls.from_counts({w: coefficient})

    @classmethod
    def one(cls) -> 'FreeRingElement':
        return cls.of_word(EMPTY_WORD)

    def as_dict(self) -> Dict[Word, int]:
        return dict(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: 'FreeRingElement') -> 'FreeRingElement':
        counts = Counter(self.as_dict())
        for w, c in other.terms:
            counts[w] += c
        return FreeRingElement.from_counts(counts)

    def __neg__(self) -> 'FreeRingElement':
        return FreeRingElement(tuple((w, -c) for w, c in self.terms))

    def __sub__(self, other: 'FreeRingElement') -> 'FreeRingElement':
        return self + (-other)

    def __mul__(self, other: 'FreeRingElement') -> 'FreeRingElement':
        counts: Counter = Counter()
        for u, a in self.terms:
            for v, b in other.terms:
                counts[concat(u, v)] += a * b
        return FreeRingElement.from_counts(counts)


def fox_derivative(w: Word, i: int) -> FreeRingElement:
    """The i-th Fox derivative: d(g_i) = 1, d(g_i^-1) = -g_i^-1, d(uv) = d(u) + u d(v)."""
    counts: Counter = Counter()
    prefix = EMPTY_WORD
    for letter in w.letters:
        extended = concat(prefix, Word((letter,)))
        if letter.index == i:
            if letter.sign > 0:
                counts[prefix] += 1
            else:
                counts[extended] -= 1
        prefix = extended
    return FreeRingElement.from_counts(counts)


def support_size(e: FreeRingElement) -> int:
    return len(e.terms)


def generator_minus_one(i: int) -> FreeRingElement:
    return FreeRingElement.from_counts({Word.generator(i): 1, EMPTY_WORD: -1})


def fundamental_identity_holds(w: Word, k: int) -> bool:
    """sum_i d_i(w) (g_i - 1) == w - 1 in Z[F_k]."""
    total = FreeRingElement()
    for i in range(k):
        total = total + fox_derivative(w, i) * generator_minus_one(i)
    return total == FreeRingElement.of_word(w) - FreeRingElement.one()


def word_matrix(t: CosetTable, w: Word) -> IntegerMatrix:
    """Action of w on functions on cosets, (w.f)(c) = f(c.w): a 1 at (c, trace(t, w, c))."""
    n = t.size
    entries = [0] * (n * n)
    for c in range(n):
        entries[c * n + trace(t, w, c)] = 1
    return IntegerMatrix(n, n, tuple(entries))


def evaluate(e: FreeRingElement, t: CosetTable) -> IntegerMatrix:
    """Image of e under the coset action; multiplicative in Z[F_k]."""
    n = t.size
    entries = [0] * (n * n)
    for w, coefficient in e.terms:
        for c in range(n):
            entries[c * n + trace(t, w, c)] += coefficient
    return IntegerMatrix(n, n, tuple(entries))


def _jacobian_row(args) -> IntegerMatrix:
    w, k, t = args
    blocks = [evaluate(fox_derivative(w, i), t) for i in range(k)]
    check_evaluated_identity(w, t, blocks)
    return hstack(blocks)


def check_evaluated_identity(w: Word, t: CosetTable, blocks: Sequence[IntegerMatrix]) -> None:
    """Raise FoxIdentityViolation unless sum_i blocks[i] (g_i - 1) == w - 1 in the coset action."""
    n = t.size
    total = [0] * (n * n)
    for i, block in enumerate(blocks):
        images = t.action[i]
        # block @ word_matrix(g_i) moves column c to column c.g_i
        for r in range(n):
            for c in range(n):
                x = block.entries[r * n + c]
                if x:
                    total[r * n + images[c]] += x
                    total[r * n + c] -= x
    expected = list((word_matrix(t, w) - IntegerMatrix.identity(n)).entries)
    if total != expected:
        raise FoxIdentityViolation(f'Fox derivatives of {w} fail the fundamental identity on {n} cosets')


def jacobian(p: Presentation, t: CosetTable, words: Optional[Sequence[Word]] = None) -> IntegerMatrix:
    """Stacked |words|*N x k*N Fox matrix; relator rows by default."""
    words = list(p.relators if words is None else words)
    n = t.size
    if not words:
        return IntegerMatrix.zeros(0, p.k * n)
    with thread_pool() as executor:
        rows = list(executor.map(_jacobian_row, [(w, p.k, t) for w in words]))
    return vstack(rows, p.k * n)


def relator_support_profile(p: Presentation) -> Iterable[Tuple[int, Word, int, int]]:
    """(relator index, relator, generator, support of the Fox derivative); logs strict support deficits."""
    for j, relator in enumerate(p.relators):
        supports = [support_size(fox_derivative(relator, i)) for i in range(p.k)]
        if sum(supports) < len(relator):
            logger.info(f'Fox support {sum(supports)} below length {len(relator)} for relator {j}')
        for i, s in enumerate(supports):
            yield j, relator, i, s
