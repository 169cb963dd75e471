"""Todd-Coxeter coset enumeration (HLT with lookahead) and Reidemeister-Schreier rewriting.

Cosets are acted on from the right: ``trace(t, w, c)`` is ``c . w`` with the
letters of w applied left to right. Coset 0 is the subgroup itself.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .exact_linalg import IntegerMatrix
from .utils import CapExceeded, InvariantViolation, InputError
from .words import EMPTY_WORD, Letter, Presentation, Word, concat, cyclic_reduce, invert, reduce

logger = logging.getLogger(__name__)

DEFAULT_MAX_COSETS = 10 ** 6
# total definitions allowed across lookahead passes, as a multiple of the coset cap
DEFINITIONS_PER_COSET = 64


class CosetLimitExceeded(CapExceeded):

    def __init__(self, max_cosets: int):
        super().__init__(f'Coset enumeration exceeded {max_cosets} cosets; the index may be infinite '
                         f'(increase the cap or treat the subgroup as of infinite index)')
        self.max_cosets = max_cosets


class MalformedTable(InvariantViolation):
    pass


def _column(letter: Letter) -> int:
    return 2 * letter.index + (0 if letter.sign > 0 else 1)


@dataclass(frozen=True)
class CosetTable:
    """Complete permutation action of the generators on {0, ..., N-1}."""
    action: Tuple[Tuple[int, ...], ...]
    subgroup_words: Tuple[Word, ...] = ()

    def __post_init__(self):
        n = self.size
        for g, perm in enumerate(self.action):
            if len(perm) != n or sorted(perm) != list(range(n)):
                raise MalformedTable(f'Action of generator {g} is not a permutation of {n} points')
        if n < 1:
            raise MalformedTable('A coset table has at least one coset')

    @property
    def size(self) -> int:
        return len(self.action[0]) if self.action else 1

    @property
    def k(self) -> int:
        return len(self.action)

    @cached_property
    def inverse_action(self) -> Tuple[Tuple[int, ...], ...]:
        inverses = []
        for perm in self.action:
            inverse = [0] * len(perm)
            for c, image in enumerate(perm):
                inverse[image] = c
            inverses.append(tuple(inverse))
        return tuple(inverses)

    def image(self, c: int, letter: Letter) -> int:
        table = self.action if letter.sign > 0 else self.inverse_action
        return table[letter.index][c]

    def is_transitive(self) -> bool:
        return len(orbits(self)) == 1

    def to_dict(self) -> dict:
        return {'index': self.size, 'permutations': [list(perm) for perm in self.action]}

    @classmethod
    def from_permutations(cls, permutations: Sequence[Sequence[int]],
                          subgroup_words: Sequence[Word] = ()) -> 'CosetTable':
        """Validate and standardize a transitive action given as image lists."""
        table = cls(tuple(tuple(int(x) for x in perm) for perm in permutations), tuple(subgroup_words))
        if not table.is_transitive():
            raise MalformedTable('Coset tables describe transitive actions')
        return standardize(table)

    @classmethod
    def from_dict(cls, data: dict, subgroup_words: Sequence[Word] = ()) -> 'CosetTable':
        return cls.from_permutations(data['permutations'], subgroup_words)


def trace(t: CosetTable, w: Word, start: int) -> int:
    if not 0 <= start < t.size:
        raise InputError(f'Coset {start} out of range for a table of index {t.size}')
    c = start
    for letter in w.letters:
        c = t.image(c, letter)
    return c


def permutation_matrix(t: CosetTable, g: int, sign: int = 1) -> IntegerMatrix:
    """Column c holds a single 1 in row trace(t, g^sign, c)."""
    n = t.size
    entries = [0] * (n * n)
    for c in range(n):
        entries[t.image(c, Letter(g, sign)) * n + c] = 1
    return IntegerMatrix(n, n, tuple(entries))


def orbits(t: CosetTable) -> List[List[int]]:
    parent = list(range(t.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for perm in t.action:
        for c, image in enumerate(perm):
            a, b = find(c), find(image)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: Dict[int, List[int]] = {}
    for c in range(t.size):
        groups.setdefault(find(c), []).append(c)
    return list(groups.values())


def _bfs_columns(k: int) -> List[Letter]:
    return [Letter(g, s) for g in range(k) for s in (1, -1)]


def standardize(t: CosetTable) -> CosetTable:
    """Renumber cosets in breadth-first discovery order from coset 0."""
    order = [0]
    number = {0: 0}
    i = 0
    columns = _bfs_columns(t.k)
    while i < len(order):
        c = order[i]
        for letter in columns:
            d = t.image(c, letter)
            if d not in number:
                number[d] = len(order)
                order.append(d)
        i += 1
    if len(order) != t.size:
        raise MalformedTable('Coset tables describe transitive actions')
    action = tuple(tuple(number[perm[c]] for c in order) for perm in t.action)
    return CosetTable(action, t.subgroup_words)


def check_relators(p: Presentation, t: CosetTable) -> bool:
    """Every relator acts as the identity permutation."""
    return all(trace(t, relator, c) == c for relator in p.relators for c in range(t.size))


def is_normal(t: CosetTable) -> bool:
    """Whether the stabilizer of coset 0 is normal.

    With subgroup generators at hand, their conjugates by the generators must fix coset 0. Otherwise
    the action is tested directly: the stabilizer is normal iff 0 -> c extends to an automorphism of
    the action for every coset c.
    """
    if t.subgroup_words:
        for h in t.subgroup_words:
            if trace(t, h, 0) != 0:
                return False
            for g in range(t.k):
                for sign in (1, -1):
                    x = Word.generator(g, sign)
                    if trace(t, concat(concat(invert(x), h), x), 0) != 0:
                        return False
        return True
    return all(_extends_to_automorphism(t, c) for c in range(1, t.size))


def _extends_to_automorphism(t: CosetTable, c: int) -> bool:
    image: List[Optional[int]] = [None] * t.size
    image[0] = c
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for perm in t.action:
            y, z = perm[x], perm[image[x]]
            if image[y] is None:
                image[y] = z
                queue.append(y)
            elif image[y] != z:
                return False
    return True


class _Enumeration:
    """Mutable HLT state; rows indexed by coset, columns by 2*generator + (0 | 1)."""

    def __init__(self, k: int, max_cosets: int):
        self.k = k
        self.max_cosets = max_cosets
        self.table: List[List[Optional[int]]] = [[None] * (2 * k)]
        self.parent: List[int] = [0]
        self.queue: List[int] = []
        self.position = 0
        self.defined = 0

    @property
    def exhausted(self) -> bool:
        return self.defined >= DEFINITIONS_PER_COSET * self.max_cosets

    def alive(self, c: int) -> bool:
        return self.parent[c] == c

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def define(self, c: int, column: int) -> None:
        if len(self.table) >= self.max_cosets or self.exhausted:
            raise CosetLimitExceeded(self.max_cosets)
        self.defined += 1
        d = len(self.table)
        self.table.append([None] * (2 * self.k))
        self.parent.append(d)
        self.table[c][column] = d
        self.table[d][column ^ 1] = c

    def merge(self, a: int, b: int) -> None:
        a, b = self.rep(a), self.rep(b)
        if a != b:
            low, high = min(a, b), max(a, b)
            self.parent[high] = low
            self.queue.append(high)

    def coincidence(self, a: int, b: int) -> None:
        self.queue = []
        self.merge(a, b)
        i = 0
        while i < len(self.queue):
            gamma = self.queue[i]
            i += 1
            for column in range(2 * self.k):
                delta = self.table[gamma][column]
                if delta is None:
                    continue
                if self.table[delta][column ^ 1] == gamma:
                    self.table[delta][column ^ 1] = None
                mu, nu = self.rep(gamma), self.rep(delta)
                if self.table[mu][column] is not None:
                    self.merge(nu, self.table[mu][column])
                elif self.table[nu][column ^ 1] is not None:
                    self.merge(mu, self.table[nu][column ^ 1])
                else:
                    self.table[mu][column] = nu
                    self.table[nu][column ^ 1] = mu

    def scan(self, alpha: int, columns: Sequence[int], fill: bool) -> None:
        """Scan a relator at alpha; with fill, define cosets until the cycle closes."""
        table = self.table
        r = len(columns)
        f, i = alpha, 0
        b, j = alpha, r - 1
        while True:
            while i <= j and table[f][columns[i]] is not None:
                f = table[f][columns[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][columns[j] ^ 1] is not None:
                b = table[b][columns[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][columns[i]] = b
                table[b][columns[i] ^ 1] = f
                return
            if not fill:
                return
            self.define(f, columns[i])

    def lookahead(self, relators: Sequence[Sequence[int]]) -> None:
        for c in range(len(self.table)):
            for columns in relators:
                if not self.alive(c):
                    break
                self.scan(c, columns, fill=False)

    def compact(self) -> None:
        """Drop dead cosets, renumbering live ones in order so freed rows can be defined again."""
        live = [c for c in range(len(self.table)) if self.alive(c)]
        number = {c: i for i, c in enumerate(live)}
        self.table = [[None if x is None else number[self.rep(x)] for x in self.table[c]] for c in live]
        self.position = sum(1 for c in live if c < self.position)
        self.parent = list(range(len(live)))
        self.queue = []

    def hlt(self, relators: Sequence[Sequence[int]]) -> None:
        """Scan every relator at each live coset in order, then fill its remaining columns."""
        while True:
            while self.position < len(self.table):
                c = self.position
                if self.alive(c):
                    for columns in relators:
                        self.scan(c, columns, fill=True)
                        if not self.alive(c):
                            break
                    if self.alive(c):
                        for column in range(2 * self.k):
                            if self.table[c][column] is None:
                                self.define(c, column)
                self.position += 1
            if self.complete():
                return
            self.position = 0

    def complete(self) -> bool:
        return all(entry is not None for c, row in enumerate(self.table) if self.alive(c) for entry in row)


def enumerate_cosets(p: Presentation, subgroup: Sequence[Word] = (),
                     max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """Enumerate the cosets of the subgroup generated by ``subgroup`` in the group presented by p.

    When the table fills up, a lookahead pass looks for coincidences without defining; if any coset
    was freed, definition resumes where it stopped.
    """
    if max_cosets < 1:
        raise InputError('max_cosets must be at least 1')
    relators = [[_column(letter) for letter in r.letters] for r in p.relators if r]
    subgroup_columns = [[_column(letter) for letter in w.letters] for w in subgroup if w]
    state = _Enumeration(p.k, max_cosets)
    passes = 0
    while True:
        try:
            for columns in subgroup_columns:
                state.scan(0, columns, fill=True)
            state.hlt(relators)
            break
        except CosetLimitExceeded:
            passes += 1
            state.lookahead(relators)
            state.compact()
            logger.info(f'Coset table full, lookahead pass {passes} leaves {len(state.table)} live cosets')
            if len(state.table) >= max_cosets or state.exhausted:
                raise
    table = _collapse(state, p.k, subgroup)
    if not check_relators(p, table):
        raise MalformedTable('Completed table does not satisfy every relator')
    if any(trace(table, w, 0) != 0 for w in subgroup):
        raise MalformedTable('Completed table does not fix coset 0 under the subgroup generators')
    return table


def _collapse(state: _Enumeration, k: int, subgroup: Sequence[Word]) -> CosetTable:
    live = [c for c in range(len(state.table)) if state.alive(c)]
    logger.debug(f'Enumeration finished: {len(state.table)} cosets defined, {len(live)} live')
    number = {c: i for i, c in enumerate(live)}
    action = tuple(tuple(number[state.rep(state.table[c][2 * g])] for c in live) for g in range(k))
    # the trivial subgroup is recorded as generated by the empty word
    return standardize(CosetTable(action, tuple(subgroup) or (EMPTY_WORD,)))


@dataclass(frozen=True)
class SubgroupPresentation:
    presentation: Presentation
    inclusion: Tuple[Word, ...]
    schreier_transversal: Tuple[Word, ...]
    schreier_generators: Tuple[Tuple[int, int], ...] = field(default=())
    eliminated: int = 0

    @property
    def index(self) -> int:
        return len(self.schreier_transversal)

    def report(self) -> dict:
        return {'index': self.index, 'schreier_generators': self.presentation.k + self.eliminated,
                'generators': self.presentation.k, 'eliminated_tree_edges': self.eliminated,
                'relators': len(self.presentation.relators)}


def schreier_transversal(t: CosetTable) -> Tuple[List[Word], Dict[Tuple[int, int], bool]]:
    """Transversal along the breadth-first spanning tree, and the set of tree edges (coset, generator)."""
    transversal: List[Optional[Word]] = [None] * t.size
    transversal[0] = EMPTY_WORD
    tree: Dict[Tuple[int, int], bool] = {}
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for letter in _bfs_columns(t.k):
            d = t.image(c, letter)
            if transversal[d] is None:
                transversal[d] = concat(transversal[c], Word((letter,)))
                tree[(c, letter.index) if letter.sign > 0 else (d, letter.index)] = True
                queue.append(d)
    return transversal, tree


def rewrite_subgroup(p: Presentation, t: CosetTable) -> SubgroupPresentation:
    """Reidemeister-Schreier presentation of the coset-0 stabilizer on Schreier generators."""
    if not check_relators(p, t):
        raise InputError('The coset table is not complete for this presentation')
    transversal, tree = schreier_transversal(t)
    generator_of: Dict[Tuple[int, int], int] = {}
    inclusion: List[Word] = []
    names: List[str] = []
    pairs: List[Tuple[int, int]] = []
    for c in range(t.size):
        for g in range(p.k):
            if (c, g) in tree:
                continue
            generator_of[(c, g)] = len(inclusion)
            d = t.action[g][c]
            inclusion.append(concat(concat(transversal[c], Word.generator(g)), invert(transversal[d])))
            names.append(f'x{c}_{p.generator_names[g]}')
            pairs.append((c, g))

    relators: List[Word] = []
    seen = set()
    for relator in p.relators:
        for c in range(t.size):
            letters = []
            d = c
            for letter in relator.letters:
                if letter.sign > 0:
                    key, d_next = (d, letter.index), t.action[letter.index][d]
                else:
                    d_next = t.inverse_action[letter.index][d]
                    key = (d_next, letter.index)
                if key in generator_of:
                    letters.append(Letter(generator_of[key], letter.sign))
                d = d_next
            core = cyclic_reduce(reduce(letters))[0]
            if core and core not in seen:
                seen.add(core)
                relators.append(core)
    eliminated = t.size * p.k - len(inclusion)
    return SubgroupPresentation(Presentation(tuple(names), tuple(relators)), tuple(inclusion),
                                tuple(transversal), tuple(pairs), eliminated)
