"""Free-group words, finite presentations and the ``.grp`` text grammar.

Grammar::

    file ::= "gens:" name ("," name)* ";" "rels:" [ word ("," word)* ] ";"
    word ::= term ("*" term)*
    term ::= name ["^" integer] | "(" word ")" ["^" integer] | "[" word "," word "]"

``[u,v]`` is ``u^-1 v^-1 u v``; ``#`` starts a comment running to the end of the line.
"""
import logging
import re
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .utils import InputError

logger = logging.getLogger(__name__)

NAME_PATTERN = re.compile(r'[A-Za-z][A-Za-z0-9_]*\Z')


class Letter(NamedTuple):
    index: int
    sign: int

    def inverse(self) -> 'Letter':
        return Letter(self.index, -self.sign)

    def sort_key(self) -> Tuple[int, int]:
        return self.index, 0 if self.sign > 0 else 1


def _reduce_letters(letters: Iterable[Letter]) -> Tuple[Letter, ...]:
    stack: List[Letter] = []
    for letter in letters:
        if stack and stack[-1].index == letter.index and stack[-1].sign == -letter.sign:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


@dataclass(frozen=True, order=False)
class Word:
    """A freely reduced word; construct through :func:`reduce` unless already reduced."""
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        for a, b in zip(self.letters, self.letters[1:]):
            if a.index == b.index and a.sign == -b.sign:
                raise ValueError(f'Word is not freely reduced: {self.letters}')

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: 'Word') -> 'Word':
        return concat(self, other)

    def __invert__(self) -> 'Word':
        return invert(self)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def shortlex_key(self):
        return len(self.letters), tuple(letter.sort_key() for letter in self.letters)

    @classmethod
    def generator(cls, index: int, sign: int = 1) -> 'Word':
        return cls((Letter(index, sign),))

    @classmethod
    def power(cls, index: int, exponent: int) -> 'Word':
        sign = 1 if exponent >= 0 else -1
        return cls(tuple(Letter(index, sign) for _ in range(abs(exponent))))

    def max_index(self) -> int:
        return max((letter.index for letter in self.letters), default=-1)

    def exponent_sums(self, k: int) -> List[int]:
        sums = [0] * k
        for letter in self.letters:
            sums[letter.index] += letter.sign
        return sums


EMPTY_WORD = Word()


def reduce(letters: Iterable[Letter]) -> Word:
    return Word(_reduce_letters(Letter(int(i), int(s)) for i, s in letters))


def concat(u: Word, v: Word) -> Word:
    return Word(_reduce_letters(u.letters + v.letters))


def invert(w: Word) -> Word:
    return Word(tuple(letter.inverse() for letter in reversed(w.letters)))


def word_power(w: Word, n: int) -> Word:
    base = w if n >= 0 else invert(w)
    return Word(_reduce_letters(base.letters * abs(n)))


def cyclic_reduce(w: Word) -> Tuple[Word, Word]:
    """Split w as conjugator * core * conjugator^-1 with a cyclically reduced core."""
    letters = w.letters
    start, end = 0, len(letters)
    while end - start >= 2 and letters[start].index == letters[end - 1].index \
            and letters[start].sign == -letters[end - 1].sign:
        start += 1
        end -= 1
    return Word(letters[start:end]), Word(letters[:start])


def word_length(w: Word) -> int:
    return len(w.letters)


def cyclic_length(w: Word) -> int:
    return len(cyclic_reduce(w)[0])


def commutator(u: Word, v: Word) -> Word:
    return concat(concat(invert(u), invert(v)), concat(u, v))


@dataclass(frozen=True)
class Presentation:
    generator_names: Tuple[str, ...]
    relators: Tuple[Word, ...] = ()

    def __post_init__(self):
        if len(self.generator_names) == 0:
            raise EmptyGeneratorList('A presentation needs at least one generator')
        if len(set(self.generator_names)) != len(self.generator_names):
            raise InputError(f'Duplicate generator names in {list(self.generator_names)}')
        for name in self.generator_names:
            if not NAME_PATTERN.match(name):
                raise InputError(f'Invalid generator name: {name!r}')
        for relator in self.relators:
            if relator.max_index() >= self.k:
                raise UndeclaredGenerator(f'Relator uses generator index {relator.max_index()} '
                                          f'but only {self.k} generators are declared')
            if cyclic_reduce(relator)[1]:
                raise ValueError('Relators must be stored cyclically reduced')

    @property
    def k(self) -> int:
        return len(self.generator_names)

    def with_relators(self, extra: Sequence[Word]) -> 'Presentation':
        cores = [core for core in (cyclic_reduce(w)[0] for w in extra) if core]
        return Presentation(self.generator_names, self.relators + tuple(cores))

    def exponent_matrix(self) -> List[List[int]]:
        """The k x |relators| exponent-sum matrix (one column per relator)."""
        columns = [relator.exponent_sums(self.k) for relator in self.relators]
        return [[column[i] for column in columns] for i in range(self.k)]


@dataclass(frozen=True)
class NormalGeneratorSpec:
    """Elements g_1..g_k with declared orders; ``None`` stands for infinite order."""
    elements: Tuple[Word, ...]
    declared_orders: Tuple[Optional[int], ...] = field(default=())

    def __post_init__(self):
        if len(self.elements) != len(self.declared_orders):
            raise InputError(f'{len(self.elements)} elements but {len(self.declared_orders)} declared orders')
        for order in self.declared_orders:
            if order is not None and (not isinstance(order, int) or order < 1):
                raise InputError(f'Declared orders must be positive integers or infinity, got {order!r}')

    @property
    def k(self) -> int:
        return len(self.elements)


class PresentationSyntaxError(InputError):

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f'{message} at line {line}, column {column}')
        self.line = line
        self.column = column

    def to_dict(self) -> dict:
        return dict(super().to_dict(), line=self.line, column=self.column)


class UndeclaredGenerator(InputError):

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        if line is not None:
            message = f'{message} at line {line}, column {column}'
        super().__init__(message)
        self.line = line
        self.column = column

    def to_dict(self) -> dict:
        return dict(super().to_dict(), line=self.line, column=self.column)


class EmptyGeneratorList(InputError):
    pass


class _Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


_TOKEN_SPEC = [
    ('comment', r'#[^\n]*'),
    ('newline', r'\n'),
    ('space', r'[ \t\r\f\v]+'),
    ('name', r'[A-Za-z][A-Za-z0-9_]*'),
    ('integer', r'-?[0-9]+'),
    ('punct', r'[:;,*^()\[\]]'),
]
_TOKEN_RE = re.compile('|'.join(f'(?P<{kind}>{pattern})' for kind, pattern in _TOKEN_SPEC))


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise PresentationSyntaxError(f'Unexpected character {text[pos]!r}', line, pos - line_start + 1)
        kind = match.lastgroup
        if kind == 'newline':
            line += 1
            line_start = match.end()
        elif kind not in ('space', 'comment'):
            tokens.append(_Token(kind, match.group(), line, pos - line_start + 1))
        pos = match.end()
    tokens.append(_Token('eof', '', line, pos - line_start + 1))
    return tokens


class _Parser:

    def __init__(self, text: str, names: Sequence[str] = ()):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.names = list(names)

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def fail(self, message: str):
        token = self.current
        found = token.text or 'end of input'
        raise PresentationSyntaxError(f'{message}, found {found!r}', token.line, token.column)

    def accept(self, text: str) -> bool:
        if self.current.text == text and self.current.kind in ('punct', 'name'):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> _Token:
        token = self.current
        if not self.accept(text):
            self.fail(f'Expected {text!r}')
        return token

    def expect_kind(self, kind: str) -> _Token:
        token = self.current
        if token.kind != kind:
            self.fail(f'Expected {kind}')
        self.pos += 1
        return token

    def presentation(self) -> Presentation:
        self.expect('gens')
        self.expect(':')
        if self.current.text == ';':
            raise EmptyGeneratorList(f'Empty generator list at line {self.current.line}, '
                                     f'column {self.current.column}')
        self.names = [self.expect_kind('name').text]
        while self.accept(','):
            token = self.expect_kind('name')
            if token.text in self.names:
                raise PresentationSyntaxError(f'Duplicate generator {token.text!r}', token.line, token.column)
            self.names.append(token.text)
        self.expect(';')
        self.expect('rels')
        self.expect(':')
        relators: List[Word] = []
        if self.current.text != ';':
            relators.append(self.relator())
            while self.accept(','):
                relators.append(self.relator())
        self.expect(';')
        self.expect_kind('eof')
        return Presentation(tuple(self.names), tuple(r for r in relators if r))

    def relator(self) -> Word:
        token = self.current
        word = self.word()
        core, conjugator = cyclic_reduce(word)
        if conjugator:
            logger.warning(f'Relator at line {token.line}, column {token.column} is not cyclically reduced; '
                           f'discarding conjugator of length {len(conjugator)}')
        if not core:
            logger.warning(f'Relator at line {token.line}, column {token.column} is trivial and was dropped')
        return core

    def word_list(self) -> List[Word]:
        words = [self.word()]
        while self.accept(','):
            words.append(self.word())
        self.expect_kind('eof')
        return words

    def word(self) -> Word:
        result = self.term()
        while self.accept('*'):
            result = concat(result, self.term())
        return result

    def exponent(self, base: Word, token: _Token) -> Word:
        if not self.accept('^'):
            return base
        n = int(self.expect_kind('integer').text)
        if n == 0:
            logger.warning(f'Exponent 0 at line {token.line}, column {token.column} yields the empty word')
        return word_power(base, n)

    def term(self) -> Word:
        token = self.current
        if token.kind == 'name':
            self.pos += 1
            if token.text not in self.names:
                raise UndeclaredGenerator(f'Undeclared generator {token.text!r}', token.line, token.column)
            return self.exponent(Word.generator(self.names.index(token.text)), token)
        if self.accept('('):
            inner = self.word()
            self.expect(')')
            return self.exponent(inner, token)
        if self.accept('['):
            u = self.word()
            self.expect(',')
            v = self.word()
            self.expect(']')
            return commutator(u, v)
        self.fail('Expected a generator, "(" or "["')


def parse_presentation(text: str) -> Presentation:
    return _Parser(text).presentation()


def parse_words(text: str, generator_names: Sequence[str]) -> List[Word]:
    """Comma separated words over already declared generator names."""
    if not text.strip():
        return []
    return _Parser(text, generator_names).word_list()


def render_word(w: Word, names: Sequence[str]) -> str:
    if not w:
        return '1'
    parts = []
    letters = w.letters
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        exponent = (j - i) * letters[i].sign
        name = names[letters[i].index]
        parts.append(name if exponent == 1 else f'{name}^{exponent}')
        i = j
    return '*'.join(parts)


def render(p: Presentation) -> str:
    relators = ', '.join(render_word(r, p.generator_names) for r in p.relators)
    return f"gens: {', '.join(p.generator_names)};\nrels: {relators};\n"


def pure_power_orders(p: Presentation) -> List[Optional[int]]:
    """Per generator, gcd of n over relators g^n; a multiple of the true order of g, or None."""
    orders: List[Optional[int]] = [None] * p.k
    for relator in p.relators:
        indexes = {letter.index for letter in relator.letters}
        if len(indexes) == 1:
            i = indexes.pop()
            n = len(relator)
            orders[i] = n if orders[i] is None else gcd(orders[i], n)
    return orders
