"""Run configuration and the parsers for option strings given on the command line."""
from dataclasses import dataclass
from os import listdir, path
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .utils import InputError, parse_rational, require_prime
from .words import NormalGeneratorSpec, Presentation, parse_presentation, parse_words, pure_power_orders

FORMATS = ('json', 'csv', 'text')
DEFAULT_SEED = 42
INFINITY = ('inf', 'infinity', 'oo')


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str = '-'
    p: Optional[int] = None
    depth: int = 3
    max_index: int = 10 ** 5
    max_cosets: int = 10 ** 6
    radius: int = 6
    seed: int = DEFAULT_SEED
    output_format: str = 'json'
    decimal: bool = False

    def __post_init__(self):
        for name in ('depth', 'max_index', 'max_cosets', 'radius'):
            if getattr(self, name) < 1:
                raise InputError(f'--{name.replace("_", "-")} must be positive')
        if self.p is not None:
            require_prime(self.p)
        if self.output_format not in FORMATS:
            raise InputError(f'Permitted values for format are {", ".join(FORMATS)}')


def parse_order(text: str) -> Optional[int]:
    text = text.strip().lower()
    if text in INFINITY:
        return None
    try:
        order = int(text)
    except ValueError:
        raise InputError(f'Not an order: {text!r} (use a positive integer or "inf")')
    if order < 1:
        raise InputError(f'Orders must be positive, got {order}')
    return order


def parse_orders(text: str) -> List[Optional[int]]:
    """"2,3,inf" -> [2, 3, None]."""
    return [parse_order(item) for item in text.split(',') if item.strip()]


def parse_summands(text: str) -> List[Tuple[Fraction, Optional[int]]]:
    """"0:2,0:3" -> [(beta_1, order), ...] for the factors of a free product."""
    summands = []
    for item in text.split(','):
        if not item.strip():
            continue
        beta, sep, order = item.partition(':')
        if not sep:
            raise InputError(f'Summands are written beta:order, got {item!r}')
        summands.append((parse_rational(beta), parse_order(order)))
    return summands


def parse_integers(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise InputError(f'Not a list of integers: {text!r}')


def parse_normal_generators(text: Optional[str], p: Presentation) -> NormalGeneratorSpec:
    """"a:2,b*a:inf" -> elements with declared orders (use ";" between items when words contain commas).

    Without text, the generators with the orders read off pure power relators.
    """
    if not text:
        return NormalGeneratorSpec(tuple(parse_words(','.join(p.generator_names), p.generator_names)),
                                   tuple(pure_power_orders(p)))
    elements, orders = [], []
    separator = ';' if ';' in text else ','
    for item in text.split(separator):
        if not item.strip():
            continue
        word, _, order = item.rpartition(':')
        if not word:
            word, order = order, 'inf'
        elements.extend(parse_words(word, p.generator_names))
        orders.append(parse_order(order))
    return NormalGeneratorSpec(tuple(elements), tuple(orders))


def parse_subgroups(texts: Sequence[str], p: Presentation) -> List[list]:
    """One comma separated generator list per chain level."""
    return [parse_words(text, p.generator_names) for text in texts]


def corpus_dir() -> str:
    return path.join(path.dirname(__file__), 'corpus')


def corpus_names() -> List[str]:
    return sorted(name[:-len('.grp')] for name in listdir(corpus_dir()) if name.endswith('.grp'))


def resolve_input(name: str) -> str:
    """An existing file path, or the name of a shipped corpus presentation (with or without .grp)."""
    if path.isfile(name):
        return name
    base = path.basename(name)
    candidate = path.join(corpus_dir(), base if base.endswith('.grp') else f'{base}.grp')
    if path.isfile(candidate):
        return candidate
    raise InputError(f'No such presentation file: {name}')


def load_presentation(name: str) -> Presentation:
    with open(resolve_input(name), encoding='utf-8') as f:
        return parse_presentation(f.read())
