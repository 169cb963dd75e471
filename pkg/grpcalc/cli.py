import csv
import json
import random
import sys
from datetime import datetime, timezone
from time import perf_counter
from typing import Iterable, List, Optional, Sequence

import click

from . import betti_bounds, girth as girth_module, groupring
from .chains import DEFAULT_MAX_INDEX, Chain, chain_from_subgroups, derived_p_chain
from .cohomology import h1_dim, h1_routes
from .config import (DEFAULT_SEED, FORMATS, RunConfig, load_presentation, parse_integers, parse_normal_generators,
                     parse_orders, parse_subgroups, parse_summands)
from .coset_enum import DEFAULT_MAX_COSETS, enumerate_cosets, is_normal, rewrite_subgroup
from .logging import configure, get_context, getLoggers, set_context
from .utils import GrpcalcError, InputError, format_decimal, format_rational
from .words import NormalGeneratorSpec, Presentation, Word, parse_words, render, render_word

mainLogger, accountLogger = getLoggers()

FINITE_CORPUS = ('c2', 'c3', 'z4', 'c2xc2', 's3', 'd4', 'q8', 'c6', 'a4')
UNCERTAINTY_CORPUS = ('s3', 'd4', 'q8', 'c8', 'a4')
# (presentation, prime, depth) pairs run by the corpus command
CHAIN_CORPUS = (('z', 2, 3), ('z', 3, 2), ('f2', 2, 2), ('f3', 2, 1), ('d_infinity', 2, 3), ('z2', 2, 2),
                ('genus2', 2, 1), ('z4', 2, 2), ('abab', 2, 2), ('psl2z', 2, 2), ('psl2z', 3, 2))


def output_options(f):
    f = click.option('--format', 'output_format', type=click.Choice(FORMATS), default='json',
                     help='Report format.')(f)
    f = click.option('--json', 'as_json', is_flag=True, help='Shortcut for --format json.')(f)
    f = click.option('--output', '-o', default='-', help='Write the report to FILE instead of stdout.')(f)
    return f


def _flatten(prefix: str, value) -> Iterable[tuple]:
    if isinstance(value, dict):
        for key in sorted(value):
            yield from _flatten(f'{prefix}.{key}' if prefix else str(key), value[key])
    elif isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        for i, item in enumerate(value):
            yield from _flatten(f'{prefix}[{i}]', item)
    elif isinstance(value, list):
        yield prefix, ' '.join(str(v) for v in value)
    else:
        yield prefix, '' if value is None else value


def emit(report: dict, output_format: str, output: str) -> None:
    """Serialize a report canonically: sorted keys, exact rationals as strings."""
    with click.open_file(output, 'w') as f:
        if output_format == 'json':
            f.write(json.dumps(report, sort_keys=True, indent=2) + '\n')
        elif output_format == 'csv':
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(['key', 'value'])
            writer.writerows(_flatten('', report))
        else:
            for key, value in _flatten('', report):
                f.write(f'{key}: {value}\n')


def _config(command: str, input_path: str = '-', output_format: str = 'json', as_json: bool = False,
            **options) -> RunConfig:
    set_context(command=command, input_path=input_path)
    return RunConfig(command, input_path, output_format='json' if as_json else output_format, **options)


def _names(p: Presentation) -> List[str]:
    return list(p.generator_names)


def _finite_group(name: str) -> groupring.FiniteGroup:
    p = load_presentation(name)
    return groupring.FiniteGroup.from_coset_table(enumerate_cosets(p), provenance=name)


@click.group()
def cli():
    """Exact computations on finitely presented groups: coset tables, cohomology, Betti approximants,
    closed-form bounds, group rings and girth."""


@cli.command()
@click.argument('file')
@output_options
def parse(file, output_format, as_json, output):
    """Echo the normalized presentation."""
    config = _config('parse', file, output_format, as_json)
    p = load_presentation(file)
    emit({'generators': _names(p), 'relators': [render_word(r, p.generator_names) for r in p.relators],
          'k': p.k, 'text': render(p)}, config.output_format, output)
    return 0


@cli.command()
@click.argument('file')
@click.option('--subgroup', default='', help='Comma separated subgroup generators (default: trivial subgroup).')
@click.option('--max-cosets', type=int, default=DEFAULT_MAX_COSETS, show_default=True)
@click.option('--rewrite/--no-rewrite', default=True, help='Also rewrite the subgroup presentation.')
@output_options
def cosets(file, subgroup, max_cosets, rewrite, output_format, as_json, output):
    """Todd-Coxeter enumeration of the cosets of a subgroup."""
    config = _config('cosets', file, output_format, as_json, max_cosets=max_cosets)
    p = load_presentation(file)
    words = parse_words(subgroup, p.generator_names)
    table = enumerate_cosets(p, words, config.max_cosets)
    report = table.to_dict()
    report['subgroup'] = [render_word(w, p.generator_names) for w in words]
    report['normal'] = is_normal(table)
    if rewrite:
        presentation_of_H = rewrite_subgroup(p, table)
        report['rewritten'] = presentation_of_H.report()
        report['rewritten']['text'] = render(presentation_of_H.presentation)
        report['cohomology'] = h1_dim(p, table, presentation_of_H).to_dict()
    emit(report, config.output_format, output)
    return 0


def _build_chain(p: Presentation, config: RunConfig, subgroups: Sequence[str]) -> Chain:
    if subgroups:
        return chain_from_subgroups(p, parse_subgroups(subgroups, p), config.max_cosets)
    if config.p is None:
        raise InputError('--p is required unless explicit --subgroup levels are given')
    return derived_p_chain(p, config.p, config.depth, config.max_index)


def _chain_exit_code(chain: Chain) -> int:
    if not chain.levels and chain.truncated == 'index_cap':
        mainLogger.error('No chain level fits under the index cap')
        return 2
    return 0


@cli.command()
@click.argument('file')
@click.option('--p', type=int, help='Prime of the derived p-series.')
@click.option('--depth', type=int, default=3, show_default=True)
@click.option('--max-index', type=int, default=DEFAULT_MAX_INDEX, show_default=True)
@click.option('--max-cosets', type=int, default=DEFAULT_MAX_COSETS, show_default=True)
@click.option('--subgroup', multiple=True, help='Generators of one explicit chain level; repeat per level.')
@output_options
def chain(file, p, depth, max_index, max_cosets, subgroup, output_format, as_json, output):
    """Derived p-series chain (or an explicit chain) as coset actions."""
    config = _config('chain', file, output_format, as_json, p=p, depth=depth, max_index=max_index,
                     max_cosets=max_cosets)
    presentation = load_presentation(file)
    result = _build_chain(presentation, config, subgroup)
    emit(result.to_dict(_names(presentation)), config.output_format, output)
    return _chain_exit_code(result)


@cli.command()
@click.argument('file')
@click.option('--p', type=int, required=True, help='Prime of the derived p-series.')
@click.option('--depth', type=int, default=3, show_default=True)
@click.option('--max-index', type=int, default=DEFAULT_MAX_INDEX, show_default=True)
@click.option('--normal-generators', default=None,
              help='Normal generators with orders, e.g. "a:2,b:inf" (default: the generators).')
@click.option('--summands', default=None, help='Free product data beta:order, e.g. "0:2,0:3".')
@click.option('--relator-orders', default='', help='Orders w_j of the relators of a free product.')
@click.option('--decimal', is_flag=True, help='Add display-only decimal approximations.')
@output_options
def betti(file, p, depth, max_index, normal_generators, summands, relator_orders, decimal, output_format, as_json,
          output):
    """Betti approximants along the derived p-series, every bound, and the per-level checks."""
    config = _config('betti', file, output_format, as_json, p=p, depth=depth, max_index=max_index, decimal=decimal)
    presentation = load_presentation(file)
    spec = parse_normal_generators(normal_generators, presentation)
    result = derived_p_chain(presentation, config.p, config.depth, config.max_index)
    report = betti_bounds.betti_report(presentation, result, spec, parse_summands(summands or ''),
                                       parse_integers(relator_orders))
    emit(report.to_dict(config.decimal), config.output_format, output)
    if report.violations:
        return 3
    return _chain_exit_code(result)


@cli.command()
@click.argument('file', required=False)
@click.option('--orders', default=None, help='Orders of normal generators, e.g. "2,3" or "2,inf".')
@click.option('--summands', default=None, help='Free product data beta:order, e.g. "0:2,0:3".')
@click.option('--relator-orders', default='', help='Orders w_j of the relators of a free product.')
@click.option('--k', 'k', type=int, default=None, help='Generator count for the trivial bound.')
@click.option('--p', type=int, default=None, help='Prime for the mod-p bound (needs FILE).')
@click.option('--decimal', is_flag=True, help='Add display-only decimal approximations.')
@output_options
def bounds(file, orders, summands, relator_orders, k, p, decimal, output_format, as_json, output):
    """Closed-form bounds only."""
    config = _config('bounds', file or '-', output_format, as_json, p=p, decimal=decimal)
    values = {}
    notes = {}
    declared = parse_orders(orders) if orders else None
    if file:
        presentation = load_presentation(file)
        values['trivial'] = betti_bounds.trivial_bound(presentation.k)
        values['relator_length'] = betti_bounds.relator_length_bound(presentation.k, presentation)
        spec = parse_normal_generators(None, presentation)
        if declared is not None:
            if len(declared) != presentation.k:
                raise InputError(f'--orders lists {len(declared)} orders for {presentation.k} generators')
            spec = NormalGeneratorSpec(spec.elements, tuple(declared))
        values['torsion'] = betti_bounds.torsion_bound(spec)
        if config.p is not None:
            values['mod_p'] = betti_bounds.mod_p_bound(presentation, config.p)
            if values['mod_p'] < 0:
                notes['mod_p'] = f'vacuous (G has no {config.p}-quotient)'
    else:
        if declared is not None:
            values['torsion'] = betti_bounds.torsion_bound(_anonymous_spec(declared))
        if k is not None or declared:
            values['trivial'] = betti_bounds.trivial_bound(k if k is not None else len(declared))
        if config.p is not None:
            raise InputError('--p needs a presentation FILE')
    if summands:
        parsed = parse_summands(summands)
        values['free_product_lower'] = betti_bounds.free_product_lower_bound(len(parsed), parsed,
                                                                             parse_integers(relator_orders))
    if not values:
        raise InputError('Nothing to compute: give a FILE, --orders, --k or --summands')
    report = {'bounds': {name: format_rational(value) for name, value in sorted(values.items())}}
    if config.decimal:
        report['bounds_decimal'] = {name: format_decimal(value) for name, value in sorted(values.items())}
    if notes:
        report['notes'] = notes
    emit(report, config.output_format, output)
    return 0


def _anonymous_spec(orders: Sequence[Optional[int]]) -> NormalGeneratorSpec:
    """Placeholder elements for order-only torsion bound evaluation."""
    return NormalGeneratorSpec(tuple(Word.generator(i) for i in range(len(orders))), tuple(orders))


@cli.command()
@click.argument('file')
@click.option('--p', 'primes', type=int, multiple=True, help='Primes of the certificate chains; repeatable.')
@click.option('--depth', type=int, default=2, show_default=True)
@click.option('--max-index', type=int, default=DEFAULT_MAX_INDEX, show_default=True)
@click.option('--max-cosets', type=int, default=DEFAULT_MAX_COSETS, show_default=True)
@click.option('--radius', type=int, default=6, show_default=True)
@click.option('--quotient', multiple=True, help='Finite quotient presentation used as an extra certificate.')
@click.option('--finite', is_flag=True, help='The group is finite: compute its girth exactly.')
@output_options
def girth(file, primes, depth, max_index, max_cosets, radius, quotient, finite, output_format, as_json, output):
    """Girth interval of the marked group and the relator-level consistency checks."""
    config = _config('girth', file, output_format, as_json, depth=depth, max_index=max_index,
                     max_cosets=max_cosets, radius=radius)
    presentation = load_presentation(file)
    if finite:
        table = enumerate_cosets(presentation, (), config.max_cosets)
        emit({'order': table.size, 'girth': girth_module.girth_finite(table)}, config.output_format, output)
        return 0
    chains = [derived_p_chain(presentation, q, config.depth, config.max_index) for q in primes]
    quotients = []
    for name in quotient:
        extended = load_presentation(name)
        if extended.generator_names != presentation.generator_names:
            raise InputError(f'Quotient {name} must use the generators {list(presentation.generator_names)}')
        quotients.append(enumerate_cosets(extended, (), config.max_cosets))
    report = girth_module.girth_interval(presentation, chains, config.radius, quotients)
    approximants = ()
    if chains and chains[0].levels:
        approximants = betti_bounds.approx_sequence(presentation, chains[0]).normalized
    report.checks = girth_module.ineq_consistency(presentation, report, approximants)
    emit(report.to_dict(_names(presentation)), config.output_format, output)
    return 3 if any(c.verdict == betti_bounds.FAIL for c in report.checks) else 0


def _uncertainty_summary(name: str, G: groupring.FiniteGroup, mode: str,
                         elements: List[groupring.RingElement]) -> dict:
    verdicts = groupring.check_elements(G, elements)
    return {'group': name, 'order': G.order, 'mode': mode, 'elements': len(elements),
            'violations': sum(not v.passed for v in verdicts),
            'equality': sum(v.equality for v in verdicts),
            'l1_l2_failures': sum(not groupring.l1_l2_check(f) for f in elements)}


@cli.command()
@click.argument('files', nargs=-1)
@click.option('--samples', type=int, default=1000, show_default=True, help='Random elements per group.')
@click.option('--seed', type=int, default=DEFAULT_SEED, show_default=True)
@click.option('--exhaustive', 'exhaustive_groups', multiple=True,
              help='Group checked exhaustively (default: c6 when no FILES are given).')
@click.option('--max-support', type=int, default=3, show_default=True)
@click.option('--coefficients', default='-1,1,2', show_default=True)
@output_options
def uncertainty(files, samples, seed, exhaustive_groups, max_support, coefficients, output_format, as_json, output):
    """rank(lambda(f)) * |supp f| >= |G| over exhaustive and seeded random group ring elements."""
    config = _config('uncertainty', ','.join(files) or '-', output_format, as_json, seed=seed)
    values = parse_integers(coefficients)
    if not files and not exhaustive_groups:
        files, exhaustive_groups = UNCERTAINTY_CORPUS, ('c6',)
    results = []
    for name in exhaustive_groups:
        G = _finite_group(name)
        results.append(_uncertainty_summary(name, G, 'exhaustive',
                                            list(groupring.exhaustive_elements(G, max_support, values))))
    for name in files:
        G = _finite_group(name)
        rng = random.Random(f'{config.seed}:{name}')
        results.append(_uncertainty_summary(name, G, 'random',
                                            [groupring.random_element(G, rng) for _ in range(samples)]))
    emit({'seed': config.seed, 'groups': results}, config.output_format, output)
    return 0


@cli.command()
@click.argument('files', nargs=-1)
@click.option('--p', 'primes', type=int, multiple=True, help='Primes to test; default 2 and 3.')
@click.option('--integer-depth', type=int, default=0, help='Also report the integral augmentation chain.')
@output_options
def pgroup(files, primes, integer_depth, output_format, as_json, output):
    """Augmentation ideal powers: nilpotent over GF(p) exactly for p-groups."""
    config = _config('pgroup', ','.join(files) or '-', output_format, as_json)
    results = []
    for name in files or FINITE_CORPUS:
        G = _finite_group(name)
        entry = {'group': name, 'order': G.order, 'primes': []}
        for q in primes or (2, 3):
            chain = groupring.augmentation_powers_mod_p(G, q)
            verdict = groupring.p_group_verdict(G, q)
            entry['primes'].append({**chain.to_dict(), 'p_group': verdict})
        if integer_depth:
            entry['integer'] = groupring.augmentation_powers_integer(G, integer_depth).to_dict()
        results.append(entry)
    emit({'groups': results}, config.output_format, output)
    return 0


@cli.command()
@click.option('--max-index', type=int, default=DEFAULT_MAX_INDEX, show_default=True)
@output_options
def corpus(max_index, output_format, as_json, output):
    """Chains, Shapiro cross-checks, Betti reports and support bounds over the shipped presentations."""
    config = _config('corpus', '-', output_format, as_json, max_index=max_index)
    entries = []
    pairs = 0
    mismatches = 0
    failed = False
    for name, q, depth in CHAIN_CORPUS:
        presentation = load_presentation(name)
        result = derived_p_chain(presentation, q, depth, config.max_index)
        routes = [h1_routes(presentation, level.table, level.presentation_of_H) for level in result.levels]
        pairs += len(routes)
        disagreeing = [level.depth for level, (fox, rewritten) in zip(result.levels, routes) if fox != rewritten]
        if disagreeing:
            mainLogger.error(f'{name}: Fox and rewriting routes to dim H1 disagree at depths {disagreeing}')
            mismatches += len(disagreeing)
            failed = True
            entries.append({'group': name, 'p': q, 'shapiro_mismatch_depths': disagreeing})
            continue
        report = betti_bounds.betti_report(presentation, result, parse_normal_generators(None, presentation))
        support_checks = []
        for level in result.levels:
            support_checks.extend(c.to_dict() for c in girth_module.z1_support_bound_check(presentation, level.table))
        failed = failed or bool(report.violations) or any(not c['pass'] for c in support_checks)
        entries.append({'group': name, 'p': q, 'betti': report.to_dict(), 'z1_support': support_checks})
    emit({'shapiro_pairs': pairs, 'shapiro_mismatches': mismatches, 'entries': entries}, config.output_format, output)
    return 3 if failed else 0



def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command and map the outcome to an exit code: 0 ok, 1 input, 2 cap, 3 invariant."""
    argv = list(sys.argv[1:] if argv is None else argv)
    configure()
    set_context()
    execution_start = datetime.now(timezone.utc)
    started = perf_counter()
    comment = None
    try:
        code = cli.main(args=argv, prog_name='grpcalc', standalone_mode=False)
        code = code if isinstance(code, int) else 0
    except click.exceptions.Exit as e:
        code = e.exit_code
    except click.ClickException as e:
        e.show()
        code, comment = 1, e.format_message()
    except click.exceptions.Abort:
        code, comment = 1, 'aborted'
    except GrpcalcError as e:
        code, comment = e.exit_code, str(e)
        mainLogger.error(f'{type(e).__name__}: {e}')
        click.echo(json.dumps({'error': {**e.to_dict(), 'exit_code': code}}, sort_keys=True, indent=2))
    execution_time = round(perf_counter() - started, 3)
    context = get_context()
    accountLogger(execution_start=execution_start, execution_time=execution_time,
                  command=context.get('command', '-'), success=code == 0, comment=comment,
                  input_path=context.get('input_path', '-'))
    return code


def main():
    sys.exit(run())
