#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Command line script to analyze, repair and evaluate Semantic ID assignments.

Exit codes: 0 on success, 1 on invalid input or usage errors, 2 on I/O errors.
"""
import os
import sys
import logging
import argparse
import sidforge
from sidforge import consts, formats
from sidforge.utils import parse_int_list, round_half_up

_LOG_FORMAT = '[%(asctime)s][%(levelname)s] %(name)s: %(message)s'

# Flags which configure the script and are not echoed into the report
_NOT_ECHOED = ('command', 'json', 'verbose', 'debug', 'quiet')


class _ArgumentParser(argparse.ArgumentParser):
    """\
    Argument parser which exits with status 1 on usage errors.
    """
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, '{0}: error: {1}\n'.format(self.prog, message))


def _int_list(val):
    try:
        return parse_int_list(val)
    except ValueError as ex:
        raise argparse.ArgumentTypeError(str(ex))


def _float_list(val):
    try:
        return tuple(float(v) for v in val.split(',') if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError('Invalid list of probabilities: "{0}"'.format(val))


def _named_file(val):
    name, sep, path = val.partition('=')
    if not sep or not name or not path:
        raise argparse.ArgumentTypeError('Expected NAME=FILE, got "{0}"'.format(val))
    return name, path


def make_parser():
    """\
    Returns the command line parser.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', help='Write the JSON report to the provided file or to stdout if no file '
                                       'is given (default: plain text summary on stdout)',
                        nargs='?', const='-', default=None, metavar='FILE')
    log_group = common.add_argument_group('Logging')
    log_group.add_argument('--verbose', help='Log progress messages', action='store_true')
    log_group.add_argument('--debug', help='Log debug messages', action='store_true')
    log_group.add_argument('--quiet', help='Log errors only', action='store_true')

    parser = _ArgumentParser(prog='sid-forge',
                             description='Semantic ID collision toolkit version {0}'.format(sidforge.__version__))
    parser.add_argument('--ver', '-V', help='Shows Sidforge version', action='version',
                        version='Sidforge {0}'.format(sidforge.__version__))
    sub = parser.add_subparsers(dest='command', metavar='COMMAND', parser_class=_ArgumentParser)

    def add(name, description):
        return sub.add_parser(name, help=description, description=description, parents=[common])

    p = add('analyze', 'Collision statistics of a SID index')
    p.add_argument('--index', help='SID index file', required=True)

    p = add('capacity-check', 'Checks if every prefix group fits into the last-level codebook')
    p.add_argument('--index', help='SID index file', required=True)
    p.add_argument('--codebook', help='Last-level codebook size (default: the codebook size of the index)',
                   type=int)

    p = add('tokenize', 'Residual K-means tokenization of embeddings')
    p.add_argument('--embeddings', help='Embedding file', required=True)
    p.add_argument('--levels', help='SID length (default: {0})'.format(consts.DEFAULT_LEVELS),
                   type=int, default=consts.DEFAULT_LEVELS)
    p.add_argument('--codebook', help='Codes per level (default: {0})'.format(consts.DEFAULT_CODEBOOK_SIZE),
                   type=int, default=consts.DEFAULT_CODEBOOK_SIZE)
    p.add_argument('--iters', help='Lloyd iterations per level (default: {0})'.format(consts.DEFAULT_KMEANS_ITERS),
                   type=int, default=consts.DEFAULT_KMEANS_ITERS)
    p.add_argument('--seed', help='Seed (default: {0})'.format(consts.DEFAULT_SEED),
                   type=int, default=consts.DEFAULT_SEED)
    p.add_argument('--out-index', help='Output SID index file', required=True)
    p.add_argument('--out-model', help='Output quantization model file', required=True)

    p = add('reassign', 'Collision-free reassignment of last-level codes')
    p.add_argument('--index', help='SID index file', required=True)
    p.add_argument('--model', help='Quantization model file', required=True)
    p.add_argument('--method', help='Reassignment method (default: "zcr")', choices=consts.METHODS,
                   default=consts.METHOD_ZCR)
    p.add_argument('--strict', help='Fail if a colliding prefix group exceeds the codebook size',
                   action='store_true')
    p.add_argument('--baseline', help='Run the greedy baseline too and report the cost reduction',
                   action='store_true')
    p.add_argument('--workers', help='Number of worker threads', type=int)
    p.add_argument('--out-index', help='Output SID index file', required=True)
    p.add_argument('--report', help='Writes the reassignment report (JSON) to the provided file')

    p = add('evaluate', 'SID-level and collision-corrected item-level metrics of beams')
    p.add_argument('--index', help='SID index file', required=True)
    p.add_argument('--beams', help='Beam file (JSON lines)', required=True)
    p.add_argument('--k', help='Comma separated cutoffs (default: "5,10")', type=_int_list,
                   default=consts.DEFAULT_KS)
    p.add_argument('--workers', help='Number of worker threads', type=int)

    p = add('embed-cf', 'PPMI + SVD collaborative item embeddings')
    p.add_argument('--interactions', help='Interaction file with dense ids (TSV)', required=True)
    p.add_argument('--n-items', help='Number of items (default: largest item id + 1)', type=int)
    p.add_argument('--window', help='Co-occurrence window (default: {0})'.format(consts.DEFAULT_WINDOW),
                   type=int, default=consts.DEFAULT_WINDOW)
    p.add_argument('--holdout', help='Held out items per user (default: {0})'.format(consts.DEFAULT_HOLDOUT),
                   type=int, default=consts.DEFAULT_HOLDOUT)
    p.add_argument('--dim', help='Embedding dimension (default: {0})'.format(consts.DEFAULT_CF_DIM),
                   type=int, default=consts.DEFAULT_CF_DIM)
    p.add_argument('--seed', help='Seed (default: {0})'.format(consts.DEFAULT_SEED),
                   type=int, default=consts.DEFAULT_SEED)
    p.add_argument('--out', help='Output embedding file', required=True)

    p = add('fuse', 'Fusion of textual and collaborative embeddings')
    p.add_argument('--text', help='Text embedding file', required=True)
    p.add_argument('--cf', help='Collaborative embedding file', required=True)
    p.add_argument('--alpha', help='Weight of the collaborative part (default: {0})'.format(consts.DEFAULT_ALPHA),
                   type=float, default=consts.DEFAULT_ALPHA)
    p.add_argument('--dim', help='Output dimension (default: text dimension)', type=int)
    p.add_argument('--out', help='Output embedding file', required=True)

    p = add('preprocess', 'k-core filtering and leave-one-out split')
    p.add_argument('--input', help='Raw interaction file (TSV)', required=True)
    p.add_argument('--k-core', help='Minimum user and item degree (default: {0})'.format(consts.DEFAULT_K_CORE),
                   type=int, default=consts.DEFAULT_K_CORE)
    p.add_argument('--out-dir', help='Output directory', required=True)

    p = add('synth-beams', 'Synthetic beams with planted targets')
    p.add_argument('--index', help='SID index file', required=True)
    p.add_argument('--targets', help='Target pairs file (user<TAB>item), default: every item once')
    p.add_argument('--width', help='Beam width (default: {0})'.format(consts.DEFAULT_BEAM_WIDTH),
                   type=int, default=consts.DEFAULT_BEAM_WIDTH)
    p.add_argument('--hit-profile', help='Comma separated per-rank plant probabilities',
                   type=_float_list, default=consts.DEFAULT_HIT_PROFILE)
    p.add_argument('--seed', help='Seed (default: {0})'.format(consts.DEFAULT_SEED),
                   type=int, default=consts.DEFAULT_SEED)
    p.add_argument('--out', help='Output beam file', required=True)

    p = add('compare', 'Tokenizer ranking by SID-level and item-level hit rate')
    p.add_argument('--report', help='Evaluation report as NAME=FILE', type=_named_file, action='append',
                   required=True, dest='reports')
    p.add_argument('--k', help='Cutoff (default: 10)', type=int, default=10)

    p = add('import', 'Converts a local review dump into an interaction file')
    p.add_argument('--format', help='Dump format', choices=('amazon', 'yelp'), required=True)
    p.add_argument('--input', help='Review file (JSON lines, optionally gzipped)', required=True)
    p.add_argument('--out', help='Output interaction file (TSV)', required=True)
    return parser


def parse(args):
    """\
    Parses the arguments and returns the result.
    """
    parser = make_parser()
    if not len(args):
        parser.print_help()
        sys.exit(1)
    parsed_args = parser.parse_args(args)
    if parsed_args.command is None:
        parser.print_help()
        sys.exit(1)
    return _AttrDict(vars(parsed_args))


def configure_logging(config):
    """\
    Configures the root logger according to the logging flags.
    """
    level = logging.WARNING
    if config.quiet:
        level = logging.ERROR
    elif config.debug:
        level = logging.DEBUG
    elif config.verbose:
        level = logging.INFO
    logging.basicConfig(level=level, format=_LOG_FORMAT, stream=sys.stderr, force=True)


def make_report(command, config, result):
    """\
    Returns the report envelope.

    :param str command: The command name.
    :param dict config: The parsed flags.
    :param dict result: The command's result.
    :rtype: dict
    """
    echo = {k: (list(v) if isinstance(v, tuple) else v) for k, v in config.items() if k not in _NOT_ECHOED}
    return {'tool_version': sidforge.__version__, 'command': command, 'config': echo, 'result': result}


def _analyze(config):
    index = formats.read_sid_index(config.index)
    stats = sidforge.collision_stats(index)
    result = {
        'n_items': stats.n_items,
        'coll_percent': round_half_up(stats.coll_percent, consts.REPORT_PLACES),
        'g_max': stats.g_max,
        'n_sids': len(index.distinct_sids()),
        'histogram': {str(size): count for size, count in stats.histogram.items()},
        'rounding': '{0}, {1} places'.format(consts.REPORT_ROUNDING, consts.REPORT_PLACES),
        'prefix': None,
    }
    if index.sid_len > 1:
        table = sidforge.prefix_groups(index)
        result['prefix'] = {
            'groups': len(table),
            'max': table.max_size,
            'mean': round_half_up(table.mean_size, consts.REPORT_PLACES),
            'rho_total': table.rho_total,
            'capacity_ok': sidforge.capacity_check(table, index.codebook_size).satisfied,
        }
    return 0, result


def _capacity_check(config):
    index = formats.read_sid_index(config.index)
    codebook_size = config.codebook or index.codebook_size
    res = sidforge.capacity_check(sidforge.prefix_groups(index), codebook_size)
    result = {
        'codebook_size': codebook_size,
        'satisfied': res.satisfied,
        'max_size': res.max_size,
        'mean_size': round_half_up(res.mean_size, consts.REPORT_PLACES),
        'summary': res.summary,
        'violating_prefixes': [list(prefix) for prefix in res.violating_prefixes],
    }
    return (0 if res.satisfied else 1), result


def _tokenize(config):
    embeddings = formats.read_embeddings(config.embeddings)
    index, model = sidforge.tokenize(embeddings, levels=config.levels, codebook_size=config.codebook,
                                     iters=config.iters, seed=config.seed)
    formats.write_sid_index(index, config.out_index)
    formats.write_model(model, config.out_model)
    stats = sidforge.collision_stats(index)
    return 0, {'n_items': index.n_items, 'levels': index.sid_len, 'codebook_size': index.codebook_size,
               'coll_percent': round_half_up(stats.coll_percent, consts.REPORT_PLACES), 'g_max': stats.g_max}


def _reassign(config):
    index = formats.read_sid_index(config.index)
    model = formats.read_model(config.model)
    if config.strict:
        res = sidforge.capacity_check(sidforge.prefix_groups(index), index.codebook_size)
        if not res.satisfied:
            raise sidforge.GroupExceedsCapacity('{0} prefix groups exceed the codebook size {1}, largest: {2}'
                                                .format(len(res.violating_prefixes), index.codebook_size,
                                                        res.max_size))
    new_index, report = sidforge.reassign(index, model, method=config.method, workers=config.workers)
    formats.write_sid_index(new_index, config.out_index)
    result = report.as_dict()
    result.update(coll_percent_before=round_half_up(sidforge.collision_stats(index).coll_percent,
                                                    consts.REPORT_PLACES),
                  coll_percent_after=round_half_up(sidforge.collision_stats(new_index).coll_percent,
                                                   consts.REPORT_PLACES),
                  zero_collision=sidforge.verify_zero_collision(new_index))
    if config.baseline:
        _, greedy = sidforge.greedy_reassign(index, model, workers=config.workers)
        _, optimal = (new_index, report) if config.method == consts.METHOD_ZCR \
            else sidforge.zero_collision_reassign(index, model, workers=config.workers)
        result.update(greedy_delta_d_total=greedy.delta_d_total, zcr_delta_d_total=optimal.delta_d_total,
                      cost_reduction_percent=sidforge.cost_reduction_percent(greedy, optimal))
    if config.report:
        formats.write_json(make_report(config.command, config, result), config.report)
    return 0, result


def _evaluate(config):
    index = formats.read_sid_index(config.index)
    records = formats.read_beams(config.beams)
    return 0, sidforge.evaluate(records, index, config.k, workers=config.workers).as_dict()


def _embed_cf(config):
    triples = [(int(u), int(i), ts) for u, i, ts in formats.read_interactions(config.interactions)]
    log = sidforge.InteractionLog.from_triples(triples, n_items=config.n_items)
    ppmi = sidforge.build_ppmi(log, window=config.window, holdout_last=config.holdout)
    emb = sidforge.truncated_svd(ppmi, k=config.dim, seed=config.seed)
    formats.write_embeddings(emb.vectors, config.out)
    return 0, {'n_items': log.n_items, 'n_users': len(log), 'dim': config.dim, 'ppmi_nnz': int(ppmi.nnz),
               'singular_values': [float(s) for s in emb.singular_values[:10]]}


def _fuse(config):
    text = formats.read_embeddings(config.text)
    cf = formats.read_embeddings(config.cf)
    fused = sidforge.fuse(text, cf, alpha=config.alpha, d_out=config.dim)
    formats.write_embeddings(fused, config.out)
    return 0, {'n_items': fused.shape[0], 'dim': fused.shape[1], 'alpha': config.alpha}


def _preprocess(config):
    dataset = sidforge.preprocess(formats.read_interactions(config.input), k_core=config.k_core)
    out_dir = config.out_dir
    if not os.path.isdir(out_dir):
        os.makedirs(out_dir)
    formats.write_interactions(dataset.interactions, os.path.join(out_dir, 'interactions.tsv'))
    formats.write_interactions(dataset.filtered, os.path.join(out_dir, 'filtered.tsv'))
    formats.write_id_map(dataset.user_ids, os.path.join(out_dir, 'users.tsv'))
    formats.write_id_map(dataset.item_ids, os.path.join(out_dir, 'items.tsv'))
    formats.write_pairs(dataset.validation_pairs(), os.path.join(out_dir, 'valid.tsv'))
    formats.write_pairs(dataset.test_pairs(), os.path.join(out_dir, 'test.tsv'))
    summary = dataset.summary()
    formats.write_json(summary, os.path.join(out_dir, 'summary.json'))
    return 0, summary


def _synth_beams(config):
    index = formats.read_sid_index(config.index)
    targets = formats.read_pairs(config.targets) if config.targets else range(index.n_items)
    cfg = sidforge.SynthBeamConfig(beam_width=config.width, hit_profile=config.hit_profile, seed=config.seed)
    records = list(sidforge.synth_beams(index, targets, cfg))
    formats.write_beams(records, config.out)
    return 0, {'n_records': len(records), 'beam_width': cfg.beam_width}


def _compare(config):
    reports = {name: formats.read_metrics_report(path) for name, path in config.reports}
    cmp = sidforge.rank_flips(reports, config.k)
    return 0, {
        'k': config.k,
        'sid_ranking': cmp.sid_ranking,
        'item_ranking': cmp.item_ranking,
        'flips': [list(pair) for pair in cmp.flips],
        'metrics': {name: {'sid_hit': r.sid_hit[config.k], 'item_hit': r.item_hit[config.k],
                           'inflation_percent': r.inflation_percent(config.k)}
                    for name, r in sorted(reports.items())},
    }


def _import(config):
    importer = sidforge.import_amazon if config.format == 'amazon' else sidforge.import_yelp
    interactions = importer(config.input)
    formats.write_interactions(interactions, config.out)
    return 0, {'n_interactions': len(interactions)}


_COMMANDS = {
    'analyze': _analyze,
    'capacity-check': _capacity_check,
    'tokenize': _tokenize,
    'reassign': _reassign,
    'evaluate': _evaluate,
    'embed-cf': _embed_cf,
    'fuse': _fuse,
    'preprocess': _preprocess,
    'synth-beams': _synth_beams,
    'compare': _compare,
    'import': _import,
}


def _write_text(result, out, prefix=''):
    for key in sorted(result):
        value = result[key]
        if isinstance(value, dict):
            out.write('{0}{1}:{2}'.format(prefix, key, os.linesep))
            _write_text(value, out, prefix + '  ')
        elif not isinstance(value, list) or len(value) <= 10:
            out.write('{0}{1}: {2}{3}'.format(prefix, key, value, os.linesep))


def main(args=sys.argv[1:]):
    config = parse(args)
    configure_logging(config)
    try:
        code, result = _COMMANDS[config.command](config)
    except ValueError as ex:
        sys.stderr.writelines([str(ex), os.linesep])
        return 1
    except OSError as ex:
        sys.stderr.writelines([str(ex), os.linesep])
        return 2
    if config.json is None:
        _write_text(result, sys.stdout)
    else:
        report = make_report(config.command, config, result)
        try:
            formats.write_json(report, sys.stdout if config.json == '-' else config.json)
        except OSError as ex:
            sys.stderr.writelines([str(ex), os.linesep])
            return 2
    return code


class _AttrDict(dict):
    """\
    Internal helper class.
    """
    def __init__(self, *args, **kwargs):
        super(_AttrDict, self).__init__(*args, **kwargs)
        self.__dict__ = self


if __name__ == '__main__':
    sys.exit(main())
