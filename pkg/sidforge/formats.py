# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Readers and writers of the file formats.

* SID index: text, header ``#sid v=<V> l=<L> n=<N>``, then one
  ``item<TAB>c1,c2,...`` line per item in item order, LF line endings.
* Quantization model: binary, magic ``SFQM1``, u32 L, V, d, N, then the
  ``L x V x d`` codebooks and the ``N x d`` residuals as float32, all little
  endian.
* Embeddings: binary, magic ``SFEMB1``, u32 n, d, then ``n x d`` float32
  row-major, little endian.
* Beams: JSON lines ``{"user": .., "target_item": .., "beams": [[..], ..]}``.
* Interactions: TSV ``user<TAB>item<TAB>timestamp``; pairs: TSV ``user<TAB>item``.

All writers accept a filename or a file-like object.
"""
import io
import re
import json
import struct
import codecs
from contextlib import contextmanager
import numpy as np
from . import consts
from .core import SidIndex, build_sid_index, make_beam_record
from .zcr import QuantizationModel
from .cce import MetricsReport

__all__ = ('writable', 'readable', 'write_sid_index', 'read_sid_index', 'write_model', 'read_model',
           'write_embeddings', 'read_embeddings', 'write_beams', 'read_beams',
           'write_interactions', 'read_interactions', 'write_pairs', 'read_pairs',
           'write_id_map', 'write_json', 'read_json', 'read_metrics_report', 'FormatError')

_SID_HEADER_PATTERN = re.compile(r'^#sid v=(\d+) l=(\d+) n=(\d+)$')


class FormatError(ValueError):
    """\
    Indicates a malformed input file.
    """


@contextmanager
def writable(file_or_path, mode, encoding=None):
    """\
    Returns a writable file-like object.

    Usage::

        with writable(file_name_or_path, 'wb') as f:
            ...

    :param file_or_path: Either a file-like object or a filename.
    :param str mode: String indicating the writing mode (i.e. ``'wb'``)
    """
    f = file_or_path
    must_close = False
    try:
        file_or_path.write
        if encoding is not None and not isinstance(file_or_path, io.TextIOBase):
            f = codecs.getwriter(encoding)(file_or_path)
    except AttributeError:
        f = open(file_or_path, mode, encoding=encoding, newline='' if encoding else None)
        must_close = True
    try:
        yield f
    finally:
        if must_close:
            f.close()


@contextmanager
def readable(file_or_path, mode, encoding=None):
    """\
    Returns a readable file-like object, see :py:func:`writable`.
    """
    f = file_or_path
    must_close = False
    try:
        file_or_path.read
        if encoding is not None and not isinstance(file_or_path, io.TextIOBase):
            f = codecs.getreader(encoding)(file_or_path)
    except AttributeError:
        f = open(file_or_path, mode, encoding=encoding)
        must_close = True
    try:
        yield f
    finally:
        if must_close:
            f.close()


def _lines(file_or_path):
    with readable(file_or_path, 'rt', encoding='utf-8') as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip('\r\n')
            if line:
                yield lineno, line


def write_sid_index(index, out):
    """\
    Serializes the SID index.

    :param core.SidIndex index: The index.
    :param out: Filename or a file-like object supporting to write text.
    """
    with writable(out, 'wt', encoding='utf-8') as f:
        f.write('{0} v={1} l={2} n={3}\n'.format(consts.SID_INDEX_HEADER, index.codebook_size,
                                                  index.sid_len, index.n_items))
        for item, sid in enumerate(index):
            f.write('{0}\t{1}\n'.format(item, ','.join(str(c) for c in sid)))


def read_sid_index(src):
    """\
    Reads a SID index.

    :param src: Filename or a file-like object.
    :raises: :py:exc:`FormatError` for a malformed file, the
            :py:func:`core.build_sid_index` errors for invalid content.
    :rtype: core.SidIndex
    """
    lines = _lines(src)
    try:
        _, header = next(lines)
    except StopIteration:
        raise FormatError('Empty SID index file')
    m = _SID_HEADER_PATTERN.match(header)
    if not m:
        raise FormatError('Invalid SID index header: "{0}"'.format(header))
    codebook_size, sid_len, n = (int(g) for g in m.groups())
    assignments = []
    for lineno, line in lines:
        try:
            item, codes = line.split('\t')
            assignments.append((int(item), [int(c) for c in codes.split(',')]))
        except ValueError:
            raise FormatError('Line {0}: invalid SID index entry: "{1}"'.format(lineno, line))
    if len(assignments) != n:
        raise FormatError('Header announces {0} items, found {1}'.format(n, len(assignments)))
    if not assignments:
        return SidIndex((), sid_len, codebook_size)
    return build_sid_index(assignments, sid_len, codebook_size)


def _read_exact(f, size, what):
    data = f.read(size)
    if len(data) != size:
        raise FormatError('Truncated file: expected {0} bytes of {1}, got {2}'.format(size, what, len(data)))
    return data


def _read_magic(f, magic):
    data = f.read(len(magic))
    if data != magic:
        raise FormatError('Invalid magic number: expected {0!r}, got {1!r}'.format(magic, data))


def _read_floats(f, shape, what):
    count = int(np.prod(shape))
    data = _read_exact(f, count * 4, what)
    return np.frombuffer(data, dtype='<f4').reshape(shape).astype(np.float32)


def write_model(model, out):
    """\
    Serializes the quantization model.

    :param zcr.QuantizationModel model: The model.
    :param out: Filename or a file-like object supporting to write bytes.
    """
    with writable(out, 'wb') as f:
        f.write(consts.MODEL_MAGIC)
        f.write(struct.pack('<4I', model.levels, model.codebook_size, model.dim, model.n_items))
        f.write(model.codebooks.astype('<f4').tobytes())
        f.write(model.residuals.astype('<f4').tobytes())


def read_model(src):
    """\
    Reads a quantization model.

    :param src: Filename or a file-like object.
    :raises: :py:exc:`FormatError` for a malformed file.
    :rtype: zcr.QuantizationModel
    """
    with readable(src, 'rb') as f:
        _read_magic(f, consts.MODEL_MAGIC)
        levels, codebook_size, dim, n = struct.unpack('<4I', _read_exact(f, 16, 'header'))
        codebooks = _read_floats(f, (levels, codebook_size, dim), 'codebooks')
        residuals = _read_floats(f, (n, dim), 'residuals')
        if f.read(1):
            raise FormatError('Trailing data after the residuals')
    return QuantizationModel(codebooks, residuals)


def write_embeddings(matrix, out):
    """\
    Serializes an embedding matrix as float32.

    :param matrix: ``n x d`` array.
    :param out: Filename or a file-like object supporting to write bytes.
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2:
        raise ValueError('Expected a n x d matrix. Got shape: {0}'.format(matrix.shape))
    with writable(out, 'wb') as f:
        f.write(consts.EMBEDDING_MAGIC)
        f.write(struct.pack('<2I', *matrix.shape))
        f.write(matrix.astype('<f4').tobytes())


def read_embeddings(src):
    """\
    Reads an embedding matrix.

    :param src: Filename or a file-like object.
    :raises: :py:exc:`FormatError` for a malformed file.
    :rtype: numpy.ndarray (float32)
    """
    with readable(src, 'rb') as f:
        _read_magic(f, consts.EMBEDDING_MAGIC)
        n, d = struct.unpack('<2I', _read_exact(f, 8, 'header'))
        matrix = _read_floats(f, (n, d), 'embeddings')
        if f.read(1):
            raise FormatError('Trailing data after the embeddings')
    return matrix


def write_beams(records, out):
    """\
    Writes beam records as JSON lines.

    :param records: Iterable of :py:class:`core.BeamRecord`.
    :param out: Filename or a file-like object supporting to write text.
    """
    with writable(out, 'wt', encoding='utf-8') as f:
        for rec in records:
            f.write(json.dumps({'user': rec.user, 'target_item': rec.target_item,
                                'beams': [list(sid) for sid in rec.beams]}, separators=(',', ':')))
            f.write('\n')


def read_beams(src):
    """\
    Reads beam records. Beams are deduplicated (first occurrence wins).

    :param src: Filename or a file-like object.
    :raises: :py:exc:`FormatError` for a malformed line.
    :rtype: list of core.BeamRecord
    """
    res = []
    for lineno, line in _lines(src):
        try:
            rec = json.loads(line)
            res.append(make_beam_record(rec['user'], rec['target_item'], rec['beams']))
        except (ValueError, KeyError, TypeError) as ex:
            raise FormatError('Line {0}: invalid beam record: {1}'.format(lineno, ex))
    return res


def _parse_timestamp(value):
    try:
        return int(value)
    except ValueError:
        return float(value)


def write_interactions(interactions, out):
    """\
    Writes ``(user, item, timestamp)`` tuples as TSV.

    :param interactions: Iterable of ``(user, item, timestamp)`` tuples.
    :param out: Filename or a file-like object supporting to write text.
    """
    with writable(out, 'wt', encoding='utf-8') as f:
        for user, item, ts in interactions:
            f.write('{0}\t{1}\t{2}\n'.format(user, item, ts))


def read_interactions(src):
    """\
    Reads ``user<TAB>item<TAB>timestamp`` lines. User and item ids are kept
    as strings, timestamps are parsed as int (or float).

    :param src: Filename or a file-like object.
    :raises: :py:exc:`FormatError` for a malformed line.
    :rtype: list of tuples
    """
    res = []
    for lineno, line in _lines(src):
        try:
            user, item, ts = line.split('\t')
            res.append((user, item, _parse_timestamp(ts)))
        except ValueError:
            raise FormatError('Line {0}: expected user<TAB>item<TAB>timestamp, got "{1}"'.format(lineno, line))
    return res


def write_pairs(pairs, out):
    """\
    Writes ``(user, item)`` tuples as TSV.
    """
    with writable(out, 'wt', encoding='utf-8') as f:
        for user, item in pairs:
            f.write('{0}\t{1}\n'.format(user, item))


def read_pairs(src):
    """\
    Reads ``user<TAB>item`` lines of integer ids.

    :rtype: list of tuples
    """
    res = []
    for lineno, line in _lines(src):
        try:
            user, item = line.split('\t')[:2]
            res.append((int(user), int(item)))
        except ValueError:
            raise FormatError('Line {0}: expected user<TAB>item, got "{1}"'.format(lineno, line))
    return res


def write_id_map(raw_ids, out):
    """\
    Writes the ``dense<TAB>raw`` id mapping, dense ids are the positions in `raw_ids`.
    """
    write_pairs(enumerate(raw_ids), out)


def write_json(obj, out):
    """\
    Writes `obj` as indented JSON with sorted keys and a trailing newline.
    """
    with writable(out, 'wt', encoding='utf-8') as f:
        f.write(json.dumps(obj, indent=2, sort_keys=True))
        f.write('\n')


def read_json(src):
    """\
    Reads a JSON document.

    :raises: :py:exc:`FormatError` for invalid JSON.
    """
    with readable(src, 'rt', encoding='utf-8') as f:
        try:
            return json.load(f)
        except ValueError as ex:
            raise FormatError('Invalid JSON: {0}'.format(ex))


def read_metrics_report(src):
    """\
    Reads an evaluation report written by ``sid-forge evaluate --json``.

    Accepts the report envelope as well as the bare result object.

    :rtype: sidforge.cce.MetricsReport
    :raises: :py:exc:`FormatError` if the document is not an evaluation report.
    """
    data = read_json(src)
    if isinstance(data, dict) and 'result' in data:
        data = data['result']
    try:
        return MetricsReport.from_dict(data)
    except (KeyError, TypeError, ValueError, AttributeError) as ex:
        raise FormatError('Not an evaluation report, missing or invalid: {0}'.format(ex))
