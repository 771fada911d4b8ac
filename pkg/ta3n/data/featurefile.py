# -*- coding: utf-8 -*-

"""Feature file reader and writer

Layout of a feature file:

1. One line of UTF-8 JSON (the manifest) terminated by ``\\n``::

    {"class_names": ["walk", "run"],
     "feature_dim": 16,
     "format": "ta3n-features",
     "record_count": 2,
     "records": [{"domain": "source", "label": 0, "nbytes": 1536,
                  "num_frames": 12, "offset": 0, "video_id": "a"},
                 ...],
     "version": 1}

2. The payload: every record's T x D frames as row major little
   endian 64-bit floats.  ``offset`` is relative to the first payload
   byte and ``nbytes`` must equal ``num_frames * feature_dim * 8``.

``label`` is null for unlabeled videos.
"""

import json
import logging
import numpy as np

from ta3n.data.record import FrameFeatureRecord
from ta3n.data.record import DomainDataset
from ta3n.data.record import DataError
from ta3n.data.record import FeatureFileError


logger = logging.getLogger(__name__)

FORMAT_NAME = 'ta3n-features'
FORMAT_VERSION = 1
DTYPE = '<f8'
ITEM_SIZE = 8
RECORD_KEYS = ('video_id', 'domain', 'label', 'num_frames', 'offset',
               'nbytes')


def build_manifest(dataset):
    """Gets the manifest dict for `dataset`
    """
    entries = []
    offset = 0
    for record in dataset.get_records():
        nbytes = record.get_frames().size * ITEM_SIZE
        entries.append({'video_id': record.get_video_id(),
                        'domain': record.get_domain(),
                        'label': record.get_label(),
                        'num_frames': record.get_num_frames(),
                        'offset': offset,
                        'nbytes': nbytes})
        offset += nbytes
    return {'format': FORMAT_NAME,
            'version': FORMAT_VERSION,
            'feature_dim': dataset.get_feature_dim(),
            'class_names': dataset.get_class_names(),
            'record_count': len(entries),
            'records': entries}


def save_feature_file(dataset, path):
    """Writes `dataset` to `path`

    :raises FeatureFileError: if the file cannot be written
    """
    manifest = build_manifest(dataset)
    header = json.dumps(manifest, sort_keys=True) + '\n'
    try:
        with open(path, 'wb') as f:
            f.write(header.encode('utf-8'))
            for record in dataset.get_records():
                f.write(np.ascontiguousarray(record.get_frames(),
                                             dtype=DTYPE).tobytes())
    except (IOError, OSError) as e:
        raise FeatureFileError('Unable to write ' + path + ' : ' + str(e))
    logger.debug('Wrote ' + str(len(dataset)) + ' records to ' + path)


def _read_manifest(path, content):
    newline = content.find(b'\n')
    if newline < 0:
        raise FeatureFileError('No manifest line in ' + path)
    try:
        manifest = json.loads(content[:newline].decode('utf-8'))
    except ValueError as e:
        raise FeatureFileError('Malformed manifest in ' + path + ' : ' +
                               str(e))
    if not isinstance(manifest, dict):
        raise FeatureFileError('Manifest in ' + path + ' is not an object')
    if manifest.get('format') != FORMAT_NAME:
        raise FeatureFileError('Unknown format ' +
                               str(manifest.get('format')) + ' in ' + path)
    if manifest.get('version') != FORMAT_VERSION:
        raise FeatureFileError('Unsupported version ' +
                               str(manifest.get('version')) + ' in ' + path)
    for key in ('feature_dim', 'record_count', 'records'):
        if key not in manifest:
            raise FeatureFileError('Manifest in ' + path + ' lacks ' + key)
    if len(manifest['records']) != manifest['record_count']:
        raise FeatureFileError('Manifest in ' + path + ' declares ' +
                               str(manifest['record_count']) +
                               ' records but lists ' +
                               str(len(manifest['records'])))
    return manifest, content[newline + 1:]


def _read_record(entry, feature_dim, payload):
    record_id = entry.get('video_id') if isinstance(entry, dict) else None
    if not isinstance(entry, dict) or \
            any(k not in entry for k in RECORD_KEYS):
        raise FeatureFileError('Record entry lacks one of ' +
                               str(RECORD_KEYS), record_id)
    num_frames = entry['num_frames']
    offset = entry['offset']
    nbytes = entry['nbytes']
    if nbytes != num_frames * feature_dim * ITEM_SIZE:
        raise FeatureFileError('Record holds ' + str(nbytes) +
                               ' bytes which does not match ' +
                               str(num_frames) + ' frames of dimension ' +
                               str(feature_dim), record_id)
    if offset < 0 or offset + nbytes > len(payload):
        raise FeatureFileError('Payload truncated: record needs bytes ' +
                               str(offset) + '..' + str(offset + nbytes) +
                               ' of ' + str(len(payload)), record_id)
    frames = np.frombuffer(payload, dtype=DTYPE,
                           count=num_frames * feature_dim, offset=offset)
    frames = frames.astype(np.float64).reshape(num_frames, feature_dim)
    try:
        return FrameFeatureRecord(record_id, entry['domain'], entry['label'],
                                  frames)
    except DataError as e:
        raise FeatureFileError(str(e), record_id)


def load_feature_file(path):
    """Reads DomainDataset from `path`

    :raises FeatureFileError: on a malformed manifest, truncated
                              payload or dimension mismatch, naming the
                              offending record when there is one
    """
    try:
        with open(path, 'rb') as f:
            content = f.read()
    except (IOError, OSError) as e:
        raise FeatureFileError('Unable to read ' + path + ' : ' + str(e))
    manifest, payload = _read_manifest(path, content)
    feature_dim = manifest['feature_dim']
    if not isinstance(feature_dim, int) or feature_dim < 1:
        raise FeatureFileError('Invalid feature_dim ' + str(feature_dim) +
                               ' in ' + path)
    records = [_read_record(entry, feature_dim, payload)
               for entry in manifest['records']]
    try:
        return DomainDataset(records, feature_dim=feature_dim,
                             class_names=manifest.get('class_names'))
    except DataError as e:
        raise FeatureFileError(str(e))
