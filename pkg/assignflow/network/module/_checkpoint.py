# -*- coding: utf-8 -*-
#
#   Binary checkpoint format for fitness fields
#

import os
import logging
import tempfile
import numpy as np
import torch
from ...errors import CheckpointError

__all__ = ['CheckpointLoader', 'CheckpointSaver', 'CHECKPOINT_VERSION']
log = logging.getLogger(__name__)

MAGIC = b'AFCK'
CHECKPOINT_VERSION = (1, 0, 0)


def _encode_header(header):
    return ''.join(f'{k}={v}\n' for k, v in header.items()).encode('utf-8')


def _decode_header(raw):
    header = {}
    for line in raw.decode('utf-8').splitlines():
        if not line.strip():
            continue
        key, sep, value = line.partition('=')
        if not sep:
            raise CheckpointError(f'Malformed checkpoint header line [{line}]')
        header[key.strip()] = value.strip()
    return header


class CheckpointLoader:
    """ Load checkpoint files into fitness fields.

    Layout: magic ``AFCK``, ``int32[3]`` version, ``int32`` header length, UTF-8 ``key=value`` header,
    then little-endian float64 parameter blocks in ``state_dict`` order.
    """

    def __init__(self, filename):
        with open(filename, 'rb') as fp:
            raw = fp.read()

        if raw[:4] != MAGIC or len(raw) < 20:
            raise CheckpointError(f'{filename} is not an assignflow checkpoint')
        self.version = tuple(np.frombuffer(raw, dtype='<i4', count=3, offset=4).tolist())
        log.debug(f'Loading checkpoint: version {".".join(map(str, self.version))}')
        if self.version[0] != CHECKPOINT_VERSION[0]:
            raise CheckpointError(f'Checkpoint version {self.version} is incompatible with {CHECKPOINT_VERSION}')

        length = int(np.frombuffer(raw, dtype='<i4', count=1, offset=16)[0])
        body = 20 + length
        if length < 0 or body > len(raw) or (len(raw) - body) % 8 != 0:
            raise CheckpointError(f'Truncated or corrupt checkpoint [{filename}]')
        self.header = _decode_header(raw[20:body])
        self.buf = np.frombuffer(raw, dtype='<f8', offset=body)

        self.start = 0
        self.size = self.buf.size

    def load_module(self, module):
        """ Copy the parameter blocks into the ``state_dict`` tensors of a module, in declaration order. """
        for name, tensor in module.state_dict().items():
            num = tensor.numel()
            if self.start + num > self.size:
                raise CheckpointError(f'Checkpoint ran out of parameters while loading [{name}]')
            block = torch.from_numpy(self.buf[self.start : self.start + num].astype(np.float64))
            tensor.copy_(block.view_as(tensor))
            self.start += num
            log.debug(f'Block loaded: {name} {tuple(tensor.shape)}')

        if self.start != self.size:
            raise CheckpointError(f'Checkpoint has {self.size - self.start} unused parameters')


class CheckpointSaver:
    """ Save fitness fields to checkpoint files. """

    def __init__(self, header):
        self.header = header
        self.blocks = []

    def save_module(self, module):
        for tensor in module.state_dict().values():
            self.blocks.append(tensor.detach().cpu().numpy().astype('<f8').ravel())

    def write_file(self, filename):
        """ Atomically write the accumulated header and blocks to a checkpoint file. """
        raw = _encode_header(self.header)
        directory = os.path.dirname(os.path.abspath(filename))
        fd, tmp = tempfile.mkstemp(dir=directory, prefix='.tmp-', suffix='.ckpt')
        try:
            with os.fdopen(fd, 'wb') as fp:
                fp.write(MAGIC)
                fp.write(np.array(CHECKPOINT_VERSION, dtype='<i4').tobytes())
                fp.write(np.array([len(raw)], dtype='<i4').tobytes())
                fp.write(raw)
                for block in self.blocks:
                    fp.write(block.tobytes())
            os.replace(tmp, filename)
        except BaseException:
            if os.path.exists(tmp):
                os.remove(tmp)
            raise
        log.info(f'Checkpoint saved as {filename}')
