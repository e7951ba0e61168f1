"""JSON checkpoints holding the architecture and the flat parameter vector."""
import base64
import json
import os

import numpy as np

from dockvision import exceptions
from dockvision.detector.network import NetArch, TinyNet
from dockvision.types import SCHEMA_VERSION
from dockvision.utils.files import write_json


def save_checkpoint(path: str, net: TinyNet):
    params = np.ascontiguousarray(net.params, dtype='<f8')
    write_json(
        path,
        {
            'schema_version': SCHEMA_VERSION,
            'arch': net.arch.model_dump(),
            'G': net.arch.G,
            'B': net.arch.B,
            'dtype': net.dtype.name,
            'size': net.size,
            # float64 little endian, base64
            'params': base64.b64encode(params.tobytes()).decode('ascii'),
        },
    )


def load_checkpoint(path: str) -> TinyNet:
    if not os.path.exists(path):
        raise exceptions.IoFailure(f"Can't find the checkpoint {path}.")
    try:
        with open(path, encoding='utf-8') as f:
            blob = json.load(f)
        if blob.get('schema_version') != SCHEMA_VERSION:
            raise exceptions.IoFailure(
                f"Checkpoint {path} has schema_version={blob.get('schema_version')}, "
                f"expected {SCHEMA_VERSION}."
            )
        params = np.frombuffer(base64.b64decode(blob['params']), dtype='<f8')
        return TinyNet(NetArch(**blob['arch']), params=params, dtype=blob['dtype'])
    except (KeyError, ValueError, TypeError) as e:
        raise exceptions.IoFailure(f"Malformed checkpoint {path}: {e}") from None
