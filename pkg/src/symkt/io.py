"""Tensor literal file format and deterministic report serialization.

Tensor literals are JSON documents::

    {"dim": n, "degree": p,
     "entries": [{"index": [i1, ..., ip], "value": v}, ...]}

with 1-based, non-decreasing index tuples; omitted indices are zero.
Round-trips are bit-exact for finite floats (shortest-repr JSON floats).
"""

import json

from .errors import ConfigError
from .multiindex import index_position, multi_indices
from .symtensor import SymTensor

__all__ = ["tensor_to_dict", "tensor_from_dict", "dump_tensor", "load_tensor",
           "dumps_report"]


def tensor_to_dict(K):
    entries = []
    vals = K.comps
    for k, I in enumerate(multi_indices(K.dim, K.degree)):
        v = float(vals[k])
        if v != 0.0:
            entries.append({"index": [i + 1 for i in I], "value": v})
    return {"dim": K.dim, "degree": K.degree, "entries": entries}


def tensor_from_dict(doc):
    try:
        n = int(doc["dim"])
        p = int(doc["degree"])
        entries = doc.get("entries", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed tensor literal: {exc}") from exc
    if n < 1 or p < 0:
        raise ConfigError("tensor literal needs dim >= 1 and degree >= 0")
    pos = index_position(n, p)
    comps = [0.0] * len(pos)
    for e in entries:
        idx = tuple(int(i) - 1 for i in e["index"])
        if len(idx) != p:
            raise ConfigError(f"index {e['index']} has wrong length")
        if list(idx) != sorted(idx):
            raise ConfigError(f"index {e['index']} is not sorted")
        if any(i < 0 or i >= n for i in idx):
            raise ConfigError(f"index {e['index']} out of range for dim {n}")
        comps[pos[idx]] = float(e["value"])
    return SymTensor(n, p, comps)


def dump_tensor(K, path):
    with open(path, "w") as fh:
        json.dump(tensor_to_dict(K), fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_tensor(path):
    with open(path) as fh:
        return tensor_from_dict(json.load(fh))


def dumps_report(doc):
    """Canonical JSON bytes for a report: sorted keys, fixed separators."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
