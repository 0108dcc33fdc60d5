"""Binary container for a :class:`SelfIndex`.

Layout (all integers little-endian)::

    header   magic "CSAI" | u32 version | u64 n | u32 sigma | u64 r
             | 16-byte scheme tag | u64 seed | u32 section count
    table    per section: 16-byte name | u64 offset | u64 length
    payload  sections, in table order

Integer arrays are bit-packed at the width of ``max - min`` with the minimum
stored alongside. Structures derived from stored arrays (rank/select
directories, LF bases, Phi samples) are rebuilt on load, so saving a loaded
index reproduces the file byte for byte. Unknown sections are ignored.
"""

import json
import struct

import numpy as np

from ._bits import bit_width, pack_uint, unpack_uint
from .index import SCHEMES, SelfIndex
from .lzend_sa import LzEndSaStore
from .rank_select import BitVectorRS, SparseSet
from .rlzsa import LegacyRlzsaStore, RlzsaStore

MAGIC = b"CSAI"
VERSION = 1
_HEADER = struct.Struct("<4sIQIQ16sQI")
_ENTRY = struct.Struct("<16sQQ")
_ARRAY = struct.Struct("<BqQ")  # width, minimum, count


class FormatError(ValueError):
    pass


def encode_array(values, width=None):
    values = np.asarray(values, dtype=np.int64).reshape(-1)
    lo = int(values.min()) if values.size else 0
    shifted = (values - lo).astype(np.uint64)
    if width is None:
        width = bit_width(int(shifted.max())) if values.size else 1
    body = pack_uint(shifted, width) if values.size else b""
    return _ARRAY.pack(width, lo, values.size) + body


def decode_array(buf):
    width, lo, count = _ARRAY.unpack_from(buf, 0)
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    return unpack_uint(buf[_ARRAY.size :], count, width) + lo


def _json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()


def _store_sections(store):
    if store is None:
        return {"kind": None}, {}
    if isinstance(store, LzEndSaStore):
        meta = {"kind": "lzend", "n": store.n, "h": store.h}
        arrays = {"lz.src": encode_array(store.src), "lz.end": encode_array(store.end),
                  "lz.ext": encode_array(store.ext, 64)}
        if store.samples is not None:
            arrays["lz.samples"] = encode_array(store.samples)
        else:
            arrays["lz.anchor_pos"] = encode_array(store.anchor_pos)
            arrays["lz.anchor_val"] = encode_array(store.anchor_val)
        return meta, arrays
    if isinstance(store, RlzsaStore):
        meta = {"kind": "rlzsa", "n": store.n, "a": store.a, "a1": store.a1}
        arrays = {
            "rz.R": encode_array(store.R),
            "rz.PT": encode_array(store.PT.to_bools().astype(np.int64), 1),
            "rz.LP": encode_array(store.LP),
            "rz.SR": encode_array(store.SR),
            "rz.CPL": encode_array(store.CPL - 1, 16) if store.CPL.size else encode_array(store.CPL),
            "rz.SCP": encode_array(store.SCP.to_array()),
            "rz.V": encode_array(store.V),
        }
        return meta, arrays
    if isinstance(store, LegacyRlzsaStore):
        meta = {"kind": "rlzsa-legacy", "n": store.n, "a": store.a}
        arrays = {"rl.R": encode_array(store.R), "rl.S": encode_array(store.S),
                  "rl.PL": encode_array(store.PL), "rl.PS": encode_array(store.PS)}
        return meta, arrays
    raise TypeError(f"cannot serialize store of type {type(store).__name__}")


def _load_store(meta, sec):
    kind = meta.get("kind")
    if kind is None:
        return None
    if kind == "lzend":
        st = LzEndSaStore(src=sec["lz.src"], end=sec["lz.end"], ext=sec["lz.ext"],
                          samples=sec.get("lz.samples"), n=meta["n"], h=meta["h"])
        if st.samples is None:
            st.anchor_pos, st.anchor_val = sec["lz.anchor_pos"], sec["lz.anchor_val"]
        return st
    if kind == "rlzsa":
        n = meta["n"]
        cpl = sec["rz.CPL"] + 1 if sec["rz.CPL"].size else sec["rz.CPL"]
        return RlzsaStore(R=sec["rz.R"], PT=BitVectorRS(sec["rz.PT"].astype(bool)), LP=sec["rz.LP"],
                          SR=sec["rz.SR"], CPL=cpl, SCP=SparseSet(sec["rz.SCP"], n), V=sec["rz.V"],
                          a=meta["a"], n=n, a1=meta["a1"])
    if kind == "rlzsa-legacy":
        return LegacyRlzsaStore(R=sec["rl.R"], S=sec["rl.S"], PL=sec["rl.PL"], PS=sec["rl.PS"],
                                a=meta["a"], n=meta["n"])
    raise FormatError(f"unknown store kind {kind!r}")


def dumps(ix: SelfIndex) -> bytes:
    meta, store_arrays = _store_sections(ix.store)
    sections = {
        "params": _json(ix.params),
        "meta": _json({"byte_mode": ix.byte_mode, "store": meta}),
        "alphabet": encode_array(ix.alphabet),
        "run_starts": encode_array(ix.run_starts),
        "run_heads": encode_array(ix.run_heads),
        "sa_run_start": encode_array(ix.sa_at_run_start),
        "sa_run_end": encode_array(ix.sa_at_run_end),
    }
    sections.update(store_arrays)
    names = list(sections)
    offset = _HEADER.size + _ENTRY.size * len(names)
    table = []
    for name in names:
        if len(name.encode()) > 16:
            raise FormatError(f"section name too long: {name}")
        table.append(_ENTRY.pack(name.encode(), offset, len(sections[name])))
        offset += len(sections[name])
    header = _HEADER.pack(MAGIC, VERSION, ix.n, ix.sigma, ix.r, ix.scheme.encode(),
                          int(ix.params.get("seed", 0)), len(names))
    return b"".join([header, *table, *(sections[n] for n in names)])


def read_header(buf):
    if len(buf) < _HEADER.size:
        raise FormatError("file too short")
    magic, version, n, sigma, r, tag, seed, count = _HEADER.unpack_from(buf, 0)
    if magic != MAGIC:
        raise FormatError("not an index file (bad magic)")
    if version != VERSION:
        raise FormatError(f"unsupported format version {version}")
    table = {}
    for k in range(count):
        name, off, length = _ENTRY.unpack_from(buf, _HEADER.size + k * _ENTRY.size)
        if off + length > len(buf):
            raise FormatError(f"section {name!r} out of bounds")
        table[name.rstrip(b"\0").decode()] = (off, length)
    return {"version": version, "n": n, "sigma": sigma, "r": r, "scheme": tag.rstrip(b"\0").decode(),
            "seed": seed, "sections": table}


def loads(buf, scheme=None) -> SelfIndex:
    """Index from container bytes; ``scheme`` (if given) must match the stored tag."""
    buf = bytes(buf)
    head = read_header(buf)
    if head["scheme"] not in SCHEMES:
        raise FormatError(f"unknown scheme tag {head['scheme']!r}")
    if scheme is not None and scheme != head["scheme"]:
        raise FormatError(f"index was built with scheme {head['scheme']!r}, not {scheme!r}")
    raw = {name: buf[off : off + length] for name, (off, length) in head["sections"].items()}
    params = json.loads(raw["params"])
    meta = json.loads(raw["meta"])
    arrays = {name: decode_array(b) for name, b in raw.items() if name not in ("params", "meta")}
    alphabet = arrays["alphabet"].astype(np.uint8 if meta["byte_mode"] else np.int64)
    return SelfIndex(
        scheme=head["scheme"], n=head["n"], alphabet=alphabet, byte_mode=meta["byte_mode"],
        run_starts=arrays["run_starts"], run_heads=arrays["run_heads"],
        sa_at_run_start=arrays["sa_run_start"], sa_at_run_end=arrays["sa_run_end"],
        store=_load_store(meta["store"], arrays), params=params,
    )


def save(ix, path):
    data = dumps(ix)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


def load(path, scheme=None):
    with open(path, "rb") as fh:
        return loads(fh.read(), scheme)
