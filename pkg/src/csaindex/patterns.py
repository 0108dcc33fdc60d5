"""Pattern sets in two occurrence regimes, and their line-oriented file format.

``medium`` keeps random substrings of length ``m`` occurring between ``m/4``
and ``4m`` times. ``frequent`` wants at least ``100 m`` occurrences and
shortens ``m`` when random draws at the current length keep missing.
"""

import logging
import re

import numpy as np

from .index import build_index

log = logging.getLogger(__name__)

REGIMES = ("medium", "frequent")
FREQUENT_FACTOR = 100
PROBE_DRAWS = 200

_PRINTABLE = set(range(0x21, 0x7F)) - {0x5C}


def escape(pattern: bytes) -> str:
    return "".join(chr(b) if b in _PRINTABLE else f"\\x{b:02x}" for b in pattern)


def unescape(line: str) -> bytes:
    out = bytearray()
    i = 0
    while i < len(line):
        if line[i] == "\\" and line[i + 1 : i + 2] == "x":
            out.append(int(line[i + 2 : i + 4], 16))
            i += 4
        else:
            out.append(ord(line[i]))
            i += 1
    return bytes(out)


def _accepts(regime, occ, m):
    if regime == "medium":
        return m / 4 <= occ <= 4 * m
    return occ >= FREQUENT_FACTOR * m


def generate(text, count, length, regime="medium", seed=0, index=None, max_draws=None):
    """Draw ``count`` substrings of ``text`` meeting the regime's occurrence target.

    Returns ``(patterns, m)`` where ``m`` is the length finally used. Fewer
    than ``count`` patterns come back, with a warning, if the draw budget
    runs out.
    """
    text = bytes(text)
    if regime not in REGIMES:
        raise ValueError(f"regime must be one of {REGIMES}")
    if not 1 <= length <= len(text):
        raise ValueError("pattern length must be in [1, n]")
    if index is None:
        index = build_index(text, "phi")
    rng = np.random.default_rng(seed)
    max_draws = max_draws or max(50 * count, 2000)
    m = length
    while True:
        patterns = []
        draws = 0
        while len(patterns) < count and draws < max_draws:
            draws += 1
            i = int(rng.integers(0, len(text) - m + 1))
            p = text[i : i + m]
            if _accepts(regime, index.count(p), m):
                patterns.append(p)
            if draws == PROBE_DRAWS and not patterns and regime == "frequent" and m > 1:
                break
        if patterns or regime != "frequent" or m == 1:
            break
        m -= 1
    if len(patterns) < count:
        log.warning("only %d of %d %s patterns of length %d found after %d draws",
                    len(patterns), count, regime, m, draws)
    return patterns, m


def write_patterns(path, patterns, m, seed, regime=None):
    with open(path, "w", encoding="ascii") as fh:
        extra = f" regime={regime}" if regime else ""
        fh.write(f"# count={len(patterns)} length={m} seed={seed}{extra}\n")
        for p in patterns:
            fh.write(escape(p) + "\n")


_HEAD = re.compile(r"#\s*(.*)")


def read_patterns(path):
    """``(patterns, header)``; ``header`` maps the ``key=value`` pairs of the first line."""
    with open(path, encoding="ascii") as fh:
        lines = fh.read().split("\n")
    header = {}
    if lines and lines[0].startswith("#"):
        for item in _HEAD.match(lines[0]).group(1).split():
            k, _, v = item.partition("=")
            header[k] = v
        lines = lines[1:]
    patterns = [unescape(line) for line in lines if line]
    return patterns, header
