"""Compression-based diversity: C(x), pairwise NCD, multiset NCD, C(x) histograms.

Assignments are compressed in their canonical line form; a multiset is
encoded by sorting its lines and concatenating them, so every measure here
depends only on the multiset, never on insertion order.
"""

from __future__ import annotations

import bz2
import csv
import lzma
import warnings
import zlib
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .cnf import Assignment

NCD_DIAGNOSTIC_THRESHOLD = 1.2


class NcdWarning(UserWarning):
    pass


@dataclass(frozen=True)
class CompressorConfig:
    algorithm: str = "zlib"
    level: int = 9

    def __post_init__(self):
        if self.algorithm not in _COMPRESSORS:
            raise ValueError(f"unknown compressor {self.algorithm!r}; choose from {sorted(_COMPRESSORS)}")

    def to_dict(self) -> dict:
        return {"algorithm": self.algorithm, "level": self.level}


_COMPRESSORS = {
    "zlib": lambda data, level: zlib.compress(data, level),
    "bz2": lambda data, level: bz2.compress(data, max(1, level)),
    "lzma": lambda data, level: lzma.compress(data, preset=level),
}

DEFAULT_COMPRESSOR = CompressorConfig()


def compressed_size(data: bytes, cfg: CompressorConfig = DEFAULT_COMPRESSOR) -> int:
    return len(_COMPRESSORS[cfg.algorithm](data, cfg.level))


@lru_cache(maxsize=1 << 16)
def _line_size(line: bytes, cfg: CompressorConfig) -> int:
    return compressed_size(line, cfg)


def encode_suite(members: Sequence[Assignment]) -> bytes:
    return b"".join(sorted(a.to_bytes() for a in members))


def c_of_set(members: Sequence[Assignment], cfg: CompressorConfig = DEFAULT_COMPRESSOR) -> int:
    if not members:
        raise ValueError("c_of_set needs a nonempty multiset")
    return compressed_size(encode_suite(members), cfg)


def ncd_pair(x: Assignment, y: Assignment, cfg: CompressorConfig = DEFAULT_COMPRESSOR) -> float:
    cx = _line_size(x.to_bytes(), cfg)
    cy = _line_size(y.to_bytes(), cfg)
    cxy = c_of_set((x, y), cfg)
    return (cxy - min(cx, cy)) / max(cx, cy)


def ncd_set_diag(members: Sequence[Assignment],
                 cfg: CompressorConfig = DEFAULT_COMPRESSOR) -> tuple[float, list[str]]:
    """Multiset NCD plus diagnostic flags.

    NCD(X) = (C(X) - min_s C(s)) / max_s C(X minus one copy of s); 0 for |X| < 2.
    """
    if len(members) < 2:
        return 0.0, []
    lines = sorted(a.to_bytes() for a in members)
    c_all = compressed_size(b"".join(lines), cfg)
    c_min = None
    c_drop_max = 0
    done = set()
    for i, line in enumerate(lines):
        if line in done:
            continue
        done.add(line)
        c_single = _line_size(line, cfg)
        c_min = c_single if c_min is None else min(c_min, c_single)
        c_drop = compressed_size(b"".join(lines[:i] + lines[i + 1:]), cfg)
        c_drop_max = max(c_drop_max, c_drop)
    flags = []
    if c_drop_max == 0:
        flags.append("ncd_zero_denominator")
        return 0.0, flags
    value = (c_all - c_min) / c_drop_max
    if value > NCD_DIAGNOSTIC_THRESHOLD or value < 0:
        flags.append("ncd_out_of_range")
    return value, flags


def ncd_set(members: Sequence[Assignment], cfg: CompressorConfig = DEFAULT_COMPRESSOR) -> float:
    value, flags = ncd_set_diag(members, cfg)
    for flag in flags:
        warnings.warn(f"{flag}: ncd_set={value:.4f} over {len(members)} members", NcdWarning,
                      stacklevel=2)
    return value


def cx_values(members: Sequence[Assignment], cfg: CompressorConfig = DEFAULT_COMPRESSOR) -> list[int]:
    return [compressed_size(a.to_bytes(), cfg) for a in members]


def cx_distribution(members: Sequence[Assignment], cfg: CompressorConfig = DEFAULT_COMPRESSOR,
                    bins: int = 20) -> tuple[np.ndarray, np.ndarray]:
    """Histogram of per-member C(x) over [0, max C(x)].

    The bin count is capped at the number of distinct C(x) values, so a
    suite whose members all compress to the same size yields one bucket.
    """
    if not members:
        raise ValueError("cx_distribution needs a nonempty suite")
    if bins < 1:
        raise ValueError("bins must be >= 1")
    values = np.asarray(cx_values(members, cfg), dtype=float)
    nbins = min(bins, len(np.unique(values)))
    counts, edges = np.histogram(values, bins=nbins, range=(0.0, float(values.max())))
    return edges, counts


def write_histogram_csv(path: str | Path, edges: np.ndarray, counts: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bin_start", "bin_end", "count"])
        for lo, hi, c in zip(edges[:-1], edges[1:], counts):
            w.writerow([repr(float(lo)), repr(float(hi)), int(c)])
