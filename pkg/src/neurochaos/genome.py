"""Genome sequences to normalised spectral vectors.

Each sequence is mapped base by base to numbers (C 0.25, T 0.5, G 0.75,
A 1.0), zero-padded to a common length, transformed with the DFT, and the
magnitude spectrum is rescaled to [0, 1] per sequence.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DataError, EncodingError, LengthError, ParseError
from .fourier import fft

DEFAULT_L_MAX = 31029
SARS2_VS_SARS1_L_MAX = 30129

NUCLEOTIDE_VALUES = {"C": 0.25, "T": 0.50, "G": 0.75, "A": 1.0}
AMBIGUITY_CODES = frozenset("NRYSWKMBDHV")


@dataclass(frozen=True)
class GenomeRecord:
    id: str
    sequence: str

    def __post_init__(self):
        if not self.id:
            raise DataError("record id must be non-empty")
        if not self.sequence:
            raise DataError(f"record {self.id!r} has an empty sequence")


def parse_fasta(text):
    """Parse FASTA text into records.

    The id is the first whitespace-delimited token of the header.  Wrapped
    sequence lines are joined, uppercased and stripped of whitespace.
    """
    records = []
    header = None
    chunks = []
    header_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(";"):
            continue
        if line.startswith(">"):
            if header is not None:
                records.append(_make_record(header, chunks, header_line))
            parts = line[1:].split()
            header = parts[0] if parts else ""
            header_line = lineno
            chunks = []
        else:
            if header is None:
                raise ParseError("sequence data before the first '>' header", line=lineno)
            chunks.append("".join(line.split()).upper())
    if header is not None:
        records.append(_make_record(header, chunks, header_line))
    return records


def _make_record(header, chunks, line):
    if not header:
        raise ParseError("empty record id", line=line)
    seq = "".join(chunks)
    if not seq:
        raise ParseError(f"record {header!r} has no sequence", line=line)
    return GenomeRecord(header, seq)


def read_fasta(path):
    with open(path) as fh:
        return parse_fasta(fh.read())


def encode(sequence):
    """Numeric encoding; ambiguity codes become 0.0."""
    if not sequence:
        raise EncodingError("empty sequence")
    out = np.empty(len(sequence), dtype=np.float64)
    for i, ch in enumerate(sequence.upper()):
        v = NUCLEOTIDE_VALUES.get(ch)
        if v is None:
            if ch not in AMBIGUITY_CODES:
                raise EncodingError(f"invalid nucleotide {ch!r}", position=i)
            v = 0.0
        out[i] = v
    return out


def count_ambiguous(sequence):
    return sum(1 for ch in sequence.upper() if ch in AMBIGUITY_CODES)


def dft_magnitude(signal, length):
    """``|DFT|`` of the signal zero-padded to ``length`` samples."""
    x = np.asarray(signal, dtype=np.float64)
    if x.size > length:
        raise LengthError(f"signal of length {x.size} exceeds L_max={length}")
    padded = np.zeros(length)
    padded[:x.size] = x
    return np.abs(fft(padded))


def normalize_unit_interval(values):
    """Min-max rescale to [0, 1]; a constant vector maps to zeros."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise DataError("cannot normalise an empty vector")
    lo, hi = v.min(), v.max()
    if hi == lo:
        return np.zeros_like(v)
    return (v - lo) / (hi - lo)


def _one(record, l_max):
    return normalize_unit_interval(dft_magnitude(encode(record.sequence), l_max))


def preprocess(records, l_max=DEFAULT_L_MAX, threads=1):
    """Spectral feature matrix, one row per record in input order.

    Per-record failures are collected and raised together as a
    :class:`DataError` naming the record ids.
    """
    records = list(records)
    if not records:
        raise DataError("no records to preprocess")

    def work(rec):
        try:
            return _one(rec, l_max), None
        except DataError as exc:
            return None, f"{rec.id}: {exc}"

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, records))
    else:
        results = [work(r) for r in records]
    errors = [e for _, e in results if e]
    if errors:
        raise DataError("preprocessing failed for " + "; ".join(errors))
    return np.vstack([row for row, _ in results])


def manifest(records, l_max):
    return {
        "l_max": int(l_max),
        "records": [
            {"id": r.id, "length": len(r.sequence), "ambiguous": count_ambiguous(r.sequence)}
            for r in records
        ],
    }


def write_spectral_csv(path, ids, matrix, labels=None):
    matrix = np.asarray(matrix, dtype=np.float64)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        head = ["id"] + [f"x{k}" for k in range(matrix.shape[1])]
        w.writerow(head + (["label"] if labels is not None else []))
        for i, row in enumerate(matrix.tolist()):
            tail = [str(int(labels[i]))] if labels is not None else []
            w.writerow([ids[i]] + [repr(v) for v in row] + tail)


def write_manifest(path, man):
    with open(path, "w") as fh:
        json.dump(man, fh, indent=2)
        fh.write("\n")
