import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def tent(x, b):
    """Scalar skew-tent map, written independently of the package."""
    return x / b if x < b else (1.0 - x) / (1.0 - b)


def brute_force_firing_time(stimulus, q, b, eps, max_iters):
    """First t with |A(t) - stimulus| < eps by plain iteration, or -1."""
    a = q
    for t in range(max_iters + 1):
        if abs(a - stimulus) < eps:
            return t
        a = tent(a, b)
    return -1


def write_two_family_fasta(directory, seed=1, per_family=10, length=1024):
    """Two FASTA files whose spectra differ by construction.

    Family 0 repeats a random 4-mer, family 1 a random 8-mer whose first
    harmonic carries at least a quarter of the DC magnitude.  At a length
    divisible by 8, family 0 has exactly zero magnitude at odd multiples of
    ``length / 8`` while family 1 does not.  Each record gets a random
    cyclic phase, which changes no magnitude.
    """
    values = {"C": 0.25, "T": 0.5, "G": 0.75, "A": 1.0}
    rng = np.random.default_rng(seed)

    def first_harmonic_ratio(motif):
        v = np.array([values[c] for c in motif])
        k = np.arange(v.size)
        return abs(np.sum(v * np.exp(-2j * np.pi * k / v.size))) / v.sum()

    paths = {}
    for label, period in enumerate((4, 8)):
        records = []
        while len(records) < per_family:
            motif = "".join(rng.choice(list("ACGT"), period))
            if len(set(motif)) < 2:
                continue
            if period == 8 and first_harmonic_ratio(motif) < 0.25:
                continue
            seq = motif * (length // period + 1)
            shift = int(rng.integers(period))
            records.append(seq[shift:shift + length])
        path = directory / f"family{label}.fa"
        with open(path, "w") as fh:
            for i, s in enumerate(records):
                fh.write(f">fam{label}_{i} synthetic\n")
                for k in range(0, len(s), 70):
                    fh.write(s[k:k + 70] + "\n")
        paths[str(label)] = str(path)
    return paths


@pytest.fixture
def two_family_fasta(tmp_path):
    return write_two_family_fasta(tmp_path)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
