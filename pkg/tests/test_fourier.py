import numpy as np
import pytest

from neurochaos.fourier import fft, fft_bluestein, fft_radix2, naive_dft


def naive_loop_dft(x):
    """Textbook double loop, independent of the vectorised oracle."""
    n = len(x)
    out = []
    for k in range(n):
        s = 0j
        for t in range(n):
            s += x[t] * np.exp(-2j * np.pi * ((k * t) % n) / n)
        out.append(s)
    return np.array(out)


def rel_err(a, b):
    return np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300)


@pytest.mark.parametrize("n", range(1, 65))
def test_matches_naive_dft(n):
    rng = np.random.default_rng(n)
    x = rng.random(n) + 1j * rng.random(n)
    assert rel_err(fft(x), naive_loop_dft(x)) < 1e-9
    assert rel_err(naive_dft(x), naive_loop_dft(x)) < 1e-12


def test_bluestein_on_powers_of_two():
    x = np.random.default_rng(0).random(128)
    assert rel_err(fft_bluestein(x), fft_radix2(x)) < 1e-12


def test_parseval_at_longest_genome_length():
    n = 31029
    x = np.random.default_rng(1).random(n)
    spec = fft(x)
    lhs = np.sum(np.abs(spec) ** 2)
    rhs = n * np.sum(x ** 2)
    assert abs(lhs - rhs) / rhs < 1e-9


def test_dc_bin_large_prime():
    x = np.random.default_rng(2).random(30011)
    assert fft(x)[0] == pytest.approx(x.sum(), rel=1e-12)


def test_radix2_rejects_other_lengths():
    with pytest.raises(ValueError):
        fft_radix2(np.ones(6))


def test_empty_and_shape():
    assert fft([]).size == 0
    with pytest.raises(ValueError):
        fft(np.ones((2, 2)))
