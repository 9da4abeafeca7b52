"""Discrete Fourier transform for arbitrary lengths.

Powers of two use an iterative radix-2 Cooley-Tukey transform.  Other lengths
go through Bluestein's chirp-z identity, which rewrites the length-``L`` DFT
as a circular convolution evaluated with radix-2 transforms of length
``>= 2L - 1``.  Both paths are O(L log L).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


def _is_pow2(n):
    return n > 0 and n & (n - 1) == 0


@lru_cache(maxsize=16)
def _bitrev(n):
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    rev.flags.writeable = False
    return rev


@lru_cache(maxsize=16)
def _twiddles(n):
    k = np.arange(n // 2)
    w = np.exp(-2j * np.pi * k / n)
    w.flags.writeable = False
    return w


def fft_radix2(x):
    """Forward DFT of a power-of-two length sequence."""
    a = np.asarray(x, dtype=np.complex128)
    n = a.size
    if not _is_pow2(n):
        raise ValueError(f"radix-2 transform needs a power-of-two length, got {n}")
    a = a[_bitrev(n)]
    w = _twiddles(n)
    h = 1
    while h < n:
        tw = w[:: n // (2 * h)][:h]
        blocks = a.reshape(-1, 2 * h)
        even = blocks[:, :h].copy()
        odd = blocks[:, h:] * tw
        blocks[:, :h] = even + odd
        blocks[:, h:] = even - odd
        h *= 2
    return a


def _ifft_radix2(x):
    return np.conj(fft_radix2(np.conj(x))) / x.size


@lru_cache(maxsize=8)
def _chirp(n):
    # n^2 mod 2n keeps the phase argument small, so large n lose no precision
    k = np.arange(n, dtype=np.int64)
    w = np.exp(-1j * np.pi * ((k * k) % (2 * n)) / n)
    m = 1 << (2 * n - 2).bit_length()
    b = np.zeros(m, dtype=np.complex128)
    b[:n] = np.conj(w)
    b[m - n + 1:] = np.conj(w[1:][::-1])
    fb = fft_radix2(b)
    w.flags.writeable = False
    fb.flags.writeable = False
    return w, fb


def fft_bluestein(x):
    """Forward DFT of any length via the chirp-z convolution."""
    a = np.asarray(x, dtype=np.complex128)
    n = a.size
    if n == 0:
        return a.copy()
    w, fb = _chirp(n)
    padded = np.zeros(fb.size, dtype=np.complex128)
    padded[:n] = a * w
    conv = _ifft_radix2(fft_radix2(padded) * fb)
    return w * conv[:n]


def fft(x):
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 1:
        raise ValueError(f"expected a 1-D sequence, got shape {a.shape}")
    if a.size == 0:
        return a.copy()
    if _is_pow2(a.size):
        return fft_radix2(a)
    return fft_bluestein(a)


def naive_dft(x):
    """O(L^2) reference DFT."""
    a = np.asarray(x, dtype=np.complex128)
    n = a.size
    k = np.arange(n)
    phase = (np.outer(k, k) % n) * (-2j * np.pi / n) if n else np.zeros((0, 0))
    return np.exp(phase) @ a
