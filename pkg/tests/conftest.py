"""Shared fixtures and high-precision oracle helpers."""

import mpmath
import numpy as np
import pytest

from wiener.l1z import L1ZSeq

mpmath.mp.prec = 128


def mpc(c: complex) -> mpmath.mpc:
    return mpmath.mpc(c.real, c.imag)


def mp_abs_sum(values) -> mpmath.mpf:
    """128-bit sum of moduli."""
    return mpmath.fsum(abs(mpc(complex(v))) for v in values)


def mp_seq_conv(a: dict, b: dict) -> dict:
    """Exact (128-bit) convolution of two finite coefficient maps."""
    out = {}
    for i, ca in a.items():
        for j, cb in b.items():
            out[i + j] = out.get(i + j, mpmath.mpc(0)) + mpc(complex(ca)) * mpc(
                complex(cb)
            )
    return out


def mp_seq_norm(coeffs: dict) -> mpmath.mpf:
    return mpmath.fsum(abs(v) if isinstance(v, mpmath.mpc) else abs(mpc(complex(v)))
                       for v in coeffs.values())


def mp_residual(f: L1ZSeq, w: L1ZSeq) -> mpmath.mpf:
    """128-bit ||unit - f * w||_1 over the finite parts."""
    prod = mp_seq_conv(f.coeffs, w.coeffs)
    prod[0] = prod.get(0, mpmath.mpc(0)) - 1
    return mp_seq_norm(prod)


def random_seq(rng: np.random.Generator, nmax: int = 8, scale: float = 1.0) -> L1ZSeq:
    n = int(rng.integers(1, nmax + 1))
    idx = rng.choice(np.arange(-10, 11), size=n, replace=False)
    coeffs = {
        int(k): complex(rng.normal(0, scale), rng.normal(0, scale)) for k in idx
    }
    return L1ZSeq(coeffs)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
