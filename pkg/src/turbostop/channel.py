"""BPSK over AWGN: modulation, noise, and channel LLRs.

Sign convention used throughout the library: bit 0 maps to symbol +1, so a
positive LLR says "bit 0 is more likely".
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelParams:
    """Operating point of the BPSK/AWGN link.

    sigma is the noise standard deviation per real dimension for unit-energy
    symbols; lc = 2/sigma**2 is the channel reliability that scales received
    values into LLRs.
    """

    ebn0_db: float
    code_rate: float
    sigma: float
    lc: float


def derive_params(ebn0_db, code_rate):
    """Noise level and reliability for an Eb/N0 (dB) at a given code rate.

    sigma**2 = 1 / (2 * rate * 10**(ebn0_db/10)) for unit-energy BPSK.
    """
    if not 0.0 < code_rate <= 1.0:
        raise ValueError("code_rate must lie in (0, 1]")
    sigma2 = 1.0 / (2.0 * code_rate * 10.0 ** (ebn0_db / 10.0))
    sigma = math.sqrt(sigma2)
    return ChannelParams(ebn0_db=float(ebn0_db), code_rate=float(code_rate),
                         sigma=sigma, lc=2.0 / sigma2)


def modulate(bits):
    """Map bits to BPSK symbols: 0 -> +1.0, 1 -> -1.0."""
    bits = np.asarray(bits)
    return 1.0 - 2.0 * bits.astype(np.float64)


def add_noise(symbols, sigma, rng):
    """Add i.i.d. Gaussian(0, sigma**2) noise from the caller's generator.

    ``rng`` is a numpy Generator; its normal() draws use the Ziggurat method,
    so a fixed seed gives a reproducible noise stream.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    symbols = np.asarray(symbols, dtype=np.float64)
    return symbols + rng.normal(0.0, sigma, size=symbols.shape)


def to_channel_llr(received, lc):
    """Received values to LLRs: llr = lc * y (positive favours bit 0)."""
    if lc <= 0:
        raise ValueError("lc must be positive")
    return lc * np.asarray(received, dtype=np.float64)
