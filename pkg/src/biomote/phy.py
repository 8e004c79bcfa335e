"""Baseband Monte Carlo of the mote's modulation schemes over an AWGN body
channel, chained with the FEC codecs and the inductive link budget.

Conventions
-----------
Symbols are real baseband amplitudes, one bit per symbol.  BPSK maps
0 -> -A, 1 -> +A; ASK is on-off keying 0 -> 0, 1 -> 2A.  The channel's
``snr_db`` argument is the ratio of the stream's average symbol energy to
the per-sample noise variance, so a stream's own transmit power sets its
noise scale: BPSK at snr gamma sees bit error rate Q(sqrt(gamma)) and ASK
Q(sqrt(gamma/2)), reproducing the classic 3 dB gap at equal average power.

For energy-per-information-bit accounting, gamma = 2 (Eb/N0) R with R the
code rate (uncoded R = 1): `ebn0_to_channel_snr` converts.  Distance
curves take the link SNR from the budget (signal over total noise in the
Nyquist bandwidth of the symbol rate), which maps to gamma = SNR + 3.01 dB
and is common to all schemes at a given range because the radiated power,
not the per-information-bit energy, is what the link fixes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from biomote import fec
from biomote.link import LinkConfig, NoiseModel, link_budget

__all__ = [
    "Modulation", "CodeScheme", "PhyConfig", "BerEstimate",
    "modulate", "awgn", "demodulate", "ber_theory",
    "ebn0_to_channel_snr", "ber_monte_carlo", "ber_vs_distance",
]


class Modulation(str, Enum):
    ASK = "ask"
    BPSK = "bpsk"


class CodeScheme(str, Enum):
    NONE = "none"
    HAMMING_15_11 = "hamming15_11"
    RS_31_26 = "rs31_26"

    @property
    def rate(self) -> float:
        if self is CodeScheme.NONE:
            return 1.0
        if self is CodeScheme.HAMMING_15_11:
            return fec.hamming_code_rate()
        return fec.rs_code_rate()


@dataclass(frozen=True)
class PhyConfig:
    """Monte Carlo stopping policy: run at least ``trials`` information bits
    and at least ``min_errors`` bit errors, capped at ``max_bits``."""

    modulation: Modulation = Modulation.BPSK
    code: CodeScheme = CodeScheme.NONE
    trials: int = 100_000
    min_errors: int = 100
    max_bits: int = 10_000_000
    seed: int = 0xB10B10
    amplitude: float = 1.0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.max_bits < self.trials:
            raise ValueError("max_bits must be >= trials")


@dataclass(frozen=True)
class BerEstimate:
    ber: float
    bits_simulated: int
    errors: int
    low_confidence: bool      # budget ran out before min_errors was reached


def modulate(bits, scheme: Modulation, amplitude: float = 1.0) -> np.ndarray:
    """Map bits to symbol amplitudes (BPSK antipodal, ASK on-off)."""
    bits = np.asarray(bits)
    if bits.size == 0:
        raise ValueError("bit sequence must be non-empty")
    a = amplitude
    if scheme is Modulation.BPSK:
        return np.where(bits > 0, a, -a).astype(float)
    return np.where(bits > 0, 2.0 * a, 0.0)


def awgn(symbols, snr_db: float, rng: np.random.Generator) -> np.ndarray:
    """Add white Gaussian noise with variance = mean symbol energy / snr.

    Deterministic for a given generator state; infinite snr returns the
    input unchanged.
    """
    symbols = np.asarray(symbols, dtype=float)
    if not math.isfinite(snr_db):
        if snr_db > 0:
            return symbols.copy()
        raise ValueError("snr_db must be finite or +inf")
    es = float(np.mean(symbols ** 2))
    sigma = math.sqrt(es / 10.0 ** (snr_db / 10.0))
    return symbols + rng.normal(0.0, sigma, size=symbols.shape)


def demodulate(symbols, scheme: Modulation, amplitude: float = 1.0) -> np.ndarray:
    """Threshold receiver: BPSK slices at 0, ASK at the midpoint amplitude;
    ties decide 1."""
    symbols = np.asarray(symbols, dtype=float)
    thresh = 0.0 if scheme is Modulation.BPSK else amplitude
    return (symbols >= thresh).astype(np.uint8)


def ber_theory(scheme: Modulation, ebn0_db: float) -> float:
    """Closed-form AWGN bit error rate at a given Eb/N0.

    BPSK: Q(sqrt(2 Eb/N0)); coherent on-off ASK at equal average power:
    Q(sqrt(Eb/N0)).
    """
    ebn0 = 10.0 ** (ebn0_db / 10.0)
    arg = 2.0 * ebn0 if scheme is Modulation.BPSK else ebn0
    return 0.5 * math.erfc(math.sqrt(arg / 2.0))


def ebn0_to_channel_snr(ebn0_db: float, code: CodeScheme = CodeScheme.NONE) -> float:
    """Channel snr_db carrying the stated energy per information bit."""
    return ebn0_db + 10.0 * math.log10(2.0 * code.rate)


# ---------------------------------------------------------------------------
# Monte Carlo engine
# ---------------------------------------------------------------------------

_BLOCK_INFO_BITS = {CodeScheme.NONE: 1000, CodeScheme.HAMMING_15_11: 11,
                    CodeScheme.RS_31_26: 130}


def _run_blocks(cfg: PhyConfig, snr_db: float, n_blocks: int,
                rng: np.random.Generator) -> tuple[int, int]:
    """Simulate ``n_blocks`` codewords; returns (info bit errors, info bits)."""
    k = _BLOCK_INFO_BITS[cfg.code]
    info = rng.integers(0, 2, size=(n_blocks, k)).astype(np.uint8)
    if cfg.code is CodeScheme.NONE:
        coded = info
    elif cfg.code is CodeScheme.HAMMING_15_11:
        coded = fec.hamming_encode(info)
    else:
        coded = fec.symbols_to_bits(fec.rs_encode(fec.bits_to_symbols(info)))
    tx = modulate(coded.reshape(-1), cfg.modulation, cfg.amplitude)
    rx = awgn(tx, snr_db, rng)
    hard = demodulate(rx, cfg.modulation, cfg.amplitude).reshape(coded.shape)
    if cfg.code is CodeScheme.NONE:
        decoded = hard
    elif cfg.code is CodeScheme.HAMMING_15_11:
        decoded, _, _ = fec.hamming_decode(hard)
    else:
        decoded_syms, _, _ = fec.rs_decode(fec.bits_to_symbols(hard))
        decoded = fec.symbols_to_bits(decoded_syms)
    errors = int(np.sum(decoded.astype(np.uint8) ^ info))
    return errors, n_blocks * k


def ber_monte_carlo(cfg: PhyConfig, snr_db: float) -> BerEstimate:
    """Estimate the information-bit error rate at a channel snr.

    Reproducible for a given (cfg.seed, snr_db); the generator stream is
    derived from both so points of a sweep are independent.
    """
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=(cfg.seed, _snr_key(snr_db))))
    k = _BLOCK_INFO_BITS[cfg.code]
    errors = bits = 0
    while True:
        need_bits = bits < cfg.trials
        need_errs = errors < cfg.min_errors
        if not (need_bits or need_errs) or bits >= cfg.max_bits:
            break
        chunk = max((cfg.trials if need_bits else cfg.max_bits // 10) // k, 1)
        chunk = min(chunk, max((cfg.max_bits - bits) // k, 1), 200_000)
        e, b = _run_blocks(cfg, snr_db, chunk, rng)
        errors += e
        bits += b
    return BerEstimate(ber=errors / bits, bits_simulated=bits, errors=errors,
                       low_confidence=errors < cfg.min_errors)


def _snr_key(snr_db: float) -> int:
    return int(round(snr_db * 1e6)) & 0xFFFFFFFFFFFF


LINK_SNR_TO_CHANNEL_DB = 10.0 * math.log10(2.0)


def ber_vs_distance(link: LinkConfig, noise: NoiseModel, cfg: PhyConfig,
                    distances) -> list[tuple[float, float, int]]:
    """BER curve over reader-mote separations.

    Per distance the budget fixes the symbol SNR; every scheme sees the
    same channel (same radiated power).  Returns (distance, ber, bits).
    """
    distances = list(distances)
    if any(b <= a for a, b in zip(distances, distances[1:])):
        raise ValueError("distances must be strictly ascending")
    out = []
    for i, d in enumerate(distances):
        budget = link_budget(replace(link, separation=d), noise)
        snr = budget.snr_db + LINK_SNR_TO_CHANNEL_DB
        est = ber_monte_carlo(replace(cfg, seed=_sub_seed(cfg.seed, i)), snr)
        out.append((d, est.ber, est.bits_simulated))
    return out


def _sub_seed(master: int, index: int) -> int:
    """Deterministic per-point seed: results do not depend on how points are
    split across workers."""
    ss = np.random.SeedSequence(entropy=(master, index))
    return int(ss.generate_state(1, np.uint64)[0])
