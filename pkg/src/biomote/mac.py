"""Multi-mote medium access simulation.

Three schemes sized for a transmit-only micro implant:

* binary-tree selection — only the closed-form iteration count, the
  command-heavy protocol itself is not simulated;
* framed slotted ALOHA — each unread mote draws one slot per frame,
  singleton slots succeed and those motes go quiet, collided motes retry
  next frame, no acknowledgment airtime, failures are collisions only;
* synchronous CDMA — chip-level spreading with either mutually orthogonal
  Walsh rows (distinct assignment) or per-mote random +-1 codes; the
  receiver despreads the summed chip stream and a mote counts as read only
  if its whole packet demodulates error-free (multi-access interference is
  the only impairment).

Scenario sweeps read a whole deployment within a time window.  The window
is carved into frames of ``frame_slots``; by default scenario runs use a
single frame spanning the window (each mote transmits its one packet at a
random offset).  A deployment counts as fully read when the mean shortfall
is at most ``full_read_shortfall`` motes (about one collision pair).

Every routine is deterministic in (seed, parameters): per-trial generator
streams derive from a seed sequence keyed by (seed, point, trial), so
results are independent of any chunking of trials across workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MacScenario", "DeploymentGeometry", "ZoneShape",
    "binary_tree_iterations", "aloha_simulate", "aloha_mean_successes",
    "scenario1_sweep", "scenario2_sweep", "max_fully_read",
    "global_recommendation", "walsh_codes", "cdma_simulate",
    "compare_schemes", "FULL_READ_SHORTFALL",
]

#: mean unread motes tolerated by the "fully read" criterion (one collision
#: pair on average)
FULL_READ_SHORTFALL = 2.25


@dataclass(frozen=True)
class MacScenario:
    """One multi-access run: deployment size, radio parameters, window."""

    n_motes: int
    rate: float                 # [bit/s]
    packet_bytes: int
    read_time: float            # [s]
    frame_slots: int | None = None   # None: one frame spanning the window
    trials: int = 100
    seed: int = 0xB10B10

    def __post_init__(self):
        if self.n_motes < 0:
            raise ValueError("n_motes must be non-negative")
        if self.rate <= 0 or self.packet_bytes <= 0 or self.read_time <= 0:
            raise ValueError("rate, packet_bytes and read_time must be positive")
        if self.frame_slots is not None and self.frame_slots < 1:
            raise ValueError("frame_slots must be >= 1")

    @property
    def slot_duration(self) -> float:
        return self.packet_bytes * 8 / self.rate

    @property
    def slots_available(self) -> int:
        return int(self.read_time / self.slot_duration)

    @property
    def effective_frame_slots(self) -> int:
        return self.slots_available if self.frame_slots is None else self.frame_slots


class ZoneShape:
    HEMISPHERE = "hemisphere"
    SPHERE = "sphere"


@dataclass(frozen=True)
class DeploymentGeometry:
    """Body volume and the reader's interrogation zone."""

    body_volume_cm3: float = 6.643e5
    zone_radius_cm: float = 5.0
    zone_shape: str = ZoneShape.HEMISPHERE

    @property
    def zone_volume_cm3(self) -> float:
        r3 = self.zone_radius_cm ** 3
        if self.zone_shape == ZoneShape.HEMISPHERE:
            return 2.0 / 3.0 * math.pi * r3
        if self.zone_shape == ZoneShape.SPHERE:
            return 4.0 / 3.0 * math.pi * r3
        raise ValueError(f"unknown zone shape {self.zone_shape!r}")

    @property
    def zones(self) -> float:
        return self.body_volume_cm3 / self.zone_volume_cm3


def binary_tree_iterations(n: int) -> float:
    """Average reader iterations to single out one mote of n: log2(n) + 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.log(n) / math.log(2) + 1.0


# ---------------------------------------------------------------------------
# slotted ALOHA
# ---------------------------------------------------------------------------

def _trial_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=(seed, *key)))


def aloha_simulate(sc: MacScenario, rng: np.random.Generator) -> tuple[int, int]:
    """One framed-ALOHA run; returns (motes read, slots consumed).

    A trailing partial frame is truncated: draws landing past the window
    are lost with the window.
    """
    frame = sc.effective_frame_slots
    budget = sc.slots_available
    remaining = sc.n_motes
    successes = 0
    used = 0
    while remaining > 0 and used < budget:
        span = min(frame, budget - used)
        picks = rng.integers(0, frame, size=remaining)
        picks = picks[picks < span]
        if picks.size:
            _, counts = np.unique(picks, return_counts=True)
            s = int(np.sum(counts == 1))
            successes += s
            remaining -= s
        used += span
    return successes, used


def aloha_mean_successes(sc: MacScenario) -> float:
    """Mean motes read over ``sc.trials`` independent runs."""
    if sc.n_motes == 0:
        return 0.0
    total = 0
    for t in range(sc.trials):
        total += aloha_simulate(sc, _trial_rng(sc.seed, sc.n_motes, t))[0]
    return total / sc.trials


def max_fully_read(rate: float, read_time: float, packet_bytes: int,
                   trials: int = 100, seed: int = 0xB10B10,
                   step: int = 10,
                   shortfall: float = FULL_READ_SHORTFALL,
                   frame_slots: int | None = None) -> int:
    """Largest deployment, scanned in steps of ``step``, whose mean read
    count stays within ``shortfall`` of everyone."""
    best = 0
    n = step
    while True:
        sc = MacScenario(n_motes=n, rate=rate, packet_bytes=packet_bytes,
                         read_time=read_time, frame_slots=frame_slots,
                         trials=trials, seed=seed)
        if sc.slots_available < 1 or aloha_mean_successes(sc) < n - shortfall:
            return best
        best = n
        n += step


def scenario1_sweep(rates, read_times, packet_bytes: int, trials: int = 100,
                    seed: int = 0xB10B10) -> list[dict]:
    """Global-deployment question: per (rate, read time), the most motes a
    zone can hold with everyone read in the window."""
    rates = list(rates)
    read_times = list(read_times)
    if not rates or not read_times:
        raise ValueError("rates and read_times must be non-empty")
    rows = []
    for rate in rates:
        for rt in read_times:
            n = max_fully_read(rate, rt, packet_bytes, trials, seed)
            rows.append(dict(rate_bps=rate, read_time_s=rt,
                             packet_bytes=packet_bytes, max_motes=n))
    return rows


def scenario2_sweep(n_motes_list, rates, read_times, packet_bytes: int,
                    trials: int = 100, seed: int = 0xB10B10) -> list[dict]:
    """Local-deployment question: mean successful motes at fixed sizes."""
    if not list(n_motes_list) or not list(rates) or not list(read_times):
        raise ValueError("sweep lists must be non-empty")
    rows = []
    for rate in rates:
        for rt in read_times:
            for n in n_motes_list:
                sc = MacScenario(n_motes=n, rate=rate, packet_bytes=packet_bytes,
                                 read_time=rt, trials=trials, seed=seed)
                rows.append(dict(n_motes=n, rate_bps=rate, read_time_s=rt,
                                 mean_successes=aloha_mean_successes(sc)))
    return rows


def global_recommendation(zone_successes: int, geom: DeploymentGeometry) -> int:
    """Whole-body deployment implied by one interrogation zone's capacity."""
    if zone_successes < 0:
        raise ValueError("zone_successes must be non-negative")
    return round(zone_successes * geom.zones)


# ---------------------------------------------------------------------------
# CDMA
# ---------------------------------------------------------------------------

def walsh_codes(length: int) -> np.ndarray:
    """Sylvester-Hadamard rows: ``length`` mutually orthogonal +-1 chips."""
    if length < 1 or length & (length - 1):
        raise ValueError("Walsh code length must be a power of two")
    h = np.array([[1]], dtype=np.int8)
    while h.shape[0] < length:
        h = np.block([[h, h], [h, -h]])
    return h


def _cdma_trial(n: int, code_len: int, family: str, packet_bits: int,
                rng: np.random.Generator) -> int:
    if family == "walsh":
        codes = walsh_codes(code_len)[np.arange(n) % code_len]
    elif family == "random":
        codes = (rng.integers(0, 2, size=(n, code_len)).astype(np.int8) * 2 - 1)
    else:
        raise ValueError(f"unknown spreading family {family!r}")
    bits = rng.integers(0, 2, size=(n, packet_bits)).astype(np.int8) * 2 - 1
    # all motes transmit chip-synchronously; the reader sees the plain sum
    aggregate = bits.T.astype(np.int32) @ codes.astype(np.int32)
    correlations = aggregate @ codes.T.astype(np.int32)
    decided = np.where(correlations.T >= 0, 1, -1).astype(np.int8)
    return int(np.sum(np.all(decided == bits, axis=1)))


def cdma_simulate(n_motes: int, code_len: int, family: str = "random",
                  packet_bytes: int = 8, trials: int = 100,
                  seed: int = 0xB10B10) -> float:
    """Mean motes whose whole packet survives the multi-access interference."""
    if n_motes < 1:
        raise ValueError("n_motes must be >= 1")
    bits = packet_bytes * 8
    total = 0
    for t in range(trials):
        total += _cdma_trial(n_motes, code_len, family, bits,
                             _trial_rng(seed, n_motes, t))
    return total / trials


# ---------------------------------------------------------------------------
# scheme comparison
# ---------------------------------------------------------------------------

def compare_schemes(n_motes_list, duration_slots: int, rate: float = 20e3,
                    packet_bytes: int = 64, trials: int = 100,
                    seed: int = 0xB10B10) -> list[dict]:
    """ALOHA (128-slot frames over the window) against CDMA with length-128
    Walsh codes, whose one spread packet fills the same airtime as 128
    slots.  CDMA rows depend only on (n, seed), never on the duration.
    """
    slot = packet_bytes * 8 / rate
    read_time = slot * duration_slots
    rows = []
    for n in n_motes_list:
        sc = MacScenario(n_motes=n, rate=rate, packet_bytes=packet_bytes,
                         read_time=read_time, frame_slots=128,
                         trials=trials, seed=seed)
        rows.append(dict(n_motes=n, duration_slots=duration_slots,
                         scheme="aloha", mean_successes=aloha_mean_successes(sc)))
        cd = cdma_simulate(n, 128, "walsh", packet_bytes, trials, seed)
        rows.append(dict(n_motes=n, duration_slots=duration_slots,
                         scheme="cdma", mean_successes=cd))
    return rows
