"""Photon-pair source and detection-chain simulation.

Generates synthetic detection-event streams for a pair source feeding a
50/50 coupler and two Geiger-mode detectors, together with the matching
closed-form rate predictions:

    S_i  = mu_i eta_i N                      (net singles)
    R_c  = f mu_1 eta_1 mu_2 eta_2 N         (net coincidences)

with f = 1/2 when the splitter is present (both photons of a pair exit the
same port half of the time and can never produce a coincidence) and f = 1
for deterministic separation.

Monte Carlo model, per run: pair emission times are a Poisson process of
rate N; each photon of a pair is routed independently to arm 1 or 2 with
probability 1/2 (splitter) or to its own arm (no splitter); a routed photon
survives with probability mu_arm eta_arm and its detection time picks up
optional Gaussian jitter; each detector adds an independent Poisson
dark-count process; per detector the events are merged, sorted, dead-time
filtered, then quantized to the timestamp resolution. Fixed seed gives a
bit-identical EventStream; each physical process draws from its own named
substream, so changing e.g. a dark rate does not shift the pair, routing,
or survival draws.

Runtime scales with pair_rate * duration (every emitted pair is drawn, in
fixed-size chunks); memory scales with the number of detected events, which
is checked against a budget before generation.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Mapping

import numpy as np

from .core import (ConfigError, Efficiency, MemoryBudgetError, OpticalPower,
                   Rate, Wavelength, photon_flux)
from .events import EventStream
from . import keyvalue

__all__ = [
    "SourceConfig",
    "DetectionChainConfig",
    "RunConfig",
    "TrueCounts",
    "pair_rate",
    "expected_rates",
    "simulate_run",
    "sample_pair_spectrum",
    "config_digest",
    "source_to_mapping",
    "chain_to_mapping",
    "source_from_mapping",
    "chain_from_mapping",
    "reference_source",
    "reference_chain",
]

# Gaussian FWHM = _FWHM_SIGMA * sigma
_FWHM_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))

# named substreams; toggling one physical process must not shift the others
_SUB_PAIRS, _SUB_ROUTING, _SUB_SURVIVAL, _SUB_DARK1, _SUB_DARK2, _SUB_JITTER = range(6)

_CHUNK = 1 << 22
_MAX_PAIR_DRAWS = 2_000_000_000


@dataclass(frozen=True)
class SourceConfig:
    """Pump and conversion parameters defining the pair-emission rate.

    pump_power is measured in front of the coupling optics;
    coupling_efficiency is the fraction launched into the guide;
    conversion_efficiency is pairs created per guided pump photon.
    The emission spectrum is Gaussian around spectral_center (which must sit
    at pump degeneracy to within 1%) with the given FWHM.
    """

    pump_power: OpticalPower
    coupling_efficiency: Efficiency
    pump_wavelength: Wavelength
    conversion_efficiency: float
    spectral_center: Wavelength
    spectral_fwhm_nm: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.conversion_efficiency)
                and 0.0 <= self.conversion_efficiency <= 1.0):
            raise ConfigError("conversion_efficiency must lie in [0, 1], got "
                              f"{self.conversion_efficiency}")
        if not (math.isfinite(self.spectral_fwhm_nm)
                and self.spectral_fwhm_nm > 0.0):
            raise ConfigError(
                f"spectral_fwhm_nm must be > 0, got {self.spectral_fwhm_nm}")
        degenerate = 2.0 * self.pump_wavelength.nm
        if abs(self.spectral_center.nm - degenerate) > 0.01 * degenerate:
            raise ConfigError(
                f"spectral_center ({self.spectral_center.nm} nm) must sit at "
                f"pump degeneracy ({degenerate} nm) within 1%")

    @property
    def guided_power(self) -> OpticalPower:
        return OpticalPower(self.coupling_efficiency.value
                            * self.pump_power.watts)


@dataclass(frozen=True)
class DetectionChainConfig:
    """Per-arm collection/detection efficiencies and detector model.

    mu_i lumps every loss between source and detector i; eta_i is the
    detector quantum efficiency; dark counts are independent Poisson
    processes; dead time is non-paralyzable and jitter is a Gaussian spread
    on photon detection times (both default to ideal 0).
    """

    mu1: Efficiency
    mu2: Efficiency
    eta1: Efficiency
    eta2: Efficiency
    dark1: Rate
    dark2: Rate
    dead_time_ns: float = 0.0
    splitter_present: bool = True
    jitter_ps: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dead_time_ns) and self.dead_time_ns >= 0.0):
            raise ConfigError(
                f"dead_time_ns must be >= 0, got {self.dead_time_ns}")
        if not (math.isfinite(self.jitter_ps) and self.jitter_ps >= 0.0):
            raise ConfigError(f"jitter_ps must be >= 0, got {self.jitter_ps}")

    @property
    def arm_efficiencies(self) -> tuple[float, float]:
        """(mu1 eta1, mu2 eta2)"""
        return (self.mu1.value * self.eta1.value,
                self.mu2.value * self.eta2.value)


@dataclass(frozen=True)
class RunConfig:
    """Duration, seed, and timestamp resolution of one simulated run."""

    duration_s: float
    seed: int
    timestamp_resolution_ps: int = 1

    def __post_init__(self) -> None:
        if not (math.isfinite(self.duration_s) and self.duration_s > 0.0):
            raise ConfigError(f"duration_s must be > 0, got {self.duration_s}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError(f"seed must fit in uint64, got {self.seed}")
        if int(self.timestamp_resolution_ps) < 1:
            raise ConfigError("timestamp_resolution_ps must be >= 1, got "
                              f"{self.timestamp_resolution_ps}")

    @property
    def duration_ps(self) -> int:
        return round(self.duration_s * 1e12)


@dataclass(frozen=True)
class TrueCounts:
    """Ground truth of one simulated run, for round-trip tests.

    pairs_detected_coincident counts pairs whose two photons were routed to
    opposite arms and both survived (before dead-time filtering).
    """

    pairs_emitted: int
    pairs_detected_coincident: int
    darks_emitted: tuple[int, int]

    def __post_init__(self) -> None:
        if self.pairs_detected_coincident > self.pairs_emitted:
            raise ConfigError("detected coincident pairs cannot exceed "
                              "emitted pairs")


def pair_rate(source: SourceConfig) -> Rate:
    """Pair production rate N = conversion_efficiency * guided photon flux."""
    flux = photon_flux(source.guided_power, source.pump_wavelength)
    return Rate(source.conversion_efficiency * flux.hz)


def expected_rates(source: SourceConfig,
                   chain: DetectionChainConfig) -> tuple[Rate, Rate, Rate]:
    """Closed-form net (S1, S2, Rc) for a source/chain combination."""
    n = pair_rate(source).hz
    e1, e2 = chain.arm_efficiencies
    f = 0.5 if chain.splitter_present else 1.0
    return Rate(e1 * n), Rate(e2 * n), Rate(f * e1 * e2 * n)


def _si_out(internal: float, scale: float) -> float:
    """SI value y for an internal value x so that parsing it back with
    y * scale reproduces x bit-exactly (nudged by one ulp when plain division
    lands on the wrong neighbour)."""
    y = internal / scale
    if y * scale == internal:
        return y
    for candidate in (math.nextafter(y, math.inf), math.nextafter(y, -math.inf)):
        if candidate * scale == internal:
            return candidate
    return y


def source_to_mapping(source: SourceConfig) -> dict[str, float]:
    """Flat SI-unit mapping (the config-file representation); exact inverse
    of source_from_mapping."""
    return {
        "pump_power_w": source.pump_power.watts,
        "coupling_efficiency": source.coupling_efficiency.value,
        "pump_wavelength_m": _si_out(source.pump_wavelength.nm, 1e9),
        "conversion_efficiency": source.conversion_efficiency,
        "spectral_center_m": _si_out(source.spectral_center.nm, 1e9),
        "spectral_fwhm_m": _si_out(source.spectral_fwhm_nm, 1e9),
    }


def chain_to_mapping(chain: DetectionChainConfig) -> dict[str, object]:
    return {
        "mu1": chain.mu1.value,
        "mu2": chain.mu2.value,
        "eta1": chain.eta1.value,
        "eta2": chain.eta2.value,
        "dark1_hz": chain.dark1.hz,
        "dark2_hz": chain.dark2.hz,
        "dead_time_s": _si_out(chain.dead_time_ns, 1e9),
        "splitter_present": chain.splitter_present,
        "jitter_s": _si_out(chain.jitter_ps, 1e12),
    }


def source_from_mapping(kv: Mapping[str, str],
                        source: str = "config") -> SourceConfig:
    return SourceConfig(
        pump_power=OpticalPower(keyvalue.get_float(kv, "pump_power_w", source)),
        coupling_efficiency=Efficiency(
            keyvalue.get_float(kv, "coupling_efficiency", source)),
        pump_wavelength=Wavelength.from_meters(
            keyvalue.get_float(kv, "pump_wavelength_m", source)),
        conversion_efficiency=keyvalue.get_float(
            kv, "conversion_efficiency", source),
        spectral_center=Wavelength.from_meters(
            keyvalue.get_float(kv, "spectral_center_m", source)),
        spectral_fwhm_nm=keyvalue.get_float(kv, "spectral_fwhm_m", source) * 1e9,
    )


def chain_from_mapping(kv: Mapping[str, str],
                       source: str = "config") -> DetectionChainConfig:
    return DetectionChainConfig(
        mu1=Efficiency(keyvalue.get_float(kv, "mu1", source)),
        mu2=Efficiency(keyvalue.get_float(kv, "mu2", source)),
        eta1=Efficiency(keyvalue.get_float(kv, "eta1", source)),
        eta2=Efficiency(keyvalue.get_float(kv, "eta2", source)),
        dark1=Rate(keyvalue.get_float(kv, "dark1_hz", source)),
        dark2=Rate(keyvalue.get_float(kv, "dark2_hz", source)),
        dead_time_ns=keyvalue.get_float(kv, "dead_time_s", source) * 1e9,
        splitter_present=keyvalue.get_bool(kv, "splitter_present", source),
        jitter_ps=keyvalue.get_float(kv, "jitter_s", source) * 1e12,
    )


def config_digest(source: SourceConfig, chain: DetectionChainConfig) -> str:
    """Stable sha256 over the flat config representation."""
    mapping = dict(source_to_mapping(source))
    mapping.update(chain_to_mapping(chain))
    text = keyvalue.format_keyvalue(mapping)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _substream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=int(seed),
                                               spawn_key=(index,))))


def _deadtime_filter(times_s: np.ndarray, dead_s: float) -> np.ndarray:
    """Non-paralyzable dead time: drop events closer than dead_s to the last
    accepted one; dropped events do not extend the dead window."""
    if dead_s <= 0.0 or times_s.size == 0:
        return times_s
    keep = np.zeros(times_s.size, dtype=bool)
    i = 0
    n = times_s.size
    while i < n:
        keep[i] = True
        i = int(np.searchsorted(times_s, times_s[i] + dead_s, side="left"))
    return times_s[keep]


def _quantize(times_s: np.ndarray, duration_ps: int,
              resolution_ps: int) -> np.ndarray:
    ticks = np.floor(times_s * (1e12 / resolution_ps)).astype(np.int64)
    t_ps = ticks * resolution_ps
    # float rounding at the upper edge may land exactly on duration
    last_tick = (duration_ps - 1) // resolution_ps * resolution_ps
    return np.minimum(t_ps, last_tick)


def simulate_run(source: SourceConfig, chain: DetectionChainConfig,
                 run: RunConfig,
                 max_events: int = 50_000_000) -> tuple[EventStream, TrueCounts]:
    """Monte Carlo run of the full source + detection chain.

    Returns the sorted event stream and the generation ground truth.
    Deterministic for a fixed (config, seed). Raises MemoryBudgetError before
    generating anything when the expected detected-event count exceeds
    max_events or the expected pair count exceeds 2e9.
    """
    n_rate = pair_rate(source).hz
    e1, e2 = chain.arm_efficiencies
    d = run.duration_s
    expected_events = d * (e1 * n_rate + e2 * n_rate
                           + chain.dark1.hz + chain.dark2.hz)
    if expected_events > max_events:
        raise MemoryBudgetError(
            f"expected {expected_events:.3e} detected events exceeds the "
            f"budget of {max_events:.3e}; shorten the run or lower the rates")
    if n_rate * d > _MAX_PAIR_DRAWS:
        raise MemoryBudgetError(
            f"expected {n_rate * d:.3e} emitted pairs exceeds the draw budget "
            f"of {_MAX_PAIR_DRAWS:.1e}")

    rng_pairs = _substream(run.seed, _SUB_PAIRS)
    rng_routing = _substream(run.seed, _SUB_ROUTING)
    rng_survival = _substream(run.seed, _SUB_SURVIVAL)

    n_pairs = int(rng_pairs.poisson(n_rate * d))

    # survival is decided by 32-bit uniforms against a scaled threshold;
    # the probability quantization (2^-32, absolute) is far below any
    # statistical tolerance in use
    def survive(u: np.ndarray, eff: float) -> np.ndarray:
        k = round(eff * 4294967296.0)
        if k <= 0:
            return np.zeros(u.size, dtype=bool)
        if k >= 4294967296:
            return np.ones(u.size, dtype=bool)
        return u < np.uint32(k)

    det1_parts: list[np.ndarray] = []
    det2_parts: list[np.ndarray] = []
    coincident = 0
    for start in range(0, n_pairs, _CHUNK):
        m = min(_CHUNK, n_pairs - start)
        t = rng_pairs.uniform(0.0, d, m)
        if chain.splitter_present:
            # two routing bits per pair: photon a -> bit 0, photon b -> bit 1
            fate = rng_routing.integers(0, 4, m, dtype=np.uint8)
            in2_a = (fate & 1).view(np.bool_)
            in2_b = (fate >> 1).view(np.bool_)
        else:
            in2_a = np.zeros(m, dtype=bool)
            in2_b = np.ones(m, dtype=bool)
        u_a = rng_survival.integers(0, 1 << 32, size=m, dtype=np.uint32)
        u_b = rng_survival.integers(0, 1 << 32, size=m, dtype=np.uint32)
        if e1 == e2:
            live_a = survive(u_a, e1)
            live_b = survive(u_b, e1)
        else:
            live_a = np.where(in2_a, survive(u_a, e2), survive(u_a, e1))
            live_b = np.where(in2_b, survive(u_b, e2), survive(u_b, e1))
        coincident += int(np.count_nonzero((in2_a ^ in2_b) & live_a & live_b))
        det1_parts.append(t[live_a & ~in2_a])
        det1_parts.append(t[live_b & ~in2_b])
        det2_parts.append(t[live_a & in2_a])
        det2_parts.append(t[live_b & in2_b])

    rng_dark1 = _substream(run.seed, _SUB_DARK1)
    rng_dark2 = _substream(run.seed, _SUB_DARK2)
    n_dark1 = int(rng_dark1.poisson(chain.dark1.hz * d))
    n_dark2 = int(rng_dark2.poisson(chain.dark2.hz * d))
    dark1_t = rng_dark1.uniform(0.0, d, n_dark1)
    dark2_t = rng_dark2.uniform(0.0, d, n_dark2)

    rng_jitter = _substream(run.seed, _SUB_JITTER)
    duration_ps = run.duration_ps
    per_detector: list[np.ndarray] = []
    for photon_parts, dark_t in ((det1_parts, dark1_t), (det2_parts, dark2_t)):
        photons = (np.concatenate(photon_parts) if photon_parts
                   else np.empty(0, dtype=np.float64))
        if chain.jitter_ps > 0.0 and photons.size:
            photons = photons + rng_jitter.normal(
                0.0, chain.jitter_ps * 1e-12, photons.size)
            photons = photons[(photons >= 0.0) & (photons < d)]
        merged = np.sort(np.concatenate((photons, dark_t)))
        merged = _deadtime_filter(merged, chain.dead_time_ns * 1e-9)
        per_detector.append(
            _quantize(merged, duration_ps, run.timestamp_resolution_ps))

    t1, t2 = per_detector
    det = np.concatenate((np.full(t1.size, 1, dtype=np.uint8),
                          np.full(t2.size, 2, dtype=np.uint8)))
    t_all = np.concatenate((t1, t2))
    order = np.lexsort((det, t_all))   # by time, then detector
    stream = EventStream(
        detectors=det[order],
        times_ps=t_all[order],
        duration_ps=duration_ps,
        resolution_ps=run.timestamp_resolution_ps,
        seed=int(run.seed),
        config_digest=config_digest(source, chain),
    )
    truth = TrueCounts(pairs_emitted=n_pairs,
                       pairs_detected_coincident=coincident,
                       darks_emitted=(n_dark1, n_dark2))
    return stream, truth


def sample_pair_spectrum(source: SourceConfig, count: int,
                         seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Sample signal/idler wavelength pairs (nm).

    Signal wavelengths are Gaussian around the spectral center with the
    configured FWHM; each idler follows from energy conservation against the
    pump, so every sampled pair satisfies it to float precision.
    """
    if count < 0:
        raise ConfigError(f"sample count must be >= 0, got {count}")
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    sigma = source.spectral_fwhm_nm / _FWHM_SIGMA
    signal_nm = rng.normal(source.spectral_center.nm, sigma, int(count))
    inv_pump = 1.0 / source.pump_wavelength.nm
    if np.any(signal_nm * inv_pump <= 1.0):
        raise ConfigError("sampled signal wavelength at or below the pump; "
                          "spectral width is unphysically large")
    idler_nm = 1.0 / (inv_pump - 1.0 / signal_nm)
    return signal_nm, idler_nm


@lru_cache(maxsize=1)
def _reference_mapping() -> dict[str, str]:
    ref = resources.files("pairsim.data").joinpath("reference_run_config.txt")
    return keyvalue.parse_keyvalue(ref.read_text(encoding="utf-8"), str(ref))


def reference_source() -> SourceConfig:
    """Operating point of the 657 nm PPLN waveguide demonstration source.

    5.2 uW in front of the coupling objective with coupling chosen so that
    exactly 1.0 uW is guided, and a conversion efficiency that pins the pair
    rate at 7.75 MHz; degenerate emission at 1314 nm, 30 nm FWHM. Loaded
    from the bundled reference_run_config.txt.
    """
    return source_from_mapping(_reference_mapping(), "reference_run_config.txt")


def reference_chain() -> DetectionChainConfig:
    """Matching detection chain: 20% collection and 10% quantum efficiency
    per arm (0.02 product), 22 kHz dark rate per detector, 50/50 splitter,
    ideal timing. Loaded from the bundled reference_run_config.txt."""
    return chain_from_mapping(_reference_mapping(), "reference_run_config.txt")
