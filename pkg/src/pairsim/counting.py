"""Coincidence electronics over event streams.

Emulates start/stop counting: a detector-1 event opens the converter and a
coincidence is scored when the next detector-2 event falls inside the
analysis window (full width, symmetric around zero delay). Matching is
greedy and one-to-one in time order, so each event participates in at most
one coincidence. Accidentals are estimated with the standard delayed-window
technique: detector-2 timestamps are shifted by a delay much larger than the
window (wrapping inside the run duration) and the coincidences recounted.

For two independent Poisson streams the expected coincidence rate is
S1 * S2 * w with w the full window width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ConfigError, Rate
from .events import EventStream

__all__ = [
    "WindowConfig",
    "CountSummary",
    "count_singles",
    "count_coincidences",
    "estimate_accidentals",
    "net_summary",
]


@dataclass(frozen=True)
class WindowConfig:
    """Coincidence window (full width, ns) and the delayed-window offset used
    for the accidental estimate (must exceed 10x the window)."""

    coincidence_window_ns: float = 1.0
    accidental_delay_ns: float = 100.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.coincidence_window_ns)
                and self.coincidence_window_ns > 0.0):
            raise ConfigError("coincidence window must be > 0 ns, got "
                              f"{self.coincidence_window_ns}")
        if not (math.isfinite(self.accidental_delay_ns)
                and self.accidental_delay_ns > 10.0 * self.coincidence_window_ns):
            raise ConfigError(
                f"accidental delay ({self.accidental_delay_ns} ns) must exceed "
                f"10x the window ({self.coincidence_window_ns} ns)")

    @property
    def half_window_ps(self) -> float:
        return self.coincidence_window_ns * 1e3 / 2.0

    @property
    def delay_ps(self) -> int:
        return round(self.accidental_delay_ns * 1e3)


@dataclass(frozen=True)
class CountSummary:
    """Raw and net singles/coincidence rates over one run.

    Net values are raw minus the subtraction (assumed dark rates for singles,
    delayed-window estimate for coincidences), floored at zero; any floored
    quantity is named in `floored`. The integer event counts behind the
    coincidence rates are kept so that raw = net + accidental holds exactly.
    """

    duration_s: float
    raw_singles: tuple[Rate, Rate]
    dark_rates_assumed: tuple[Rate, Rate]
    net_singles: tuple[Rate, Rate]
    raw_coincidences: Rate
    accidental_coincidences: Rate
    net_coincidences: Rate
    singles_counts: tuple[int, int]
    coincidence_count: int
    accidental_count: int
    floored: tuple[str, ...] = ()

    def to_mapping(self) -> dict[str, object]:
        """Flat key-value form, also used as the CSV column set."""
        return {
            "duration_s": self.duration_s,
            "s1_raw_hz": self.raw_singles[0].hz,
            "s2_raw_hz": self.raw_singles[1].hz,
            "dark1_hz": self.dark_rates_assumed[0].hz,
            "dark2_hz": self.dark_rates_assumed[1].hz,
            "s1_net_hz": self.net_singles[0].hz,
            "s2_net_hz": self.net_singles[1].hz,
            "rc_raw_hz": self.raw_coincidences.hz,
            "rc_accidental_hz": self.accidental_coincidences.hz,
            "rc_net_hz": self.net_coincidences.hz,
            "s1_count": self.singles_counts[0],
            "s2_count": self.singles_counts[1],
            "rc_count": self.coincidence_count,
            "rc_accidental_count": self.accidental_count,
            "floored": ";".join(self.floored),
        }


def _split_times(stream: EventStream) -> tuple[np.ndarray, np.ndarray]:
    mask = stream.detectors == 1
    return stream.times_ps[mask], stream.times_ps[~mask]


def _require_duration(stream: EventStream) -> float:
    if stream.duration_ps <= 0:
        raise ConfigError("stream duration is zero; rates are undefined")
    return stream.duration_s


def count_singles(stream: EventStream) -> tuple[Rate, Rate]:
    """Raw per-detector count rates."""
    d = _require_duration(stream)
    n1, n2 = stream.counts()
    return Rate(n1 / d), Rate(n2 / d)


def _greedy_match_count(t1: np.ndarray, t2: np.ndarray,
                        half_window_ps: float) -> int:
    """One-to-one greedy matching in time order, |t1 - t2| <= half window.

    Events with no partner inside the window never influence the matching,
    so both sides are first reduced to window-overlap candidates (vectorized;
    padded by 1 ps so float rounding of the bounds can only widen the
    candidate set) and the exact sequential matcher runs only on those.
    """
    if t1.size == 0 or t2.size == 0:
        return 0
    pad = half_window_ps + 1.0
    lo = np.searchsorted(t2, t1 - pad, side="left")
    hi = np.searchsorted(t2, t1 + pad, side="right")
    c1 = t1[hi > lo]
    lo = np.searchsorted(t1, t2 - pad, side="left")
    hi = np.searchsorted(t1, t2 + pad, side="right")
    c2 = t2[hi > lo]
    if c1.size == 0 or c2.size == 0:
        return 0

    a = c1.tolist()
    b = c2.tolist()
    i = j = matches = 0
    n1, n2 = len(a), len(b)
    while i < n1 and j < n2:
        dt = b[j] - a[i]
        if dt < -half_window_ps:
            j += 1
        elif dt > half_window_ps:
            i += 1
        else:
            matches += 1
            i += 1
            j += 1
    return matches


def _coincidence_event_count(stream: EventStream,
                             window: WindowConfig) -> int:
    t1, t2 = _split_times(stream)
    return _greedy_match_count(t1, t2, window.half_window_ps)


def _accidental_event_count(stream: EventStream, window: WindowConfig) -> int:
    t1, t2 = _split_times(stream)
    if t2.size:
        t2 = np.sort((t2 + window.delay_ps) % stream.duration_ps)
    return _greedy_match_count(t1, t2, window.half_window_ps)


def count_coincidences(stream: EventStream,
                       window: WindowConfig = WindowConfig()) -> Rate:
    """Raw coincidence rate from greedy start/stop matching."""
    d = _require_duration(stream)
    return Rate(_coincidence_event_count(stream, window) / d)


def estimate_accidentals(stream: EventStream,
                         window: WindowConfig = WindowConfig()) -> Rate:
    """Delayed-window accidental estimate.

    Shifts detector-2 timestamps by the configured delay, wrapping inside the
    run duration (event count and duration are preserved exactly), and
    recounts coincidences.
    """
    d = _require_duration(stream)
    return Rate(_accidental_event_count(stream, window) / d)


def net_summary(stream: EventStream, window: WindowConfig = WindowConfig(),
                dark_rates: tuple[Rate, Rate] = (Rate(0.0), Rate(0.0)),
                ) -> CountSummary:
    """Full raw/net summary with dark and accidental subtraction."""
    duration_s = _require_duration(stream)
    n1, n2 = stream.counts()
    rc_count = _coincidence_event_count(stream, window)
    acc_count = _accidental_event_count(stream, window)

    floored: list[str] = []
    s_nets = []
    for name, raw_count, dark in (("s1_net", n1, dark_rates[0]),
                                  ("s2_net", n2, dark_rates[1])):
        value = raw_count / duration_s - dark.hz
        if value < 0.0:
            floored.append(name)
            value = 0.0
        s_nets.append(Rate(value))

    net_count = rc_count - acc_count
    if net_count < 0:
        floored.append("rc_net")
        net_count = 0

    return CountSummary(
        duration_s=duration_s,
        raw_singles=(Rate(n1 / duration_s), Rate(n2 / duration_s)),
        dark_rates_assumed=tuple(dark_rates),
        net_singles=(s_nets[0], s_nets[1]),
        raw_coincidences=Rate(rc_count / duration_s),
        accidental_coincidences=Rate(acc_count / duration_s),
        net_coincidences=Rate(net_count / duration_s),
        singles_counts=(n1, n2),
        coincidence_count=rc_count,
        accidental_count=acc_count,
        floored=tuple(floored),
    )
