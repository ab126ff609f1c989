"""Return-set analytics over a finite observation window.

All asymptotic quantities (limsup, liminf, the window limit defining upper Banach
density) are replaced by extrema over explicit grids inside the observation
window ``[1, horizon]``; every value reported here is exact for the data given.
"""

from __future__ import annotations

import csv
from bisect import bisect_right
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np


@dataclass(frozen=True)
class ReturnSet:
    """Hit times ``n`` in ``[1, horizon]`` of an orbit into a ball."""

    times: tuple[int, ...]
    horizon: int

    def __post_init__(self):
        times = tuple(int(t) for t in self.times)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "horizon", int(self.horizon))
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("times must be strictly increasing")
        if times and (times[0] < 1 or times[-1] > self.horizon):
            raise ValueError("times must lie in [1, horizon]")

    @classmethod
    def from_mask(cls, mask: Sequence[bool]) -> "ReturnSet":
        """``mask[i]`` marks time ``i + 1``."""
        mask = np.asarray(mask, dtype=bool)
        return cls(tuple((np.flatnonzero(mask) + 1).tolist()), len(mask))

    @classmethod
    def from_iterable(cls, times: Iterable[int], horizon: int) -> "ReturnSet":
        return cls(tuple(sorted(set(int(t) for t in times))), horizon)

    def __len__(self):
        return len(self.times)

    def __contains__(self, n):
        i = bisect_right(self.times, n)
        return i > 0 and self.times[i - 1] == n

    def count_upto(self, n: int) -> int:
        return bisect_right(self.times, n)

    def union(self, other: "ReturnSet") -> "ReturnSet":
        return ReturnSet.from_iterable(self.times + other.times, max(self.horizon, other.horizon))


class DensityEstimate(NamedTuple):
    value: float
    at: int  # the N achieving the extremum


def window_max_count(s: ReturnSet, window: int) -> int:
    """Largest number of hits in ``[m+1, m+window]`` over windows inside ``[1, horizon]``.

    An optimal window can be slid right until its left end sits on a hit or its
    right end reaches the horizon, so only those placements are scanned.
    """
    if not 1 <= window <= s.horizon:
        raise ValueError(f"window must be in [1, {s.horizon}], got {window}")
    if not s.times:
        return 0
    t = np.asarray(s.times, dtype=np.int64) if s.horizon < 2**62 else np.asarray(s.times, dtype=object)
    last_start = s.horizon - window
    starts = np.minimum(t - 1, last_start)
    starts = np.append(starts, last_start)
    hi = np.searchsorted(t, starts + window, side="right")
    lo = np.searchsorted(t, starts, side="right")
    return int(np.max(hi - lo))


def upper_banach_window(s: ReturnSet, window: int) -> float:
    return window_max_count(s, window) / window


def window_counts(s: ReturnSet, window: int) -> np.ndarray:
    """Hit counts of every window ``[m+1, m+window]``, ``m = 0 .. horizon - window``."""
    if not 1 <= window <= s.horizon:
        raise ValueError(f"window must be in [1, {s.horizon}], got {window}")
    ind = np.zeros(s.horizon + 1, dtype=np.int64)
    ind[np.asarray(s.times, dtype=np.int64)] = 1
    c = np.cumsum(ind)
    return c[window:] - c[: len(c) - window]


def density_grid(horizon: int, min_fraction: float = 0.5) -> list[int]:
    """Half-octave grid ``{2^k, 3*2^(k-1)} ∪ {horizon}`` restricted to ``[min_fraction*horizon, horizon]``."""
    lo = max(1, int(np.ceil(min_fraction * horizon)))
    pts = {horizon}
    k = 0
    while 2**k <= horizon:
        for n in (2**k, 3 * 2**k // 2):
            if lo <= n <= horizon and n >= 1:
                pts.add(n)
        k += 1
    return sorted(pts)


def _densities(s: ReturnSet, min_fraction: float):
    return [(s.count_upto(n) / n, n) for n in density_grid(s.horizon, min_fraction)]


def upper_density(s: ReturnSet, min_fraction: float = 0.5) -> DensityEstimate:
    v, n = max(_densities(s, min_fraction), key=lambda t: (t[0], -t[1]))
    return DensityEstimate(v, n)


def lower_density(s: ReturnSet, min_fraction: float = 0.5) -> DensityEstimate:
    v, n = min(_densities(s, min_fraction), key=lambda t: (t[0], t[1]))
    return DensityEstimate(v, n)


def max_gap(s: ReturnSet) -> int:
    """Largest gap on ``[1, horizon]``, counting the lead-in before the first hit and the tail after the last."""
    if not s.times:
        raise ValueError("max_gap is undefined for an empty return set")
    t = s.times
    gaps = [t[0], s.horizon - t[-1]]
    gaps.extend(b - a for a, b in zip(t, t[1:]))
    return max(gaps)


def longest_ap(s: ReturnSet | Iterable[int]) -> int:
    """Length of the longest arithmetic progression (difference >= 1) inside ``s``."""
    times = sorted(set(s.times if isinstance(s, ReturnSet) else s))
    if len(times) < 2:
        return len(times)
    members = set(times)
    best = 2
    for i, a in enumerate(times):
        for b in times[i + 1:]:
            d = b - a
            if a - d in members:
                continue  # not the start of its progression
            # the progression cannot beat `best` if it would overrun the last time
            if a + best * d > times[-1]:
                break
            length, nxt = 2, b + d
            while nxt in members:
                length += 1
                nxt += d
            best = max(best, length)
    return best


def dyadic_windows(horizon: int) -> list[int]:
    out = [2**k for k in range(horizon.bit_length()) if 2**k <= horizon]
    if out[-1] != horizon:
        out.append(horizon)
    return out


@dataclass
class DensityReport:
    upper_density: float
    lower_density: float
    banach_profile: list[tuple[int, int, float]]  # (window, max_count, ratio)
    max_gap: int | None
    longest_ap: int
    upper_at: int = 0
    lower_at: int = 0
    horizon: int = 0
    extra: dict = field(default_factory=dict)


def density_report(s: ReturnSet, windows: Iterable[int] | None = None,
                   min_fraction: float = 0.5) -> DensityReport:
    windows = dyadic_windows(s.horizon) if windows is None else sorted(set(windows))
    profile = []
    for w in windows:
        c = window_max_count(s, w)
        profile.append((w, c, c / w))
    up, lo = upper_density(s, min_fraction), lower_density(s, min_fraction)
    return DensityReport(
        upper_density=up.value,
        lower_density=lo.value,
        banach_profile=profile,
        max_gap=max_gap(s) if s.times else None,
        longest_ap=longest_ap(s),
        upper_at=up.at,
        lower_at=lo.at,
        horizon=s.horizon,
    )


def write_density_csv(path: str | Path, report: DensityReport) -> Path:
    """Profile rows ``window,max_count,ratio`` followed by labelled summary rows."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["window", "max_count", "ratio"])
        for win, c, r in report.banach_profile:
            w.writerow([win, c, repr(r)])
        w.writerow(["upper_density", report.upper_at, repr(report.upper_density)])
        w.writerow(["lower_density", report.lower_at, repr(report.lower_density)])
        w.writerow(["max_gap", "", "" if report.max_gap is None else report.max_gap])
        w.writerow(["longest_ap", "", report.longest_ap])
    return path


def read_return_set_csv(path: str | Path, horizon: int | None = None) -> ReturnSet:
    """Read a CSV whose ``n`` column lists hit times; horizon defaults to the last time."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    if rows and "n" not in rows[0]:
        raise ValueError(f"{path}: expected an 'n' column")
    times = sorted({int(r["n"]) for r in rows})
    if horizon is None:
        horizon = times[-1] if times else 1
    return ReturnSet(tuple(times), horizon)


def write_return_set_csv(path: str | Path, s: ReturnSet) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n"])
        w.writerows([t] for t in s.times)
    return path
