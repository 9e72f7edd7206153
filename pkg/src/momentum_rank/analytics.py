"""Sliding-window frontier statistics, inversion curves, top-K box statistics
and a log-log power-law diagnostic."""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import (
    DEFAULT_FLOOR,
    SIMPLE,
    DeltaSystem,
    EntityId,
    MomentumError,
    ScoreSnapshot,
    compute_delta_system,
    frontier_mask,
)

ABSOLUTE = "absolute"
RELATIVE = "relative"

# Buckets [6, 9), [9, 12), [12, 15] with catch-alls on either side.
DEFAULT_EDGES = (6, 9, 12, 15)


@dataclass(frozen=True)
class WindowSpec:
    end_dates: tuple[date, ...]
    length: int = 90
    step: int = 30
    floor: float = DEFAULT_FLOOR
    max_staleness: int = 7
    mode: str = SIMPLE

    def __post_init__(self):
        object.__setattr__(self, "end_dates", tuple(self.end_dates))
        if self.length <= 0 or self.step <= 0:
            raise MomentumError("window length and step must be positive")
        if self.max_staleness < 0:
            raise MomentumError("max staleness must be >= 0")
        if any(b <= a for a, b in zip(self.end_dates, self.end_dates[1:])):
            raise MomentumError("window end dates must be strictly increasing")

    @classmethod
    def stepped(cls, first_end: date, last_end: date, length: int = 90, step: int = 30, **kw) -> WindowSpec:
        """Windows ending every ``step`` days from ``first_end`` through ``last_end``."""
        if step <= 0:
            raise MomentumError("window step must be positive")
        ends = []
        d = first_end
        while d <= last_end:
            ends.append(d)
            d += timedelta(days=step)
        return cls(tuple(ends), length=length, step=step, **kw)

    def bounds(self, end: date) -> tuple[date, date]:
        return end - timedelta(days=self.length), end


@dataclass(frozen=True)
class WindowResult:
    start: date
    end: date
    size: int | None
    reason: str = ""

    @property
    def skipped(self) -> bool:
        return self.size is None


@dataclass(frozen=True)
class FrontierSizeHistogram:
    """Window counts per frontier-size bucket.

    ``counts`` has ``len(edges) + 1`` entries: sizes below ``edges[0]``, one
    bucket per consecutive edge pair (half-open except the last, which is
    closed), and sizes above ``edges[-1]``.
    """

    edges: tuple[int, ...]
    counts: tuple[int, ...]
    mean_size: float
    windows: tuple[WindowResult, ...] = field(default=())

    @property
    def labels(self) -> list[str]:
        e = self.edges
        return [f"<{e[0]}"] + [f"{lo}-{hi}" for lo, hi in zip(e, e[1:])] + [f">{e[-1]}"]

    @property
    def inner_counts(self) -> tuple[int, ...]:
        return self.counts[1:-1]

    @property
    def skipped(self) -> list[WindowResult]:
        return [w for w in self.windows if w.skipped]


def bucket_sizes(sizes: Sequence[int], edges: Sequence[int] = DEFAULT_EDGES) -> FrontierSizeHistogram:
    edges = tuple(int(e) for e in edges)
    if len(edges) < 2 or any(b <= a for a, b in zip(edges, edges[1:])):
        raise MomentumError("bucket edges must be at least two strictly increasing values")
    counts = [0] * (len(edges) + 1)
    for s in sizes:
        if s < edges[0]:
            counts[0] += 1
        elif s > edges[-1]:
            counts[-1] += 1
        elif s == edges[-1]:
            counts[-2] += 1
        else:
            counts[bisect_right(edges, s)] += 1
    mean = float(np.mean(sizes)) if len(sizes) else math.nan
    return FrontierSizeHistogram(edges, tuple(counts), mean)


def match_snapshot(
    history: Mapping[date, ScoreSnapshot], when: date, max_staleness: int, _dates: list[date] | None = None
) -> ScoreSnapshot | None:
    """Latest snapshot dated on or before ``when`` and no older than ``max_staleness`` days."""
    dates = _dates if _dates is not None else sorted(history)
    i = bisect_right(dates, when)
    if i == 0:
        return None
    found = dates[i - 1]
    if (when - found).days > max_staleness:
        return None
    return history[found]


def window_systems(history: Mapping[date, ScoreSnapshot] | Iterable[ScoreSnapshot], spec: WindowSpec):
    """Yield ``(start, end, DeltaSystem | None, reason)`` for each window of ``spec``."""
    if not isinstance(history, Mapping):
        history = {snap.as_of: snap for snap in history}
    dates = sorted(history)
    for end in spec.end_dates:
        start, end = spec.bounds(end)
        before = match_snapshot(history, start, spec.max_staleness, dates)
        after = match_snapshot(history, end, spec.max_staleness, dates)
        if before is None or after is None:
            missing = start if before is None else end
            yield start, end, None, f"no snapshot within {spec.max_staleness} days before {missing.isoformat()}"
            continue
        try:
            sys = compute_delta_system(before, after, mode=spec.mode, floor=spec.floor)
        except MomentumError as exc:
            yield start, end, None, str(exc)
            continue
        yield start, end, sys, ""


def sliding_frontier_sizes(
    history: Mapping[date, ScoreSnapshot] | Iterable[ScoreSnapshot],
    spec: WindowSpec,
    edges: Sequence[int] = DEFAULT_EDGES,
) -> FrontierSizeHistogram:
    if not spec.end_dates:
        raise MomentumError("at least one window is required")
    results = []
    for start, end, sys, reason in window_systems(history, spec):
        size = None if sys is None else int(frontier_mask(sys.g, sys.r).sum())
        results.append(WindowResult(start, end, size, reason))
    hist = bucket_sizes([w.size for w in results if not w.skipped], edges)
    return FrontierSizeHistogram(hist.edges, hist.counts, hist.mean_size, tuple(results))


@dataclass(frozen=True)
class InversionCurve:
    kind: str
    points: tuple[tuple[int, float, int], ...]  # (k, 2**k, rank)

    @property
    def ks(self) -> list[int]:
        return [p[0] for p in self.points]

    @property
    def ranks(self) -> list[int]:
        return [p[2] for p in self.points]

    def rank_at(self, k: int) -> int | None:
        for kk, _, rank in self.points:
            if kk == k:
                return rank
        return None


def inversion_curves(sys: DeltaSystem, ks: Iterable[int]) -> tuple[InversionCurve, InversionCurve]:
    """Threshold-crossing ranks for relative and absolute gain.

    For each k the relative curve records the best (smallest) rank whose
    relative gain exceeds ``2**k``; the absolute curve records the worst
    (largest) rank whose absolute gain exceeds ``2**k``. Thresholds nobody
    crosses leave a gap.
    """
    if sys.N == 0:
        raise MomentumError("empty delta system")
    rel, ab = [], []
    for k in sorted(set(int(k) for k in ks)):
        t = 2.0**k
        above = np.flatnonzero(sys.r > t)
        if above.size:
            rel.append((k, t, int(above[0]) + 1))
        above = np.flatnonzero(sys.g > t)
        if above.size:
            ab.append((k, t, int(above[-1]) + 1))
    return InversionCurve(RELATIVE, tuple(rel)), InversionCurve(ABSOLUTE, tuple(ab))


def superpose(relative: InversionCurve, absolute: InversionCurve) -> list[tuple[int, int | None, int | None]]:
    """Align both curves on k: rows of ``(k, relative rank, absolute rank)``."""
    rel = {k: rank for k, _, rank in relative.points}
    ab = {k: rank for k, _, rank in absolute.points}
    return [(k, rel.get(k), ab.get(k)) for k in sorted(rel.keys() | ab.keys())]


@dataclass(frozen=True)
class TopKBoxStat:
    k: int
    criterion: str
    inner: tuple[int, int]
    mean_rank: float
    outliers: tuple[tuple[EntityId, int], ...]
    ranks: tuple[int, ...] = ()

    @property
    def inner_count(self) -> int:
        lo, hi = self.inner
        return sum(lo <= x <= hi for x in self.ranks)


def central_count(k: int) -> int:
    """ceil(0.9 k) in integer arithmetic."""
    return (9 * k + 9) // 10


def central_band(ranks: Sequence[int]) -> tuple[int, int]:
    """Bounds of the central 90% of ``ranks``.

    Drops ``k - ceil(0.9 k)`` members split evenly between both ends after
    sorting; an odd extra comes off whichever end yields the narrower band,
    the worse-ranked end on a tie.
    """
    xs = sorted(ranks)
    k = len(xs)
    keep = central_count(k)
    drop = k - keep
    low_options = sorted({drop // 2, drop - drop // 2})
    best = None
    for lo in low_options:
        band = (xs[lo], xs[lo + keep - 1])
        width = band[1] - band[0]
        if best is None or width < best[0] or (width == best[0] and lo < best[1]):
            best = (width, lo, band)
    return best[2]


def _cohort(sys: DeltaSystem, k: int, criterion: str) -> np.ndarray:
    values = sys.g if criterion == ABSOLUTE else sys.r
    # top-k by value, ties to the better rank
    order = np.lexsort((np.arange(sys.N), -values))
    return order[:k]


def topk_box_stats(sys: DeltaSystem, ks: Iterable[int]) -> list[TopKBoxStat]:
    out = []
    for k in ks:
        k = int(k)
        if k < 1:
            raise MomentumError("cohort size must be >= 1")
        if k > sys.N:
            raise MomentumError(f"cohort larger than population ({k} > {sys.N})")
        for criterion in (ABSOLUTE, RELATIVE):
            members = _cohort(sys, k, criterion)
            out.append(box_stat([sys.ids[i] for i in members], [int(i) + 1 for i in members], criterion))
    return out


def box_stat(entities: Sequence[EntityId], ranks: Sequence[int], criterion: str = ABSOLUTE) -> TopKBoxStat:
    """Box statistic for one cohort given its members' overall ranks."""
    if not ranks:
        raise MomentumError("empty cohort")
    lo, hi = central_band(ranks)
    pairs = sorted(zip(ranks, entities))
    outliers = tuple((e, r) for r, e in pairs if r < lo or r > hi)
    return TopKBoxStat(
        k=len(ranks),
        criterion=criterion,
        inner=(lo, hi),
        mean_rank=float(np.mean(ranks)),
        outliers=outliers,
        ranks=tuple(r for r, _ in pairs),
    )


def powerlaw_diagnostic(values: Iterable[float]) -> tuple[float, float]:
    """Slope and R^2 of log(value) against log(rank), values sorted descending.

    A sanity check only; it does not test whether the data follow a power law.
    """
    v = np.asarray([x for x in values if x > 0], dtype=float)
    if v.size < 30:
        raise MomentumError(f"insufficient data: {v.size} positive values, need 30")
    y = np.log(np.sort(v)[::-1])
    x = np.log(np.arange(1, v.size + 1))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    # constant data is fit exactly by a flat line
    r2 = 1.0 if ss_tot == 0 else 1.0 - float((resid**2).sum()) / ss_tot
    return float(slope), r2
