"""Delta systems, Pareto dominance over (absolute gain, relative gain), and
the momentum-leader frontier with its dominance intervals and exclusion
certificates.

Ranks are 1-based ordinals by descending final score; rank 1 is the entity
with the highest score at the end of the window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date
from functools import cached_property
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence, Union

import numpy as np

EntityId = str

SIMPLE = "simple"
SHARE = "share"
MODES = (SIMPLE, SHARE)

INTERSECTION = "intersection"
CARRY_FORWARD = "carry-forward"
POLICIES = (INTERSECTION, CARRY_FORWARD)

DEFAULT_FLOOR = 1.0


class MomentumError(ValueError):
    """Base class for input errors raised by this package."""


class NoCommonEntitiesError(MomentumError):
    pass


class NotOnFrontierError(MomentumError):
    pass


class MalformedIntervalError(MomentumError):
    pass


class UnknownEntityError(MomentumError, KeyError):
    def __str__(self) -> str:  # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""


class GainVector(NamedTuple):
    g: float
    r: float


@dataclass(frozen=True)
class ScoreSnapshot:
    """Scores of a population of entities as of one calendar date."""

    as_of: date | None
    scores: Mapping[EntityId, float]

    def __post_init__(self):
        clean = {}
        for key, value in dict(self.scores).items():
            key = str(key)
            if not key:
                raise MomentumError("entity id must be non-empty")
            value = float(value)
            if not math.isfinite(value) or value < 0:
                raise MomentumError(f"score for {key!r} must be finite and >= 0, got {value}")
            if key in clean:
                raise MomentumError(f"duplicate entity id {key!r}")
            clean[key] = value
        object.__setattr__(self, "scores", MappingProxyType(clean))

    def __len__(self) -> int:
        return len(self.scores)

    def scaled(self, factor: float) -> ScoreSnapshot:
        return ScoreSnapshot(self.as_of, {k: v * factor for k, v in self.scores.items()})


class Entry(NamedTuple):
    entity: EntityId
    rank: int
    before: float
    after: float
    gains: GainVector


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DeltaSystem:
    """N ranked entities with per-entity absolute and relative gain over one window.

    Arrays are aligned by rank position (index 0 is rank 1). ``before`` and
    ``after`` are NaN for systems built directly from gain vectors.
    """

    ids: tuple[EntityId, ...]
    before: np.ndarray
    after: np.ndarray
    g: np.ndarray
    r: np.ndarray
    start: date | None = None
    end: date | None = None
    mode: str = SIMPLE

    @classmethod
    def from_gains(
        cls,
        rows: Iterable[tuple[EntityId, float, float]],
        start: date | None = None,
        end: date | None = None,
    ) -> DeltaSystem:
        """Build a system from ``(id, g, r)`` rows already listed in rank order."""
        rows = list(rows)
        if not rows:
            raise MomentumError("a delta system needs at least one entity")
        ids = tuple(str(row[0]) for row in rows)
        if len(set(ids)) != len(ids):
            raise MomentumError("duplicate entity id")
        nan = [math.nan] * len(rows)
        return cls(
            ids=ids,
            before=_frozen(nan),
            after=_frozen(nan),
            g=_frozen([row[1] for row in rows]),
            r=_frozen([row[2] for row in rows]),
            start=start,
            end=end,
            mode="gains",
        )

    @property
    def N(self) -> int:
        return len(self.ids)

    def __len__(self) -> int:
        return len(self.ids)

    @cached_property
    def _position(self) -> dict[EntityId, int]:
        return {entity: i for i, entity in enumerate(self.ids)}

    def __contains__(self, entity) -> bool:
        return str(entity) in self._position

    def position(self, entity: EntityId) -> int:
        try:
            return self._position[str(entity)]
        except KeyError:
            raise UnknownEntityError(f"entity not in window: {entity}") from None

    def rank_of(self, entity: EntityId) -> int:
        return self.position(entity) + 1

    def gains_of(self, entity: EntityId) -> GainVector:
        i = self.position(entity)
        return GainVector(float(self.g[i]), float(self.r[i]))

    def entry(self, rank: int) -> Entry:
        i = rank - 1
        return Entry(
            self.ids[i],
            rank,
            float(self.before[i]),
            float(self.after[i]),
            GainVector(float(self.g[i]), float(self.r[i])),
        )

    @property
    def entries(self) -> list[Entry]:
        return [self.entry(rank) for rank in range(1, self.N + 1)]


def compute_delta_system(
    before: ScoreSnapshot,
    after: ScoreSnapshot,
    mode: str = SIMPLE,
    floor: float = DEFAULT_FLOOR,
    policy: str = INTERSECTION,
) -> DeltaSystem:
    """Gains of every eligible entity between two snapshots.

    Entities whose baseline score is below ``floor`` (or exactly zero) are
    ineligible, so relative gain is always finite. With the
    ``carry-forward`` policy an entity missing from ``after`` is treated as
    unchanged; entities missing from ``before`` are never eligible.
    """
    if mode not in MODES:
        raise MomentumError(f"unknown relative-gain mode {mode!r}; expected one of {MODES}")
    if policy not in POLICIES:
        raise MomentumError(f"unknown entity-set policy {policy!r}; expected one of {POLICIES}")
    if not len(before) or not len(after):
        raise MomentumError("both snapshots must be non-empty")

    s0_map, s1_map = before.scores, after.scores
    if policy == INTERSECTION:
        common = [k for k in s0_map if k in s1_map]
    else:
        common = list(s0_map)
    if not common:
        raise NoCommonEntitiesError("no common entities")

    eligible = [k for k in common if s0_map[k] >= floor and s0_map[k] > 0]
    if not eligible:
        raise MomentumError(f"no entities with baseline score >= {floor}")

    s0 = np.array([s0_map[k] for k in eligible])
    s1 = np.array([s1_map.get(k, s0_map[k]) for k in eligible])
    order = sorted(range(len(eligible)), key=lambda i: (-s1[i], -s0[i], eligible[i]))
    ids = tuple(eligible[i] for i in order)
    s0, s1 = s0[order], s1[order]

    g = s1 - s0
    if mode == SIMPLE:
        r = 100.0 * g / s0
    else:
        share0 = s0 / s0.sum()
        total1 = s1.sum()
        share1 = s1 / total1 if total1 > 0 else np.zeros_like(s1)
        r = 100.0 * (share1 - share0) / share0

    return DeltaSystem(
        ids=ids,
        before=_frozen(s0),
        after=_frozen(s1),
        g=_frozen(g),
        r=_frozen(r),
        start=before.as_of,
        end=after.as_of,
        mode=mode,
    )


def invert_gains(g: float, r: float) -> tuple[float, float]:
    """Baseline and final score that produce ``(g, r)`` under simple relative gain."""
    if r == 0 or g / r <= 0:
        raise MomentumError(f"cannot invert gains ({g}, {r}) to a positive baseline")
    s0 = 100.0 * g / r
    return s0, s0 + g


def pareto_dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True iff ``a`` beats ``b`` strictly in both absolute and relative gain."""
    return a[0] > b[0] and a[1] > b[1]


def frontier_mask(g, r) -> np.ndarray:
    """Boolean mask of the maximal elements among the points ``(g[i], r[i])``.

    Sweeps points by descending g. A point is kept iff no point with strictly
    greater g has strictly greater r, i.e. its r is at least the best r seen
    so far; points sharing the same g never dominate each other.
    """
    g = np.asarray(g, dtype=float)
    r = np.asarray(r, dtype=float)
    n = g.size
    if n == 0:
        return np.zeros(0, dtype=bool)
    order = np.lexsort((-r, -g))
    gs, rs = g[order], r[order]
    new_group = np.ones(n, dtype=bool)
    new_group[1:] = gs[1:] != gs[:-1]
    group_start = np.maximum.accumulate(np.where(new_group, np.arange(n), 0))
    running = np.maximum.accumulate(rs)
    best_above = np.full(n, -np.inf)
    has_above = group_start > 0
    best_above[has_above] = running[group_start[has_above] - 1]
    mask = np.empty(n, dtype=bool)
    mask[order] = rs >= best_above
    return mask


def pareto_frontier(sys: DeltaSystem) -> list[EntityId]:
    """Momentum leaders of ``sys`` in rank order."""
    mask = frontier_mask(sys.g, sys.r)
    return [sys.ids[i] for i in np.flatnonzero(mask)]


def _open_bounds(sys: DeltaSystem, pos: int) -> tuple[int, int]:
    gl, rl = sys.g[pos], sys.r[pos]
    dominated = (sys.g < gl) & (sys.r < rl)
    above = np.flatnonzero(~dominated[:pos])
    below = np.flatnonzero(~dominated[pos + 1 :])
    left = int(above[-1]) + 1 if above.size else 0
    right = pos + 2 + int(below[0]) if below.size else sys.N + 1
    return left, right


def dominance_bounds(entity: EntityId, sys: DeltaSystem) -> tuple[int, int]:
    """Unclamped open rank interval dominated by a frontier entity.

    The bounds are the ranks of the nearest non-dominated entities on either
    side, with 0 and N + 1 standing in when there is none.
    """
    pos = sys.position(entity)
    if not frontier_mask(sys.g, sys.r)[pos]:
        raise NotOnFrontierError(f"no interval for dominated entity: {entity}")
    return _open_bounds(sys, pos)


def dominance_interval(entity: EntityId, sys: DeltaSystem) -> tuple[int, int]:
    left, right = dominance_bounds(entity, sys)
    return max(left, 1), min(right, sys.N)


# Momentum functions take (L, R, N, rank, gains) and return a percentage.
MomentumFn = Callable[[int, int, int, int, GainVector], float]


def log_width_momentum(left: int, right: int, n: int, rank: int = 0, gains=None) -> float:
    """Log-width of the dominated cohort normalised by log population size.

    A stand-in for the weighted momentum of the original method, whose
    formula is not available here.
    """
    if n <= 1:
        return 0.0
    return 100.0 * math.log(right / max(left, 1)) / math.log(n)


def linear_width_momentum(left: int, right: int, n: int, rank: int = 0, gains=None) -> float:
    if n <= 1:
        return 0.0
    return 100.0 * (right - left) / (n - 1)


MOMENTUM_FUNCTIONS: dict[str, MomentumFn] = {
    "log-width": log_width_momentum,
    "linear-width": linear_width_momentum,
}
DEFAULT_MOMENTUM = "log-width"


def resolve_momentum_fn(fn: Union[str, MomentumFn, None]) -> tuple[str, MomentumFn]:
    if fn is None:
        fn = DEFAULT_MOMENTUM
    if isinstance(fn, str):
        try:
            return fn, MOMENTUM_FUNCTIONS[fn]
        except KeyError:
            known = ", ".join(sorted(MOMENTUM_FUNCTIONS))
            raise MomentumError(f"unknown momentum function {fn!r}; known: {known}") from None
    return getattr(fn, "__name__", "custom"), fn


def momentum_score(
    interval: tuple[int, int],
    n: int,
    fn: Union[str, MomentumFn, None] = None,
    rank: int = 0,
    gains: GainVector | None = None,
) -> float:
    left, right = interval
    if right < left:
        raise MalformedIntervalError(f"malformed interval ({left}, {right})")
    _, func = resolve_momentum_fn(fn)
    return float(func(left, right, n, rank, gains))


@dataclass(frozen=True)
class MomentumLeader:
    entity: EntityId
    rank: int
    gains: GainVector
    interval: tuple[int, int]
    momentum: float
    score: float = math.nan
    bounds: tuple[int, int] = (0, 0)  # unclamped open interval


@dataclass(frozen=True)
class ExclusionCertificate:
    excluded: EntityId
    excluded_gains: GainVector
    dominator: EntityId
    dominator_gains: GainVector

    def __post_init__(self):
        if not pareto_dominates(self.dominator_gains, self.excluded_gains):
            raise MomentumError(f"{self.dominator} does not dominate {self.excluded}")

    def describe(self) -> str:
        d, e = self.dominator_gains, self.excluded_gains
        return (
            f"{self.excluded} is dominated by {self.dominator}: "
            f"gains ({d.g:.2f}, {d.r:.2f}) > ({e.g:.2f}, {e.r:.2f})"
        )


@dataclass(frozen=True)
class FrontierMembership:
    entity: EntityId
    leader: MomentumLeader

    def describe(self) -> str:
        return f"{self.entity} is on the frontier"


@dataclass(frozen=True, eq=False)
class FrontierReport:
    system: DeltaSystem
    leaders: tuple[MomentumLeader, ...]
    dominator_index: Mapping[EntityId, EntityId]
    momentum_fn: str = DEFAULT_MOMENTUM
    _by_id: Mapping[EntityId, MomentumLeader] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dominator_index", MappingProxyType(dict(self.dominator_index)))
        object.__setattr__(self, "_by_id", MappingProxyType({m.entity: m for m in self.leaders}))

    @property
    def window(self) -> tuple[date | None, date | None]:
        return self.system.start, self.system.end

    def is_leader(self, entity: EntityId) -> bool:
        return str(entity) in self._by_id

    def leader(self, entity: EntityId) -> MomentumLeader:
        return self._by_id[str(entity)]

    def dominators_of(self, entity: EntityId) -> list[MomentumLeader]:
        """Every leader dominating ``entity``: the certificate leader first, then by ascending g."""
        vec = self.system.gains_of(entity)
        found = [m for m in self.leaders if pareto_dominates(m.gains, vec)]
        found.sort(key=lambda m: (m.gains.g, m.rank))
        chosen = self.dominator_index.get(str(entity))
        found.sort(key=lambda m: m.entity != chosen)
        return found


def _certificates(sys: DeltaSystem, positions: np.ndarray, bounds: list[tuple[int, int]]) -> dict:
    """Map each non-frontier entity to the leader that certifies its exclusion.

    Preference goes to a dominating leader whose dominance interval contains
    the entity's rank (its cohort), then to the smallest absolute gain, then
    to the higher rank.
    """
    n = sys.N
    ranks = np.arange(1, n + 1)
    is_leader = np.zeros(n, dtype=bool)
    is_leader[positions] = True
    order = sorted(range(len(positions)), key=lambda j: (sys.g[positions[j]], positions[j]))

    owner = np.full(n, -1)
    dominated_by = []
    for j in order:
        p = positions[j]
        dom = (sys.g < sys.g[p]) & (sys.r < sys.r[p]) & ~is_leader
        dominated_by.append((j, dom))
        left, right = bounds[j]
        take = dom & (owner < 0) & (ranks > left) & (ranks < right)
        owner[take] = j
    for j, dom in dominated_by:
        take = dom & (owner < 0)
        owner[take] = j

    return {sys.ids[i]: sys.ids[positions[owner[i]]] for i in np.flatnonzero(~is_leader)}


def build_frontier_report(sys: DeltaSystem, fn: Union[str, MomentumFn, None] = None) -> FrontierReport:
    name, func = resolve_momentum_fn(fn)
    positions = np.flatnonzero(frontier_mask(sys.g, sys.r))
    bounds = [_open_bounds(sys, int(p)) for p in positions]

    leaders = []
    for p, (left, right) in zip(positions, bounds):
        rank = int(p) + 1
        gains = GainVector(float(sys.g[p]), float(sys.r[p]))
        interval = (max(left, 1), min(right, sys.N))
        leaders.append(
            MomentumLeader(
                entity=sys.ids[p],
                rank=rank,
                gains=gains,
                interval=interval,
                momentum=momentum_score(interval, sys.N, func, rank, gains),
                score=float(sys.after[p]),
                bounds=(left, right),
            )
        )
    leaders.sort(key=lambda m: (-m.momentum, m.rank))
    index = _certificates(sys, positions, bounds)
    return FrontierReport(sys, tuple(leaders), index, name)


def explain_exclusion(entity: EntityId, report: FrontierReport) -> ExclusionCertificate | FrontierMembership:
    entity = str(entity)
    if entity not in report.system:
        raise UnknownEntityError(f"entity not in window: {entity}")
    if report.is_leader(entity):
        return FrontierMembership(entity, report.leader(entity))
    dominator = report.dominator_index[entity]
    return ExclusionCertificate(
        excluded=entity,
        excluded_gains=report.system.gains_of(entity),
        dominator=dominator,
        dominator_gains=report.leader(dominator).gains,
    )
