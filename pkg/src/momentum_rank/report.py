"""Machine- and human-readable renderings of frontier reports and analytics.

JSON output is byte-stable: keys are sorted and gains and momentum values are
rounded to two decimals.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .analytics import FrontierSizeHistogram, InversionCurve, TopKBoxStat, superpose
from .core import ExclusionCertificate, FrontierMembership, FrontierReport, MomentumLeader
from .synth import ExperimentRow

REPORT_VERSION = 1


def _r2(x: float):
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return None
    return round(float(x), 2)


def _iso(d):
    return d.isoformat() if d is not None else None


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)


@dataclass(frozen=True)
class ReportDocument:
    report: FrontierReport
    floor: float
    mode: str

    def leader_record(self, position: int, m: MomentumLeader) -> dict:
        return {
            "position": position,
            "entity": m.entity,
            "rank": m.rank,
            "media_index": _r2(m.score),
            "momentum": _r2(m.momentum),
            "absolute_gain": _r2(m.gains.g),
            "relative_gain": _r2(m.gains.r),
            "interval": [m.interval[0], m.interval[1]],
        }

    def to_dict(self) -> dict:
        start, end = self.report.window
        return {
            "version": REPORT_VERSION,
            "window": {"start": _iso(start), "end": _iso(end)},
            "population": self.report.system.N,
            "leaders": [self.leader_record(i, m) for i, m in enumerate(self.report.leaders, start=1)],
            "metadata": {
                "mode": self.mode,
                "momentum_fn": self.report.momentum_fn,
                "eligibility_floor": self.floor,
            },
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())

    def to_text(self) -> str:
        start, end = self.report.window
        lines = [
            f"Momentum leaders {_iso(start) or '?'} .. {_iso(end) or '?'}"
            f"  (N={self.report.system.N}, mode={self.mode}, momentum={self.report.momentum_fn}, floor={self.floor:g})",
            f"{'#':>3}  {'entity':<24} {'rank':>7} {'media-index':>12} {'momentum':>9} "
            f"{'abs-gain':>11} {'rel-gain':>9}  interval",
        ]
        for i, m in enumerate(self.report.leaders, start=1):
            mi = "-" if math.isnan(m.score) else f"{m.score:.2f}"
            lines.append(
                f"{i:>3}  {m.entity:<24} {m.rank:>7} {mi:>12} {m.momentum:>8.2f}% "
                f"{m.gains.g:>11.2f} {m.gains.r:>9.2f}  ({m.interval[0]}, {m.interval[1]})"
            )
        return "\n".join(lines) + "\n"


def explanation_dict(result, dominators=None) -> dict:
    if isinstance(result, FrontierMembership):
        out = {
            "entity": result.entity,
            "on_frontier": True,
            "gains": [_r2(result.leader.gains.g), _r2(result.leader.gains.r)],
            "momentum": _r2(result.leader.momentum),
        }
    else:
        out = {
            "entity": result.excluded,
            "on_frontier": False,
            "gains": [_r2(result.excluded_gains.g), _r2(result.excluded_gains.r)],
            "dominator": result.dominator,
            "dominator_gains": [_r2(result.dominator_gains.g), _r2(result.dominator_gains.r)],
        }
    if dominators is not None:
        out["all_dominators"] = [
            {"entity": m.entity, "gains": [_r2(m.gains.g), _r2(m.gains.r)]} for m in dominators
        ]
    return out


def explanation_text(result, dominators=None) -> str:
    if isinstance(result, FrontierMembership):
        m = result.leader
        lines = [f"{result.entity}: on the frontier (rank {m.rank}, momentum {m.momentum:.2f}%)"]
    else:
        assert isinstance(result, ExclusionCertificate)
        d, e = result.dominator_gains, result.excluded_gains
        lines = [
            f"{result.excluded}: dominated by {result.dominator}: "
            f"gains ({d.g:.2f}, {d.r:.2f}) > ({e.g:.2f}, {e.r:.2f})"
        ]
    if dominators is not None:
        lines.append("all dominating leaders:")
        lines.extend(f"  {m.entity} ({m.gains.g:.2f}, {m.gains.r:.2f})" for m in dominators)
    return "\n".join(lines) + "\n"


def histogram_dict(hist: FrontierSizeHistogram) -> dict:
    return {
        "buckets": [{"label": lab, "count": c} for lab, c in zip(hist.labels, hist.counts)],
        "mean_size": _r2(hist.mean_size),
        "windows": [
            {"start": w.start.isoformat(), "end": w.end.isoformat(), "size": w.size, "skipped": w.reason or None}
            for w in hist.windows
        ],
    }


def histogram_text(hist: FrontierSizeHistogram) -> str:
    lines = ["start\tend\tfrontier_size"]
    for w in hist.windows:
        lines.append(f"{w.start.isoformat()}\t{w.end.isoformat()}\t{'skipped' if w.skipped else w.size}")
    lines.append("")
    lines.append("size\twindows")
    lines.extend(f"{lab}\t{c}" for lab, c in zip(hist.labels, hist.counts))
    mean = "nan" if math.isnan(hist.mean_size) else f"{hist.mean_size:.2f}"
    lines.append(f"mean\t{mean}")
    skipped = hist.skipped
    if skipped:
        lines.append("")
        lines.append("skipped windows:")
        lines.extend(f"  {w.end.isoformat()}: {w.reason}" for w in skipped)
    return "\n".join(lines) + "\n"


def curve_table(curve: InversionCurve) -> str:
    lines = ["k\trank"]
    lines.extend(f"{k}\t{rank}" for k, _, rank in curve.points)
    return "\n".join(lines) + "\n"


def superposition_table(relative: InversionCurve, absolute: InversionCurve) -> str:
    lines = ["k\trelative_rank\tabsolute_rank"]
    for k, rel, ab in superpose(relative, absolute):
        lines.append(f"{k}\t{'' if rel is None else rel}\t{'' if ab is None else ab}")
    return "\n".join(lines) + "\n"


def boxstats_text(stats: list[TopKBoxStat]) -> str:
    lines = ["k\tcriterion\tinner_low\tinner_high\tmean_rank\toutliers"]
    for s in stats:
        outl = ",".join(f"{e}@{r}" for e, r in s.outliers)
        lines.append(f"{s.k}\t{s.criterion}\t{s.inner[0]}\t{s.inner[1]}\t{s.mean_rank:.2f}\t{outl}")
    return "\n".join(lines) + "\n"


def boxstats_dict(stats: list[TopKBoxStat]) -> list[dict]:
    return [
        {
            "k": s.k,
            "criterion": s.criterion,
            "inner": [s.inner[0], s.inner[1]],
            "mean_rank": _r2(s.mean_rank),
            "outliers": [{"entity": e, "rank": r} for e, r in s.outliers],
        }
        for s in stats
    ]


def experiment_text(rows: list[ExperimentRow]) -> str:
    lines = ["n\ttrials\tmean_size\tmax_size\tmin_size\tmean_over_ln2n"]
    for row in rows:
        ratio = "nan" if math.isnan(row.ratio) else f"{row.ratio:.4f}"
        lines.append(f"{row.n}\t{row.trials}\t{row.mean_size:.2f}\t{row.max_size}\t{row.min_size}\t{ratio}")
    return "\n".join(lines) + "\n"


def experiment_dict(rows: list[ExperimentRow]) -> list[dict]:
    return [
        {
            "n": row.n,
            "trials": row.trials,
            "mean_size": _r2(row.mean_size),
            "max_size": row.max_size,
            "min_size": row.min_size,
            "mean_over_ln2n": None if math.isnan(row.ratio) else round(row.ratio, 4),
        }
        for row in rows
    ]
