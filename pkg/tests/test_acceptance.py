"""Acceptance suite: one test per criterion, summarised as PASS/FAIL lines at the end of the run."""

import json
import math
import time

import numpy as np
import pytest

from momentum_rank.analytics import box_stat, bucket_sizes
from momentum_rank.cli import main
from momentum_rank.core import (
    DeltaSystem,
    ExclusionCertificate,
    GainVector,
    build_frontier_report,
    compute_delta_system,
    dominance_bounds,
    explain_exclusion,
    frontier_mask,
    pareto_dominates,
    pareto_frontier,
)
from momentum_rank.synth import SynthConfig, frontier_size_experiment

from conftest import END, KHARI_TURNER, MUTU, START, SUMMER_LEADERS, WILLIAMS, snapshots_from_gains, leader_rows, write_csv

criterion = pytest.mark.criterion


def brute_mask(g, r):
    """All-pairs O(N^2) maximality check, vectorised over one axis."""
    g, r = np.asarray(g, float), np.asarray(r, float)
    beaten = (g[None, :] > g[:, None]) & (r[None, :] > r[:, None])
    return ~beaten.any(axis=1)


def random_instance(rng, n_max):
    n = int(rng.integers(1, n_max + 1))
    kind = rng.integers(3)
    if kind == 0:
        # coarse integer grid: many duplicates and exact ties
        g = rng.integers(-20, 21, n).astype(float)
        r = rng.integers(-20, 21, n).astype(float)
    elif kind == 1:
        g = rng.normal(0, 100, n)
        r = rng.normal(0, 10, n)
    else:
        g = rng.pareto(1.5, n) * rng.choice([-1.0, 1.0], n, p=[0.2, 0.8])
        r = rng.pareto(1.5, n) * rng.choice([-1.0, 1.0], n, p=[0.2, 0.8])
        dup = rng.integers(0, n, n // 4)
        g[dup[: len(dup) // 2]] = g[dup[len(dup) // 2 :][: len(dup) // 2]]
    return g, r


@criterion(1, "nine published leader vectors form a nine-leader antichain, r ascending as g descends")
def test_criterion_01_leader_antichain(leader_system):
    t0 = time.perf_counter()
    leaders = pareto_frontier(leader_system)
    elapsed = time.perf_counter() - t0
    assert sorted(leaders) == sorted(name for name, *_ in SUMMER_LEADERS)
    by_g = sorted((leader_system.gains_of(e) for e in leaders), key=lambda v: -v.g)
    assert all(b.r > a.r for a, b in zip(by_g, by_g[1:]))
    assert elapsed < 1.0


@criterion(2, "published dominance pairs")
def test_criterion_02_dominance_fixtures():
    assert pareto_dominates(GainVector(332.62, 198.52), GainVector(*KHARI_TURNER[1:]))
    assert pareto_dominates(GainVector(866.66, 35.62), GainVector(*MUTU[1:]))
    assert pareto_dominates(GainVector(801.55, 80.6), GainVector(*WILLIAMS[1:]))


@criterion(3, "Mutu certificate names Taeuber-Arp; all-dominators matches brute force and has seven members")
def test_criterion_03_exclusion_certificates():
    before, after = snapshots_from_gains(leader_rows(MUTU))
    rep = build_frontier_report(compute_delta_system(before, after))
    assert {m.entity for m in rep.leaders} == {name for name, *_ in SUMMER_LEADERS}

    cert = explain_exclusion(MUTU[0], rep)
    assert isinstance(cert, ExclusionCertificate)
    assert cert.dominator == "Sophie Taeuber-Arp"

    listed = [m.entity for m in rep.dominators_of(MUTU[0])]
    oracle = [name for name, _, g, r in SUMMER_LEADERS if g > MUTU[1] and r > MUTU[2]]
    assert sorted(listed) == sorted(oracle)
    assert len(listed) == 7, f"brute force finds {len(oracle)} dominating leaders: {sorted(oracle)}"


@criterion(4, "sweep equals O(N^2) brute force on 1000 random instances")
def test_criterion_04_sweep_oracle():
    rng = np.random.default_rng(20210801)
    t0 = time.perf_counter()
    for _ in range(1000):
        g, r = random_instance(rng, 500)
        assert np.array_equal(frontier_mask(g, r), brute_mask(g, r))
    assert time.perf_counter() - t0 < 30.0


@criterion(5, "dominance intervals are sound on 200 random instances")
def test_criterion_05_interval_soundness():
    rng = np.random.default_rng(7)
    for _ in range(200):
        g, r = random_instance(rng, 300)
        sys = DeltaSystem.from_gains([(f"e{i}", float(a), float(b)) for i, (a, b) in enumerate(zip(g, r))])
        leaders = set(np.flatnonzero(brute_mask(sys.g, sys.r)) + 1)
        for rank in leaders:
            entity = sys.entry(int(rank))
            left, right = dominance_bounds(entity.entity, sys)
            assert left < rank < right
            for inside in range(left + 1, right):
                if inside != rank:
                    assert inside not in leaders
                    assert pareto_dominates(entity.gains, sys.entry(inside).gains)
            for edge in (left, right):
                if 1 <= edge <= sys.N:
                    assert not pareto_dominates(entity.gains, sys.entry(edge).gains)


@criterion(6, "synthetic frontiers stay small and track ln^2 N")
def test_criterion_06_small_frontier():
    t0 = time.perf_counter()
    cfg = SynthConfig()
    (row,) = frontier_size_experiment(cfg, [20_000], trials=70)
    assert 6 <= row.mean_size <= 15
    assert 4 <= row.min_size and row.max_size <= 25
    rows = frontier_size_experiment(cfg, [1000, 2000, 4000, 8000, 16000], trials=70)
    ratios = [r.mean_size / math.log(r.n) ** 2 for r in rows]
    assert max(ratios) / min(ratios) <= 3.0
    assert time.perf_counter() - t0 < 120.0


@criterion(7, "box-stat fixture: mean 9.3, rank 45 an outlier outside the inner band")
def test_criterion_07_boxstat_fixture():
    ranks = [1, 2, 3, 4, 5, 6, 7, 8, 9, 45]
    stat = box_stat([f"e{r}" for r in ranks], ranks)
    assert [r for _, r in stat.outliers] == [45]
    assert not stat.inner[0] <= 45 <= stat.inner[1]
    assert stat.mean_rank == 9.3, f"arithmetic mean of the cohort is {sum(ranks) / len(ranks)}"


@criterion(8, "snapshots inverted from the leader rows reproduce every (g, r) to 2 decimals through the frontier command")
def test_criterion_08_gain_round_trip(tmp_path, capsys):
    before, after = snapshots_from_gains(leader_rows(), START, END)
    write_csv(tmp_path / "b.csv", before)
    write_csv(tmp_path / "a.csv", after)
    assert main(["frontier", "--before", str(tmp_path / "b.csv"), "--after", str(tmp_path / "a.csv"),
                 "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    got = {m["entity"]: (m["absolute_gain"], m["relative_gain"]) for m in doc["leaders"]}
    assert len(got) == len(SUMMER_LEADERS)
    for name, _, g, r in SUMMER_LEADERS:
        assert round(got[name][0] - g, 2) == 0 and round(got[name][1] - r, 2) == 0


@criterion(9, "size multiset {7x24, 10x36, 13x10} buckets to (24, 36, 10), mean below 10")
def test_criterion_09_histogram():
    hist = bucket_sizes([7] * 24 + [10] * 36 + [13] * 10)
    assert hist.inner_counts == (24, 36, 10)
    assert sum(hist.counts) == 70
    assert hist.mean_size < 10


@criterion(10, "every command prints byte-identical stdout on repeat runs")
def test_criterion_10_determinism(tmp_path, capsys):
    before, after = snapshots_from_gains(leader_rows(MUTU, WILLIAMS, KHARI_TURNER))
    b, a = tmp_path / "2021-05-01.csv", tmp_path / "2021-08-01.csv"
    write_csv(b, before)
    write_csv(a, after)
    pair = ["--before", str(b), "--after", str(a)]
    store = tmp_path / "store"
    assert main(["simulate", "--n", "300", "--trials", "1", "--dump", str(store)]) == 0
    capsys.readouterr()
    commands = [
        ["frontier", *pair],
        ["frontier", *pair, "--format", "json", "--momentum-fn", "linear-width"],
        ["explain", *pair, "--entity", MUTU[0], "--all-dominators"],
        ["explain", *pair, "--entity", "Basquiat", "--format", "json"],
        ["windows", "--store", str(store), "--length", "90", "--format", "json"],
        ["curves", *pair, "--out", str(tmp_path / "c")],
        ["boxstats", *pair, "--k", "3,12"],
        ["simulate", "--n", "500,1000", "--trials", "5", "--seed", "3"],
        ["simulate", "--n", "400", "--trials", "4", "--model", "uniform", "--format", "json"],
    ]
    for argv in commands:
        outputs = []
        for _ in range(2):
            assert main(argv) == 0, argv
            outputs.append(capsys.readouterr().out.encode())
        assert outputs[0] == outputs[1], argv
        assert outputs[0]
