"""Seeded synthetic populations for small-frontier experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date, timedelta

import numpy as np

from .core import (
    MomentumError,
    ScoreSnapshot,
    compute_delta_system,
    frontier_mask,
)

COUPLED = "score-coupled"
INDEPENDENT = "independent"
UNIFORM = "uniform"
GAIN_MODELS = (COUPLED, INDEPENDENT, UNIFORM)


@dataclass(frozen=True)
class SynthConfig:
    """Generator parameters.

    Baseline scores follow the rank law ``top_score * i ** -alpha``. Under the
    score-coupled model a gaining entity's absolute gain is
    ``gain_scale * s ** (beta * coupling) * noise`` with Pareto-tailed noise,
    so relative gain falls with score whenever ``beta * coupling < 1``.
    ``coupling = 0`` makes gains independent of score. The uniform model is a
    non-power-law control: gains are uniform and independent of score.

    ``step_noise_tail`` replaces ``noise_tail`` for each step of a generated
    history; windows spanning several steps sum several draws, which thins
    the tail, so single steps are drawn heavier.
    """

    n: int = 20_000
    alpha: float = 1.0
    gain_model: str = COUPLED
    coupling: float = 1.0
    beta: float = 0.8
    noise_tail: float = 5.0
    step_noise_tail: float = 4.0
    negative_fraction: float = 0.2
    top_score: float = 500_000.0
    gain_scale: float = 0.05
    seed: int = 0
    start: date = date(2021, 5, 3)
    days: int = 90

    def __post_init__(self):
        if self.n < 1:
            raise MomentumError("n must be >= 1")
        if not self.alpha > 0:
            raise MomentumError("alpha must be > 0")
        if self.gain_model not in GAIN_MODELS:
            raise MomentumError(f"unknown gain model {self.gain_model!r}")
        if not 0.0 <= self.coupling <= 1.0:
            raise MomentumError("coupling must lie in [0, 1]")
        if not 0.0 <= self.negative_fraction < 1.0:
            raise MomentumError("negative_fraction must lie in [0, 1)")
        if not (self.noise_tail > 0 and self.step_noise_tail > 0 and self.top_score > 0 and self.gain_scale > 0):
            raise MomentumError("noise tails, top_score and gain_scale must be > 0")

    def with_(self, **changes) -> SynthConfig:
        return SynthConfig(**{**self.__dict__, **changes})


def _ids(n: int) -> list[str]:
    width = len(str(n))
    return [f"e{i:0{width}d}" for i in range(1, n + 1)]


def _gains(cfg: SynthConfig, s0: np.ndarray, rng: np.random.Generator, tail: float) -> np.ndarray:
    exponent = cfg.beta * (cfg.coupling if cfg.gain_model == COUPLED else 0.0)
    noise = rng.pareto(tail, s0.size) + 1.0
    gains = cfg.gain_scale * s0**exponent * noise
    losing = rng.random(s0.size) < cfg.negative_fraction
    gains[losing] = -s0[losing] * rng.uniform(0.0, 0.05, losing.sum())
    return gains


def generate_population(cfg: SynthConfig) -> tuple[ScoreSnapshot, ScoreSnapshot]:
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n
    ranks = np.arange(1, n + 1, dtype=float)

    if cfg.gain_model == UNIFORM:
        g = rng.uniform(0.0, 1.0, n) + 1e-9
        rel = rng.uniform(0.0, 1.0, n) + 1e-9
        s0 = g / rel
        s0 = s0 * (cfg.top_score / s0.max())
        s1 = s0 * (1.0 + rel)
    else:
        s0 = cfg.top_score * ranks ** -cfg.alpha
        s1 = np.maximum(s0 + _gains(cfg, s0, rng, cfg.noise_tail), 0.0)

    ids = _ids(n)
    end = cfg.start + timedelta(days=cfg.days)
    before = ScoreSnapshot(cfg.start, dict(zip(ids, s0.tolist())))
    after = ScoreSnapshot(end, dict(zip(ids, s1.tolist())))
    return before, after


def generate_history(cfg: SynthConfig, snapshots: int, step_days: int = 30) -> dict[date, ScoreSnapshot]:
    """An evolving series of snapshots ``step_days`` apart.

    Starts from the rank-law baseline and applies a fresh draw of gains at
    every step, so windows spanning several steps accumulate gains.
    """
    if snapshots < 1 or step_days < 1:
        raise MomentumError("need at least one snapshot and a positive step")
    if cfg.gain_model == UNIFORM:
        raise MomentumError("the uniform control has no history model")
    rng = np.random.default_rng(cfg.seed)
    ids = _ids(cfg.n)
    scores = cfg.top_score * np.arange(1, cfg.n + 1, dtype=float) ** -cfg.alpha
    out = {}
    for step in range(snapshots):
        when = cfg.start + timedelta(days=step * step_days)
        out[when] = ScoreSnapshot(when, dict(zip(ids, scores.tolist())))
        scores = np.maximum(scores + _gains(cfg, scores, rng, cfg.step_noise_tail), 0.0)
    return out


def frontier_size(cfg: SynthConfig) -> int:
    before, after = generate_population(cfg)
    sys = compute_delta_system(before, after, floor=0.0)
    return int(frontier_mask(sys.g, sys.r).sum())


@dataclass(frozen=True)
class ExperimentRow:
    n: int
    trials: int
    mean_size: float
    max_size: int
    min_size: int

    @property
    def ratio(self) -> float:
        """Mean frontier size over ln(N) squared; NaN for N = 1."""
        return self.mean_size / math.log(self.n) ** 2 if self.n > 1 else math.nan


def frontier_size_experiment(cfg: SynthConfig, ns, trials: int) -> list[ExperimentRow]:
    """Frontier-size statistics over ``trials`` consecutive seeds for each N."""
    if trials < 1:
        raise MomentumError("trials must be >= 1")
    rows = []
    for n in ns:
        sizes = [frontier_size(cfg.with_(n=int(n), seed=cfg.seed + t)) for t in range(trials)]
        rows.append(
            ExperimentRow(
                n=int(n),
                trials=trials,
                mean_size=float(np.mean(sizes)),
                max_size=int(max(sizes)),
                min_size=int(min(sizes)),
            )
        )
    return rows
