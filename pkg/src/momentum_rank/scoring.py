"""A simplified, configurable media-index scorer for mention events.

Each mention of an entity adds

    domain_weight * headline_factor * length_factor * exclusivity_factor

to that entity's cumulative score, where

* ``headline_factor`` is ``headline_multiplier`` when the name is in the
  headline and 1 otherwise,
* ``length_factor = 1 + length_bonus * min(1, words / length_scale)``,
* ``exclusivity_factor = co_mentions ** -exclusivity_exponent``.

The default shapes and constants are invented; only the direction of each
effect is grounded.
"""

from __future__ import annotations

import configparser
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path
from typing import Iterable, Mapping

from .core import EntityId, MomentumError, ScoreSnapshot


@dataclass(frozen=True)
class MentionEvent:
    entity: EntityId
    domain: str
    domain_weight: float | None = None  # None: look the domain up in the config
    in_headline: bool = False
    words: int = 0
    co_mentions: int = 1
    timestamp: datetime | None = None

    def __post_init__(self):
        if self.co_mentions < 1:
            raise MomentumError("co_mentions counts the entity itself and must be >= 1")
        if self.domain_weight is not None and not self.domain_weight > 0:
            raise MomentumError("domain weight must be > 0")
        if self.words < 0:
            raise MomentumError("article length must be >= 0")


@dataclass(frozen=True)
class WeightsConfig:
    headline_multiplier: float = 3.0
    length_scale: float = 800.0
    length_bonus: float = 1.0
    exclusivity_exponent: float = 0.5
    default_domain_weight: float = 1.0
    domain_weights: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.headline_multiplier >= 1:
            raise MomentumError("headline_multiplier must be >= 1")
        if not (self.length_scale > 0 and self.default_domain_weight > 0):
            raise MomentumError("length_scale and default_domain_weight must be > 0")
        if self.length_bonus < 0 or self.exclusivity_exponent < 0:
            raise MomentumError("length_bonus and exclusivity_exponent must be >= 0")
        for domain, w in self.domain_weights.items():
            if not w > 0:
                raise MomentumError(f"domain weight for {domain!r} must be > 0")

    @classmethod
    def identity(cls) -> WeightsConfig:
        """Every factor fixed at 1, so an increment equals the domain weight."""
        return cls(headline_multiplier=1.0, length_bonus=0.0, exclusivity_exponent=0.0)

    def domain_weight(self, event: MentionEvent) -> float:
        if event.domain_weight is not None:
            return event.domain_weight
        return self.domain_weights.get(event.domain, self.default_domain_weight)

    def headline_factor(self, in_headline: bool) -> float:
        return self.headline_multiplier if in_headline else 1.0

    def length_factor(self, words: int) -> float:
        return 1.0 + self.length_bonus * min(1.0, words / self.length_scale)

    def exclusivity_factor(self, co_mentions: int) -> float:
        return co_mentions ** -self.exclusivity_exponent

    def increment(self, event: MentionEvent) -> float:
        return (
            self.domain_weight(event)
            * self.headline_factor(event.in_headline)
            * self.length_factor(event.words)
            * self.exclusivity_factor(event.co_mentions)
        )


def load_weights(path) -> WeightsConfig:
    """Read an INI-style weights file.

    ``[factors]`` holds the scalar parameters (any subset of the
    ``WeightsConfig`` fields) and ``[domains]`` maps domain names to weights.
    """
    parser = configparser.ConfigParser()
    parser.optionxform = str
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as fh:
            parser.read_file(fh)
    except FileNotFoundError:
        raise MomentumError(f"{path}: no such file") from None
    except configparser.Error as exc:
        raise MomentumError(f"{path}: {exc}") from None

    known = {
        "headline_multiplier",
        "length_scale",
        "length_bonus",
        "exclusivity_exponent",
        "default_domain_weight",
    }
    kwargs: dict = {}
    try:
        if parser.has_section("factors"):
            for key, value in parser.items("factors"):
                if key not in known:
                    raise MomentumError(f"{path}: unknown factor {key!r}")
                kwargs[key] = float(value)
        if parser.has_section("domains"):
            kwargs["domain_weights"] = {k: float(v) for k, v in parser.items("domains")}
    except ValueError as exc:
        raise MomentumError(f"{path}: {exc}") from None
    return WeightsConfig(**kwargs)


def score_mentions(events: Iterable[MentionEvent], weights: WeightsConfig | None = None) -> dict[EntityId, float]:
    weights = weights or WeightsConfig()
    totals: dict[EntityId, float] = defaultdict(float)
    for event in events:
        totals[event.entity] += weights.increment(event)
    return dict(totals)


def apply_mentions(
    snap: ScoreSnapshot, events: Iterable[MentionEvent], weights: WeightsConfig | None = None, as_of: date | None = None
) -> ScoreSnapshot:
    """New snapshot with the event increments added; scores never decrease."""
    scores = dict(snap.scores)
    for entity, inc in score_mentions(events, weights).items():
        scores[entity] = scores.get(entity, 0.0) + inc
    return ScoreSnapshot(as_of or snap.as_of, scores)
