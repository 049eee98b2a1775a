"""Alpha-count filter for telling transient faults from permanent ones.

Every error judgment adds 1 to the score; every error-free judgment
multiplies it by K. A score at or above the threshold T marks the entity as
affected by a permanent (or intermittent) fault.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable


@dataclass(frozen=True)
class AlphaCount:
    score: float = 0.0
    K: float = 0.9
    T: float = 3.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.K < 1.0:
            raise ValueError(f"K must lie in [0, 1), got {self.K}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if self.score < 0:
            raise ValueError("score must be non-negative")

    @property
    def permanent(self) -> bool:
        return self.score >= self.T

    @property
    def transient(self) -> bool:
        return not self.permanent


def alpha_update(a: AlphaCount, error: bool) -> AlphaCount:
    return replace(a, score=a.score + 1.0 if error else a.score * a.K)


def alpha_run(judgments: Iterable[bool], K: float = 0.9, T: float = 3.0) -> list[AlphaCount]:
    """Scores after each judgment of a stream, starting from zero."""
    a = AlphaCount(0.0, K, T)
    out = []
    for j in judgments:
        a = alpha_update(a, j)
        out.append(a)
    return out


@dataclass(frozen=True)
class AlphaParams:
    K: float = 0.9
    T: float = 3.0
    period: float = 1500.0  # judgment period, local ms

    def __post_init__(self) -> None:
        AlphaCount(0.0, self.K, self.T)
        if self.period <= 0:
            raise ValueError("judgment period must be positive")


@dataclass(frozen=True)
class AlphaTrack:
    """Alpha-count bound to a judgment-period grid of notification timestamps.

    Judgment periods are the intervals ``[j*P, (j+1)*P)`` of local time. A
    period holding no errors counts as one error-free judgment; each error
    notification counts as one error judgment when it arrives.
    """

    count: AlphaCount = AlphaCount()
    last_period: int | None = None

    def feed_error(self, stamp: float, period: float) -> "AlphaTrack":
        p = math.floor(stamp / period)
        a = self.count
        if self.last_period is not None and p > self.last_period + 1:
            a = replace(a, score=a.score * a.K ** (p - self.last_period - 1))
        a = alpha_update(a, True)
        last = p if self.last_period is None else max(p, self.last_period)
        return AlphaTrack(a, last)

    def score_at(self, stamp: float, period: float) -> float:
        """Score after the error-free periods completed before ``stamp``."""
        if self.last_period is None:
            return self.count.score
        empty = math.floor(stamp / period) - self.last_period - 1
        return self.count.score * self.count.K ** max(empty, 0)
