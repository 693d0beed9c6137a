"""Input distributions on [0, 1), key rounding, and the occupancy/smoothness experiments.

A density ``mu`` is (f1, f2)-smooth when, for some constant beta, every
interval [c1, c3] and every s, the right-anchored window
``[c2 - (c3 - c1) / f1(s), c2]`` receives conditional mass at most
``beta * f2(s) / s``. Only the power family ``f1 = s**alpha``,
``f2 = s**(1 - delta)`` is sampled here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import ndtr, ndtri

from .core import SmoothParams

KINDS = ("uniform", "ramp", "normal", "atoms")
_ALIASES = {"truncated_normal": "normal", "atom_cluster": "atoms"}
_BELOW_ONE = np.nextafter(1.0, 0.0)


class InsufficientMassError(ValueError):
    """The conditioning interval caught no samples."""


@dataclass(frozen=True)
class Distribution:
    kind: str = "uniform"
    declared_params: Optional[SmoothParams] = None
    # ramp: density (1 - slope/2) + slope*x, slope in [0, 2]
    slope: float = 2.0
    # normal: truncated to [0, 1)
    mean: float = 0.5
    stddev: float = 0.2
    # atoms: `mass` spread uniformly over [center - width/2, center + width/2)
    center: float = 0.3
    width: float = 2.0 ** -20
    mass: float = 0.5

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if not 0 <= self.slope <= 2:
            raise ValueError("ramp slope must lie in [0, 2]")
        if not 0 <= self.mass <= 1:
            raise ValueError("atom mass must lie in [0, 1]")

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        u = rng.random(size)
        if self.kind == "uniform":
            x = u
        elif self.kind == "ramp":
            a, b = 1 - self.slope / 2, self.slope
            x = u if b == 0 else (np.sqrt(a * a + 2 * b * u) - a) / b
        elif self.kind == "normal":
            lo, hi = self._normal_span()
            x = self.mean + self.stddev * ndtri(lo + (hi - lo) * u)
        else:
            in_atom = rng.random(size) < self.mass
            x = np.where(in_atom, self.center - self.width / 2 + self.width * u, u)
        return np.clip(x, 0.0, _BELOW_ONE)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        if self.kind == "uniform":
            return x
        if self.kind == "ramp":
            return (1 - self.slope / 2) * x + self.slope * x * x / 2
        if self.kind == "normal":
            lo, hi = self._normal_span()
            return (ndtr((x - self.mean) / self.stddev) - lo) / (hi - lo)
        left = self.center - self.width / 2
        inside = np.clip((x - left) / self.width, 0.0, 1.0)
        return (1 - self.mass) * x + self.mass * inside

    def _normal_span(self) -> tuple[float, float]:
        return ndtr(-self.mean / self.stddev), ndtr((1 - self.mean) / self.stddev)


def make_distribution(kind: str, **shape) -> Distribution:
    """Distribution with the declared smoothness its kind carries by default."""
    kind = _ALIASES.get(kind, kind)
    params = None if kind == "atoms" else SmoothParams(1.0, 1.0)
    return Distribution(kind=kind, declared_params=params, **shape)


def to_key(x: float, w: int) -> int:
    """Round a unit-interval value down to a ``w``-bit word."""
    return min(math.floor(x * 2.0 ** w), (1 << w) - 1)


def sample_key(d: Distribution, rng: np.random.Generator, w: int) -> int:
    return to_key(float(d.sample(rng, 1)[0]), w)


def sample_keys(d: Distribution, rng: np.random.Generator, w: int, size: int) -> list[int]:
    x = d.sample(rng, size)
    if w <= 52:
        return np.floor(x * 2.0 ** w).astype(np.int64).tolist()
    return [to_key(v, w) for v in x.tolist()]


@dataclass
class OccupancyReport:
    n: int
    k: int
    mean: float
    max: int
    p99: int
    histogram: list[int] = field(repr=False)


def occupancy_experiment(d: Distribution, n: int, k: int, rng: np.random.Generator,
                         lemma_mode: bool = False) -> OccupancyReport:
    """Drop ``n`` draws into ``k`` equal intervals of [0, 1) and summarise the loads.

    In lemma mode ``k`` must be at least ``n ** (alpha/delta)`` for the
    distribution's declared parameters.
    """
    if k < 1:
        raise ValueError("interval count k must be positive")
    if lemma_mode:
        if d.declared_params is None:
            raise ValueError(f"{d.kind} declares no smoothness parameters; lemma mode unavailable")
        need = math.ceil(n ** d.declared_params.ratio - 1e-9)
        if k < need:
            raise ValueError(f"lemma mode needs k >= {need}, got {k}")
    x = d.sample(rng, n)
    bins = np.minimum((x * k).astype(np.int64), k - 1)
    loads = np.bincount(bins, minlength=k)
    hist = np.bincount(loads)
    cum = np.cumsum(hist)
    p99 = int(np.searchsorted(cum, 0.99 * k))
    return OccupancyReport(
        n=n, k=k, mean=n / k, max=int(loads.max()) if n else 0, p99=p99,
        histogram=hist.tolist(),
    )


def smoothness_estimate(d: Distribution, alpha: float, delta: float, trials: int,
                        rng: np.random.Generator, samples: int = 100_000,
                        min_hits: int = 256, max_log_s: int = 20) -> float:
    """Monte Carlo lower bound on the smoothness constant beta.

    Each trial draws ``samples`` points, a random conditioning interval
    [c1, c3] and, per window scale s = 2, 4, ..., a window end c2 centred
    on one of the conditioned points. The window's conditional frequency is
    divided by ``s**-delta``; the largest ratio over all trials is returned.
    Scales whose window would expect fewer than ``min_hits`` points are
    skipped, so the sweep stops short of 2**max_log_s on small samples.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    SmoothParams(alpha, delta)
    best = 0.0
    usable = 0
    for _ in range(trials):
        xs = np.sort(d.sample(rng, samples))
        c1, c3 = np.sort(rng.random(2))
        lo = np.searchsorted(xs, c1, "left")
        hi = np.searchsorted(xs, c3, "right")
        inside = hi - lo
        if inside < 2:
            continue
        usable += 1
        span = c3 - c1
        for j in range(1, max_log_s + 1):
            s = 2.0 ** j
            if inside / s ** alpha < min_hits:
                break
            half = span / s ** alpha / 2
            anchor = xs[lo + rng.integers(inside)]
            c2 = min(anchor + half, c3)
            a = max(c2 - 2 * half, c1)
            hits = np.searchsorted(xs, c2, "right") - np.searchsorted(xs, a, "left")
            # the anchor itself always lands in its own window
            frac = (hits - 1) / (inside - 1)
            best = max(best, frac * s ** delta)
    if not usable:
        raise InsufficientMassError("no trial interval received conditional mass")
    return float(best)
