"""Growth curves sigma -> log M(sigma) and their monotone inversion.

A *source* is any strictly increasing curve evaluable at fresh sigma
(series surrogates or synthetic closed-form rules); profiles are sampled
snapshots of a source on a grid.  Inversion always bisects the continuous
source rather than interpolating samples, so no interpolation error enters
the extended domain.

The composition M_g^{-1}(M_f(sigma)) at the heart of every relative
indicator is one inversion per point, carried out entirely on (level,
mantissa) pairs; the curve value M_f(sigma) is never materialized.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .errors import BracketError, NumericError
from .levelindex import ExtReal, compare
from . import series as series_mod
from .series import SeriesSpec

# Relative sigma resolution of the bisection and the expansion budget.
INVERT_REL_TOL = 1e-12
BRACKET_DOUBLINGS = 120


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid; spacing is linear in sigma or linear in log sigma."""

    sigma_min: float
    sigma_max: float
    count: int
    spacing: str = "linear"  # "linear" | "log"

    def __post_init__(self):
        if not self.sigma_min < self.sigma_max:
            raise ValueError("grid needs sigma_min < sigma_max")
        if self.count < 2:
            raise ValueError("grid needs count >= 2")
        if self.spacing not in ("linear", "log"):
            raise ValueError(f"unknown spacing '{self.spacing}'")
        if self.spacing == "log" and self.sigma_min <= 0:
            raise ValueError("log spacing needs sigma_min > 0")

    def sigmas(self) -> list[float]:
        if self.spacing == "linear":
            return [float(s) for s in np.linspace(self.sigma_min, self.sigma_max, self.count)]
        return [float(s) for s in np.geomspace(self.sigma_min, self.sigma_max, self.count)]

    def describe(self) -> dict:
        return {"sigma_min": self.sigma_min, "sigma_max": self.sigma_max,
                "count": self.count, "spacing": self.spacing}


class GrowthSource:
    """Strictly increasing curve sigma -> log M(sigma) as an ExtReal."""

    sigma_floor: float = 0.0

    def log_m(self, sigma: float) -> ExtReal:
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError

    def key(self) -> str:
        return hashlib.sha256(json.dumps(self.describe(), sort_keys=True).encode()).hexdigest()[:16]


class SeriesLowerSource(GrowthSource):
    """Maximum-term surrogate: a certified lower bound for log M."""

    def __init__(self, spec: SeriesSpec, n_max: int = 64):
        self.spec = spec
        self.n_max = n_max
        self._hint: Optional[int] = None  # warm start only; results do not depend on it

    def log_m(self, sigma: float) -> ExtReal:
        n_star, value = series_mod.max_term_log(self.spec, sigma, n_max=self.n_max, hint=self._hint)
        self._hint = n_star if isinstance(n_star, int) else None
        return value

    def describe(self) -> dict:
        return {"kind": "series", "surrogate": "lower", "spec": self.spec.describe()}


class SeriesUpperSource(GrowthSource):
    """Coefficient-norm sum surrogate: a certified upper bound for log M."""

    def __init__(self, spec: SeriesSpec, tail_tol: float = series_mod.DEFAULT_TAIL_TOL,
                 window_cap: int = series_mod.DEFAULT_WINDOW_CAP, n_max: int = 64):
        self.spec = spec
        self.tail_tol = tail_tol
        self.window_cap = window_cap
        self.n_max = n_max
        self._hint: Optional[int] = None

    def log_m(self, sigma: float) -> ExtReal:
        n_star, _ = series_mod.max_term_log(self.spec, sigma, n_max=self.n_max, hint=self._hint)
        self._hint = n_star if isinstance(n_star, int) else None
        return series_mod.log_sum_upper(self.spec, sigma, tail_tol=self.tail_tol,
                                        window_cap=self.window_cap, n_max=self.n_max,
                                        n_star=n_star)

    def with_caps(self, tail_tol: float, window_cap: int) -> "SeriesUpperSource":
        return SeriesUpperSource(self.spec, tail_tol, window_cap, self.n_max)

    def describe(self) -> dict:
        return {"kind": "series", "surrogate": "upper", "spec": self.spec.describe(),
                "tail_tol": self.tail_tol, "window_cap": self.window_cap}


class SyntheticSource(GrowthSource):
    """Closed-form rule sigma -> log M(sigma); used for profile families."""

    def __init__(self, name: str, params: dict, rule: Callable[[float], ExtReal],
                 sigma_floor: float = 0.0):
        self.name = name
        self.params = params
        self.rule = rule
        self.sigma_floor = sigma_floor

    def log_m(self, sigma: float) -> ExtReal:
        return self.rule(sigma)

    def describe(self) -> dict:
        return {"kind": "synthetic", "family": self.name, "params": self.params}


@dataclass(frozen=True)
class SourceBundle:
    """A curve with its certified sandwich, when one exists.

    upper is the point-estimate curve; lower (absent for synthetic rules)
    drives the other end of every reported indicator interval.
    """

    upper: GrowthSource
    lower: Optional[GrowthSource] = None

    @property
    def lower_or_upper(self) -> GrowthSource:
        return self.lower if self.lower is not None else self.upper

    def surrogates(self) -> list[tuple[str, GrowthSource]]:
        out = [("upper", self.upper)]
        if self.lower is not None:
            out.append(("lower", self.lower))
        return out

    def key(self) -> str:
        return self.upper.key()


@dataclass(frozen=True)
class GrowthProfile:
    source: dict
    grid: GridSpec
    sigmas: tuple[float, ...]
    values: tuple[ExtReal, ...]


def sample_profile(source: GrowthSource, grid: GridSpec) -> GrowthProfile:
    """Evaluate the source on the grid and verify strict monotonicity."""
    sigmas = grid.sigmas()
    if sigmas[0] < source.sigma_floor:
        raise NumericError(
            f"grid starts at sigma={sigmas[0]} below the source floor {source.sigma_floor}"
        )
    values = [source.log_m(s) for s in sigmas]
    for i in range(1, len(values)):
        if compare(values[i - 1], values[i]) >= 0:
            raise NumericError(
                f"profile not strictly increasing between sigma={sigmas[i-1]} and sigma={sigmas[i]}"
            )
    return GrowthProfile(source.describe(), grid, tuple(sigmas), tuple(values))


def invert_modulus(source: GrowthSource, y: ExtReal,
                   bracket: Optional[tuple[float, float]] = None) -> float:
    """sigma with log M(sigma) = y, resolved to 1e-12 relative in sigma.

    The bracket hint is expanded by doubling until it straddles y; the
    lower end floors at max(source floor, 0).
    """
    floor = max(source.sigma_floor, 0.0)
    if bracket is None:
        lo, hi = floor, max(1.0, floor + 1.0)
    else:
        lo, hi = bracket
        lo = max(lo, floor)
        hi = max(hi, lo)

    # Expand upward until log M(hi) >= y.
    span = max(hi - floor, 1.0)
    for _ in range(BRACKET_DOUBLINGS):
        if compare(source.log_m(hi), y) >= 0:
            break
        lo = hi
        span *= 2.0
        hi = floor + span
    else:
        raise BracketError("inversion target above the achievable range after expansion")

    # Contract downward until log M(lo) <= y, flooring at the source floor.
    for _ in range(BRACKET_DOUBLINGS):
        if compare(source.log_m(lo), y) <= 0:
            break
        hi = lo
        lo = floor + (lo - floor) / 2.0
        if lo - floor < 1e-12 * max(1.0, floor):
            lo = floor
            if compare(source.log_m(lo), y) > 0:
                raise BracketError("inversion target below the achievable range at the floor")
            break
    else:
        raise BracketError("bracket contraction exhausted its budget")

    while (hi - lo) > INVERT_REL_TOL * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if compare(source.log_m(mid), y) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def compose_relative(g_source: GrowthSource, f_source: GrowthSource, sigma: float,
                     bracket: Optional[tuple[float, float]] = None) -> float:
    """M_g^{-1}(M_f(sigma)), evaluated in the log/extended domain throughout."""
    return invert_modulus(g_source, f_source.log_m(sigma), bracket=bracket)


def compose_samples(g_source: GrowthSource, f_source: GrowthSource,
                    sigmas: list[float]) -> list[tuple[float, float]]:
    """Composition along a grid, warm-starting each bracket from the last point."""
    out: list[tuple[float, float]] = []
    bracket = None
    for s in sigmas:
        psi = compose_relative(g_source, f_source, s, bracket=bracket)
        out.append((s, psi))
        # next value exceeds this one; seed a short bracket just above it
        step = max(abs(psi) * 0.25, 1.0)
        bracket = (psi, psi + step)
    return out


# ---------------------------------------------------------------------------
# Profile cache: CSV rows (sigma, level, mantissa), keyed by source + grid.
# ---------------------------------------------------------------------------

def profile_cache_key(source: GrowthSource, grid: GridSpec) -> str:
    payload = json.dumps({"source": source.describe(), "grid": grid.describe()}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:24]


def write_profile_csv(profile: GrowthProfile, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sigma", "level", "mantissa"])
        for s, v in zip(profile.sigmas, profile.values):
            writer.writerow([repr(s), v.level, repr(v.mantissa)])


def read_profile_csv(path: Path, source_desc: dict, grid: GridSpec) -> GrowthProfile:
    sigmas: list[float] = []
    values: list[ExtReal] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["sigma", "level", "mantissa"]:
            raise NumericError(f"profile cache {path} has an unexpected header {header}")
        for row in reader:
            sigmas.append(float(row[0]))
            values.append(ExtReal(int(row[1]), float(row[2])))
    return GrowthProfile(source_desc, grid, tuple(sigmas), tuple(values))


def load_or_sample(source: GrowthSource, grid: GridSpec,
                   cache_dir: Optional[Path] = None) -> GrowthProfile:
    """Sample a profile, going through the CSV cache when a directory is given."""
    if cache_dir is None:
        return sample_profile(source, grid)
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"profile_{profile_cache_key(source, grid)}.csv"
    if path.exists():
        return read_profile_csv(path, source.describe(), grid)
    profile = sample_profile(source, grid)
    write_profile_csv(profile, path)
    return profile
