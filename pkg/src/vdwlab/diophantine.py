"""Desk-scale verification of the two diophantine orbit conditions.

A rotation theta passes condition (1) when, for every tested multiplier n,
the integer vectors xi in a small box whose phases n * xi . theta are nearly
integral span a rational subspace of dimension < 4r.  It passes condition
(2) when no orbit {theta * d * n : n <= X} concentrates more than X^(9/10)
points inside the small box around 0.  Only refutations are certain: a
sampled pass never proves membership.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .intlinalg import independent_subset, rational_rank
from .torus import orbit_fracs, to_mantissa

__all__ = [
    "DioParams",
    "Cond1Witness",
    "Cond2Witness",
    "DioReport",
    "check_condition_one",
    "check_condition_two",
    "condition_one_sample",
    "verify_condition_one_witness",
    "verify_condition_two_witness",
    "rational_rank",
]

XI_BOX_LIMIT = 10**8


@dataclass(frozen=True)
class DioParams:
    """Thresholds for the two conditions; X = N^(1/r) is always recomputed."""

    N: int
    r: int
    D: int
    xi_bound: int
    phase_tolerance: float
    concentration_threshold: float
    ball_radius: float

    def __post_init__(self):
        if min(self.N, self.r, self.D, self.xi_bound) < 1:
            raise ValueError("N, r, D, xi_bound must be positive")
        if self.phase_tolerance <= 0 or self.ball_radius <= 0:
            raise ValueError("tolerances must be positive")

    @property
    def X(self) -> float:
        return float(self.N) ** (1.0 / self.r)

    @property
    def rank_bound(self) -> int:
        return 4 * self.r

    @classmethod
    def from_scale(cls, N: int, r: int, D: int, c2: float = 1.0) -> "DioParams":
        """Formula defaults: xi box D^c2, phase tolerance D^(c2 D)/X,
        concentration threshold X^(9/10), ball radius X^(-1/D)."""
        X = float(N) ** (1.0 / r)
        return cls(
            N=N,
            r=r,
            D=D,
            xi_bound=max(1, int(D**c2)),
            phase_tolerance=min(0.49, D ** (c2 * D) / X),
            concentration_threshold=X ** 0.9,
            ball_radius=min(0.5, X ** (-1.0 / D)),
        )


@dataclass(frozen=True)
class Cond1Witness:
    n: int
    xis: tuple[tuple[int, ...], ...]  # independent vectors of the violation

    def to_dict(self) -> dict:
        return {"n": self.n, "xis": [list(x) for x in self.xis]}


@dataclass(frozen=True)
class Cond2Witness:
    d: int
    count: int

    def to_dict(self) -> dict:
        return {"d": self.d, "count": self.count}


@dataclass
class Cond1Result:
    passed: bool
    witness: Cond1Witness | None
    tested_n: list[int]
    max_rank_seen: int

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "witness": self.witness.to_dict() if self.witness else None,
            "tested_n": self.tested_n,
            "max_rank_seen": self.max_rank_seen,
        }


@dataclass
class Cond2Result:
    passed: bool
    witness: Cond2Witness | None
    tested_d: list[int]
    max_count_seen: int

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "witness": self.witness.to_dict() if self.witness else None,
            "tested_d": self.tested_d,
            "max_count_seen": self.max_count_seen,
        }


@dataclass
class DioReport:
    condition1: Cond1Result
    condition2: Cond2Result
    params: DioParams = field(repr=False, default=None)

    @property
    def passed(self) -> bool:
        return self.condition1.passed and self.condition2.passed

    def to_dict(self) -> dict:
        d = {
            "condition1": self.condition1.to_dict(),
            "condition2": self.condition2.to_dict(),
            "passed": self.passed,
        }
        if self.params is not None:
            d["params"] = {
                "N": self.params.N,
                "r": self.params.r,
                "D": self.params.D,
                "xi_bound": self.params.xi_bound,
                "phase_tolerance": self.params.phase_tolerance,
                "concentration_threshold": self.params.concentration_threshold,
                "ball_radius": self.params.ball_radius,
            }
        return d


def _xi_box(xi_bound: int, D: int) -> np.ndarray:
    size = (2 * xi_bound + 1) ** D
    if size > XI_BOX_LIMIT:
        raise ValueError(f"xi box of size {size} exceeds enumeration limit {XI_BOX_LIMIT}")
    axes = [np.arange(-xi_bound, xi_bound + 1)] * D
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, D)


def condition_one_sample(N: int, rng: np.random.Generator, extra: int = 32) -> list[int]:
    """Deterministic geometric ladder 1, 2, 4, ... plus a uniform random sample."""
    ladder = []
    n = 1
    while n <= N:
        ladder.append(n)
        n *= 2
    if N not in ladder:
        ladder.append(N)
    random_part = rng.integers(1, N + 1, size=extra).tolist() if extra > 0 else []
    return sorted(set(ladder) | set(int(x) for x in random_part))


def check_condition_one(theta, params: DioParams, n_values) -> Cond1Result:
    """Rank test over the near-resonant xi box for each sampled multiplier."""
    theta_m = np.asarray(theta)
    if theta_m.dtype != np.uint64:
        theta_m = to_mantissa(theta_m)
    if theta_m.shape != (params.D,):
        raise ValueError("theta dimension does not match params.D")
    box = _xi_box(params.xi_bound, params.D)
    # phases xi . theta, exactly on the dyadic grid (wrapping dot product)
    box_u = box.astype(np.int64).astype(np.uint64)
    dots = (box_u * theta_m[None, :]).sum(axis=1, dtype=np.uint64)
    tested = sorted(set(int(n) for n in n_values))
    max_rank = 0
    for n in tested:
        if not 1 <= n <= params.N:
            raise ValueError(f"sampled n={n} outside [1, N]")
        phases = (np.uint64(n % 2**64) * dots).astype(float) / 2.0**64
        dist = np.minimum(phases, 1.0 - phases)
        near = box[dist <= params.phase_tolerance]
        rank = rational_rank(near.tolist())
        max_rank = max(max_rank, rank)
        if rank >= params.rank_bound:
            idx = independent_subset(near.tolist())
            xis = tuple(tuple(int(c) for c in near[i]) for i in idx)
            witness = Cond1Witness(n=n, xis=xis)
            return Cond1Result(False, witness, tested, max_rank)
    return Cond1Result(True, None, tested, max_rank)


def verify_condition_one_witness(theta, params: DioParams, witness: Cond1Witness) -> bool:
    """Re-verify a violation: phases below tolerance and rank >= 4r."""
    theta_m = np.asarray(theta)
    if theta_m.dtype != np.uint64:
        theta_m = to_mantissa(theta_m)
    xis = np.asarray([list(x) for x in witness.xis], dtype=np.int64)
    if np.abs(xis).max(initial=0) > params.xi_bound:
        return False
    dots = (xis.astype(np.uint64) * theta_m[None, :]).sum(axis=1, dtype=np.uint64)
    phases = (np.uint64(witness.n % 2**64) * dots).astype(float) / 2.0**64
    dist = np.minimum(phases, 1.0 - phases)
    if (dist > params.phase_tolerance).any():
        return False
    return rational_rank(xis.tolist()) >= params.rank_bound


def check_condition_two(theta, params: DioParams, d_values) -> Cond2Result:
    """Count orbit points inside the small box about 0 for each difference."""
    theta_m = np.asarray(theta)
    if theta_m.dtype != np.uint64:
        theta_m = to_mantissa(theta_m)
    if theta_m.shape != (params.D,):
        raise ValueError("theta dimension does not match params.D")
    X = int(params.X)
    ns = np.arange(1, X + 1, dtype=np.int64)
    tested = sorted(set(int(d) for d in d_values))
    max_count = 0
    for d in tested:
        if d < 1:
            raise ValueError("differences must be positive")
        alpha = (np.uint64(d % 2**64) * theta_m).astype(np.uint64)
        fracs = orbit_fracs(alpha, ns)
        dist = np.minimum(fracs, 1.0 - fracs).max(axis=1)
        count = int((dist <= params.ball_radius).sum())
        max_count = max(max_count, count)
        if count > params.concentration_threshold:
            return Cond2Result(False, Cond2Witness(d=d, count=count), tested, max_count)
    return Cond2Result(True, None, tested, max_count)


def verify_condition_two_witness(theta, params: DioParams, witness: Cond2Witness) -> bool:
    """Re-count the orbit for the claimed difference and confirm the excess."""
    res = check_condition_two(theta, params, [witness.d])
    return (not res.passed) and res.witness.count == witness.count


def condition_two_differences(params: DioParams, limit: int = 512) -> list[int]:
    """Differences 1..min(N/X, limit) — the full range when it is small."""
    d_max = max(1, int(params.N / params.X))
    if d_max <= limit:
        return list(range(1, d_max + 1))
    ladder = sorted(set(int(2**k) for k in range(0, int(math.log2(d_max)) + 1)))
    step = max(1, d_max // limit)
    return sorted(set(ladder) | set(range(1, d_max + 1, step)))
