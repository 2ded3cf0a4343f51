"""Torus geometry, ellipsoidal annuli and the annulus-orbit colourings.

Rotations live on the dyadic grid (Z/2^64)^D: a coordinate is an unsigned
64-bit mantissa a, representing a/2^64.  Orbit points n*theta mod 1 are then
computed with wrapping uint64 arithmetic, which is exact for every n — naive
float multiplication loses the fractional part long before n ~ 10^9.

The blue set of the main construction is the orbit's intersection with a
union of translated ellipsoidal shells

    rho - width < || (I + S(e)) x ||_2 < rho,

where S(e) is the symmetric matrix of a small coefficient tuple e.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .coloring import Colouring
from .intlinalg import rational_rank
from .symmetric import random_sym_tuple, sym_matrix, tuple_len

__all__ = [
    "TorusPoint",
    "SymCoeffs",
    "AnnulusSystem",
    "CentreCertificate",
    "CentreSamplingError",
    "sigma",
    "annulus_contains",
    "sample_centres",
    "build_colouring",
    "folklore_colouring",
    "behrend_colouring",
    "behrend_capacity",
    "green_wolf_colouring",
    "dirichlet_red_witness",
    "torus_norm",
    "torus_lift",
    "to_mantissa",
    "orbit_fracs",
    "random_torus_points",
    "parallelogram_bound",
]

MANTISSA_BITS = 64
_SCALE = float(2**MANTISSA_BITS)

# tolerance for geometric certificate comparisons (not for shell membership,
# which follows the strict inequalities exactly)
GEOM_TOL = 1e-12


# ---------------------------------------------------------------------------
# torus arithmetic
# ---------------------------------------------------------------------------


def torus_lift(x: np.ndarray) -> np.ndarray:
    """Coordinatewise lift of points of T^D into (-1/2, 1/2]^D."""
    x = np.asarray(x, dtype=float)
    return x - np.ceil(x - 0.5)


def torus_norm(x: np.ndarray, axis: int = -1) -> np.ndarray:
    """Box norm: max over coordinates of the distance to the nearest integer."""
    x = np.asarray(x, dtype=float)
    frac = x - np.floor(x)
    return np.max(np.minimum(frac, 1.0 - frac), axis=axis)


def to_mantissa(coords) -> np.ndarray:
    """Torus coordinates -> uint64 mantissas (value = mantissa / 2^64)."""
    arr = np.asarray(coords, dtype=float)
    frac = arr - np.floor(arr)
    out = np.empty(arr.shape, dtype=np.uint64)
    flat_in = frac.reshape(-1)
    flat_out = out.reshape(-1)
    for k in range(flat_in.size):
        m = int(round(flat_in[k] * _SCALE))
        flat_out[k] = np.uint64(m % 2**MANTISSA_BITS)
    return out


def mantissa_to_float(mantissa: np.ndarray) -> np.ndarray:
    return np.asarray(mantissa, dtype=np.uint64).astype(float) / _SCALE


def orbit_fracs(theta, ns) -> np.ndarray:
    """Fractional parts of n * theta for the given multipliers, exactly.

    theta may be float coordinates or uint64 mantissas; ns is an integer
    array.  Returns an array of shape (len(ns), D) of floats in [0, 1).
    """
    m = np.asarray(theta)
    if m.dtype != np.uint64:
        m = to_mantissa(m)
    ns = np.asarray(ns)
    if ns.dtype == np.uint64:
        ns_u = ns
    elif np.issubdtype(ns.dtype, np.integer) and (ns >= 0).all():
        ns_u = ns.astype(np.uint64)
    else:
        ns_u = np.mod(ns.astype(object), 2**MANTISSA_BITS).astype(np.uint64)
    prod = ns_u[:, None] * m[None, :]  # wraps mod 2^64
    return prod.astype(float) / _SCALE


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusPoint:
    """Point of T^D with coordinates reduced to [0, 1)."""

    coords: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coords, dtype=float)
        arr = arr - np.floor(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    @property
    def dim(self) -> int:
        return self.coords.shape[0]

    def box_norm(self) -> float:
        return float(torus_norm(self.coords))

    def lift(self) -> np.ndarray:
        return torus_lift(self.coords)

    def mantissa(self) -> np.ndarray:
        return to_mantissa(self.coords)


@dataclass(frozen=True)
class SymCoeffs:
    """Coefficient tuple of a symmetric perturbation, entries in [-bound, bound]."""

    dim: int
    entries: np.ndarray
    bound: float

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.shape != (tuple_len(self.dim),):
            raise ValueError(f"need {tuple_len(self.dim)} entries for dim {self.dim}")
        if np.abs(arr).max(initial=0.0) > self.bound + GEOM_TOL:
            raise ValueError("entries exceed the declared bound")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def zeros(cls, dim: int, bound: float | None = None) -> "SymCoeffs":
        b = dim ** (-4.0) if bound is None else bound
        return cls(dim, np.zeros(tuple_len(dim)), b)

    @classmethod
    def random(cls, dim: int, rng: np.random.Generator, bound: float | None = None) -> "SymCoeffs":
        b = dim ** (-4.0) if bound is None else bound
        return cls(dim, random_sym_tuple(dim, b, rng), b)

    def matrix(self) -> np.ndarray:
        return sym_matrix(self.entries, self.dim)


def sigma(t: SymCoeffs) -> np.ndarray:
    """Symmetric matrix of a coefficient tuple (off-diagonal halved)."""
    return t.matrix()


@dataclass(frozen=True)
class AnnulusSystem:
    """Union of M translated ellipsoidal shells of outer radius rho."""

    centres: np.ndarray  # (M, D) in [0, 1)
    rho: float
    width: float
    e: SymCoeffs

    def __post_init__(self):
        arr = np.asarray(self.centres, dtype=float)
        if arr.ndim != 2 or (arr.size and arr.shape[1] != self.e.dim):
            raise ValueError("centres must be an (M, D) array matching e.dim")
        arr = arr - np.floor(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "centres", arr)
        if not 0 < self.width < self.rho:
            raise ValueError("need 0 < width < rho")
        # shells must lift without wraparound: outer radius after undoing the
        # perturbation must stay inside the fundamental half-cell
        if self.lift_radius() > 0.5 + GEOM_TOL:
            raise ValueError(
                f"rho={self.rho} too large: lifted shell radius {self.lift_radius():.4f} > 1/2"
            )

    @property
    def dim(self) -> int:
        return self.e.dim

    @property
    def num_centres(self) -> int:
        return self.centres.shape[0]

    def transform(self) -> np.ndarray:
        return np.eye(self.dim) + self.e.matrix()

    def perturbation_norm(self) -> float:
        s = self.e.matrix()
        return float(np.linalg.svd(s, compute_uv=False)[0]) if self.dim else 0.0

    def lift_radius(self) -> float:
        """Upper bound on ||x||_2 over the shell (pre-image of the transform)."""
        op = self.perturbation_norm()
        if op >= 1.0:
            return math.inf
        return self.rho / (1.0 - op)

    def to_json(self) -> str:
        return json.dumps(
            {
                "D": self.dim,
                "rho": self.rho,
                "width": self.width,
                "e": self.e.entries.tolist(),
                "e_bound": self.e.bound,
                "centres": self.centres.tolist(),
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "AnnulusSystem":
        d = json.loads(text)
        e = SymCoeffs(int(d["D"]), np.asarray(d["e"]), float(d["e_bound"]))
        return cls(np.asarray(d["centres"], dtype=float), float(d["rho"]), float(d["width"]), e)


def annulus_contains(sys: AnnulusSystem, y: np.ndarray) -> bool | np.ndarray:
    """Strict two-sided shell test on a lifted point (or batch of points).

    y is a vector in R^D with ||y||_inf <= 1/2 (a lift); boundary points
    (norm exactly rho or rho - width) count as outside.
    """
    y = np.asarray(y, dtype=float)
    norms = np.linalg.norm(y @ sys.transform().T, axis=-1)
    inside = (norms > sys.rho - sys.width) & (norms < sys.rho)
    return bool(inside) if np.isscalar(inside) or inside.ndim == 0 else inside


# ---------------------------------------------------------------------------
# centre sampling with certificate
# ---------------------------------------------------------------------------


class CentreSamplingError(RuntimeError):
    """Raised when no centre set passes both certificate conditions in budget."""

    def __init__(self, message: str, failures: dict):
        super().__init__(message)
        self.failures = failures


@dataclass
class CentreCertificate:
    """Evidence attached to a sampled centre set.

    separation holds exhaustively over all index triples; coverage is an
    under-approximation checked over the named subspace family and a finite
    projection grid.
    """

    min_triple_norm: float
    separation_threshold: float
    worst_triple: tuple[int, int, int]
    family: list[dict] = field(default_factory=list)
    grid_points_per_dim: int = 0
    attempts_used: int = 1

    @property
    def separation_ok(self) -> bool:
        return self.min_triple_norm >= self.separation_threshold - GEOM_TOL

    @property
    def coverage_ok(self) -> bool:
        return all(entry["covered"] for entry in self.family)

    def to_dict(self) -> dict:
        return {
            "min_triple_norm": self.min_triple_norm,
            "separation_threshold": self.separation_threshold,
            "worst_triple": list(self.worst_triple),
            "separation_ok": self.separation_ok,
            "family": self.family,
            "grid_points_per_dim": self.grid_points_per_dim,
            "coverage_ok": self.coverage_ok,
            "attempts_used": self.attempts_used,
        }


def min_triple_combination_norm(centres: np.ndarray) -> tuple[float, tuple[int, int, int]]:
    """min over triples (i1,i2,i3), not all equal, of ||x_i1 - 2 x_i2 + x_i3||_T.

    Exhaustive over all M^3 triples (chunked along the first index).
    """
    m = centres.shape[0]
    if m < 2:
        return math.inf, (0, 0, 0)
    best = math.inf
    argbest = (0, 0, 0)
    for i1 in range(m):
        comb = centres[i1][None, None, :] - 2.0 * centres[:, None, :] + centres[None, :, :]
        norms = torus_norm(comb, axis=-1)
        norms[i1, i1] = math.inf  # the all-equal triple is exempt
        j = int(np.argmin(norms))
        i2, i3 = divmod(j, m)
        if norms[i2, i3] < best:
            best = float(norms[i2, i3])
            argbest = (i1, i2, i3)
    return best, argbest


def small_vectors_in_subspace(gens: np.ndarray, xi_max: int) -> np.ndarray:
    """All integer vectors xi in span_Q(gens) with |xi|_inf <= xi_max.

    Enumerates the coordinate box and keeps vectors whose addition does not
    increase the rational rank.  Intended for small boxes only.
    """
    gens = np.asarray(gens, dtype=np.int64)
    dim = gens.shape[1]
    if (2 * xi_max + 1) ** dim > 10**6:
        raise ValueError("xi box too large to enumerate")
    base_rank = rational_rank(gens.tolist())
    axes = [np.arange(-xi_max, xi_max + 1)] * dim
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    keep = []
    gen_rows = gens.tolist()
    for row in grid:
        if rational_rank(gen_rows + [row.tolist()]) == base_rank:
            keep.append(row)
    return np.asarray(keep, dtype=np.int64)


def _coverage_for_subspace(
    centres: np.ndarray,
    gens: np.ndarray,
    xi_max: int,
    grid_points: int,
    tolerance: float,
) -> dict:
    """Check condition (2) for one subspace over a grid of projected targets."""
    from .lattice import integral_point_basis

    basis_result = integral_point_basis(gens, max(xi_max, int(np.abs(gens).max(initial=1))))
    basis = np.asarray(basis_result.basis, dtype=np.int64)
    m = basis.shape[0]
    small = small_vectors_in_subspace(gens, xi_max)
    # coefficient vector of each small xi in the integral basis
    from .intlinalg import solve_rational

    coeffs = np.zeros((small.shape[0], m), dtype=np.int64)
    for k, xi in enumerate(small):
        sol = solve_rational(basis.T.tolist(), xi.tolist())
        if sol is None or any(c.denominator != 1 for c in sol):
            raise RuntimeError("integral basis failed to span a small vector")
        coeffs[k] = [int(c) for c in sol]

    # projections of the centres: S[j, i] = basis_i . x_j mod 1
    proj = (centres @ basis.T.astype(float)) % 1.0  # (M, m)
    axes = [np.arange(grid_points) / grid_points] * m
    targets = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, m)

    uncovered = 0
    worst_target = None
    small_f = coeffs.astype(float)
    centre_phase = proj @ small_f.T  # (M, n_small)
    for t in targets:
        # phase of xi at the target, per small vector
        target_phase = small_f @ t
        frac = (centre_phase - target_phase[None, :]) % 1.0
        dist = np.minimum(frac, 1.0 - frac)
        ok = (dist <= tolerance + GEOM_TOL).all(axis=1).any()
        if not ok:
            uncovered += 1
            if worst_target is None:
                worst_target = t.tolist()
    return {
        "generators": gens.tolist(),
        "num_small_vectors": int(small.shape[0]),
        "grid_size": int(targets.shape[0]),
        "uncovered_targets": uncovered,
        "first_uncovered": worst_target,
        "covered": uncovered == 0,
    }


def coordinate_subspace_family(D: int, max_dim: int) -> list[np.ndarray]:
    """All coordinate subspaces of dimension <= max_dim (generator = unit rows)."""
    from itertools import combinations

    eye = np.eye(D, dtype=np.int64)
    fam = []
    for k in range(1, max_dim + 1):
        for idx in combinations(range(D), k):
            fam.append(eye[list(idx)])
    return fam


def sample_centres(
    D: int,
    r: int,
    rho: float,
    M: int,
    subspace_family: list[np.ndarray],
    rng: np.random.Generator,
    *,
    xi_max: int = 3,
    grid_points: int = 17,
    coverage_tolerance: float = 0.01,
    budget: int = 20,
) -> tuple[np.ndarray, CentreCertificate]:
    """Sample M uniform centres until both certificate conditions hold.

    Condition (1): every triple combination x_i1 - 2 x_i2 + x_i3 (indices not
    all equal) has box norm >= 10 rho, checked exhaustively.  Condition (2):
    for each subspace in the family and each target on a projection grid,
    some centre is within coverage_tolerance of the target simultaneously for
    every small integer vector of the subspace.  Raises CentreSamplingError
    with per-condition failure counts when the budget runs out.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    if rho >= 1.0 / D:
        raise ValueError("need rho < 1/D")
    failures = {"separation": 0, "coverage": 0}
    last_cert = None
    for attempt in range(1, budget + 1):
        centres = rng.random((M, D))
        min_norm, worst = min_triple_combination_norm(centres)
        cert = CentreCertificate(
            min_triple_norm=min_norm,
            separation_threshold=10.0 * rho,
            worst_triple=worst,
            attempts_used=attempt,
            grid_points_per_dim=grid_points,
        )
        if not cert.separation_ok:
            failures["separation"] += 1
            last_cert = cert
            continue
        cert.family = [
            _coverage_for_subspace(centres, gens, xi_max, grid_points, coverage_tolerance)
            for gens in subspace_family
        ]
        if not cert.coverage_ok:
            failures["coverage"] += 1
            last_cert = cert
            continue
        return centres, cert
    dominant = max(failures, key=failures.get)
    raise CentreSamplingError(
        f"no centre set within budget {budget}; most common failure: {dominant} "
        f"(separation={failures['separation']}, coverage={failures['coverage']})",
        failures,
    )


def random_torus_points(D: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points of T^D on the dyadic grid, returned as floats."""
    mant = rng.integers(0, 2**MANTISSA_BITS, size=(count, D), dtype=np.uint64)
    return mantissa_to_float(mant)


# ---------------------------------------------------------------------------
# colourings
# ---------------------------------------------------------------------------


def build_colouring(N: int, theta, sys: AnnulusSystem, chunk: int = 1 << 18) -> Colouring:
    """Colour n blue iff theta*n lands in some translated shell.

    Membership is evaluated through the lift: for each centre x_j the point
    theta*n - x_j is lifted to (-1/2, 1/2]^D and tested against the shell.
    Deterministic in (N, theta, sys) and invariant under permuting centres.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    theta_m = np.asarray(theta)
    if theta_m.dtype != np.uint64:
        theta_m = to_mantissa(theta_m)
    transform = sys.transform()
    r_out = min(0.5, sys.lift_radius() + GEOM_TOL)
    blue = np.zeros(N, dtype=bool)
    for lo in range(1, N + 1, chunk):
        hi = min(N + 1, lo + chunk)
        ns = np.arange(lo, hi, dtype=np.int64)
        orbit = orbit_fracs(theta_m, ns)
        chunk_blue = np.zeros(hi - lo, dtype=bool)
        for x in sys.centres:
            delta = orbit - x[None, :]
            lift = delta - np.ceil(delta - 0.5)
            near = np.abs(lift).max(axis=1) <= r_out
            if not near.any():
                continue
            y = lift[near] @ transform.T
            norms = np.linalg.norm(y, axis=1)
            hit = (norms > sys.rho - sys.width) & (norms < sys.rho)
            idx = np.flatnonzero(near)[hit]
            chunk_blue[idx] = True
        blue[lo - 1 : hi - 1] = chunk_blue
    return Colouring(N, blue)


def folklore_colouring(N: int) -> Colouring:
    """Blue = integers in [N] whose base-3 digits are all 0 or 1."""
    if N < 1:
        raise ValueError("N must be >= 1")
    sums = [0]
    p = 1
    while p <= N:
        sums += [s + p for s in sums if s + p <= N]
        p *= 3
    blue = [s for s in sums if s >= 1]
    return Colouring.from_blue_set(N, blue)


def behrend_capacity(d: int, n: int) -> int:
    """Smallest [N] guaranteed to contain the digit construction: d(2d-1)^(n-1)."""
    return d * (2 * d - 1) ** (n - 1)


def behrend_colouring(N: int, d: int, n: int) -> Colouring:
    """Blue = the sphere-shell digit set: no-carry base (2d-1) encodings.

    Digit vectors (a_1..a_n) with 0 <= a_i <= d-1 are mapped to
    sum a_i (2d-1)^(i-1); among the spheres sum a_i^2 = R the most populous
    one is kept.  Because digit sums never carry, an integer 3-AP forces a
    digit-vector 3-AP, impossible on a sphere, so the blue set is 3-AP-free.
    """
    if d < 2 or n < 1:
        raise ValueError("need d >= 2 and n >= 1")
    if d**n > 10**7:
        raise ValueError("digit box d^n too large to enumerate")
    base = 2 * d - 1
    max_value = (d - 1) * (base**n - 1) // (base - 1)
    if N < max_value:
        raise ValueError(
            f"N={N} cannot hold the digit construction (needs {max_value}; "
            f"capacity d(2d-1)^(n-1) = {behrend_capacity(d, n)})"
        )
    digits = np.stack(
        np.meshgrid(*[np.arange(d)] * n, indexing="ij"), axis=-1
    ).reshape(-1, n)
    radii = (digits**2).sum(axis=1)
    weights = base ** np.arange(n)
    values = digits @ weights
    best_r = 0
    best_count = -1
    for rr in range(1, int(radii.max()) + 1):
        count = int((radii == rr).sum())
        if count > best_count:
            best_count = count
            best_r = rr
    blue = values[(radii == best_r) & (values >= 1)]
    return Colouring.from_blue_set(N, blue.tolist())


def green_wolf_colouring(
    N: int, D: int, rng: np.random.Generator, rho: float = 0.25
) -> Colouring:
    """Single spherical shell of radius rho and width N^(-4/D), random rotation."""
    width = float(N) ** (-4.0 / D)
    if width >= rho:
        raise ValueError("N too small: shell width >= rho")
    sys = AnnulusSystem(
        centres=np.zeros((1, D)),
        rho=rho,
        width=width,
        e=SymCoeffs.zeros(D),
    )
    theta = rng.integers(0, 2**MANTISSA_BITS, size=D, dtype=np.uint64)
    return build_colouring(N, theta, sys)


def dirichlet_red_witness(theta, N: int, rho: float = 0.25):
    """Pigeonhole a long progression avoiding the ball of radius rho.

    Finds d <= sqrt(N) with ||theta_1 d|| <= 1/sqrt(N), then a start n0 whose
    first coordinate sits near 1/2; the progression n0 + nd then keeps its
    first coordinate far from 0 and so avoids every point of the shell.
    Returns an ApWitness or None if no suitable start exists in range.
    """
    from .coloring import ApWitness

    theta_m = np.asarray(theta)
    if theta_m.dtype != np.uint64:
        theta_m = to_mantissa(theta_m)
    root = int(math.isqrt(N))
    if root < 2:
        return None
    ds = np.arange(1, root + 1, dtype=np.int64)
    first = orbit_fracs(theta_m[:1], ds)[:, 0]
    dist0 = np.minimum(first, 1.0 - first)
    cand = np.flatnonzero(dist0 <= 1.0 / root)
    if cand.size == 0:
        return None
    d = int(ds[cand[0]])
    length = max(1, root // 10)
    drift = length * float(dist0[cand[0]])
    margin = 0.5 - rho - drift - 0.05
    if margin <= 0:
        return None
    scan = np.arange(1, min(N, 20000) + 1, dtype=np.int64)
    first_orbit = orbit_fracs(theta_m[:1], scan)[:, 0]
    near_half = np.abs(first_orbit - 0.5) <= margin
    fits = scan + (length - 1) * d <= N
    ok = np.flatnonzero(near_half & fits)
    if ok.size == 0:
        return None
    n0 = int(scan[ok[0]])
    return ApWitness(start=n0, difference=d, length=length)


def parallelogram_bound(sys: AnnulusSystem) -> float:
    """Upper bound rho^2 - (rho - width)^2 for ||(I+S(e)) v||^2 over in-shell 3-APs.

    If u, u+v, u+2v all lie in the shell, the parallelogram law forces the
    transformed step to satisfy this bound.
    """
    return sys.rho**2 - (sys.rho - sys.width) ** 2
