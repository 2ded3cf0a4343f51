"""Geometry of numbers: Gram volumes, integral bases, successive minima,
and the multidimensional structure of near-resonant orbit multipliers.

Exact where it matters: lattice bases and box half-widths are rationals,
short-vector enumeration prunes in floating point but compares gauges as
Fractions, and all rank decisions run over Q.  Dimensions are small
(<= 8 for the enumeration) by design.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .intlinalg import (
    bareiss_det,
    integer_kernel_basis,
    rational_rank,
    row_hnf,
    solve_rational,
)
from .rng import substream
from .torus import orbit_fracs, to_mantissa, torus_lift

__all__ = [
    "GramSet",
    "IntLattice",
    "BohrStructure",
    "RawBohrStructure",
    "SuccessiveMinima",
    "DichotomyResult",
    "EnumerationBudgetError",
    "AllPrunedError",
    "gram_volume",
    "base_times_height_check",
    "volume_dichotomy",
    "complete_to_dimension",
    "hnf_sub_basis",
    "integral_point_basis",
    "count_points_in_subspace",
    "successive_minima",
    "bohr_structure",
    "refine_structure",
    "slab_concentration",
]

VOLUME_TOL = 1e-10
BOX_ENUM_LIMIT = 10**8
DEFAULT_ENUM_BUDGET = 5_000_000


class EnumerationBudgetError(RuntimeError):
    pass


class AllPrunedError(RuntimeError):
    """Every index was discarded during refinement (toy parameters too aggressive)."""


# ---------------------------------------------------------------------------
# volumes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GramSet:
    """A finite family of real vectors, typically unit vectors."""

    vectors: np.ndarray

    def __post_init__(self):
        arr = np.atleast_2d(np.asarray(self.vectors, dtype=float))
        arr.setflags(write=False)
        object.__setattr__(self, "vectors", arr)

    def __len__(self) -> int:
        return self.vectors.shape[0]


def _vectors_of(g) -> np.ndarray:
    if isinstance(g, GramSet):
        return g.vectors
    return np.atleast_2d(np.asarray(g, dtype=float))


def gram_volume(g) -> float:
    """sqrt(det <w_i, w_j>); tiny negative determinants clip to 0."""
    w = _vectors_of(g)
    if w.shape[0] == 0:
        return 1.0
    det = float(np.linalg.det(w @ w.T))
    if det < 0:
        det = 0.0
    return math.sqrt(det)


def _distance_to_span(v: np.ndarray, basis: np.ndarray) -> float:
    """l2 distance from v to the span of the basis rows (least squares)."""
    if basis.shape[0] == 0:
        return float(np.linalg.norm(v))
    sol, *_ = np.linalg.lstsq(basis.T, v, rcond=None)
    return float(np.linalg.norm(v - basis.T @ sol))


def base_times_height_check(g) -> float:
    """Residual of vol(w_1..w_m) = dist(w_m, span(rest)) * vol(w_1..w_{m-1})."""
    w = _vectors_of(g)
    if w.shape[0] < 2:
        raise ValueError("need at least 2 vectors")
    whole = gram_volume(w)
    prefix = gram_volume(w[:-1])
    dist = _distance_to_span(w[-1], w[:-1])
    return abs(whole - dist * prefix)


@dataclass
class DichotomyResult:
    """Either a (k+1)-subset of large volume or a small subspace near all vectors."""

    branch: int  # 1: volume subset, 2: subspace
    indices: list[int]
    volume: float | None = None
    max_distance: float | None = None

    def to_dict(self) -> dict:
        return {
            "branch": self.branch,
            "indices": self.indices,
            "volume": self.volume,
            "max_distance": self.max_distance,
        }


def volume_dichotomy(g, k: int, delta: float) -> DichotomyResult:
    """Greedy split: find k+1 vectors with vol >= delta, or a subspace of
    <= k of them within delta^(1/k) of every vector.

    Deterministic: the first eligible index is chosen at each stage.
    """
    w = _vectors_of(g)
    m = w.shape[0]
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= m")
    if delta <= 0:
        raise ValueError("delta must be positive")
    thresh = delta ** (1.0 / k)
    chosen = [0]
    while True:
        basis = w[chosen]
        dists = np.array([_distance_to_span(w[j], basis) for j in range(m)])
        far = np.flatnonzero(dists > thresh)
        if far.size == 0:
            return DichotomyResult(
                branch=2, indices=list(chosen), max_distance=float(dists.max())
            )
        chosen.append(int(far[0]))
        if len(chosen) == k + 1:
            return DichotomyResult(
                branch=1, indices=list(chosen), volume=gram_volume(w[chosen])
            )


def complete_to_dimension(g) -> np.ndarray:
    """Append orthonormal vectors orthogonal to the family, up to full dimension.

    The completion preserves the Gram volume of the original family.
    """
    w = _vectors_of(g)
    m, n = w.shape
    if m >= n:
        return w
    _, _, vh = np.linalg.svd(w, full_matrices=True)
    extra = vh[m:]
    return np.vstack([w, extra])


# ---------------------------------------------------------------------------
# integral lattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntLattice:
    """Lattice given by an independent basis of rational vectors."""

    basis: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(c) for c in row) for row in self.basis)
        object.__setattr__(self, "basis", rows)
        num = self.integer_rows()
        if rational_rank(num) != len(rows):
            raise ValueError("basis rows are linearly dependent")

    @classmethod
    def from_rows(cls, rows) -> "IntLattice":
        return cls(tuple(tuple(Fraction(c) for c in row) for row in rows))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return len(self.basis[0]) if self.basis else 0

    def denominator(self) -> int:
        den = 1
        for row in self.basis:
            for c in row:
                den = den * c.denominator // math.gcd(den, c.denominator)
        return den

    def integer_rows(self, den: int | None = None) -> list[list[int]]:
        """Basis scaled by the common denominator, as plain ints."""
        d = self.denominator() if den is None else den
        return [[int(c * d) for c in row] for row in self.basis]

    def det(self) -> Fraction:
        if self.rank != self.ambient_dim:
            raise ValueError("determinant needs a full-rank lattice")
        den = self.denominator()
        return Fraction(abs(bareiss_det(self.integer_rows(den))), den**self.rank)


@dataclass
class HnfSubBasis:
    """Sub-basis in Hermite form plus a sampled coefficient-growth certificate."""

    basis: list[list[Fraction]]
    hnf: list[list[int]]
    growth_bound: int
    max_growth_seen: float
    samples: int

    @property
    def growth_ok(self) -> bool:
        return self.max_growth_seen <= self.growth_bound


def _coords_in_basis(vector, basis_rows) -> list[Fraction] | None:
    """Coordinates of vector in the Z-/Q-span of basis_rows (exact), or None."""
    matrix = [[basis_rows[i][c] for i in range(len(basis_rows))] for c in range(len(vector))]
    return solve_rational(matrix, list(vector))


def hnf_sub_basis(lambda_sub: IntLattice, lam: IntLattice, samples: int = 1000,
                  rng=None) -> HnfSubBasis:
    """Hermite basis of a sublattice with bounded coordinate growth.

    Verifies the sublattice relation exactly, then returns the basis whose
    coordinate matrix (w.r.t. the big lattice) is in row Hermite form: for
    test vectors the new coordinates grow by at most 2^m over the old ones,
    which is checked on random integer combinations.
    """
    if lambda_sub.ambient_dim != lam.ambient_dim:
        raise ValueError("ambient dimensions differ")
    m = lam.rank
    if lambda_sub.rank != m:
        raise ValueError("sublattice must have the same rank for a Hermite sub-basis")
    coord_rows: list[list[int]] = []
    for row in lambda_sub.basis:
        coords = _coords_in_basis(row, lam.basis)
        if coords is None or any(c.denominator != 1 for c in coords):
            raise ValueError("not a sublattice: a basis vector leaves the big lattice")
        coord_rows.append([int(c) for c in coords])
    h, _u = row_hnf(coord_rows)
    new_basis = [
        [sum(Fraction(h[i][j]) * lam.basis[j][c] for j in range(m))
         for c in range(lam.ambient_dim)]
        for i in range(m)
    ]
    bound = 2**m
    gen = rng if rng is not None else substream(0, "hnf-growth", m)
    worst = 0.0
    for _ in range(samples):
        coeffs = gen.integers(-10, 11, size=m)
        if not coeffs.any():
            continue
        # x = sum coeffs_i e'_i has old coordinates coeffs . H and new
        # coordinates coeffs; the lemma bounds new by 2^m * old
        old = [sum(int(coeffs[i]) * h[i][j] for i in range(m)) for j in range(m)]
        m_old = max(abs(x) for x in old)
        m_new = max(abs(int(c)) for c in coeffs)
        if m_old > 0:
            worst = max(worst, m_new / m_old)
    return HnfSubBasis(
        basis=new_basis, hnf=h, growth_bound=bound, max_growth_seen=worst, samples=samples
    )


@dataclass
class IntegralPointBasis:
    """Basis of V intersect Z^D with the coefficient bound m!(2Q)^m."""

    basis: list[list[int]]
    coefficient_bound: int

    @property
    def rank(self) -> int:
        return len(self.basis)


def integral_point_basis(v_gens, Q: int) -> IntegralPointBasis:
    """Integral basis of span_Q(gens) intersected with Z^D.

    The basis is obtained by saturating twice through integer kernels
    (kernels of integer matrices are automatically saturated).  Every
    integer point of the subspace with |x|_inf <= Q expands over the basis
    with integer coefficients bounded by m!(2Q)^m.
    """
    gens = np.asarray(v_gens, dtype=np.int64)
    if gens.ndim != 2:
        raise ValueError("generators must form a 2-d integer array")
    m, D = gens.shape
    if rational_rank(gens.tolist()) != m:
        raise ValueError("generators are linearly dependent")
    if Q < 1:
        raise ValueError("Q must be >= 1")
    # orthogonal-complement lattice: kernel of x -> (gens_i . x)_i
    comp = integer_kernel_basis(gens.T.tolist())
    if comp:
        # V cap Z^D = kernel of x -> (comp_j . x)_j
        comp_arr = [list(row) for row in comp]
        basis = integer_kernel_basis(np.asarray(comp_arr).T.tolist())
    else:
        basis = np.eye(D, dtype=int).tolist()
    if len(basis) != m:
        raise AssertionError("saturation produced a basis of unexpected rank")
    bound = math.factorial(m) * (2 * Q) ** m
    return IntegralPointBasis(basis=[list(map(int, b)) for b in basis], coefficient_bound=bound)


def expand_in_basis(x, basis_rows) -> list[int] | None:
    """Exact integer coefficients of x over the basis, or None."""
    coords = _coords_in_basis(list(x), [list(map(Fraction, b)) for b in basis_rows])
    if coords is None or any(c.denominator != 1 for c in coords):
        return None
    return [int(c) for c in coords]


def count_points_in_subspace(v_gens, Q: int) -> tuple[int, bool]:
    """Exact count of integer points of the subspace in the box |x|_inf <= Q,
    plus whether the count respects the 20^n m^(n/2) Q^m envelope.

    V = {0} is expressed by all-zero generator rows (the ambient dimension is
    read off the row length).
    """
    gens = np.atleast_2d(np.asarray(v_gens, dtype=np.int64))
    if gens.ndim != 2 or gens.shape[1] == 0:
        raise ValueError("generators must form a 2-d integer array")
    n = gens.shape[1]
    box_size = (2 * Q + 1) ** n
    if box_size > BOX_ENUM_LIMIT:
        raise ValueError(f"box of size {box_size} exceeds limit {BOX_ENUM_LIMIT}")
    nonzero = [g for g in gens.tolist() if any(g)]
    m = rational_rank(nonzero)
    axes = [np.arange(-Q, Q + 1)] * n
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    if m == 0:
        count = 1  # only the origin
    elif m == n:
        count = grid.shape[0]
    else:
        arr = np.asarray(nonzero, dtype=float)
        # float projection residual prefilter, exact confirmation after
        q_mat, _ = np.linalg.qr(arr.T)
        proj = grid.astype(float) @ q_mat
        residual = np.linalg.norm(grid.astype(float) - proj @ q_mat.T, axis=1)
        candidates = grid[residual < 1e-7]
        count = 0
        for x in candidates:
            if rational_rank(nonzero + [x.tolist()]) == m:
                count += 1
    bound = 20**n * m ** (n / 2) * Q**m if m > 0 else 1.0
    return count, count <= bound or m == 0


# ---------------------------------------------------------------------------
# LLL and exact successive minima
# ---------------------------------------------------------------------------


def _lll_transform(rows: np.ndarray, delta: float = 0.99, max_iters: int = 20000):
    """Unimodular transform (as int rows) LLL-reducing the float row basis."""
    b = rows.astype(float).copy()
    n = b.shape[0]
    u = np.eye(n, dtype=object)

    def gso(bm):
        star = bm.copy()
        mu = np.zeros((n, n))
        norms = np.zeros(n)
        for i in range(n):
            for j in range(i):
                denom = norms[j]
                mu[i, j] = 0.0 if denom == 0 else float(np.dot(bm[i], star[j]) / denom)
                star[i] = star[i] - mu[i, j] * star[j]
            norms[i] = float(np.dot(star[i], star[i]))
        return star, mu, norms

    star, mu, norms = gso(b)
    k = 1
    iters = 0
    while k < n and iters < max_iters:
        iters += 1
        for j in range(k - 1, -1, -1):
            q = round(mu[k, j])
            if q:
                b[k] -= q * b[j]
                u[k] = [u[k][t] - q * u[j][t] for t in range(n)]
                star, mu, norms = gso(b)
        if norms[k] >= (delta - mu[k, k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[[k - 1, k]] = b[[k, k - 1]]
            u[[k - 1, k]] = u[[k, k - 1]]
            star, mu, norms = gso(b)
            k = max(1, k - 1)
    return [[int(x) for x in row] for row in u]


def _enumerate_short(scaled: np.ndarray, radius: float, budget: int) -> list[tuple[int, ...]]:
    """All nonzero integer combinations c with ||c . scaled||_2 <= radius,
    one representative per +-pair (first nonzero coefficient positive)."""
    n = scaled.shape[0]
    gram = scaled @ scaled.T
    gram = (gram + gram.T) / 2.0
    # jitter-free Cholesky; basis is full rank by construction
    chol = np.linalg.cholesky(gram + np.eye(n) * 1e-14 * max(1.0, np.trace(gram)))
    a = chol.T  # upper triangular: ||c.scaled||^2 == ||a @ c||^2
    r2 = radius * radius * (1.0 + 1e-9)
    out: list[tuple[int, ...]] = []
    c = [0] * n
    nodes = 0

    def dfs(level: int, partial: float):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise EnumerationBudgetError(f"short-vector enumeration exceeded {budget} nodes")
        if level < 0:
            if any(c):
                out.append(tuple(c))
            return
        tail = sum(a[level, i] * c[i] for i in range(level + 1, n))
        rem = r2 - partial
        if rem < 0:
            return
        centre = -tail / a[level, level]
        half = math.sqrt(rem) / abs(a[level, level])
        lo = math.ceil(centre - half - 1e-12)
        hi = math.floor(centre + half + 1e-12)
        for v in range(lo, hi + 1):
            c[level] = v
            term = (a[level, level] * v + tail) ** 2
            dfs(level - 1, partial + term)
        c[level] = 0

    dfs(n - 1, 0.0)
    reps = []
    for cand in out:
        first = next(x for x in cand if x)
        if first > 0:
            reps.append(cand)
    return reps


@dataclass
class SuccessiveMinima:
    """Exact minima of a box gauge with a directional basis achieving them."""

    lambdas: list[float]
    lambdas_exact: list[Fraction]
    vectors: list[list[Fraction]]  # directional basis b_i, b_i in lambda_i K
    coefficients: list[tuple[int, ...]]
    minkowski_lhs: Fraction
    minkowski_rhs: Fraction

    @property
    def minkowski_ok(self) -> bool:
        return self.minkowski_lhs <= self.minkowski_rhs


def successive_minima(
    lattice: IntLattice,
    box_half_widths,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> SuccessiveMinima:
    """Successive minima of the box {|x_i| <= k_i} w.r.t. the lattice.

    Exhaustive depth-first enumeration after an LLL preprocessing step;
    gauges are compared exactly (Fractions), ties broken lexicographically on
    the integer coordinates of the scaled vector, so the output is
    deterministic.  Dimension is limited to 8.
    """
    n = lattice.rank
    if n != lattice.ambient_dim:
        raise ValueError("successive minima need a full-rank lattice")
    if n > 8:
        raise ValueError("exact mode is limited to dimension <= 8")
    half = [Fraction(k) for k in box_half_widths]
    if len(half) != n or any(k <= 0 for k in half):
        raise ValueError("box half-widths must be n positive rationals")
    den = lattice.denominator()
    b_int = lattice.integer_rows(den)

    # scaled rows: lattice vectors divided coordinatewise by den * k_j
    scale = np.array([float(den * k) for k in half])
    rows_float = np.array([[float(x) for x in row] for row in b_int]) / scale[None, :]
    u = _lll_transform(rows_float)
    reduced_int = [
        [sum(u[i][t] * b_int[t][j] for t in range(n)) for j in range(n)] for i in range(n)
    ]

    def exact_gauge(vec_int) -> Fraction:
        return max(Fraction(abs(x)) / (den * half[j]) for j, x in enumerate(vec_int))

    r0 = max(exact_gauge(row) for row in reduced_int)
    radius = float(r0) * math.sqrt(n)
    scaled_reduced = np.array(
        [[float(x) for x in row] for row in reduced_int]
    ) / scale[None, :]
    candidates = _enumerate_short(scaled_reduced, radius, budget)

    entries = []
    for c in candidates:
        vec = [sum(c[i] * reduced_int[i][j] for i in range(n)) for j in range(n)]
        g = exact_gauge(vec)
        if g <= r0:
            entries.append((g, tuple(vec), c))
    entries.sort(key=lambda t: (t[0], t[1]))

    picked: list[tuple[Fraction, tuple[int, ...], tuple[int, ...]]] = []
    picked_coeffs: list[list[int]] = []
    for g, vec, c in entries:
        if len(picked) == n:
            break
        trial = picked_coeffs + [list(c)]
        if rational_rank(trial) == len(trial):
            picked.append((g, vec, c))
            picked_coeffs.append(list(c))
    if len(picked) < n:
        raise AssertionError("enumeration failed to find a full directional basis")

    lambdas_exact = [p[0] for p in picked]
    vectors = [[Fraction(x, den) for x in p[1]] for p in picked]
    # coefficients w.r.t. the original basis: c' = c @ U
    coeff_orig = [
        tuple(sum(p[2][i] * u[i][t] for i in range(n)) for t in range(n)) for p in picked
    ]
    det = lattice.det()
    vol_k = Fraction(1)
    for k in half:
        vol_k *= 2 * k
    lhs = Fraction(1)
    for lam in lambdas_exact:
        lhs *= lam
    rhs = Fraction(2**n) * det / vol_k
    return SuccessiveMinima(
        lambdas=[float(x) for x in lambdas_exact],
        lambdas_exact=lambdas_exact,
        vectors=vectors,
        coefficients=coeff_orig,
        minkowski_lhs=lhs,
        minkowski_rhs=rhs,
    )


# ---------------------------------------------------------------------------
# multidimensional orbit structure
# ---------------------------------------------------------------------------


@dataclass
class RawBohrStructure:
    """Generators and lengths straight out of the minima computation."""

    n: list[int]
    lengths: list[float]  # L'_i = 1/((D+1) lambda_i)
    lambdas: list[float]
    report: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.n)


@dataclass
class BohrStructure:
    """Refined structure: generators n_i, lengths L_i, lifts v_i, units w_i."""

    n: list[int]
    lengths: list[float]  # L_i = 1 / ||theta d n_i||
    lifts: np.ndarray  # v_i rows
    units: np.ndarray  # w_i rows
    report: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.n)

    def to_dict(self) -> dict:
        return {
            "n": [int(x) for x in self.n],
            "lengths": [float(x) for x in self.lengths],
            "lifts": self.lifts.tolist(),
            "units": self.units.tolist(),
            "report": self.report,
        }


def bohr_structure(theta, d: int, X: int, D: int,
                   budget: int = DEFAULT_ENUM_BUDGET) -> RawBohrStructure:
    """Generalised-progression structure on {n : ||theta d n|| small}.

    Builds the lattice spanned by (1/X, theta*d) and the integer columns,
    takes a directional basis for the box [-D^-D, D^-D] x [-1/2, 1/2]^D, and
    reads off generators n_i with lengths L'_i = 1/((D+1) lambda_i).  The
    three structure properties (distinct bounded sums, phase bounds, product
    lower bound) are re-verified numerically and recorded in the report.
    """
    if X < 1:
        raise ValueError("X must be a positive integer")
    if not 1 <= D <= 7:
        raise ValueError("exact mode needs 1 <= D <= 7 (lattice dimension D+1 <= 8)")
    if d < 1:
        raise ValueError("d must be a positive integer")
    theta_m = np.asarray(theta)
    if theta_m.dtype != np.uint64:
        theta_m = to_mantissa(theta_m)
    alpha_m = (np.uint64(d % 2**64) * theta_m).astype(np.uint64)
    a_ints = [int(x) for x in alpha_m]

    two64 = 2**64
    rows = []
    rows.append([Fraction(1, X)] + [Fraction(a, two64) for a in a_ints])
    for j in range(D):
        row = [Fraction(0)] * (D + 1)
        row[j + 1] = Fraction(1)
        rows.append(row)
    lat = IntLattice.from_rows(rows)
    half = [Fraction(1, D**D)] + [Fraction(1, 2)] * D
    minima = successive_minima(lat, half, budget=budget)

    ns: list[int] = []
    for coeff, vec in zip(minima.coefficients, minima.vectors):
        n_i = coeff[0]  # multiplier of the generator row carrying 1/X
        if n_i < 0:
            n_i = -n_i
        ns.append(int(n_i))
    lengths = [Fraction(1) / ((D + 1) * lam) for lam in minima.lambdas_exact]

    report = _verify_raw_structure(alpha_m, ns, lengths, X, D, d)
    return RawBohrStructure(
        n=ns,
        lengths=[float(x) for x in lengths],
        lambdas=minima.lambdas,
        report=report,
    )


def _verify_raw_structure(alpha_m, ns, lengths, X, D, d) -> dict:
    """Numeric re-verification of the three structure properties."""
    counts = [max(1, math.ceil(length)) for length in lengths]
    total = 1
    for c in counts:
        total *= c
    max_sum = sum(n * (c - 1) for n, c in zip(ns, counts))
    bound_sum = X / D**D
    prop1_bound_ok = max_sum <= bound_sum + 1e-9

    if total <= 200_000:
        sums = set()
        distinct = True
        for combo in itertools.product(*[range(c) for c in counts]):
            s = sum(l * n for l, n in zip(combo, ns))
            if s in sums:
                distinct = False
                break
            sums.add(s)
        distinct_mode = "exhaustive"
    else:
        gen = substream(0, "bohr-distinct", d, X, D)
        distinct = True
        seen: dict[int, tuple] = {}
        for _ in range(20_000):
            combo = tuple(int(gen.integers(0, c)) for c in counts)
            s = sum(l * n for l, n in zip(combo, ns))
            if s in seen and seen[s] != combo:
                distinct = False
                break
            seen[s] = combo
        distinct_mode = "sampled"

    phases_ok = True
    worst_phase_margin = math.inf
    if ns:
        fracs = orbit_fracs(alpha_m, np.asarray([max(n, 1) for n in ns], dtype=np.int64))
        for i, n_i in enumerate(ns):
            if n_i == 0:
                continue
            dist = float(np.minimum(fracs[i], 1.0 - fracs[i]).max())
            limit = 1.0 / float(lengths[i])
            worst_phase_margin = min(worst_phase_margin, limit - dist)
            if dist > limit + 1e-12:
                phases_ok = False

    prod = 1.0
    for length in lengths:
        prod *= float(length)
    prod_bound = X / D ** (3 * D)
    prop3_ok = prod >= prod_bound * (1 - 1e-12)

    return {
        "distinct_sums": distinct,
        "distinct_mode": distinct_mode,
        "max_sum": int(max_sum),
        "sum_bound": float(bound_sum),
        "sum_bound_ok": bool(prop1_bound_ok),
        "phases_ok": bool(phases_ok),
        "worst_phase_margin": float(worst_phase_margin),
        "length_product": float(prod),
        "length_product_bound": float(prod_bound),
        "product_ok": bool(prop3_ok),
        "all_ok": bool(distinct and prop1_bound_ok and phases_ok and prop3_ok),
    }


def refine_structure(
    raw: RawBohrStructure,
    theta,
    d: int,
    X: int,
    D: int,
    c1: float = 2.0,
    vol_min: float | None = None,
    sum_budget: float | None = None,
) -> BohrStructure:
    """Prune raw indices until the refined structure properties hold.

    Discards (with reasons recorded) indices that are degenerate, exceed the
    length cap X^(c1/D), break the budget sum n_i L_i <= X/2, or collapse the
    Gram volume of the unit lifts.  Raises AllPrunedError when nothing
    survives.
    """
    theta_m = np.asarray(theta)
    if theta_m.dtype != np.uint64:
        theta_m = to_mantissa(theta_m)
    alpha_m = (np.uint64(d % 2**64) * theta_m).astype(np.uint64)
    if vol_min is None:
        vol_min = float(D) ** (-c1 * D)
    if sum_budget is None:
        sum_budget = X / 2.0

    discarded: list[dict] = []
    survivors: list[dict] = []
    for i, n_i in enumerate(raw.n):
        if n_i <= 0:
            discarded.append({"index": i, "reason": "degenerate", "n": n_i})
            continue
        frac = orbit_fracs(alpha_m, np.asarray([n_i], dtype=np.int64))[0]
        norm = float(np.minimum(frac, 1.0 - frac).max())
        if norm <= 0:
            discarded.append({"index": i, "reason": "degenerate", "n": n_i})
            continue
        L_i = 1.0 / norm
        if L_i <= 1.0:
            discarded.append({"index": i, "reason": "degenerate", "n": n_i})
            continue
        lift = torus_lift(frac)
        survivors.append(
            {"index": i, "n": n_i, "L": L_i, "lift": lift,
             "unit": lift / np.linalg.norm(lift)}
        )

    cap = float(X) ** (c1 / D)
    kept = []
    for s in survivors:
        if s["L"] > cap:
            discarded.append({"index": s["index"], "reason": "length-cap", "L": s["L"]})
        else:
            kept.append(s)

    kept.sort(key=lambda s: s["n"] * s["L"], reverse=True)
    while kept and sum(s["n"] * s["L"] for s in kept) > sum_budget:
        worst = kept.pop(0)
        discarded.append(
            {"index": worst["index"], "reason": "sum-budget", "nL": worst["n"] * worst["L"]}
        )
    kept.sort(key=lambda s: s["index"])

    if kept:
        dist_min = vol_min ** (1.0 / max(1, len(kept)))
        vol_kept = []
        for s in kept:
            basis = np.array([t["unit"] for t in vol_kept]) if vol_kept else np.zeros((0, D))
            dist = _distance_to_span(s["unit"], basis)
            if dist >= dist_min:
                vol_kept.append(s)
            else:
                discarded.append({"index": s["index"], "reason": "volume", "dist": dist})
        kept = vol_kept

    if not kept:
        raise AllPrunedError(
            "refinement discarded every index; toy parameters too aggressive"
        )

    units = np.array([s["unit"] for s in kept])
    vol = gram_volume(units)
    total = sum(s["n"] * s["L"] for s in kept)
    report = {
        "discarded": discarded,
        "sum_nL": float(total),
        "sum_budget": float(sum_budget),
        "sum_ok": total <= sum_budget * (1 + 1e-12),
        "gram_volume": float(vol),
        "vol_min": float(vol_min),
        "volume_ok": vol >= vol_min * (1 - 1e-9),
        "length_cap": cap,
        "length_cap_ok": all(s["L"] <= cap * (1 + 1e-12) for s in kept),
    }
    return BohrStructure(
        n=[s["n"] for s in kept],
        lengths=[s["L"] for s in kept],
        lifts=np.array([s["lift"] for s in kept]),
        units=units,
        report=report,
    )


def slab_concentration(theta, d: int, X: int, v_basis, radius: float,
                       c1: float = 2.0) -> tuple[int, float]:
    """Count orbit points inside the thickened subspace slab, with the
    reference envelope 2 D^((1 - eps c1 / 2) D) X for comparison.

    Counts #{n <= X : lift(theta d n) in B_{1/10} and dist(lift, V) <= radius}.
    """
    theta_m = np.asarray(theta)
    if theta_m.dtype != np.uint64:
        theta_m = to_mantissa(theta_m)
    D = theta_m.shape[0]
    alpha_m = (np.uint64(d % 2**64) * theta_m).astype(np.uint64)
    v = np.atleast_2d(np.asarray(v_basis, dtype=float))
    q_mat, _ = np.linalg.qr(v.T)
    count = 0
    chunk = 1 << 18
    for lo in range(1, X + 1, chunk):
        hi = min(X + 1, lo + chunk)
        ns = np.arange(lo, hi, dtype=np.int64)
        lifts = torus_lift(orbit_fracs(alpha_m, ns))
        inside = np.linalg.norm(lifts, axis=1) <= 0.1
        if not inside.any():
            continue
        pts = lifts[inside]
        proj = pts @ q_mat
        dist = np.linalg.norm(pts - proj @ q_mat.T, axis=1)
        count += int((dist <= radius).sum())
    eps = 1.0 - v.shape[0] / D
    envelope = 2.0 * float(D) ** ((1.0 - eps * c1 / 2.0) * D) * X
    return count, envelope
