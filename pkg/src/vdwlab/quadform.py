"""Random quadratic forms on boxes: gap density, exponential sums,
determinant tails, the quadratic-form measure comparison map, and
projective-plane clique packing.

The central event: the values of q(x_1/L_1, ..., x_s/L_s) over the integer
box 0 <= x_i < L_i should be L^-B dense in [1/2, 3/2] for every admissible
linear/constant part (b, c).  The continuous quantifier over (b, c) is
replaced by a documented finite grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .stats import Z_95, wilson_interval
from .symmetric import index_pairs, pair_index, sym_matrix, sym_tuple, tuple_len

__all__ = [
    "QuadForm",
    "BoxSpec",
    "CliquePacking",
    "GapDensity",
    "SigmaEstimate",
    "eval_quadform",
    "gap_density_check",
    "estimate_sigma_probability",
    "sample_gap_form",
    "exp_sum_discrete",
    "exp_sum_continuous",
    "cont_disc_compare",
    "random_sym_det_tail",
    "fixed_diag_det_tail",
    "measure_compare_f",
    "det_f2",
    "clique_pack",
    "projective_plane_lines",
    "amplified_gap_probability",
]

GRID_BUDGET = 10**8
SLAB_ELEMS = 1 << 22


class QuadratureError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# forms and boxes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadForm:
    """q(t) = sum_{i<=j} a_ij t_i t_j + b . t + c, coefficients upper-triangular."""

    s: int
    a: np.ndarray
    b: np.ndarray
    c: float

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.shape != (tuple_len(self.s),):
            raise ValueError(f"need {tuple_len(self.s)} quadratic coefficients")
        if b.shape != (self.s,):
            raise ValueError(f"need {self.s} linear coefficients")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", float(self.c))

    def symmetric_matrix(self) -> np.ndarray:
        """Matrix S with q(t) = t^T S t + b.t + c (off-diagonal halved)."""
        return sym_matrix(self.a, self.s)

    def upper_matrix(self) -> np.ndarray:
        """Upper-triangular A with q(t) = 1/2 t^T (A + A^T) t + b.t + c."""
        m = np.zeros((self.s, self.s))
        for k, (i, j) in enumerate(index_pairs(self.s)):
            m[i, j] = self.a[k]
        return m

    def diagonal(self) -> np.ndarray:
        return np.array([self.a[pair_index(i, i, self.s)] for i in range(self.s)])

    def restrict(self, indices) -> "QuadForm":
        """Sub-form on the given coordinates, the others pinned to zero."""
        idx = list(indices)
        m = len(idx)
        a_sub = np.empty(tuple_len(m))
        for k, (i, j) in enumerate(index_pairs(m)):
            gi, gj = sorted((idx[i], idx[j]))
            a_sub[k] = self.a[pair_index(gi, gj, self.s)]
        return QuadForm(m, a_sub, self.b[idx], self.c)

    def with_linear(self, b, c: float) -> "QuadForm":
        return QuadForm(self.s, self.a, np.asarray(b, dtype=float), float(c))


def eval_quadform(q: QuadForm, t) -> np.ndarray | float:
    """Evaluate the polynomial form; t has shape (..., s)."""
    t = np.asarray(t, dtype=float)
    out = np.einsum("...i,ij,...j->...", t, q.symmetric_matrix(), t)
    out = out + t @ q.b + q.c
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class BoxSpec:
    """Axis lengths L_1..L_s >= 1, banded around a base length L."""

    lengths: tuple[float, ...]
    base: float
    band_exponent: float = 1.0 / 48.0

    def __post_init__(self):
        lengths = tuple(float(x) for x in self.lengths)
        object.__setattr__(self, "lengths", lengths)
        if any(x < 1 for x in lengths):
            raise ValueError("box lengths must be >= 1")
        if self.base < 1:
            raise ValueError("base length must be >= 1")

    @classmethod
    def uniform(cls, s: int, L: float) -> "BoxSpec":
        return cls(lengths=(L,) * s, base=L)

    @property
    def s(self) -> int:
        return len(self.lengths)

    def counts(self) -> list[int]:
        return [math.ceil(L) for L in self.lengths]

    def num_points(self) -> int:
        n = 1
        for c in self.counts():
            n *= c
        return n

    def band_ok(self) -> bool:
        hi = self.base ** (1.0 + self.band_exponent)
        return all(self.base <= L <= hi + 1e-9 for L in self.lengths)


def _axis_coords(counts: list[int], lengths: tuple[float, ...]) -> list[np.ndarray]:
    s = len(counts)
    out = []
    for i in range(s):
        shape = [1] * s
        shape[i] = counts[i]
        out.append((np.arange(counts[i]) / lengths[i]).reshape(shape))
    return out


def _iter_value_slabs(q: QuadForm, box: BoxSpec, weights: Callable | None = None):
    """Yield flat arrays of q-values (optionally with weight arrays) over the
    integer grid, slab by slab along axis 0 to bound memory."""
    counts = box.counts()
    total = box.num_points()
    if total > GRID_BUDGET:
        raise ValueError(f"grid of {total} points exceeds budget {GRID_BUDGET}")
    s = q.s
    if s != box.s:
        raise ValueError("form and box dimensions differ")
    inner = total // counts[0]
    slab0 = max(1, min(counts[0], SLAB_ELEMS // max(1, inner)))
    ts_inner = _axis_coords(counts, box.lengths)
    pairs = index_pairs(s)
    w_axes = None
    if weights is not None:
        w_axes = [weights(np.ravel(t)).reshape(t.shape) for t in ts_inner]
    for lo in range(0, counts[0], slab0):
        hi = min(counts[0], lo + slab0)
        t0 = ts_inner[0].ravel()[lo:hi].reshape([hi - lo] + [1] * (s - 1))
        acc = np.full([hi - lo] + counts[1:], q.c)
        for k, (i, j) in enumerate(pairs):
            if q.a[k] == 0.0:
                continue
            ti = t0 if i == 0 else ts_inner[i]
            tj = t0 if j == 0 else ts_inner[j]
            acc += q.a[k] * ti * tj
        for i in range(s):
            if q.b[i] != 0.0:
                acc += q.b[i] * (t0 if i == 0 else ts_inner[i])
        if weights is None:
            yield acc.ravel()
        else:
            wa = w_axes[0].ravel()[lo:hi].reshape([hi - lo] + [1] * (s - 1)).copy()
            w = wa
            for i in range(1, s):
                w = w * w_axes[i]
            yield acc.ravel(), np.broadcast_to(w, acc.shape).ravel()


# ---------------------------------------------------------------------------
# gap density
# ---------------------------------------------------------------------------


@dataclass
class GapDensity:
    dense: bool
    worst_gap: float
    epsilon: float
    num_values: int

    def to_dict(self) -> dict:
        return {
            "dense": self.dense,
            "worst_gap": self.worst_gap,
            "epsilon": self.epsilon,
            "num_values": self.num_values,
        }


def _coverage_gap(sorted_vals: np.ndarray, lo: float, hi: float) -> float:
    """Largest distance from a point of [lo, hi] to the value set."""
    if sorted_vals.size == 0:
        return math.inf
    mids = (sorted_vals[:-1] + sorted_vals[1:]) / 2.0
    mids = mids[(mids > lo) & (mids < hi)]
    cands = np.concatenate(([lo, hi], mids))
    pos = np.searchsorted(sorted_vals, cands)
    left = np.where(pos > 0, np.abs(cands - sorted_vals[np.maximum(pos - 1, 0)]), math.inf)
    right = np.where(
        pos < sorted_vals.size,
        np.abs(sorted_vals[np.minimum(pos, sorted_vals.size - 1)] - cands),
        math.inf,
    )
    return float(np.max(np.minimum(left, right)))


def gap_density_check(
    q: QuadForm, box: BoxSpec, B: float, interval: tuple[float, float] = (0.5, 1.5)
) -> GapDensity:
    """Enumerate the value set exactly and measure its worst uncovered gap.

    Dense means: every point of the target interval lies within L^-B of a
    value.  Values are deduplicated by an exact sorted sweep.
    """
    eps = box.base ** (-B)
    lo, hi = interval
    pieces = []
    for vals in _iter_value_slabs(q, box):
        near = vals[(vals >= lo - eps) & (vals <= hi + eps)]
        if near.size:
            pieces.append(near)
    if pieces:
        allv = np.unique(np.concatenate(pieces))
    else:
        allv = np.empty(0)
    worst = _coverage_gap(allv, lo, hi)
    return GapDensity(dense=worst <= eps, worst_gap=worst, epsilon=eps,
                      num_values=int(allv.size))


def sample_gap_form(s: int, Q: float, rng: np.random.Generator) -> QuadForm:
    """Quadratic part with off-diagonal uniform in [-Q, Q] and diagonal in
    the band between 32 and Q (order-normalised so toy Q < 32 still works)."""
    lo, hi = sorted((32.0, float(Q)))
    a = np.empty(tuple_len(s))
    for k, (i, j) in enumerate(index_pairs(s)):
        a[k] = rng.uniform(lo, hi) if i == j else rng.uniform(-Q, Q)
    return QuadForm(s, a, np.zeros(s), 0.0)


def _admissible_c_grid(q: QuadForm, b: np.ndarray, grid_c: int) -> np.ndarray:
    """c values with |c| <= 1/4 and b_i^2 - 4 a_ii c < 0 for all i."""
    diag = q.diagonal()
    c_lo = float(np.max(b * b / (4.0 * diag))) if b.size else 0.0
    if c_lo >= 0.25:
        return np.empty(0)
    margin = (0.25 - c_lo) / (grid_c + 1)
    return np.linspace(c_lo + margin, 0.25, grid_c)


def sigma_event_holds(
    q: QuadForm,
    box: BoxSpec,
    B: float,
    Q: float | None = None,
    grid_b: int = 3,
    grid_c: int = 3,
) -> tuple[bool, dict]:
    """Check L^-B density of the value set for every (b, c) on the grid.

    The quadratic values are enumerated once; linear parts are added per b
    and the density of [1/2 - c, 3/2 - c] is tested for each admissible c.
    The b grid spans [-Q, Q] per coordinate.
    """
    eps = box.base ** (-B)
    counts = box.counts()
    total = box.num_points()
    if total > SLAB_ELEMS:
        raise ValueError("sigma event check needs the whole grid in memory; shrink the box")
    base_vals = next(_iter_value_slabs(q.with_linear(np.zeros(q.s), 0.0), box))
    base_vals = base_vals.reshape(counts)
    ts = _axis_coords(counts, box.lengths)
    if Q is None:
        Q = abs_q_bound(q)
    b_axis = np.linspace(-Q, Q, grid_b)
    worst = 0.0
    checked = 0
    for b_combo in np.stack(np.meshgrid(*([b_axis] * q.s), indexing="ij"), axis=-1).reshape(
        -1, q.s
    ):
        cs = _admissible_c_grid(q, b_combo, grid_c)
        if cs.size == 0:
            continue
        vals = base_vals
        for i in range(q.s):
            if b_combo[i]:
                vals = vals + b_combo[i] * ts[i]
        flat = vals.ravel()
        window_lo = 0.5 - 0.25 - eps
        window_hi = 1.5 + eps
        near = np.unique(flat[(flat >= window_lo) & (flat <= window_hi)])
        for c in cs:
            checked += 1
            gap = _coverage_gap(near, 0.5 - c, 1.5 - c)
            worst = max(worst, gap)
            if gap > eps:
                return False, {
                    "worst_gap": worst,
                    "failed_b": b_combo.tolist(),
                    "failed_c": float(c),
                    "pairs_checked": checked,
                }
    return True, {"worst_gap": worst, "pairs_checked": checked}


def abs_q_bound(q: QuadForm) -> float:
    """Grid half-width used for adversarial b: the coefficient scale Q."""
    off = [abs(q.a[k]) for k, (i, j) in enumerate(index_pairs(q.s)) if i != j]
    return max(max(off, default=1.0), 1.0)


@dataclass
class SigmaEstimate:
    frequency: float
    interval: tuple[float, float]
    trials: int
    passes: int
    grid_b: int
    grid_c: int
    records: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "frequency": self.frequency,
            "interval": list(self.interval),
            "trials": self.trials,
            "passes": self.passes,
            "grid_b": self.grid_b,
            "grid_c": self.grid_c,
        }


def estimate_sigma_probability(
    s: int,
    Q: float,
    L: float,
    B: float,
    box: BoxSpec | None,
    trials: int,
    rng: np.random.Generator,
    grid_b: int = 3,
    grid_c: int = 3,
) -> SigmaEstimate:
    """Monte-Carlo frequency of the density event over random quadratic parts.

    The adversarial (b, c) quantifier runs over a finite documented grid;
    the reported Wilson interval is for the grid surrogate event.
    """
    if s < 2:
        raise ValueError("need s >= 2")
    if box is None:
        box = BoxSpec.uniform(s, L)
    passes = 0
    records = []
    for t in range(trials):
        q = sample_gap_form(s, Q, rng)
        ok, info = sigma_event_holds(q, box, B, Q=Q, grid_b=grid_b, grid_c=grid_c)
        passes += ok
        records.append({"trial": t, "pass": bool(ok), "worst_gap": info["worst_gap"]})
    freq = passes / trials if trials else 0.0
    interval = wilson_interval(passes, trials, Z_95) if trials else (0.0, 1.0)
    return SigmaEstimate(
        frequency=freq,
        interval=interval,
        trials=trials,
        passes=passes,
        grid_b=grid_b,
        grid_c=grid_c,
        records=records,
    )


# ---------------------------------------------------------------------------
# exponential sums
# ---------------------------------------------------------------------------


def exp_sum_discrete(q: QuadForm, box: BoxSpec, w: Callable | None, xi: float) -> complex:
    """S(xi) = average over the integer grid of w-tensor times e(xi q)."""
    total = box.num_points()
    acc = 0.0 + 0.0j
    if w is None:
        for vals in _iter_value_slabs(q, box):
            acc += np.exp(2j * np.pi * xi * vals).sum()
    else:
        for vals, weights in _iter_value_slabs(q, box, weights=w):
            acc += (weights * np.exp(2j * np.pi * xi * vals)).sum()
    return complex(acc / total)


class QuadratureResult(NamedTuple):
    value: complex
    error_estimate: float


def exp_sum_continuous(
    q: QuadForm,
    w: Callable | None,
    xi: float,
    order: int = 64,
    tol: float = 1e-8,
    max_order: int = 1024,
) -> QuadratureResult:
    """T(xi) = integral over [0,1]^s of w-tensor times e(xi q), by tensor
    Gauss-Legendre quadrature with doubling until the estimate stabilises."""

    def tensor_value(n: int) -> complex:
        nodes, wts = np.polynomial.legendre.leggauss(n)
        t = (nodes + 1.0) / 2.0
        u = wts / 2.0
        axes_t = []
        axes_w = []
        for i in range(q.s):
            shape = [1] * q.s
            shape[i] = n
            axes_t.append(t.reshape(shape))
            axes_w.append((u if w is None else u * w(t)).reshape(shape))
        acc = np.full([n] * q.s, q.c)
        for k, (i, j) in enumerate(index_pairs(q.s)):
            if q.a[k]:
                acc = acc + q.a[k] * axes_t[i] * axes_t[j]
        for i in range(q.s):
            if q.b[i]:
                acc = acc + q.b[i] * axes_t[i]
        f = np.exp(2j * np.pi * xi * acc)
        for i in range(q.s):
            f = f * axes_w[i]
        return complex(f.sum())

    prev = tensor_value(order)
    n = order
    while True:
        n *= 2
        if n**q.s > 4 * GRID_BUDGET or n > max_order:
            raise QuadratureError(f"quadrature did not converge below {tol} by order {n // 2}")
        cur = tensor_value(n)
        err = abs(cur - prev)
        if err < tol:
            return QuadratureResult(cur, err)
        prev = cur


@dataclass
class ContDiscComparison:
    max_difference: float
    records: list[dict]
    fourier_tail_bound: float

    def to_dict(self) -> dict:
        return {
            "max_difference": self.max_difference,
            "fourier_tail_bound": self.fourier_tail_bound,
            "records": self.records,
        }


def cont_disc_compare(
    q: QuadForm,
    box: BoxSpec,
    B: float,
    w: Callable | None,
    chi,
    xi_grid: np.ndarray,
    b_grid: np.ndarray | None = None,
    c_grid: np.ndarray | None = None,
    tail_tolerance: float = 1e-4,
) -> ContDiscComparison:
    """Compare int w-tensor chi(q) d(mu) against d(mu_disc) over a (b, c) grid.

    Both integrals are computed through the Fourier expansion of chi on the
    supplied xi grid: integral = sum_grid chi_hat(xi) * (S or T)(xi) dxi.
    chi must expose fourier(xi); chi = None means the constant function 1
    (the comparison then degenerates to the plain w averages).  An error is
    raised when the chi-tail beyond the grid exceeds tail_tolerance.
    """
    xi_grid = np.asarray(xi_grid, dtype=float)
    if b_grid is None:
        b_grid = np.zeros((1, q.s))
    if c_grid is None:
        c_grid = np.array([0.0])
    if chi is not None:
        ximax = float(np.max(np.abs(xi_grid)))
        tail = chi.fourier_tail_bound(ximax)
        if tail > tail_tolerance:
            raise ValueError(
                f"xi grid too coarse: chi tail {tail:.3g} exceeds {tail_tolerance:.3g}"
            )
    else:
        tail = 0.0
    records = []
    worst = 0.0
    for b in np.atleast_2d(b_grid):
        for c in np.atleast_1d(c_grid):
            qbc = q.with_linear(b, float(c))
            if chi is None:
                s_val = exp_sum_discrete(qbc, box, w, 0.0)
                t_val = exp_sum_continuous(qbc, w, 0.0).value
                diff = abs(s_val - t_val)
            else:
                weights = np.asarray([chi.fourier(x) for x in xi_grid])
                s_side = 0.0 + 0.0j
                t_side = 0.0 + 0.0j
                # trapezoid over the xi grid
                dxi = np.gradient(xi_grid)
                for x, wt, dx in zip(xi_grid, weights, dxi):
                    s_side += wt * exp_sum_discrete(qbc, box, w, x) * dx
                    t_side += wt * exp_sum_continuous(qbc, w, x, tol=1e-7).value * dx
                diff = abs(s_side - t_side)
            worst = max(worst, float(diff))
            records.append({"b": np.asarray(b).tolist(), "c": float(c), "diff": float(diff)})
    return ContDiscComparison(max_difference=worst, records=records, fourier_tail_bound=tail)


# ---------------------------------------------------------------------------
# determinant tails
# ---------------------------------------------------------------------------


def random_sym_det_tail(
    n: int, delta_list, trials: int, rng: np.random.Generator, chunk: int = 200_000
) -> dict[float, tuple[float, tuple[float, float]]]:
    """Empirical P(|det W| <= delta) for symmetric W with entries U[-1/n, 1/n]."""
    if n > 12:
        raise ValueError("n limited to 12")
    if trials > 10**7:
        raise ValueError("trials limited to 1e7")
    deltas = [float(d) for d in delta_list]
    if any(d < 0 for d in deltas):
        raise ValueError("deltas must be nonnegative")
    counts = {d: 0 for d in deltas}
    done = 0
    iu = np.triu_indices(n)
    while done < trials:
        m = min(chunk, trials - done)
        entries = rng.uniform(-1.0 / n, 1.0 / n, size=(m, n * (n + 1) // 2))
        w = np.zeros((m, n, n))
        w[:, iu[0], iu[1]] = entries
        w = w + np.transpose(w, (0, 2, 1))
        w[:, np.arange(n), np.arange(n)] /= 2.0
        dets = np.abs(np.linalg.det(w))
        for d in deltas:
            counts[d] += int((dets <= d).sum())
        done += m
    return {
        d: (counts[d] / trials, wilson_interval(counts[d], trials, Z_95)) for d in deltas
    }


def fixed_diag_det_tail(
    m: int, diag, Q: float, delta: float, trials: int, rng: np.random.Generator,
    chunk: int = 200_000,
) -> float:
    """P(|det(a + a^T)| <= delta) with the diagonal of a held fixed."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if trials > 10**7:
        raise ValueError("trials limited to 1e7")
    diag = np.asarray(diag, dtype=float)
    if diag.shape != (m,):
        raise ValueError("diag must have length m")
    hits = 0
    done = 0
    iu = np.triu_indices(m, k=1)
    while done < trials:
        nchunk = min(chunk, trials - done)
        w = np.zeros((nchunk, m, m))
        if iu[0].size:
            off = rng.uniform(-Q, Q, size=(nchunk, iu[0].size))
            w[:, iu[0], iu[1]] = off
            w = w + np.transpose(w, (0, 2, 1))
        w[:, np.arange(m), np.arange(m)] = 2.0 * diag[None, :]
        dets = np.abs(np.linalg.det(w))
        hits += int((dets <= delta).sum())
        done += nchunk
    return hits / trials


# ---------------------------------------------------------------------------
# measure comparison map
# ---------------------------------------------------------------------------


def measure_compare_f(x, ws) -> np.ndarray:
    """f(x): coefficient tuple of the Gram form of the transformed frame.

    x is a SymCoeffs-like tuple (or raw array) for dimension D; ws is an
    (s, D) array of independent vectors.  Returns the s(s+1)/2 tuple of
    sum_{i<=j} coefficients of the quadratic form t -> ||(I+S(x)) W t||^2.
    """
    ws = np.atleast_2d(np.asarray(ws, dtype=float))
    entries = getattr(x, "entries", x)
    d = ws.shape[1]
    transform = np.eye(d) + sym_matrix(np.asarray(entries, dtype=float), d)
    img = ws @ transform.T
    gram = img @ img.T
    return sym_tuple(gram)


def det_f2(w: np.ndarray) -> float:
    """Determinant of the tuple-space linear map x -> tuple(W^T S(x) W)."""
    w = np.asarray(w, dtype=float)
    d = w.shape[0]
    if w.shape != (d, d):
        raise ValueError("W must be square")
    dim = tuple_len(d)
    cols = np.empty((dim, dim))
    for k in range(dim):
        unit = np.zeros(dim)
        unit[k] = 1.0
        cols[:, k] = sym_tuple(w.T @ sym_matrix(unit, d) @ w)
    return float(np.linalg.det(cols))


# ---------------------------------------------------------------------------
# clique packing
# ---------------------------------------------------------------------------


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in range(2, int(math.isqrt(p)) + 1):
        if p % q == 0:
            return False
    return True


def projective_plane_lines(p: int) -> list[list[int]]:
    """Lines of PG(2, p) as sorted lists of point indices.

    Points and lines are both indexed by homogeneous triples normalised so
    the first nonzero coordinate is 1, enumerated in lexicographic order.
    """
    if not _is_prime(p):
        raise ValueError("p must be prime")
    points = []
    for x in range(p):
        for y in range(p):
            for z in range(p):
                if (x, y, z) == (0, 0, 0):
                    continue
                first = next(v for v in (x, y, z) if v)
                if first != 1:
                    continue
                points.append((x, y, z))
    points.sort()
    idx = {pt: i for i, pt in enumerate(points)}
    lines = []
    for coeff in points:
        a, b, c = coeff
        line = [idx[(x, y, z)] for (x, y, z) in points if (a * x + b * y + c * z) % p == 0]
        lines.append(sorted(line))
    return lines


@dataclass(frozen=True)
class CliquePacking:
    """Edge-disjoint m-subsets of [s] built from projective-plane lines."""

    s: int
    m: int
    prime: int
    blocks: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.blocks)

    def verify_edge_disjoint(self) -> bool:
        seen: set[tuple[int, int]] = set()
        for block in self.blocks:
            for i in range(len(block)):
                for j in range(i + 1, len(block)):
                    pair = (block[i], block[j])
                    if pair in seen:
                        return False
                    seen.add(pair)
        return True

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "m": self.m,
            "prime": self.prime,
            "k": self.k,
            "blocks": [list(b) for b in self.blocks],
        }


def clique_pack(s: int, m: int) -> CliquePacking:
    """Pack >= s/16 edge-disjoint m-cliques into [s] (for s >= 16 m^2).

    Uses lines of PG(2, p) for a prime p in [m, 2m), truncated to m points
    per line, replicated across disjoint copies of the plane.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    primes = [p for p in range(m, 2 * m) if _is_prime(p)]
    if not primes:
        raise AssertionError("Bertrand guarantees a prime in [m, 2m)")
    usable = [p for p in primes if p * p + p + 1 <= s]
    if not usable:
        smallest = primes[0] ** 2 + primes[0] + 1
        raise ValueError(f"s={s} too small: need at least {smallest} for m={m}")
    p = usable[0]
    v = p * p + p + 1
    lines = projective_plane_lines(p)
    t = s // v
    blocks = []
    for copy in range(t):
        off = copy * v
        for line in lines:
            blocks.append(tuple(off + q for q in line[:m]))
    return CliquePacking(s=s, m=m, prime=p, blocks=tuple(blocks))


@dataclass
class AmplifiedEstimate:
    union_frequency: float
    block_frequencies: list[float]
    trials: int
    packing: CliquePacking
    disjointness_verified: bool

    def to_dict(self) -> dict:
        return {
            "union_frequency": self.union_frequency,
            "block_frequencies": self.block_frequencies,
            "max_block_frequency": max(self.block_frequencies, default=0.0),
            "trials": self.trials,
            "k": self.packing.k,
            "disjointness_verified": self.disjointness_verified,
        }


def amplified_gap_probability(
    s: int,
    m: int,
    Q: float,
    L: float,
    B: float,
    box: BoxSpec | None,
    trials: int,
    rng: np.random.Generator,
    grid_b: int = 3,
    grid_c: int = 3,
    max_blocks: int | None = None,
) -> AmplifiedEstimate:
    """Union of per-block density events over an edge-disjoint clique packing.

    Per trial a full coefficient tuple is sampled; each block restricts the
    form to its m coordinates (others zero) and runs the density event
    there.  Blocks consume disjoint off-diagonal coefficients, re-verified
    per call, so their events are independent.
    """
    packing = clique_pack(s, m)
    blocks = packing.blocks if max_blocks is None else packing.blocks[:max_blocks]
    if box is None:
        box = BoxSpec.uniform(s, L)
    disjoint = packing.verify_edge_disjoint()
    if not disjoint:
        raise AssertionError("packing is not edge-disjoint")
    union_hits = 0
    block_hits = [0] * len(blocks)
    for _ in range(trials):
        q = sample_gap_form(s, Q, rng)
        any_pass = False
        for bi, block in enumerate(blocks):
            sub_box = BoxSpec(
                lengths=tuple(box.lengths[i] for i in block), base=box.base,
                band_exponent=box.band_exponent,
            )
            ok, _info = sigma_event_holds(q.restrict(block), sub_box, B, Q=Q,
                                          grid_b=grid_b, grid_c=grid_c)
            block_hits[bi] += ok
            any_pass = any_pass or ok
        union_hits += any_pass
    return AmplifiedEstimate(
        union_frequency=union_hits / trials if trials else 0.0,
        block_frequencies=[h / trials if trials else 0.0 for h in block_hits],
        trials=trials,
        packing=packing,
        disjointness_verified=disjoint,
    )
