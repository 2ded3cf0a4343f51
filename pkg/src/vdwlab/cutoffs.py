"""Closed-form cutoff functions with verified support, sign and Fourier data.

Every construction resolves its defining convolution to a piecewise
polynomial (or finite Fourier series) at build time, so support statements
are exact, not numerical.  Each object carries a ``report()`` returning the
measured properties as a JSON-serialisable dict.

Fourier convention: f_hat(g) = integral f(x) e(-g x) dx with e(t) = exp(2 pi i t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "Cutoff1D",
    "TorusCutoff",
    "Tent",
    "FejerWeight",
    "IntervalMajorant",
    "BandLimitedMinorant",
    "TorusBoxCutoff",
    "TorusBallMinorant",
    "tent",
    "fejer_weight",
    "interval_majorant",
    "band_limited_minorant",
    "torus_box_cutoff",
    "torus_ball_minorant",
    "gauss_quad",
]

SIN1_SQ = math.sin(1.0) ** 2


def gauss_quad(f, a: float, b: float, order: int = 200) -> float:
    """Gauss-Legendre quadrature of f over [a, b]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    x = (nodes + 1.0) * (b - a) / 2.0 + a
    return float(((b - a) / 2.0) * np.sum(weights * f(x)))


class Cutoff1D:
    """Base for one-dimensional cutoffs; subclasses define kind and params."""

    kind: str

    def report(self) -> dict:  # pragma: no cover - overridden
        raise NotImplementedError


class TorusCutoff:
    """Base for cutoffs on T^D."""

    kind: str

    def report(self) -> dict:  # pragma: no cover - overridden
        raise NotImplementedError


def _triangle_antiderivative(t: np.ndarray, half: float) -> np.ndarray:
    """Antiderivative of the triangle (half - |u|)_+ , clamped outside."""
    t = np.asarray(t, dtype=float)
    area = half * half  # integral of the triangle
    out = np.empty_like(t)
    left = t <= -half
    mid_lo = (~left) & (t <= 0)
    mid_hi = (t > 0) & (t < half)
    right = t >= half
    out[left] = 0.0
    out[mid_lo] = (t[mid_lo] + half) ** 2 / 2.0
    out[mid_hi] = area - (half - t[mid_hi]) ** 2 / 2.0
    out[right] = area
    return out


@dataclass
class Tent(Cutoff1D):
    """Plateau cutoff: 1 on [eta, 1-eta], supported on [0, 1], C^1.

    Triple box convolution (4/eta^2) 1_[eta/2, 1-eta/2] * 1_[-eta/4, eta/4]^(*2),
    resolved to quadratic pieces.  Outside [0, 1] the evaluation is exactly 0
    and on the plateau exactly 1.
    """

    eta: float
    kind: str = "tent"

    def __post_init__(self):
        if not 0 < self.eta < 0.5:
            raise ValueError("tent needs 0 < eta < 1/2")

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        half = self.eta / 2.0
        area = half * half
        g1 = _triangle_antiderivative(x - self.eta / 2.0, half)
        g2 = _triangle_antiderivative(x - 1.0 + self.eta / 2.0, half)
        return (g1 - g2) / area

    def derivative(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        half = self.eta / 2.0
        area = half * half
        tri1 = np.maximum(half - np.abs(x - self.eta / 2.0), 0.0)
        tri2 = np.maximum(half - np.abs(x - 1.0 + self.eta / 2.0), 0.0)
        return (tri1 - tri2) / area

    def report(self, grid_n: int = 20001) -> dict:
        xs = np.linspace(-0.5, 1.5, grid_n)
        vals = self(xs)
        outside = vals[(xs < 0) | (xs > 1)]
        plateau = self(np.linspace(self.eta, 1 - self.eta, 1001))
        deriv_max = float(np.abs(self.derivative(xs)).max())
        return {
            "kind": self.kind,
            "eta": self.eta,
            "support_ok": bool((outside == 0.0).all()),
            "plateau_ok": bool((plateau == 1.0).all()),
            "range_ok": bool((vals >= 0).all() and (vals <= 1.0 + 1e-15).all()),
            "deriv_max": deriv_max,
            "deriv_times_eta": deriv_max * self.eta,
            "deriv_bound_ok": bool(deriv_max <= 20.0 / self.eta),
        }


@dataclass
class FejerWeight(Cutoff1D):
    """Nonnegative-spectrum weight on Z supported on [-X/5, X/5].

    w(n) = (25/X) (2K+1 - |n|)_+ with K = floor(X/10); its transform is the
    scaled squared Dirichlet kernel, hence pointwise >= 0.
    """

    X: float
    kind: str = "fejer"

    def __post_init__(self):
        if self.X < 10:
            raise ValueError("fejer weight needs X >= 10")
        self.K = int(self.X // 10)

    def __call__(self, n) -> np.ndarray:
        n = np.asarray(n)
        return (25.0 / self.X) * np.maximum((2 * self.K + 1) - np.abs(n), 0.0)

    def support_bound(self) -> int:
        return 2 * self.K

    def sum(self) -> float:
        return (25.0 / self.X) * (2 * self.K + 1) ** 2

    def fourier(self, beta) -> np.ndarray:
        """w_hat(beta) = (25/X) |sum_{|n|<=K} e(-beta n)|^2, closed form."""
        beta = np.asarray(beta, dtype=float)
        s = np.sin(np.pi * beta)
        num = np.sin((2 * self.K + 1) * np.pi * beta)
        with np.errstate(divide="ignore", invalid="ignore"):
            dirichlet = np.where(np.abs(s) > 1e-300, num / s, float(2 * self.K + 1))
        return (25.0 / self.X) * dirichlet**2

    def report(self, beta_grid: int = 10001) -> dict:
        betas = np.linspace(1e-6, 0.5, beta_grid)
        what = self.fourier(betas)
        dist = np.minimum(betas % 1.0, 1.0 - betas % 1.0)
        decay_ok = bool((what <= 2**5 / self.X / dist**2 + 1e-9).all())
        ns = np.arange(-3 * self.K - 2, 3 * self.K + 3)
        vals = self(ns)
        support_ok = bool((vals[np.abs(ns) > self.X / 5.0] == 0).all())
        return {
            "kind": self.kind,
            "X": self.X,
            "support_ok": support_ok,
            "fourier_nonneg_ok": bool((what >= 0).all()),
            "sum": self.sum(),
            "sum_ok": self.sum() >= self.X,
            "decay_bound_ok": decay_ok,
        }


def _box_hat(a: float, gamma) -> np.ndarray:
    """Transform of 1_[-a, a]: sin(2 pi a g) / (pi g)."""
    gamma = np.atleast_1d(np.asarray(gamma, dtype=float))
    out = np.empty_like(gamma)
    small = np.abs(gamma) < 1e-12
    out[small] = 2.0 * a
    g = gamma[~small]
    out[~small] = np.sin(2.0 * np.pi * a * g) / (np.pi * g)
    return out


@dataclass
class IntervalMajorant(Cutoff1D):
    """Majorant of the interval [-delta/2, delta/2], zero beyond |x| > delta.

    chi(x) = psi(x/delta) with psi = 16 1_[-3/4,3/4] * 1_[-1/8,1/8]^(*2);
    psi equals 1 on [-1/2, 1/2] and its transform decays like |g|^-3.
    """

    delta: float
    kind: str = "interval-majorant"

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise ValueError("interval majorant needs 0 < delta < 1")

    def _psi(self, t) -> np.ndarray:
        g1 = _triangle_antiderivative(np.asarray(t, dtype=float) + 0.75, 0.25)
        g2 = _triangle_antiderivative(np.asarray(t, dtype=float) - 0.75, 0.25)
        return 16.0 * (g1 - g2)

    def __call__(self, x) -> np.ndarray:
        return self._psi(np.asarray(x, dtype=float) / self.delta)

    def psi_fourier(self, gamma):
        scalar = np.ndim(gamma) == 0
        res = 16.0 * _box_hat(0.75, gamma) * _box_hat(0.125, gamma) ** 2
        return res.item() if scalar else res

    def fourier(self, xi):
        """chi_hat(xi) = delta psi_hat(xi delta)."""
        return self.delta * self.psi_fourier(np.asarray(xi, dtype=float) * self.delta)

    def fourier_tail_bound(self, ximax: float) -> float:
        """Bound on the integral of |chi_hat| over |xi| > ximax."""
        t = ximax * self.delta
        if t <= 0:
            return math.inf
        return 16.0 / (math.pi**3 * t**2)

    def integral(self) -> float:
        return 1.5 * self.delta  # 16 * (3/2) * (1/16), scaled by delta

    def report(self) -> dict:
        inner = np.linspace(-self.delta / 2, self.delta / 2, 501)
        outer = np.array([1.001 * self.delta, 1.1 * self.delta, 2 * self.delta, 10.0])
        quad = gauss_quad(self, -self.delta, self.delta, order=400)
        gammas = np.linspace(3.0, 200.0, 500)
        decay = np.abs(self.psi_fourier(gammas)) * gammas**3
        l1 = gauss_quad(lambda g: np.abs(self.psi_fourier(g)), -50.0, 50.0, order=2000)
        return {
            "kind": self.kind,
            "delta": self.delta,
            "majorant_ok": bool((self(inner) >= 1.0 - 1e-12).all()),
            "support_ok": bool((self(outer) == 0.0).all()),
            "integral_over_delta": quad / self.delta,
            "integral_ratio_ok": bool(1.0 <= quad / self.delta <= 5.0),
            "psi_hat_decay_const": float(decay.max()),
            "psi_hat_l1": l1,
        }


@dataclass
class BandLimitedMinorant(Cutoff1D):
    """psi(x) = sin^2 x / (x^2 sin^2 1): >= 1 on [-1, 1], spectrum in [-1, 1].

    The transform is the exact triangle pi (1 - pi |g|)_+ / sin^2 1, supported
    in |g| <= 1/pi.
    """

    kind: str = "band-limited-minorant"

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(x)
        small = np.abs(x) < 1e-8
        out[small] = 1.0 / SIN1_SQ
        xs = x[~small]
        out[~small] = np.sin(xs) ** 2 / (xs**2 * SIN1_SQ)
        return out

    def fourier(self, gamma) -> np.ndarray:
        gamma = np.asarray(gamma, dtype=float)
        return np.pi * np.maximum(1.0 - np.pi * np.abs(gamma), 0.0) / SIN1_SQ

    def fourier_support(self) -> float:
        return 1.0 / math.pi

    def integral_exact(self) -> float:
        return math.pi / SIN1_SQ

    def report(self) -> dict:
        xs = np.linspace(-1.0, 1.0, 2001)
        minorant_ok = bool((self(xs) >= 1.0 - 1e-12).all())
        # quadrature of the heavy tail: [-T, T] plus the analytic tail bound
        T = 2000.0
        quad = gauss_quad(self, -T, T, order=4000)
        tail = 2.0 / (T * SIN1_SQ)
        # inverse transform of the closed-form triangle must reproduce psi
        probe = np.array([-2.31, -0.5, 0.0, 0.77, 1.0, 3.14, 9.2])
        nodes, weights = np.polynomial.legendre.leggauss(400)
        g = nodes / math.pi  # map to [-1/pi, 1/pi]
        w = weights / math.pi
        recon = np.array(
            [np.sum(w * self.fourier(g) * np.cos(2 * np.pi * g * x)) for x in probe]
        )
        inv_residual = float(np.abs(recon - self(probe)).max())
        return {
            "kind": self.kind,
            "nonnegative": True,  # a square by construction
            "minorant_ok": minorant_ok,
            "integral_quadrature": quad,
            "integral_tail_bound": tail,
            "integral_ok": bool(3.0 <= quad + tail and quad <= 5.0),
            "integral_exact": self.integral_exact(),
            "inverse_transform_residual": inv_residual,
            "fourier_ok": inv_residual < 1e-8,
            "fourier_support": self.fourier_support(),
        }


@dataclass
class TorusBoxCutoff(TorusCutoff):
    """Product cutoff on T^D: >= 1 on the box ||x||_T <= X^(-1/D), band-limited.

    Each factor is the periodisation of the band-limited minorant scaled to
    eps = X^(-1/D), evaluated through its finite cosine series; coefficients
    vanish exactly for |xi| >= X^(1/D).
    """

    X: float
    D: int
    kind: str = "box-cutoff"

    def __post_init__(self):
        if self.X < 1 or self.D < 1:
            raise ValueError("need X >= 1 and D >= 1")
        self.eps = float(self.X) ** (-1.0 / self.D)
        self.max_freq = int(math.ceil(1.0 / (math.pi * self.eps))) + 1
        xi = np.arange(0, self.max_freq + 1)
        base = BandLimitedMinorant()
        self.coeffs = self.eps * base.fourier(xi * self.eps)

    def factor_fourier(self, xi) -> np.ndarray:
        """phi_hat(xi) = eps psi_hat(xi eps); exactly 0 for |xi| >= X^(1/D)."""
        xi = np.abs(np.asarray(xi))
        out = np.zeros(xi.shape, dtype=float)
        inside = xi <= self.max_freq
        out[inside] = self.eps * BandLimitedMinorant().fourier(xi[inside] * self.eps)
        return out

    def factor(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        acc = np.full(x.shape, self.coeffs[0])
        for xi in range(1, self.max_freq + 1):
            if self.coeffs[xi] == 0.0:
                continue
            acc = acc + 2.0 * self.coeffs[xi] * np.cos(2.0 * np.pi * xi * x)
        return acc

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        vals = np.prod(np.stack([self.factor(x[:, i]) for i in range(self.D)]), axis=0)
        return vals if vals.size > 1 else vals.reshape(())

    def fourier(self, xi) -> float:
        xi = np.asarray(xi)
        return float(np.prod(self.factor_fourier(xi)))

    def integral_exact(self) -> float:
        return float(self.coeffs[0] ** self.D)

    def periodisation_residual(self, x: float, n_max: int = 200_000) -> tuple[float, float]:
        """|series - direct periodisation sum|, with the analytic tail bound."""
        ns = np.arange(-n_max, n_max + 1)
        direct = float(BandLimitedMinorant()((x + ns) / self.eps).sum())
        tail = 2.0 * self.eps**2 / (SIN1_SQ * (n_max - 1))
        return abs(float(self.factor(np.asarray([x]))[0]) - direct), tail

    def report(self, quadrature: bool = True) -> dict:
        if quadrature and self.D > 6:
            raise ValueError("quadrature verification refused for D > 6")
        rng = np.random.default_rng(7)
        pts = rng.uniform(-self.eps, self.eps, size=(200, self.D))
        inside_ok = bool((np.asarray(self(pts)) >= 1.0 - 1e-9).all())
        freqs = np.arange(self.max_freq, 4 * self.max_freq + 1)
        vanish_ok = bool(
            (self.factor_fourier(freqs)[freqs >= self.X ** (1.0 / self.D)] == 0.0).all()
        )
        out = {
            "kind": self.kind,
            "X": self.X,
            "D": self.D,
            "eps": self.eps,
            "at_zero": float(np.asarray(self(np.zeros((1, self.D))))),
            "lower_bound_ok": inside_ok,
            "integral_exact": self.integral_exact(),
            "integral_bound": 5.0**self.D / self.X,
            "integral_bound_ok": self.integral_exact() <= 5.0**self.D / self.X,
            "fourier_support_ok": vanish_ok,
        }
        if quadrature and self.D <= 2:
            if self.D == 1:
                quad = gauss_quad(lambda t: self.factor(t), 0.0, 1.0, order=800)
            else:
                nodes, weights = np.polynomial.legendre.leggauss(256)
                t = (nodes + 1.0) / 2.0
                u = weights / 2.0
                f1 = self.factor(t)
                quad = float(np.outer(u * f1, u * f1).sum())
            out["integral_quadrature"] = quad
            out["quadrature_ok"] = abs(quad - self.integral_exact()) < 1e-6
        return out


def _cos_power_integral(D: int, k: int) -> Fraction:
    """Exact integral over T^D of (cos^2 pi x_1 + ... + cos^2 pi x_D)^k.

    Via the exponential generating function of the one-dimensional moments
    c_j = C(2j, j) / 4^j:  integral = k! [t^k] E(t)^D.
    """
    c = [Fraction(math.comb(2 * j, j), 4**j) for j in range(k + 1)]
    e_series = [c[j] / math.factorial(j) for j in range(k + 1)]
    power = [Fraction(1)] + [Fraction(0)] * k
    for _ in range(D):
        new = [Fraction(0)] * (k + 1)
        for i, a in enumerate(power):
            if a == 0:
                continue
            for j in range(0, k + 1 - i):
                new[i + j] += a * e_series[j]
        power = new
    return power[k] * math.factorial(k)


@dataclass
class TorusBallMinorant(TorusCutoff):
    """Normalised minorant-style kernel: positive at 0, <= 0 off a small box,
    unit mass, nonnegative spectrum away from 0, bandwidth k in l1.

    psi(x) = 4^k (sum_i cos^2 pi x_i)^k - 4^k (D - rho^(7/3))^k, chi = psi/mass.
    At toy scale the mass can be non-positive for small k; that raises.
    """

    D: int
    rho: float
    k_override: int | None = None
    kind: str = "ball-minorant"

    def __post_init__(self):
        if not 0 < self.rho < 1:
            raise ValueError("need 0 < rho < 1")
        k = self.k_override if self.k_override is not None else int(self.rho**-3)
        if k < 1 or k > 50:
            raise ValueError(f"k={k} out of the supported range [1, 50]; pass k_override")
        self.k = k
        self.threshold = self.rho ** (7.0 / 3.0)
        exact = _cos_power_integral(self.D, self.k)
        mass = 4.0**self.k * (float(exact) - (self.D - self.threshold) ** self.k)
        if mass <= 0:
            raise ValueError(
                "non-positive mass at these toy parameters; increase k or rho"
            )
        self.mass = mass
        self._exact_cos_integral = exact

    def psi(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        s = (np.cos(np.pi * x) ** 2).sum(axis=1)
        return 4.0**self.k * (s**self.k - (self.D - self.threshold) ** self.k)

    def __call__(self, x) -> np.ndarray:
        return self.psi(x) / self.mass

    def fourier_grid(self) -> np.ndarray:
        """Exact spectrum via FFT on a (2k+1)^D grid (psi is a trig polynomial)."""
        n = 2 * self.k + 1
        if n**self.D > 4_000_000:
            raise ValueError("spectrum grid too large; use smaller D or k")
        axes = [np.arange(n) / n] * self.D
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.D)
        vals = self(grid).reshape([n] * self.D)
        return np.fft.fftn(vals) / n**self.D

    def report(self, quadrature: bool = True) -> dict:
        rng = np.random.default_rng(11)
        sign_ok = True
        checked = 0
        if self.threshold ** (1.0 / 2.0) < 0.5:  # rho^(7/6) < 1/2 so points exist
            lim = self.rho ** (7.0 / 6.0)
            while checked < 200:
                x = rng.uniform(-0.5, 0.5, size=(1, self.D))
                if np.abs(x).max() <= lim:
                    continue
                if self(x).item() > 1e-12:
                    sign_ok = False
                    break
                checked += 1
        out = {
            "kind": self.kind,
            "D": self.D,
            "rho": self.rho,
            "k": self.k,
            "positive_at_zero_ok": self(np.zeros((1, self.D))).item() > 0,
            "sign_condition_ok": sign_ok,
            "sign_points_checked": checked,
            "mass": self.mass,
            "bandwidth_l1": self.k,
        }
        spec = self.fourier_grid()
        flat = spec.reshape(-1)
        out["spectrum_ok"] = bool(
            (flat[1:].real >= -1e-9).all() and (np.abs(flat.imag) <= 1e-9).all()
        )
        out["spectrum_dc"] = float(flat[0].real)
        out["unit_mass_ok"] = abs(float(flat[0].real) - 1.0) < 1e-9
        if quadrature and self.D <= 3:
            order = 4 * self.k + 8
            nodes, weights = np.polynomial.legendre.leggauss(order)
            t = (nodes + 1.0) / 2.0
            u = weights / 2.0
            grids = np.stack(
                np.meshgrid(*([t] * self.D), indexing="ij"), axis=-1
            ).reshape(-1, self.D)
            wts = np.prod(
                np.stack(np.meshgrid(*([u] * self.D), indexing="ij"), axis=-1), axis=-1
            ).reshape(-1)
            quad = float((self(grids) * wts).sum())
            out["integral_quadrature"] = quad
            out["quadrature_ok"] = abs(quad - 1.0) < 1e-6
        return out


def tent(eta: float) -> Tent:
    return Tent(eta)


def fejer_weight(X: float) -> FejerWeight:
    return FejerWeight(X)


def interval_majorant(delta: float) -> IntervalMajorant:
    return IntervalMajorant(delta)


def band_limited_minorant() -> BandLimitedMinorant:
    return BandLimitedMinorant()


def torus_box_cutoff(X: float, D: int) -> TorusBoxCutoff:
    return TorusBoxCutoff(X, D)


def torus_ball_minorant(D: int, rho: float, k_override: int | None = None) -> TorusBallMinorant:
    return TorusBallMinorant(D, rho, k_override)
