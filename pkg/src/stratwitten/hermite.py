"""Generalized Hermite functions and the perturbed oscillator ``P``.

The operator on the half line is::

    P = -d^2/drho^2 + s^2 rho^2 - 2 c1 rho^{-1} d/drho + c2 rho^{-2}

acting in ``L^2(R_+, rho^{2 c1} drho)``.  On the domain ``rho^a S_ev`` with
``a^2 + (2 c1 - 1) a - c2 = 0`` and ``sigma = a + c1 > -1/2`` its spectrum is
``(4k + 1 + 2 sigma) s`` with eigenfunctions ``sqrt(2) rho^a p_{2k} e^{-s rho^2/2}``,
where ``p_n`` are orthonormal for the weight ``|x|^{2 sigma} e^{-s x^2}`` on R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import mpmath
import numpy as np
from numpy.polynomial import Polynomial
from scipy.special import roots_jacobi, roots_legendre

from .errors import BasisDepthError, InadmissibleDomainError, QuadratureError

MAX_DEPTH = 64
SIGMA_MARGIN = 1e-9
RESIDUE_RTOL = 1e-12


def _quadratic_residue(c1: float, c2: float, a: float) -> float:
    return a * a + (2.0 * c1 - 1.0) * a - c2


@dataclass(frozen=True)
class PParams:
    """Parameters ``(s, c1, c2, a, sigma)`` of the model operator ``P``.

    ``sigma`` may be omitted and is then set to ``a + c1``.
    """

    s: float
    c1: float
    c2: float
    a: float
    sigma: float | None = None

    def __post_init__(self):
        if not (self.s > 0 and math.isfinite(self.s)):
            raise ValueError(f"s must be positive, got {self.s}")
        sig = self.a + self.c1
        if self.sigma is None:
            object.__setattr__(self, "sigma", sig)
        elif abs(self.sigma - sig) > 1e-12 * (1 + abs(sig)):
            raise ValueError("sigma must equal a + c1")
        res = _quadratic_residue(self.c1, self.c2, self.a)
        scale = 1.0 + abs(self.c2) + self.a * self.a
        if abs(res) > RESIDUE_RTOL * scale:
            raise InadmissibleDomainError(
                f"a={self.a} does not solve a^2+(2c1-1)a-c2=0 (residue {res:.3g})"
            )
        if not self.sigma > -0.5 + SIGMA_MARGIN:
            raise InadmissibleDomainError(f"sigma={self.sigma} is not > -1/2")

    @classmethod
    def from_coefficients(cls, c1: float, c2: float, s: float = 1.0, branch: int = 0):
        """Pick the ``branch``-th admissible exponent (largest sigma first)."""
        roots = admissible_as(c1, c2)
        if branch >= len(roots):
            raise InadmissibleDomainError(
                f"only {len(roots)} admissible exponent(s) for c1={c1}, c2={c2}"
            )
        a, sigma = roots[branch]
        return cls(s=s, c1=c1, c2=c2, a=a, sigma=sigma)

    def with_s(self, s: float) -> "PParams":
        return PParams(s=s, c1=self.c1, c2=self.c2, a=self.a, sigma=self.sigma)


def admissible_as(c1: float, c2: float) -> list[tuple[float, float]]:
    """Admissible boundary exponents of ``P``.

    Parameters
    ----------
    c1, c2 : float
        Coefficients of ``P``.

    Returns
    -------
    list of (a, sigma)
        Real roots of ``a^2 + (2c1-1)a - c2 = 0`` with ``sigma = a + c1``
        clearing ``-1/2`` by more than 1e-9, sorted by descending sigma.
        Empty when the discriminant is negative.
    """
    b = 2.0 * c1 - 1.0
    disc = b * b + 4.0 * c2
    if disc < 0:
        return []
    root = math.sqrt(disc)
    # stable pair of roots
    q = -0.5 * (b + math.copysign(root, b))
    roots = {q, -c2 / q} if q != 0 else {0.0}
    out = [(a, a + c1) for a in roots if a + c1 > -0.5 + SIGMA_MARGIN]
    return sorted(out, key=lambda t: -t[1])


def p_eigenvalue(k: int, params: PParams) -> float:
    """Eigenvalue ``(4k + 1 + 2 sigma) s`` of ``P``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return (4 * k + 1 + 2 * params.sigma) * params.s


@dataclass(frozen=True)
class HermiteBasis:
    """Orthonormal polynomials for ``|x|^{2 sigma} exp(-s x^2)`` on the line.

    Attributes
    ----------
    sigma, s : float
        Weight parameters.
    recurrence : tuple of (alpha_k, beta_k)
        Monic three-term recurrence ``p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1}``
        with ``beta_0`` the total mass.
    norms : tuple of float
        ``||p_k||`` of the monic polynomials.
    """

    sigma: float
    s: float
    recurrence: tuple
    norms: tuple

    @property
    def depth(self) -> int:
        return len(self.recurrence) - 1

    def _check(self, n: int):
        if n > self.depth:
            raise BasisDepthError(f"index {n} exceeds basis depth {self.depth}")

    def evaluate(self, n: int, x) -> np.ndarray:
        """Orthonormal ``p_n(x)``, vectorized over ``x``."""
        self._check(n)
        x = np.asarray(x, dtype=float)
        sb = [math.sqrt(b) for _, b in self.recurrence]
        prev = np.zeros_like(x)
        cur = np.full_like(x, 1.0 / sb[0])
        for k in range(n):
            alpha = self.recurrence[k][0]
            nxt = ((x - alpha) * cur - (sb[k] if k else 0.0) * prev) / sb[k + 1]
            prev, cur = cur, nxt
        return cur

    def polynomial(self, n: int) -> Polynomial:
        """Orthonormal ``p_n`` in the power basis."""
        self._check(n)
        sb = [math.sqrt(b) for _, b in self.recurrence]
        x = Polynomial([0.0, 1.0])
        prev, cur = Polynomial([0.0]), Polynomial([1.0 / sb[0]])
        for k in range(n):
            alpha = self.recurrence[k][0]
            prev, cur = cur, ((x - alpha) * cur - (sb[k] if k else 0.0) * prev) / sb[k + 1]
        return cur


def _moment(j: int, sigma, s):
    # ∫_R x^j |x|^{2σ} e^{-s x^2} dx
    if j % 2:
        return mpmath.mpf(0)
    e = j // 2 + sigma + mpmath.mpf(1) / 2
    return mpmath.gamma(e) / mpmath.power(s, e)


@lru_cache(maxsize=256)
def _recurrence(sigma: float, s: float, n: int):
    """Chebyshev's moment algorithm run in extended precision."""
    # Hankel conditioning grows roughly geometrically with n; carry enough digits
    with mpmath.workdps(40 + 2 * n):
        sig, ss = mpmath.mpf(sigma), mpmath.mpf(s)
        mom = [_moment(j, sig, ss) for j in range(2 * n)]
        alpha = [mom[1] / mom[0]]
        beta = [mom[0]]
        prev = [mpmath.mpf(0)] * (2 * n)
        cur = list(mom)
        for k in range(1, n):
            nxt = [mpmath.mpf(0)] * (2 * n)
            for l in range(k, 2 * n - k):
                nxt[l] = cur[l + 1] - alpha[k - 1] * cur[l] - beta[k - 1] * prev[l]
            alpha.append(nxt[k + 1] / nxt[k] - cur[k] / cur[k - 1])
            beta.append(nxt[k] / cur[k - 1])
            prev, cur = cur, nxt
        rec = tuple((float(a), float(b)) for a, b in zip(alpha, beta))
        norms, acc = [], mpmath.mpf(1)
        for b in beta:
            acc *= b
            norms.append(float(mpmath.sqrt(acc)))
    return rec, tuple(norms)


def hermite_basis(sigma: float, s: float, depth: int = MAX_DEPTH) -> HermiteBasis:
    """Build (or fetch from cache) the basis up to polynomial index ``depth``."""
    if depth > MAX_DEPTH:
        raise BasisDepthError(f"depth {depth} exceeds cap {MAX_DEPTH}")
    if not sigma > -0.5:
        raise InadmissibleDomainError(f"sigma={sigma} is not > -1/2")
    # round the build size up so nearby requests share one cache entry
    size = min(MAX_DEPTH, 16 * (depth // 16 + 1)) + 1
    rec, norms = _recurrence(float(sigma), float(s), size)
    return HermiteBasis(sigma=float(sigma), s=float(s), recurrence=rec[: depth + 1], norms=norms[: depth + 1])


# -- quadrature ---------------------------------------------------------------


def quadrature_radius(s: float, degree: int = 0, sigma: float = 0.0) -> float:
    """Truncation radius: ``max(10, 6/sqrt(s))`` widened past the turning point."""
    turning = math.sqrt(2 * degree + 2 * max(sigma, 0.0) + 1)
    return max(10.0, 6.0 / math.sqrt(s), (6.0 + 2.0 * turning) / math.sqrt(s))


def weighted_rule(
    sigma: float,
    s: float,
    degree: int = 0,
    breakpoints: Sequence[float] = (),
    nodes_per_panel: int = 20,
):
    """Nodes and weights for ``∫_0^R f(rho) rho^{2 sigma} drho``.

    The first panel uses Gauss-Jacobi so that the algebraic factor at the
    origin is integrated exactly; the remaining panels of width
    ``0.25/sqrt(s)`` use Gauss-Legendre.  ``breakpoints`` are added as panel
    edges so piecewise integrands converge.
    """
    R = quadrature_radius(s, degree, sigma)
    width = 0.25 / math.sqrt(s)
    edges = set(np.arange(0.0, R, width).tolist()) | {R}
    edges |= {float(b) for b in breakpoints if 0 < b < R}
    edges = np.array(sorted(edges))
    xj, wj = roots_jacobi(nodes_per_panel, 0.0, 2.0 * sigma)
    xl, wl = roots_legendre(nodes_per_panel)
    h0 = edges[1]
    nodes = [h0 * (1 + xj) / 2]
    weights = [wj * (h0 / 2) ** (2 * sigma + 1)]
    lo, hi = edges[1:-1], edges[2:]
    mid, half = (lo + hi) / 2, (hi - lo) / 2
    pts = mid[:, None] + half[:, None] * xl[None, :]
    nodes.append(pts.ravel())
    weights.append((half[:, None] * wl[None, :] * pts ** (2 * sigma)).ravel())
    return np.concatenate(nodes), np.concatenate(weights)


# -- eigenfunctions -----------------------------------------------------------


def chi_eval(k: int, rho, params: PParams) -> np.ndarray:
    """Normalized eigenfunction ``chi_k(rho) = sqrt(2) rho^a p_{2k}(rho) e^{-s rho^2/2}``.

    Normalized in ``L^2(R_+, rho^{2 c1} drho)``.
    """
    basis = hermite_basis(params.sigma, params.s, 2 * k)
    rho = np.asarray(rho, dtype=float)
    return math.sqrt(2) * rho**params.a * basis.evaluate(2 * k, rho) * np.exp(-params.s * rho**2 / 2)


def _regular_part(k: int, params: PParams):
    """Even polynomial ``q`` with ``chi_k = sqrt(2) rho^a q e^{-s rho^2/2}``."""
    return hermite_basis(params.sigma, params.s, 2 * k).polynomial(2 * k)


def gram_matrix(kmax: int, params: PParams) -> np.ndarray:
    """Gram matrix of ``chi_0 .. chi_kmax`` under the weighted quadrature."""
    x, w = weighted_rule(params.sigma, params.s, 2 * kmax)
    basis = hermite_basis(params.sigma, params.s, 2 * kmax)
    g = np.exp(-params.s * x**2 / 2)
    # chi_k rho^{-a} sampled; the rho^{2 sigma} factor sits in w
    vals = np.array([math.sqrt(2) * basis.evaluate(2 * k, x) * g for k in range(kmax + 1)])
    return (vals * w) @ vals.T


def eigen_residual(k: int, params: PParams) -> float:
    """Relative residual ``||P chi_k - lambda_k chi_k|| / ||chi_k||``.

    With ``chi = rho^a g``, ``P chi = rho^a (-g'' - 2 sigma g'/rho + s^2 rho^2 g
    + e rho^{-2} g)`` where ``e`` is the quadratic residue of ``a``.
    """
    p = params
    q = _regular_part(k, p)
    x, w = weighted_rule(p.sigma, p.s, 2 * k)
    gauss = np.exp(-p.s * x**2 / 2)
    dq, d2q = q.deriv(), q.deriv(2)
    g = q(x) * gauss
    g1 = (dq(x) - p.s * x * q(x)) * gauss
    g2 = (d2q(x) - 2 * p.s * x * dq(x) + (p.s**2 * x**2 - p.s) * q(x)) * gauss
    e = _quadratic_residue(p.c1, p.c2, p.a)
    pg = -g2 - 2 * p.sigma * g1 / x + p.s**2 * x**2 * g + e * g / x**2
    r = pg - p_eigenvalue(k, p) * g
    return math.sqrt(np.sum(w * r * r) / np.sum(w * g * g))


def concentration(
    h: Callable,
    params: PParams,
    s_list: Sequence[float],
    breakpoints: Sequence[float] = (),
) -> list[float]:
    """Values ``<h chi_0, chi_0>`` in ``L^2(rho^{2 c1})`` for each ``s``.

    Parameters
    ----------
    h : callable
        Bounded function on the half line, vectorized or scalar.
    params : PParams
        Supplies ``c1, c2, a``; its ``s`` is replaced by each entry of ``s_list``.
    s_list : sequence of float
    breakpoints : sequence of float, optional
        Discontinuities of ``h``; used as panel edges.

    Raises
    ------
    QuadratureError
        If the integral is not finite.
    """
    out = []
    for s in s_list:
        p = params.with_s(s)
        basis = hermite_basis(p.sigma, p.s, 0)
        x, w = weighted_rule(p.sigma, p.s, 0, breakpoints)
        try:
            hv = np.asarray(h(x), dtype=float)
            if hv.shape != x.shape:
                raise TypeError
        except (TypeError, ValueError):
            hv = np.array([float(h(t)) for t in x])
        val = float(np.sum(w * hv * 2 * np.exp(-p.s * x**2))) / basis.recurrence[0][1]
        if not math.isfinite(val):
            raise QuadratureError(f"non-finite concentration integral at s={s}")
        out.append(val)
    return out
