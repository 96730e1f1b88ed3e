"""Finite-difference oracle for the half-line operators.

Every operator handled here has the form, per component ``i``,

    -u'' - 2 c1_i u'/rho + s^2 rho^2 u + c2_i u/rho^2 + shift_i s

plus (for the cone block) an inverse-power coupling between two components.
Writing ``u_i = rho^{e_i} v_i`` with a prescribed boundary exponent turns each
row into

    -v'' - 2 sigma v'/rho + s^2 rho^2 v + q_i v/rho^2 + shift_i s,
    sigma = e_i + c1_i,  q_i = c2_i - e_i^2 - (2 c1_i - 1) e_i,

which is symmetric in ``L^2(rho^{2 sigma} drho)``.  The regular parts ``v_i``
are discretized by a vertex-centred finite-volume scheme on ``rho_j = j h``:
the first cell is ``[0, 3h/2]`` with zero flux at the origin, face
coefficients are ``rho_{j+1/2}^{2 sigma}`` and cell masses are exact integrals
of the weight.  Dirichlet data closes the system at ``R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.linalg import LinAlgError, eig_banded, eigh_tridiagonal

from .errors import EigensolverError, InadmissibleDomainError
from .model_complexes import Sign


@dataclass(frozen=True)
class Grid:
    """Uniform grid ``rho_j = j h``, ``j = 1..N`` with ``N h = R``."""

    R: float = 10.0
    h: float = 5e-3

    def __post_init__(self):
        if not (self.R > 0 and self.h > 0):
            raise ValueError("R and h must be positive")
        if self.h > self.R / 100 * (1 + 1e-12):
            raise ValueError("grid too coarse: need h <= R/100")
        N = round(self.R / self.h)
        if abs(N * self.h - self.R) > 1e-9 * self.R:
            raise ValueError("R must be an integer multiple of h")

    @property
    def N(self) -> int:
        return round(self.R / self.h)

    @property
    def nodes(self) -> np.ndarray:
        return self.h * np.arange(1, self.N + 1)

    def refined(self) -> "Grid":
        return Grid(self.R, self.h / 2)


# -- operator descriptions ------------------------------------------------------


@dataclass(frozen=True)
class Component:
    """One scalar row: coefficients ``c1, c2``, shift (units of ``s``), exponent ``e``."""

    c1: float
    c2: float
    shift: float
    e: float

    @property
    def sigma(self) -> float:
        return self.e + self.c1

    @property
    def q(self) -> float:
        return self.c2 - self.e * self.e - (2 * self.c1 - 1) * self.e


@dataclass(frozen=True)
class POperator:
    """``P = H - 2 c1 rho^{-1} d/drho + c2 rho^{-2}`` with boundary exponent ``a``."""

    c1: float
    c2: float
    s: float = 1.0
    a: float | None = None

    def components(self):
        return [Component(self.c1, self.c2, 0.0, _need(self.a))], None


@dataclass(frozen=True)
class LengthOneBlock:
    """Degree-``degree`` Laplacian of the length-one model complex."""

    kappa: float
    s: float = 1.0
    sign: Sign = Sign.PLUS
    degree: int = 0
    a: float | None = None

    def components(self):
        k, eps = self.kappa, Sign.parse(self.sign).value
        if self.degree == 0:
            c2, shift = k * (k - 1), -eps * (1 + 2 * k)
        elif self.degree == 1:
            c2, shift = k * (k + 1), eps * (1 - 2 * k)
        else:
            raise ValueError("length-one complex has degrees 0 and 1")
        return [Component(0.0, c2, shift, _need(self.a))], None


@dataclass(frozen=True)
class ConeComponent:
    """Scalar block of the cone Laplacian on one component of ``k``-forms.

    ``part="first"`` is the coefficient of a form on the link of degree ``k``,
    ``part="second"`` the coefficient of ``drho ^ psi`` with ``psi`` of degree
    ``k-1``; ``lam`` is the link Laplacian eigenvalue of that form.
    """

    n: int
    k: int
    part: str
    lam: float
    s: float = 1.0
    sign: Sign = Sign.PLUS
    a: float | None = None

    def components(self):
        D = self.n - 2 * self.k
        eps = Sign.parse(self.sign).value
        if self.part == "first":
            comp = Component((D - 1) / 2, self.lam, -eps * D, _need(self.a))
        elif self.part == "second":
            comp = Component((D + 1) / 2, self.lam + D + 1, -eps * D, _need(self.a))
        else:
            raise ValueError("part must be 'first' or 'second'")
        return [comp], None


@dataclass(frozen=True)
class ConeBlock:
    """Coupled 2x2 block of ``r``-forms for a link eigenpair ``mu``.

    Rows are ``P`` (on ``alpha``) and ``Q`` (on ``drho ^ beta``) with couplings
    ``-2 mu rho^{-1}`` and ``-2 mu rho^{-3}``.  The boundary exponent ``a`` of
    the first row defaults to the positive root of ``a^2 + (n-2r) a - mu^2``;
    the second row uses ``a - 1``.
    """

    n: int
    r: int
    mu: float
    s: float = 1.0
    sign: Sign = Sign.PLUS
    a: float | None = None

    def exponent(self) -> float:
        if self.a is not None:
            return self.a
        D = self.n - 2 * self.r
        return float(max(np.roots([1.0, D, -self.mu**2]).real))

    def components(self):
        D, mu = self.n - 2 * self.r, self.mu
        eps = Sign.parse(self.sign).value
        a = self.exponent()
        first = Component((D - 1) / 2, mu * mu, -eps * D, a)
        second = Component((D + 1) / 2, mu * mu + D + 1, -eps * D, a - 1)
        # (row, col, coefficient, power of rho) before conjugation
        coupling = [(0, 1, -2 * mu, -1.0), (1, 0, -2 * mu, -3.0)]
        return [first, second], coupling


FdProblem = POperator | LengthOneBlock | ConeComponent | ConeBlock


def _need(a):
    if a is None:
        raise InadmissibleDomainError("boundary exponent a is required (boundary-exponent-missing)")
    return float(a)


# -- discretization ------------------------------------------------------------------


@dataclass
class Discretization:
    """Symmetric matrix data on the grid for a (possibly coupled) problem.

    ``diag[i]`` and ``off[i]`` hold the symmetrized tridiagonal of component
    ``i``; ``inv2`` is the 2x2 (or 1x1) matrix multiplying ``rho^{-2}``.
    """

    sigma: float
    rho: np.ndarray
    diag: list
    off: np.ndarray
    inv2: np.ndarray
    scale_inv2: np.ndarray = field(repr=False, default=None)


def _log_mass(lo, hi, p):
    # log of (hi^p - lo^p)/p for p > 0, stable for hi ≈ lo
    ratio = np.where(lo > 0, lo / hi, 0.0)
    return p * np.log(hi) + np.log(-np.expm1(p * np.log(np.where(ratio > 0, ratio, 1e-300)))) - np.log(p)


def discretize(problem, grid: Grid, s: float | None = None) -> Discretization:
    """Build the symmetrized finite-volume matrices for ``problem``."""
    comps, coupling = problem.components()
    s = problem.s if s is None else s
    sigma = comps[0].sigma
    for c in comps:
        if abs(c.sigma - sigma) > 1e-10 * (1 + abs(sigma)):
            raise ValueError("components must share sigma after factoring their exponents")
        if not c.sigma > -0.5:
            raise InadmissibleDomainError(f"sigma={c.sigma} is not > -1/2")
    h, N = grid.h, grid.N
    M = N - 1  # Dirichlet at R removes the last node
    j = np.arange(1, M + 1, dtype=float)
    rho = j * h
    p = 2 * sigma + 1
    lo = np.maximum((j - 0.5) * h, 0.0)
    lo[0] = 0.0
    hi = (j + 0.5) * h
    log_m = _log_mass(lo, hi, p)
    log_m2 = _log_mass(lo, hi, p + 2)  # ∫ rho^{2 sigma + 2} over the cell
    faces = (j + 0.5) * h  # face to the right of node j
    log_k = 2 * sigma * np.log(faces)
    # stiffness: face fluxes k (v_{j+1} - v_j)/h, divided by the cell mass
    right = np.exp(log_k - log_m) / h
    left = np.zeros(M)
    left[1:] = np.exp(log_k[:-1] - log_m[1:]) / h
    base_diag = right + left + s * s * np.exp(log_m2 - log_m)
    off = -np.exp(log_k[:-1] - 0.5 * (log_m[:-1] + log_m[1:])) / h
    ncomp = len(comps)
    inv2 = np.diag([c.q for c in comps])
    if coupling:
        for row, col, coef, power in coupling:
            pw = power + comps[col].e - comps[row].e
            if abs(pw + 2) > 1e-12:
                raise ValueError("coupling does not reduce to an inverse square")
            inv2[row, col] += coef
        if not np.allclose(inv2, inv2.T, rtol=1e-12, atol=1e-12):
            raise ValueError("coupled system is not symmetric")
    diags = [base_diag + comps[i].shift * s for i in range(ncomp)]
    return Discretization(sigma, rho, diags, off, inv2, rho**-2.0)


def discretize_and_solve(problem, grid: Grid, count: int) -> list[float]:
    """Lowest ``count`` eigenvalues of the symmetric discretization.

    Parameters
    ----------
    problem : POperator, LengthOneBlock, ConeComponent or ConeBlock
    grid : Grid
    count : int
        At most 10.

    Raises
    ------
    EigensolverError
        If LAPACK fails or returns fewer modes than requested.
    """
    if not 1 <= count <= 10:
        raise ValueError("count must lie in 1..10")
    disc = discretize(problem, grid)
    ncomp = len(disc.diag)
    try:
        if ncomp == 1:
            d = disc.diag[0] + disc.inv2[0, 0] * disc.scale_inv2
            w = eigh_tridiagonal(d, disc.off, select="i", select_range=(0, count - 1), eigvals_only=True)
        else:
            band = _banded(disc)
            w = eig_banded(band, lower=False, select="i", select_range=(0, count - 1), eigvals_only=True)
    except (LinAlgError, ValueError) as exc:
        raise EigensolverError(str(exc)) from exc
    if len(w) < count or not np.all(np.isfinite(w)):
        raise EigensolverError("eigensolver returned too few modes")
    return [float(x) for x in w]


def _banded(disc: Discretization) -> np.ndarray:
    # interleave (v1_j, v2_j); upper band storage with bandwidth 2
    M = len(disc.rho)
    n = 2 * M
    band = np.zeros((3, n))
    inv = disc.scale_inv2
    band[2, 0::2] = disc.diag[0] + disc.inv2[0, 0] * inv
    band[2, 1::2] = disc.diag[1] + disc.inv2[1, 1] * inv
    band[1, 1::2] = disc.inv2[0, 1] * inv  # (2j, 2j+1)
    band[0, 2::2] = disc.off  # (2j, 2j+2)
    band[0, 3::2] = disc.off  # (2j+1, 2j+3)
    return band


def block_matrix(disc: Discretization) -> sp.csr_matrix:
    """Interleaved sparse matrix of a discretization (``1x1`` or ``2x2`` blocks)."""
    ncomp = len(disc.diag)
    M = len(disc.rho)
    eye = sp.identity(ncomp, format="csr")
    K = sp.diags([disc.off, np.zeros(M), disc.off], [-1, 0, 1], format="csr")
    A = sp.kron(K, eye, format="csr")
    local = [sp.csr_matrix(np.diag([disc.diag[i][j] for i in range(ncomp)]) + disc.inv2 * disc.scale_inv2[j]) for j in range(M)]
    return (A + sp.block_diag(local, format="csr")).tocsr()


def verify_theta_diagonalization(n: int, r: int, mu: float, grid: Grid, sign: Sign = Sign.PLUS) -> float:
    """Relative size of the off-diagonal blocks of ``Theta^{-1} A Theta``.

    ``A`` is the discretized coupled block in the factored variables, where
    ``Theta`` acts pointwise as ``[[1, -c], [c, 1]]``.  The result is the
    infinity norm of the ``X``-``Y`` coupling over interior rows divided by
    that of the diagonal blocks.
    """
    from .cone_spectrum import theta_constants

    c, a, _ = theta_constants(n, r, mu)
    disc = discretize(ConeBlock(n, r, mu, 1.0, sign, a), grid)
    A = block_matrix(disc)
    M = len(disc.rho)
    C = np.array([[1.0, -c], [c, 1.0]])
    T = sp.kron(sp.identity(M), sp.csr_matrix(C), format="csr")
    Tinv = sp.kron(sp.identity(M), sp.csr_matrix(np.linalg.inv(C)), format="csr")
    B = (Tinv @ A @ T).tocsr()
    rows = np.arange(2, 2 * M - 2)  # drop the first and last node
    sub = B[rows]
    coo = sub.tocoo()
    cross = (coo.row + rows[0]) % 2 != coo.col % 2
    row_ids = coo.row
    off = np.zeros(len(rows))
    dia = np.zeros(len(rows))
    np.add.at(off, row_ids[cross], np.abs(coo.data[cross]))
    np.add.at(dia, row_ids[~cross], np.abs(coo.data[~cross]))
    return float(off.max() / dia.max())


# -- exact checks of the Clifford relations -------------------------------------------


class GaussLaurent:
    """Finite sum ``sum_p c_p rho^p e^{-rho^2/2}`` with real exponents ``p``.

    Differentiation and multiplication by powers of ``rho`` are exact, so
    operator identities can be checked pointwise without discretization error.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        acc: dict = {}
        for p, c in (terms.items() if isinstance(terms, dict) else terms or ()):
            key = round(float(p), 10)  # exponents drift under repeated shifts
            acc[key] = acc.get(key, 0.0) + float(c)
        self.terms = {p: c for p, c in acc.items() if c != 0}

    def __add__(self, other):
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out.get(p, 0.0) + c
        return GaussLaurent(out)

    def __sub__(self, other):
        return self + other * -1.0

    def __mul__(self, k: float):
        return GaussLaurent({p: c * k for p, c in self.terms.items()})

    __rmul__ = __mul__

    def rho(self, power: float = 1.0):
        return GaussLaurent([(p + power, c) for p, c in self.terms.items()])

    def deriv(self):
        pairs = [(p - 1, p * c) for p, c in self.terms.items()]
        pairs += [(p + 1, -c) for p, c in self.terms.items()]
        return GaussLaurent(pairs)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        acc = np.zeros_like(x)
        for p, c in self.terms.items():
            acc = acc + c * x**p
        return acc * np.exp(-(x**2) / 2)


def _d_op(f, n, r, mu):
    # d on the four coefficients (beta, alpha, drho^beta, drho^alpha)
    f0, f1, f2, f3 = f
    z = GaussLaurent()
    return [z, f0 * mu, f0.deriv(), f1.deriv() - f2 * mu]


def _delta_op(f, n, r, mu):
    f0, f1, f2, f3 = f
    z = GaussLaurent()
    out0 = f1.rho(-2) * mu - f2.deriv() - f2.rho(-1) * (n - 2 * r + 1)
    out1 = f3.deriv() * -1.0 - f3.rho(-1) * (n - 2 * r - 1)
    out2 = f3.rho(-2) * (-mu)
    return [out0, out1, out2, z]


def _D_op(f, n, r, mu):
    return [a + b for a, b in zip(_d_op(f, n, r, mu), _delta_op(f, n, r, mu))]


def _R_op(f, eps):
    f0, f1, f2, f3 = f
    return [f2.rho() * eps, f3.rho() * eps, f0.rho() * eps, f1.rho() * eps]


def verify_clifford_identities(
    n: int, r: int, mu: float, grid: Grid, sign: Sign = Sign.PLUS, seed: int = 0, trials: int = 4
) -> tuple[float, float]:
    """Residuals of ``RD + DR = ±(2k - n)`` and ``R^2 = rho^2``.

    The operators act on the block spanned by ``beta``, ``alpha = d~beta/mu``
    and their ``drho`` wedges (degrees ``r-1, r, r, r+1``).  Random test
    functions of the form ``rho^p e^{-rho^2/2}`` are mapped exactly and the
    results are sampled on the grid nodes.

    Returns
    -------
    (float, float)
        Maximum residuals relative to the sampled test functions.
    """
    eps = float(Sign.parse(sign).value)
    rng = np.random.default_rng(seed)
    x = grid.nodes
    degrees = [r - 1, r, r, r + 1]
    worst_a = worst_r = 0.0
    for _ in range(trials):
        f = []
        for _ in range(4):
            powers = rng.uniform(0, 3) + np.arange(3) * 2
            f.append(GaussLaurent(dict(zip(powers, rng.normal(size=3)))))
        RD = _R_op(_D_op(f, n, r, mu), eps)
        DR = _D_op(_R_op(f, eps), n, r, mu)
        R2 = _R_op(_R_op(f, eps), eps)
        scale = max(np.max(np.abs(fi(x))) for fi in f)
        scale_r = max(np.max(np.abs(fi.rho(2)(x))) for fi in f)
        for i in range(4):
            target = f[i] * (eps * (2 * degrees[i] - n))
            res = (RD[i] + DR[i] - target)(x)
            worst_a = max(worst_a, float(np.max(np.abs(res))) / scale)
            worst_r = max(worst_r, float(np.max(np.abs((R2[i] - f[i].rho(2))(x)))) / scale_r)
    return worst_a, worst_r


# -- closed form vs finite differences ----------------------------------------------


@dataclass(frozen=True)
class FdCheck:
    """Comparison of a closed-form ladder with the discretized block."""

    label: str
    expected: tuple
    computed: tuple

    @property
    def error(self) -> float:
        """Largest error relative to ``max(|lambda|, 1)``."""
        return max(abs(c - e) / max(abs(e), 1.0) for e, c in zip(self.expected, self.computed))

    def ok(self, tol: float = 0.02) -> bool:
        return self.error <= tol

    def to_dict(self) -> dict:
        return {"label": self.label, "expected": list(self.expected), "computed": list(self.computed), "error": self.error}


def _ladder_values(base: float, count: int) -> tuple:
    return tuple(base + 4.0 * k for k in range(count))


def check_p(c1: float, c2: float, grid: Grid = Grid(), count: int = 5) -> list[FdCheck]:
    """Every admissible branch of ``P`` at ``s = 1``."""
    from .hermite import admissible_as

    out = []
    for a, sigma in admissible_as(c1, c2):
        fd = discretize_and_solve(POperator(c1, c2, 1.0, a), grid, count)
        out.append(FdCheck(f"P(c1={c1:g},c2={c2:g},a={a + 0.0:.6g})", _ladder_values(1 + 2 * sigma, count), tuple(fd)))
    return out


def check_length_one(kappa: float, sign: Sign, ibc, grid: Grid = Grid(), count: int = 3) -> list[FdCheck]:
    """Both degrees of the length-one complex against its ladders."""
    from .model_complexes import _length_one_exponents, classify_length_one, length_one_ladders

    core = classify_length_one(kappa).core(ibc)
    exps = _length_one_exponents(core, kappa)
    out = []
    for lad in length_one_ladders(kappa, sign, ibc):
        prob = LengthOneBlock(kappa, 1.0, sign, lad.degree, exps[lad.degree])
        fd = discretize_and_solve(prob, grid, count)
        out.append(FdCheck(f"L1(kappa={kappa:g},{sign},{ibc}).{lad.provenance}", _ladder_values(lad.base, count), tuple(fd)))
    return out


def check_cone(n: int, r: int, mu: float, sign: Sign, ibc, grid: Grid = Grid(), count: int = 3) -> list[FdCheck]:
    """Ladders of a cone emitted for degree ``r`` against the cone operator.

    Covers the harmonic-class blocks of degree ``r`` (when ``r <= n-1``) and,
    for ``mu > 0`` and ``1 <= r <= n-1``, the pair blocks of an eigenpair
    ``mu`` in degree ``r``.
    """
    from .cone_spectrum import type12_core, type12_ladders, type345_ladders
    from .hermite import admissible_as
    from .model_complexes import _length_one_exponents

    sign = Sign.parse(sign)
    out = []
    if 0 <= r <= n - 1:
        kappa = (n - 2 * r - 1) / 2
        exps = _length_one_exponents(type12_core(r, n, ibc), kappa)
        for j, lad in enumerate(type12_ladders(r, 1, n, sign, ibc)):
            prob = ConeComponent(n, r + j, ("first", "second")[j], 0.0, 1.0, sign, exps[j] - kappa)
            fd = discretize_and_solve(prob, grid, count)
            out.append(FdCheck(f"cone(n={n},r={r},{sign},{ibc}).{lad.provenance}", _ladder_values(lad.base, count), tuple(fd)))
    if mu > 0 and 1 <= r <= n - 1:
        t3, t4, x, y = type345_ladders(mu, r, 1, n, sign)
        for lad, k, part in ((t3, r - 1, "first"), (t4, r + 1, "second")):
            tmp = ConeComponent(n, k, part, mu * mu, 1.0, sign, 0.0)
            comp = tmp.components()[0][0]
            a = admissible_as(comp.c1, comp.c2)[0][0]
            prob = ConeComponent(n, k, part, mu * mu, 1.0, sign, a)
            fd = discretize_and_solve(prob, grid, count)
            out.append(FdCheck(f"cone(n={n},r={r},mu={mu:g},{sign}).{lad.provenance}", _ladder_values(lad.base, count), tuple(fd)))
        both = sorted(_ladder_values(x.base, 2 * count) + _ladder_values(y.base, 2 * count))[: 2 * count]
        fd = discretize_and_solve(ConeBlock(n, r, mu, 1.0, sign), grid, 2 * count)
        out.append(FdCheck(f"cone(n={n},r={r},mu={mu:g},{sign}).T5", tuple(both), tuple(fd)))
    return out
